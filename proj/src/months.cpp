#include "sptlab/months.hpp"

#include <charconv>
#include <cstdio>

#include "sptlab/error.hpp"

namespace sptlab {

bool looks_like_month(std::string_view text) {
  if (text.size() != 7 || text[4] != '-') return false;
  for (std::size_t i = 0; i < 7; ++i) {
    if (i != 4 && (text[i] < '0' || text[i] > '9')) return false;
  }
  return true;
}

int parse_month(std::string_view text) {
  require(looks_like_month(text), ErrorKind::DataValidation,
          "expected a YYYY-MM month, got '" + std::string(text) + "'");
  int year = 0;
  int month = 0;
  std::from_chars(text.data(), text.data() + 4, year);
  std::from_chars(text.data() + 5, text.data() + 7, month);
  require(month >= 1 && month <= 12, ErrorKind::DataValidation,
          "month out of range in '" + std::string(text) + "'");
  return year * 12 + (month - 1);
}

std::string format_month(int month) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", month / 12, month % 12 + 1);
  return buf;
}

}  // namespace sptlab
