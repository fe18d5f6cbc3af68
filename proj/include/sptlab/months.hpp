#pragma once

#include <string>
#include <string_view>

namespace sptlab {

// Months are integer indices: year * 12 + (month - 1). Differences between
// month indices are exact month counts.
int parse_month(std::string_view text);  // "YYYY-MM"
std::string format_month(int month);
bool looks_like_month(std::string_view text);

}  // namespace sptlab
