#include "sptlab/policies.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "sptlab/error.hpp"

namespace sptlab {
namespace {

WeightVector power_weights_from_log(std::span<const double> log_prices, double p) {
  if (p == 0.0) return equal_weights(log_prices.size());
  std::vector<double> scaled(log_prices.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = p * log_prices[i];
  return market_weights_from_log(scaled);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::size_t resolve_asset(std::string_view token, const std::vector<std::string>& assets) {
  token = trim(token);
  for (std::size_t k = 0; k < assets.size(); ++k) {
    if (assets[k] == token) return k;
  }
  std::size_t idx = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), idx);
  require(ec == std::errc() && ptr == token.data() + token.size() && idx >= 1 &&
              (assets.empty() || idx <= assets.size()),
          ErrorKind::Usage, "unknown asset '" + std::string(token) + "' in policy");
  return idx - 1;
}

std::pair<std::size_t, std::size_t> parse_pair(std::string_view args,
                                               const std::vector<std::string>& assets) {
  const auto comma = args.find(',');
  require(comma != std::string_view::npos, ErrorKind::Usage,
          "swap policy needs two assets, e.g. swap:1,3");
  const std::size_t i = resolve_asset(args.substr(0, comma), assets);
  const std::size_t j = resolve_asset(args.substr(comma + 1), assets);
  require(i != j, ErrorKind::Usage, "swap policy needs two distinct assets");
  return {i, j};
}

std::vector<std::size_t> positions_of(std::span<const std::size_t> active,
                                      std::span<const std::size_t> wanted) {
  std::vector<std::size_t> out;
  for (std::size_t w : wanted) {
    auto it = std::find(active.begin(), active.end(), w);
    require(it != active.end(), ErrorKind::InvalidInput,
            "policy refers to an asset that is not active at this date");
    out.push_back(static_cast<std::size_t>(it - active.begin()));
  }
  return out;
}

}  // namespace

WeightVector equal_weights(std::size_t n) {
  require(n >= 1, ErrorKind::InvalidInput, "equal_weights: need at least one asset");
  return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

WeightVector diversity_weights(std::span<const double> prices, double p) {
  require(std::isfinite(p), ErrorKind::InvalidInput, "diversity_weights: p must be finite");
  require(!prices.empty(), ErrorKind::InvalidInput, "diversity_weights: empty price vector");
  std::vector<double> logs(prices.size());
  for (std::size_t i = 0; i < prices.size(); ++i) {
    require(std::isfinite(prices[i]) && prices[i] > 0.0, ErrorKind::InvalidInput,
            "diversity_weights: prices must be strictly positive");
    logs[i] = std::log(prices[i]);
  }
  if (p == 1.0) return market_weights(prices);
  return power_weights_from_log(logs, p);
}

WeightVector reverse_weights(const WeightVector& mu, const RankState& ranks) {
  const std::size_t n = mu.size();
  require(ranks.size() == n, ErrorKind::InvalidInput, "reverse_weights: dimension mismatch");
  std::vector<double> pi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t mirrored = n - 1 - ranks.rank_of[i];
    pi[i] = mu[ranks.name_at[mirrored]];
  }
  return WeightVector::normalize(std::move(pi));
}

WeightVector permutation_weights(const WeightVector& mu, std::span<const std::size_t> perm) {
  const std::size_t n = mu.size();
  require(perm.size() == n, ErrorKind::InvalidInput, "permutation_weights: dimension mismatch");
  std::vector<bool> seen(n, false);
  for (std::size_t k : perm) {
    require(k < n && !seen[k], ErrorKind::InvalidInput,
            "permutation_weights: not a bijection on the active names");
    seen[k] = true;
  }
  std::vector<double> pi(n);
  for (std::size_t i = 0; i < n; ++i) pi[i] = mu[perm[i]];
  return WeightVector::normalize(std::move(pi));
}

WeightVector swap_weights(const WeightVector& mu, std::size_t i, std::size_t j) {
  const std::size_t n = mu.size();
  require(i != j, ErrorKind::InvalidInput, "swap_weights: i and j must differ");
  require(i < n && j < n, ErrorKind::InvalidInput, "swap_weights: index out of range");
  const double s = mu[i] + mu[j];
  require(s > 0.0, ErrorKind::InvalidInput, "swap_weights: pair has zero weight");
  std::vector<double> pi(n, 0.0);
  pi[i] = mu[j] / s;
  pi[j] = mu[i] / s;
  return WeightVector::normalize(std::move(pi));
}

WeightPolicy parse_policy(std::string_view text, const std::vector<std::string>& assets) {
  text = trim(text);
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view args =
      colon == std::string_view::npos ? std::string_view{} : trim(text.substr(colon + 1));
  const bool has_args = colon != std::string_view::npos;

  if (head == "market" && !has_args) return policy::Market{};
  if (head == "equal" && !has_args) return policy::Equal{};
  if (head == "reverse" && !has_args) return policy::Reverse{};
  if (head == "diversity") {
    const std::string arg(has_args ? args : "-0.5");
    char* end = nullptr;
    const double p = std::strtod(arg.c_str(), &end);
    require(!arg.empty() && *end == '\0' && std::isfinite(p), ErrorKind::Usage,
            "diversity policy needs a finite parameter, e.g. diversity:-0.5");
    return policy::Diversity{p};
  }
  if (head == "swap" && has_args) {
    const auto [i, j] = parse_pair(args, assets);
    return policy::Swap{i, j};
  }
  if (head == "permutation" && has_args) {
    require(args.size() >= 2 && args.front() == '[' && args.back() == ']', ErrorKind::Usage,
            "permutation policy takes a bracketed list, e.g. permutation:[2,3,1]");
    std::string_view body = args.substr(1, args.size() - 2);
    std::vector<std::size_t> perm;
    while (!body.empty()) {
      const auto comma = body.find(',');
      perm.push_back(resolve_asset(body.substr(0, comma), assets));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t k : perm) {
      require(k < perm.size() && !seen[k], ErrorKind::Usage, "permutation is not a bijection");
      seen[k] = true;
    }
    return policy::Permutation{std::move(perm)};
  }
  if (head == "generated" && has_args) {
    if (args == "constant") {
      return policy::Generated{std::make_shared<GeneratingFunction>(constant_generator())};
    }
    if (args == "geometric-mean") {
      return policy::Generated{std::make_shared<GeneratingFunction>(geometric_mean_generator())};
    }
    if (args.substr(0, 5) == "swap:") {
      const auto [i, j] = parse_pair(args.substr(5), assets);
      return policy::Generated{std::make_shared<GeneratingFunction>(swap_generator(i, j))};
    }
  }
  fail(ErrorKind::Usage, "unknown policy '" + std::string(text) + "'");
}

std::vector<WeightPolicy> parse_policy_list(std::string_view text,
                                            const std::vector<std::string>& assets) {
  std::vector<WeightPolicy> out;
  std::size_t begin = 0;
  int depth = 0;
  for (std::size_t k = 0; k <= text.size(); ++k) {
    const char c = k < text.size() ? text[k] : ';';
    if (c == '[') ++depth;
    if (c == ']') --depth;
    bool cut = c == ';' && depth == 0;
    if (c == ',' && depth == 0) {
      // A comma starts a new policy when a name follows, except inside the
      // argument pair of a swap whose second asset is written by name.
      std::size_t next = k + 1;
      while (next < text.size() && text[next] == ' ') ++next;
      const std::string_view item = trim(text.substr(begin, k - begin));
      const bool open_swap = item.rfind("swap:") != std::string_view::npos &&
                             item.substr(item.rfind("swap:")).find(',') == std::string_view::npos;
      cut =
          !open_swap && next < text.size() && std::isalpha(static_cast<unsigned char>(text[next]));
    }
    if (cut) {
      const std::string_view item = trim(text.substr(begin, k - begin));
      if (!item.empty()) out.push_back(parse_policy(item, assets));
      begin = k + 1;
    }
  }
  require(!out.empty(), ErrorKind::Usage, "empty policy list");
  return out;
}

std::string policy_name(const WeightPolicy& p, const std::vector<std::string>& assets) {
  auto asset = [&](std::size_t k) { return k < assets.size() ? assets[k] : std::to_string(k + 1); };
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, policy::Market>) return "market";
        if constexpr (std::is_same_v<T, policy::Equal>) return "equal";
        if constexpr (std::is_same_v<T, policy::Reverse>) return "reverse";
        if constexpr (std::is_same_v<T, policy::Diversity>) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "diversity:%g", v.p);
          return buf;
        }
        if constexpr (std::is_same_v<T, policy::Swap>) {
          return "swap:" + asset(v.i) + "," + asset(v.j);
        }
        if constexpr (std::is_same_v<T, policy::Permutation>) {
          std::string s = "permutation:[";
          for (std::size_t k = 0; k < v.perm.size(); ++k) {
            s += (k ? "," : "") + std::to_string(v.perm[k] + 1);
          }
          return s + "]";
        }
        if constexpr (std::is_same_v<T, policy::Generated>) {
          return "generated:" + v.generator->name();
        }
      },
      p);
}

bool is_market(const WeightPolicy& p) { return std::holds_alternative<policy::Market>(p); }

WeightVector apply_policy(const WeightPolicy& p, std::span<const double> log_prices,
                          std::span<const std::size_t> active) {
  require(log_prices.size() == active.size(), ErrorKind::InvalidInput,
          "apply_policy: dimension mismatch");
  require(!log_prices.empty(), ErrorKind::InvalidInput, "apply_policy: no active assets");
  return std::visit(
      [&](const auto& v) -> WeightVector {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, policy::Market>) {
          return market_weights_from_log(log_prices);
        } else if constexpr (std::is_same_v<T, policy::Equal>) {
          return equal_weights(log_prices.size());
        } else if constexpr (std::is_same_v<T, policy::Diversity>) {
          return power_weights_from_log(log_prices, v.p);
        } else if constexpr (std::is_same_v<T, policy::Reverse>) {
          return reverse_weights(market_weights_from_log(log_prices), rank_values(log_prices));
        } else if constexpr (std::is_same_v<T, policy::Swap>) {
          const std::size_t pair[2] = {v.i, v.j};
          const auto pos = positions_of(active, pair);
          return swap_weights(market_weights_from_log(log_prices), pos[0], pos[1]);
        } else if constexpr (std::is_same_v<T, policy::Permutation>) {
          require(v.perm.size() == active.size(), ErrorKind::InvalidInput,
                  "permutation policy needs every asset to be active");
          std::vector<std::size_t> local(v.perm.size());
          for (std::size_t k = 0; k < v.perm.size(); ++k) {
            const std::size_t from[1] = {active[k]};
            const std::size_t to[1] = {v.perm[active[k]]};
            local[positions_of(active, from)[0]] = positions_of(active, to)[0];
          }
          return permutation_weights(market_weights_from_log(log_prices), local);
        } else {
          return fgp_weights(*v.generator, market_weights_from_log(log_prices));
        }
      },
      p);
}

}  // namespace sptlab
