#pragma once
// Closed-form weight policies evaluated at each rebalance date.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sptlab/fgp.hpp"
#include "sptlab/market.hpp"

namespace sptlab {

namespace policy {
struct Market {};
struct Equal {};
// p = 0 is the explicit equal-weight limit.
struct Diversity {
  double p = -0.5;
};
struct Reverse {};
// Asset indices into the panel.
struct Swap {
  std::size_t i = 0;
  std::size_t j = 1;
};
// pi_i = mu_{perm[i]}.
struct Permutation {
  std::vector<std::size_t> perm;
};
struct Generated {
  std::shared_ptr<const GeneratingFunction> generator;
};
}  // namespace policy

using WeightPolicy = std::variant<policy::Market, policy::Equal, policy::Diversity, policy::Reverse,
                                  policy::Swap, policy::Permutation, policy::Generated>;

WeightVector equal_weights(std::size_t n);
WeightVector diversity_weights(std::span<const double> prices, double p);
// Asset at rank k receives the market weight ranked n - 1 - k (0-based).
WeightVector reverse_weights(const WeightVector& mu, const RankState& ranks);
WeightVector permutation_weights(const WeightVector& mu, std::span<const std::size_t> perm);
WeightVector swap_weights(const WeightVector& mu, std::size_t i, std::size_t j);

// Parses `market | equal | diversity:<p> | reverse | swap:<a>,<b> |
// permutation:[<p1>,...,<pn>] | generated:constant | generated:geometric-mean |
// generated:swap:<a>,<b>`. Asset references are names from `assets` or 1-based
// indices. Throws Usage on malformed text.
WeightPolicy parse_policy(std::string_view text, const std::vector<std::string>& assets);
// Splits a policy list on ';' and on commas that start a new policy name.
std::vector<WeightPolicy> parse_policy_list(std::string_view text,
                                            const std::vector<std::string>& assets);
std::string policy_name(const WeightPolicy& policy, const std::vector<std::string>& assets);
bool is_market(const WeightPolicy& policy);

// Evaluates a policy on the active assets at one date. `active` maps
// positions in `log_prices` to panel asset indices; the result is aligned
// with `log_prices`. Works in log space so no price level can overflow.
WeightVector apply_policy(const WeightPolicy& policy, std::span<const double> log_prices,
                          std::span<const std::size_t> active);

}  // namespace sptlab
