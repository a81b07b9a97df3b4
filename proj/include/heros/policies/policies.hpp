#pragma once

// Training-selection policies mapping (PoolState, k) -> Action. Value-level
// selectors work on plain performance/cost arrays so they can be driven by
// either live pool trackers or sampled values; PoolState wrappers sit on top.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "heros/core/pool.hpp"
#include "heros/rng.hpp"

namespace heros::policies {

struct PolicySpec {
  std::string kind = "zeta";  // random | perform_best | perform_worst | cheapest |
                              // expensive | cand | zeta
  double zeta = 0.01;
  double epsilon = 0.0;
  std::uint64_t seed = 1;
};

inline void validate_policy(const PolicySpec& spec) {
  static const char* kKinds[] = {"random",    "perform_best", "perform_worst", "cheapest",
                                 "expensive", "cand",         "zeta"};
  if (std::find_if(std::begin(kKinds), std::end(kKinds),
                   [&](const char* k) { return spec.kind == k; }) == std::end(kKinds))
    throw ParseError("unknown policy kind: " + spec.kind);
  if (spec.zeta < 0.0 || spec.zeta > 1.0) throw InvalidBudget("zeta must be in [0,1]");
  if (spec.epsilon < 0.0 || spec.epsilon > 1.0) throw InvalidBudget("epsilon must be in [0,1]");
}

using Mask = std::vector<std::uint8_t>;

namespace detail {

// Indices 0..M-1 ordered by key descending (or ascending), ties by lower index.
inline std::vector<std::size_t> order_by(const std::vector<double>& key, bool descending) {
  std::vector<std::size_t> idx(key.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return descending ? key[a] > key[b] : key[a] < key[b];
  });
  return idx;
}

inline Mask take_top(const std::vector<std::size_t>& order, std::size_t m, std::size_t k) {
  Mask mask(m, 0);
  for (std::size_t i = 0; i < k; ++i) mask[order[i]] = 1;
  return mask;
}

}  // namespace detail

inline Mask select_random_values(std::size_t m, std::size_t k, Rng& rng) {
  Mask mask(m, 0);
  std::vector<std::size_t> picks;
  rng.sample_without_replacement(m, k, std::back_inserter(picks));
  for (std::size_t i : picks) mask[i] = 1;
  return mask;
}

inline Mask select_perform_best_values(const std::vector<double>& perf, std::size_t k) {
  return detail::take_top(detail::order_by(perf, true), perf.size(), k);
}

inline Mask select_perform_worst_values(const std::vector<double>& perf, std::size_t k) {
  return detail::take_top(detail::order_by(perf, false), perf.size(), k);
}

inline Mask select_cheapest_values(const std::vector<double>& costs, std::size_t k) {
  return detail::take_top(detail::order_by(costs, false), costs.size(), k);
}

inline Mask select_expensive_values(const std::vector<double>& costs, std::size_t k) {
  return detail::take_top(detail::order_by(costs, true), costs.size(), k);
}

// floor(k/2) best performers, ceil(k/2) uniform from the remaining slots.
inline Mask select_cand_values(const std::vector<double>& perf, std::size_t k, Rng& rng) {
  const std::size_t m = perf.size();
  const std::size_t half = k / 2;
  Mask mask = select_perform_best_values(perf, half);
  std::vector<std::size_t> remaining;
  remaining.reserve(m - half);
  for (std::size_t i = 0; i < m; ++i)
    if (!mask[i]) remaining.push_back(i);
  std::vector<std::size_t> picks;
  rng.sample_without_replacement(remaining.size(), k - half, std::back_inserter(picks));
  for (std::size_t p : picks) mask[remaining[p]] = 1;
  return mask;
}

// k rounds: reference j is the best unselected performer; any unselected slot
// within the relative threshold that is strictly cheaper than j may replace
// it, lowest cost first (ties: higher performance, then lower index).
inline Mask select_zeta_values(const std::vector<double>& perf, const std::vector<double>& costs,
                               std::size_t k, double zeta) {
  const std::size_t m = perf.size();
  Mask mask(m, 0);
  for (std::size_t round = 0; round < k; ++round) {
    std::size_t j = m;
    for (std::size_t i = 0; i < m; ++i)
      if (!mask[i] && (j == m || perf[i] > perf[j])) j = i;
    const double threshold = (1.0 - zeta) * perf[j];
    std::size_t pick = j;
    for (std::size_t l = 0; l < m; ++l) {
      if (mask[l] || perf[l] < threshold || costs[l] >= costs[j]) continue;
      if (pick == j || costs[l] < costs[pick] ||
          (costs[l] == costs[pick] &&
           (perf[l] > perf[pick] || (perf[l] == perf[pick] && l < pick))))
        pick = l;
    }
    mask[pick] = 1;
  }
  return mask;
}

// Always consumes exactly one decision, then either explores uniformly or
// delegates to the base selector (which may use the same generator).
template <typename BaseFn>
Mask epsilon_greedy(BaseFn&& base, std::size_t m, std::size_t k, double epsilon, Rng& rng) {
  if (rng.uniform01() < epsilon) return select_random_values(m, k, rng);
  return base(rng);
}

inline Mask select_values(const PolicySpec& spec, const std::vector<double>& perf,
                          const std::vector<double>& costs, std::size_t k, Rng& rng) {
  validate_policy(spec);
  const std::size_t m = perf.size();
  if (costs.size() != m) throw ShapeMismatch("performance and cost arrays must align");
  const std::size_t budget = std::min(k, m);
  const auto base = [&](Rng& r) -> Mask {
    if (spec.kind == "random") return select_random_values(m, budget, r);
    if (spec.kind == "perform_best") return select_perform_best_values(perf, budget);
    if (spec.kind == "perform_worst") return select_perform_worst_values(perf, budget);
    if (spec.kind == "cheapest") return select_cheapest_values(costs, budget);
    if (spec.kind == "expensive") return select_expensive_values(costs, budget);
    if (spec.kind == "cand") return select_cand_values(perf, budget, r);
    return select_zeta_values(perf, costs, budget, spec.zeta);
  };
  return epsilon_greedy(base, m, budget, spec.epsilon, rng);
}

inline core::Action select_action(const PolicySpec& spec, const core::PoolState& state, Rng& rng) {
  core::Action action;
  action.mask = select_values(spec, state.tracker_values(), state.costs(), state.k, rng);
  return action;
}

// Test oracle only: enumerate every popcount-k mask and maximize the reward.
// Exponential in M, hence the hard cap; never used as a runtime policy.
inline Mask exhaustive_reward_argmax(const std::vector<double>& perf,
                                     const std::vector<double>& costs, std::size_t k) {
  const std::size_t m = perf.size();
  if (m > 12) throw InvalidBudget("exhaustive search capped at M = 12");
  const std::size_t budget = std::min(k, m);
  std::uint32_t best_bits = 0;
  double best_reward = -1.0;
  for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
    if (static_cast<std::size_t>(__builtin_popcount(bits)) != budget) continue;
    double r = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (bits & (1u << i)) r += perf[i] + (1.0 - costs[i]);
    if (r > best_reward) {
      best_reward = r;
      best_bits = bits;
    }
  }
  Mask mask(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    if (best_bits & (1u << i)) mask[i] = 1;
  return mask;
}

}  // namespace heros::policies
