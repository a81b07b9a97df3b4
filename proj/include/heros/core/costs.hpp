#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "heros/errors.hpp"

namespace heros {

// Normalized per-model resource costs; sums to 1 within 1e-9.
using CostVector = std::vector<double>;

inline CostVector normalize_costs(const std::vector<double>& raw) {
  if (raw.empty()) throw InvalidCosts("cost basis is empty");
  double total = 0.0;
  for (double v : raw) {
    if (!std::isfinite(v) || v <= 0.0) throw InvalidCosts("cost basis entries must be finite and > 0");
    total += v;
  }
  if (!std::isfinite(total) || total <= 0.0) throw InvalidCosts("cost basis sum not normalizable");
  CostVector out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] / total;
  return out;
}

// Resource accounting runs on integer units so that conservation checks and
// run-log replays are exact; doubles cannot guarantee that across different
// summation orders. One unit is 2^-20 of the normalized budget.
inline constexpr int kCostUnitBits = 20;
inline constexpr double kCostUnit = 1.0 / static_cast<double>(1 << kCostUnitBits);

inline std::uint64_t cost_to_units(double cost) {
  return static_cast<std::uint64_t>(std::llround(cost * static_cast<double>(1 << kCostUnitBits)));
}

inline double units_to_cost(std::uint64_t units) {
  return static_cast<double>(units) * kCostUnit;
}

}  // namespace heros
