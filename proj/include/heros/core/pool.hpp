#pragma once

// Pool-of-models MDP pieces: state, boolean-mask actions, the training
// transition, and the selection reward.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "heros/core/costs.hpp"
#include "heros/core/instance.hpp"
#include "heros/core/tracker.hpp"
#include "heros/errors.hpp"
#include "heros/learners/learner.hpp"

namespace heros::core {

using learners::Learner;

struct ModelSlot {
  std::unique_ptr<Learner> learner;
  double cost = 0.0;                 // normalized gamma_i
  std::uint64_t cost_units = 0;      // gamma_i in 2^-20 units
  std::uint64_t invested_units = 0;  // r_i, exact
  std::uint64_t train_count = 0;
  PerformanceTracker tracker;

  double invested() const { return units_to_cost(invested_units); }
};

struct Action {
  std::vector<std::uint8_t> mask;

  std::size_t popcount() const {
    std::size_t n = 0;
    for (auto b : mask) n += b ? 1 : 0;
    return n;
  }

  bool selected(std::size_t i) const { return mask[i] != 0; }

  // Hex encoding of the mask bits, slot 0 = least significant bit.
  std::string to_hex() const {
    const std::size_t nibbles = (mask.size() + 3) / 4;
    std::string out(nibbles, '0');
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!mask[i]) continue;
      const std::size_t nib = i / 4;
      char& c = out[nibbles - 1 - nib];
      int v = (c <= '9') ? c - '0' : c - 'a' + 10;
      v |= 1 << (i % 4);
      c = (v < 10) ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10);
    }
    return out;
  }
};

struct PoolState {
  std::vector<ModelSlot> slots;
  std::size_t k = 1;  // per-step training budget

  std::size_t size() const { return slots.size(); }
  std::size_t budget() const { return std::min(k, slots.size()); }

  std::vector<double> tracker_values() const {
    std::vector<double> v(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) v[i] = slots[i].tracker.value();
    return v;
  }

  std::vector<double> costs() const {
    std::vector<double> v(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) v[i] = slots[i].cost;
    return v;
  }
};

inline void validate_action(const PoolState& s, const Action& a) {
  if (a.mask.size() != s.size())
    throw ShapeMismatch("action mask length " + std::to_string(a.mask.size()) +
                        " != pool size " + std::to_string(s.size()));
  if (a.popcount() > s.budget())
    throw InvalidBudget("action selects " + std::to_string(a.popcount()) + " slots, budget is " +
                        std::to_string(s.budget()));
}

// Train the selected slots on x and charge their costs. Unselected slots are
// not touched at all. Returns the charged cost in exact units.
inline std::uint64_t transition(PoolState& s, const Action& a, const Instance& x) {
  validate_action(s, a);
  std::uint64_t charged = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!a.selected(i)) continue;
    try {
      s.slots[i].learner->train(x);
    } catch (const Error& e) {
      throw Error("slot " + std::to_string(i) + ": " + e.what());
    }
    s.slots[i].invested_units += s.slots[i].cost_units;
    s.slots[i].train_count += 1;
    charged += s.slots[i].cost_units;
  }
  return charged;
}

// R(s, a) = sum_i (L(f_i) + (1 - gamma_i)) * a_i over windowed accuracies.
inline double reward(const PoolState& s, const Action& a) {
  validate_action(s, a);
  double r = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (a.selected(i)) r += s.slots[i].tracker.value() + (1.0 - s.slots[i].cost);
  return r;
}

// Value-level variant used by tests and the exhaustive oracle.
inline double reward(const std::vector<double>& perf, const std::vector<double>& cost,
                     const std::vector<std::uint8_t>& mask) {
  if (perf.size() != cost.size() || perf.size() != mask.size())
    throw ShapeMismatch("reward inputs disagree in length");
  double r = 0.0;
  for (std::size_t i = 0; i < perf.size(); ++i)
    if (mask[i]) r += perf[i] + (1.0 - cost[i]);
  return r;
}

}  // namespace heros::core
