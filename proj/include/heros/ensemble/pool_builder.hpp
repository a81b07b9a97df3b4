#pragma once

// Pool construction: a list of learner configurations with raw cost bases
// (hidden-node count for MLPs, byte budget for Hoeffding trees), normalized
// into the relative cost vector, one slot per member.

#include <cstdint>
#include <string>
#include <vector>

#include "heros/core/costs.hpp"
#include "heros/core/pool.hpp"
#include "heros/learners/factory.hpp"
#include "heros/policies/policies.hpp"

namespace heros::ensemble {

struct PoolMember {
  learners::LearnerConfig learner;
  double raw_cost = 1.0;
};

struct PoolSpec {
  std::vector<PoolMember> members;
  std::size_t k = 1;
  std::size_t tracker_window = 500;
  policies::PolicySpec policy;
  bool cold_start = false;  // train every slot on the first instance
};

inline core::PoolState build_pool(const PoolSpec& spec, const StreamSchema& schema) {
  if (spec.members.empty()) throw InvalidBudget("pool needs at least one member");
  if (spec.k < 1) throw InvalidBudget("training budget k must be >= 1");
  if (spec.k > spec.members.size())
    throw InvalidBudget("training budget k = " + std::to_string(spec.k) +
                        " exceeds pool size M = " + std::to_string(spec.members.size()));
  CostVector raw;
  raw.reserve(spec.members.size());
  for (const auto& m : spec.members) raw.push_back(m.raw_cost);
  const CostVector costs = normalize_costs(raw);

  core::PoolState state;
  state.k = spec.k;
  state.slots.reserve(spec.members.size());
  for (std::size_t i = 0; i < spec.members.size(); ++i) {
    core::ModelSlot slot;
    slot.learner = learners::make_learner(spec.members[i].learner, schema);
    slot.cost = costs[i];
    slot.cost_units = cost_to_units(costs[i]);
    slot.tracker = PerformanceTracker(spec.tracker_window);
    state.slots.push_back(std::move(slot));
  }
  return state;
}

// MLP grid: {SGD, Adam} x 5 learning rates x 4 hidden sizes = 40 members,
// padded to 50 with second-seed duplicates of every optimizer/rate pair at
// hidden size 64. Raw cost basis is the hidden-node count.
inline std::vector<PoolMember> mlp_grid(std::uint64_t seed_base = 1) {
  const learners::Optimizer opts[] = {learners::Optimizer::sgd, learners::Optimizer::adam};
  const double rates[] = {0.5, 0.05, 0.005, 0.0005, 0.00005};
  const int hiddens[] = {16, 64, 256, 1024};
  std::vector<PoolMember> members;
  members.reserve(50);
  const auto add = [&](learners::Optimizer o, double lr, int h, std::uint64_t seed) {
    PoolMember m;
    m.learner.kind = "mlp";
    m.learner.mlp.optimizer = o;
    m.learner.mlp.learning_rate = lr;
    m.learner.mlp.hidden = h;
    m.learner.mlp.seed = seed;
    m.raw_cost = static_cast<double>(h);
    members.push_back(std::move(m));
  };
  for (auto o : opts)
    for (double lr : rates)
      for (int h : hiddens) add(o, lr, h, seed_base);
  for (auto o : opts)
    for (double lr : rates) add(o, lr, 64, seed_base + 1);
  return members;
}

// Hoeffding tree grid: 10 byte budgets doubling from 2 KiB to 1 MiB. Raw cost
// basis is the byte budget.
inline std::vector<PoolMember> ht_grid(int grace_period = 50) {
  std::vector<PoolMember> members;
  members.reserve(10);
  for (int i = 0; i < 10; ++i) {
    PoolMember m;
    m.learner.kind = "hoeffding_tree";
    m.learner.ht.grace_period = grace_period;
    m.learner.ht.max_bytes = (2048ull << i);
    m.raw_cost = static_cast<double>(m.learner.ht.max_bytes);
    members.push_back(std::move(m));
  }
  return members;
}

}  // namespace heros::ensemble
