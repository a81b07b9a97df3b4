#pragma once

// HEROS orchestration. Each step runs a fixed sequence: every slot predicts
// the incoming instance and its tracker observes the correctness (the
// evaluation prediction is fixed by the trackers *before* this update, so the
// run is strictly test-then-train); the policy then selects slots on the
// updated trackers; training and cost charging follow; the reward of the
// chosen action is computed last and logged.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "heros/ensemble/pool_builder.hpp"

namespace heros::ensemble {

struct StepRecord {
  std::uint64_t step = 0;
  int predicted = -1;
  int label = -1;
  std::string mask_hex;
  std::uint64_t charged_units = 0;
  double charged_cost = 0.0;
  double reward = 0.0;
  double ensemble_score = 0.0;
  learners::ClassScores eval_scores;  // chosen slot's scores, not logged
};

class Heros {
 public:
  Heros(const PoolSpec& spec, const StreamSchema& schema)
      : state_(build_pool(spec, schema)),
        policy_(spec.policy),
        rng_(spec.policy.seed),
        cold_start_(spec.cold_start) {
    policies::validate_policy(policy_);
  }

  // The slot whose tracker currently leads; ties and the untrained pool
  // resolve to the lowest index.
  std::size_t predicting_slot() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < state_.size(); ++i)
      if (state_.slots[i].tracker.value() > state_.slots[best].tracker.value()) best = i;
    return best;
  }

  std::pair<int, learners::ClassScores> predict(const std::vector<double>& features) const {
    const std::size_t s = predicting_slot();
    const Instance probe{features, 0};
    auto scores = state_.slots[s].learner->score(probe);
    const int cls = learners::argmax_lowest_tie(scores);
    return {cls, std::move(scores)};
  }

  StepRecord train_step(const Instance& x) {
    StepRecord rec;
    rec.step = step_;
    rec.label = x.label;

    const std::size_t eval_slot = predicting_slot();
    rec.ensemble_score = state_.slots[eval_slot].tracker.value();
    std::vector<int> preds(state_.size());
    for (std::size_t i = 0; i < state_.size(); ++i) {
      try {
        learners::ClassScores scores = state_.slots[i].learner->score(x);
        preds[i] = learners::argmax_lowest_tie(scores);
        if (i == eval_slot) rec.eval_scores = std::move(scores);
      } catch (const Error& e) {
        throw Error("slot " + std::to_string(i) + ": " + e.what());
      }
    }
    rec.predicted = preds[eval_slot];
    for (std::size_t i = 0; i < state_.size(); ++i)
      state_.slots[i].tracker.observe(preds[i] == x.label);

    core::Action action;
    if (cold_start_ && step_ == 0) {
      action.mask.assign(state_.size(), 1);
      const std::size_t saved_k = state_.k;
      state_.k = state_.size();
      rec.charged_units = core::transition(state_, action, x);
      rec.reward = core::reward(state_, action);
      state_.k = saved_k;
    } else {
      action = policies::select_action(policy_, state_, rng_);
      rec.charged_units = core::transition(state_, action, x);
      rec.reward = core::reward(state_, action);
    }
    rec.charged_cost = units_to_cost(rec.charged_units);
    rec.mask_hex = action.to_hex();
    total_charged_units_ += rec.charged_units;
    ++step_;
    return rec;
  }

  const core::PoolState& state() const { return state_; }
  const policies::PolicySpec& policy() const { return policy_; }
  std::uint64_t step_count() const { return step_; }
  std::uint64_t total_charged_units() const { return total_charged_units_; }

 private:
  core::PoolState state_;
  policies::PolicySpec policy_;
  Rng rng_;
  bool cold_start_ = false;
  std::uint64_t step_ = 0;
  std::uint64_t total_charged_units_ = 0;
};

}  // namespace heros::ensemble
