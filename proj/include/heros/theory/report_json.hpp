#pragma once

#include <string>

#include "heros/theory/stochastic.hpp"
#include <json.hpp>

namespace heros::theory {

inline nlohmann::json to_json(const KernelEstimate& e) {
  return {
      {"mean_perf", e.mean_perf},
      {"mean_cost", e.mean_cost},
      {"se_perf", e.se_perf},
      {"se_cost", e.se_cost},
      {"trials_used", e.trials_used},
      {"degenerate_trials", e.degenerate_trials},
      {"limit_perf", e.limit_perf},
      {"limit_cost", e.limit_cost},
      {"gap_perf", e.mean_perf - e.limit_perf},
      {"gap_cost", e.mean_cost - e.limit_cost},
  };
}

inline nlohmann::json to_json(const TheoremReport& r) {
  const StochasticModelSpec& s = r.estimates.spec;
  nlohmann::json j;
  j["spec"] = {{"M", s.M},         {"k", s.k},           {"alpha", s.alpha},
               {"beta", s.beta},   {"zeta", s.zeta},     {"epsilon", s.epsilon},
               {"trials", s.trials}, {"seed", s.seed}};
  j["model"] = {{"e_x", r.estimates.e_x}, {"e_gamma", r.estimates.e_gamma}};
  j["kernels"] = {{"perform_best", to_json(r.estimates.perform_best)},
                  {"cand", to_json(r.estimates.cand)},
                  {"zeta", to_json(r.estimates.zeta)}};
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"id", c.id},
                      {"statement", c.statement},
                      {"applicable", c.applicable},
                      {"pass", c.pass},
                      {"margin", c.margin},
                      {"slack", c.slack}});
  j["checks"] = checks;
  j["all_applicable_pass"] = r.all_applicable_pass();
  return j;
}

}  // namespace heros::theory
