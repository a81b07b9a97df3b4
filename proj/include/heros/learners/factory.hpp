#pragma once

#include <memory>
#include <string>

#include "heros/learners/hoeffding_tree.hpp"
#include "heros/learners/majority.hpp"
#include "heros/learners/mlp.hpp"

namespace heros::learners {

struct LearnerConfig {
  std::string kind = "hoeffding_tree";  // hoeffding_tree | mlp | majority
  HtConfig ht;
  MlpConfig mlp;
};

inline std::unique_ptr<Learner> make_learner(const LearnerConfig& cfg, const StreamSchema& schema) {
  if (cfg.kind == "hoeffding_tree") return std::make_unique<HoeffdingTree>(schema, cfg.ht);
  if (cfg.kind == "mlp") return std::make_unique<Mlp>(schema, cfg.mlp);
  if (cfg.kind == "majority") return std::make_unique<MajorityClass>(schema);
  throw ParseError("unknown learner kind: " + cfg.kind);
}

}  // namespace heros::learners
