#pragma once

// Concept-drift composition: a chain of concept sources joined by abrupt or
// gradual transitions. A gradual transition draws from the incoming concept
// with sigmoid probability 1/(1 + e^{-4(t-p)/w}); abrupt is the w -> 0 limit
// (incoming concept for every t >= p). Transitions are applied in order, the
// latest one that fires wins, so well-separated schedules behave like nested
// pairwise drift streams.

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "heros/rng.hpp"
#include "heros/streams/stream.hpp"

namespace heros::streams {

inline double gradual_mix(double t, double p, double w) {
  if (w <= 0.0) return t >= p ? 1.0 : 0.0;
  return 1.0 / (1.0 + std::exp(-4.0 * (t - p) / w));
}

struct Transition {
  std::uint64_t position = 0;
  std::uint64_t width = 0;  // 0 = abrupt
};

class DriftSource final : public StreamSource {
 public:
  DriftSource(std::vector<std::unique_ptr<StreamSource>> concepts,
              std::vector<Transition> transitions, std::uint64_t seed)
      : concepts_(std::move(concepts)), transitions_(std::move(transitions)), rng_(seed) {
    if (concepts_.empty()) throw EmptyStream("drift schedule needs at least one concept");
    if (transitions_.size() + 1 != concepts_.size())
      throw ShapeMismatch("drift schedule needs one transition per concept change");
    for (std::size_t j = 1; j < transitions_.size(); ++j)
      if (transitions_[j].position <= transitions_[j - 1].position)
        throw InvalidBudget("drift positions must be strictly increasing");
    const StreamSchema& base = concepts_.front()->schema();
    for (const auto& c : concepts_) {
      const StreamSchema& s = c->schema();
      if (s.num_classes != base.num_classes ||
          s.num_attributes() != base.num_attributes())
        throw ShapeMismatch("drift concepts must share one schema");
      for (std::size_t a = 0; a < s.attributes.size(); ++a)
        if (s.attributes[a].kind != base.attributes[a].kind ||
            s.attributes[a].num_values != base.attributes[a].num_values)
          throw ShapeMismatch("drift concepts must share one schema");
    }
  }

  std::optional<Instance> next() override {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < transitions_.size(); ++j) {
      const auto& tr = transitions_[j];
      if (tr.width == 0) {
        if (t_ >= tr.position) idx = j + 1;
      } else if (rng_.uniform01() < gradual_mix(static_cast<double>(t_),
                                                static_cast<double>(tr.position),
                                                static_cast<double>(tr.width))) {
        idx = j + 1;
      }
    }
    ++t_;
    return concepts_[idx]->next();
  }

  const StreamSchema& schema() const override { return concepts_.front()->schema(); }

 private:
  std::vector<std::unique_ptr<StreamSource>> concepts_;
  std::vector<Transition> transitions_;
  Rng rng_;
  std::uint64_t t_ = 0;
};

}  // namespace heros::streams
