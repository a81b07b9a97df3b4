#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "heros/learners/learner.hpp"

namespace heros::learners {

// Majority-class baseline: ignores features entirely.
class MajorityClass final : public Learner {
 public:
  explicit MajorityClass(StreamSchema schema)
      : Learner(std::move(schema)), counts_(schema_.num_classes, 0) {}

  void train(const Instance& x) override {
    validate_instance(x, schema_.num_attributes(), schema_.num_classes);
    counts_[x.label] += 1;
  }

  ClassScores score(const Instance& x) const override {
    validate_features(x.features, schema_.num_attributes());
    const std::uint64_t total = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
    ClassScores s(counts_.size());
    if (total == 0) {
      const double u = 1.0 / static_cast<double>(counts_.size());
      for (auto& v : s) v = u;
      return s;
    }
    for (std::size_t c = 0; c < counts_.size(); ++c)
      s[c] = static_cast<double>(counts_[c]) / static_cast<double>(total);
    return s;
  }

  std::size_t size_bytes() const override { return 16 + 8 * counts_.size(); }

  void serialize(BlobWriter& out) const override {
    out.u8(0);  // learner tag: majority
    out.u32(static_cast<std::uint32_t>(counts_.size()));
    for (auto c : counts_) out.u64(c);
  }

  std::string kind() const override { return "majority"; }

 private:
  std::vector<std::uint64_t> counts_;
};

}  // namespace heros::learners
