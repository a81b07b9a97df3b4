#pragma once

// LED digit generator: 7 segment attributes carrying the signal plus 17
// irrelevant random bits, 24 binary attributes total, 10 classes. Each
// segment bit is flipped independently with probability `noise`. Concept
// drift is modelled by swapping the first `swapped_attributes` segment
// positions with the corresponding irrelevant positions, so differently
// parameterized instances realize different concepts.

#include <array>
#include <cstdint>

#include "heros/rng.hpp"
#include "heros/streams/stream.hpp"

namespace heros::streams {

struct LedConfig {
  double noise = 0.1;
  int swapped_attributes = 0;  // 0..7
  std::uint64_t seed = 1;
};

class LedSource final : public StreamSource {
 public:
  static constexpr int kAttributes = 24;
  static constexpr int kSegments = 7;

  explicit LedSource(LedConfig cfg) : cfg_(cfg), rng_(cfg.seed) {
    if (cfg_.noise < 0.0 || cfg_.noise > 1.0) throw InvalidBudget("led noise must be in [0,1]");
    if (cfg_.swapped_attributes < 0 || cfg_.swapped_attributes > kSegments)
      throw InvalidBudget("led can swap at most 7 attributes");
    schema_.num_classes = 10;
    for (int j = 0; j < kAttributes; ++j)
      schema_.attributes.push_back({AttributeInfo::Kind::nominal, 2, "b" + std::to_string(j)});
  }

  std::optional<Instance> next() override {
    static constexpr std::array<std::array<int, kSegments>, 10> kDigits = {{
        {1, 1, 1, 0, 1, 1, 1},
        {0, 0, 1, 0, 0, 1, 0},
        {1, 0, 1, 1, 1, 0, 1},
        {1, 0, 1, 1, 0, 1, 1},
        {0, 1, 1, 1, 0, 1, 0},
        {1, 1, 0, 1, 0, 1, 1},
        {1, 1, 0, 1, 1, 1, 1},
        {1, 0, 1, 0, 0, 1, 0},
        {1, 1, 1, 1, 1, 1, 1},
        {1, 1, 1, 1, 0, 1, 1},
    }};
    const int digit = static_cast<int>(rng_.uniform_int(0, 9));
    Instance x;
    x.label = digit;
    x.features.assign(kAttributes, 0.0);
    for (int j = 0; j < kSegments; ++j) {
      int bit = kDigits[digit][j];
      if (rng_.uniform01() < cfg_.noise) bit = 1 - bit;
      x.features[j] = static_cast<double>(bit);
    }
    for (int j = kSegments; j < kAttributes; ++j)
      x.features[j] = rng_.uniform01() < 0.5 ? 0.0 : 1.0;
    for (int j = 0; j < cfg_.swapped_attributes; ++j)
      std::swap(x.features[j], x.features[kSegments + j]);
    return x;
  }

  const StreamSchema& schema() const override { return schema_; }

 private:
  LedConfig cfg_;
  Rng rng_;
  StreamSchema schema_;
};

}  // namespace heros::streams
