#pragma once

// Random RBF generator: weighted Gaussian centroids in the unit hypercube,
// each owning a class label. Drift moves every centroid along a fixed unit
// direction at drift_speed per instance, bouncing off the cube walls.

#include <cmath>
#include <cstdint>
#include <vector>

#include "heros/rng.hpp"
#include "heros/streams/stream.hpp"

namespace heros::streams {

struct RbfConfig {
  int centroids = 50;
  int classes = 2;
  int dims = 10;
  double drift_speed = 0.0;
  std::uint64_t seed = 1;
};

class RbfSource final : public StreamSource {
 public:
  explicit RbfSource(RbfConfig cfg) : cfg_(cfg), rng_(cfg.seed) {
    if (cfg_.centroids < 1) throw InvalidBudget("rbf needs at least one centroid");
    if (cfg_.classes < 2) throw InvalidBudget("rbf needs at least two classes");
    if (cfg_.dims < 1) throw InvalidBudget("rbf needs at least one dimension");
    if (cfg_.drift_speed < 0.0) throw InvalidBudget("rbf drift speed must be >= 0");
    schema_.num_classes = cfg_.classes;
    for (int j = 0; j < cfg_.dims; ++j)
      schema_.attributes.push_back({AttributeInfo::Kind::numeric, 0, "f" + std::to_string(j)});

    Rng model = rng_.derive(0x5bf);
    centroids_.resize(cfg_.centroids);
    double total_weight = 0.0;
    for (auto& c : centroids_) {
      c.center.resize(cfg_.dims);
      for (double& v : c.center) v = model.uniform01();
      c.label = static_cast<int>(model.uniform_int(0, cfg_.classes - 1));
      c.stddev = model.uniform01();
      c.weight = model.uniform01();
      total_weight += c.weight;
      c.direction.resize(cfg_.dims);
      double mag = 0.0;
      for (double& v : c.direction) {
        v = model.uniform(-1.0, 1.0);
        mag += v * v;
      }
      mag = std::sqrt(mag);
      if (mag > 0.0)
        for (double& v : c.direction) v /= mag;
    }
    cumulative_.reserve(centroids_.size());
    double acc = 0.0;
    for (const auto& c : centroids_) {
      acc += c.weight / total_weight;
      cumulative_.push_back(acc);
    }
    cumulative_.back() = 1.0;
  }

  std::optional<Instance> next() override {
    if (cfg_.drift_speed > 0.0) move_centroids();
    const double u = rng_.uniform01();
    std::size_t ci = 0;
    while (ci + 1 < cumulative_.size() && u > cumulative_[ci]) ++ci;
    const Centroid& c = centroids_[ci];

    Instance x;
    x.label = c.label;
    x.features.resize(cfg_.dims);
    double mag = 0.0;
    for (double& v : x.features) {
      v = rng_.uniform(-1.0, 1.0);
      mag += v * v;
    }
    mag = std::sqrt(mag);
    const double desired = rng_.normal() * c.stddev;
    const double scale = mag > 0.0 ? desired / mag : 0.0;
    for (int j = 0; j < cfg_.dims; ++j) x.features[j] = c.center[j] + x.features[j] * scale;
    return x;
  }

  const StreamSchema& schema() const override { return schema_; }

 private:
  struct Centroid {
    std::vector<double> center;
    std::vector<double> direction;
    int label = 0;
    double stddev = 1.0;
    double weight = 1.0;
  };

  void move_centroids() {
    for (auto& c : centroids_) {
      for (int j = 0; j < cfg_.dims; ++j) {
        c.center[j] += c.direction[j] * cfg_.drift_speed;
        if (c.center[j] < 0.0 || c.center[j] > 1.0) {
          c.center[j] = c.center[j] < 0.0 ? 0.0 : 1.0;
          c.direction[j] = -c.direction[j];
        }
      }
    }
  }

  RbfConfig cfg_;
  Rng rng_;
  StreamSchema schema_;
  std::vector<Centroid> centroids_;
  std::vector<double> cumulative_;
};

}  // namespace heros::streams
