#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "heros/errors.hpp"

namespace heros {

// One labelled example. Nominal attribute values are stored as their
// 0-based value index cast to double.
struct Instance {
  std::vector<double> features;
  int label = 0;
};

struct AttributeInfo {
  enum class Kind { numeric, nominal };
  Kind kind = Kind::numeric;
  int num_values = 0;  // nominal only
  std::string name;
};

// Shape shared by a stream and every learner consuming it.
struct StreamSchema {
  std::vector<AttributeInfo> attributes;
  int num_classes = 2;

  std::size_t num_attributes() const { return attributes.size(); }

  static StreamSchema numeric(std::size_t d, int classes) {
    StreamSchema s;
    s.attributes.resize(d);
    for (std::size_t i = 0; i < d; ++i) s.attributes[i].name = "f" + std::to_string(i);
    s.num_classes = classes;
    return s;
  }
};

inline void validate_features(const std::vector<double>& features, std::size_t dims) {
  if (features.size() != dims)
    throw ShapeMismatch("instance has " + std::to_string(features.size()) +
                        " features, expected " + std::to_string(dims));
  for (double v : features)
    if (!std::isfinite(v)) throw InvalidInstance("non-finite feature value");
}

inline void validate_instance(const Instance& x, std::size_t dims, int num_classes) {
  validate_features(x.features, dims);
  if (x.label < 0 || x.label >= num_classes)
    throw InvalidInstance("label " + std::to_string(x.label) + " outside [0, " +
                          std::to_string(num_classes) + ")");
}

}  // namespace heros
