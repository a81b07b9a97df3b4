#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heros/core/instance.hpp"
#include "heros/errors.hpp"

namespace heros::streams {

// Single-consumer pull iterator. next() returns nullopt at end of stream.
class StreamSource {
 public:
  virtual ~StreamSource() = default;
  virtual std::optional<Instance> next() = 0;
  virtual const StreamSchema& schema() const = 0;
};

// Caps an unbounded source at a fixed number of instances.
class LimitSource final : public StreamSource {
 public:
  LimitSource(std::unique_ptr<StreamSource> inner, std::uint64_t length)
      : inner_(std::move(inner)), remaining_(length) {}

  std::optional<Instance> next() override {
    if (remaining_ == 0) return std::nullopt;
    --remaining_;
    return inner_->next();
  }

  const StreamSchema& schema() const override { return inner_->schema(); }

 private:
  std::unique_ptr<StreamSource> inner_;
  std::uint64_t remaining_;
};

}  // namespace heros::streams
