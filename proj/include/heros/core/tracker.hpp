#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "heros/errors.hpp"

namespace heros {

// Sliding-window accuracy over the last W correctness indicators.
// Reads 0.0 until the first observation arrives.
class PerformanceTracker {
 public:
  explicit PerformanceTracker(std::size_t window = 500) : window_(window), ring_(window, 0) {
    if (window == 0) throw InvalidBudget("tracker window must be >= 1");
  }

  void observe(bool correct) {
    const std::uint8_t bit = correct ? 1 : 0;
    if (count_ >= window_) sum_ -= ring_[pos_];
    ring_[pos_] = bit;
    sum_ += bit;
    pos_ = (pos_ + 1) % window_;
    if (count_ < window_) ++count_;
  }

  double value() const {
    if (count_ == 0) return 0.0;
    return static_cast<double>(sum_) / static_cast<double>(count_);
  }

  std::size_t observations() const { return count_; }
  std::size_t window() const { return window_; }

 private:
  std::size_t window_;
  std::vector<std::uint8_t> ring_;
  std::size_t pos_ = 0;
  std::size_t count_ = 0;
  std::uint64_t sum_ = 0;
};

}  // namespace heros
