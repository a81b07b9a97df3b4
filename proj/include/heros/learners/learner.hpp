#pragma once

#include <cstdint>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "heros/core/instance.hpp"
#include "heros/errors.hpp"

namespace heros::learners {

// Per-class probabilities: non-negative, sum to 1 (within 1e-6).
using ClassScores = std::vector<double>;

inline int argmax_lowest_tie(const ClassScores& s) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(s.size()); ++c)
    if (s[c] > s[best]) best = c;
  return best;
}

// Byte blob with a small versioned header; used for determinism and
// isolation checks, not for long-term storage.
class BlobWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v) { raw(&v, 4); }
  void u64(std::uint64_t v) { raw(&v, 8); }
  void i64(std::int64_t v) { raw(&v, 8); }
  void f64(double v) { raw(&v, 8); }
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    buf_.insert(buf_.end(), b, b + n);
  }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class Learner {
 public:
  virtual ~Learner() = default;

  virtual void train(const Instance& x) = 0;
  virtual ClassScores score(const Instance& x) const = 0;
  virtual std::size_t size_bytes() const = 0;
  virtual void serialize(BlobWriter& out) const = 0;
  virtual std::string kind() const = 0;

  int predict(const Instance& x) const { return argmax_lowest_tie(score(x)); }

  const StreamSchema& schema() const { return schema_; }
  int num_classes() const { return schema_.num_classes; }

  std::vector<std::uint8_t> serialized() const {
    BlobWriter w;
    w.raw("HLRN", 4);
    w.u32(1);  // format version
    serialize(w);
    return w.take();
  }

 protected:
  explicit Learner(StreamSchema schema) : schema_(std::move(schema)) {
    if (schema_.num_classes < 2) throw ShapeMismatch("learner needs >= 2 classes");
  }

  StreamSchema schema_;
};

}  // namespace heros::learners
