#pragma once

// Streaming classification metrics. AUROC is the Mann-Whitney U statistic
// normalized by n+ * n-, computed rank-based over the collected (score,
// label) pairs with ties contributing 1/2; multi-class is macro-averaged
// one-vs-rest. A stream that never shows both a positive and a negative for
// any class has no defined AUROC: the collector returns NaN and warns once.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <utility>
#include <vector>

#include "heros/errors.hpp"
#include "heros/learners/learner.hpp"

namespace heros::eval {

inline double auroc_sentinel() { return std::numeric_limits<double>::quiet_NaN(); }

// Binary core over (positive-class score, is-positive) pairs.
inline double streaming_auroc(const std::vector<std::pair<double, int>>& pairs,
                              bool warn = true) {
  std::size_t n_pos = 0;
  for (const auto& [s, y] : pairs) n_pos += y ? 1 : 0;
  const std::size_t n_neg = pairs.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    if (warn)
      std::cerr << "warning: AUROC undefined on a single-class stream, reporting NaN\n";
    return auroc_sentinel();
  }
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pairs[a].first < pairs[b].first; });
  // average ranks over tie groups; rank sum of positives gives U
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && pairs[order[j]].first == pairs[order[i]].first) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t)
      if (pairs[order[t]].second) rank_sum_pos += avg_rank;
    i = j;
  }
  const double u = rank_sum_pos - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

// Brute-force all-pairs oracle; quadratic, for tests.
inline double auroc_all_pairs(const std::vector<std::pair<double, int>>& pairs) {
  double wins = 0.0;
  std::size_t n_pos = 0, n_neg = 0;
  for (const auto& [sp, yp] : pairs) {
    if (!yp) continue;
    ++n_pos;
    for (const auto& [sn, yn] : pairs) {
      if (yn) continue;
      if (sp > sn)
        wins += 1.0;
      else if (sp == sn)
        wins += 0.5;
    }
  }
  for (const auto& [s, y] : pairs) n_neg += y ? 0 : 1;
  if (n_pos == 0 || n_neg == 0) return auroc_sentinel();
  return wins / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

// Pools per-class (score, one-vs-rest label) pairs over a run. Binary streams
// use the class-1 score directly; multi-class macro-averages the per-class
// AUROCs that are defined.
class AurocCollector {
 public:
  explicit AurocCollector(int num_classes) : c_(num_classes) {
    if (num_classes < 2) throw ShapeMismatch("AUROC needs at least two classes");
    if (c_ > 2) per_class_.resize(static_cast<std::size_t>(c_));
  }

  void add(const learners::ClassScores& scores, int label) {
    if (static_cast<int>(scores.size()) != c_)
      throw ShapeMismatch("score vector does not match class count");
    if (c_ == 2) {
      binary_.emplace_back(scores[1], label == 1 ? 1 : 0);
      return;
    }
    for (int cls = 0; cls < c_; ++cls)
      per_class_[static_cast<std::size_t>(cls)].emplace_back(scores[cls], label == cls ? 1 : 0);
  }

  double value(bool warn = true) const {
    if (c_ == 2) return streaming_auroc(binary_, warn);
    double sum = 0.0;
    int defined = 0;
    for (const auto& pairs : per_class_) {
      const double a = streaming_auroc(pairs, false);
      if (!std::isnan(a)) {
        sum += a;
        ++defined;
      }
    }
    if (defined == 0) {
      if (warn)
        std::cerr << "warning: AUROC undefined on a single-class stream, reporting NaN\n";
      return auroc_sentinel();
    }
    return sum / defined;
  }

 private:
  int c_;
  std::vector<std::pair<double, int>> binary_;
  std::vector<std::vector<std::pair<double, int>>> per_class_;
};

}  // namespace heros::eval
