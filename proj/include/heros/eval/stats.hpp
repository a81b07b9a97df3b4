#pragma once

// Cross-run comparison statistics: average-tie rank tables, Wilcoxon
// signed-rank tests (exact sign-assignment distribution up to n = 25 pairs,
// normal approximation with tie correction above), and Holm step-down
// multiple-comparison control.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "heros/errors.hpp"

namespace heros::eval {

// Ranks one dataset column: rank 1 = best, ties get the average rank.
inline std::vector<double> rank_values(const std::vector<double>& values, bool higher_is_better) {
  const std::size_t p = values.size();
  std::vector<std::size_t> order(p);
  for (std::size_t i = 0; i < p; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return higher_is_better ? values[a] > values[b] : values[a] < values[b];
  });
  std::vector<double> ranks(p, 0.0);
  std::size_t i = 0;
  while (i < p) {
    std::size_t j = i;
    while (j < p && values[order[j]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = avg;
    i = j;
  }
  return ranks;
}

// values[policy][dataset] -> mean rank per policy across datasets.
inline std::vector<double> rank_table(const std::vector<std::vector<double>>& values,
                                      bool higher_is_better) {
  if (values.empty()) throw ShapeMismatch("rank table needs at least one policy");
  const std::size_t p = values.size();
  const std::size_t d = values.front().size();
  if (d == 0) throw ShapeMismatch("rank table needs at least one dataset");
  for (const auto& row : values)
    if (row.size() != d) throw ShapeMismatch("rank table rows must align");
  std::vector<double> mean_ranks(p, 0.0);
  std::vector<double> column(p);
  for (std::size_t ds = 0; ds < d; ++ds) {
    for (std::size_t pol = 0; pol < p; ++pol) column[pol] = values[pol][ds];
    const std::vector<double> ranks = rank_values(column, higher_is_better);
    for (std::size_t pol = 0; pol < p; ++pol) mean_ranks[pol] += ranks[pol];
  }
  for (double& r : mean_ranks) r /= static_cast<double>(d);
  return mean_ranks;
}

// Two-sided Wilcoxon signed-rank p-value for paired samples. Zero differences
// are dropped; n = 0 surviving pairs gives p = 1.
inline double wilcoxon_signed_rank(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ShapeMismatch("paired samples must align");
  std::vector<double> abs_d;
  std::vector<int> sign;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d == 0.0) continue;
    abs_d.push_back(std::fabs(d));
    sign.push_back(d > 0.0 ? 1 : -1);
  }
  const std::size_t n = abs_d.size();
  if (n == 0) return 1.0;

  // average-tie ranks of |d|, doubled so they stay integral
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return abs_d[a] < abs_d[b]; });
  std::vector<std::uint64_t> rank2(n, 0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && abs_d[order[j]] == abs_d[order[i]]) ++j;
    const std::uint64_t doubled = static_cast<std::uint64_t>(i + 1 + j);  // 2 * average rank
    for (std::size_t t = i; t < j; ++t) rank2[order[t]] = doubled;
    i = j;
  }
  std::uint64_t w_plus2 = 0, total2 = 0;
  for (std::size_t t = 0; t < n; ++t) {
    total2 += rank2[t];
    if (sign[t] > 0) w_plus2 += rank2[t];
  }
  const std::uint64_t w_minus2 = total2 - w_plus2;
  const std::uint64_t t_stat2 = std::min(w_plus2, w_minus2);

  if (n <= 25) {
    // exact: count sign assignments with doubled rank sum <= t_stat2
    std::vector<double> count(total2 + 1, 0.0);
    count[0] = 1.0;
    for (std::size_t t = 0; t < n; ++t) {
      const std::uint64_t r = rank2[t];
      for (std::uint64_t s = total2; s + 1 > r; --s) count[s] += count[s - r];
    }
    double below = 0.0;
    for (std::uint64_t s = 0; s <= t_stat2; ++s) below += count[s];
    const double p = 2.0 * below / std::pow(2.0, static_cast<double>(n));
    return std::min(1.0, p);
  }

  // normal approximation with tie correction and continuity correction
  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  double tie_term = 0.0;
  i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && abs_d[order[j]] == abs_d[order[i]]) ++j;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  const double t_stat = static_cast<double>(t_stat2) / 2.0;
  const double z = (t_stat - mean + 0.5) / std::sqrt(var);
  const double one_sided = 0.5 * std::erfc(-z / std::sqrt(2.0));
  return std::min(1.0, 2.0 * one_sided);
}

struct PairwiseComparison {
  std::size_t a = 0, b = 0;  // policy indices
  double p = 1.0;
  double p_adjusted = 1.0;
  bool significant = false;
};

// Holm step-down over raw p-values: sorted ascending, p_(i) is tested against
// alpha / (m - i); the first failure retains all later hypotheses.
inline void holm_adjust(std::vector<PairwiseComparison>& comparisons, double alpha) {
  const std::size_t m = comparisons.size();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return comparisons[a].p < comparisons[b].p; });
  double running_adj = 0.0;
  bool rejecting = true;
  for (std::size_t i = 0; i < m; ++i) {
    PairwiseComparison& c = comparisons[order[i]];
    const double scale = static_cast<double>(m - i);
    running_adj = std::max(running_adj, std::min(1.0, scale * c.p));
    c.p_adjusted = running_adj;
    if (rejecting && c.p <= alpha / scale)
      c.significant = true;
    else
      rejecting = false;
  }
}

// All-pairs Wilcoxon over metric[policy][dataset] with Holm control.
inline std::vector<PairwiseComparison> wilcoxon_holm(
    const std::vector<std::vector<double>>& metric, double alpha = 0.05) {
  const std::size_t p = metric.size();
  std::vector<PairwiseComparison> out;
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a + 1; b < p; ++b) {
      PairwiseComparison c;
      c.a = a;
      c.b = b;
      c.p = wilcoxon_signed_rank(metric[a], metric[b]);
      out.push_back(c);
    }
  holm_adjust(out, alpha);
  return out;
}

}  // namespace heros::eval
