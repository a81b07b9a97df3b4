#pragma once

// Incremental Hoeffding tree (VFDT family). Leaves hold per-class statistics
// per attribute: Gaussian estimators with 10 candidate thresholds for numeric
// attributes, value counts for nominal ones. A leaf attempts a split every
// grace_period instances when the Hoeffding bound separates the top two
// information gains (or falls below the tie threshold). Memory is bounded:
// a split never pushes the size estimate past max_bytes; under pressure the
// least-promising leaves are deactivated (their estimator arrays dropped)
// while still updating class counts.
//
// Size accounting (documented layout, verified by tests):
//   internal node: 64 + 8 * num_children
//   leaf:          64 + 8 * C, plus when active per attribute:
//                    numeric: 16 (min/max) + 24 * C  (count/mean/m2 per class)
//                    nominal: 8 * V * C

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "heros/learners/learner.hpp"

namespace heros::learners {

struct HtConfig {
  int grace_period = 50;
  double split_confidence = 0.01;  // delta
  double tie_threshold = 0.05;
  std::size_t max_bytes = 32ull * 1024 * 1024;
};

inline double hoeffding_bound(double range, double delta, double n) {
  return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * n));
}

class HoeffdingTree final : public Learner {
 public:
  HoeffdingTree(StreamSchema schema, HtConfig cfg) : Learner(std::move(schema)), cfg_(cfg) {
    if (cfg_.grace_period < 1) throw InvalidBudget("grace period must be >= 1");
    if (cfg_.split_confidence <= 0.0 || cfg_.split_confidence >= 1.0)
      throw InvalidBudget("split confidence must be in (0,1)");
    if (cfg_.max_bytes == 0) throw InvalidBudget("max_bytes must be > 0");
    d_ = schema_.num_attributes();
    c_ = static_cast<std::size_t>(schema_.num_classes);
    nodes_.push_back(make_leaf());
    size_bytes_ = leaf_bytes(false);
    if (size_bytes_ + active_extra_bytes() <= cfg_.max_bytes) activate(0);
  }

  void train(const Instance& x) override {
    validate_instance(x, d_, static_cast<int>(c_));
    const int leaf = descend(x.features);
    Node& nd = nodes_[leaf];
    nd.class_counts[x.label] += 1.0;
    if (!nd.active) return;
    update_stats(nd, x);
    nd.since_attempt += 1;
    if (nd.since_attempt >= cfg_.grace_period) {
      nd.since_attempt = 0;
      attempt_split(leaf);
    }
  }

  ClassScores score(const Instance& x) const override {
    validate_features(x.features, d_);
    const Node& nd = nodes_[descend(x.features)];
    ClassScores s(c_);
    double total = 0.0;
    for (double v : nd.class_counts) total += v;
    for (std::size_t cc = 0; cc < c_; ++cc) s[cc] = (nd.class_counts[cc] + 1.0) / (total + c_);
    return s;
  }

  std::size_t size_bytes() const override { return size_bytes_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_bytes_estimate(bool active) const {
    return leaf_bytes(active ? active_extra_bytes() : 0);
  }

  void serialize(BlobWriter& out) const override {
    out.u8(1);  // learner tag: hoeffding tree
    out.u32(static_cast<std::uint32_t>(d_));
    out.u32(static_cast<std::uint32_t>(c_));
    out.u32(static_cast<std::uint32_t>(nodes_.size()));
    for (const Node& nd : nodes_) {
      out.u8(nd.is_leaf ? 1 : 0);
      if (!nd.is_leaf) {
        out.u32(static_cast<std::uint32_t>(nd.split_attr));
        out.f64(nd.threshold);
        out.u32(static_cast<std::uint32_t>(nd.children.size()));
        for (int ch : nd.children) out.u32(static_cast<std::uint32_t>(ch));
        continue;
      }
      out.u8(nd.active ? 1 : 0);
      out.u32(static_cast<std::uint32_t>(nd.since_attempt));
      for (double v : nd.class_counts) out.f64(v);
      if (!nd.active) continue;
      for (std::size_t a = 0; a < d_; ++a) {
        if (schema_.attributes[a].kind == AttributeInfo::Kind::numeric) {
          out.f64(nd.num_min[a]);
          out.f64(nd.num_max[a]);
          for (std::size_t cc = 0; cc < c_; ++cc) {
            const Gaussian& g = nd.gauss[a * c_ + cc];
            out.f64(g.n);
            out.f64(g.mean);
            out.f64(g.m2);
          }
        } else {
          const auto& tbl = nd.nominal[a];
          for (double v : tbl) out.f64(v);
        }
      }
    }
  }

  std::string kind() const override { return "hoeffding_tree"; }

 private:
  struct Gaussian {
    double n = 0.0, mean = 0.0, m2 = 0.0;

    void add(double v) {
      n += 1.0;
      const double delta = v - mean;
      mean += delta / n;
      m2 += delta * (v - mean);
    }

    double stddev() const { return n > 0.0 ? std::sqrt(m2 / n) : 0.0; }

    // Expected count of observations <= t under the fitted normal.
    double mass_leq(double t) const {
      if (n <= 0.0) return 0.0;
      const double sd = stddev();
      if (sd < 1e-12) return mean <= t ? n : 0.0;
      return n * phi((t - mean) / sd);
    }

    // Abramowitz & Stegun 7.1.26 — bit-stable across platforms, |err| < 1.5e-7.
    static double phi(double z) {
      const double x = z / std::numbers::sqrt2;
      const double ax = std::fabs(x);
      const double t = 1.0 / (1.0 + 0.3275911 * ax);
      const double y =
          1.0 -
          (((((1.061405429 * t - 1.453152027) * t) + 1.421413741) * t - 0.284496736) * t +
           0.254829592) *
              t * std::exp(-ax * ax);
      const double erf_ax = y;
      const double erf_x = x >= 0.0 ? erf_ax : -erf_ax;
      return 0.5 * (1.0 + erf_x);
    }
  };

  struct Node {
    bool is_leaf = true;
    // internal
    int split_attr = -1;
    double threshold = 0.0;
    std::vector<int> children;
    // leaf
    bool active = false;
    int since_attempt = 0;
    std::vector<double> class_counts;
    std::vector<Gaussian> gauss;               // d*C when active (numeric attrs)
    std::vector<double> num_min, num_max;      // d when active
    std::vector<std::vector<double>> nominal;  // per attr: V*C when active
  };

  Node make_leaf() const {
    Node nd;
    nd.class_counts.assign(c_, 0.0);
    return nd;
  }

  std::size_t leaf_bytes(std::size_t active_extra) const { return 64 + 8 * c_ + active_extra; }
  std::size_t leaf_bytes(bool active) const { return leaf_bytes(active ? active_extra_bytes() : 0); }

  std::size_t internal_bytes(std::size_t num_children) const { return 64 + 8 * num_children; }

  std::size_t active_extra_bytes() const {
    std::size_t b = 0;
    for (const auto& attr : schema_.attributes) {
      if (attr.kind == AttributeInfo::Kind::numeric)
        b += 16 + 24 * c_;
      else
        b += 8 * static_cast<std::size_t>(attr.num_values) * c_;
    }
    return b;
  }

  void activate(int idx) {
    Node& nd = nodes_[idx];
    nd.active = true;
    nd.gauss.assign(d_ * c_, Gaussian{});
    nd.num_min.assign(d_, std::numeric_limits<double>::infinity());
    nd.num_max.assign(d_, -std::numeric_limits<double>::infinity());
    nd.nominal.resize(d_);
    for (std::size_t a = 0; a < d_; ++a)
      if (schema_.attributes[a].kind == AttributeInfo::Kind::nominal)
        nd.nominal[a].assign(static_cast<std::size_t>(schema_.attributes[a].num_values) * c_, 0.0);
    size_bytes_ += active_extra_bytes();
  }

  void deactivate(int idx) {
    Node& nd = nodes_[idx];
    if (!nd.active) return;
    nd.active = false;
    nd.gauss.clear();
    nd.gauss.shrink_to_fit();
    nd.num_min.clear();
    nd.num_max.clear();
    nd.nominal.clear();
    size_bytes_ -= active_extra_bytes();
  }

  int descend(const std::vector<double>& x) const {
    int idx = 0;
    while (!nodes_[idx].is_leaf) {
      const Node& nd = nodes_[idx];
      if (schema_.attributes[nd.split_attr].kind == AttributeInfo::Kind::numeric) {
        idx = nd.children[x[nd.split_attr] <= nd.threshold ? 0 : 1];
      } else {
        auto v = static_cast<std::size_t>(x[nd.split_attr]);
        if (v >= nd.children.size()) v = 0;
        idx = nd.children[v];
      }
    }
    return idx;
  }

  void update_stats(Node& nd, const Instance& x) {
    for (std::size_t a = 0; a < d_; ++a) {
      const double v = x.features[a];
      if (schema_.attributes[a].kind == AttributeInfo::Kind::numeric) {
        nd.gauss[a * c_ + x.label].add(v);
        nd.num_min[a] = std::min(nd.num_min[a], v);
        nd.num_max[a] = std::max(nd.num_max[a], v);
      } else {
        auto vi = static_cast<std::size_t>(v);
        if (vi >= static_cast<std::size_t>(schema_.attributes[a].num_values))
          throw InvalidInstance("nominal value out of range");
        nd.nominal[a][vi * c_ + x.label] += 1.0;
      }
    }
  }

  static double entropy(const std::vector<double>& counts, double total) {
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double v : counts) {
      if (v <= 0.0) continue;
      const double p = v / total;
      h -= p * std::log2(p);
    }
    return h;
  }

  struct SplitCandidate {
    double gain = 0.0;
    int attr = -1;
    double threshold = 0.0;
    // class distributions routed to each child
    std::vector<std::vector<double>> child_counts;
  };

  SplitCandidate evaluate_attribute(const Node& nd, std::size_t a, double total,
                                    double h_total) const {
    SplitCandidate best;
    best.attr = static_cast<int>(a);
    if (schema_.attributes[a].kind == AttributeInfo::Kind::nominal) {
      const std::size_t V = static_cast<std::size_t>(schema_.attributes[a].num_values);
      std::vector<std::vector<double>> parts(V, std::vector<double>(c_, 0.0));
      double remainder = 0.0;
      for (std::size_t v = 0; v < V; ++v) {
        double nv = 0.0;
        for (std::size_t cc = 0; cc < c_; ++cc) {
          parts[v][cc] = nd.nominal[a][v * c_ + cc];
          nv += parts[v][cc];
        }
        remainder += (nv / total) * entropy(parts[v], nv);
      }
      best.gain = h_total - remainder;
      best.child_counts = std::move(parts);
      return best;
    }
    // numeric: 10 equally spaced candidates strictly inside the observed range
    const double lo = nd.num_min[a], hi = nd.num_max[a];
    if (!(hi > lo)) return best;
    for (int i = 1; i <= 10; ++i) {
      const double t = lo + (hi - lo) * static_cast<double>(i) / 11.0;
      std::vector<double> left(c_, 0.0), right(c_, 0.0);
      double nl = 0.0, nr = 0.0;
      for (std::size_t cc = 0; cc < c_; ++cc) {
        const Gaussian& g = nd.gauss[a * c_ + cc];
        const double ml = std::clamp(g.mass_leq(t), 0.0, g.n);
        left[cc] = ml;
        right[cc] = g.n - ml;
        nl += left[cc];
        nr += right[cc];
      }
      if (nl < 1e-9 || nr < 1e-9) continue;
      const double gain =
          h_total - (nl / total) * entropy(left, nl) - (nr / total) * entropy(right, nr);
      if (gain > best.gain) {
        best.gain = gain;
        best.threshold = t;
        best.child_counts = {left, right};
      }
    }
    return best;
  }

  double promise(const Node& nd) const {
    double total = 0.0, mx = 0.0;
    for (double v : nd.class_counts) {
      total += v;
      mx = std::max(mx, v);
    }
    return total - mx;  // expected majority-vote errors: error-reduction headroom
  }

  void attempt_split(int leaf_idx) {
    Node& nd = nodes_[leaf_idx];
    double total = 0.0;
    for (double v : nd.class_counts) total += v;
    if (total < 2.0) return;
    const double h_total = entropy(nd.class_counts, total);
    SplitCandidate best, second;
    for (std::size_t a = 0; a < d_; ++a) {
      SplitCandidate cand = evaluate_attribute(nd, a, total, h_total);
      if (cand.gain > best.gain) {
        second = std::move(best);
        best = std::move(cand);
      } else if (cand.gain > second.gain) {
        second = std::move(cand);
      }
    }
    if (best.attr < 0 || best.gain <= 0.0 || best.child_counts.empty()) return;
    const double range = std::log2(static_cast<double>(c_));
    const double eps = hoeffding_bound(range, cfg_.split_confidence, total);
    if (!(best.gain - second.gain > eps || eps < cfg_.tie_threshold)) return;
    execute_split(leaf_idx, best);
  }

  void execute_split(int leaf_idx, const SplitCandidate& plan) {
    const std::size_t n_children = plan.child_counts.size();
    const std::size_t extra = active_extra_bytes();
    const std::size_t released = leaf_bytes(nodes_[leaf_idx].active);
    const std::size_t base_after = internal_bytes(n_children) + n_children * leaf_bytes(false);
    // Prefer fully active children; free memory by deactivating leaves that
    // are less promising than this one, then fall back to inactive children.
    const auto projected = [&](std::size_t n_active) {
      return size_bytes_ - released + base_after + n_active * extra;
    };
    if (projected(n_children) > cfg_.max_bytes) {
      const double own = promise(nodes_[leaf_idx]);
      while (projected(n_children) > cfg_.max_bytes) {
        int victim = -1;
        double victim_promise = own;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
          if (static_cast<int>(i) == leaf_idx) continue;
          const Node& cand = nodes_[i];
          if (!cand.is_leaf || !cand.active) continue;
          const double p = promise(cand);
          if (p < victim_promise) {
            victim_promise = p;
            victim = static_cast<int>(i);
          }
        }
        if (victim < 0) break;
        deactivate(victim);
      }
    }
    std::size_t n_active = n_children;
    while (n_active > 0 && projected(n_active) > cfg_.max_bytes) --n_active;
    if (projected(n_active) > cfg_.max_bytes) return;  // not even inactive children fit

    Node parent = make_leaf();  // replacement internal node
    parent.is_leaf = false;
    parent.split_attr = plan.attr;
    parent.threshold = plan.threshold;
    parent.class_counts.clear();
    if (nodes_[leaf_idx].active) deactivate(leaf_idx);
    size_bytes_ -= leaf_bytes(false);
    size_bytes_ += internal_bytes(n_children);
    for (std::size_t ch = 0; ch < n_children; ++ch) {
      Node child = make_leaf();
      child.class_counts = plan.child_counts[ch];
      parent.children.push_back(static_cast<int>(nodes_.size()));
      nodes_.push_back(std::move(child));
      size_bytes_ += leaf_bytes(false);
      if (ch < n_active) activate(static_cast<int>(nodes_.size() - 1));
    }
    nodes_[leaf_idx] = std::move(parent);
  }

  HtConfig cfg_;
  std::size_t d_ = 0, c_ = 0;
  std::vector<Node> nodes_;
  std::size_t size_bytes_ = 0;
};

}  // namespace heros::learners
