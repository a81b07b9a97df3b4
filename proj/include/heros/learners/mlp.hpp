#pragma once

// Single-hidden-layer online MLP: ReLU hidden activation, softmax output,
// cross-entropy loss, one optimizer step per instance (SGD or Adam).
// Inputs are standardized with running per-attribute mean/variance; without
// that, the larger grid learning rates diverge immediately.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "heros/learners/learner.hpp"
#include "heros/rng.hpp"

namespace heros::learners {

enum class Optimizer { sgd, adam };

struct MlpConfig {
  int hidden = 16;
  double learning_rate = 0.005;
  Optimizer optimizer = Optimizer::sgd;
  std::uint64_t seed = 1;
};

class Mlp final : public Learner {
 public:
  Mlp(StreamSchema schema, MlpConfig cfg) : Learner(std::move(schema)), cfg_(cfg) {
    if (cfg_.hidden < 1) throw InvalidBudget("mlp hidden nodes must be >= 1");
    if (cfg_.learning_rate < 0.0) throw InvalidBudget("mlp learning rate must be >= 0");
    d_ = schema_.num_attributes();
    c_ = static_cast<std::size_t>(schema_.num_classes);
    h_ = static_cast<std::size_t>(cfg_.hidden);
    w1_.resize(h_ * d_);
    b1_.assign(h_, 0.0);
    w2_.resize(c_ * h_);
    b2_.assign(c_, 0.0);
    Rng rng(cfg_.seed);
    const double lim1 = std::sqrt(6.0 / static_cast<double>(d_ + h_));
    for (auto& w : w1_) w = rng.uniform(-lim1, lim1);
    const double lim2 = std::sqrt(6.0 / static_cast<double>(h_ + c_));
    for (auto& w : w2_) w = rng.uniform(-lim2, lim2);
    if (cfg_.optimizer == Optimizer::adam) {
      const std::size_t p = param_count();
      adam_m_.assign(p, 0.0);
      adam_v_.assign(p, 0.0);
    }
    mean_.assign(d_, 0.0);
    m2_.assign(d_, 0.0);
  }

  std::size_t param_count() const { return h_ * d_ + h_ + c_ * h_ + c_; }

  void train(const Instance& x) override {
    validate_instance(x, d_, static_cast<int>(c_));
    if (cfg_.learning_rate == 0.0) return;  // zero step: leave all state alone
    seen_ += 1;
    for (std::size_t j = 0; j < d_; ++j) {
      const double delta = x.features[j] - mean_[j];
      mean_[j] += delta / static_cast<double>(seen_);
      m2_[j] += delta * (x.features[j] - mean_[j]);
    }
    std::vector<double> grad(param_count(), 0.0);
    loss_and_grad(standardize(x.features), x.label, &grad);
    apply_update(grad);
  }

  ClassScores score(const Instance& x) const override {
    validate_features(x.features, d_);
    std::vector<double> z1, a1;
    return forward(standardize(x.features), z1, a1);
  }

  std::size_t size_bytes() const override {
    return param_count() * 8 * (cfg_.optimizer == Optimizer::adam ? 3 : 1);
  }

  void serialize(BlobWriter& out) const override {
    out.u8(2);  // learner tag: mlp
    out.u32(static_cast<std::uint32_t>(d_));
    out.u32(static_cast<std::uint32_t>(h_));
    out.u32(static_cast<std::uint32_t>(c_));
    out.u64(seen_);
    out.u64(adam_t_);
    for (double v : w1_) out.f64(v);
    for (double v : b1_) out.f64(v);
    for (double v : w2_) out.f64(v);
    for (double v : b2_) out.f64(v);
    for (double v : mean_) out.f64(v);
    for (double v : m2_) out.f64(v);
    for (double v : adam_m_) out.f64(v);
    for (double v : adam_v_) out.f64(v);
  }

  std::string kind() const override { return "mlp"; }

  // Loss at the current weights for standardized features; fills the analytic
  // gradient when requested. Pure in the weights — used by the gradient check.
  double loss_and_grad(const std::vector<double>& xs, int label,
                       std::vector<double>* grad_out) const {
    std::vector<double> z1, a1;
    const ClassScores p = forward(xs, z1, a1);
    const double loss = -std::log(std::max(p[label], 1e-300));
    if (!grad_out) return loss;
    std::vector<double>& g = *grad_out;
    // dL/dz2 = p - onehot(label)
    std::vector<double> dz2(c_);
    for (std::size_t cc = 0; cc < c_; ++cc) dz2[cc] = p[cc] - (static_cast<int>(cc) == label ? 1.0 : 0.0);
    // layout: [w1 | b1 | w2 | b2]
    const std::size_t off_b1 = h_ * d_;
    const std::size_t off_w2 = off_b1 + h_;
    const std::size_t off_b2 = off_w2 + c_ * h_;
    for (std::size_t cc = 0; cc < c_; ++cc) {
      for (std::size_t j = 0; j < h_; ++j) g[off_w2 + cc * h_ + j] = dz2[cc] * a1[j];
      g[off_b2 + cc] = dz2[cc];
    }
    for (std::size_t j = 0; j < h_; ++j) {
      double da = 0.0;
      for (std::size_t cc = 0; cc < c_; ++cc) da += w2_[cc * h_ + j] * dz2[cc];
      const double dz1 = (z1[j] > 0.0) ? da : 0.0;
      for (std::size_t i = 0; i < d_; ++i) g[j * d_ + i] = dz1 * xs[i];
      g[off_b1 + j] = dz1;
    }
    return loss;
  }

  std::vector<double> standardize(const std::vector<double>& x) const {
    std::vector<double> out(d_);
    for (std::size_t j = 0; j < d_; ++j) {
      if (seen_ < 2) {
        out[j] = x[j] - mean_[j];
      } else {
        const double var = m2_[j] / static_cast<double>(seen_);
        out[j] = (var > 1e-12) ? (x[j] - mean_[j]) / std::sqrt(var) : x[j] - mean_[j];
      }
    }
    return out;
  }

  // Flat parameter access for the finite-difference check.
  double get_param(std::size_t idx) const { return *param_ptr(idx); }
  void set_param(std::size_t idx, double v) { *const_cast<double*>(param_ptr(idx)) = v; }

 private:
  ClassScores forward(const std::vector<double>& xs, std::vector<double>& z1,
                      std::vector<double>& a1) const {
    z1.resize(h_);
    a1.resize(h_);
    for (std::size_t j = 0; j < h_; ++j) {
      double s = b1_[j];
      const double* row = &w1_[j * d_];
      for (std::size_t i = 0; i < d_; ++i) s += row[i] * xs[i];
      z1[j] = s;
      a1[j] = s > 0.0 ? s : 0.0;
    }
    ClassScores p(c_);
    double zmax = -1e300;
    for (std::size_t cc = 0; cc < c_; ++cc) {
      double s = b2_[cc];
      const double* row = &w2_[cc * h_];
      for (std::size_t j = 0; j < h_; ++j) s += row[j] * a1[j];
      p[cc] = s;
      zmax = std::max(zmax, s);
    }
    double norm = 0.0;
    for (auto& v : p) {
      v = std::exp(v - zmax);
      norm += v;
    }
    for (auto& v : p) v /= norm;
    return p;
  }

  void apply_update(const std::vector<double>& g) {
    const double eta = cfg_.learning_rate;
    if (cfg_.optimizer == Optimizer::sgd) {
      for (std::size_t i = 0; i < g.size(); ++i)
        *const_cast<double*>(param_ptr(i)) -= eta * g[i];
      return;
    }
    adam_t_ += 1;
    const double b1c = 1.0 - std::pow(0.9, static_cast<double>(adam_t_));
    const double b2c = 1.0 - std::pow(0.999, static_cast<double>(adam_t_));
    for (std::size_t i = 0; i < g.size(); ++i) {
      adam_m_[i] = 0.9 * adam_m_[i] + 0.1 * g[i];
      adam_v_[i] = 0.999 * adam_v_[i] + 0.001 * g[i] * g[i];
      const double mh = adam_m_[i] / b1c;
      const double vh = adam_v_[i] / b2c;
      *const_cast<double*>(param_ptr(i)) -= eta * mh / (std::sqrt(vh) + 1e-8);
    }
  }

  const double* param_ptr(std::size_t idx) const {
    const std::size_t off_b1 = h_ * d_;
    const std::size_t off_w2 = off_b1 + h_;
    const std::size_t off_b2 = off_w2 + c_ * h_;
    if (idx < off_b1) return &w1_[idx];
    if (idx < off_w2) return &b1_[idx - off_b1];
    if (idx < off_b2) return &w2_[idx - off_w2];
    return &b2_[idx - off_b2];
  }

  MlpConfig cfg_;
  std::size_t d_ = 0, h_ = 0, c_ = 0;
  std::vector<double> w1_, b1_, w2_, b2_;
  std::vector<double> adam_m_, adam_v_;
  std::uint64_t adam_t_ = 0;
  std::vector<double> mean_, m2_;
  std::uint64_t seen_ = 0;
};

}  // namespace heros::learners
