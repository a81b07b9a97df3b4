#pragma once

// Monte-Carlo verifier of the idealized selection model: M i.i.d. Beta
// performances X, M i.i.d. grid-uniform costs gamma, independent of X.
// Idealized kernels (threshold on the absolute 1 - zeta rather than a round
// maximum) are applied per trial:
//   perform-best: the k largest X
//   cand:         floor(k/2) largest X plus ceil(k/2) uniform from the rest
//   zeta:         the k cheapest among {i : X_i >= 1 - zeta}
// A zeta trial whose candidate set is smaller than k is degenerate: the whole
// candidate set is selected (per-trial means run over the selected count); an
// empty candidate set contributes no sample. Degenerate trials are counted
// and reported.
//
// Checked inequalities, each with 3-standard-error slack on the Monte-Carlo
// estimates (a check passes unless the inequality is violated beyond noise):
//   zeta_vs_cand_performance  (conditional on zeta < (1 - E(X)) / 2)
//   zeta_vs_cand_cost
//   zeta_vs_pb_gap            (performance at most zeta worse)
//   zeta_vs_pb_cost
// Limit targets for the three kernels are reported alongside with their gaps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "heros/rng.hpp"
#include "heros/theory/special_functions.hpp"

namespace heros::theory {

struct StochasticModelSpec {
  std::size_t M = 10000;
  std::size_t k = 100;
  double alpha = 2.0;
  double beta = 2.0;
  double zeta = 0.05;
  double epsilon = 0.0;  // accepted for completeness; kernels run the 1-eps branch
  std::size_t trials = 200;
  std::uint64_t seed = 1;
};

inline void validate_spec(const StochasticModelSpec& s) {
  if (!(s.alpha > 0.0) || !(s.beta > 0.0)) throw InvalidFit("beta shapes must be > 0");
  if (s.M < 1) throw InvalidBudget("M must be >= 1");
  if (s.k < 1 || s.k > s.M) throw InvalidBudget("k must be in [1, M]");
  if (s.trials < 1) throw InvalidBudget("trials must be >= 1");
  if (s.zeta < 0.0 || s.zeta > 1.0) throw InvalidBudget("zeta must be in [0,1]");
  if (s.epsilon < 0.0 || s.epsilon > 1.0) throw InvalidBudget("epsilon must be in [0,1]");
}

struct ModelSample {
  std::vector<double> x;      // performances
  std::vector<double> gamma;  // costs on the grid {1/M, ..., M/M}
};

inline ModelSample sample_model(const StochasticModelSpec& spec, Rng& rng) {
  ModelSample s;
  s.x.resize(spec.M);
  s.gamma.resize(spec.M);
  for (std::size_t i = 0; i < spec.M; ++i) s.x[i] = rng.beta(spec.alpha, spec.beta);
  const double m = static_cast<double>(spec.M);
  for (std::size_t i = 0; i < spec.M; ++i)
    s.gamma[i] = static_cast<double>(rng.uniform_int(1, static_cast<std::int64_t>(spec.M))) / m;
  return s;
}

struct KernelEstimate {
  double mean_perf = 0.0;
  double mean_cost = 0.0;
  double se_perf = 0.0;
  double se_cost = 0.0;
  std::size_t trials_used = 0;
  std::size_t degenerate_trials = 0;
  double limit_perf = 0.0;
  double limit_cost = 0.0;
};

struct AsymptoticsReport {
  StochasticModelSpec spec;
  KernelEstimate perform_best;
  KernelEstimate cand;
  KernelEstimate zeta;
  double e_x = 0.0;      // E(X)
  double e_gamma = 0.0;  // grid mean (M+1)/(2M)
};

namespace detail {

struct Welford {
  std::size_t n = 0;
  double mean = 0.0, m2 = 0.0;

  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }

  double se() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

// Indices of the k largest values, ties by lower index.
inline std::vector<std::size_t> top_k(const std::vector<double>& v, std::size_t k) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (v[a] != v[b]) return v[a] > v[b];
                      return a < b;
                    });
  idx.resize(k);
  return idx;
}

}  // namespace detail

inline AsymptoticsReport policy_asymptotics(const StochasticModelSpec& spec) {
  validate_spec(spec);
  AsymptoticsReport rep;
  rep.spec = spec;
  rep.e_x = beta_mean(spec.alpha, spec.beta);
  rep.e_gamma = (static_cast<double>(spec.M) + 1.0) / (2.0 * static_cast<double>(spec.M));

  detail::Welford pb_perf, pb_cost, cand_perf, cand_cost, z_perf, z_cost;
  std::size_t z_degenerate = 0;

  const Rng root(spec.seed);
  const std::size_t half = spec.k / 2;
  for (std::size_t trial = 0; trial < spec.trials; ++trial) {
    Rng rng = root.derive(trial);
    const ModelSample s = sample_model(spec, rng);

    const std::vector<std::size_t> best = detail::top_k(s.x, spec.k);
    double perf = 0.0, cost = 0.0;
    for (std::size_t i : best) {
      perf += s.x[i];
      cost += s.gamma[i];
    }
    pb_perf.add(perf / static_cast<double>(spec.k));
    pb_cost.add(cost / static_cast<double>(spec.k));

    // cand: the top half is a prefix of the perform-best selection
    std::vector<std::uint8_t> in_top(spec.M, 0);
    for (std::size_t i = 0; i < half; ++i) in_top[best[i]] = 1;
    std::vector<std::size_t> rest;
    rest.reserve(spec.M - half);
    for (std::size_t i = 0; i < spec.M; ++i)
      if (!in_top[i]) rest.push_back(i);
    perf = cost = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      perf += s.x[best[i]];
      cost += s.gamma[best[i]];
    }
    std::vector<std::size_t> picks;
    rng.sample_without_replacement(rest.size(), spec.k - half, std::back_inserter(picks));
    for (std::size_t p : picks) {
      perf += s.x[rest[p]];
      cost += s.gamma[rest[p]];
    }
    cand_perf.add(perf / static_cast<double>(spec.k));
    cand_cost.add(cost / static_cast<double>(spec.k));

    // zeta: cheapest k of the absolute-threshold candidate set
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < spec.M; ++i)
      if (s.x[i] >= 1.0 - spec.zeta) candidates.push_back(i);
    if (candidates.size() < spec.k) ++z_degenerate;
    if (candidates.empty()) continue;
    const std::size_t take = std::min(spec.k, candidates.size());
    std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
      if (s.gamma[a] != s.gamma[b]) return s.gamma[a] < s.gamma[b];
      return a < b;
    });
    perf = cost = 0.0;
    for (std::size_t i = 0; i < take; ++i) {
      perf += s.x[candidates[i]];
      cost += s.gamma[candidates[i]];
    }
    z_perf.add(perf / static_cast<double>(take));
    z_cost.add(cost / static_cast<double>(take));
  }

  const auto fill = [](const detail::Welford& perf, const detail::Welford& cost,
                       KernelEstimate& est) {
    est.mean_perf = perf.mean;
    est.mean_cost = cost.mean;
    est.se_perf = perf.se();
    est.se_cost = cost.se();
    est.trials_used = perf.n;
  };
  fill(pb_perf, pb_cost, rep.perform_best);
  fill(cand_perf, cand_cost, rep.cand);
  fill(z_perf, z_cost, rep.zeta);
  rep.zeta.degenerate_trials = z_degenerate;

  rep.perform_best.limit_perf = 1.0;
  rep.perform_best.limit_cost = rep.e_gamma;
  rep.cand.limit_perf = 0.5 + 0.5 * rep.e_x;
  rep.cand.limit_cost = rep.e_gamma;
  rep.zeta.limit_perf = beta_tail_mean(spec.alpha, spec.beta, 1.0 - spec.zeta);
  rep.zeta.limit_cost = 0.0;
  return rep;
}

struct TheoremCheck {
  std::string id;
  std::string statement;
  bool applicable = true;  // hypothesis holds for this spec
  bool pass = false;
  double margin = 0.0;  // slack-adjusted headroom; >= 0 iff pass
  double slack = 0.0;   // the 3-SE allowance used
};

struct TheoremReport {
  AsymptoticsReport estimates;
  std::vector<TheoremCheck> checks;

  bool all_applicable_pass() const {
    for (const auto& c : checks)
      if (c.applicable && !c.pass) return false;
    return true;
  }
};

inline TheoremReport check_theorems(const StochasticModelSpec& spec) {
  TheoremReport report;
  report.estimates = policy_asymptotics(spec);
  const AsymptoticsReport& est = report.estimates;
  const auto se2 = [](double a, double b) { return std::sqrt(a * a + b * b); };

  TheoremCheck t1;
  t1.id = "zeta_vs_cand_performance";
  t1.statement = "mean performance under zeta exceeds cand when zeta < (1 - E(X))/2";
  t1.applicable = spec.zeta < 0.5 * (1.0 - est.e_x);
  t1.slack = 3.0 * se2(est.zeta.se_perf, est.cand.se_perf);
  t1.margin = est.zeta.mean_perf - est.cand.mean_perf + t1.slack;
  t1.pass = t1.margin >= 0.0;
  report.checks.push_back(t1);

  TheoremCheck t2;
  t2.id = "zeta_vs_cand_cost";
  t2.statement = "mean cost under zeta is below cand";
  t2.slack = 3.0 * se2(est.zeta.se_cost, est.cand.se_cost);
  t2.margin = est.cand.mean_cost - est.zeta.mean_cost + t2.slack;
  t2.pass = t2.margin >= 0.0;
  report.checks.push_back(t2);

  TheoremCheck t3;
  t3.id = "zeta_vs_pb_gap";
  t3.statement = "mean performance under zeta is at most zeta below perform-best";
  t3.slack = 3.0 * se2(est.zeta.se_perf, est.perform_best.se_perf);
  t3.margin = spec.zeta - (est.perform_best.mean_perf - est.zeta.mean_perf) + t3.slack;
  t3.pass = t3.margin >= 0.0;
  report.checks.push_back(t3);

  TheoremCheck t4;
  t4.id = "zeta_vs_pb_cost";
  t4.statement = "mean cost under zeta is below perform-best";
  t4.slack = 3.0 * se2(est.zeta.se_cost, est.perform_best.se_cost);
  t4.margin = est.perform_best.mean_cost - est.zeta.mean_cost + t4.slack;
  t4.pass = t4.margin >= 0.0;
  report.checks.push_back(t4);

  return report;
}

struct BetaFit {
  double alpha = 0.0;
  double beta = 0.0;
  bool valid = false;  // false when the sample is over-dispersed for a Beta
};

// Method-of-moments Beta fit over samples in [0, 1].
inline BetaFit fit_beta(const std::vector<double>& samples) {
  if (samples.size() < 2) throw InvalidFit("need at least two samples");
  detail::Welford w;
  for (double v : samples) {
    if (!(v >= 0.0) || !(v <= 1.0)) throw InvalidFit("samples must lie in [0,1]");
    w.add(v);
  }
  const double m = w.mean;
  const double v = w.m2 / static_cast<double>(w.n);  // population variance
  if (v <= 0.0) throw InvalidFit("constant samples have no moment fit");
  if (m <= 0.0 || m >= 1.0) throw InvalidFit("sample mean at the support boundary");
  BetaFit fit;
  if (v >= m * (1.0 - m)) return fit;  // over-dispersed: flagged invalid
  const double scale = m * (1.0 - m) / v - 1.0;
  fit.alpha = m * scale;
  fit.beta = (1.0 - m) * scale;
  fit.valid = true;
  return fit;
}

}  // namespace heros::theory
