// Acceptance suite: eleven release criteria, one PASS/FAIL line each.
//
// Usage: acceptance [--fast | --bench]
//   --fast   everything except the full benchmark grid (criterion 7)
//   --bench  all eleven criteria, including the paper-mini grid
//
// Exit code 0 iff no criterion fails (skips do not fail). Criteria are
// self-contained and print their measurements; several check Monte-Carlo
// estimates against closed-form limits with a 3-standard-error allowance.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "heros/config/experiment.hpp"
#include "heros/eval/metrics.hpp"
#include "heros/eval/stats.hpp"
#include "heros/learners/hoeffding_tree.hpp"
#include "heros/learners/mlp.hpp"
#include "heros/policies/policies.hpp"
#include "heros/rng.hpp"
#include "heros/theory/special_functions.hpp"
#include "heros/theory/stochastic.hpp"

namespace fs = std::filesystem;
using namespace heros;

namespace {

struct Criterion {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok  : " : "FAIL: ") + what);
  }
  void info(const std::string& what) { notes.push_back("note: " + what); }
};

std::string fmt(double v, int digits = 5) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HEROS_CLI_PATH) + " " + args;
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

double se2(double a, double b) { return std::sqrt(a * a + b * b); }

fs::path g_tmp;

// --- criterion 1+2 share one verifier invocation shape --------------------

nlohmann::json pinned_theory_report(Criterion& c, const std::string& tag, double* wall_out) {
  const fs::path out = g_tmp / ("theory_" + tag + ".json");
  const auto t0 = std::chrono::steady_clock::now();
  const int rc = run_cli("theory --alpha 2 --beta 2 --M 10000 --k 100 --trials 200 --zeta 0.05"
                         " --seed 1 --out " + out.string() + " >/dev/null 2>&1");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (wall_out) *wall_out = secs;
  c.check(rc == 0 || rc == 1, "cmd_theory completed (exit " + std::to_string(rc) + ")");
  return nlohmann::json::parse(slurp(out));
}

void criterion1(Criterion& c) {
  double wall = 0.0;
  const auto rep = pinned_theory_report(c, "c1", &wall);
  const double perf = rep["kernels"]["cand"]["mean_perf"].get<double>();
  const double cost = rep["kernels"]["cand"]["mean_cost"].get<double>();
  const double e_gamma = rep["model"]["e_gamma"].get<double>();
  c.check(std::abs(perf - 0.75) <= 0.01,
          "cand mean performance " + fmt(perf) + " within 0.75 +/- 0.01");
  c.check(std::abs(cost - e_gamma) <= 0.01,
          "cand mean cost " + fmt(cost) + " within E(gamma) " + fmt(e_gamma) + " +/- 0.01");
  c.check(wall < 10.0, "verifier wall time " + fmt(wall, 3) + "s < 10s");
  c.info("at M=1e4 the top-k/2 order statistics average well below 1 (the limit's first "
         "term), so the finite-M cand mean sits near 0.735; the limit-regime line under "
         "criterion 2 shows the same estimator within 0.005 of 0.75 at M=1e6");
}

void criterion2(Criterion& c) {
  const auto rep = pinned_theory_report(c, "c2", nullptr);
  const auto& z = rep["kernels"]["zeta"];
  const auto& cand = rep["kernels"]["cand"];
  const auto& pb = rep["kernels"]["perform_best"];
  const double z_perf = z["mean_perf"].get<double>();
  const double z_cost = z["mean_cost"].get<double>();
  const double limit = z["limit_perf"].get<double>();

  c.check(z_perf >= 0.95, "zeta mean performance " + fmt(z_perf) + " >= 0.95");
  c.check(z_perf >= limit - 3.0 * z["se_perf"].get<double>(),
          "zeta mean performance within 3 SE below E(X | X >= 0.95) = " + fmt(limit, 7));
  c.check(z_cost < 0.05, "zeta mean cost " + fmt(z_cost) + " < 0.05");
  const double slack_cand = 3.0 * se2(z["se_cost"].get<double>(), cand["se_cost"].get<double>());
  c.check(z_cost + slack_cand < cand["mean_cost"].get<double>(),
          "zeta mean cost below cand cost " + fmt(cand["mean_cost"].get<double>()) +
              " at 3 SE");
  const double slack_pb = 3.0 * se2(z["se_cost"].get<double>(), pb["se_cost"].get<double>());
  c.check(z_cost + slack_pb < pb["mean_cost"].get<double>(),
          "zeta mean cost below perform-best cost " + fmt(pb["mean_cost"].get<double>()) +
              " at 3 SE");
  c.info("degenerate zeta trials at the pinned scale: " +
         std::to_string(z["degenerate_trials"].get<std::size_t>()) + "/200 (P(X >= 0.95) = "
         "0.00725 under Beta(2,2), so M=1e4 yields ~72.5 candidates on average, fewer than "
         "k=100: every trial selects the whole candidate set and pays its mean cost ~0.5)");

  theory::StochasticModelSpec big;
  big.M = 1000000;
  big.k = 100;
  big.trials = 20;
  big.zeta = 0.05;
  big.seed = 1;
  const auto lim = theory::policy_asymptotics(big);
  c.info("limit regime (M=1e6, 20 trials): zeta perf " + fmt(lim.zeta.mean_perf) + ", cost " +
         fmt(lim.zeta.mean_cost) + "; cand perf " + fmt(lim.cand.mean_perf) + ", cost " +
         fmt(lim.cand.mean_cost) + "; perform-best cost " + fmt(lim.perform_best.mean_cost) +
         "; every clause above holds there, including cost < 0.05");
}

void criterion3(Criterion& c) {
  for (double zeta : {0.01, 0.05, 0.1, 0.2, 0.3}) {
    theory::StochasticModelSpec spec;
    spec.M = 10000;
    spec.k = 100;
    spec.trials = 200;
    spec.zeta = zeta;
    spec.seed = 1;
    const auto rep = theory::check_theorems(spec);
    const auto& t1 = rep.checks.at(0);
    const bool expect_applicable = zeta < 0.25;
    c.check(t1.id == "zeta_vs_cand_performance" && t1.applicable == expect_applicable,
            "zeta=" + fmt(zeta) + " hypothesis flagged " +
                (t1.applicable ? "applicable" : "not applicable") + " (threshold (1-E(X))/2 = 0.25)");
    if (!expect_applicable) continue;
    const auto& est = rep.estimates;
    const double diff = est.zeta.mean_perf - est.cand.mean_perf;
    const double se = se2(est.zeta.se_perf, est.cand.se_perf);
    c.check(diff > 3.0 * se, "zeta=" + fmt(zeta) + " performance exceeds cand by " + fmt(diff) +
                                 " (> 3 SE = " + fmt(3.0 * se) + ")");
  }
}

void criterion4(Criterion& c) {
  for (double zeta : {0.01, 0.05}) {
    theory::StochasticModelSpec spec;
    spec.M = 1000000;
    spec.k = 100;
    spec.trials = 20;
    spec.zeta = zeta;
    spec.seed = 1;
    const auto est = theory::policy_asymptotics(spec);
    const double gap = std::abs(est.zeta.mean_perf - est.perform_best.mean_perf);
    const double bound = zeta + 3.0 * se2(est.zeta.se_perf, est.perform_best.se_perf);
    c.check(gap <= bound, "zeta=" + fmt(zeta) + ": |perf gap to perform-best| = " + fmt(gap) +
                              " <= zeta + 3 SE = " + fmt(bound));
  }
  for (double zeta : {0.01, 0.05}) {
    theory::StochasticModelSpec spec;
    spec.M = 10000;
    spec.k = 100;
    spec.trials = 200;
    spec.zeta = zeta;
    spec.seed = 1;
    const auto est = theory::policy_asymptotics(spec);
    const double gap = std::abs(est.zeta.mean_perf - est.perform_best.mean_perf);
    c.info("desk scale M=1e4, zeta=" + fmt(zeta) + ": gap " + fmt(gap) +
           (gap <= zeta ? " (within zeta even at finite M)"
                        : " (exceeds zeta at finite M: with ~" +
                              fmt(10000 * (1.0 - theory::reg_inc_beta(2, 2, 1.0 - zeta)), 3) +
                              " expected candidates the kernel is candidate-starved, so the "
                              "limit statement is checked at M=1e6 above)"));
  }
}

// Independent transcription of the round-by-round selection: the reference j
// is the best unselected performer; replacements need perf >= (1-zeta)*perf[j]
// and cost strictly below j's; cheapest wins, ties by higher perf then lower
// index; j stands when nobody qualifies.
policies::Mask zeta_trace(const std::vector<double>& perf, const std::vector<double>& costs,
                          std::size_t k, double zeta) {
  const std::size_t m = perf.size();
  policies::Mask mask(m, 0);
  for (std::size_t round = 0; round < std::min(k, m); ++round) {
    std::size_t j = m;
    for (std::size_t i = 0; i < m; ++i)
      if (!mask[i] && (j == m || perf[i] > perf[j])) j = i;
    const double threshold = (1.0 - zeta) * perf[j];
    std::size_t pick = j;
    for (std::size_t l = 0; l < m; ++l) {
      if (mask[l] || l == j) continue;
      if (perf[l] < threshold || costs[l] >= costs[j]) continue;
      if (pick == j) {
        pick = l;
      } else if (costs[l] < costs[pick]) {
        pick = l;
      } else if (costs[l] == costs[pick] &&
                 (perf[l] > perf[pick] || (perf[l] == perf[pick] && l < pick))) {
        pick = l;
      }
    }
    mask[pick] = 1;
  }
  return mask;
}

void criterion5(Criterion& c) {
  Rng rng(905011);
  std::size_t trace_bad = 0, best_bad = 0, cheap_bad = 0;
  const std::size_t reps = 10000;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform_int(0, 19));
    const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(m) - 1));
    const bool snapped = rep % 3 == 0;
    std::vector<double> perf(m), costs(m);
    for (std::size_t i = 0; i < m; ++i) {
      perf[i] = snapped ? static_cast<double>(rng.uniform_int(0, 8)) / 8.0 : rng.uniform01();
      costs[i] = snapped ? static_cast<double>(rng.uniform_int(0, 8)) / 8.0 : rng.uniform01();
    }
    const double zeta = rng.uniform01();
    if (policies::select_zeta_values(perf, costs, k, zeta) != zeta_trace(perf, costs, k, zeta))
      ++trace_bad;

    std::vector<double> perf2(m), costs2(m);
    for (std::size_t i = 0; i < m; ++i) {
      perf2[i] = rng.uniform01();
      costs2[i] = rng.uniform01();
    }
    if (policies::select_zeta_values(perf2, costs2, k, 0.0) !=
        policies::select_perform_best_values(perf2, k))
      ++best_bad;
    if (policies::select_zeta_values(perf2, costs2, k, 1.0) !=
        policies::select_cheapest_values(costs2, k))
      ++cheap_bad;
  }
  c.check(trace_bad == 0, std::to_string(reps - trace_bad) + "/" + std::to_string(reps) +
                              " fuzzed states match the reference trace (ties included)");
  c.check(best_bad == 0, "zeta=0 mask equals perform-best on all " + std::to_string(reps) +
                             " fuzz cases");
  c.check(cheap_bad == 0, "zeta=1 mask equals cheapest on all " + std::to_string(reps) +
                              " fuzz cases");
}

void criterion6(Criterion& c) {
  // analytic MLP gradient vs central finite differences
  Rng rng(60611);
  double worst_rel = 0.0;
  for (int net = 0; net < 100; ++net) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng.uniform_int(0, 3));
    const int classes = 2 + static_cast<int>(rng.uniform_int(0, 2));
    learners::MlpConfig cfg;
    cfg.hidden = 2 + static_cast<int>(rng.uniform_int(0, 6));
    cfg.seed = 7000 + static_cast<std::uint64_t>(net);
    learners::Mlp m(StreamSchema::numeric(d, classes), cfg);
    for (std::size_t p = 0; p < m.param_count(); ++p)
      m.set_param(p, m.get_param(p) + 0.1 * rng.normal());
    std::vector<double> xs(d);
    for (auto& v : xs) v = rng.normal();
    const int label = static_cast<int>(rng.uniform_int(0, classes - 1));
    std::vector<double> grad(m.param_count(), 0.0);
    m.loss_and_grad(xs, label, &grad);
    const double h = 1e-6;
    for (std::size_t p = 0; p < m.param_count(); ++p) {
      const double keep = m.get_param(p);
      m.set_param(p, keep + h);
      const double up = m.loss_and_grad(xs, label, nullptr);
      m.set_param(p, keep - h);
      const double dn = m.loss_and_grad(xs, label, nullptr);
      m.set_param(p, keep);
      const double fd = (up - dn) / (2.0 * h);
      const double scale = std::max({1.0, std::abs(fd), std::abs(grad[p])});
      worst_rel = std::max(worst_rel, std::abs(grad[p] - fd) / scale);
    }
  }
  c.check(worst_rel < 1e-4, "100 random nets: worst relative gradient error " + fmt(worst_rel, 3) +
                                " < 1e-4");

  // byte budget respected over a 1e6-instance fuzz
  std::size_t checked = 0;
  double worst_over = 0.0;
  bool capped = true;
  for (std::size_t budget : {4096ull, 16384ull, 65536ull, 262144ull}) {
    learners::HtConfig cfg;
    cfg.grace_period = 50;
    cfg.max_bytes = budget;
    learners::HoeffdingTree tree(StreamSchema::numeric(5, 2), cfg);
    const std::size_t slack = tree.leaf_bytes_estimate(true);
    Rng data(88000 + budget);
    for (std::size_t i = 0; i < 250000; ++i) {
      Instance x;
      x.features.resize(5);
      for (auto& v : x.features) v = data.uniform01();
      bool label = (x.features[0] > 0.5) != (x.features[1] > 0.5);
      if (data.uniform01() < 0.05) label = !label;
      x.label = label ? 1 : 0;
      tree.train(x);
      if (i % 64 == 0 || i + 1 == 250000) {
        ++checked;
        if (tree.size_bytes() > budget + slack) {
          capped = false;
          worst_over = std::max(worst_over,
                                static_cast<double>(tree.size_bytes()) - static_cast<double>(budget));
        }
      }
    }
  }
  c.check(capped, "size_bytes <= max_bytes + one active leaf across " + std::to_string(checked) +
                      " checkpoints of a 1e6-instance fuzz over four budgets" +
                      (capped ? "" : " (worst overshoot " + fmt(worst_over, 3) + " bytes)"));

  // threshold concept learned within 5e3 instances
  learners::HtConfig cfg;
  cfg.grace_period = 50;
  learners::HoeffdingTree tree(StreamSchema::numeric(1, 2), cfg);
  Rng data(424242);
  std::size_t window_correct = 0;
  for (std::size_t i = 0; i < 5000; ++i) {
    const double x = data.uniform01();
    const Instance inst{{x}, x > 0.7 ? 1 : 0};
    if (tree.predict(inst) == inst.label && i >= 4000) ++window_correct;
    tree.train(inst);
  }
  const double acc = static_cast<double>(window_correct) / 1000.0;
  c.check(acc > 0.95, "single-threshold stream: prequential accuracy " + fmt(acc) +
                          " > 0.95 over the last 1000 of 5000 instances");
}

void criterion7(Criterion& c) {
  const fs::path out = g_tmp / "paper_mini";
  const auto t0 = std::chrono::steady_clock::now();
  const int rc = run_cli("run --preset paper-mini --output-dir " + out.string() + " --jobs 1 > " +
                         (g_tmp / "paper_mini.log").string() + " 2>&1");
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.check(rc == 0, "preset grid completed (exit " + std::to_string(rc) + ")");
  if (rc != 0) return;

  struct Cell {
    std::vector<double> auroc, cost;
  };
  std::map<std::string, std::map<std::string, Cell>> table;  // stream -> policy -> runs
  std::vector<std::string> streams;
  {
    std::ifstream in(out / "results.csv");
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      std::stringstream row(line);
      std::string policy, dataset, seed, auroc, accuracy, cost;
      std::getline(row, policy, ',');
      std::getline(row, dataset, ',');
      std::getline(row, seed, ',');
      std::getline(row, auroc, ',');
      std::getline(row, accuracy, ',');
      std::getline(row, cost, ',');
      if (table.find(dataset) == table.end()) streams.push_back(dataset);
      table[dataset][policy].auroc.push_back(std::stod(auroc));
      table[dataset][policy].cost.push_back(std::stod(cost));
    }
  }
  c.check(streams.size() == 11, "results cover " + std::to_string(streams.size()) + " streams");

  const std::string pb = "perform_best_e0.1", pw = "perform_worst_e0.1", zz = "zeta_z0.01_e0.1";
  const auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  double worst_gap = 0.0;
  std::string worst_gap_stream;
  std::size_t gap_bad = 0, order_bad = 0, cost_majorities = 0;
  for (const auto& s : streams) {
    const auto& cells = table.at(s);
    const double a_pb = mean(cells.at(pb).auroc);
    const double a_pw = mean(cells.at(pw).auroc);
    const double a_zz = mean(cells.at(zz).auroc);
    const double gap = std::abs(a_pb - a_zz);
    if (gap > worst_gap) {
      worst_gap = gap;
      worst_gap_stream = s;
    }
    if (gap > 0.01) ++gap_bad;
    if (!(a_pb > a_pw && a_zz > a_pw)) ++order_bad;
    std::size_t cheaper = 0;
    const auto& zc = cells.at(zz).cost;
    const auto& pc = cells.at(pb).cost;
    for (std::size_t i = 0; i < zc.size(); ++i)
      if (zc[i] <= pc[i]) ++cheaper;
    if (2 * cheaper > zc.size()) ++cost_majorities;
    c.info(s + ": AUROC pb " + fmt(a_pb) + " / zeta " + fmt(a_zz) + " / pw " + fmt(a_pw) +
           ", zeta cheaper on " + std::to_string(cheaper) + "/" + std::to_string(zc.size()) +
           " seeds");
  }
  c.check(gap_bad == 0, "perform-best and zeta within 0.01 AUROC on every stream (worst gap " +
                            fmt(worst_gap) + " on " + worst_gap_stream + ")");
  c.check(order_bad == 0,
          "perform-best and zeta strictly above perform-worst AUROC on every stream" +
              (order_bad ? " (" + std::to_string(order_bad) + " streams violate)" : std::string()));
  c.check(cost_majorities >= 8, "zeta total cost <= perform-best on a majority of seeds for " +
                                    std::to_string(cost_majorities) + "/11 streams (need >= 8)");
  c.check(wall < 1800.0, "grid wall time " + fmt(wall, 4) + "s < 1800s");
  fs::remove_all(out);
}

void criterion8(Criterion& c) {
  Rng rng(81290);
  std::size_t bad = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_int(0, 498));
    std::vector<std::pair<double, int>> pairs(n);
    for (auto& [score, label] : pairs) {
      score = static_cast<double>(rng.uniform_int(0, 16)) / 16.0;
      label = static_cast<int>(rng.uniform_int(0, 1));
    }
    if (std::all_of(pairs.begin(), pairs.end(),
                    [&](const auto& p) { return p.second == pairs[0].second; }))
      pairs[0].second = 1 - pairs[0].second;
    if (eval::streaming_auroc(pairs, false) != eval::auroc_all_pairs(pairs)) ++bad;
  }
  c.check(bad == 0, "streaming AUROC equals the all-pairs oracle exactly on 1000 sequences");

  std::vector<double> x(11), y(11, 0.0);
  for (std::size_t i = 0; i < 11; ++i) x[i] = static_cast<double>(i + 1);
  const double p = eval::wilcoxon_signed_rank(x, y);
  c.check(p == 2.0 / 2048.0, "n=11 all-positive differences: exact two-sided p = " + fmt(p, 10) +
                                 " (= 2/2^11)");

  std::vector<eval::PairwiseComparison> cmp(3);
  cmp[0].p = 0.01;
  cmp[1].p = 0.04;
  cmp[2].p = 0.03;
  eval::holm_adjust(cmp, 0.05);
  c.check(cmp[0].significant, "Holm ladder rejects p=0.01 against 0.05/3");
  c.check(cmp[2].significant, "Holm ladder rejects p=0.03 against 0.05/2 (the worked example "
                              "this criterion encodes expects a rejection)");
  c.check(cmp[1].significant, "Holm ladder rejects p=0.04 against 0.05/1 (same worked example)");
  c.info("the worked example contradicts its own ladder: after rejecting 0.01 <= 0.05/3, the "
         "next test is 0.03 vs 0.05/2 = 0.025, which fails and stops the step-down, so a "
         "conforming Holm procedure retains 0.03 and 0.04; the implementation follows Holm "
         "(adjusted p " + fmt(cmp[0].p_adjusted) + ", " + fmt(cmp[1].p_adjusted) + ", " +
         fmt(cmp[2].p_adjusted) + ")");
}

double ks_distance(std::vector<double> samples, double alpha, double beta) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = theory::reg_inc_beta(alpha, beta, samples[i]);
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::abs(static_cast<double>(i) / n - f));
  }
  return d;
}

void criterion9(Criterion& c) {
  const auto cfg = config::paper_mini_preset();
  const auto& entry = cfg.stream_list.at(8);
  c.info("stream " + entry.name + " (" + std::to_string(entry.length) +
         " instances), pool of " + std::to_string(cfg.members.size()) +
         " members, k=" + std::to_string(cfg.k) + ", tracker values of every slot pooled over "
         "all steps; the reproduced figure overlays one Beta fit per policy (zeta and cand), "
         "and the approximation claim holds if either fitted CDF stays within KS 0.1");
  double best_ks = 1.0;
  bool all_valid = true;
  for (int which = 0; which < 2; ++which) {
    auto stream = config::build_stream(entry, config::stream_seed(1, 8));
    ensemble::PoolSpec pool;
    pool.members = cfg.members;
    pool.k = cfg.k;
    pool.tracker_window = cfg.tracker_window;
    if (which == 0) {
      pool.policy = cfg.policy_list.at(2);  // zeta 0.01, epsilon 0.1
      pool.policy.seed = config::policy_seed(1, 2);
    } else {
      pool.policy.kind = "cand";
      pool.policy.epsilon = 0.0;
      pool.policy.seed = config::policy_seed(1, 2);
    }
    ensemble::Heros model(pool, stream->schema());
    std::vector<double> samples;
    samples.reserve(entry.length * cfg.members.size());
    while (auto x = stream->next()) {
      model.train_step(*x);
      for (const auto& slot : model.state().slots) samples.push_back(slot.tracker.value());
    }
    const auto fit = theory::fit_beta(samples);
    all_valid = all_valid && fit.valid;
    const double ks = fit.valid ? ks_distance(samples, fit.alpha, fit.beta) : 1.0;
    best_ks = std::min(best_ks, ks);
    c.info(std::string(which == 0 ? "zeta" : "cand") + " run: n=" + std::to_string(samples.size()) +
           ", fit " + (fit.valid ? "valid" : "invalid") + " (alpha=" + fmt(fit.alpha, 4) +
           ", beta=" + fmt(fit.beta, 4) + "), KS distance " + fmt(ks, 4));
  }
  c.check(all_valid, "moment fits are valid (sample variance < m(1-m)) for both runs");
  c.check(best_ks < 0.1, "best fitted-vs-empirical KS distance " + fmt(best_ks, 4) + " < 0.1");
}

void criterion10(Criterion& c) {
  const auto cfg = config::paper_mini_preset();
  const auto& entry = cfg.stream_list.at(1);  // gradual AGRAWAL
  const std::vector<std::uint64_t> boundaries = {25000, 50000, 75000};
  c.info("stream " + entry.name + ", transitions centred at 25000/50000/75000 with width 5000; "
         "windows of 1000 smoothed values end 6000 steps before and start 6000 steps after "
         "each centre, clear of the sigmoid mixing zone");

  for (int which = 0; which < 2; ++which) {
    auto stream = config::build_stream(entry, config::stream_seed(1, 1));
    ensemble::PoolSpec pool;
    pool.members = cfg.members;
    pool.k = cfg.k;
    pool.tracker_window = cfg.tracker_window;
    if (which == 0) {
      pool.policy = cfg.policy_list.at(2);
      pool.policy.seed = config::policy_seed(1, 2);
    } else {
      pool.policy.kind = "cheapest";
      pool.policy.epsilon = 0.0;
      pool.policy.seed = 7;
    }
    const std::string name = which == 0 ? "zeta" : "cheapest";
    ensemble::Heros model(pool, stream->schema());
    std::vector<double> raw;
    raw.reserve(entry.length);
    while (auto x = stream->next()) raw.push_back(model.train_step(*x).charged_cost);

    const auto smoothed_at = [&](std::size_t t) {
      const std::size_t lo = t >= 299 ? t - 299 : 0;
      double s = 0.0;
      for (std::size_t i = lo; i <= t; ++i) s += raw[i];
      return s / static_cast<double>(t - lo + 1);
    };
    std::size_t reacted = 0, within = 0;
    for (const std::uint64_t b : boundaries) {
      double pre_mean = 0.0, pre_m2 = 0.0;
      std::size_t n = 0;
      for (std::size_t t = b - 7000; t < b - 6000; ++t) {
        const double v = smoothed_at(t);
        ++n;
        const double d = v - pre_mean;
        pre_mean += d / static_cast<double>(n);
        pre_m2 += d * (v - pre_mean);
      }
      const double pre_sd = std::sqrt(pre_m2 / static_cast<double>(n - 1));
      double post_mean = 0.0;
      for (std::size_t t = b + 6000; t < b + 7000; ++t) post_mean += smoothed_at(t);
      post_mean /= 1000.0;
      const double delta = std::abs(post_mean - pre_mean);
      if (delta > 3.0 * pre_sd) ++reacted;
      if (delta <= pre_sd) ++within;
      c.info(name + " boundary " + std::to_string(b) + ": pre mean " + fmt(pre_mean) + " (sd " +
             fmt(pre_sd, 3) + "), post mean " + fmt(post_mean) + ", |shift| " + fmt(delta, 4));
    }
    if (which == 0)
      c.check(reacted >= 1, "zeta smoothed cost shifts by > 3 pre-drift SD at " +
                                std::to_string(reacted) + "/3 boundaries (need >= 1)");
    else
      c.check(within == boundaries.size(),
              "cheapest smoothed cost stays within 1 pre-drift SD at every boundary");
  }
}

void criterion11(Criterion& c) {
  const fs::path cfg_path = g_tmp / "det.json";
  const fs::path out = g_tmp / "det_out";
  const fs::path ref = g_tmp / "det_ref";
  {
    nlohmann::ordered_json root;
    root["output_dir"] = out.string();
    root["seeds"] = {1, 2};
    root["jobs"] = 1;
    root["pool"] = {{"k", 4},
                    {"tracker_window", 200},
                    {"members", {{"grid", "ht"}, {"grace_periods", {50}}}}};
    root["policies"] = nlohmann::ordered_json::array(
        {{{"kind", "zeta"}, {"zeta", 0.05}, {"epsilon", 0.1}}, {{"kind", "perform_best"}}});
    root["streams"] = nlohmann::ordered_json::array(
        {{{"name", "agr"},
          {"length", 3000},
          {"concepts", {{{"kind", "agrawal"}, {"function", 2}}}},
          {"transitions", nlohmann::ordered_json::array()}},
         {{"name", "led"},
          {"length", 3000},
          {"concepts", {{{"kind", "led"}, {"noise", 0.1}}}},
          {"transitions", nlohmann::ordered_json::array()}}});
    root["log"] = {{"run_logs", true}, {"gzip", false}, {"cost_traces", true}, {"trace_window", 300}};
    std::ofstream f(cfg_path);
    f << root.dump(2) << "\n";
  }
  const std::string quiet = " > /dev/null 2>&1";
  c.check(run_cli("run --config " + cfg_path.string() + quiet) == 0, "first run completed");
  fs::rename(out, ref);
  c.check(run_cli("run --config " + cfg_path.string() + quiet) == 0, "repeat run completed");

  std::size_t compared = 0, mismatched = 0;
  for (const auto& it : fs::recursive_directory_iterator(ref)) {
    if (!it.is_regular_file()) continue;
    const fs::path rel = fs::relative(it.path(), ref);
    if (rel.filename() == "timings.csv") continue;  // wall-clock column
    ++compared;
    const fs::path twin = out / rel;
    if (!fs::exists(twin) || slurp(it.path()) != slurp(twin)) {
      ++mismatched;
      c.info("differs: " + rel.string());
    }
  }
  c.check(compared >= 14, "compared " + std::to_string(compared) +
                              " artifacts (result/summary/rank/significance CSVs, resolved "
                              "config, traces, run logs)");
  c.check(mismatched == 0, "all compared artifacts are bitwise identical across the repeat");
  fs::remove_all(out);
  fs::remove_all(ref);
}

}  // namespace

int main(int argc, char** argv) {
  bool bench = false;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--bench") {
      bench = true;
    } else if (arg != "--fast") {
      std::fprintf(stderr, "usage: %s [--fast | --bench]\n", argv[0]);
      return 2;
    }
  }

  g_tmp = fs::temp_directory_path() / ("heros_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(g_tmp);

  struct Entry {
    int id;
    const char* title;
    std::function<void(Criterion&)> fn;
    bool bench_only = false;
  };
  const std::vector<Entry> entries = {
      {1, "cand kernel estimates at the desk scale (M=1e4, k=100, 200 trials)", criterion1},
      {2, "zeta kernel bounds at the desk scale (zeta=0.05)", criterion2},
      {3, "zeta-vs-cand applicability sweep (zeta in {0.01..0.3})", criterion3},
      {4, "zeta performance gap to perform-best in the limit regime", criterion4},
      {5, "zeta selection equals the round-by-round reference trace", criterion5},
      {6, "MLP gradients, tree byte caps, threshold learning", criterion6},
      {7, "benchmark grid ordering (--preset paper-mini)", criterion7, true},
      {8, "metric oracles: AUROC, Wilcoxon, Holm", criterion8},
      {9, "pooled tracker values admit a Beta fit (wisdm-sized run)", criterion9},
      {10, "smoothed cost trace reacts to drift (gradual AGRAWAL)", criterion10},
      {11, "identical seeds give bitwise-identical result CSVs", criterion11},
  };

  int failed = 0, skipped = 0;
  for (const auto& e : entries) {
    if (e.bench_only && !bench) {
      std::printf("[C%02d] SKIP          %s (runs with --bench)\n", e.id, e.title);
      std::fflush(stdout);
      ++skipped;
      continue;
    }
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.fn(c);
    } catch (const std::exception& ex) {
      c.check(false, std::string("exception: ") + ex.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!c.pass) ++failed;
    std::printf("[C%02d] %s %7.1fs  %s\n", e.id, c.pass ? "PASS" : "FAIL", secs, e.title);
    for (const auto& note : c.notes) std::printf("        %s\n", note.c_str());
    std::fflush(stdout);
  }

  std::printf("\n%zu/%zu criteria passed", entries.size() - failed - skipped, entries.size());
  if (failed) std::printf(", %d failed", failed);
  if (skipped) std::printf(", %d skipped", skipped);
  std::printf("\n");
  fs::remove_all(g_tmp);
  return failed == 0 ? 0 : 1;
}
