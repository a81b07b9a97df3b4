#pragma once

// CSV emitters for completed runs: one row per result, a summary table in the
// policy-columns shape (AUROC and cost rows per dataset, averaged over
// seeds), mean-rank tables, and the pairwise significance matrix. Wall-clock
// timings go to their own file so every other artifact is bit-reproducible.

#include <algorithm>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "heros/eval/prequential.hpp"
#include "heros/eval/stats.hpp"

namespace heros::eval {

namespace detail {

inline std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  return out;
}

// Distinct values in first-appearance order.
inline std::vector<std::string> distinct(const std::vector<RunResult>& results,
                                         const std::string RunResult::*field) {
  std::vector<std::string> out;
  for (const auto& r : results)
    if (std::find(out.begin(), out.end(), r.*field) == out.end()) out.push_back(r.*field);
  return out;
}

}  // namespace detail

inline void write_results_csv(const std::string& path, const std::vector<RunResult>& results) {
  auto out = detail::open_csv(path);
  out << "policy,dataset,seed,auroc,accuracy,total_cost\n";
  for (const auto& r : results)
    out << r.policy_id << ',' << r.dataset_id << ',' << r.seed << ','
        << io::format_double(r.auroc) << ',' << io::format_double(r.accuracy) << ','
        << io::format_double(r.total_cost) << '\n';
}

inline void write_timings_csv(const std::string& path, const std::vector<RunResult>& results) {
  auto out = detail::open_csv(path);
  out << "policy,dataset,seed,wall_time_seconds\n";
  for (const auto& r : results)
    out << r.policy_id << ',' << r.dataset_id << ',' << r.seed << ','
        << io::format_double(r.wall_time_seconds) << '\n';
}

// metric[policy][dataset] = mean over seeds; requires every (policy, dataset)
// cell to hold at least one run.
inline std::vector<std::vector<double>> metric_matrix(const std::vector<RunResult>& results,
                                                      const std::vector<std::string>& policies,
                                                      const std::vector<std::string>& datasets,
                                                      double RunResult::*field) {
  std::vector<std::vector<double>> m(policies.size(),
                                     std::vector<double>(datasets.size(), 0.0));
  std::vector<std::vector<int>> counts(policies.size(), std::vector<int>(datasets.size(), 0));
  for (const auto& r : results) {
    const auto pi = std::find(policies.begin(), policies.end(), r.policy_id);
    const auto di = std::find(datasets.begin(), datasets.end(), r.dataset_id);
    if (pi == policies.end() || di == datasets.end()) continue;
    const std::size_t p = static_cast<std::size_t>(pi - policies.begin());
    const std::size_t d = static_cast<std::size_t>(di - datasets.begin());
    m[p][d] += r.*field;
    counts[p][d] += 1;
  }
  for (std::size_t p = 0; p < policies.size(); ++p)
    for (std::size_t d = 0; d < datasets.size(); ++d) {
      if (counts[p][d] == 0)
        throw ShapeMismatch("no run for policy " + policies[p] + " on dataset " + datasets[d]);
      m[p][d] /= counts[p][d];
    }
  return m;
}

inline void write_summary_csv(const std::string& path, const std::vector<RunResult>& results) {
  const auto policies = detail::distinct(results, &RunResult::policy_id);
  const auto datasets = detail::distinct(results, &RunResult::dataset_id);
  const auto auroc = metric_matrix(results, policies, datasets, &RunResult::auroc);
  const auto cost = metric_matrix(results, policies, datasets, &RunResult::total_cost);
  auto out = detail::open_csv(path);
  out << "dataset,metric";
  for (const auto& p : policies) out << ',' << p;
  out << '\n';
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    out << datasets[d] << ",auroc";
    for (std::size_t p = 0; p < policies.size(); ++p) out << ',' << io::format_double(auroc[p][d]);
    out << '\n';
    out << datasets[d] << ",total_cost";
    for (std::size_t p = 0; p < policies.size(); ++p) out << ',' << io::format_double(cost[p][d]);
    out << '\n';
  }
}

inline void write_ranks_csv(const std::string& path, const std::vector<RunResult>& results) {
  const auto policies = detail::distinct(results, &RunResult::policy_id);
  const auto datasets = detail::distinct(results, &RunResult::dataset_id);
  const auto auroc_ranks =
      rank_table(metric_matrix(results, policies, datasets, &RunResult::auroc), true);
  const auto cost_ranks =
      rank_table(metric_matrix(results, policies, datasets, &RunResult::total_cost), false);
  auto out = detail::open_csv(path);
  out << "policy,mean_rank_auroc,mean_rank_cost\n";
  for (std::size_t p = 0; p < policies.size(); ++p)
    out << policies[p] << ',' << io::format_double(auroc_ranks[p]) << ','
        << io::format_double(cost_ranks[p]) << '\n';
}

inline void write_significance_csv(const std::string& path,
                                   const std::vector<RunResult>& results, double alpha = 0.05) {
  const auto policies = detail::distinct(results, &RunResult::policy_id);
  const auto datasets = detail::distinct(results, &RunResult::dataset_id);
  auto out = detail::open_csv(path);
  out << "metric,policy_a,policy_b,p_value,p_adjusted,significant\n";
  const auto emit = [&](const char* metric, double RunResult::*field, double a) {
    const auto m = metric_matrix(results, policies, datasets, field);
    for (const auto& c : wilcoxon_holm(m, a))
      out << metric << ',' << policies[c.a] << ',' << policies[c.b] << ','
          << io::format_double(c.p) << ',' << io::format_double(c.p_adjusted) << ','
          << (c.significant ? 1 : 0) << '\n';
  };
  emit("auroc", &RunResult::auroc, alpha);
  emit("total_cost", &RunResult::total_cost, alpha);
}

}  // namespace heros::eval
