#pragma once

// Prequential (test-then-train) benchmark harness: drives a HEROS ensemble
// over a stream, pooling accuracy and AUROC from the pre-training predictions
// of each step, and accounts resource costs exactly in integer units.

#include <chrono>
#include <cstdint>
#include <deque>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "heros/ensemble/heros.hpp"
#include "heros/eval/metrics.hpp"
#include "heros/io/run_log.hpp"
#include "heros/streams/stream.hpp"

namespace heros::eval {

struct RunResult {
  std::string policy_id;
  std::string dataset_id;
  std::uint64_t seed = 0;
  double auroc = 0.0;
  double accuracy = 0.0;
  double total_cost = 0.0;  // abstract units, exact (integer-backed)
  std::uint64_t total_cost_units = 0;
  double wall_time_seconds = 0.0;
  std::string trace_path;  // per-step trace reference ("" = not written)
};

struct RunOptions {
  std::string run_log_path;  // JSON-lines per-step log ("" = off)
  bool gzip_log = false;
  std::string cost_trace_path;  // CSV (step, smoothed cost) ("" = off)
  std::size_t cost_trace_window = 300;
};

// Sliding-window mean over the most recent charged costs.
class CostTrace {
 public:
  CostTrace(const std::string& path, std::size_t window) : window_(window), out_(path) {
    if (!out_) throw Error("cannot open " + path + " for writing");
    if (window_ == 0) throw InvalidBudget("cost trace window must be >= 1");
    out_ << "step,smoothed_cost\n";
  }

  void add(std::uint64_t step, double cost) {
    recent_.push_back(cost);
    sum_ += cost;
    if (recent_.size() > window_) {
      sum_ -= recent_.front();
      recent_.pop_front();
    }
    out_ << step << ',' << io::format_double(sum_ / static_cast<double>(recent_.size()))
         << '\n';
  }

 private:
  std::size_t window_;
  std::ofstream out_;
  std::deque<double> recent_;
  double sum_ = 0.0;
};

inline RunResult prequential_run(const ensemble::PoolSpec& pool_spec,
                                 streams::StreamSource& stream, const std::string& policy_id,
                                 const std::string& dataset_id, std::uint64_t seed,
                                 const RunOptions& options = {}) {
  RunResult result;
  result.policy_id = policy_id;
  result.dataset_id = dataset_id;
  result.seed = seed;

  ensemble::Heros model(pool_spec, stream.schema());
  AurocCollector auroc(stream.schema().num_classes);
  std::unique_ptr<io::RunLogWriter> log;
  if (!options.run_log_path.empty())
    log = std::make_unique<io::RunLogWriter>(options.run_log_path, options.gzip_log);
  std::unique_ptr<CostTrace> trace;
  if (!options.cost_trace_path.empty()) {
    trace = std::make_unique<CostTrace>(options.cost_trace_path, options.cost_trace_window);
    result.trace_path = options.cost_trace_path;
  } else if (!options.run_log_path.empty()) {
    result.trace_path = options.run_log_path;
  }

  std::uint64_t seen = 0, correct = 0;
  const auto started = std::chrono::steady_clock::now();
  while (std::optional<Instance> x = stream.next()) {
    const ensemble::StepRecord rec = model.train_step(*x);
    ++seen;
    if (rec.predicted == rec.label) ++correct;
    auroc.add(rec.eval_scores, rec.label);
    if (log) log->write(rec);
    if (trace) trace->add(rec.step, rec.charged_cost);
  }
  const auto finished = std::chrono::steady_clock::now();
  if (seen == 0) throw EmptyStream("prequential run on an empty stream");

  result.accuracy = static_cast<double>(correct) / static_cast<double>(seen);
  result.auroc = auroc.value();
  result.total_cost_units = model.total_charged_units();
  result.total_cost = units_to_cost(result.total_cost_units);
  result.wall_time_seconds =
      std::chrono::duration<double>(finished - started).count();
  if (log) log->close();
  return result;
}

}  // namespace heros::eval
