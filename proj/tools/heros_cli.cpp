// heros: stream-ensemble benchmark runner, theory checker, stream generator.
//
// Exit codes: 0 success, 1 runtime failure (partial results are kept),
// 2 invalid configuration or flags.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heros/config/experiment.hpp"
#include "heros/io/run_log.hpp"
#include "heros/theory/report_json.hpp"
#include "heros/theory/stochastic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailure = 1;
constexpr int kExitBadConfig = 2;

struct RunFlags {
    std::string config_path;
    std::string preset;
    std::string output_dir;
    int jobs = 0;  // 0 = leave to config
    bool dry_run = false;
};

int cmd_run(const RunFlags& flags) {
    namespace cfgns = heros::config;
    cfgns::ExperimentConfig cfg;
    try {
        cfgns::json merged;
        if (!flags.preset.empty()) merged = cfgns::preset_json(flags.preset);
        if (!flags.config_path.empty()) {
            cfgns::json file = cfgns::load_json_file(flags.config_path);
            if (merged.is_null())
                merged = std::move(file);
            else
                cfgns::deep_merge(merged, file);
        }
        if (merged.is_null()) {
            std::cerr << "error: run needs --config and/or --preset\n";
            return kExitBadConfig;
        }
        cfg = cfgns::parse_config(merged);
        if (!flags.output_dir.empty()) cfg.output_dir = flags.output_dir;
        if (flags.jobs > 0) cfg.jobs = flags.jobs;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    }

    const auto grid = cfgns::expand_grid(cfg);
    if (flags.dry_run) {
        std::cout << "grid: " << cfg.stream_list.size() << " streams x " << cfg.policy_list.size()
                  << " policies x " << cfg.seeds.size() << " seeds = " << grid.size() << " runs\n";
        for (const auto& job : grid)
            std::cout << "  " << cfg.stream_list[job.stream_idx].name << " | "
                      << cfgns::policy_id(cfg.policy_list[job.policy_idx]) << " | seed "
                      << cfg.seeds[job.seed_idx] << "\n";
        return kExitOk;
    }

    try {
        cfgns::write_resolved_config(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRunFailure;
    }

    std::vector<heros::eval::RunResult> results;
    bool failed = false;
    try {
        results = cfgns::run_experiment(cfg, 0, &std::cout);
    } catch (const cfgns::PartialRunError& e) {
        std::cerr << "error: " << e.what() << "\n";
        results = e.completed;
        failed = true;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRunFailure;
    }

    try {
        cfgns::write_reports(cfg, results);
    } catch (const std::exception& e) {
        // With an incomplete grid some aggregate tables cannot be formed;
        // results.csv / timings.csv written so far stay on disk.
        std::cerr << "warning: incomplete reports: " << e.what() << "\n";
        if (!failed) return kExitRunFailure;
    }
    std::cout << "wrote " << results.size() << " results to " << cfg.output_dir << "\n";
    return failed ? kExitRunFailure : kExitOk;
}

int cmd_theory(const heros::theory::StochasticModelSpec& spec, const std::string& out_path) {
    heros::theory::TheoremReport report;
    try {
        heros::theory::validate_spec(spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    }
    try {
        report = heros::theory::check_theorems(spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRunFailure;
    }
    const std::string text = heros::theory::to_json(report).dump(2);
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot open " << out_path << "\n";
            return kExitRunFailure;
        }
        out << text << "\n";
    }
    return report.all_applicable_pass() ? kExitOk : kExitRunFailure;
}

struct GenFlags {
    std::string kind = "agrawal";
    std::uint64_t seed = 1;
    std::uint64_t count = 100;
    std::string out;
};

int cmd_gen(const GenFlags& flags) {
    std::unique_ptr<heros::streams::StreamSource> source;
    try {
        heros::streams::GeneratorSpec g;
        g.kind = flags.kind;
        source = heros::streams::make_generator(g, flags.seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    }

    namespace fs = std::filesystem;
    try {
        const fs::path parent = fs::path(flags.out).parent_path();
        if (!parent.empty()) fs::create_directories(parent);
        std::ofstream out(flags.out, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot open " << flags.out << "\n";
            return kExitRunFailure;
        }
        const auto& schema = source->schema();
        for (std::size_t i = 0; i < schema.attributes.size(); ++i) {
            const std::string& name = schema.attributes[i].name;
            out << (name.empty() ? "f" + std::to_string(i) : name) << ",";
        }
        out << "label\n";
        for (std::uint64_t row = 0; row < flags.count; ++row) {
            auto inst = source->next();
            if (!inst) break;
            for (std::size_t i = 0; i < schema.attributes.size(); ++i) {
                if (schema.attributes[i].kind == heros::AttributeInfo::Kind::nominal)
                    out << static_cast<long long>(inst->features[i]);
                else
                    out << heros::io::format_double(inst->features[i]);
                out << ",";
            }
            out << inst->label << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRunFailure;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heros: resource-aware heterogeneous online ensembles"};
    app.require_subcommand(1);

    RunFlags run_flags;
    CLI::App* run = app.add_subcommand("run", "Execute an experiment grid from a config file");
    run->add_option("--config", run_flags.config_path, "JSON experiment config");
    run->add_option("--preset", run_flags.preset, "named preset (paper-mini); file keys override it");
    run->add_option("--jobs", run_flags.jobs, "parallel runs (overrides config)");
    run->add_option("--output-dir", run_flags.output_dir, "output directory (overrides config)");
    run->add_flag("--dry-run", run_flags.dry_run, "print the resolved grid without executing");

    heros::theory::StochasticModelSpec tspec;
    std::string theory_out;
    CLI::App* theory = app.add_subcommand("theory", "Monte-Carlo check of the asymptotic claims");
    theory->add_option("--alpha", tspec.alpha, "Beta shape alpha");
    theory->add_option("--beta", tspec.beta, "Beta shape beta");
    theory->add_option("--zeta", tspec.zeta, "zeta threshold");
    theory->add_option("--epsilon", tspec.epsilon, "exploration rate (reported only)");
    theory->add_option("--M", tspec.M, "pool size");
    theory->add_option("--k", tspec.k, "training budget");
    theory->add_option("--trials", tspec.trials, "Monte-Carlo trials");
    theory->add_option("--seed", tspec.seed, "RNG seed");
    theory->add_option("--out", theory_out, "write the JSON report here instead of stdout");

    GenFlags gen_flags;
    CLI::App* gen = app.add_subcommand("gen", "Materialize a synthetic stream as CSV");
    gen->add_option("--kind", gen_flags.kind, "agrawal | rbf | led");
    gen->add_option("--seed", gen_flags.seed, "RNG seed");
    gen->add_option("--count", gen_flags.count, "number of data rows");
    gen->add_option("--out", gen_flags.out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadConfig;
    }

    try {
        if (run->parsed()) return cmd_run(run_flags);
        if (theory->parsed()) return cmd_theory(tspec, theory_out);
        if (gen->parsed()) return cmd_gen(gen_flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRunFailure;
    }
    return kExitBadConfig;
}
