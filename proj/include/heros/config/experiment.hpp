#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "heros/ensemble/pool_builder.hpp"
#include "heros/errors.hpp"
#include "heros/eval/prequential.hpp"
#include "heros/eval/report.hpp"
#include "heros/policies/policies.hpp"
#include "heros/streams/factory.hpp"

namespace heros::config {

using json = nlohmann::ordered_json;

// One benchmark stream: a name plus a (possibly single-concept) drift schedule.
// `length` caps the stream; schedules store absolute transition positions.
struct StreamEntry {
    std::string name;
    std::uint64_t length = 0;
    std::vector<streams::GeneratorSpec> concepts;
    std::vector<streams::Transition> transitions;
};

struct LogOptions {
    bool run_logs = false;
    bool gzip = false;
    bool cost_traces = true;
    std::size_t trace_window = 300;
};

struct ExperimentConfig {
    std::string output_dir = "heros_out";
    std::vector<std::uint64_t> seeds;
    int jobs = 1;
    std::size_t k = 1;
    std::size_t tracker_window = 500;
    std::vector<ensemble::PoolMember> members;
    std::vector<policies::PolicySpec> policy_list;
    std::vector<StreamEntry> stream_list;
    LogOptions log;
};

namespace detail {

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
    throw ParseError("config: " + where + ": " + what);
}

inline const json& require(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.is_object()) fail(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, "missing key '" + key + "'");
    return *it;
}

inline double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
}

inline std::uint64_t as_count(const json& v, const std::string& where) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        fail(where, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

inline std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where, "expected a string");
    return v.get<std::string>();
}

inline void check_keys(const json& obj, const std::string& where,
                       std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) { ok = true; break; }
        if (!ok) fail(where, "unknown key '" + it.key() + "'");
    }
}

inline streams::GeneratorSpec parse_generator(const json& j, const std::string& where) {
    streams::GeneratorSpec g;
    g.kind = as_string(require(j, where, "kind"), where + ".kind");
    if (g.kind == "agrawal") {
        check_keys(j, where, {"kind", "function", "perturbation"});
        if (j.contains("function")) g.agrawal.function = static_cast<int>(as_count(j["function"], where + ".function"));
        if (j.contains("perturbation")) g.agrawal.perturbation = as_number(j["perturbation"], where + ".perturbation");
    } else if (g.kind == "rbf") {
        check_keys(j, where, {"kind", "centroids", "classes", "dims", "drift_speed"});
        if (j.contains("centroids")) g.rbf.centroids = static_cast<std::size_t>(as_count(j["centroids"], where + ".centroids"));
        if (j.contains("classes")) g.rbf.classes = static_cast<std::size_t>(as_count(j["classes"], where + ".classes"));
        if (j.contains("dims")) g.rbf.dims = static_cast<std::size_t>(as_count(j["dims"], where + ".dims"));
        if (j.contains("drift_speed")) g.rbf.drift_speed = as_number(j["drift_speed"], where + ".drift_speed");
    } else if (g.kind == "led") {
        check_keys(j, where, {"kind", "noise", "swapped_attributes"});
        if (j.contains("noise")) g.led.noise = as_number(j["noise"], where + ".noise");
        if (j.contains("swapped_attributes"))
            g.led.swapped_attributes = static_cast<std::size_t>(as_count(j["swapped_attributes"], where + ".swapped_attributes"));
    } else if (g.kind == "file") {
        check_keys(j, where, {"kind", "path", "format", "missing", "encoding"});
        g.file.path = as_string(require(j, where, "path"), where + ".path");
        std::string fmt = j.contains("format") ? as_string(j["format"], where + ".format")
                                               : std::string(g.file.path.size() >= 5 && g.file.path.substr(g.file.path.size() - 5) == ".arff" ? "arff" : "csv");
        if (fmt == "csv") g.file.format = streams::FileFormat::csv;
        else if (fmt == "arff") g.file.format = streams::FileFormat::arff;
        else fail(where + ".format", "expected 'csv' or 'arff'");
        if (j.contains("missing")) {
            std::string m = as_string(j["missing"], where + ".missing");
            if (m == "error") g.file.missing = streams::MissingPolicy::error;
            else if (m == "zero_fill") g.file.missing = streams::MissingPolicy::zero_fill;
            else fail(where + ".missing", "expected 'error' or 'zero_fill'");
        }
        if (j.contains("encoding")) {
            std::string e = as_string(j["encoding"], where + ".encoding");
            if (e == "index") g.file.encoding = streams::NominalEncoding::index;
            else if (e == "onehot") g.file.encoding = streams::NominalEncoding::onehot;
            else fail(where + ".encoding", "expected 'index' or 'onehot'");
        }
    } else {
        fail(where + ".kind", "unknown generator kind '" + g.kind + "'");
    }
    return g;
}

inline json generator_to_json(const streams::GeneratorSpec& g) {
    json j;
    j["kind"] = g.kind;
    if (g.kind == "agrawal") {
        j["function"] = g.agrawal.function;
        j["perturbation"] = g.agrawal.perturbation;
    } else if (g.kind == "rbf") {
        j["centroids"] = g.rbf.centroids;
        j["classes"] = g.rbf.classes;
        j["dims"] = g.rbf.dims;
        j["drift_speed"] = g.rbf.drift_speed;
    } else if (g.kind == "led") {
        j["noise"] = g.led.noise;
        j["swapped_attributes"] = g.led.swapped_attributes;
    } else if (g.kind == "file") {
        j["path"] = g.file.path;
        j["format"] = g.file.format == streams::FileFormat::arff ? "arff" : "csv";
        j["missing"] = g.file.missing == streams::MissingPolicy::zero_fill ? "zero_fill" : "error";
        j["encoding"] = g.file.encoding == streams::NominalEncoding::onehot ? "onehot" : "index";
    }
    return j;
}

inline ensemble::PoolMember parse_member(const json& j, const std::string& where) {
    ensemble::PoolMember m;
    m.learner.kind = as_string(require(j, where, "kind"), where + ".kind");
    if (m.learner.kind == "hoeffding_tree") {
        check_keys(j, where, {"kind", "grace_period", "split_confidence", "tie_threshold", "max_bytes", "raw_cost"});
        auto& ht = m.learner.ht;
        if (j.contains("grace_period")) ht.grace_period = static_cast<std::size_t>(as_count(j["grace_period"], where + ".grace_period"));
        if (j.contains("split_confidence")) ht.split_confidence = as_number(j["split_confidence"], where + ".split_confidence");
        if (j.contains("tie_threshold")) ht.tie_threshold = as_number(j["tie_threshold"], where + ".tie_threshold");
        if (j.contains("max_bytes")) ht.max_bytes = static_cast<std::size_t>(as_count(j["max_bytes"], where + ".max_bytes"));
        m.raw_cost = static_cast<double>(ht.max_bytes);
    } else if (m.learner.kind == "mlp") {
        check_keys(j, where, {"kind", "hidden", "learning_rate", "optimizer", "seed", "raw_cost"});
        auto& mlp = m.learner.mlp;
        if (j.contains("hidden")) mlp.hidden = static_cast<std::size_t>(as_count(j["hidden"], where + ".hidden"));
        if (j.contains("learning_rate")) mlp.learning_rate = as_number(j["learning_rate"], where + ".learning_rate");
        if (j.contains("optimizer")) {
            std::string o = as_string(j["optimizer"], where + ".optimizer");
            if (o == "sgd") mlp.optimizer = learners::Optimizer::sgd;
            else if (o == "adam") mlp.optimizer = learners::Optimizer::adam;
            else fail(where + ".optimizer", "expected 'sgd' or 'adam'");
        }
        if (j.contains("seed")) mlp.seed = as_count(j["seed"], where + ".seed");
        m.raw_cost = static_cast<double>(mlp.hidden);
    } else if (m.learner.kind == "majority") {
        check_keys(j, where, {"kind", "raw_cost"});
        m.raw_cost = 1.0;
    } else {
        fail(where + ".kind", "unknown learner kind '" + m.learner.kind + "'");
    }
    if (j.contains("raw_cost")) m.raw_cost = as_number(j["raw_cost"], where + ".raw_cost");
    return m;
}

inline json member_to_json(const ensemble::PoolMember& m) {
    json j;
    j["kind"] = m.learner.kind;
    if (m.learner.kind == "hoeffding_tree") {
        const auto& ht = m.learner.ht;
        j["grace_period"] = ht.grace_period;
        j["split_confidence"] = ht.split_confidence;
        j["tie_threshold"] = ht.tie_threshold;
        j["max_bytes"] = ht.max_bytes;
    } else if (m.learner.kind == "mlp") {
        const auto& mlp = m.learner.mlp;
        j["hidden"] = mlp.hidden;
        j["learning_rate"] = mlp.learning_rate;
        j["optimizer"] = mlp.optimizer == learners::Optimizer::adam ? "adam" : "sgd";
        j["seed"] = mlp.seed;
    }
    j["raw_cost"] = m.raw_cost;
    return j;
}

inline policies::PolicySpec parse_policy(const json& j, const std::string& where) {
    check_keys(j, where, {"kind", "zeta", "epsilon"});
    policies::PolicySpec p;
    p.kind = as_string(require(j, where, "kind"), where + ".kind");
    if (j.contains("zeta")) p.zeta = as_number(j["zeta"], where + ".zeta");
    if (j.contains("epsilon")) p.epsilon = as_number(j["epsilon"], where + ".epsilon");
    try {
        policies::validate_policy(p);
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    return p;
}

inline json policy_to_json(const policies::PolicySpec& p) {
    json j;
    j["kind"] = p.kind;
    if (p.kind == "zeta") j["zeta"] = p.zeta;
    j["epsilon"] = p.epsilon;
    return j;
}

inline std::string trim_double(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace detail

// Short unique label used in CSV columns and trace file names.
inline std::string policy_id(const policies::PolicySpec& p) {
    std::string id = p.kind;
    if (p.kind == "zeta") id += "_z" + detail::trim_double(p.zeta);
    if (p.epsilon > 0.0) id += "_e" + detail::trim_double(p.epsilon);
    return id;
}

inline ExperimentConfig parse_config(const json& root) {
    using namespace detail;
    check_keys(root, "top level",
               {"output_dir", "seeds", "jobs", "pool", "policies", "streams", "log"});
    ExperimentConfig cfg;
    if (root.contains("output_dir")) cfg.output_dir = as_string(root["output_dir"], "output_dir");
    if (cfg.output_dir.empty()) fail("output_dir", "must not be empty");

    const json& seeds = require(root, "top level", "seeds");
    if (!seeds.is_array() || seeds.empty()) fail("seeds", "expected a non-empty array");
    for (std::size_t i = 0; i < seeds.size(); ++i)
        cfg.seeds.push_back(as_count(seeds[i], "seeds[" + std::to_string(i) + "]"));

    if (root.contains("jobs")) {
        cfg.jobs = static_cast<int>(as_count(root["jobs"], "jobs"));
        if (cfg.jobs < 1) fail("jobs", "must be at least 1");
    }

    const json& pool = require(root, "top level", "pool");
    check_keys(pool, "pool", {"k", "tracker_window", "members"});
    cfg.k = static_cast<std::size_t>(as_count(require(pool, "pool", "k"), "pool.k"));
    if (cfg.k < 1) fail("pool.k", "must be at least 1");
    if (pool.contains("tracker_window")) {
        cfg.tracker_window = static_cast<std::size_t>(as_count(pool["tracker_window"], "pool.tracker_window"));
        if (cfg.tracker_window < 1) fail("pool.tracker_window", "must be at least 1");
    }
    const json& members = require(pool, "pool", "members");
    if (members.is_array()) {
        if (members.empty()) fail("pool.members", "expected a non-empty array");
        for (std::size_t i = 0; i < members.size(); ++i)
            cfg.members.push_back(parse_member(members[i], "pool.members[" + std::to_string(i) + "]"));
    } else if (members.is_object()) {
        check_keys(members, "pool.members", {"grid", "grace_periods", "seed_base"});
        std::string grid = as_string(require(members, "pool.members", "grid"), "pool.members.grid");
        if (grid == "mlp") {
            std::uint64_t base = 1;
            if (members.contains("seed_base")) base = as_count(members["seed_base"], "pool.members.seed_base");
            cfg.members = ensemble::mlp_grid(base);
        } else if (grid == "ht") {
            std::vector<std::size_t> graces;
            if (members.contains("grace_periods")) {
                const json& g = members["grace_periods"];
                if (!g.is_array() || g.empty()) fail("pool.members.grace_periods", "expected a non-empty array");
                for (std::size_t i = 0; i < g.size(); ++i)
                    graces.push_back(static_cast<std::size_t>(
                        as_count(g[i], "pool.members.grace_periods[" + std::to_string(i) + "]")));
            } else {
                graces = {50};
            }
            for (std::size_t grace : graces) {
                auto part = ensemble::ht_grid(static_cast<int>(grace));
                cfg.members.insert(cfg.members.end(), part.begin(), part.end());
            }
        } else {
            fail("pool.members.grid", "expected 'mlp' or 'ht'");
        }
    } else {
        fail("pool.members", "expected an array or a grid object");
    }
    if (cfg.k > cfg.members.size())
        fail("pool.k", "training budget " + std::to_string(cfg.k) + " exceeds pool size " +
                           std::to_string(cfg.members.size()));

    const json& pols = require(root, "top level", "policies");
    if (!pols.is_array() || pols.empty()) fail("policies", "expected a non-empty array");
    for (std::size_t i = 0; i < pols.size(); ++i)
        cfg.policy_list.push_back(detail::parse_policy(pols[i], "policies[" + std::to_string(i) + "]"));
    for (std::size_t i = 0; i < cfg.policy_list.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.policy_list.size(); ++j)
            if (policy_id(cfg.policy_list[i]) == policy_id(cfg.policy_list[j]))
                fail("policies", "duplicate policy '" + policy_id(cfg.policy_list[i]) + "'");

    const json& strs = require(root, "top level", "streams");
    if (!strs.is_array() || strs.empty()) fail("streams", "expected a non-empty array");
    for (std::size_t si = 0; si < strs.size(); ++si) {
        const std::string where = "streams[" + std::to_string(si) + "]";
        const json& s = strs[si];
        check_keys(s, where, {"name", "length", "concepts", "transitions"});
        StreamEntry entry;
        entry.name = as_string(require(s, where, "name"), where + ".name");
        if (entry.name.empty()) fail(where + ".name", "must not be empty");
        if (entry.name.find(',') != std::string::npos) fail(where + ".name", "must not contain ','");
        entry.length = as_count(require(s, where, "length"), where + ".length");
        if (entry.length < 1) fail(where + ".length", "must be at least 1");
        const json& concepts = require(s, where, "concepts");
        if (!concepts.is_array() || concepts.empty()) fail(where + ".concepts", "expected a non-empty array");
        for (std::size_t ci = 0; ci < concepts.size(); ++ci)
            entry.concepts.push_back(
                parse_generator(concepts[ci], where + ".concepts[" + std::to_string(ci) + "]"));
        if (s.contains("transitions")) {
            const json& trs = s["transitions"];
            if (!trs.is_array()) fail(where + ".transitions", "expected an array");
            for (std::size_t ti = 0; ti < trs.size(); ++ti) {
                const std::string tw = where + ".transitions[" + std::to_string(ti) + "]";
                const json& t = trs[ti];
                check_keys(t, tw, {"position", "position_fraction", "width"});
                streams::Transition tr;
                if (t.contains("position") == t.contains("position_fraction"))
                    fail(tw, "expected exactly one of 'position' and 'position_fraction'");
                if (t.contains("position")) {
                    tr.position = as_count(t["position"], tw + ".position");
                } else {
                    double f = as_number(t["position_fraction"], tw + ".position_fraction");
                    if (f <= 0.0 || f >= 1.0) fail(tw + ".position_fraction", "must lie in (0,1)");
                    tr.position = static_cast<std::uint64_t>(f * static_cast<double>(entry.length));
                }
                if (t.contains("width")) tr.width = as_count(t["width"], tw + ".width");
                entry.transitions.push_back(tr);
            }
        }
        if (entry.concepts.size() != entry.transitions.size() + 1)
            fail(where, "expected one more concept than transitions");
        cfg.stream_list.push_back(std::move(entry));
    }
    for (std::size_t i = 0; i < cfg.stream_list.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.stream_list.size(); ++j)
            if (cfg.stream_list[i].name == cfg.stream_list[j].name)
                fail("streams", "duplicate stream name '" + cfg.stream_list[i].name + "'");

    if (root.contains("log")) {
        const json& log = root["log"];
        check_keys(log, "log", {"run_logs", "gzip", "cost_traces", "trace_window"});
        auto as_bool = [](const json& v, const std::string& w) {
            if (!v.is_boolean()) fail(w, "expected a boolean");
            return v.get<bool>();
        };
        if (log.contains("run_logs")) cfg.log.run_logs = as_bool(log["run_logs"], "log.run_logs");
        if (log.contains("gzip")) cfg.log.gzip = as_bool(log["gzip"], "log.gzip");
        if (log.contains("cost_traces")) cfg.log.cost_traces = as_bool(log["cost_traces"], "log.cost_traces");
        if (log.contains("trace_window")) {
            cfg.log.trace_window = static_cast<std::size_t>(as_count(log["trace_window"], "log.trace_window"));
            if (cfg.log.trace_window < 1) fail("log.trace_window", "must be at least 1");
        }
    }
    return cfg;
}

// Fully resolved echo: grids expanded, fractions converted to absolute positions.
// Feeding this back through parse_config yields an equivalent experiment.
inline json to_json(const ExperimentConfig& cfg) {
    json root;
    root["output_dir"] = cfg.output_dir;
    root["seeds"] = cfg.seeds;
    root["jobs"] = cfg.jobs;
    json pool;
    pool["k"] = cfg.k;
    pool["tracker_window"] = cfg.tracker_window;
    json members = json::array();
    for (const auto& m : cfg.members) members.push_back(detail::member_to_json(m));
    pool["members"] = members;
    root["pool"] = pool;
    json pols = json::array();
    for (const auto& p : cfg.policy_list) pols.push_back(detail::policy_to_json(p));
    root["policies"] = pols;
    json strs = json::array();
    for (const auto& s : cfg.stream_list) {
        json e;
        e["name"] = s.name;
        e["length"] = s.length;
        json concepts = json::array();
        for (const auto& c : s.concepts) concepts.push_back(detail::generator_to_json(c));
        e["concepts"] = concepts;
        json trs = json::array();
        for (const auto& t : s.transitions) {
            json tj;
            tj["position"] = t.position;
            tj["width"] = t.width;
            trs.push_back(tj);
        }
        e["transitions"] = trs;
        strs.push_back(e);
    }
    root["streams"] = strs;
    json log;
    log["run_logs"] = cfg.log.run_logs;
    log["gzip"] = cfg.log.gzip;
    log["cost_traces"] = cfg.log.cost_traces;
    log["trace_window"] = cfg.log.trace_window;
    root["log"] = log;
    return root;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        // nlohmann reports "at line L, column C"; keep it verbatim.
        throw ParseError(std::string("config '") + path + "': " + e.what());
    }
}

// Overlay wins key-by-key; objects merge recursively, arrays and scalars replace.
inline void deep_merge(json& base, const json& overlay) {
    if (!base.is_object() || !overlay.is_object()) {
        base = overlay;
        return;
    }
    for (auto it = overlay.begin(); it != overlay.end(); ++it) {
        if (base.contains(it.key()))
            deep_merge(base[it.key()], it.value());
        else
            base[it.key()] = it.value();
    }
}

// Benchmark preset: the six drifting synthetic streams plus stationary RBF
// stand-ins shaped like the real-world benchmark tables (instances, features,
// classes), all capped at 1e5 instances so a full sweep stays inside a few
// minutes on one core.
inline ExperimentConfig paper_mini_preset() {
    json root;
    root["output_dir"] = "heros_out";
    root["seeds"] = {1, 2, 3};
    root["jobs"] = 1;
    // 2 optimizers x 5 learning rates x 2 hidden widths = 20 members; raw
    // cost follows the hidden-node count.
    json members = json::array();
    for (const char* opt : {"sgd", "adam"})
        for (double lr : {0.5, 0.1, 0.05, 0.01, 0.005})
            for (int hidden : {8, 32})
                members.push_back({{"kind", "mlp"},
                                   {"optimizer", opt},
                                   {"learning_rate", lr},
                                   {"hidden", hidden},
                                   {"seed", 1}});
    root["pool"] = {
        {"k", 12},
        {"tracker_window", 500},
        {"members", members},
    };
    root["policies"] = json::array({
        {{"kind", "perform_best"}, {"epsilon", 0.1}},
        {{"kind", "perform_worst"}, {"epsilon", 0.1}},
        {{"kind", "zeta"}, {"zeta", 0.01}, {"epsilon", 0.1}},
    });

    const std::uint64_t len = 100000;
    json strs = json::array();
    auto agr = [](int fn) { return json{{"kind", "agrawal"}, {"function", fn}}; };
    auto abrupt = [](double f) { return json{{"position_fraction", f}, {"width", 50}}; };
    auto gradual = [len](double f) { return json{{"position_fraction", f}, {"width", len / 20}}; };
    strs.push_back({{"name", "agr_a"},
                    {"length", len},
                    {"concepts", {agr(1), agr(2), agr(4), agr(7)}},
                    {"transitions", {abrupt(0.25), abrupt(0.5), abrupt(0.75)}}});
    strs.push_back({{"name", "agr_g"},
                    {"length", len},
                    {"concepts", {agr(1), agr(2), agr(4), agr(7)}},
                    {"transitions", {gradual(0.25), gradual(0.5), gradual(0.75)}}});
    auto rbf = [](std::size_t dims, std::size_t classes, double speed) {
        return json{{"kind", "rbf"}, {"centroids", 50}, {"classes", classes}, {"dims", dims}, {"drift_speed", speed}};
    };
    strs.push_back({{"name", "rbf_m"}, {"length", len}, {"concepts", {rbf(10, 5, 1e-4)}}, {"transitions", json::array()}});
    strs.push_back({{"name", "rbf_f"}, {"length", len}, {"concepts", {rbf(10, 5, 1e-3)}}, {"transitions", json::array()}});
    auto led = [](std::size_t swapped) {
        return json{{"kind", "led"}, {"noise", 0.1}, {"swapped_attributes", swapped}};
    };
    strs.push_back({{"name", "led_a"},
                    {"length", len},
                    {"concepts", {led(0), led(3), led(0), led(3)}},
                    {"transitions", {abrupt(0.25), abrupt(0.5), abrupt(0.75)}}});
    strs.push_back({{"name", "led_g"},
                    {"length", len},
                    {"concepts", {led(0), led(7), led(0), led(7)}},
                    {"transitions", {gradual(0.25), gradual(0.5), gradual(0.75)}}});
    auto stationary = [&](const std::string& name, std::uint64_t n, std::size_t dims, std::size_t classes) {
        return json{{"name", name},
                    {"length", std::min<std::uint64_t>(n, len)},
                    {"concepts", json::array({rbf(dims, classes, 0.0)})},
                    {"transitions", json::array()}};
    };
    strs.push_back(stationary("airlines", 539382, 7, 2));
    strs.push_back(stationary("electricity", 45310, 8, 2));
    strs.push_back(stationary("wisdm", 5417, 45, 6));
    strs.push_back(stationary("covtype", 581010, 54, 7));
    strs.push_back(stationary("nomao", 34464, 118, 2));
    root["streams"] = strs;
    root["log"] = {{"run_logs", false}, {"gzip", false}, {"cost_traces", true}, {"trace_window", 300}};
    return parse_config(root);
}

inline json preset_json(const std::string& name) {
    if (name == "paper-mini") return to_json(paper_mini_preset());
    throw ParseError("unknown preset '" + name + "'");
}

// --- experiment runner ---------------------------------------------------

// Raised when some grid cells fail; carries the runs that did finish so the
// caller can still persist them.
struct PartialRunError : Error {
    std::vector<eval::RunResult> completed;
    PartialRunError(const std::string& msg, std::vector<eval::RunResult> done)
        : Error(msg), completed(std::move(done)) {}
};

struct RunJob {
    std::size_t stream_idx = 0;
    std::size_t policy_idx = 0;
    std::size_t seed_idx = 0;
};

inline std::vector<RunJob> expand_grid(const ExperimentConfig& cfg) {
    std::vector<RunJob> jobs;
    for (std::size_t si = 0; si < cfg.stream_list.size(); ++si)
        for (std::size_t pi = 0; pi < cfg.policy_list.size(); ++pi)
            for (std::size_t di = 0; di < cfg.seeds.size(); ++di)
                jobs.push_back({si, pi, di});
    return jobs;
}

inline std::unique_ptr<streams::StreamSource> build_stream(const StreamEntry& entry,
                                                           std::uint64_t seed) {
    if (entry.concepts.size() == 1) {
        streams::StreamSpec spec;
        spec.generator = entry.concepts[0];
        spec.length = entry.length;
        spec.seed = seed;
        return streams::make_stream(spec);
    }
    streams::DriftSchedule schedule;
    for (const auto& c : entry.concepts) {
        streams::StreamSpec concept_spec;
        concept_spec.generator = c;
        schedule.concepts.push_back(concept_spec);
    }
    schedule.transitions = entry.transitions;
    return streams::make_drift_stream(schedule, entry.length, seed);
}

// Stream seed depends on (stream, config seed) only, never on the policy, so
// every policy sees the same instance sequence within a repetition.
inline std::uint64_t stream_seed(std::uint64_t config_seed, std::size_t stream_idx) {
    return Rng(config_seed).derive(0x517e0000ULL + stream_idx).seed();
}

inline std::uint64_t policy_seed(std::uint64_t config_seed, std::size_t policy_idx) {
    return Rng(config_seed).derive(0x70110000ULL + policy_idx).seed();
}

inline std::string sanitize_name(std::string s) {
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.') c = '_';
    return s;
}

inline eval::RunResult execute_job(const ExperimentConfig& cfg, const RunJob& job) {
    const StreamEntry& entry = cfg.stream_list[job.stream_idx];
    const std::uint64_t seed = cfg.seeds[job.seed_idx];

    auto stream = build_stream(entry, stream_seed(seed, job.stream_idx));

    ensemble::PoolSpec pool;
    pool.members = cfg.members;
    pool.k = cfg.k;
    pool.tracker_window = cfg.tracker_window;
    pool.policy = cfg.policy_list[job.policy_idx];
    pool.policy.seed = policy_seed(seed, job.policy_idx);

    const std::string pid = policy_id(pool.policy);
    const std::string stem =
        sanitize_name(entry.name) + "__" + sanitize_name(pid) + "__seed" + std::to_string(seed);
    namespace fs = std::filesystem;
    eval::RunOptions opts;
    if (cfg.log.cost_traces) {
        fs::create_directories(fs::path(cfg.output_dir) / "traces");
        opts.cost_trace_path = (fs::path(cfg.output_dir) / "traces" / (stem + ".csv")).string();
        opts.cost_trace_window = cfg.log.trace_window;
    }
    if (cfg.log.run_logs) {
        fs::create_directories(fs::path(cfg.output_dir) / "logs");
        opts.run_log_path =
            (fs::path(cfg.output_dir) / "logs" / (stem + (cfg.log.gzip ? ".jsonl.gz" : ".jsonl"))).string();
        opts.gzip_log = cfg.log.gzip;
    }
    return eval::prequential_run(pool, *stream, pid, entry.name, seed, opts);
}

// Runs the whole grid with a thread pool; the result order is the grid order,
// independent of scheduling.
inline std::vector<eval::RunResult> run_experiment(const ExperimentConfig& cfg, int jobs_override = 0,
                                                   std::ostream* progress = nullptr) {
    const std::vector<RunJob> jobs = expand_grid(cfg);
    std::vector<eval::RunResult> results(jobs.size());
    std::vector<std::string> errors;
    std::mutex mu;
    std::size_t next = 0;
    const int workers = std::max(1, jobs_override > 0 ? jobs_override : cfg.jobs);

    auto worker = [&] {
        for (;;) {
            std::size_t idx;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next >= jobs.size() || !errors.empty()) return;
                idx = next++;
            }
            const RunJob& job = jobs[idx];
            try {
                eval::RunResult r = execute_job(cfg, job);
                std::lock_guard<std::mutex> lock(mu);
                results[idx] = std::move(r);
                if (progress)
                    (*progress) << "[" << (idx + 1) << "/" << jobs.size() << "] "
                                << results[idx].dataset_id << " " << results[idx].policy_id
                                << " seed " << results[idx].seed << " acc=" << results[idx].accuracy
                                << "\n";
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(mu);
                errors.push_back(cfg.stream_list[job.stream_idx].name + "/" +
                                 policy_id(cfg.policy_list[job.policy_idx]) + "/seed" +
                                 std::to_string(cfg.seeds[job.seed_idx]) + ": " + e.what());
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (!errors.empty()) {
        std::vector<eval::RunResult> done;
        for (auto& r : results)
            if (!r.dataset_id.empty()) done.push_back(std::move(r));
        throw PartialRunError("run failed: " + errors.front(), std::move(done));
    }
    return results;
}

// Writes every report artifact; results.csv et al. are bitwise reproducible.
inline void write_reports(const ExperimentConfig& cfg, const std::vector<eval::RunResult>& results) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    const fs::path out(cfg.output_dir);
    eval::write_results_csv((out / "results.csv").string(), results);
    eval::write_timings_csv((out / "timings.csv").string(), results);
    eval::write_summary_csv((out / "summary.csv").string(), results);
    eval::write_ranks_csv((out / "ranks.csv").string(), results);
    eval::write_significance_csv((out / "significance.csv").string(), results);
}

inline void write_resolved_config(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    std::ofstream out(fs::path(cfg.output_dir) / "resolved_config.json");
    out << to_json(cfg).dump(2) << "\n";
}

}  // namespace heros::config
