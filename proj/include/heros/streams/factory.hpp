#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "heros/rng.hpp"
#include "heros/streams/agrawal.hpp"
#include "heros/streams/drift.hpp"
#include "heros/streams/file_source.hpp"
#include "heros/streams/led.hpp"
#include "heros/streams/rbf.hpp"
#include "heros/streams/stream.hpp"

namespace heros::streams {

struct GeneratorSpec {
  std::string kind = "agrawal";  // agrawal | rbf | led | file
  AgrawalConfig agrawal;
  RbfConfig rbf;
  LedConfig led;
  FileConfig file;
};

struct StreamSpec {
  GeneratorSpec generator;
  std::uint64_t length = 1;
  std::uint64_t seed = 1;
};

// Drift composition over full stream specs. One seed drives the whole
// composite: concept generators get seeds derived from it (index 0, 1, ...),
// the transition mixer gets its own derived stream, so per-concept seeds in
// the specs are ignored here.
struct DriftSchedule {
  std::vector<StreamSpec> concepts;
  std::vector<Transition> transitions;
};

inline std::unique_ptr<StreamSource> make_generator(const GeneratorSpec& g, std::uint64_t seed) {
  if (g.kind == "agrawal") {
    AgrawalConfig c = g.agrawal;
    c.seed = seed;
    return std::make_unique<AgrawalSource>(c);
  }
  if (g.kind == "rbf") {
    RbfConfig c = g.rbf;
    c.seed = seed;
    return std::make_unique<RbfSource>(c);
  }
  if (g.kind == "led") {
    LedConfig c = g.led;
    c.seed = seed;
    return std::make_unique<LedSource>(c);
  }
  if (g.kind == "file") return std::make_unique<FileSource>(g.file);
  throw ParseError("unknown stream generator kind: " + g.kind);
}

inline std::unique_ptr<StreamSource> make_stream(const StreamSpec& spec) {
  if (spec.length < 1) throw InvalidBudget("stream length must be >= 1");
  return std::make_unique<LimitSource>(make_generator(spec.generator, spec.seed), spec.length);
}

inline std::unique_ptr<StreamSource> make_drift_stream(const DriftSchedule& sched,
                                                       std::uint64_t length, std::uint64_t seed) {
  if (length < 1) throw InvalidBudget("stream length must be >= 1");
  Rng root(seed);
  std::vector<std::unique_ptr<StreamSource>> concepts;
  concepts.reserve(sched.concepts.size());
  for (std::size_t i = 0; i < sched.concepts.size(); ++i)
    concepts.push_back(make_generator(sched.concepts[i].generator, root.derive(i).seed()));
  auto drift = std::make_unique<DriftSource>(std::move(concepts), sched.transitions,
                                             root.derive(0xD71F7).seed());
  return std::make_unique<LimitSource>(std::move(drift), length);
}

}  // namespace heros::streams
