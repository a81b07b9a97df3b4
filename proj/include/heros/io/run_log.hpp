#pragma once

// JSON-lines run log, one record per step, optionally gzip-compressed.
// Doubles are written with 17 significant digits so replay reads back the
// exact values.

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "heros/core/costs.hpp"
#include "heros/ensemble/heros.hpp"
#include "heros/errors.hpp"
#include <json.hpp>

namespace heros::io {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string to_json_line(const ensemble::StepRecord& r) {
  std::string line;
  line.reserve(160);
  line += "{\"step\":" + std::to_string(r.step);
  line += ",\"predicted\":" + std::to_string(r.predicted);
  line += ",\"label\":" + std::to_string(r.label);
  line += ",\"mask\":\"" + r.mask_hex + "\"";
  line += ",\"charged_cost\":" + format_double(r.charged_cost);
  line += ",\"reward\":" + format_double(r.reward);
  line += ",\"ensemble_score\":" + format_double(r.ensemble_score);
  line += "}\n";
  return line;
}

class RunLogWriter {
 public:
  RunLogWriter(const std::string& path, bool gzip) : gzip_(gzip) {
    if (gzip_) {
      gz_ = gzopen(path.c_str(), "wb");
      if (gz_ == nullptr) throw Error("cannot open " + path + " for writing");
    } else {
      out_.open(path, std::ios::binary);
      if (!out_) throw Error("cannot open " + path + " for writing");
    }
  }

  RunLogWriter(const RunLogWriter&) = delete;
  RunLogWriter& operator=(const RunLogWriter&) = delete;

  ~RunLogWriter() { close(); }

  void write(const ensemble::StepRecord& r) {
    const std::string line = to_json_line(r);
    if (gzip_) {
      gzwrite(gz_, line.data(), static_cast<unsigned>(line.size()));
    } else {
      out_.write(line.data(), static_cast<std::streamsize>(line.size()));
    }
  }

  void close() {
    if (gzip_ && gz_ != nullptr) {
      gzclose(gz_);
      gz_ = nullptr;
    } else if (out_.is_open()) {
      out_.close();
    }
  }

 private:
  bool gzip_ = false;
  gzFile gz_ = nullptr;
  std::ofstream out_;
};

// Reads a run log back (gzip detected via zlib's transparent mode).
inline std::vector<ensemble::StepRecord> read_run_log(const std::string& path) {
  gzFile in = gzopen(path.c_str(), "rb");
  if (in == nullptr) throw Error("cannot open " + path);
  std::vector<ensemble::StepRecord> records;
  std::string line;
  char buf[4096];
  const auto flush_line = [&] {
    if (line.empty()) return;
    const nlohmann::json j = nlohmann::json::parse(line);
    ensemble::StepRecord r;
    r.step = j.at("step").get<std::uint64_t>();
    r.predicted = j.at("predicted").get<int>();
    r.label = j.at("label").get<int>();
    r.mask_hex = j.at("mask").get<std::string>();
    r.charged_cost = j.at("charged_cost").get<double>();
    r.charged_units = cost_to_units(r.charged_cost);
    r.reward = j.at("reward").get<double>();
    r.ensemble_score = j.at("ensemble_score").get<double>();
    records.push_back(std::move(r));
    line.clear();
  };
  while (gzgets(in, buf, sizeof(buf)) != nullptr) {
    line += buf;
    if (!line.empty() && line.back() == '\n') {
      line.pop_back();
      flush_line();
    }
  }
  flush_line();
  gzclose(in);
  return records;
}

// Rebuilds an action mask from its hex encoding (slot 0 = LSB).
inline std::vector<std::uint8_t> mask_from_hex(const std::string& hex, std::size_t m) {
  std::vector<std::uint8_t> mask(m, 0);
  for (std::size_t nib = 0; nib < hex.size(); ++nib) {
    const char c = hex[hex.size() - 1 - nib];
    int v;
    if (c >= '0' && c <= '9')
      v = c - '0';
    else if (c >= 'a' && c <= 'f')
      v = c - 'a' + 10;
    else
      throw ParseError(std::string("bad mask nibble '") + c + "'");
    for (int b = 0; b < 4; ++b) {
      const std::size_t i = nib * 4 + static_cast<std::size_t>(b);
      if ((v & (1 << b)) == 0) continue;
      if (i >= m) throw ShapeMismatch("mask bit beyond pool size");
      mask[i] = 1;
    }
  }
  return mask;
}

}  // namespace heros::io
