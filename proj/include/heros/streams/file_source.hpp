#pragma once

// Dataset ingestion. CSV: RFC-4180 quoting, required header row, column types
// inferred (a column is numeric when every value parses as a double, nominal
// otherwise with value indices assigned in order of first appearance). ARFF:
// @relation/@attribute/@data subset with numeric and nominal attributes. The
// last column is always the class. Nominal features are index encoded by
// default or expanded to one-hot per config.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "heros/streams/stream.hpp"

namespace heros::streams {

enum class FileFormat { csv, arff };
enum class MissingPolicy { error, zero_fill };
enum class NominalEncoding { index, onehot };

struct FileConfig {
  std::string path;
  FileFormat format = FileFormat::csv;
  MissingPolicy missing = MissingPolicy::error;
  NominalEncoding encoding = NominalEncoding::index;
};

namespace detail {

inline bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

inline bool is_missing(const std::string& s) { return s.empty() || s == "?"; }

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line where the record starts
};

// RFC-4180 reader over the whole text; quoted fields may contain commas,
// escaped quotes ("") and newlines.
inline std::vector<Record> read_csv_records(const std::string& text) {
  std::vector<Record> records;
  std::vector<std::string> fields;
  std::string field;
  std::size_t line = 1, record_line = 1;
  bool in_quotes = false, field_started = false, any_field = false;
  const auto flush_field = [&] {
    fields.push_back(std::move(field));
    field.clear();
    field_started = false;
    any_field = true;
  };
  const auto flush_record = [&] {
    flush_field();
    records.push_back({std::move(fields), record_line});
    fields.clear();
    any_field = false;
    record_line = line;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field_started && field.empty())
          in_quotes = true;
        else
          field.push_back(ch);
        field_started = true;
        break;
      case ',':
        flush_field();
        break;
      case '\r':
        break;
      case '\n':
        ++line;
        if (any_field || field_started || !field.empty()) flush_record();
        record_line = line;
        break;
      default:
        field.push_back(ch);
        field_started = true;
        break;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field", line);
  if (any_field || field_started || !field.empty()) flush_record();
  return records;
}

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '\'' && s.back() == '\'') ||
                        (s.front() == '"' && s.back() == '"')))
    return s.substr(1, s.size() - 2);
  return s;
}

struct ArffAttr {
  std::string name;
  bool numeric = true;
  std::vector<std::string> values;
  std::map<std::string, int> index;
};

// Splits an ARFF data row or nominal spec on commas, honoring ' and " quotes.
inline std::vector<std::string> split_arff(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  char quote = 0;
  for (char ch : s) {
    if (quote != 0) {
      if (ch == quote)
        quote = 0;
      else
        cur.push_back(ch);
      continue;
    }
    if (ch == '\'' || ch == '"') {
      quote = ch;
    } else if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace detail

class FileSource final : public StreamSource {
 public:
  explicit FileSource(FileConfig cfg) : cfg_(std::move(cfg)) {
    std::ifstream in(cfg_.path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + cfg_.path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (cfg_.format == FileFormat::csv)
      load_csv(text);
    else
      load_arff(text);
    if (instances_.empty()) throw EmptyStream(cfg_.path + " holds no instances");
    if (cfg_.encoding == NominalEncoding::onehot) expand_onehot();
  }

  std::optional<Instance> next() override {
    if (pos_ >= instances_.size()) return std::nullopt;
    return instances_[pos_++];
  }

  const StreamSchema& schema() const override { return schema_; }
  std::size_t size() const { return instances_.size(); }
  const std::vector<std::string>& class_names() const { return class_names_; }

 private:
  void load_csv(const std::string& text) {
    auto records = detail::read_csv_records(text);
    if (records.empty()) throw EmptyStream(cfg_.path + " is empty");
    const std::size_t width = records.front().fields.size();
    if (width < 2) throw ParseError("need at least one feature column and a class column",
                                    records.front().line);
    for (const auto& r : records)
      if (r.fields.size() != width)
        throw ParseError("expected " + std::to_string(width) + " fields, found " +
                             std::to_string(r.fields.size()),
                         r.line);

    const std::size_t n_features = width - 1;
    std::vector<bool> numeric(n_features, true);
    for (std::size_t j = 0; j < n_features; ++j) {
      for (std::size_t i = 1; i < records.size(); ++i) {
        const std::string& v = records[i].fields[j];
        double d;
        if (!detail::is_missing(v) && !detail::parse_double(v, d)) {
          numeric[j] = false;
          break;
        }
      }
    }
    std::vector<std::map<std::string, int>> nominal_index(n_features);
    std::vector<std::vector<std::string>> nominal_values(n_features);
    std::map<std::string, int> label_index;
    for (std::size_t i = 1; i < records.size(); ++i) {
      const auto& r = records[i];
      Instance x;
      x.features.reserve(n_features);
      for (std::size_t j = 0; j < n_features; ++j) {
        const std::string& v = r.fields[j];
        if (detail::is_missing(v)) {
          if (cfg_.missing == MissingPolicy::error)
            throw ParseError("missing value in column " + records.front().fields[j], r.line);
          x.features.push_back(0.0);
          continue;
        }
        if (numeric[j]) {
          double d;
          detail::parse_double(v, d);
          x.features.push_back(d);
        } else {
          auto [it, inserted] =
              nominal_index[j].try_emplace(v, static_cast<int>(nominal_values[j].size()));
          if (inserted) nominal_values[j].push_back(v);
          x.features.push_back(static_cast<double>(it->second));
        }
      }
      const std::string& cls = r.fields[n_features];
      if (detail::is_missing(cls)) throw ParseError("missing class label", r.line);
      auto [it, inserted] = label_index.try_emplace(cls, static_cast<int>(class_names_.size()));
      if (inserted) class_names_.push_back(cls);
      x.label = it->second;
      instances_.push_back(std::move(x));
    }
    if (class_names_.size() < 2) throw ParseError("need at least two class labels");
    schema_.num_classes = static_cast<int>(class_names_.size());
    for (std::size_t j = 0; j < n_features; ++j) {
      if (numeric[j])
        schema_.attributes.push_back({AttributeInfo::Kind::numeric, 0, records[0].fields[j]});
      else
        schema_.attributes.push_back({AttributeInfo::Kind::nominal,
                                      static_cast<int>(nominal_values[j].size()),
                                      records[0].fields[j]});
    }
  }

  void load_arff(const std::string& text) {
    std::vector<detail::ArffAttr> attrs;
    bool in_data = false;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      const std::string stripped = detail::trim(raw);
      if (stripped.empty() || stripped[0] == '%') continue;
      if (!in_data) {
        const std::string low = detail::lower(stripped);
        if (low.rfind("@relation", 0) == 0) continue;
        if (low.rfind("@data", 0) == 0) {
          if (attrs.size() < 2)
            throw ParseError("need at least one feature attribute and a class attribute",
                             line_no);
          in_data = true;
          continue;
        }
        if (low.rfind("@attribute", 0) == 0) {
          attrs.push_back(parse_attribute(stripped, line_no));
          continue;
        }
        throw ParseError("unrecognized header directive: " + stripped, line_no);
      }
      auto fields = detail::split_arff(stripped);
      if (fields.size() != attrs.size())
        throw ParseError("expected " + std::to_string(attrs.size()) + " fields, found " +
                             std::to_string(fields.size()),
                         line_no);
      Instance x;
      x.features.reserve(attrs.size() - 1);
      for (std::size_t j = 0; j + 1 < attrs.size(); ++j) {
        const std::string& v = fields[j];
        if (detail::is_missing(v)) {
          if (cfg_.missing == MissingPolicy::error)
            throw ParseError("missing value for attribute " + attrs[j].name, line_no);
          x.features.push_back(0.0);
          continue;
        }
        if (attrs[j].numeric) {
          double d;
          if (!detail::parse_double(v, d))
            throw ParseError("bad numeric value '" + v + "' for attribute " + attrs[j].name,
                             line_no);
          x.features.push_back(d);
        } else {
          auto it = attrs[j].index.find(v);
          if (it == attrs[j].index.end())
            throw ParseError("undeclared value '" + v + "' for attribute " + attrs[j].name,
                             line_no);
          x.features.push_back(static_cast<double>(it->second));
        }
      }
      detail::ArffAttr& cls = attrs.back();
      const std::string& v = fields.back();
      auto it = cls.index.find(v);
      if (it == cls.index.end())
        throw ParseError("unknown class label '" + v + "'", line_no);
      x.label = it->second;
      instances_.push_back(std::move(x));
    }
    if (!in_data) throw ParseError("missing @data section");
    const detail::ArffAttr& cls = attrs.back();
    if (cls.numeric || cls.values.size() < 2)
      throw ParseError("class attribute must be nominal with at least two values");
    class_names_ = cls.values;
    schema_.num_classes = static_cast<int>(cls.values.size());
    for (std::size_t j = 0; j + 1 < attrs.size(); ++j) {
      if (attrs[j].numeric)
        schema_.attributes.push_back({AttributeInfo::Kind::numeric, 0, attrs[j].name});
      else
        schema_.attributes.push_back({AttributeInfo::Kind::nominal,
                                      static_cast<int>(attrs[j].values.size()), attrs[j].name});
    }
  }

  static detail::ArffAttr parse_attribute(const std::string& stripped, std::size_t line_no) {
    std::string rest = detail::trim(stripped.substr(std::string("@attribute").size()));
    std::string name;
    if (!rest.empty() && (rest[0] == '\'' || rest[0] == '"')) {
      const char q = rest[0];
      const std::size_t end = rest.find(q, 1);
      if (end == std::string::npos) throw ParseError("unterminated attribute name", line_no);
      name = rest.substr(1, end - 1);
      rest = detail::trim(rest.substr(end + 1));
    } else {
      const std::size_t sp = rest.find_first_of(" \t");
      if (sp == std::string::npos) throw ParseError("attribute needs a type", line_no);
      name = rest.substr(0, sp);
      rest = detail::trim(rest.substr(sp));
    }
    detail::ArffAttr attr;
    attr.name = name;
    if (!rest.empty() && rest.front() == '{') {
      if (rest.back() != '}') throw ParseError("unterminated nominal value set", line_no);
      attr.numeric = false;
      for (const auto& v : detail::split_arff(rest.substr(1, rest.size() - 2))) {
        const std::string clean = detail::unquote(v);
        if (attr.index.count(clean))
          throw ParseError("duplicate nominal value '" + clean + "'", line_no);
        attr.index[clean] = static_cast<int>(attr.values.size());
        attr.values.push_back(clean);
      }
      if (attr.values.empty()) throw ParseError("empty nominal value set", line_no);
      return attr;
    }
    const std::string type = detail::lower(rest);
    if (type == "numeric" || type == "real" || type == "integer") return attr;
    throw ParseError("unsupported attribute type '" + rest + "'", line_no);
  }

  void expand_onehot() {
    StreamSchema flat;
    flat.num_classes = schema_.num_classes;
    for (const auto& a : schema_.attributes) {
      if (a.kind == AttributeInfo::Kind::numeric) {
        flat.attributes.push_back(a);
      } else {
        for (int v = 0; v < a.num_values; ++v)
          flat.attributes.push_back(
              {AttributeInfo::Kind::numeric, 0, a.name + "=" + std::to_string(v)});
      }
    }
    for (Instance& x : instances_) {
      std::vector<double> expanded;
      expanded.reserve(flat.num_attributes());
      for (std::size_t j = 0; j < schema_.attributes.size(); ++j) {
        const auto& a = schema_.attributes[j];
        if (a.kind == AttributeInfo::Kind::numeric) {
          expanded.push_back(x.features[j]);
        } else {
          for (int v = 0; v < a.num_values; ++v)
            expanded.push_back(x.features[j] == static_cast<double>(v) ? 1.0 : 0.0);
        }
      }
      x.features = std::move(expanded);
    }
    schema_ = std::move(flat);
  }

  FileConfig cfg_;
  StreamSchema schema_;
  std::vector<Instance> instances_;
  std::vector<std::string> class_names_;
  std::size_t pos_ = 0;
};

}  // namespace heros::streams
