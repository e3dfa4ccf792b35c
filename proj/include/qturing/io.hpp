#pragma once

// JSON automaton files.
//
//   {"kind": "dqta", "h": 1, "k": 2, "l": 2,
//    "labels": {"input": [{"name": "a", "dim": 1}, "b"], "output": [...]},
//    "matrix": [[[re, im], ...], ...]}
//
// A qta stores its rank in "k", omits "l" and labels its single interface
// under "rank". Doubles are written with 17 significant digits, so a write
// followed by a parse reproduces every entry bit for bit.

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <optional>

#include "qturing/cells.hpp"
#include "qturing/dqta.hpp"
#include "qturing/errors.hpp"
#include "qturing/intcat.hpp"
#include "qturing/labels.hpp"
#include "qturing/linalg.hpp"

namespace qturing {

enum class AutomatonKind { dqta, qta };

struct AutomatonFile {
  AutomatonKind kind = AutomatonKind::dqta;
  std::size_t h = 1;
  std::size_t k = 0;
  std::size_t l = 0;  ///< unused for qta
  Operator matrix;
  Labels input_labels;   ///< qta: labels of the rank space
  Labels output_labels;  ///< unused for qta
};

namespace detail {

using nlohmann::json;

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

class FieldReader {
 public:
  explicit FieldReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw FormatError(source_ + ": field " + path + ": " + msg);
  }

  const json& member(const json& obj, const std::string& key, const std::string& path) const {
    if (!obj.is_object()) fail(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing");
    return *it;
  }

  std::size_t dim(const json& v, const std::string& path) const {
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(path, "expected a nonnegative integer");
    return v.get<std::size_t>();
  }

  double real(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  Complex complex(const json& v, const std::string& path) const {
    if (!v.is_array() || v.size() != 2) fail(path, "expected a [re, im] pair");
    return {real(v[0], path + "[0]"), real(v[1], path + "[1]")};
  }

  Operator matrix(const json& v, const std::string& path) const {
    if (!v.is_array()) fail(path, "expected a list of rows");
    const std::size_t rows = v.size();
    const std::size_t cols = rows == 0 ? 0 : (v[0].is_array() ? v[0].size() : 0);
    Operator m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      const std::string rp = path + "[" + std::to_string(r) + "]";
      if (!v[r].is_array()) fail(rp, "expected a row");
      if (v[r].size() != cols)
        fail(rp, "row has " + std::to_string(v[r].size()) + " entries, expected " +
                     std::to_string(cols));
      for (std::size_t c = 0; c < cols; ++c)
        m(static_cast<Index>(r), static_cast<Index>(c)) =
            complex(v[r][c], rp + "[" + std::to_string(c) + "]");
    }
    return m;
  }

  Labels labels(const json& v, const std::string& path) const {
    if (!v.is_array()) fail(path, "expected a list of labels");
    Labels out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string p = path + "[" + std::to_string(i) + "]";
      if (v[i].is_string()) {
        out.push_back({v[i].get<std::string>(), 1});
      } else if (v[i].is_object()) {
        const json& name = member(v[i], "name", p);
        if (!name.is_string()) fail(p + ".name", "expected a string");
        std::size_t d = 1;
        if (v[i].contains("dim")) d = dim(v[i]["dim"], p + ".dim");
        out.push_back({name.get<std::string>(), d});
      } else {
        fail(p, "expected a string or {name, dim}");
      }
    }
    return out;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

inline json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(source + ":" + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) +
                      ": malformed JSON (" + e.what() + ")");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path + ": cannot open file for writing");
  out << text;
  if (!out) throw FormatError(path + ": write failed");
}

inline nlohmann::ordered_json labels_json(const Labels& labels) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& lab : labels) arr.push_back({{"name", lab.name}, {"dim", lab.dim}});
  return arr;
}

inline std::string number17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
  return buf;
}

}  // namespace detail

/// Parses and shape-checks a file; isometry/unitarity is checked by to_dqta/to_qta.
inline AutomatonFile parse_automaton_text(const std::string& text,
                                          const std::string& source = "<input>") {
  const auto doc = detail::parse_json(text, source);
  const detail::FieldReader rd(source);
  AutomatonFile f;
  const auto& kind = rd.member(doc, "kind", "");
  if (kind == "dqta") {
    f.kind = AutomatonKind::dqta;
  } else if (kind == "qta") {
    f.kind = AutomatonKind::qta;
  } else {
    rd.fail(".kind", "expected \"dqta\" or \"qta\"");
  }
  f.h = rd.dim(rd.member(doc, "h", ""), ".h");
  f.k = rd.dim(rd.member(doc, "k", ""), ".k");
  if (f.h == 0) rd.fail(".h", "state space must be nonzero");
  f.matrix = rd.matrix(rd.member(doc, "matrix", ""), ".matrix");
  std::size_t rows = f.h * f.k, cols = f.h * f.k;
  if (f.kind == AutomatonKind::dqta) {
    f.l = rd.dim(rd.member(doc, "l", ""), ".l");
    rows = f.h * f.l;
  }
  if (static_cast<std::size_t>(f.matrix.rows()) != rows ||
      (rows > 0 && static_cast<std::size_t>(f.matrix.cols()) != cols))
    throw ShapeError(source + ": matrix is " + shape_of(f.matrix) + ", expected " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  if (rows == 0) f.matrix.resize(0, static_cast<Index>(cols));

  if (doc.contains("labels")) {
    const auto& labels = doc["labels"];
    if (!labels.is_object()) rd.fail(".labels", "expected an object");
    const auto take = [&](const char* key, std::size_t total, Labels& dst) {
      if (!labels.contains(key)) return;
      const std::string path = std::string(".labels.") + key;
      dst = rd.labels(labels[key], path);
      if (labels_total(dst) != total)
        rd.fail(path, "labels cover " + std::to_string(labels_total(dst)) + " dims, interface has " +
                          std::to_string(total));
    };
    if (f.kind == AutomatonKind::dqta) {
      take("input", f.k, f.input_labels);
      take("output", f.l, f.output_labels);
    } else {
      take("rank", f.k, f.input_labels);
    }
  }
  return f;
}

inline AutomatonFile read_automaton(const std::string& path) {
  return parse_automaton_text(detail::read_file(path), path);
}

/// One matrix row per line; every other field on its own line.
inline std::string write_automaton_text(const AutomatonFile& f) {
  const bool q = f.kind == AutomatonKind::qta;
  std::ostringstream out;
  out << "{\n \"kind\": \"" << (q ? "qta" : "dqta") << "\",\n \"h\": " << f.h
      << ",\n \"k\": " << f.k << ",\n";
  if (!q) out << " \"l\": " << f.l << ",\n";
  nlohmann::ordered_json labels = nlohmann::ordered_json::object();
  if (q) {
    if (!f.input_labels.empty()) labels["rank"] = detail::labels_json(f.input_labels);
  } else {
    if (!f.input_labels.empty()) labels["input"] = detail::labels_json(f.input_labels);
    if (!f.output_labels.empty()) labels["output"] = detail::labels_json(f.output_labels);
  }
  if (!labels.empty()) out << " \"labels\": " << labels.dump() << ",\n";
  out << " \"matrix\": [";
  for (Index r = 0; r < f.matrix.rows(); ++r) {
    out << (r == 0 ? "\n  [" : ",\n  [");
    for (Index c = 0; c < f.matrix.cols(); ++c) {
      const Complex z = f.matrix(r, c);
      out << (c == 0 ? "[" : ", [") << detail::number17(z.real()) << ", "
          << detail::number17(z.imag()) << "]";
    }
    out << "]";
  }
  out << (f.matrix.rows() == 0 ? "]\n}\n" : "\n ]\n}\n");
  return out.str();
}

inline void write_automaton(const AutomatonFile& f, const std::string& path) {
  detail::write_file(path, write_automaton_text(f));
}

inline Dqta to_dqta(const AutomatonFile& f, double tol = kIsometryTol) {
  if (f.kind != AutomatonKind::dqta) throw ShapeError("expected a dqta file, got a qta");
  return Dqta::make(f.h, f.k, f.l, f.matrix, tol);
}

inline Qta to_qta(const AutomatonFile& f, double tol = kIsometryTol) {
  if (f.kind != AutomatonKind::qta) throw ShapeError("expected a qta file, got a dqta");
  return Qta::make(f.h, f.k, f.matrix, tol);
}

inline AutomatonFile to_file(const Dqta& t, Labels inputs = {}, Labels outputs = {}) {
  return {AutomatonKind::dqta, t.h(), t.k(), t.l(), t.transition(), std::move(inputs),
          std::move(outputs)};
}

inline AutomatonFile to_file(const Qta& q, Labels rank = {}) {
  return {AutomatonKind::qta, q.h(), q.rank(), 0, q.transition(), std::move(rank), {}};
}

inline AutomatonFile to_file(const Cell& c) {
  return to_file(c.automaton.dqta(), c.inputs, c.outputs);
}

inline Cell to_cell(const AutomatonFile& f) {
  const Dqta t = to_dqta(f);
  if (t.k() != t.l() || t.k() % 2 != 0)
    throw ShapeError("cell: interfaces must be 2S -> 2S, got " + std::to_string(t.k()) + " -> " +
                     std::to_string(t.l()));
  return {UnitaryDqta::make(t), t.k() / 2, f.input_labels, f.output_labels};
}

/// Rule file: {"states": S, "bits": B, "rules": [{"from": {"symbol": 0,
/// "dir": "R", "state": 1}, "to": {...}, "phase": [re, im]}, ...]}, or
/// {"states": S, "bits": B, "matrix": [...]} for an explicit unitary.
/// States are numbered from 1.
struct RuleFile {
  std::size_t states = 0;
  std::size_t bits = 0;
  std::optional<RuleTable> table;
  std::optional<Operator> matrix;
};

inline RuleFile parse_rule_text(const std::string& text, const std::string& source = "<rule>") {
  const auto doc = detail::parse_json(text, source);
  const detail::FieldReader rd(source);
  RuleFile rf;
  rf.states = rd.dim(rd.member(doc, "states", ""), ".states");
  rf.bits = rd.dim(rd.member(doc, "bits", ""), ".bits");
  if (doc.contains("matrix")) {
    rf.matrix = rd.matrix(doc["matrix"], ".matrix");
    return rf;
  }
  const auto& rules = rd.member(doc, "rules", "");
  if (!rules.is_array()) rd.fail(".rules", "expected a list");
  const auto config = [&](const nlohmann::json& v, const std::string& path) {
    CellConfig c;
    c.symbol = rd.dim(rd.member(v, "symbol", path), path + ".symbol");
    const auto& dir = rd.member(v, "dir", path);
    if (dir == "R") {
      c.dir = Direction::right;
    } else if (dir == "L") {
      c.dir = Direction::left;
    } else {
      rd.fail(path + ".dir", "expected \"R\" or \"L\"");
    }
    const std::size_t state = rd.dim(rd.member(v, "state", path), path + ".state");
    if (state == 0) rd.fail(path + ".state", "states are numbered from 1");
    c.state = state - 1;
    return c;
  };
  RuleTable table;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const std::string p = ".rules[" + std::to_string(i) + "]";
    RuleEntry e;
    e.from = config(rd.member(rules[i], "from", p), p + ".from");
    e.to = config(rd.member(rules[i], "to", p), p + ".to");
    if (rules[i].contains("phase")) e.phase = rd.complex(rules[i]["phase"], p + ".phase");
    table.entries.push_back(e);
  }
  rf.table = std::move(table);
  return rf;
}

inline Cell build_cell(const RuleFile& rf) {
  if (rf.matrix) return build_cell(rf.states, rf.bits, *rf.matrix);
  return build_cell(rf.states, rf.bits, rf.table.value_or(RuleTable{}));
}

}  // namespace qturing
