#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "annulus/common.hpp"
#include "annulus/version.hpp"

/// Machine-readable verification reports.  Reports serialize bit-stably:
/// object keys are emitted in sorted order, floating-point values are
/// printed with 17 significant digits, and complex numbers appear as
/// [re, im] pairs, so identical runs produce byte-identical output.
namespace annulus {

/// Minimal ordered JSON value with deterministic serialization.
class Json {
public:
  enum class Kind { Null, Bool, Int, Double, String, Array, Object };

  Json() : m_kind(Kind::Null) {}
  Json(bool b) : m_kind(Kind::Bool), m_bool(b) {}
  Json(int v) : m_kind(Kind::Int), m_int(v) {}
  Json(long long v) : m_kind(Kind::Int), m_int(v) {}
  Json(std::uint64_t v) : m_kind(Kind::Int), m_int(static_cast<long long>(v)) {}
  Json(double v) : m_kind(Kind::Double), m_double(v) {}
  Json(const char* s) : m_kind(Kind::String), m_string(s) {}
  Json(std::string s) : m_kind(Kind::String), m_string(std::move(s)) {}
  Json(cx z) : m_kind(Kind::Array) {
    m_array.emplace_back(z.real());
    m_array.emplace_back(z.imag());
  }

  static Json array() {
    Json j;
    j.m_kind = Kind::Array;
    return j;
  }
  static Json object() {
    Json j;
    j.m_kind = Kind::Object;
    return j;
  }
  template <typename T>
  static Json array_of(const std::vector<T>& xs) {
    Json j = array();
    for (const T& x : xs) j.push_back(Json(x));
    return j;
  }

  Kind kind() const { return m_kind; }
  void push_back(Json v) {
    require(m_kind == Kind::Array, ErrorKind::Validation,
            "report: push_back on non-array");
    m_array.push_back(std::move(v));
  }
  Json& operator[](const std::string& key) {
    require(m_kind == Kind::Object, ErrorKind::Validation,
            "report: key access on non-object");
    return m_object[key];
  }

  /// 17-significant-digit float formatting; stable across runs.
  static std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  void dump(std::string& out) const {
    switch (m_kind) {
      case Kind::Null: out += "null"; return;
      case Kind::Bool: out += m_bool ? "true" : "false"; return;
      case Kind::Int: out += std::to_string(m_int); return;
      case Kind::Double: out += format_double(m_double); return;
      case Kind::String: dump_string(m_string, out); return;
      case Kind::Array: {
        out += '[';
        for (std::size_t i = 0; i < m_array.size(); ++i) {
          if (i) out += ',';
          m_array[i].dump(out);
        }
        out += ']';
        return;
      }
      case Kind::Object: {
        out += '{';
        bool first = true;
        for (const auto& [k, v] : m_object) {
          if (!first) out += ',';
          first = false;
          dump_string(k, out);
          out += ':';
          v.dump(out);
        }
        out += '}';
        return;
      }
    }
  }

  std::string dump() const {
    std::string out;
    dump(out);
    return out;
  }

private:
  static void dump_string(const std::string& s, std::string& out) {
    out += '"';
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
          } else {
            out += c;
          }
      }
    }
    out += '"';
  }

  Kind m_kind;
  bool m_bool = false;
  long long m_int = 0;
  double m_double = 0.0;
  std::string m_string;
  std::vector<Json> m_array;
  std::map<std::string, Json> m_object;
};

/// One verified claim: every numeric claim carries its threshold.
struct CheckRecord {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// A suite report with provenance; overall pass ⇔ every record passes.
struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> inputs;  ///< label -> content digest
  std::vector<CheckRecord> checks;
  Json values = Json::object();  ///< free-form structured results
  std::vector<std::string> notes;

  void check(const std::string& name, double residual, double threshold) {
    checks.push_back({name, residual, threshold, residual < threshold});
  }
  void check_flag(const std::string& name, bool ok) {
    checks.push_back({name, ok ? 0.0 : 1.0, 1.0, ok});
  }
  bool pass() const {
    for (const CheckRecord& c : checks)
      if (!c.pass) return false;
    return true;
  }

  Json to_json() const {
    Json j = Json::object();
    j["schema"] = Json(kReportSchema);
    j["version"] = Json(kVersion);
    j["suite"] = Json(suite);
    j["seed"] = Json(seed);
    j["pass"] = Json(pass());
    Json in = Json::object();
    for (const auto& [k, v] : inputs) in[k] = Json(v);
    j["inputs"] = std::move(in);
    Json cs = Json::array();
    for (const CheckRecord& c : checks) {
      Json r = Json::object();
      r["name"] = Json(c.name);
      r["residual"] = Json(c.residual);
      r["threshold"] = Json(c.threshold);
      r["pass"] = Json(c.pass);
      cs.push_back(std::move(r));
    }
    j["checks"] = std::move(cs);
    j["values"] = values;
    j["notes"] = Json::array_of(notes);
    return j;
  }

  std::string to_json_string() const { return to_json().dump() + "\n"; }

  /// Check records as CSV (name,residual,threshold,pass).
  std::string to_csv() const {
    std::string out = "name,residual,threshold,pass\n";
    for (const CheckRecord& c : checks) {
      out += c.name + ',' + Json::format_double(c.residual) + ',' +
             Json::format_double(c.threshold) + ',' +
             (c.pass ? "true" : "false") + '\n';
    }
    return out;
  }
};

/// FNV-1a digest of a byte string, rendered as fixed-width hex.
inline std::string digest_bytes(const std::string& bytes) {
  return fnv1a64_hex(bytes);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::Validation, "cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string digest_file(const std::string& path) {
  return digest_bytes(read_file(path));
}

/// Fixed provenance note for content that is finite-rank checkable only:
/// the operator-algebraic completions (exact sequences of the annular
/// C*-algebra and the topology of its primitive spectrum) have no
/// desk-scale certificate and are recorded as out of scope.
inline std::string out_of_scope_note() {
  return "out of scope at finite rank: C*-exact sequences and "
         "primitive-spectrum topology of the untruncated annular algebra; "
         "all verified claims here are finite-dimensional";
}

}  // namespace annulus
