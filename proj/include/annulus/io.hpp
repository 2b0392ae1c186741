#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "annulus/engine.hpp"
#include "annulus/report.hpp"
#include "annulus/tube.hpp"

/// Input ingestion and artifact serialization.  Category files are JSON:
/// a finite group is {"name"?, "mul": [[...]], "irreps"?: [...]} with the
/// multiplication table validated eagerly and irreps either supplied
/// (validated: unitary, homomorphism, irreducible, complete) or computed;
/// a truncated quantum backend is {"q": 0.5, "cutoff": 2} with cutoff the
/// largest internal spin (half-integers allowed).  Scalars may be written
/// as plain numbers or [re, im] pairs.
namespace annulus {

inline cx parse_scalar(const nlohmann::json& v) {
  if (v.is_number()) return cx(v.get<double>(), 0.0);
  require(v.is_array() && v.size() == 2 && v[0].is_number() &&
              v[1].is_number(),
          ErrorKind::Validation,
          "schema violation: scalar must be a number or [re, im]");
  return cx(v[0].get<double>(), v[1].get<double>());
}

inline Mat parse_matrix(const nlohmann::json& rows) {
  require(rows.is_array() && !rows.empty() && rows[0].is_array(),
          ErrorKind::Validation,
          "schema violation: matrix must be a 2-d array");
  const int r = static_cast<int>(rows.size());
  const int c = static_cast<int>(rows[0].size());
  Mat m(r, c);
  for (int i = 0; i < r; ++i) {
    require(static_cast<int>(rows[i].size()) == c, ErrorKind::Validation,
            "schema violation: ragged matrix row " + std::to_string(i));
    for (int j = 0; j < c; ++j) m(i, j) = parse_scalar(rows[i][j]);
  }
  return m;
}

/// A parsed category input; make_engine() constructs the backend.
struct CategoryInput {
  bool is_group = true;
  std::string name;
  // Group backend.
  std::optional<GroupTable> table;
  std::optional<GroupIrreps> irreps;
  // Quantum backend.
  double q = 0.0;
  int two_cutoff = 0;

  CategoryEngine make_engine(std::uint64_t seed = 7) const {
    if (is_group) return group_engine(*table, irreps, seed);
    return suq2_engine(q, two_cutoff);
  }
};

inline CategoryInput parse_category(const nlohmann::json& j) {
  CategoryInput in;
  if (j.contains("name")) in.name = j["name"].get<std::string>();
  if (j.contains("q")) {
    in.is_group = false;
    in.q = j["q"].is_string() ? std::stod(j["q"].get<std::string>())
                              : j["q"].get<double>();
    require(in.q > 0.0 && in.q < 1.0, ErrorKind::Validation,
            "schema violation: deformation parameter q must lie in (0,1)");
    require(j.contains("cutoff"), ErrorKind::Validation,
            "schema violation: quantum config needs 'cutoff' (largest spin)");
    double spin = j["cutoff"].is_string()
                      ? std::stod(j["cutoff"].get<std::string>())
                      : j["cutoff"].get<double>();
    in.two_cutoff = static_cast<int>(std::lround(2.0 * spin));
    require(in.two_cutoff >= 0 &&
                std::abs(2.0 * spin - in.two_cutoff) < 1e-9,
            ErrorKind::Validation,
            "schema violation: cutoff must be a non-negative half-integer");
    if (in.name.empty()) in.name = "suq2";
    return in;
  }
  require(j.contains("mul"), ErrorKind::Validation,
          "schema violation: category file needs 'mul' or 'q'");
  std::vector<std::vector<int>> mul =
      j["mul"].get<std::vector<std::vector<int>>>();
  in.table = validate_group(mul);
  if (j.contains("irreps")) {
    std::vector<std::vector<Mat>> reps;
    for (const auto& rep : j["irreps"]) {
      std::vector<Mat> mats;
      const auto& source = rep.contains("matrices") ? rep["matrices"] : rep;
      for (const auto& m : source) mats.push_back(parse_matrix(m));
      reps.push_back(std::move(mats));
    }
    in.irreps = ingest_irreps(*in.table, std::move(reps));
  }
  if (in.name.empty()) in.name = "group" + std::to_string(in.table->order);
  return in;
}

inline CategoryInput ingest_category(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation,
         "schema violation in " + path + ": " + e.what());
  }
  return parse_category(j);
}

/// Subgroup spec: "e" is the trivial subgroup; otherwise a comma-separated
/// list of element indices (closure and inverses validated downstream).
inline std::vector<int> parse_subgroup(const std::string& spec) {
  if (spec == "e" || spec == "E" || spec.empty()) return {0};
  std::vector<int> out;
  std::size_t at = 0;
  while (at < spec.size()) {
    std::size_t next = spec.find(',', at);
    if (next == std::string::npos) next = spec.size();
    std::string tok = spec.substr(at, next - at);
    require(!tok.empty(), ErrorKind::Validation,
            "subgroup spec: empty element in '" + spec + "'");
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      fail(ErrorKind::Validation,
           "subgroup spec: '" + tok + "' is not an element index");
    }
    at = next + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tube-table artifact: structure constants of a built tube algebra, written
// deterministically and reloadable for axiom-level verification.

inline Json tube_table_json(const TubeAlgebra& tube,
                            const std::string& category_name,
                            const std::string& input_digest) {
  const StarAlgebra& alg = tube.algebra();
  Json t = Json::object();
  t["schema"] = Json("annulus-tube/1");
  t["version"] = Json(kVersion);
  t["category"] = Json(category_name);
  t["input_digest"] = Json(input_digest);
  t["dim"] = Json(tube.dim());
  Json basis = Json::array();
  for (const TubeBasisElement& e : tube.basis()) {
    Json b = Json::object();
    b["i"] = Json(e.i);
    b["j"] = Json(e.j);
    b["s"] = Json(e.s);
    b["m"] = Json(e.m);
    basis.push_back(std::move(b));
  }
  t["basis"] = std::move(basis);
  Json structure = Json::array();
  for (int a = 0; a < alg.dim; ++a)
    for (int b = 0; b < alg.dim; ++b)
      for (int c = 0; c < alg.dim; ++c) {
        cx v = alg.lmul[a](c, b);
        if (std::abs(v) == 0.0) continue;
        Json entry = Json::array();
        entry.push_back(Json(a));
        entry.push_back(Json(b));
        entry.push_back(Json(c));
        entry.push_back(Json(v.real()));
        entry.push_back(Json(v.imag()));
        structure.push_back(std::move(entry));
      }
  t["structure"] = std::move(structure);
  Json invol = Json::array();
  for (int a = 0; a < alg.dim; ++a)
    for (int c = 0; c < alg.dim; ++c) {
      cx v = alg.invol(c, a);
      if (std::abs(v) == 0.0) continue;
      Json entry = Json::array();
      entry.push_back(Json(a));
      entry.push_back(Json(c));
      entry.push_back(Json(v.real()));
      entry.push_back(Json(v.imag()));
      invol.push_back(std::move(entry));
    }
  t["involution"] = std::move(invol);
  Json trace = Json::array();
  for (int a = 0; a < alg.dim; ++a) {
    cx v = alg.trace_vec(a);
    if (std::abs(v) == 0.0) continue;
    Json entry = Json::array();
    entry.push_back(Json(a));
    entry.push_back(Json(v.real()));
    entry.push_back(Json(v.imag()));
    trace.push_back(std::move(entry));
  }
  t["trace"] = std::move(trace);
  return t;
}

/// Structure constants as CSV rows a,b,c,re,im.
inline std::string tube_table_csv(const StarAlgebra& alg) {
  std::string out = "a,b,c,re,im\n";
  for (int a = 0; a < alg.dim; ++a)
    for (int b = 0; b < alg.dim; ++b)
      for (int c = 0; c < alg.dim; ++c) {
        cx v = alg.lmul[a](c, b);
        if (std::abs(v) == 0.0) continue;
        out += std::to_string(a) + ',' + std::to_string(b) + ',' +
               std::to_string(c) + ',' + Json::format_double(v.real()) + ',' +
               Json::format_double(v.imag()) + '\n';
      }
  return out;
}

/// Reloads a *-algebra from a tube-table file for axiom verification.
inline StarAlgebra star_algebra_from_table(const nlohmann::json& t) {
  require(t.contains("dim") && t.contains("structure") &&
              t.contains("involution") && t.contains("trace"),
          ErrorKind::Validation,
          "schema violation: tube table needs dim/structure/involution/trace");
  const int d = t["dim"].get<int>();
  require(d > 0, ErrorKind::Validation, "tube table: non-positive dim");
  StarAlgebra alg;
  alg.dim = d;
  alg.lmul.assign(d, Mat::Zero(d, d));
  alg.invol = Mat::Zero(d, d);
  alg.trace_vec = Vec::Zero(d);
  auto idx = [&](const nlohmann::json& v, const char* what) {
    int i = v.get<int>();
    require(i >= 0 && i < d, ErrorKind::Validation,
            std::string("tube table: ") + what + " index out of range");
    return i;
  };
  for (const auto& e : t["structure"]) {
    require(e.is_array() && e.size() == 5, ErrorKind::Validation,
            "tube table: structure entries are [a,b,c,re,im]");
    int a = idx(e[0], "a"), b = idx(e[1], "b"), c = idx(e[2], "c");
    alg.lmul[a](c, b) = cx(e[3].get<double>(), e[4].get<double>());
  }
  for (const auto& e : t["involution"]) {
    require(e.is_array() && e.size() == 4, ErrorKind::Validation,
            "tube table: involution entries are [a,c,re,im]");
    int a = idx(e[0], "a"), c = idx(e[1], "c");
    alg.invol(c, a) = cx(e[2].get<double>(), e[3].get<double>());
  }
  for (const auto& e : t["trace"]) {
    require(e.is_array() && e.size() == 3, ErrorKind::Validation,
            "tube table: trace entries are [a,re,im]");
    int a = idx(e[0], "a");
    alg.trace_vec(a) = cx(e[1].get<double>(), e[2].get<double>());
  }
  return alg;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::Validation, "cannot write file: " + path);
  out << content;
}

}  // namespace annulus
