// Ingestion of category descriptions, the tube-table artifact round-trip,
// and the deterministic report writer.

#include <annulus/io.hpp>
#include <annulus/tube.hpp>
#include <annulus/version.hpp>

#include <catch2/catch_amalgamated.hpp>

#ifndef ANNULUS_DATA_DIR
#define ANNULUS_DATA_DIR "data"
#endif

using namespace annulus;

namespace {

std::string data_path(const std::string& name) {
  return std::string(ANNULUS_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("quantum configs parse spin cutoffs from numbers or strings") {
  CategoryInput a = parse_category(nlohmann::json{{"q", 0.5}, {"cutoff", 2}});
  CHECK_FALSE(a.is_group);
  CHECK(a.two_cutoff == 4);
  CHECK(a.make_engine().simple_count() == 5);

  CategoryInput b =
      parse_category(nlohmann::json{{"q", 0.5}, {"cutoff", "2.5"}});
  CHECK(b.two_cutoff == 5);

  CHECK_THROWS_AS(
      parse_category(nlohmann::json{{"q", 0.5}, {"cutoff", 1.7}}), Error);
  CHECK_THROWS_AS(
      parse_category(nlohmann::json{{"q", 1.5}, {"cutoff", 2}}), Error);
}

TEST_CASE("group files validate their multiplication tables") {
  CategoryInput in = ingest_category(data_path("z2.json"));
  REQUIRE(in.is_group);
  CHECK(in.table->order == 2);
  CHECK(in.irreps.has_value());

  // A non-associative Latin square must be named as the offense.  This one
  // is commutative with two-sided inverses, so the earlier checks all pass
  // and associativity is the first law to fail.
  nlohmann::json bad = {{"mul", {{0, 1, 2, 3, 4, 5},
                                 {1, 0, 3, 2, 5, 4},
                                 {2, 3, 4, 5, 0, 1},
                                 {3, 2, 5, 4, 1, 0},
                                 {4, 5, 0, 1, 3, 2},
                                 {5, 4, 1, 0, 2, 3}}}};
  try {
    parse_category(bad);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    CHECK(std::string(e.what()).find("associat") != std::string::npos);
  }

  // Ragged tables are schema violations.
  CHECK_THROWS_AS(parse_category(nlohmann::json{{"mul", {{0, 1}, {1}}}}),
                  Error);
}

TEST_CASE("explicit irreps are checked before use") {
  // Correct Z2 table with a broken sign rep: not a homomorphism.
  nlohmann::json j = {{"mul", {{0, 1}, {1, 0}}},
                      {"irreps", {{{{1.0}}, {{1.0}}}, {{{1.0}}, {{0.5}}}}}};
  CHECK_THROWS_AS(parse_category(j), Error);
}

TEST_CASE("subgroup specs") {
  CHECK(parse_subgroup("e") == std::vector<int>{0});
  CHECK(parse_subgroup("0,1") == std::vector<int>{0, 1});
  CHECK(parse_subgroup(" 2 , 4 ") == std::vector<int>{2, 4});
  CHECK(parse_subgroup("") == std::vector<int>{0});  // empty means trivial
  CHECK_THROWS_AS(parse_subgroup("fish"), Error);
  CHECK_THROWS_AS(parse_subgroup("1,,2"), Error);
}

TEST_CASE("tube tables round-trip exactly") {
  CategoryInput in = ingest_category(data_path("z3.json"));
  CategoryEngine eng = in.make_engine();
  TubeAlgebra tube = build_tube(eng);
  Json table = tube_table_json(tube, in.name, "test");
  nlohmann::json parsed = nlohmann::json::parse(table.dump());
  CHECK(parsed["schema"] == "annulus-tube/1");
  CHECK(parsed["version"] == kVersion);

  StarAlgebra back = star_algebra_from_table(parsed);
  REQUIRE(back.dim == tube.dim());
  const StarAlgebra& orig = tube.algebra();
  double worst = residual(back.invol, orig.invol);
  for (int a = 0; a < back.dim; ++a)
    worst = std::max(worst, residual(back.lmul[a], orig.lmul[a]));
  worst = std::max(worst, (back.trace_vec - orig.trace_vec).norm());
  CHECK(worst < 1e-15);  // 17-significant-digit decimal survives doubles
}

TEST_CASE("perturbed structure constants fail the axioms loudly") {
  CategoryInput in = ingest_category(data_path("z2.json"));
  TubeAlgebra tube = build_tube(in.make_engine());
  nlohmann::json parsed =
      nlohmann::json::parse(tube_table_json(tube, in.name, "test").dump());
  parsed["structure"][0][3] = 1.5;
  StarAlgebra bad = star_algebra_from_table(parsed);
  Rng rng(2);
  CHECK(associativity_residual(bad, rng) > 1e-3);

  // Out-of-range indices are rejected at load time.
  parsed["structure"][0][0] = 99;
  CHECK_THROWS_AS(star_algebra_from_table(parsed), Error);
}

TEST_CASE("csv table lists every nonzero structure constant") {
  CategoryInput in = ingest_category(data_path("z2.json"));
  TubeAlgebra tube = build_tube(in.make_engine());
  std::string csv = tube_table_csv(tube.algebra());
  CHECK(csv.rfind("a,b,c,re,im\n", 0) == 0);
  std::size_t lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == 9);  // header + eight group-like products of the 4-dim tube
}

TEST_CASE("report writer is deterministic and self-describing") {
  auto make = [] {
    Report rep;
    rep.suite = "demo";
    rep.seed = 42;
    rep.inputs["category"] = "cafe";
    rep.check("alpha", 1e-12, 1e-9);
    rep.check("beta", 2.0, 1e-9);
    rep.values["gamma"] = Json(cx(0.5, -0.25));
    rep.values["delta"] = Json(0.1);
    return rep;
  };
  Report r1 = make(), r2 = make();
  CHECK(r1.to_json_string() == r2.to_json_string());
  CHECK_FALSE(r1.pass());

  nlohmann::json j = nlohmann::json::parse(r1.to_json_string());
  CHECK(j["schema"] == kReportSchema);
  CHECK(j["pass"] == false);
  CHECK(j["checks"][0]["name"] == "alpha");
  CHECK(j["checks"][0]["pass"] == true);
  CHECK(j["checks"][1]["pass"] == false);
  CHECK(j["values"]["gamma"][0] == 0.5);
  CHECK(j["values"]["gamma"][1] == -0.25);

  // Sorted keys, 17-significant-digit doubles, complex as [re, im].
  Json obj = Json::object();
  obj["b"] = Json(1);
  obj["a"] = Json(cx(0.5, -0.25));
  CHECK(obj.dump() == "{\"a\":[0.5,-0.25],\"b\":1}");
  CHECK(Json::format_double(0.1) == "0.10000000000000001");

  std::string csv = r1.to_csv();
  CHECK(csv.rfind("name,residual,threshold,pass\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("digest is stable fnv-1a") {
  CHECK(digest_bytes("") == "14650fb0739d0383");  // published offset basis
  CHECK(digest_bytes("annulus") == "221136757ee2a0bb");
}
