// Tube algebras of finite-group representation categories: enumeration,
// *-algebra axioms, dimension oracles, and annular corners of the deformed
// backend.

#include <annulus/annular.hpp>
#include <annulus/half_braiding.hpp>
#include <annulus/tube.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace annulus;

namespace {

std::vector<std::vector<int>> cyclic(int n) {
  std::vector<std::vector<int>> mul(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) mul[a][b] = (a + b) % n;
  return mul;
}

std::vector<std::vector<int>> s3_mul() {
  auto perms = std::vector<std::vector<int>>{{0, 1, 2}, {1, 0, 2}, {2, 1, 0},
                                             {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
  auto index_of = [&](const std::vector<int>& p) {
    for (std::size_t i = 0; i < perms.size(); ++i)
      if (perms[i] == p) return static_cast<int>(i);
    return -1;
  };
  std::vector<std::vector<int>> mul(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::vector<int> ab(3);
      for (int x = 0; x < 3; ++x) ab[x] = perms[a][perms[b][x]];
      mul[a][b] = index_of(ab);
    }
  return mul;
}

void check_star_algebra(const StarAlgebra& alg, std::uint64_t seed) {
  Rng rng(seed);
  CHECK(associativity_residual(alg, rng) < 1e-9);
  CHECK(involution_residual(alg) < 1e-9);
  CHECK(trace_residual(alg) < 1e-9);
  GramReport gr = gram_positivity(alg);
  CHECK(gr.hermiticity < 1e-9);
  CHECK(gr.min_eig > 1e-9);
}

}  // namespace

TEST_CASE("tube algebra dimensions match the fusion-count oracle") {
  struct Row {
    std::vector<std::vector<int>> mul;
    int dim;
  };
  // Frozen dimensions: 4 for the 2-element group, 9 for the 3-element
  // group, 17 for the symmetric group on three letters.
  const Row rows[] = {{cyclic(2), 4}, {cyclic(3), 9}, {s3_mul(), 17}};
  for (const Row& row : rows) {
    CategoryEngine eng = group_engine(validate_group(row.mul));
    TubeAlgebra tube = build_tube(eng);
    CHECK(tube.dim() == row.dim);
    CHECK(tube_dim_oracle(eng) == row.dim);
  }
}

TEST_CASE("tube algebras are associative involutive positive *-algebras") {
  check_star_algebra(build_tube(group_engine(validate_group(cyclic(2))))
                         .algebra(),
                     2);
  check_star_algebra(build_tube(group_engine(validate_group(cyclic(3))))
                         .algebra(),
                     3);
  check_star_algebra(build_tube(group_engine(validate_group(s3_mul())))
                         .algebra(),
                     4);
}

TEST_CASE("diagonal idempotents assemble the tube unit") {
  CategoryEngine eng = group_engine(validate_group(s3_mul()));
  TubeAlgebra tube = build_tube(eng);
  const StarAlgebra& alg = tube.algebra();
  Vec unit = algebra_unit(alg);
  Vec sum = Vec::Zero(tube.dim());
  for (int i = 0; i < eng.simple_count(); ++i) sum += tube.unit_p(i);
  CHECK((sum - unit).norm() < 1e-10);
  // Each p_i is a self-adjoint idempotent.
  for (int i = 0; i < eng.simple_count(); ++i) {
    Vec p = tube.unit_p(i);
    CHECK((alg.product(p, p) - p).norm() < 1e-10);
    CHECK((alg.star(p) - p).norm() < 1e-10);
  }
}

TEST_CASE("fusion corner of the tube reproduces the fusion ring") {
  for (const auto& mul :
       {cyclic(2), cyclic(3), s3_mul()}) {
    CategoryEngine eng = group_engine(validate_group(mul));
    TubeAlgebra tube = build_tube(eng);
    CHECK(fusion_corner_oracle_residual(tube) < 1e-9);
    CHECK(fusion_corner(tube).dim == eng.simple_count());
  }
}

TEST_CASE("trivial half-braiding represents the tube on the unit object") {
  for (const auto& mul : {cyclic(3), s3_mul()}) {
    CategoryEngine eng = group_engine(validate_group(mul));
    TubeAlgebra tube = build_tube(eng);
    HalfBraidingObject hb = trivial_half_braiding(eng);
    HalfBraidingRep rep(tube, hb);
    CHECK(rep.star_representation_residual() < 1e-9);
  }
}

TEST_CASE("annular corners of the deformed backend stay abelian") {
  CategoryEngine eng = suq2_engine(0.5, 12);
  std::vector<int> window = {0, 1, 2, 3, 4, 5, 6};  // internal spins <= 3

  // Frozen corner dimensions for window spins <= 3: the vacuum corner has
  // one path per window label, the spin-1/2 corner two except at the edges.
  AnnularCorner c0 = annular_corner(eng, window, 0, 0);
  AnnularCorner c1 = annular_corner(eng, window, 1, 1);
  CHECK(c0.dim() == 7);
  CHECK(c1.dim() == 13);
  CHECK(c0.dim() == annular_dim_oracle(eng, window, 0, 0));
  CHECK(c1.dim() == annular_dim_oracle(eng, window, 1, 1));
  CHECK(annular_commutator_residual(c0) < 1e-9);
  CHECK(annular_commutator_residual(c1) < 1e-9);
}

TEST_CASE("annular products past the truncation are refused, not wrong") {
  CategoryEngine eng = suq2_engine(0.5, 6);
  std::vector<int> window = {0, 1, 2, 3, 4, 5, 6};
  AnnularCorner c1 = annular_corner(eng, window, 1, 1);
  bool escaped = false;
  try {
    annular_commutator_residual(c1);
  } catch (const Error& e) {
    escaped = e.kind() == ErrorKind::TruncationEscape;
  }
  CHECK(escaped);
}
