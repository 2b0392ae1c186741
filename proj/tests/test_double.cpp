// The crossed-product double of a finite group, its irreducible blocks, and
// the compiled corner embedding of the representation-category tube algebra.

#include <annulus/double_algebra.hpp>
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

}  // namespace

TEST_CASE("double algebra is a |G|^2-dimensional *-algebra") {
  for (const auto& mul : {cyclic(2), s3_mul()}) {
    CategoryEngine eng = group_engine(validate_group(mul));
    DoubleAlgebra dg(eng);
    const int n = eng.group().table().order;
    CHECK(dg.algebra().dim == n * n);
    Rng rng(5);
    CHECK(associativity_residual(dg.algebra(), rng) < 1e-12);
    CHECK(involution_residual(dg.algebra()) < 1e-12);
    CHECK(trace_residual(dg.algebra()) < 1e-12);
    CHECK(gram_positivity(dg.algebra()).min_eig > 1e-9);
  }
}

TEST_CASE("double irreps: class/centralizer labels with frozen dimensions") {
  CategoryEngine z2 = group_engine(validate_group(cyclic(2)));
  auto iz2 = double_irreps(z2);
  CHECK(iz2.size() == 4);
  for (const auto& ir : iz2) CHECK(ir.dim == 1);

  CategoryEngine s3 = group_engine(validate_group(s3_mul()));
  auto is3 = double_irreps(s3);
  REQUIRE(is3.size() == 8);
  std::vector<int> dims;
  for (const auto& ir : is3) dims.push_back(ir.dim);
  std::sort(dims.begin(), dims.end());
  CHECK(dims == std::vector<int>{1, 1, 2, 2, 2, 2, 3, 3});
  int sq = 0;
  for (int d : dims) sq += d * d;
  CHECK(sq == 36);
}

TEST_CASE("block decomposition of the double matches its irreps") {
  CategoryEngine eng = group_engine(validate_group(s3_mul()));
  DoubleAlgebra dg(eng);
  BlockDecomposition bd = decompose_star_algebra(dg.algebra(), 1);
  CHECK(bd.residual < 1e-9);
  CHECK(bd.dims_sorted() == std::vector<int>{1, 1, 2, 2, 2, 2, 3, 3});
}

TEST_CASE("tube blocks are counted by double irreps") {
  CategoryEngine eng = group_engine(validate_group(s3_mul()));
  TubeAlgebra tube = build_tube(eng);
  BlockDecomposition bd = decompose_star_algebra(tube.algebra(), 1);
  CHECK(bd.residual < 1e-9);
  // Eight blocks — one per double irrep — with corner-shrunk sizes.
  CHECK(bd.dims_sorted() == std::vector<int>{1, 1, 1, 1, 1, 2, 2, 2});
  CHECK(bd.blocks.size() == double_irreps(eng).size());
  int sq = 0;
  for (int d : bd.dims_sorted()) sq += d * d;
  CHECK(sq == tube.dim());
}

TEST_CASE("compiled map into the double is a bijective *-homomorphism") {
  for (const auto& mul : {cyclic(2), s3_mul()}) {
    CategoryEngine eng = group_engine(validate_group(mul));
    TubeAlgebra tube = build_tube(eng);
    TubeG big(tube);
    DoubleAlgebra dg(eng);
    TubeDoubleIso iso(big, dg);
    CornerReport r = iso.verify(1e-8);
    CHECK(r.psi_hom < 1e-8);
    CHECK(r.psi_star < 1e-8);
    CHECK(r.psi_rank_gap > 0.5);  // smallest singular value of a bijection
    CHECK(r.big_dim == r.double_dim);
  }
}

TEST_CASE("tube sits inside the double as a full corner") {
  CategoryEngine eng = group_engine(validate_group(s3_mul()));
  TubeAlgebra tube = build_tube(eng);
  TubeG big(tube);
  DoubleAlgebra dg(eng);
  TubeDoubleIso iso(big, dg);
  CornerReport r = iso.verify(1e-8);
  CHECK(r.double_dim == 36);
  CHECK(r.local_units < 1e-9);
  CHECK(r.corner_closed < 1e-9);
  CHECK(r.embed_hom < 1e-9);
  CHECK(r.corner_rank == 17);
  CHECK(r.corner_rank == r.tube_dim);
  CHECK(r.expectation < 1e-9);
}
