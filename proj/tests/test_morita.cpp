// The graded tube algebra over a Q-system module 2-category, its
// imprimitivity certificates, and the regular half-braiding.

#include <annulus/morita.hpp>
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

MoritaContext make_context(const std::vector<int>& subgroup,
                           const CategoryEngine& eng) {
  const GroupTable& table = eng.group().table();
  QSystem qsys = qsystem_from_gset(table, coset_action(table, subgroup));
  return MoritaContext(eng, qsys, 11);
}

}  // namespace

TEST_CASE("graded tube over the regular Q-system of the 2-element group") {
  std::vector<std::vector<int>> mul = cyclic(2);
  CategoryEngine eng = group_engine(validate_group(mul));
  MoritaContext ctx = make_context({0}, eng);
  TwoCatTube tube2 = build_tube_2cat(ctx);

  // Frozen: four graded components of dimension 4 each.
  CHECK(tube2.dim() == 16);
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t) {
      auto [off, count] = tube2.grade_range(s, t);
      (void)off;
      CHECK(count == 4);
    }

  Rng rng(7);
  CHECK(associativity_residual(tube2.algebra(), rng) < 1e-9);
  CHECK(involution_residual(tube2.algebra()) < 1e-9);

  // The (0,0) corner is literally the plain tube algebra.
  TubeAlgebra plain = build_tube(eng);
  StarAlgebra corner = tube2.corner(0);
  REQUIRE(corner.dim == plain.dim());
  double worst = 0.0;
  for (int a = 0; a < corner.dim; ++a)
    worst = std::max(worst,
                     residual(corner.lmul[a], plain.algebra().lmul[a]));
  worst = std::max(worst, residual(corner.invol, plain.algebra().invol));
  CHECK(worst < 1e-12);
}

TEST_CASE("imprimitivity certificates for the 2-element group") {
  std::vector<std::vector<int>> mul = cyclic(2);
  CategoryEngine eng = group_engine(validate_group(mul));
  MoritaContext ctx = make_context({0}, eng);
  TwoCatTube tube2 = build_tube_2cat(ctx);
  ImprimitivityReport rep = verify_imprimitivity(tube2);

  CHECK(rep.frame_residual < 1e-9);
  CHECK(rep.completeness_residual < 1e-9);
  CHECK(rep.unit_residual < 1e-9);
  CHECK(rep.spans_full);
  for (auto [s, t, rank, dim] : rep.span_ranks) {
    (void)s;
    (void)t;
    CHECK(rank == dim);
  }
  CHECK(rep.corner_dims == std::vector<int>{4, 4});
  CHECK(rep.corner_blocks[0] == std::vector<int>{1, 1, 1, 1});
  CHECK(rep.corner_blocks[1] == std::vector<int>{1, 1, 1, 1});
  CHECK(rep.fusion_dims == std::vector<int>{2, 2});
  CHECK(rep.grade1_pointed);
  CHECK(rep.group_like_residual >= 0.0);
  CHECK(rep.group_like_residual < 1e-9);
}

TEST_CASE("graded tube for an index-three inclusion of the symmetric group") {
  std::vector<std::vector<int>> mul = s3_mul();
  CategoryEngine eng = group_engine(validate_group(mul));
  MoritaContext ctx = make_context({0, 1}, eng);  // order-2 stabilizer
  TwoCatTube tube2 = build_tube_2cat(ctx);

  CHECK(tube2.dim() == 66);
  ImprimitivityReport rep = verify_imprimitivity(tube2);
  CHECK(rep.frame_residual < 1e-9);
  CHECK(rep.spans_full);

  // Both diagonal corners are 17-dimensional with the same eight blocks:
  // the two sides are Morita equivalent, not merely equinumerous.
  CHECK(rep.corner_dims == std::vector<int>{17, 17});
  CHECK(rep.corner_blocks[0] == std::vector<int>{1, 1, 1, 1, 1, 2, 2, 2});
  CHECK(rep.corner_blocks[1] == std::vector<int>{1, 1, 1, 1, 1, 2, 2, 2});

  // The dual fusion here is a double-coset algebra, not a group algebra.
  CHECK(rep.fusion_dims == std::vector<int>{3, 3});
  CHECK_FALSE(rep.grade1_pointed);
}

TEST_CASE("regular half-braiding of the 2-element group verifies") {
  std::vector<std::vector<int>> mul = cyclic(2);
  CategoryEngine eng = group_engine(validate_group(mul));
  MoritaContext ctx = make_context({0}, eng);
  RegularHalfBraiding zreg = build_zreg(ctx);
  auto rep = zreg.verify(1e-9);
  CHECK(rep.unitarity < 1e-9);
  CHECK(rep.equivariance < 1e-9);
  CHECK(rep.naturality < 1e-9);
  CHECK(rep.multiplicativity < 1e-9);

  HalfBraidingObject hb = zreg.to_half_braiding_object();
  CHECK(hb.mult == std::vector<int>{1, 1});

  TubeAlgebra tube = build_tube(eng);
  HalfBraidingRep hrep(tube, hb);
  CHECK(hrep.star_representation_residual() < 1e-9);
}

TEST_CASE("regular half-braiding over the trivial Q-system of S3") {
  // With the one-point coset space the graded tube collapses onto the plain
  // one; the regular object is the sum of U_a (x) U_a-bar, whose invariant
  // multiplicities are (3, 1, 1): one copy of the trivial rep per simple.
  std::vector<std::vector<int>> mul = s3_mul();
  CategoryEngine eng = group_engine(validate_group(mul));
  MoritaContext ctx = make_context({0, 1, 2, 3, 4, 5}, eng);
  RegularHalfBraiding zreg = build_zreg(ctx);
  auto rep = zreg.verify(1e-9);
  CHECK(rep.unitarity < 1e-9);
  CHECK(rep.multiplicativity < 1e-9);

  HalfBraidingObject hb = zreg.to_half_braiding_object();
  CHECK(hb.mult == std::vector<int>{3, 1, 1});

  TubeAlgebra tube = build_tube(eng);
  HalfBraidingRep hrep(tube, hb);
  CHECK(hrep.star_representation_residual() < 1e-9);
}
