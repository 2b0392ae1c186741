// Foundations: dense linear algebra helpers, group tables and irreps, and
// the two category backends that everything downstream consumes.

#include <annulus/engine.hpp>
#include <annulus/group.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace annulus;

namespace {


// S3 as permutations of {0,1,2}: e, (01), (02), (12), (012), (021).
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

TEST_CASE("kron and dagger satisfy the mixed-product identities") {
  Rng rng(3);
  Mat a = rng.complex_matrix(3, 2), b = rng.complex_matrix(2, 4);
  Mat c = rng.complex_matrix(2, 3), d = rng.complex_matrix(4, 2);
  CHECK(residual(kron(a, b) * kron(c, d), kron(a * c, b * d)) < 1e-14);
  CHECK(residual(dagger(kron(a, b)), kron(dagger(a), dagger(b))) < 1e-14);
  CHECK(residual(dagger(a * b), dagger(b) * dagger(a)) < 1e-14);
}

TEST_CASE("projection_range returns an isometry onto the range") {
  Rng rng(5);
  Mat v = rng.complex_matrix(6, 2);
  Mat p = v * (dagger(v) * v).inverse() * dagger(v);  // rank-2 projection
  Mat u = projection_range(p);
  REQUIRE(u.cols() == 2);
  CHECK(residual(dagger(u) * u, identity(2)) < 1e-12);
  CHECK(residual(u * dagger(u), p) < 1e-12);
}

TEST_CASE("validate_group accepts real tables and rejects broken ones") {
  GroupTable z2 = validate_group({{0, 1}, {1, 0}});
  CHECK(z2.order == 2);
  CHECK(z2.id == 0);
  CHECK(z2.inv == std::vector<int>{0, 1});

  // Commutative Latin square with unit and two-sided inverses that is not
  // associative: (2*2)*4 != 2*(2*4), so it must be rejected.
  std::vector<std::vector<int>> bad = {{0, 1, 2, 3, 4, 5},
                                       {1, 0, 3, 2, 5, 4},
                                       {2, 3, 4, 5, 0, 1},
                                       {3, 2, 5, 4, 1, 0},
                                       {4, 5, 0, 1, 3, 2},
                                       {5, 4, 1, 0, 2, 3}};
  CHECK_THROWS_AS(validate_group(bad), Error);
}

TEST_CASE("conjugacy classes and centralizers of S3") {
  GroupTable g = validate_group(s3_mul());
  ConjugacyClasses cc = conjugacy_classes(g);
  REQUIRE(cc.classes.size() == 3);
  std::vector<std::size_t> sizes;
  for (const auto& c : cc.classes) sizes.push_back(c.size());
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{1, 2, 3});
  CHECK(centralizer(g, 0).size() == 6);   // identity: whole group
  CHECK(centralizer(g, 1).size() == 2);   // a transposition: <(01)>
  CHECK(centralizer(g, 4).size() == 3);   // a 3-cycle: <(012)>
}

TEST_CASE("computed irreps have the right dimensions and axioms") {
  GroupTable g = validate_group(s3_mul());
  GroupIrreps ir = compute_irreps(g, 7);
  std::vector<int> dims(ir.dims.begin(), ir.dims.end());
  std::sort(dims.begin(), dims.end());
  CHECK(dims == std::vector<int>{1, 1, 2});
  CHECK(ir.dims[0] == 1);  // trivial rep is label 0

  double worst = 0.0;
  for (int j = 0; j < ir.count(); ++j)
    for (int a = 0; a < g.order; ++a) {
      worst = std::max(worst, residual(dagger(ir.reps[j][a]) * ir.reps[j][a],
                                       identity(ir.dims[j])));
      for (int b = 0; b < g.order; ++b)
        worst = std::max(worst, residual(ir.reps[j][a] * ir.reps[j][b],
                                         ir.reps[j][g.mul[a][b]]));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("group engine hom spaces match fusion counts") {
  CategoryEngine eng = group_engine(validate_group(s3_mul()));
  REQUIRE(eng.simple_count() == 3);
  const GroupIrreps& ir = eng.group().irreps();
  const GroupTable& g = eng.group().table();

  // std (x) std = trivial + sign + std for S3.
  int two = -1;
  for (int j = 0; j < 3; ++j)
    if (ir.dims[j] == 2) two = j;
  REQUIRE(two >= 0);
  for (int k = 0; k < 3; ++k)
    CHECK(fusion_count(ir, g, two, two, k) == 1);

  // Hom(U_i (x) U_j, U_k) dimension equals the fusion count, and expand
  // round-trips a random element of the span.
  Rng rng(11);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        Word dom = Word::single(i).tensor(Word::single(j));
        Word cod = Word::single(k);
        const HomBasis& hb = eng.hom(dom, cod);
        CHECK(hb.dim() == fusion_count(ir, g, i, j, k));
        if (hb.dim() == 0) continue;
        Vec c0 = rng.complex_matrix(hb.dim(), 1).col(0);
        Mat f = Mat::Zero(eng.carrier_dim(cod), eng.carrier_dim(dom));
        for (int m = 0; m < hb.dim(); ++m) f += c0(m) * hb.basis[m];
        auto [c1, res] = eng.expand({dom, cod, f});
        CHECK(res < 1e-12);
        CHECK((c1 - c0).norm() < 1e-10);
      }
}

TEST_CASE("standard pairs satisfy the conjugate equations") {
  CategoryEngine eng = group_engine(validate_group(s3_mul()));
  for (int s = 0; s < eng.simple_count(); ++s) {
    const StdPair& pr = eng.standard_pair(Word::single(s));
    const int n = eng.carrier_dim(s), nb = eng.carrier_dim(eng.dual(s));
    // (R-bar† (x) id)(id (x) R) = id on U_s, and the mirror on the dual.
    Mat left = kron(dagger(pr.Rbar.m), identity(n)) *
               kron(identity(n), pr.R.m);
    Mat right = kron(dagger(pr.R.m), identity(nb)) *
                kron(identity(nb), pr.Rbar.m);
    CHECK(residual(left, identity(n)) < 1e-12);
    CHECK(residual(right, identity(nb)) < 1e-12);
    // Loop value is the quantum dimension.
    CHECK(std::abs((dagger(pr.R.m) * pr.R.m)(0, 0).real() -
                   eng.qdim(s)) < 1e-12);
  }
}

TEST_CASE("spin-truncated deformed backend at q = 0.5") {
  CategoryEngine eng = suq2_engine(0.5, 6);
  REQUIRE(eng.simple_count() == 7);  // twice-spin labels 0..6
  CHECK(eng.qdim(0) == 1.0);
  CHECK(eng.qdim(1) == 2.5);  // q + 1/q exactly
  // [3]_q = d^2 - 1 and the two-step recursion [n+1] = d[n] - [n-1].
  CHECK(std::abs(eng.qdim(2) - (2.5 * 2.5 - 1.0)) < 1e-13);
  for (int l = 2; l < 7; ++l)
    CHECK(std::abs(eng.qdim(l) - (2.5 * eng.qdim(l - 1) - eng.qdim(l - 2))) <
          1e-10 * eng.qdim(l));
  // Truncated fusion: 1 (x) 1 = 0 + 2, and the top label caps off.
  CHECK(eng.hom(Word::single(1).tensor(Word::single(1)), Word::single(0))
            .dim() == 1);
  CHECK(eng.hom(Word::single(1).tensor(Word::single(1)), Word::single(2))
            .dim() == 1);
  CHECK(eng.hom(Word::single(1).tensor(Word::single(1)), Word::single(1))
            .dim() == 0);
  CHECK(eng.hom(Word::single(6).tensor(Word::single(1)), Word::single(5))
            .dim() == 1);
}

TEST_CASE("deterministic rng streams") {
  Rng a(99), b(99);
  Mat ma = a.complex_matrix(4, 4), mb = b.complex_matrix(4, 4);
  CHECK((ma - mb).norm() == 0.0);
}
