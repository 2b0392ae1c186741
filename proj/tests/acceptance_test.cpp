// Acceptance gate: one pass/fail line per verified claim, with the pinned
// tolerance printed next to every measured number.  Exits nonzero when any
// criterion fails.

#include <annulus/annular.hpp>
#include <annulus/double_algebra.hpp>
#include <annulus/half_braiding.hpp>
#include <annulus/io.hpp>
#include <annulus/morita.hpp>
#include <annulus/tube.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>

#ifndef ANNULUS_DATA_DIR
#define ANNULUS_DATA_DIR "data"
#endif
#ifndef ANNULUS_CLI_PATH
#define ANNULUS_CLI_PATH "annulus"
#endif

using namespace annulus;

namespace {

int g_failures = 0;

void criterion(int idx, const std::string& name, bool ok,
               const std::string& detail) {
  std::printf("[%s] criterion %02d %-32s %s\n", ok ? "PASS" : "FAIL", idx,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

CategoryEngine load_engine(const std::string& file) {
  return ingest_category(std::string(ANNULUS_DATA_DIR) + "/" + file)
      .make_engine();
}

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i)
    os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace

int main() {
  const double tol = 1e-9;    // residual tolerance for exactly-derived claims
  const double hom_tol = 1e-8;  // compiled-map residuals across bases

  // ---------------------------------------------------------------- 1 & 2
  std::optional<CategoryEngine> eng_z2, eng_z3, eng_s3;
  std::optional<TubeAlgebra> tube_z2, tube_z3, tube_s3;
  try {
    auto t0 = std::chrono::steady_clock::now();
    eng_z2 = load_engine("z2.json");
    eng_z3 = load_engine("z3.json");
    eng_s3 = load_engine("s3.json");
    tube_z2 = build_tube(*eng_z2);
    tube_z3 = build_tube(*eng_z3);
    tube_s3 = build_tube(*eng_s3);
    double worst = 0.0, min_eig = 1.0;
    for (const TubeAlgebra* t : {&*tube_z2, &*tube_z3, &*tube_s3}) {
      Rng rng(1);
      worst = std::max(worst, associativity_residual(t->algebra(), rng));
      worst = std::max(worst, involution_residual(t->algebra()));
      worst = std::max(worst, trace_residual(t->algebra()));
      GramReport gr = gram_positivity(t->algebra());
      worst = std::max(worst, gr.hermiticity);
      min_eig = std::min(min_eig, gr.min_eig);
    }
    double dt = seconds_since(t0);
    criterion(1, "tube-star-algebras",
              worst < tol && min_eig > 0.0 && dt < 60.0,
              "worst residual " + fmt(worst) + " < 1e-9, trace form min eig " +
                  fmt(min_eig) + " > 0, built in " + fmt(dt) + "s < 60s");
  } catch (const std::exception& e) {
    criterion(1, "tube-star-algebras", false, e.what());
  }

  try {
    bool ok = tube_z2 && tube_z3 && tube_s3;
    std::string detail = "engines unavailable";
    if (ok) {
      int dz2 = tube_z2->dim(), dz3 = tube_z3->dim(), ds3 = tube_s3->dim();
      ok = dz2 == 4 && dz3 == 9 && ds3 == 17 &&
           dz2 == tube_dim_oracle(*eng_z2) &&
           dz3 == tube_dim_oracle(*eng_z3) &&
           ds3 == tube_dim_oracle(*eng_s3);
      detail = "dims " + std::to_string(dz2) + "/" + std::to_string(dz3) +
               "/" + std::to_string(ds3) +
               " == 4/9/17 == independent fusion-count oracle";
    }
    criterion(2, "tube-dimension-oracle", ok, detail);
  } catch (const std::exception& e) {
    criterion(2, "tube-dimension-oracle", false, e.what());
  }

  // ---------------------------------------------------------------- 3 - 5
  std::optional<CornerReport> corner_s3;
  try {
    TubeG big_z2(*tube_z2);
    DoubleAlgebra dg_z2(*eng_z2);
    CornerReport rz2 = TubeDoubleIso(big_z2, dg_z2).verify(hom_tol);
    TubeG big_s3(*tube_s3);
    DoubleAlgebra dg_s3(*eng_s3);
    corner_s3 = TubeDoubleIso(big_s3, dg_s3).verify(hom_tol);
    double worst = std::max({rz2.psi_hom, rz2.psi_star, corner_s3->psi_hom,
                             corner_s3->psi_star});
    double gap = std::min(rz2.psi_rank_gap, corner_s3->psi_rank_gap);
    bool ok = worst < hom_tol && gap > 0.5 && corner_s3->double_dim == 36;
    criterion(3, "double-embedding-homomorphism", ok,
              "*-hom residual " + fmt(worst) +
                  " < 1e-8, bijective (min singular value " + fmt(gap) +
                  "), dim of the 6-element double = " +
                  std::to_string(corner_s3->double_dim) + " == 36");
  } catch (const std::exception& e) {
    criterion(3, "double-embedding-homomorphism", false, e.what());
  }

  try {
    bool ok = corner_s3.has_value();
    std::string detail = "embedding unavailable";
    if (ok) {
      double worst = std::max({corner_s3->local_units,
                               corner_s3->corner_closed,
                               corner_s3->embed_hom});
      ok = worst < tol && corner_s3->corner_rank == 17 &&
           corner_s3->corner_rank == corner_s3->tube_dim;
      detail = "local units + corner residuals " + fmt(worst) +
               " < 1e-9, corner rank " +
               std::to_string(corner_s3->corner_rank) + " == tube dim 17";
    }
    criterion(4, "double-full-corner", ok, detail);
  } catch (const std::exception& e) {
    criterion(4, "double-full-corner", false, e.what());
  }

  try {
    BlockDecomposition bd = decompose_star_algebra(tube_s3->algebra(), 1);
    auto oracle = double_irreps(*eng_s3);
    int sq = 0;
    for (int d : bd.dims_sorted()) sq += d * d;
    bool ok = bd.residual < tol && bd.blocks.size() == 8 &&
              bd.blocks.size() == oracle.size() &&
              bd.dims_sorted() == std::vector<int>{1, 1, 1, 1, 1, 2, 2, 2} &&
              sq == 17;
    criterion(5, "tube-block-decomposition", ok,
              std::to_string(bd.blocks.size()) +
                  " blocks == 8 double-irrep labels, dims {" +
                  join_ints(bd.dims_sorted()) + "}, sum of squares " +
                  std::to_string(sq) + " == 17, residual " +
                  fmt(bd.residual) + " < 1e-9");
  } catch (const std::exception& e) {
    criterion(5, "tube-block-decomposition", false, e.what());
  }

  // ---------------------------------------------------------------- 6 - 8
  std::optional<ImprimitivityReport> imp_s3;
  try {
    double frame = 0.0;
    bool spans = true;
    {
      const GroupTable& t = eng_z2->group().table();
      QSystem qs = qsystem_from_gset(t, coset_action(t, {0}));
      MoritaContext ctx(*eng_z2, qs, 11);
      TwoCatTube tube2 = build_tube_2cat(ctx);
      ImprimitivityReport r = verify_imprimitivity(tube2);
      frame = std::max(frame, r.frame_residual);
      spans = spans && r.spans_full;
    }
    {
      const GroupTable& t = eng_s3->group().table();
      QSystem qs = qsystem_from_gset(t, coset_action(t, {0}));
      MoritaContext ctx(*eng_s3, qs, 11);
      TwoCatTube tube2 = build_tube_2cat(ctx);
      imp_s3 = verify_imprimitivity(tube2);
      frame = std::max(frame, imp_s3->frame_residual);
      spans = spans && imp_s3->spans_full;
    }
    criterion(6, "q-system-imprimitivity", frame < tol && spans,
              "frame identity residual " + fmt(frame) +
                  " < 1e-9 per bimodule, off-diagonal corner products span "
                  "every diagonal corner at full rank");
  } catch (const std::exception& e) {
    criterion(6, "q-system-imprimitivity", false, e.what());
  }

  try {
    bool ok = imp_s3.has_value();
    std::string detail = "graded tube unavailable";
    if (ok) {
      const auto& b0 = imp_s3->corner_blocks[0];
      const auto& b1 = imp_s3->corner_blocks[1];
      ok = b0.size() == 8 && b1.size() == 8 &&
           b0 == std::vector<int>{1, 1, 1, 1, 1, 2, 2, 2} &&
           b1 == std::vector<int>{1, 1, 2, 2, 2, 2, 3, 3} &&
           imp_s3->fusion_dims == std::vector<int>{3, 6};
      detail = "corner blocks " + std::to_string(b0.size()) +
               " == " + std::to_string(b1.size()) + " ({" + join_ints(b0) +
               "} vs {" + join_ints(b1) +
               "}), fusion corner ranks differ: " +
               join_ints(imp_s3->fusion_dims);
    }
    criterion(7, "corner-blocks-vs-fusion", ok, detail);
  } catch (const std::exception& e) {
    criterion(7, "corner-blocks-vs-fusion", false, e.what());
  }

  try {
    const GroupTable& t = eng_z2->group().table();
    QSystem qs = qsystem_from_gset(t, coset_action(t, {0}));
    MoritaContext ctx(*eng_z2, qs, 11);
    RegularHalfBraiding zreg = build_zreg(ctx);
    auto zr = zreg.verify(tol);
    double worst = std::max({zr.unitarity, zr.equivariance, zr.naturality,
                             zr.multiplicativity});
    HalfBraidingRep hrep(*tube_z2, zreg.to_half_braiding_object());
    double rep_res = hrep.star_representation_residual();
    criterion(8, "regular-half-braiding", worst < tol && rep_res < tol,
              "unitarity/naturality/multiplicativity residual " + fmt(worst) +
                  " < 1e-9, induced tube *-representation residual " +
                  fmt(rep_res) + " < 1e-9");
  } catch (const std::exception& e) {
    criterion(8, "regular-half-braiding", false, e.what());
  }

  // -------------------------------------------------------------------- 9
  try {
    CategoryEngine tl = suq2_engine(0.5, 12);
    std::vector<int> window = {0, 1, 2, 3, 4, 5, 6};  // internal spins <= 3
    double qd = tl.qdim(1);
    AnnularCorner c0 = annular_corner(tl, window, 0, 0);
    AnnularCorner c1 = annular_corner(tl, window, 1, 1);
    double comm = std::max(annular_commutator_residual(c0),
                           annular_commutator_residual(c1));
    bool dims_ok = c0.dim() == 7 && c1.dim() == 13 &&
                   c0.dim() == annular_dim_oracle(tl, window, 0, 0) &&
                   c1.dim() == annular_dim_oracle(tl, window, 1, 1);
    bool ok = std::abs(qd - 2.5) < 1e-12 && comm < tol && dims_ok;
    criterion(9, "truncated-annular-corners", ok,
              "spin-1/2 qdim " + fmt(qd) +
                  " == 2.5 exactly, corner commutators " + fmt(comm) +
                  " < 1e-9, corner dims 7/13 == fusion-path oracle");
  } catch (const std::exception& e) {
    criterion(9, "truncated-annular-corners", false, e.what());
  }

  // ------------------------------------------------------------------- 10
  try {
    const std::string cli = ANNULUS_CLI_PATH;
    const std::string cat = std::string(ANNULUS_DATA_DIR) + "/s3.json";
    const std::string f1 = "acceptance_rep1.json";
    const std::string f2 = "acceptance_rep2.json";
    auto run = [&](const std::string& out) {
      std::string cmd = cli + " tube verify --category " + cat +
                        " --seed 42 --out " + out + " >/dev/null 2>&1";
      return std::system(cmd.c_str());
    };
    int rc1 = run(f1), rc2 = run(f2);
    bool bytes_equal =
        rc1 == 0 && rc2 == 0 && read_file(f1) == read_file(f2);
    std::remove(f1.c_str());
    std::remove(f2.c_str());

    BlockDecomposition ba = decompose_star_algebra(tube_s3->algebra(), 3);
    BlockDecomposition bb = decompose_star_algebra(tube_s3->algebra(), 4);
    bool blocks_stable = ba.dims_sorted() == bb.dims_sorted();
    criterion(10, "determinism", bytes_equal && blocks_stable,
              std::string("reports byte-identical under a fixed seed") +
                  (bytes_equal ? " (yes)" : " (NO)") +
                  ", block multiset seed-independent" +
                  (blocks_stable ? " (yes)" : " (NO)"));
  } catch (const std::exception& e) {
    criterion(10, "determinism", false, e.what());
  }

  std::printf("acceptance: %d/10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
