#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "annulus/engine.hpp"

/// Q-systems C(X) from finite G-sets and the 2-category of module cells they
/// generate inside a group-rep backend.  Cells are graded by which sides
/// carry a Q-module structure; relative tensor products are realized on fixed
/// ambient Kronecker carriers cut down by junction projections, so
/// reassociation is the identity and only the unit constraints are
/// nontrivial.  Hom spaces are solved equivariantly in support-compressed
/// coordinates; simple cells carry standard conjugate pairs with intrinsic
/// dimensions d(M) = d(Q)^{-(s+t)/2}·dim(carrier).
namespace annulus {

// ---------------------------------------------------------------------------
// Q-system data

/// The commutative Q-system C(X) of a finite G-set X: carrier ℂ^X with the
/// permutation action, multiplication m(δ_x⊗δ_y) = √|X|·[x=y]·δ_x and unit
/// v = |X|^{-1/2} Σ_x δ_x, so v is an isometry and m m* = d(Q)·ι with
/// d(Q) = |X|.
struct QSystem {
  int points = 0;                        // |X|
  double dq = 0.0;                       // d(Q) = |X|
  std::vector<std::vector<int>> action;  // action[g][x] = g·x
  std::vector<Mat> perm;                 // permutation matrices
  Mat mul;                               // m : Q⊗Q -> Q, q × q²
  Mat unit;                              // v : 1 -> Q, q × 1
  Mat rq;                                // R_Q = m* v = Σ_x δ_x⊗δ_x, q² × 1
};

/// Left-coset action of G on G/H from a subgroup given by its elements.
/// Throws Validation when the elements do not form a subgroup.
inline std::vector<std::vector<int>> coset_action(
    const GroupTable& g, const std::vector<int>& subgroup_elements) {
  std::vector<int> h = subgroup_elements;
  std::sort(h.begin(), h.end());
  h.erase(std::unique(h.begin(), h.end()), h.end());
  require(!h.empty(), ErrorKind::Validation, "coset_action: empty subgroup");
  for (int a : h) {
    require(0 <= a && a < g.order, ErrorKind::Validation,
            "coset_action: element out of range");
    require(std::binary_search(h.begin(), h.end(), g.inv[a]),
            ErrorKind::Validation,
            "coset_action: set is not inverse-closed");
    for (int b : h)
      require(std::binary_search(h.begin(), h.end(), g.product(a, b)),
              ErrorKind::Validation, "coset_action: set is not closed");
  }
  std::vector<int> coset_of(g.order, -1);
  std::vector<int> reps;
  for (int a = 0; a < g.order; ++a) {
    if (coset_of[a] >= 0) continue;
    int c = static_cast<int>(reps.size());
    reps.push_back(a);
    for (int b : h) coset_of[g.product(a, b)] = c;
  }
  std::vector<std::vector<int>> act(g.order,
                                    std::vector<int>(reps.size(), -1));
  for (int k = 0; k < g.order; ++k)
    for (std::size_t c = 0; c < reps.size(); ++c)
      act[k][c] = coset_of[g.product(k, reps[c])];
  return act;
}

/// Matrix of a linear map on matrices in column-major vec coordinates:
/// column vec-index of E_{ij} is j·rows + i.
template <typename F>
inline Mat linear_map_matrix(F&& f, int rows, int cols) {
  Mat probe = f(Mat::Zero(rows, cols));
  Mat out(probe.size(), static_cast<Eigen::Index>(rows) * cols);
  Eigen::Index c = 0;
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      Mat e = Mat::Zero(rows, cols);
      e(i, j) = 1.0;
      out.col(c++) = vec_of(f(e));
    }
  return out;
}

/// Builds and validates the Q-system of a G-set: checks the action axioms,
/// the algebra/Frobenius identities, and simplicity of Q as a bimodule over
/// itself (one-dimensional commutant), which fails exactly when the action
/// is not transitive.
inline QSystem qsystem_from_gset(const GroupTable& g,
                                 std::vector<std::vector<int>> action) {
  require(static_cast<int>(action.size()) == g.order, ErrorKind::Validation,
          "qsystem_from_gset: action table needs one row per group element");
  const int q = action.empty() ? 0 : static_cast<int>(action[0].size());
  require(q > 0, ErrorKind::Validation, "qsystem_from_gset: empty G-set");
  for (const auto& row : action) {
    require(static_cast<int>(row.size()) == q, ErrorKind::Validation,
            "qsystem_from_gset: ragged action table");
    std::vector<bool> seen(q, false);
    for (int x : row) {
      require(0 <= x && x < q && !seen[x], ErrorKind::Validation,
              "qsystem_from_gset: action row is not a permutation");
      seen[x] = true;
    }
  }
  for (int x = 0; x < q; ++x)
    require(action[g.id][x] == x, ErrorKind::Validation,
            "qsystem_from_gset: identity must act trivially");
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      for (int x = 0; x < q; ++x)
        require(action[g.product(a, b)][x] == action[a][action[b][x]],
                ErrorKind::Validation,
                "qsystem_from_gset: action is not a homomorphism");

  QSystem out;
  out.points = q;
  out.dq = double(q);
  out.action = std::move(action);
  const double rq = std::sqrt(double(q));
  out.mul = Mat::Zero(q, q * q);
  for (int x = 0; x < q; ++x) out.mul(x, x * q + x) = rq;
  out.unit = Mat::Constant(q, 1, 1.0 / rq);
  out.rq = Mat::Zero(q * q, 1);
  for (int x = 0; x < q; ++x) out.rq(x * q + x, 0) = 1.0;
  out.perm.reserve(out.action.size());
  for (const auto& row : out.action) {
    Mat p = Mat::Zero(q, q);
    for (int x = 0; x < q; ++x) p(row[x], x) = 1.0;
    out.perm.push_back(std::move(p));
  }

  // Algebra and Frobenius invariants (exact in this model).
  const Mat iq = identity(q);
  require(residual(dagger(out.unit) * out.unit, Mat::Identity(1, 1)) < 1e-12,
          ErrorKind::CheckFailed, "qsystem: unit is not an isometry");
  require(residual(out.mul * dagger(out.mul), out.dq * iq) < 1e-12,
          ErrorKind::CheckFailed, "qsystem: m m* != d(Q)·1");
  require(residual(out.mul * kron(out.mul, iq), out.mul * kron(iq, out.mul)) <
              1e-12,
          ErrorKind::CheckFailed, "qsystem: multiplication not associative");
  require(residual(out.mul * kron(out.unit, iq), iq) < 1e-12 &&
              residual(out.mul * kron(iq, out.unit), iq) < 1e-12,
          ErrorKind::CheckFailed, "qsystem: unit law fails");
  require(residual(kron(out.mul, iq) * kron(iq, dagger(out.mul)),
                   dagger(out.mul) * out.mul) < 1e-12,
          ErrorKind::CheckFailed, "qsystem: Frobenius identity fails");
  require(std::abs((dagger(out.rq) * out.rq)(0, 0) - cx(out.dq, 0)) < 1e-12,
          ErrorKind::CheckFailed, "qsystem: |R_Q|^2 != d(Q)");
  for (std::size_t k = 0; k < out.perm.size(); ++k) {
    require(residual(out.mul * kron(out.perm[k], out.perm[k]),
                     out.perm[k] * out.mul) < 1e-12,
            ErrorKind::CheckFailed, "qsystem: multiplication not equivariant");
  }

  // Simplicity: the bimodule commutant {T : T equivariant, T m = m(ι⊗T),
  // T m = m(T⊗ι)} must be trivial; otherwise the action is intransitive and
  // C(X) splits as a Q-system.
  std::vector<Mat> cons;
  for (const Mat& pg : out.perm) cons.push_back(intertwiner_constraint(pg, pg));
  cons.push_back(linear_map_matrix(
      [&](const Mat& t) -> Mat { return t * out.mul - out.mul * kron(iq, t); },
      q, q));
  cons.push_back(linear_map_matrix(
      [&](const Mat& t) -> Mat { return t * out.mul - out.mul * kron(t, iq); },
      q, q));
  int commutant = static_cast<int>(joint_kernel(cons, q * q).cols());
  require(commutant == 1, ErrorKind::Validation,
          "qsystem_from_gset: Q is not simple (commutant dimension " +
              std::to_string(commutant) +
              "); the G-set action must be transitive");
  return out;
}

// ---------------------------------------------------------------------------
// Cells

/// One cell of the module 2-category, presented on an explicit ambient
/// carrier.  Grade (s,t) ∈ {0,1}² records whether the left (s) and right (t)
/// sides carry a Q-module structure; l and r are the module actions on the
/// full ambient carrier.  p is the support projection (identity for freshly
/// presented simples, a junction product for relative tensor composites) and
/// u an orthonormal basis of its range.  Enumerated simples also carry the
/// standard conjugate pair against their dual in the grade lists.
struct Cell {
  int s = 0, t = 0;      // grade
  int amb = 0;           // ambient carrier dimension
  std::vector<Mat> act;  // unitary G-action on the ambient carrier
  Mat l;                 // Q⊗M -> M when s == 1, else empty
  Mat r;                 // M⊗Q -> M when t == 1, else empty
  Mat p;                 // support projection
  Mat u;                 // isometry range(p) -> ambient carrier
  int rank = 0;          // rank of p
  int fa = -1, fb = -1;  // factor ids for interned composites
  // Simple-cell data, set during enumeration:
  int dual = -1;         // position of the dual cell in its grade list
  double d = 0.0;        // intrinsic dimension
  Mat R, Rbar;           // R : 1_t -> dual⊗M,  Rbar : 1_s -> M⊗dual
  std::string name;
};

// ---------------------------------------------------------------------------
// The cell workspace

/// Owns every cell reachable from one Q-system inside a group backend: the
/// four grade lists of simple cells, interned relative-tensor composites,
/// support-compressed hom bases, unit constraints, and standard pairs.
/// Grade-(0,0) hom spaces are solved with the same averaging projector and
/// normalization the backend uses, so that corner reproduces the plain
/// category exactly.
class MoritaContext {
 public:
  MoritaContext(const CategoryEngine& eng, QSystem qs, std::uint64_t seed = 11)
      : m_eng(&eng), m_q(std::move(qs)), m_rng(seed ^ 0x9e3779b97f4a7c15ull) {
    require(eng.is_group(), ErrorKind::BackendMismatch,
            "morita cells need a finite-group backend");
    require(static_cast<int>(m_q.action.size()) == eng.group().table().order,
            ErrorKind::ShapeMismatch,
            "morita: Q-system built over a different group order");
    build_unit11();
    build_grade00();
    build_grade01();
    build_grade10();
    build_module_pairs();
    build_grade11();
    check_global_dims();
  }

  const CategoryEngine& engine() const { return *m_eng; }
  const QSystem& qsystem() const { return m_q; }
  const Cell& cell(int id) const { return m_cells[id]; }
  int cell_count() const { return static_cast<int>(m_cells.size()); }

  /// Simple cells of one grade, as registry ids.  Grade (1,1) lists the unit
  /// cell Q first; grade (0,0) follows the backend's label order, so its
  /// first entry is the tensor unit.
  const std::vector<int>& irr(int s, int t) const { return m_irr[s][t]; }
  int unit_cell(int s) const { return s == 0 ? m_irr[0][0][0] : m_one1; }

  /// Registry id of the dual cell: list duals for enumerated simples,
  /// reversed duals of the factors for composites.
  int dual_id(int a) {
    const Cell& c = m_cells[a];
    if (c.fa < 0) {
      require(c.dual >= 0, ErrorKind::Validation,
              "dual_id: cell is not in the simple lists");
      return m_irr[c.t][c.s][c.dual];
    }
    return compose(dual_id(c.fb), dual_id(c.fa));
  }

  /// Interned relative tensor product A⊗B over the shared grade, with a
  /// junction projection when the shared side is the module side.
  int compose(int a, int b) {
    auto it = m_comp.find({a, b});
    if (it != m_comp.end()) return it->second;
    const Cell& ca = m_cells[a];
    const Cell& cb = m_cells[b];
    require(ca.t == cb.s, ErrorKind::ShapeMismatch,
            "compose: cell grades do not match");
    Cell c;
    c.s = ca.s;
    c.t = cb.t;
    c.amb = ca.amb * cb.amb;
    c.fa = a;
    c.fb = b;
    c.act.reserve(ca.act.size());
    for (std::size_t g = 0; g < ca.act.size(); ++g)
      c.act.push_back(kron(ca.act[g], cb.act[g]));
    if (c.s == 1) c.l = kron(ca.l, identity(cb.amb));
    if (c.t == 1) c.r = kron(identity(ca.amb), cb.r);
    c.p = kron(ca.p, cb.p);
    if (ca.t == 1) {
      Mat j = junction(ca, cb);
      c.p = j * c.p;
      require(residual(c.p * c.p, c.p) < 1e-9, ErrorKind::CheckFailed,
              "compose: support projection is not idempotent");
    }
    bool full = residual(c.p, identity(c.amb)) < 1e-12;
    c.u = full ? identity(c.amb) : projection_range(c.p);
    c.rank = static_cast<int>(c.u.cols());
    c.name = "(" + ca.name + ")(" + cb.name + ")";
    int id = add_cell(std::move(c));
    m_comp.emplace(std::make_pair(a, b), id);
    return id;
  }

  /// Junction projection on M⊗N for a right module M and left module N:
  ///   p = d(Q)^{-1} (r_M ⊗ l_N)(ι_M ⊗ R_Q ⊗ ι_N).
  Mat junction(const Cell& m, const Cell& n) const {
    Mat mid = kron(kron(identity(m.amb), m_q.rq), identity(n.amb));
    return (1.0 / m_q.dq) * kron(m.r, n.l) * mid;
  }

  /// Right unit constraint V_A : A⊗1_t -> A, a coisometry with V†V the
  /// junction support; the identity for t = 0.
  Mat right_unitor(int a) {
    const Cell& ca = m_cells[a];
    if (ca.t == 0) return identity(ca.amb);
    return std::pow(m_q.dq, -0.5) * ca.r * m_cells[compose(a, m_one1)].p;
  }

  /// Left unit constraint W_A : 1_s⊗A -> A.
  Mat left_unitor(int a) {
    const Cell& ca = m_cells[a];
    if (ca.s == 0) return identity(ca.amb);
    return std::pow(m_q.dq, -0.5) * ca.l * m_cells[compose(m_one1, a)].p;
  }

  /// Orthonormal basis of the equivariant module maps dom -> cod, solved in
  /// support-compressed coordinates and re-embedded on the ambient carriers.
  /// Normalized so Tr(T†T') = δ·rank(p_dom); bases into simple cells are
  /// then isometries.
  const std::vector<Mat>& hom_cells(int dom, int cod) {
    auto it = m_hom.find({dom, cod});
    if (it != m_hom.end()) return it->second;
    const Cell& cd = m_cells[dom];
    const Cell& cc = m_cells[cod];
    require(cd.s == cc.s && cd.t == cc.t, ErrorKind::ShapeMismatch,
            "hom_cells: grade mismatch");
    const int rd = cd.rank, rc = cc.rank;
    const int n = static_cast<int>(m_q.action.size());
    const int q = m_q.points;
    std::vector<Mat> ad(n), ac(n);
    for (int g = 0; g < n; ++g) {
      ad[g] = dagger(cd.u) * cd.act[g] * cd.u;
      ac[g] = dagger(cc.u) * cc.act[g] * cc.u;
    }
    Mat avg = Mat::Zero(rd * rc, rd * rc);
    for (int g = 0; g < n; ++g) avg += kron(ad[g].conjugate(), ac[g]);
    avg /= double(n);
    // The group average of the unitary conjugation action is an exact
    // orthogonal projection, so the equivariant subspace comes from a cheap
    // Hermitian eigensolve; the module constraints are then imposed on that
    // small basis instead of the full vec space.
    Mat kernel = projection_range(avg);
    if ((cd.s == 1 || cd.t == 1) && kernel.cols() > 0) {
      std::vector<Mat> cons;
      if (cd.s == 1) {
        Mat ld = dagger(cd.u) * cd.l * kron(identity(q), cd.u);
        Mat lc = dagger(cc.u) * cc.l * kron(identity(q), cc.u);
        Mat onbasis(rc * rd * q, kernel.cols());
        for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
          Mat t = mat_of(kernel.col(c), rc, rd);
          onbasis.col(c) = vec_of(Mat(t * ld - lc * kron(identity(q), t)));
        }
        cons.push_back(std::move(onbasis));
      }
      if (cd.t == 1) {
        Mat rdm = dagger(cd.u) * cd.r * kron(cd.u, identity(q));
        Mat rcm = dagger(cc.u) * cc.r * kron(cc.u, identity(q));
        Mat onbasis(rc * rd * q, kernel.cols());
        for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
          Mat t = mat_of(kernel.col(c), rc, rd);
          onbasis.col(c) = vec_of(Mat(t * rdm - rcm * kron(t, identity(q))));
        }
        cons.push_back(std::move(onbasis));
      }
      kernel = Mat(kernel * joint_kernel(cons, static_cast<int>(kernel.cols())));
    }
    std::vector<Mat> basis;
    double scale = std::sqrt(double(rd));
    for (Eigen::Index c = 0; c < kernel.cols(); ++c)
      basis.push_back(scale * cc.u *
                      mat_of(canonical_phase(kernel.col(c)), rc, rd) *
                      dagger(cd.u));
    auto [pos, ok] = m_hom.emplace(std::make_pair(dom, cod), std::move(basis));
    (void)ok;
    return pos->second;
  }

  /// Expansion of an ambient-carrier morphism in the hom basis of its type,
  /// with the relative reconstruction residual.
  std::pair<Vec, double> expand_cells(const Mat& f, int dom, int cod) {
    const std::vector<Mat>& hb = hom_cells(dom, cod);
    const double dd = double(m_cells[dom].rank);
    Vec coeff(static_cast<Eigen::Index>(hb.size()));
    Mat recon = Mat::Zero(f.rows(), f.cols());
    for (std::size_t c = 0; c < hb.size(); ++c) {
      Eigen::Index ci = static_cast<Eigen::Index>(c);
      coeff(ci) = (hb[c].adjoint() * f).trace() / dd;
      recon += coeff(ci) * hb[c];
    }
    return {coeff, (recon - f).norm() / std::max(1.0, f.norm())};
  }

  /// Scalar c with T = c·p for a supported endomorphism of the cell.
  cx scalar_of(const Mat& t, int a) const {
    const Cell& c = m_cells[a];
    return (dagger(c.u) * t * c.u).trace() / double(c.rank);
  }

  /// Pair (R, Rbar) of any registered cell: stored for enumerated simples,
  /// nested from the factors for interned composites.
  std::pair<Mat, Mat> pair_of(int a) {
    const Cell& c = m_cells[a];
    if (c.fa < 0) {
      require(c.R.size() > 0, ErrorKind::Validation,
              "pair_of: cell has no standard pair");
      return {c.R, c.Rbar};
    }
    return composite_pair(c.fa, c.fb);
  }

  /// Standard pair of the relative tensor A⊗B from the factors' pairs, with
  /// unit insertions opening the junction:
  ///   R_{AB}    = (ι_Bbar ⊗ R_A ⊗ ι_B)(ι_Bbar ⊗ W_B†) R_B,
  ///   Rbar_{AB} = (ι_A ⊗ Rbar_B ⊗ ι_Abar)(V_A† ⊗ ι_Abar) Rbar_A.
  std::pair<Mat, Mat> composite_pair(int a, int b) {
    auto [ra, rabar] = pair_of(a);
    auto [rb, rbbar] = pair_of(b);
    const Cell& ca = m_cells[a];
    const Cell& cb = m_cells[b];
    const int nda = m_cells[dual_id(a)].amb;
    const int ndb = m_cells[dual_id(b)].amb;
    Mat r = kron(identity(ndb), kron(ra, identity(cb.amb))) *
            kron(identity(ndb), dagger(left_unitor(b))) * rb;
    Mat rbar = kron(identity(ca.amb), kron(rbbar, identity(nda))) *
               kron(dagger(right_unitor(a)), identity(nda)) * rabar;
    return {r, rbar};
  }

  /// Dual transposition along the standard pairs: T : A -> B gives
  /// T^∨ : Bbar -> Abar.
  Mat cell_vee(const Mat& t, int a, int b) {
    auto [ra, rab] = pair_of(a);
    (void)rab;
    auto [rb, rbbar] = pair_of(b);
    (void)rb;
    const int da = dual_id(a), db = dual_id(b);
    const int nda = m_cells[da].amb, ndb = m_cells[db].amb;
    Mat pre = dagger(left_unitor(db));
    Mat s1 = kron(ra, identity(ndb));
    Mat s2 = kron(identity(nda), kron(t, identity(ndb)));
    Mat s3 = kron(identity(nda), dagger(rbbar));
    Mat post = right_unitor(da);
    return post * s3 * s2 * s1 * pre;
  }

  /// Worst-case structural residual of a cell: unitarity and equivariance,
  /// module laws on the full carrier, and support compatibility.
  double cell_residual(int id) {
    const Cell& c = m_cells[id];
    const Mat ia = identity(c.amb);
    const int q = m_q.points;
    double worst = residual(c.p * c.p, c.p);
    worst = std::max(worst, residual(c.p, dagger(c.p)));
    for (std::size_t g = 0; g < c.act.size(); ++g) {
      worst = std::max(worst, residual(dagger(c.act[g]) * c.act[g], ia));
      worst = std::max(worst, residual(c.p * c.act[g], c.act[g] * c.p));
      if (c.s == 1)
        worst = std::max(worst, residual(c.act[g] * c.l,
                                         c.l * kron(m_q.perm[g], c.act[g])));
      if (c.t == 1)
        worst = std::max(worst, residual(c.act[g] * c.r,
                                         c.r * kron(c.act[g], m_q.perm[g])));
    }
    if (c.s == 1) {
      worst = std::max(worst, residual(c.l * kron(m_q.mul, ia),
                                       c.l * kron(identity(q), c.l)));
      worst = std::max(worst, residual(c.l * kron(m_q.unit, ia), ia));
      worst = std::max(worst,
                       residual(c.l * dagger(c.l), m_q.dq * Mat(ia)));
      worst = std::max(worst, residual(c.p * c.l, c.l * kron(identity(q), c.p)));
    }
    if (c.t == 1) {
      worst = std::max(worst, residual(c.r * kron(ia, m_q.mul),
                                       c.r * kron(c.r, identity(q))));
      worst = std::max(worst, residual(c.r * kron(ia, m_q.unit), ia));
      worst = std::max(worst,
                       residual(c.r * dagger(c.r), m_q.dq * Mat(ia)));
      worst = std::max(worst, residual(c.p * c.r, c.r * kron(c.p, identity(q))));
    }
    if (c.s == 1 && c.t == 1)
      worst = std::max(worst, residual(c.l * kron(identity(q), c.r),
                                       c.r * kron(c.l, identity(q))));
    return worst;
  }

 private:
  int add_cell(Cell c) {
    m_cells.push_back(std::move(c));
    return static_cast<int>(m_cells.size()) - 1;
  }

  void build_unit11() {
    Cell c;
    c.s = c.t = 1;
    c.amb = m_q.points;
    c.act = m_q.perm;
    c.l = c.r = m_q.mul;
    c.p = identity(c.amb);
    c.u = identity(c.amb);
    c.rank = c.amb;
    c.dual = 0;
    c.d = 1.0;
    c.name = "Q";
    m_one1 = add_cell(std::move(c));
    // Standard pair of the unit cell: R = Rbar = W_Q† (zigzags reduce to the
    // unit constraints, giving χ = 1 and d = 1).
    Mat w = left_unitor(m_one1);
    m_cells[m_one1].R = dagger(w);
    m_cells[m_one1].Rbar = dagger(w);
  }

  void build_grade00() {
    const GroupIrreps& ir = m_eng->group().irreps();
    for (int i = 0; i < ir.count(); ++i) {
      Cell c;
      c.s = c.t = 0;
      c.amb = ir.dims[i];
      c.act = ir.reps[i];
      c.p = identity(c.amb);
      c.u = identity(c.amb);
      c.rank = c.amb;
      c.dual = ir.dual[i];
      c.d = double(ir.dims[i]);
      const StdPair& sp = m_eng->standard_pair(Word::single(i));
      c.R = sp.R.m;
      c.Rbar = sp.Rbar.m;
      c.name = m_eng->label_name(i);
      m_irr[0][0].push_back(add_cell(std::move(c)));
    }
  }

  /// Compressed sub-cell presentation on an isometry ψ into the parent's
  /// ambient carrier.
  Cell subcell(const Cell& parent, const Mat& psi, const std::string& name) {
    Cell c;
    c.s = parent.s;
    c.t = parent.t;
    c.amb = static_cast<int>(psi.cols());
    const int q = m_q.points;
    for (const Mat& a : parent.act) c.act.push_back(dagger(psi) * a * psi);
    if (parent.s == 1) c.l = dagger(psi) * parent.l * kron(identity(q), psi);
    if (parent.t == 1) c.r = dagger(psi) * parent.r * kron(psi, identity(q));
    c.p = identity(c.amb);
    c.u = identity(c.amb);
    c.rank = c.amb;
    c.name = name;
    return c;
  }

  /// Splits a cell into registered simple sub-cells via the eigenspaces of a
  /// random self-adjoint endomorphism; requires each piece to come out
  /// simple.
  std::vector<int> decompose_cell(int id) {
    const std::vector<Mat>& endo = hom_cells(id, id);
    const Cell& c = m_cells[id];
    std::vector<int> out;
    if (endo.size() == 1) {
      out.push_back(add_cell(subcell(c, c.u, c.name)));
      return out;
    }
    Mat x = Mat::Zero(c.rank, c.rank);
    for (const Mat& e : endo)
      x += m_rng.complex_uniform() * (dagger(c.u) * e * c.u);
    Mat h = 0.5 * (x + dagger(x));
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const RVec& ev = es.eigenvalues();
    const double cut =
        1e-6 * (ev(ev.size() - 1) - ev(0) + 1.0);
    int lo = 0;
    for (int i = 1; i <= ev.size(); ++i) {
      if (i < ev.size() && ev(i) - ev(i - 1) <= cut) continue;
      Mat phi(c.rank, i - lo);
      for (int k = lo; k < i; ++k)
        phi.col(k - lo) = canonical_phase(es.eigenvectors().col(k));
      std::string name =
          c.name + "[" + std::to_string(out.size()) + "]";
      int sub = add_cell(subcell(c, Mat(c.u * phi), name));
      require(hom_cells(sub, sub).size() == 1, ErrorKind::NonSemisimple,
              "decompose_cell: eigenspace of a random commutant element is "
              "not simple");
      out.push_back(sub);
      lo = i;
    }
    return out;
  }

  /// Registered conjugate presentation: entrywise-conjugate carrier with the
  /// grades swapped; the left action comes from the right action and vice
  /// versa.
  int conj_cell(int id) {
    const Cell& c = m_cells[id];
    Cell o;
    o.s = c.t;
    o.t = c.s;
    o.amb = c.amb;
    const int n = c.amb, q = m_q.points;
    for (const Mat& a : c.act) o.act.push_back(a.conjugate());
    if (c.t == 1) {
      o.l = Mat::Zero(n, q * n);
      for (int y = 0; y < n; ++y)
        for (int a = 0; a < q; ++a)
          for (int x = 0; x < n; ++x) o.l(y, a * n + x) = std::conj(c.r(y, x * q + a));
    }
    if (c.s == 1) {
      o.r = Mat::Zero(n, n * q);
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
          for (int a = 0; a < q; ++a) o.r(y, x * q + a) = std::conj(c.l(y, a * n + x));
    }
    o.p = c.p.conjugate();
    o.u = c.u.conjugate();
    o.rank = c.rank;
    o.name = "conj(" + c.name + ")";
    return add_cell(std::move(o));
  }

  void build_grade01() {
    // Q carried as a plain right module cell, the seed of the sweep.
    Cell qr;
    qr.s = 0;
    qr.t = 1;
    qr.amb = m_q.points;
    qr.act = m_q.perm;
    qr.r = m_q.mul;
    qr.p = identity(qr.amb);
    qr.u = identity(qr.amb);
    qr.rank = qr.amb;
    qr.name = "Qr";
    m_qright = add_cell(std::move(qr));
    // Every simple right module embeds into some U_i ⊗ Q, so sweeping the
    // free modules finds the complete list.
    for (int i : m_irr[0][0]) {
      int free = compose(i, m_qright);
      for (int cand : decompose_cell(free)) {
        bool fresh = true;
        for (int have : m_irr[0][1])
          if (!hom_cells(cand, have).empty()) {
            fresh = false;
            break;
          }
        if (fresh) m_irr[0][1].push_back(cand);
      }
    }
    for (std::size_t k = 0; k < m_irr[0][1].size(); ++k) {
      Cell& c = m_cells[m_irr[0][1][k]];
      c.dual = static_cast<int>(k);
      c.name = "M" + std::to_string(k);
    }
  }

  void build_grade10() {
    for (std::size_t k = 0; k < m_irr[0][1].size(); ++k) {
      int cid = conj_cell(m_irr[0][1][k]);
      m_cells[cid].dual = static_cast<int>(k);
      m_cells[cid].name = "M" + std::to_string(k) + "~";
      m_irr[1][0].push_back(cid);
    }
  }

  /// One conjugate-equation zigzag: χ with
  ///   W_X (Rbar* ⊗ ι_X)(ι_X ⊗ R) V_X† = χ·ι_X.
  cx zig_chi(int x, const Mat& r, const Mat& rbar) {
    const Cell& c = m_cells[x];
    Mat m1 = dagger(right_unitor(x));
    Mat m2 = kron(identity(c.amb), r);
    Mat m3 = kron(dagger(rbar), identity(c.amb));
    Mat m4 = left_unitor(x);
    return scalar_of(m4 * m3 * m2 * m1, x);
  }

  /// Module standard pairs for the one-sided grades.  For a right module M
  /// with plain-carrier pair Σ_κ ē_κ⊗e_κ:
  ///   R    = d(Q)^{-1/4} (ι_Mbar ⊗ r)(Σ ē⊗e ⊗ ι_Q) : Q -> Mbar⊗M,
  ///   Rbar = d(Q)^{-1/4} p_{M,Mbar} (Σ e⊗ē)        : 1 -> M⊗Mbar,
  /// which satisfy the conjugate equations on the nose; the grade-(1,0)
  /// conjugates take the flipped pairs.
  void build_module_pairs() {
    const double c4 = std::pow(m_q.dq, -0.25);
    for (std::size_t k = 0; k < m_irr[0][1].size(); ++k) {
      Cell& m = m_cells[m_irr[0][1][k]];
      Cell& mb = m_cells[m_irr[1][0][k]];
      const int n = m.amb, q = m_q.points;
      Mat plain = Mat::Zero(n * n, 1);
      for (int i = 0; i < n; ++i) plain(i * n + i, 0) = 1.0;
      Mat r = c4 * kron(identity(n), m.r) * kron(plain, identity(q));
      Mat rbar = c4 * junction(m, mb) * plain;
      m.R = r;
      m.Rbar = rbar;
      mb.R = rbar;
      mb.Rbar = r;
      cx chi1 = zig_chi(m_irr[0][1][k], r, rbar);
      cx chi2 = zig_chi(m_irr[1][0][k], rbar, r);
      require(std::abs(chi1 - 1.0) + std::abs(chi2 - 1.0) < 1e-8,
              ErrorKind::CheckFailed,
              "module pair: conjugate equations fail for " + m.name);
      double d = std::real(scalar_of(dagger(r) * r, m_one1));
      require(std::abs(d - std::pow(m_q.dq, -0.5) * n) < 1e-6,
              ErrorKind::CheckFailed,
              "module pair: |R|^2 != d(Q)^{-1/2}·dim for " + m.name);
      m.d = d;
      mb.d = d;
    }
  }

  void build_grade11() {
    m_irr[1][1].push_back(m_one1);
    for (int sid : m_irr[1][0])
      for (int tid : m_irr[0][1]) {
        int prod = compose(sid, tid);
        for (int cand : decompose_cell(prod)) {
          bool fresh = !hom_cells(cand, m_one1).empty();
          if (fresh) continue;  // the unit is already listed
          bool dup = false;
          for (std::size_t k = 1; k < m_irr[1][1].size(); ++k)
            if (!hom_cells(cand, m_irr[1][1][k]).empty()) {
              dup = true;
              break;
            }
          if (!dup) m_irr[1][1].push_back(cand);
        }
      }
    for (std::size_t k = 1; k < m_irr[1][1].size(); ++k)
      m_cells[m_irr[1][1][k]].name = "X" + std::to_string(k);

    // Dual matching through conjugate presentations.
    const int count = static_cast<int>(m_irr[1][1].size());
    for (int k = 0; k < count; ++k) {
      if (k == 0) continue;  // the unit is self-dual by construction
      int cj = conj_cell(m_irr[1][1][k]);
      int found = -1;
      for (int k2 = 0; k2 < count; ++k2)
        if (!hom_cells(cj, m_irr[1][1][k2]).empty()) {
          require(found < 0, ErrorKind::CheckFailed,
                  "grade-(1,1) dual is not unique");
          found = k2;
        }
      require(found >= 0, ErrorKind::CheckFailed,
              "grade-(1,1) dual not found for " +
                  m_cells[m_irr[1][1][k]].name);
      m_cells[m_irr[1][1][k]].dual = found;
    }

    // Standard pairs: solve for the lower index of each dual orbit, with the
    // two-step normalization (phase and scale from the zigzag scalars), and
    // transport the flipped pair to the partner.
    for (int k = 1; k < count; ++k) {
      Cell& ck = m_cells[m_irr[1][1][k]];
      const int kd = ck.dual;
      if (kd < k) {
        const Cell& cp = m_cells[m_irr[1][1][kd]];
        ck.R = cp.Rbar;
        ck.Rbar = cp.R;
        ck.d = cp.d;
        continue;
      }
      const std::vector<Mat>& hr =
          hom_cells(m_one1, compose(m_irr[1][1][kd], m_irr[1][1][k]));
      const std::vector<Mat>& hb =
          hom_cells(m_one1, compose(m_irr[1][1][k], m_irr[1][1][kd]));
      require(hr.size() == 1 && hb.size() == 1, ErrorKind::CheckFailed,
              "grade-(1,1) conjugate-solution space is not one-dimensional");
      Mat r = hr[0], rbar = hb[0];
      cx chi1 = zig_chi(m_irr[1][1][k], r, rbar);
      cx chi2 = zig_chi(m_irr[1][1][kd], rbar, r);
      require(std::abs(chi2 - std::conj(chi1)) < 1e-8 * std::abs(chi1) + 1e-10,
              ErrorKind::CheckFailed,
              "grade-(1,1) pair: zigzag scalars are not conjugate");
      double lambda = 1.0 / std::sqrt(std::abs(chi1));
      cx mu = 1.0 / (lambda * std::conj(chi1));
      ck.R = lambda * r;
      ck.Rbar = mu * rbar;
      ck.d = 1.0 / std::abs(chi1);
      require(std::abs(ck.d - ck.amb / m_q.dq) < 1e-6, ErrorKind::CheckFailed,
              "grade-(1,1) dimension disagrees with d(Q)^{-1}·carrier for " +
                  ck.name);
    }
  }

  void check_global_dims() {
    const double order = double(m_eng->group().table().order);
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t) {
        double sum = 0.0;
        for (int id : m_irr[s][t]) sum += m_cells[id].d * m_cells[id].d;
        require(std::abs(sum - order) < 1e-6 * order, ErrorKind::CheckFailed,
                "global dimension of grade (" + std::to_string(s) + "," +
                    std::to_string(t) + ") is " + std::to_string(sum) +
                    ", expected the group order");
      }
  }

  const CategoryEngine* m_eng;
  QSystem m_q;
  Rng m_rng;
  // Deque so cell references stay valid while composites are interned.
  std::deque<Cell> m_cells;
  std::map<std::pair<int, int>, int> m_comp;
  std::map<std::pair<int, int>, std::vector<Mat>> m_hom;
  std::vector<int> m_irr[2][2];
  int m_one1 = -1;
  int m_qright = -1;
};

/// Simple Q-module cells of one grade: (0,1) right modules, (1,0) left
/// modules, (1,1) bimodules, (0,0) the plain simples.
inline std::vector<int> simple_modules(MoritaContext& ctx, int s, int t) {
  require(s == 0 || s == 1, ErrorKind::Validation, "simple_modules: bad grade");
  require(t == 0 || t == 1, ErrorKind::Validation, "simple_modules: bad grade");
  return ctx.irr(s, t);
}

/// Standard pair of a simple module cell with its intrinsic dimension; the
/// one-sided pairs satisfy |R|² = d(Q)^{-1/2}·dim(carrier).
struct ModuleStandardPair {
  Mat R, Rbar;
  double dim = 0.0;
};

inline ModuleStandardPair module_standard_pair(MoritaContext& ctx, int id) {
  const Cell& c = ctx.cell(id);
  require(c.R.size() > 0, ErrorKind::Validation,
          "module_standard_pair: cell has no stored pair");
  return {c.R, c.Rbar, c.d};
}

}  // namespace annulus
