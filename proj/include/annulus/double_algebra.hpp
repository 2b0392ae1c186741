#pragma once

#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "annulus/tube.hpp"

/// Drinfeld double 𝒟(G) of a finite group, built from the commutation rule
/// ω·a = a_{(2)} ω(a_{(3)} · S(a_{(1)})) of the paper's double construction.
/// For the basis (g,h) := ev_g·δ_h (group-like convolution part times
/// function part) the rule compiles to
///   (g,h)(g',h') = [h' = g'⁻¹ h g'] (g g', h'),   (g,h)* = (g⁻¹, g h g⁻¹).
/// The module also provides the conditional expectation onto c_c(Ĝ), the
/// annular algebra Tub(G) with B(H̄) legs, and the compiled isomorphism
/// Tub(G) → 𝒟(G) realizing the tube algebra as a full corner.
namespace annulus {

class DoubleAlgebra {
public:
  explicit DoubleAlgebra(const CategoryEngine& eng) : m_eng(&eng) {
    require(eng.is_group(), ErrorKind::BackendMismatch,
            "double: finite-group backends only");
    const GroupTable& g = eng.group().table();
    const int n = g.order;
    m_alg.dim = n * n;
    m_alg.lmul.assign(n * n, Mat::Zero(n * n, n * n));
    for (int a = 0; a < n; ++a)
      for (int h = 0; h < n; ++h)
        for (int b = 0; b < n; ++b)
          for (int h2 = 0; h2 < n; ++h2)
            if (h2 == g.product(g.inv[b], g.product(h, b)))
              m_alg.lmul[idx(a, h)](idx(g.product(a, b), h2), idx(b, h2)) =
                  1.0;
    m_alg.invol = Mat::Zero(n * n, n * n);
    for (int a = 0; a < n; ++a)
      for (int h = 0; h < n; ++h)
        m_alg.invol(idx(g.inv[a], g.conj(a, h)), idx(a, h)) = 1.0;
    m_alg.trace_vec = Vec::Zero(n * n);
    for (int h = 0; h < n; ++h) m_alg.trace_vec(idx(g.id, h)) = 1.0 / n;
  }

  const CategoryEngine& engine() const { return *m_eng; }
  const StarAlgebra& algebra() const { return m_alg; }
  int order() const { return m_eng->group().table().order; }
  int dim() const { return m_alg.dim; }
  int idx(int g, int h) const { return g * order() + h; }

  /// Coordinates of ev_g (convolution part) and δ_h (function part).
  Vec ev(int g) const {
    Vec v = Vec::Zero(dim());
    for (int h = 0; h < order(); ++h) v(idx(g, h)) = 1.0;
    return v;
  }
  Vec delta(int h) const {
    Vec v = Vec::Zero(dim());
    v(idx(m_eng->group().table().id, h)) = 1.0;
    return v;
  }

  /// Matrix unit m^i_{xy} of the block decomposition c_c(Ĝ) = ⊕_i B(H_i):
  /// m^i_{xy} = (d_i/|G|) Σ_g conj(U_i(g)_{xy}) ev_g.
  Vec m_unit(int i, int x, int y) const {
    const auto& ir = m_eng->group().irreps();
    const int n = order();
    Vec v = Vec::Zero(dim());
    for (int g = 0; g < n; ++g) {
      cx c = double(ir.dims[i]) / double(n) * std::conj(ir.reps[i][g](x, y));
      for (int h = 0; h < n; ++h) v(idx(g, h)) += c;
    }
    return v;
  }

  /// Matrix coefficient u^j_{zw} = Σ_h U_j(h)_{zw} δ_h of the function part.
  Vec u_coeff(int j, int z, int w) const {
    const auto& ir = m_eng->group().irreps();
    Vec v = Vec::Zero(dim());
    const int e = m_eng->group().table().id;
    for (int h = 0; h < order(); ++h) v(idx(e, h)) += ir.reps[j][h](z, w);
    return v;
  }

  /// Change of basis from {m^i_{xy}·u^j_{zw}} to the internal (g,h) basis;
  /// columns ordered (i,x,y) outer, (j,z,w) inner.  Must be invertible.
  Mat mu_basis() const {
    const auto& ir = m_eng->group().irreps();
    const int n = order();
    Mat a = Mat::Zero(n, n), b = Mat::Zero(n, n);
    int col = 0;
    for (int i = 0; i < ir.count(); ++i)
      for (int x = 0; x < ir.dims[i]; ++x)
        for (int y = 0; y < ir.dims[i]; ++y, ++col)
          for (int g = 0; g < n; ++g)
            a(g, col) = double(ir.dims[i]) / double(n) *
                        std::conj(ir.reps[i][g](x, y));
    col = 0;
    for (int j = 0; j < ir.count(); ++j)
      for (int z = 0; z < ir.dims[j]; ++z)
        for (int w = 0; w < ir.dims[j]; ++w, ++col)
          for (int h = 0; h < n; ++h) b(h, col) = ir.reps[j][h](z, w);
    return kron(a, b);
  }

  /// Conditional expectation E₀ onto c_c(Ĝ): E₀(ev_g·δ_h) = (1/|G|) ev_g.
  Mat cond_expectation() const {
    const int n = order();
    Mat e0 = Mat::Zero(dim(), dim());
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h)
        for (int h2 = 0; h2 < n; ++h2)
          e0(idx(g, h2), idx(g, h)) = 1.0 / n;
    return e0;
  }

  /// Rescaled expectation E = D∘E₀ with block i of c_c(Ĝ) scaled by d_i.
  Mat rescaled_expectation() const {
    const auto& ir = m_eng->group().irreps();
    const int n = order();
    // Convolution by the weighted central idempotent Σ_i d_i z_i acts on the
    // ev-coordinates; extend to 𝒟(G) through E₀.
    Mat dmat = Mat::Zero(n, n);
    for (int i = 0; i < ir.count(); ++i)
      for (int gp = 0; gp < n; ++gp)
        for (int gpp = 0; gpp < n; ++gpp) {
          const GroupTable& g = m_eng->group().table();
          int rel = g.product(gp, g.inv[gpp]);
          dmat(gp, gpp) += double(ir.dims[i]) * double(ir.dims[i]) /
                           double(n) * std::conj(ir.characters[i](rel));
        }
    Mat e0 = cond_expectation();
    Mat big = Mat::Zero(dim(), dim());
    for (int gp = 0; gp < n; ++gp)
      for (int gpp = 0; gpp < n; ++gpp)
        if (std::abs(dmat(gp, gpp)) > 1e-15)
          for (int h = 0; h < n; ++h)
            big(idx(gp, h), idx(gpp, h)) = dmat(gp, gpp);
    return big * e0;
  }

private:
  const CategoryEngine* m_eng;
  StarAlgebra m_alg;
};

/// Classical oracle: irreducible representations of 𝒟(G) by conjugacy class
/// and centralizer irrep; returns (dimension, restriction multiplicities of
/// each U_i under the convolution part), computed by character theory only.
struct DoubleIrrep {
  int dim = 0;
  std::vector<int> restriction;  // multiplicity of U_i, per simple i
};

inline std::vector<DoubleIrrep> double_irreps(const CategoryEngine& eng) {
  require(eng.is_group(), ErrorKind::BackendMismatch,
          "double_irreps: finite-group backends only");
  const GroupTable& g = eng.group().table();
  const GroupIrreps& ir = eng.group().irreps();
  ConjugacyClasses cc = conjugacy_classes(g);
  std::vector<DoubleIrrep> out;
  for (std::size_t c = 0; c < cc.classes.size(); ++c) {
    int rep = cc.representative[c];
    Subgroup z = subgroup_table(g, centralizer(g, rep));
    GroupIrreps zir = compute_irreps(z.table);
    for (int sigma = 0; sigma < zir.count(); ++sigma) {
      DoubleIrrep d;
      d.dim = static_cast<int>(cc.classes[c].size()) * zir.dims[sigma];
      for (int i = 0; i < ir.count(); ++i)
        d.restriction.push_back(
            induced_multiplicity(ir, z, zir.characters[sigma], i));
      int check = 0;
      for (int i = 0; i < ir.count(); ++i)
        check += d.restriction[i] * ir.dims[i];
      require(check == d.dim, ErrorKind::CheckFailed,
              "double_irreps: restriction multiplicities do not add up");
      out.push_back(std::move(d));
    }
  }
  int total = 0;
  for (const auto& d : out) total += d.dim * d.dim;
  require(total == g.order * g.order, ErrorKind::CheckFailed,
          "double_irreps: Σ dim² != |G|²");
  return out;
}

// ---------------------------------------------------------------------------
// Tub(G): the annular algebra Tub(Rep G)_{ij} ⊗ B(H_j̄, H_ī)
// ---------------------------------------------------------------------------

/// Basis: (tube basis element a in component (i,j,s); leg row p < d_i of
/// H_ī; leg column q < d_j of H_j̄), with H_k̄ modeled as ℂ^{d_k} carrying
/// the conjugate representation.
class TubeG {
public:
  explicit TubeG(const TubeAlgebra& tube) : m_tube(&tube) {
    const CategoryEngine& eng = tube.engine();
    for (int a = 0; a < tube.dim(); ++a) {
      const TubeBasisElement& e = tube.basis()[a];
      for (int p = 0; p < eng.carrier_dim(e.i); ++p)
        for (int q = 0; q < eng.carrier_dim(e.j); ++q) {
          m_index[{a, p, q}] = static_cast<int>(m_basis.size());
          m_basis.emplace_back(a, p, q);
        }
    }
    const int D = dim();
    m_alg.dim = D;
    m_alg.lmul.assign(D, Mat::Zero(D, D));
    const StarAlgebra& small = tube.algebra();
    for (int big_a = 0; big_a < D; ++big_a) {
      auto [a, p, q] = m_basis[big_a];
      for (int big_b = 0; big_b < D; ++big_b) {
        auto [b, p2, q2] = m_basis[big_b];
        if (q != p2) continue;
        if (tube.basis()[a].j != tube.basis()[b].i) continue;
        Vec prod = small.lmul[a].col(b);
        for (int c = 0; c < tube.dim(); ++c)
          if (std::abs(prod(c)) > 0.0)
            m_alg.lmul[big_a](m_index.at({c, p, q2}), big_b) = prod(c);
      }
    }
    m_alg.invol = Mat::Zero(D, D);
    for (int big_a = 0; big_a < D; ++big_a) {
      auto [a, p, q] = m_basis[big_a];
      Vec ea = Vec::Zero(tube.dim());
      ea(a) = 1.0;
      Vec st = small.star(ea);
      for (int c = 0; c < tube.dim(); ++c)
        if (std::abs(st(c)) > 0.0)
          m_alg.invol(m_index.at({c, q, p}), big_a) = st(c);
    }
    // Trace: τ_big(x⊗S) = τ(x)·tr(S); faithful positive on the legs.
    m_alg.trace_vec = Vec::Zero(D);
    for (int big_a = 0; big_a < D; ++big_a) {
      auto [a, p, q] = m_basis[big_a];
      if (p == q) m_alg.trace_vec(big_a) = small.trace_vec(a);
    }
  }

  const TubeAlgebra& tube() const { return *m_tube; }
  int dim() const { return static_cast<int>(m_basis.size()); }
  const StarAlgebra& algebra() const { return m_alg; }
  const std::vector<std::tuple<int, int, int>>& basis() const {
    return m_basis;
  }
  int index(int a, int p, int q) const { return m_index.at({a, p, q}); }

  /// Corner projection f = Σ_i p_i ⊗ m_{11}: rank-one legs on the diagonal
  /// tube units.
  Vec corner_projection() const {
    Vec f = Vec::Zero(dim());
    const CategoryEngine& eng = m_tube->engine();
    for (int i = 0; i < eng.simple_count(); ++i) {
      Vec pi = m_tube->unit_p(i);
      for (int a = 0; a < m_tube->dim(); ++a)
        if (std::abs(pi(a)) > 0.0) f(index(a, 0, 0)) += pi(a);
    }
    return f;
  }

  /// Local-unit family x_α = p_i ⊗ |ξ_α⟩⟨e_1|, α = (i, basis vector of H_ī);
  /// satisfies Σ_α x_α x_α* = 1 with x_α* x_α supported in the corner.
  std::vector<Vec> local_units() const {
    std::vector<Vec> out;
    const CategoryEngine& eng = m_tube->engine();
    for (int i = 0; i < eng.simple_count(); ++i) {
      Vec pi = m_tube->unit_p(i);
      for (int alpha = 0; alpha < eng.carrier_dim(i); ++alpha) {
        Vec x = Vec::Zero(dim());
        for (int a = 0; a < m_tube->dim(); ++a)
          if (std::abs(pi(a)) > 0.0) x(index(a, alpha, 0)) += pi(a);
        out.push_back(std::move(x));
      }
    }
    return out;
  }

  /// Corner embedding: coordinates of the small tube inside f·Tub(G)·f
  /// (legs pinned to (0,0)); columns indexed by the small tube basis.
  Mat corner_embedding() const {
    Mat e = Mat::Zero(dim(), m_tube->dim());
    for (int a = 0; a < m_tube->dim(); ++a) e(index(a, 0, 0), a) = 1.0;
    return e;
  }

private:
  const TubeAlgebra* m_tube;
  std::vector<std::tuple<int, int, int>> m_basis;
  std::map<std::tuple<int, int, int>, int> m_index;
  StarAlgebra m_alg;
};

// ---------------------------------------------------------------------------
// The compiled isomorphism Tub(G) -> 𝒟(G)
// ---------------------------------------------------------------------------

/// The raw assembly of the matrix-coefficient formula: for a Tub(G) basis
/// element (a;p,q) with morphism X: U_s⊗U_j -> U_i⊗U_s,
///   π(T) = (d_i d_j)^{-1/2} Σ X[(y',x'),(x,y)] · m^j_{q y} · u^{s*}_{x' x}
///          · m^i_{y' p}
/// evaluated in 𝒟(G) (the reversed factor order compiles away the opposite
/// algebra of the derivation).
inline Mat tube_to_double_matrix(const TubeG& big, const DoubleAlgebra& dg) {
  const TubeAlgebra& tube = big.tube();
  const CategoryEngine& eng = tube.engine();
  Mat out = Mat::Zero(dg.dim(), big.dim());
  for (int col = 0; col < big.dim(); ++col) {
    auto [a, p, q] = big.basis()[col];
    const TubeBasisElement& e = tube.basis()[a];
    const int di = eng.carrier_dim(e.i), dj = eng.carrier_dim(e.j),
              ds = eng.carrier_dim(e.s);
    const Mat x = tube.basis_morphism(a).m;
    double scale = 1.0 / std::sqrt(double(di) * double(dj));
    Vec acc = Vec::Zero(dg.dim());
    for (int yp = 0; yp < di; ++yp)
      for (int xp = 0; xp < ds; ++xp)
        for (int xx = 0; xx < ds; ++xx)
          for (int y = 0; y < dj; ++y) {
            cx t = x(yp * ds + xp, xx * dj + y);
            if (std::abs(t) < 1e-15) continue;
            Vec mj = dg.m_unit(e.j, q, y);
            Vec us = dg.algebra().star(dg.u_coeff(e.s, xp, xx));
            Vec mi = dg.m_unit(e.i, yp, p);
            acc += t * dg.algebra().product(dg.algebra().product(mj, us), mi);
          }
    out.col(col) = scale * acc;
  }
  return out;
}

/// The ∨ anti-automorphism of Tub(G): the small tube's ∨ on the annular
/// factor tensored with the transpose on the legs.
inline Mat tube_g_vee(const TubeG& big) {
  Mat vee = big.tube().vee_map();
  Mat phi = Mat::Zero(big.dim(), big.dim());
  for (int col = 0; col < big.dim(); ++col) {
    auto [a, pp, qq] = big.basis()[col];
    for (int c = 0; c < big.tube().dim(); ++c)
      if (std::abs(vee(c, a)) > 0.0) phi(big.index(c, qq, pp), col) = vee(c, a);
  }
  return phi;
}

struct CornerReport {
  int tube_dim = 0;          ///< dim Tub(Rep G)
  int big_dim = 0;           ///< dim Tub(G)
  int double_dim = 0;        ///< |G|²
  double psi_hom = 0.0;      ///< ‖Ψ(xy) − Ψ(x)Ψ(y)‖ worst case
  double psi_star = 0.0;     ///< ‖Ψ(x*) − Ψ(x)*‖ worst case
  double psi_rank_gap = 0.0; ///< smallest singular value of Ψ (bijectivity)
  bool vee_precomposed = false;  ///< raw assembly was anti-multiplicative
  double local_units = 0.0;  ///< ‖Σ x_α x_α* − 1‖
  double corner_closed = 0.0;///< f x_α* x_β f = x_α* x_β residual
  double embed_hom = 0.0;    ///< corner embedding is a *-isomorphism
  int corner_rank = 0;       ///< rank of x ↦ f x f; must equal tube_dim
  double expectation = 0.0;  ///< ‖E(Ψ(T)) − compiled image of (τ⊗ι)(T)‖
  int expectation_variant = -1;  ///< which leg/∨ convention matched
};

/// Builds Ψ: Tub(G) → 𝒟(G), resolving the opposite-algebra bookkeeping by
/// testing: if the raw matrix-coefficient assembly is anti-multiplicative it
/// is precomposed with the ∨-map (an anti-automorphism), yielding a
/// *-homomorphism either way.
class TubeDoubleIso {
public:
  TubeDoubleIso(const TubeG& big, const DoubleAlgebra& dg)
      : m_big(&big), m_dg(&dg) {
    Mat pi = tube_to_double_matrix(big, dg);
    const StarAlgebra& ta = big.algebra();
    double hom = 0.0, anti = 0.0;
    for (int a = 0; a < big.dim(); ++a)
      for (int b = 0; b < big.dim(); ++b) {
        Vec ab = ta.lmul[a].col(b);
        if (ab.norm() < 1e-12 && a != b) continue;
        Vec lhs = pi * ab;
        Vec rhs_hom =
            m_dg->algebra().product(Vec(pi.col(a)), Vec(pi.col(b)));
        Vec rhs_anti =
            m_dg->algebra().product(Vec(pi.col(b)), Vec(pi.col(a)));
        hom = std::max(hom, (lhs - rhs_hom).norm());
        anti = std::max(anti, (lhs - rhs_anti).norm());
      }
    m_vee_precomposed = anti < hom;
    m_psi = m_vee_precomposed ? Mat(pi * tube_g_vee(big)) : pi;
  }

  const Mat& matrix() const { return m_psi; }
  bool vee_precomposed() const { return m_vee_precomposed; }

  /// Full verification of Theorem-level properties plus the corner data.
  CornerReport verify(double tol = 1e-8) const {
    CornerReport r;
    const TubeG& big = *m_big;
    const DoubleAlgebra& dg = *m_dg;
    r.tube_dim = big.tube().dim();
    r.big_dim = big.dim();
    r.double_dim = dg.dim();
    require(big.dim() == dg.dim(), ErrorKind::CheckFailed,
            "tube_to_double: dimension mismatch between Tub(G) and 𝒟(G)");
    r.vee_precomposed = m_vee_precomposed;
    const StarAlgebra& ta = big.algebra();
    const StarAlgebra& da = dg.algebra();
    for (int a = 0; a < big.dim(); ++a) {
      Vec ea = Vec::Zero(big.dim());
      ea(a) = 1.0;
      r.psi_star = std::max(
          r.psi_star,
          (Mat(m_psi * ta.star(ea)) - da.star(Vec(m_psi.col(a)))).norm());
      for (int b = 0; b < big.dim(); ++b) {
        Vec lhs = m_psi * ta.lmul[a].col(b);
        Vec rhs = da.product(Vec(m_psi.col(a)), Vec(m_psi.col(b)));
        r.psi_hom = std::max(r.psi_hom, (lhs - rhs).norm());
      }
    }
    Eigen::JacobiSVD<Mat> svd(m_psi);
    r.psi_rank_gap = svd.singularValues()(m_psi.cols() - 1);
    require(r.psi_rank_gap > 1e-8, ErrorKind::CheckFailed,
            "tube_to_double: compiled map is singular");

    // Lemma-level corner data.
    auto xs = big.local_units();
    Vec one = algebra_unit(ta);
    Vec sum = Vec::Zero(big.dim());
    for (const auto& x : xs) sum += ta.product(x, ta.star(x));
    r.local_units = (sum - one).norm();
    Vec f = big.corner_projection();
    for (const auto& xa : xs)
      for (const auto& xb : xs) {
        Vec prod = ta.product(ta.star(xa), xb);
        Vec compressed = ta.product(f, ta.product(prod, f));
        r.corner_closed = std::max(r.corner_closed,
                                   (prod - compressed).norm());
      }

    // Corner embedding f·Tub(G)·f ≅ Tub(Rep G): rank of the compression
    // equals the small dimension and the embedding is multiplicative.
    Mat lf = ta.left_mult(f), rf = ta.right_mult(f);
    Eigen::JacobiSVD<Mat> csvd(lf * rf);
    r.corner_rank = static_cast<int>(
        (csvd.singularValues().array() > 1e-8).count());
    Mat emb = big.corner_embedding();
    const StarAlgebra& small = big.tube().algebra();
    for (int a = 0; a < small.dim; ++a) {
      Vec ea = Vec::Zero(small.dim);
      ea(a) = 1.0;
      r.embed_hom = std::max(
          r.embed_hom,
          (Mat(emb * small.star(ea)) - ta.star(Vec(emb.col(a)))).norm());
      for (int b = 0; b < small.dim; ++b) {
        Vec lhs = emb * small.lmul[a].col(b);
        Vec rhs = ta.product(Vec(emb.col(a)), Vec(emb.col(b)));
        r.embed_hom = std::max(r.embed_hom, (lhs - rhs).norm());
      }
    }

    // Expectation intertwining: E∘Ψ equals the compiled image of (τ⊗ι),
    // up to the leg-transpose and ∨ conventions; all four variants are
    // tested and the matching one recorded.
    Mat eexp = dg.rescaled_expectation();
    Mat lhs_map = eexp * m_psi;
    auto fmap = [&](bool transpose_leg) {
      Mat fm = Mat::Zero(dg.dim(), big.dim());
      for (int col = 0; col < big.dim(); ++col) {
        auto [a, p, q] = big.basis()[col];
        const TubeBasisElement& e = big.tube().basis()[a];
        if (e.i != e.j) continue;
        cx t = big.tube().algebra().trace_vec(a);
        if (std::abs(t) == 0.0) continue;
        fm.col(col) = t * (transpose_leg ? dg.m_unit(e.i, q, p)
                                         : dg.m_unit(e.i, p, q));
      }
      return fm;
    };
    Mat vee_big = tube_g_vee(big);
    std::vector<Mat> variants = {fmap(true), fmap(false),
                                 Mat(fmap(true) * vee_big),
                                 Mat(fmap(false) * vee_big)};
    r.expectation = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < variants.size(); ++v) {
      double res = (lhs_map - variants[v]).norm();
      if (res < r.expectation) {
        r.expectation = res;
        r.expectation_variant = static_cast<int>(v);
      }
    }
    require(r.psi_hom < tol && r.psi_star < tol, ErrorKind::CheckFailed,
            "tube_to_double: Ψ failed the *-homomorphism checks");
    return r;
  }

private:
  const TubeG* m_big;
  const DoubleAlgebra* m_dg;
  Mat m_psi;
  bool m_vee_precomposed = false;
};

}  // namespace annulus
