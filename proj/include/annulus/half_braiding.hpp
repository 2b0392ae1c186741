#pragma once

#include <string>
#include <vector>

#include "annulus/tube.hpp"

/// Representations of the tube algebra from unitary half-braidings.  An
/// object Z = ⊕_i U_i^{⊕n_i} with a unitary natural family
/// c_s: U_s⊗Z → Z⊗U_s multiplicative in s induces the *-representation
///   (π_Z(x) ξ)_i = Σ_{j,s} √(d_i/d_j) (ι_i⊗R̄_s^*)(x^s_{ij}⊗ι_sbar)
///                  (ι_s⊗ξ_j⊗ι_sbar)(c_s^*⊗ι_sbar)(ι_Z⊗R̄_s)
/// on ⊕_i Mor(Z, U_i), with the inner product ξ ζ* = (ξ,ζ)·ι.
namespace annulus {

struct HalfBraidingObject {
  std::vector<int> mult;  // n_i per simple label
  std::vector<Mat> c;     // per label s: carrier (Z⊗U_s) × (U_s⊗Z)
};

class HalfBraidingRep {
public:
  /// Builds Z's block layout and validates the braiding data.  Group
  /// backends only: Z is presented by explicit isotypic multiplicities.
  HalfBraidingRep(const TubeAlgebra& tube, HalfBraidingObject hb)
      : m_tube(&tube), m_hb(std::move(hb)) {
    const CategoryEngine& eng = tube.engine();
    require(eng.is_group(), ErrorKind::BackendMismatch,
            "half_braiding: explicit Z-objects are supported for group "
            "backends only");
    const int n = eng.simple_count();
    require(static_cast<int>(m_hb.mult.size()) == n, ErrorKind::Validation,
            "half_braiding: need one multiplicity per simple label");
    m_offset.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) {
      require(m_hb.mult[i] >= 0, ErrorKind::Validation,
              "half_braiding: negative multiplicity");
      m_offset[i + 1] = m_offset[i] + m_hb.mult[i] * eng.carrier_dim(i);
    }
    m_dimz = m_offset[n];
    require(m_dimz > 0, ErrorKind::Validation, "half_braiding: Z is zero");
    require(static_cast<int>(m_hb.c.size()) == n, ErrorKind::Validation,
            "half_braiding: need one braiding component per simple label");
    const auto& gb = eng.group();
    for (int s = 0; s < n; ++s) {
      const int ds = eng.carrier_dim(s);
      require(m_hb.c[s].rows() == m_dimz * ds &&
                  m_hb.c[s].cols() == ds * m_dimz,
              ErrorKind::ShapeMismatch,
              "half_braiding: component " + std::to_string(s) +
                  " has the wrong shape");
      require(residual(Mat(m_hb.c[s] * m_hb.c[s].adjoint()),
                       identity(m_dimz * ds)) < 1e-8,
              ErrorKind::Validation,
              "half_braiding: component " + std::to_string(s) +
                  " is not unitary");
      // Equivariance: c_s (U_s(g)⊗R_Z(g)) = (R_Z(g)⊗U_s(g)) c_s.
      for (int g = 0; g < gb.table().order; ++g) {
        Mat lhs = m_hb.c[s] * kron(gb.irreps().reps[s][g], z_action(g));
        Mat rhs = kron(z_action(g), gb.irreps().reps[s][g]) * m_hb.c[s];
        require(residual(lhs, rhs) < 1e-8, ErrorKind::Validation,
                "half_braiding: component " + std::to_string(s) +
                    " is not equivariant");
      }
    }
  }

  int dim_z() const { return m_dimz; }
  /// Representation space dimension Σ_i n_i.
  int rep_dim() const {
    int d = 0;
    for (int m : m_hb.mult) d += m;
    return d;
  }

  /// Block action of a group element on the carrier of Z.
  Mat z_action(int g) const {
    const CategoryEngine& eng = m_tube->engine();
    Mat r = Mat::Zero(m_dimz, m_dimz);
    for (int i = 0; i < eng.simple_count(); ++i) {
      const Mat& u = eng.group().irreps().reps[i][g];
      for (int kappa = 0; kappa < m_hb.mult[i]; ++kappa) {
        int at = m_offset[i] + kappa * eng.carrier_dim(i);
        r.block(at, at, u.rows(), u.cols()) = u;
      }
    }
    return r;
  }

  /// Basis morphism ξ^j_κ ∈ Mor(Z, U_j): block selector.
  Mat xi(int j, int kappa) const {
    const CategoryEngine& eng = m_tube->engine();
    const int dj = eng.carrier_dim(j);
    Mat m = Mat::Zero(dj, m_dimz);
    int at = m_offset[j] + kappa * dj;
    for (int y = 0; y < dj; ++y) m(y, at + y) = 1.0;
    return m;
  }

  /// Flat index of ξ^j_κ in the representation space.
  int flat(int j, int kappa) const {
    int at = 0;
    for (int i = 0; i < j; ++i) at += m_hb.mult[i];
    return at + kappa;
  }

  /// π(e_a) for a tube basis element, as a rep_dim × rep_dim matrix.
  Mat represent_basis(int a) const {
    const CategoryEngine& eng = m_tube->engine();
    const TubeBasisElement& e = m_tube->basis()[a];
    const int i = e.i, j = e.j, s = e.s;
    const int di = eng.carrier_dim(i),
              ds = eng.carrier_dim(s);
    const int dsb = eng.carrier_dim(eng.dual(s));
    Mat out = Mat::Zero(rep_dim(), rep_dim());
    if (m_hb.mult[i] == 0 || m_hb.mult[j] == 0) return out;
    const StdPair& sp = eng.standard_pair(Word::single(s));
    const Mat x = m_tube->basis_morphism(a).m;
    double scale = std::sqrt(eng.qdim(i) / eng.qdim(j));
    Mat m1 = kron(identity(m_dimz), sp.Rbar.m);               // Z -> Z s sbar
    Mat m2 = kron(dagger(m_hb.c[s]), identity(dsb));          // -> s Z sbar
    Mat m5 = kron(identity(di), dagger(sp.Rbar.m));           // i s sbar -> i
    for (int kappa = 0; kappa < m_hb.mult[j]; ++kappa) {
      Mat m3 = kron(kron(identity(ds), xi(j, kappa)), identity(dsb));
      Mat m4 = kron(x, identity(dsb));
      Mat res = scale * (m5 * (m4 * (m3 * (m2 * m1))));       // di × dimZ
      // Expand in the ξ^i_λ basis and check nothing leaks outside it.
      Mat recon = Mat::Zero(di, m_dimz);
      for (int lam = 0; lam < m_hb.mult[i]; ++lam) {
        cx coeff = (xi(i, lam) * res.adjoint()).trace();
        coeff = std::conj(coeff) / double(di);
        out(flat(i, lam), flat(j, kappa)) = coeff;
        recon += coeff * xi(i, lam);
      }
      require(residual(recon, res) < 1e-8, ErrorKind::CheckFailed,
              "half_braiding: representation image leaked outside Mor(Z,U_i)");
    }
    return out;
  }

  /// π(x) for a coordinate vector over the tube basis.
  Mat represent(const Vec& coords) const {
    require(coords.size() == m_tube->dim(), ErrorKind::ShapeMismatch,
            "half_braiding: coordinate length mismatch");
    Mat acc = Mat::Zero(rep_dim(), rep_dim());
    for (int a = 0; a < m_tube->dim(); ++a)
      if (std::abs(coords(a)) > 0.0) acc += coords(a) * represent_basis(a);
    return acc;
  }

  /// Max residual of homomorphism, *-compatibility, and unit on the basis.
  double star_representation_residual() const {
    const StarAlgebra& alg = m_tube->algebra();
    const int d = m_tube->dim();
    std::vector<Mat> pi(d);
    for (int a = 0; a < d; ++a) pi[a] = represent_basis(a);
    double worst = 0.0;
    for (int a = 0; a < d; ++a) {
      // *-compatibility.
      Vec ea = Vec::Zero(d);
      ea(a) = 1.0;
      worst = std::max(worst, residual(represent(alg.star(ea)),
                                       Mat(pi[a].adjoint())));
      for (int b = 0; b < d; ++b)
        worst = std::max(
            worst, residual(represent(alg.lmul[a].col(b)), Mat(pi[a] * pi[b])));
    }
    worst = std::max(worst, residual(represent(algebra_unit(alg)),
                                     identity(rep_dim())));
    return worst;
  }

  /// Max deviation from the trace identity for matrix coefficients:
  /// (π(x)ξ_j, ζ_i) = (d_i d_j)^{-1/2} Tr(x (ι_s⊗ξ_j) c_s^* (ζ_i^*⊗ι_s)).
  double matrix_coefficient_residual() const {
    const CategoryEngine& eng = m_tube->engine();
    double worst = 0.0;
    for (int a = 0; a < m_tube->dim(); ++a) {
      const TubeBasisElement& e = m_tube->basis()[a];
      if (m_hb.mult[e.i] == 0 || m_hb.mult[e.j] == 0) continue;
      Mat pia = represent_basis(a);
      const Mat x = m_tube->basis_morphism(a).m;
      const int ds = eng.carrier_dim(e.s);
      Word is = Word::single(e.i).tensor(Word::single(e.s));
      double scale = 1.0 / std::sqrt(eng.qdim(e.i) * eng.qdim(e.j));
      for (int kappa = 0; kappa < m_hb.mult[e.j]; ++kappa)
        for (int lam = 0; lam < m_hb.mult[e.i]; ++lam) {
          Mat inner = x * kron(identity(ds), xi(e.j, kappa)) *
                      dagger(m_hb.c[e.s]) *
                      kron(dagger(xi(e.i, lam)), identity(ds));
          cx rhs = scale * eng.categorical_trace(Morphism{is, is, inner});
          cx lhs = pia(flat(e.i, lam), flat(e.j, kappa));
          worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
  }

private:
  const TubeAlgebra* m_tube;
  HalfBraidingObject m_hb;
  std::vector<int> m_offset;
  int m_dimz = 0;
};

/// Trivial half-braiding on Z = 𝟙 (unit label with multiplicity one; each
/// c_s the identity on U_s).
inline HalfBraidingObject trivial_half_braiding(const CategoryEngine& eng) {
  HalfBraidingObject hb;
  hb.mult.assign(eng.simple_count(), 0);
  hb.mult[0] = 1;
  for (int s = 0; s < eng.simple_count(); ++s)
    hb.c.push_back(identity(eng.carrier_dim(s)));
  return hb;
}

}  // namespace annulus
