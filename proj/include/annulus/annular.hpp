#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "annulus/engine.hpp"

/// Windowed annular corners p_k·Tub·p_l for backends with infinitely many
/// simple labels (spin-truncated SU_q(2) / Temperley–Lieb).  Elements are
/// supported on a finite window of internal labels; products of two
/// window-supported elements are computed exactly — their internal support
/// grows into the fusion closure of the window, which must stay inside the
/// backend's label range or a truncation-escape error is raised.
namespace annulus {

struct AnnularElement {
  int s = 0;  // internal label: component Hom(U_s⊗U_l, U_k⊗U_s)
  int m = 0;  // index into the component's hom basis
};

/// Coefficient vector of a corner element, keyed by internal label.
struct AnnularVector {
  int k = 0, l = 0;
  std::map<int, Vec> comp;  // s -> coefficients in hom(s⊗l, k⊗s) basis

  double norm() const {
    double acc = 0.0;
    for (const auto& [s, v] : comp) acc += v.squaredNorm();
    return std::sqrt(acc);
  }
};

inline AnnularVector annular_sub(const AnnularVector& a,
                                 const AnnularVector& b) {
  require(a.k == b.k && a.l == b.l, ErrorKind::ShapeMismatch,
          "annular_sub: mismatched corner grading");
  AnnularVector out{a.k, a.l, a.comp};
  for (const auto& [s, v] : b.comp) {
    auto it = out.comp.find(s);
    if (it == out.comp.end())
      out.comp[s] = -v;
    else
      it->second -= v;
  }
  return out;
}

class AnnularCorner {
public:
  AnnularCorner(const CategoryEngine& eng, std::vector<int> window, int k,
                int l)
      : m_eng(&eng), m_window(std::move(window)), m_k(k), m_l(l) {
    std::sort(m_window.begin(), m_window.end());
    m_window.erase(std::unique(m_window.begin(), m_window.end()),
                   m_window.end());
    const int n = eng.simple_count();
    require(k >= 0 && k < n && l >= 0 && l < n, ErrorKind::Validation,
            "annular_corner: corner label out of backend range");
    for (int s : m_window)
      require(s >= 0 && s < n, ErrorKind::TruncationEscape,
              "annular_corner: window label " + std::to_string(s) +
                  " exceeds the backend truncation");
    for (int s : m_window) {
      Word dom = Word::single(s).tensor(Word::single(l));
      Word cod = Word::single(k).tensor(Word::single(s));
      int d = eng.hom(dom, cod).dim();
      require(d == hom_dim_oracle(eng, s, l, k, s), ErrorKind::CheckFailed,
              "annular_corner: hom dimension disagrees with the fusion-path "
              "oracle at internal label " + std::to_string(s));
      if (d == 0) continue;
      m_components[s] = {static_cast<int>(m_basis.size()), d};
      for (int m = 0; m < d; ++m) m_basis.push_back({s, m});
    }
  }

  const CategoryEngine& engine() const { return *m_eng; }
  int corner_k() const { return m_k; }
  int corner_l() const { return m_l; }
  const std::vector<int>& window() const { return m_window; }
  int dim() const { return static_cast<int>(m_basis.size()); }
  const std::vector<AnnularElement>& basis() const { return m_basis; }

  Morphism basis_morphism(int a) const {
    const AnnularElement& e = m_basis[a];
    Word dom = Word::single(e.s).tensor(Word::single(m_l));
    Word cod = Word::single(m_k).tensor(Word::single(e.s));
    return {dom, cod, m_eng->hom(dom, cod).basis[e.m]};
  }

  AnnularVector basis_vector(int a) const {
    AnnularVector v{m_k, m_l, {}};
    const AnnularElement& e = m_basis[a];
    Word dom = Word::single(e.s).tensor(Word::single(m_l));
    Word cod = Word::single(m_k).tensor(Word::single(e.s));
    Vec c = Vec::Zero(m_eng->hom(dom, cod).dim());
    c(e.m) = 1.0;
    v.comp[e.s] = c;
    return v;
  }

private:
  const CategoryEngine* m_eng;
  std::vector<int> m_window;
  int m_k, m_l;
  std::vector<AnnularElement> m_basis;
  std::map<int, std::pair<int, int>> m_components;
};

inline AnnularCorner annular_corner(const CategoryEngine& eng,
                                    const std::vector<int>& window, int k,
                                    int l) {
  return AnnularCorner(eng, window, k, l);
}

/// Exact product of corner elements x ∈ p_k·Tub·p_l and y ∈ p_l·Tub·p_j.
/// The result's internal support is the fusion closure of the inputs'.
inline AnnularVector annular_product(const CategoryEngine& eng,
                                     const AnnularVector& x,
                                     const AnnularVector& y) {
  require(x.l == y.k, ErrorKind::ShapeMismatch,
          "annular_product: inner corner labels do not match");
  const int k = x.k, j = y.l;
  AnnularVector out{k, j, {}};
  for (const auto& [r, xc] : x.comp) {
    Word xdom = Word::single(r).tensor(Word::single(x.l));
    Word xcod = Word::single(k).tensor(Word::single(r));
    const HomBasis& xb = eng.hom(xdom, xcod);
    Mat xm = Mat::Zero(eng.carrier_dim(xcod), eng.carrier_dim(xdom));
    for (int m = 0; m < xb.dim(); ++m) xm += xc(m) * xb.basis[m];
    for (const auto& [t, yc] : y.comp) {
      if (r + t >= eng.simple_count() && !eng.finite())
        fail(ErrorKind::TruncationEscape,
             "annular_product: internal labels (" + std::to_string(r) + "," +
                 std::to_string(t) + ") fuse past the backend truncation; "
                 "rebuild the backend with cutoff >= " + std::to_string(r + t));
      Word ydom = Word::single(t).tensor(Word::single(j));
      Word ycod = Word::single(y.k).tensor(Word::single(t));
      const HomBasis& yb = eng.hom(ydom, ycod);
      Mat ym = Mat::Zero(eng.carrier_dim(ycod), eng.carrier_dim(ydom));
      for (int m = 0; m < yb.dim(); ++m) ym += yc(m) * yb.basis[m];
      Morphism xmor{xdom, xcod, xm}, ymor{ydom, ycod, ym};
      for (int s = 0; s < eng.simple_count(); ++s) {
        if (fusion_oracle(eng, r, t, s) == 0) continue;
        const HomBasis& ws =
            eng.hom(Word::single(s), Word::single(r).tensor(Word::single(t)));
        if (ws.dim() == 0) continue;
        Word dom = Word::single(s).tensor(Word::single(j));
        Word cod = Word::single(k).tensor(Word::single(s));
        Mat acc = Mat::Zero(eng.carrier_dim(cod), eng.carrier_dim(dom));
        for (int wi = 0; wi < ws.dim(); ++wi) {
          Morphism w{ws.dom, ws.cod, ws.basis[wi]};
          Morphism step1 = eng.tensor(w, eng.id(Word::single(j)));
          Morphism step2 = eng.tensor(eng.id(Word::single(r)), ymor);
          Morphism step3 = eng.tensor(xmor, eng.id(Word::single(t)));
          Morphism step4 =
              eng.tensor(eng.id(Word::single(k)), eng.adjoint(w));
          acc += step4.m * step3.m * step2.m * step1.m;
        }
        Morphism prod{dom, cod, acc};
        auto [coef, res] = eng.expand(prod);
        require(res < 1e-8, ErrorKind::CheckFailed,
                "annular_product: product escaped the component hom basis");
        if (coef.size() == 0) continue;
        auto it = out.comp.find(s);
        if (it == out.comp.end())
          out.comp[s] = coef;
        else
          it->second += coef;
      }
    }
  }
  // Drop numerically empty components for stable comparisons.
  for (auto it = out.comp.begin(); it != out.comp.end();)
    it = it->second.norm() < 1e-13 ? out.comp.erase(it) : std::next(it);
  return out;
}

/// Max normalized commutator residual over all basis pairs of a diagonal
/// corner; the abelianness certificate for Temperley–Lieb corners.
inline double annular_commutator_residual(const AnnularCorner& corner) {
  require(corner.corner_k() == corner.corner_l(), ErrorKind::Validation,
          "annular_commutator_residual: corner is not diagonal");
  const CategoryEngine& eng = corner.engine();
  double worst = 0.0;
  for (int a = 0; a < corner.dim(); ++a)
    for (int b = a + 1; b < corner.dim(); ++b) {
      AnnularVector xy = annular_product(eng, corner.basis_vector(a),
                                         corner.basis_vector(b));
      AnnularVector yx = annular_product(eng, corner.basis_vector(b),
                                         corner.basis_vector(a));
      double num = annular_sub(xy, yx).norm();
      worst = std::max(worst, num / std::max({1.0, xy.norm(), yx.norm()}));
    }
  return worst;
}

/// Independent corner-dimension oracle: Σ_{s∈window} Σ_u N_{sl}^u N_{ks}^u.
inline int annular_dim_oracle(const CategoryEngine& eng,
                              const std::vector<int>& window, int k, int l) {
  int total = 0;
  for (int s : window) total += hom_dim_oracle(eng, s, l, k, s);
  return total;
}

}  // namespace annulus
