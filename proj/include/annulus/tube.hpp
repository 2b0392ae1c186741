#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "annulus/engine.hpp"
#include "annulus/star_algebra.hpp"

/// Tube algebra of a finitely presented category backend: the graded *-algebra
///   Tub = ⊕_{i,j,s} Hom(U_s ⊗ U_j, U_i ⊗ U_s)
/// with the annular product, involution from standard pairs, the positive
/// trace, idempotents p_i, the fusion corner at the unit label, gauge
/// automorphisms, and the dual (vee) anti-automorphism.
namespace annulus {

struct TubeBasisElement {
  int i = 0, j = 0, s = 0;  // component Hom(U_s⊗U_j, U_i⊗U_s)
  int m = 0;                // index into the component's orthonormal hom basis
};

class TubeAlgebra {
public:
  TubeAlgebra(const CategoryEngine& eng) : m_eng(&eng) {}

  const CategoryEngine& engine() const { return *m_eng; }
  int dim() const { return static_cast<int>(m_basis.size()); }
  const std::vector<TubeBasisElement>& basis() const { return m_basis; }
  const StarAlgebra& algebra() const { return m_alg; }

  /// Component key (i, j, s) -> [offset, offset+count) in the global basis.
  const std::map<std::tuple<int, int, int>, std::pair<int, int>>& components()
      const {
    return m_components;
  }

  /// Morphism U_s⊗U_j -> U_i⊗U_s of a basis element.
  Morphism basis_morphism(int a) const {
    const TubeBasisElement& e = m_basis[a];
    Word dom = Word::single(e.s).tensor(Word::single(e.j));
    Word cod = Word::single(e.i).tensor(Word::single(e.s));
    return {dom, cod, m_eng->hom(dom, cod).basis[e.m]};
  }

  /// Coordinates of the idempotent p_i (unit morphism in component (i,i,e)).
  Vec unit_p(int i) const {
    auto it = m_components.find({i, i, 0});
    require(it != m_components.end(), ErrorKind::Validation,
            "tube: no diagonal component for label " + std::to_string(i));
    Vec x = Vec::Zero(dim());
    // Component (i,i,e): Hom(e⊗i, i⊗e) = End(U_i); the identity expands in
    // the stored orthonormal basis.
    Word dom = Word::single(0).tensor(Word::single(i));
    Word cod = Word::single(i).tensor(Word::single(0));
    const HomBasis& hb = m_eng->hom(dom, cod);
    Morphism idm{dom, cod, identity(m_eng->carrier_dim(i))};
    auto [coef, res] = m_eng->expand(idm);
    require(res < kExactTol, ErrorKind::CheckFailed,
            "tube: identity not in diagonal hom component");
    for (int m = 0; m < hb.dim(); ++m) x(it->second.first + m) = coef(m);
    return x;
  }

  /// All p_i stacked; their sum is the unit of the algebra.
  std::vector<Vec> units() const {
    std::vector<Vec> out;
    for (int i = 0; i < m_eng->simple_count(); ++i) out.push_back(unit_p(i));
    return out;
  }

  /// Gauge automorphism γ_z acting as z_i · conj(z_j) on component (i,j,s).
  Mat gauge(const Vec& z) const {
    require(z.size() == m_eng->simple_count(), ErrorKind::Validation,
            "gauge: need one phase per simple label");
    for (Eigen::Index i = 0; i < z.size(); ++i)
      require(std::abs(std::abs(z(i)) - 1.0) < 1e-9, ErrorKind::Validation,
              "gauge: phase " + std::to_string(i) + " is not unimodular");
    Mat g = Mat::Zero(dim(), dim());
    for (int a = 0; a < dim(); ++a)
      g(a, a) = z(m_basis[a].i) * std::conj(z(m_basis[a].j));
    return g;
  }

  /// Linear anti-automorphism x -> x^vee: component (i,j,s) basis morphisms
  /// map into component (jbar, ibar, sbar) by the engine's vee.
  Mat vee_map() const {
    Mat v = Mat::Zero(dim(), dim());
    for (int a = 0; a < dim(); ++a) {
      const TubeBasisElement& e = m_basis[a];
      Morphism t = basis_morphism(a);
      Morphism tv = m_eng->vee(t);
      int ib = m_eng->dual(e.i), jb = m_eng->dual(e.j), sb = m_eng->dual(e.s);
      auto it = m_components.find({jb, ib, sb});
      require(it != m_components.end(), ErrorKind::CheckFailed,
              "vee: target component missing");
      auto [coef, res] = m_eng->expand(tv);
      require(res < 1e-8, ErrorKind::CheckFailed,
              "vee: image not equivariant");
      for (int m = 0; m < coef.size(); ++m)
        v(it->second.first + m, a) = coef(m);
    }
    return v;
  }

  /// Recover the gauge vector z with vee∘vee = γ_z.  Returns (z, residual);
  /// undetermined phases (labels in trivial components only) default to 1.
  std::pair<Vec, double> vee_square_gauge() const {
    Mat vv = vee_map();
    Mat w = vv * vv;
    // Extract the scalar c_{ij} on each nonempty component.
    std::map<std::pair<int, int>, cx> cval;
    double worst = 0.0;
    for (const auto& [key, range] : m_components) {
      auto [i, j, s] = key;
      (void)s;
      auto span = range;
      cx c = 0.0;
      for (int m = 0; m < span.second; ++m)
        c += w(span.first + m, span.first + m);
      c /= double(span.second);
      auto it = cval.find({i, j});
      if (it == cval.end())
        cval[{i, j}] = c;
      else
        worst = std::max(worst, std::abs(it->second - c));
    }
    // Off-component leakage residual.
    Mat expected = Mat::Zero(dim(), dim());
    for (int a = 0; a < dim(); ++a)
      expected(a, a) = cval[{m_basis[a].i, m_basis[a].j}];
    worst = std::max(worst, residual(w, expected));
    // Fit phases over the component graph: spanning-tree propagation from
    // label 0 with z_0 = 1, then global consistency residual.
    int n = m_eng->simple_count();
    Vec z = Vec::Ones(n);
    std::vector<bool> fixed(n, false);
    fixed[0] = true;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [pr, c] : cval) {
        auto [i, j] = pr;
        cx cc = c / std::abs(c);
        if (fixed[j] && !fixed[i]) {
          z(i) = cc * z(j);
          fixed[i] = true;
          changed = true;
        } else if (fixed[i] && !fixed[j]) {
          z(j) = std::conj(cc) * z(i);
          fixed[j] = true;
          changed = true;
        }
      }
    }
    for (const auto& [pr, c] : cval) {
      auto [i, j] = pr;
      worst = std::max(worst, std::abs(z(i) * std::conj(z(j)) - c));
    }
    return {z, worst};
  }

  /// τ(x) = Σ_i Tr_i(x^e_{ii}).
  cx trace(const Vec& x) const { return m_alg.tau(x); }

private:
  friend TubeAlgebra build_tube(const CategoryEngine& eng);
  const CategoryEngine* m_eng;
  std::vector<TubeBasisElement> m_basis;
  std::map<std::tuple<int, int, int>, std::pair<int, int>> m_components;
  StarAlgebra m_alg;
};

/// Builds the full tube algebra table over all simple labels.  Refuses
/// backends with infinitely many simples (use the annular corner ops there).
inline TubeAlgebra build_tube(const CategoryEngine& eng) {
  require(eng.finite(), ErrorKind::TruncationEscape,
          "build_tube: backend has infinitely many simple labels; "
          "use windowed annular corners instead");
  TubeAlgebra tube(eng);
  const int n = eng.simple_count();

  // Enumerate components (i,j,s) with nonzero hom spaces.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int s = 0; s < n; ++s) {
        Word dom = Word::single(s).tensor(Word::single(j));
        Word cod = Word::single(i).tensor(Word::single(s));
        int d = eng.hom(dom, cod).dim();
        require(d == hom_dim_oracle(eng, s, j, i, s), ErrorKind::CheckFailed,
                "build_tube: solver hom dimension disagrees with the fusion "
                "oracle at component (" + std::to_string(i) + "," +
                    std::to_string(j) + "," + std::to_string(s) + ")");
        if (d == 0) continue;
        tube.m_components[{i, j, s}] = {static_cast<int>(tube.m_basis.size()),
                                        d};
        for (int m = 0; m < d; ++m) tube.m_basis.push_back({i, j, s, m});
      }

  const int D = tube.dim();
  StarAlgebra& alg = tube.m_alg;
  alg.dim = D;
  alg.lmul.assign(D, Mat::Zero(D, D));

  // Annular product: for x in (i,k,r) and y in (k,j,t),
  //   (xy)^s_{ij} = Σ_{w ∈ onb Hom(U_s, U_r⊗U_t)}
  //                 (ι_i⊗w*)(x⊗ι_t)(ι_r⊗y)(w⊗ι_j).
  for (int a = 0; a < D; ++a) {
    const TubeBasisElement& ea = tube.m_basis[a];
    Morphism x = tube.basis_morphism(a);
    for (int b = 0; b < D; ++b) {
      const TubeBasisElement& eb = tube.m_basis[b];
      if (ea.j != eb.i) continue;
      Morphism y = tube.basis_morphism(b);
      const int i = ea.i, j = eb.j, r = ea.s, t = eb.s;
      for (int s = 0; s < n; ++s) {
        auto it = tube.m_components.find({i, j, s});
        if (it == tube.m_components.end()) continue;
        const HomBasis& ws = eng.hom(Word::single(s),
                                     Word::single(r).tensor(Word::single(t)));
        if (ws.dim() == 0) continue;
        Word dom = Word::single(s).tensor(Word::single(j));
        Word cod = Word::single(i).tensor(Word::single(s));
        Mat acc = Mat::Zero(eng.carrier_dim(cod), eng.carrier_dim(dom));
        for (int wi = 0; wi < ws.dim(); ++wi) {
          Morphism w{ws.dom, ws.cod, ws.basis[wi]};
          Morphism step1 = eng.tensor(w, eng.id(Word::single(j)));
          Morphism step2 = eng.tensor(eng.id(Word::single(r)), y);
          Morphism step3 = eng.tensor(x, eng.id(Word::single(t)));
          Morphism step4 = eng.tensor(eng.id(Word::single(i)), eng.adjoint(w));
          acc += (step4.m * step3.m * step2.m * step1.m);
        }
        Morphism prod{dom, cod, acc};
        auto [coef, res] = eng.expand(prod);
        require(res < 1e-8, ErrorKind::CheckFailed,
                "build_tube: product fell outside the component basis");
        for (int m = 0; m < coef.size(); ++m)
          alg.lmul[a](it->second.first + m, b) = coef(m);
      }
    }
  }

  // Involution: for basis a in component (i,j,s) the adjoint lands in
  // (j,i,sbar):
  //   x* = (Rbar_sbar^* ⊗ ι_j ⊗ ι_sbar)(ι_sbar ⊗ x^† ⊗ ι_sbar)
  //        (ι_sbar ⊗ ι_i ⊗ R_sbar).
  alg.invol = Mat::Zero(D, D);
  for (int a = 0; a < D; ++a) {
    const TubeBasisElement& ea = tube.m_basis[a];
    int sb = eng.dual(ea.s);
    Word wsb = Word::single(sb);
    const StdPair& sp = eng.standard_pair(wsb);
    Morphism xd = eng.adjoint(tube.basis_morphism(a));  // i⊗s -> s⊗j
    Morphism step1 =
        eng.tensor(eng.tensor(eng.id(wsb), eng.id(Word::single(ea.i))), sp.R);
    Morphism step2 = eng.tensor(eng.tensor(eng.id(wsb), xd), eng.id(wsb));
    Morphism step3 = eng.tensor(
        eng.tensor(eng.adjoint(sp.Rbar), eng.id(Word::single(ea.j))),
        eng.id(wsb));
    Morphism star = eng.compose(step3, eng.compose(step2, step1));
    auto it = tube.m_components.find({ea.j, ea.i, sb});
    require(it != tube.m_components.end(), ErrorKind::CheckFailed,
            "build_tube: involution target component missing");
    auto [coef, res] = eng.expand(star);
    require(res < 1e-8, ErrorKind::CheckFailed,
            "build_tube: involution image not equivariant");
    // Column a holds the coordinates of e_a^*; the antilinearity lives in
    // StarAlgebra::star, which applies invol to the conjugated input.
    for (int m = 0; m < coef.size(); ++m)
      alg.invol(it->second.first + m, a) = coef(m);
  }

  // Trace vector: τ(e_a) = Tr_i(component) for diagonal unit-label elements.
  alg.trace_vec = Vec::Zero(D);
  for (int a = 0; a < D; ++a) {
    const TubeBasisElement& ea = tube.m_basis[a];
    if (ea.s != 0 || ea.i != ea.j) continue;
    Morphism t = tube.basis_morphism(a);
    Morphism endo{Word::single(ea.i), Word::single(ea.i), t.m};
    alg.trace_vec(a) = eng.categorical_trace(endo);
  }
  return tube;
}

/// Fusion corner p_e·Tub·p_e: structure constants on classes [U_s] must equal
/// the fusion multiplicities N_{rt}^s.
/// Returned as a StarAlgebra on one generator per simple label.
inline StarAlgebra fusion_corner(const TubeAlgebra& tube) {
  const CategoryEngine& eng = tube.engine();
  const int n = eng.simple_count();
  // Map label s to the single basis element of component (e,e,s).
  std::vector<int> pos(n, -1);
  for (int s = 0; s < n; ++s) {
    auto it = tube.components().find({0, 0, s});
    require(it != tube.components().end() && it->second.second == 1,
            ErrorKind::CheckFailed,
            "fusion_corner: component (e,e,s) is not one-dimensional");
    pos[s] = it->second.first;
  }
  StarAlgebra corner;
  corner.dim = n;
  corner.lmul.assign(n, Mat::Zero(n, n));
  for (int r = 0; r < n; ++r)
    for (int t = 0; t < n; ++t) {
      Vec prod = tube.algebra().lmul[pos[r]].col(pos[t]);
      for (int s = 0; s < n; ++s) {
        cx c = prod(pos[s]);
        prod(pos[s]) = 0.0;
        corner.lmul[r](s, t) = c;
      }
      require(prod.norm() < 1e-9, ErrorKind::CheckFailed,
              "fusion_corner: corner product escaped the corner");
    }
  corner.invol = Mat::Zero(n, n);
  for (int s = 0; s < n; ++s) corner.invol(eng.dual(s), s) = 1.0;
  corner.trace_vec = Vec::Zero(n);
  corner.trace_vec(0) = 1.0;
  return corner;
}

/// Worst deviation of the fusion-corner structure constants from the
/// character/Clebsch-Gordan oracle.
inline double fusion_corner_oracle_residual(const TubeAlgebra& tube) {
  const CategoryEngine& eng = tube.engine();
  StarAlgebra corner = fusion_corner(tube);
  double worst = 0.0;
  for (int r = 0; r < corner.dim; ++r)
    for (int t = 0; t < corner.dim; ++t)
      for (int s = 0; s < corner.dim; ++s)
        worst = std::max(worst,
                         std::abs(corner.lmul[r](s, t) -
                                  cx(double(fusion_oracle(eng, r, t, s)), 0)));
  return worst;
}

/// Independent dimension oracle: dim Tub = Σ_{i,j,s} Σ_k N_{sj}^k N_{is}^k.
inline int tube_dim_oracle(const CategoryEngine& eng) {
  int total = 0;
  const int n = eng.simple_count();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int s = 0; s < n; ++s) total += hom_dim_oracle(eng, s, j, i, s);
  return total;
}

}  // namespace annulus
