#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "annulus/half_braiding.hpp"
#include "annulus/qsystem.hpp"
#include "annulus/tube.hpp"

/// Tube algebra of the module 2-category of a Q-system: the 2-by-2 graded
/// *-algebra
///   Tub(B) = ⊕_{s,t} ⊕_{i,j,k} Hom(M_k ⊗ Y_j, Y_i ⊗ M_k),
/// with Y_i ∈ Irr(B_ss), Y_j ∈ Irr(B_tt), M_k ∈ Irr(B_st), the annular
/// product and involution written through the unit constraints of the cell
/// calculus.  Its (0,0) corner reproduces the plain tube algebra verbatim;
/// the off-diagonal grades implement the strong Morita equivalence between
/// the diagonal corners, certified by verify_imprimitivity.  build_zreg
/// instantiates the regular half-braiding template over the module cells.
namespace annulus {

struct TwoCatTubeElement {
  int s = 0, t = 0;      // grade
  int i = 0, j = 0;      // positions in irr(s,s) and irr(t,t)
  int k = 0;             // position in irr(s,t)
  int m = 0;             // index into the component hom basis
};

class TwoCatTube {
public:
  explicit TwoCatTube(MoritaContext& ctx) : m_ctx(&ctx) {}

  MoritaContext& context() const { return *m_ctx; }
  int dim() const { return static_cast<int>(m_basis.size()); }
  const std::vector<TwoCatTubeElement>& basis() const { return m_basis; }
  const StarAlgebra& algebra() const { return m_alg; }

  /// Component key (s,t,i,j,k) -> [offset, count) in the global basis.
  const std::map<std::tuple<int, int, int, int, int>,
                 std::pair<int, int>>&
  components() const {
    return m_components;
  }

  /// Global basis range [offset, count) of one grade.
  std::pair<int, int> grade_range(int s, int t) const {
    return m_grade_range[s][t];
  }

  /// Registry ids (dom, cod) of the component carrying basis element a.
  std::pair<int, int> component_cells(int a) const {
    const TwoCatTubeElement& e = m_basis[a];
    int kc = m_ctx->irr(e.s, e.t)[e.k];
    int dom = m_ctx->compose(kc, m_ctx->irr(e.t, e.t)[e.j]);
    int cod = m_ctx->compose(m_ctx->irr(e.s, e.s)[e.i], kc);
    return {dom, cod};
  }

  /// Ambient matrix of a basis element.
  Mat basis_morphism(int a) const {
    auto [dom, cod] = component_cells(a);
    return m_ctx->hom_cells(dom, cod)[m_basis[a].m];
  }

  /// Coordinates of the idempotent carried by the object Y_i of grade s:
  /// the unit constraint zig V† W in component (s,s,i,i,unit).
  Vec unit_p(int s, int i) const {
    int iid = m_ctx->irr(s, s)[i];
    Mat x = dagger(m_ctx->right_unitor(iid)) * m_ctx->left_unitor(iid);
    auto it = m_components.find({s, s, i, i, 0});
    require(it != m_components.end(), ErrorKind::Validation,
            "tube_2cat: missing diagonal component");
    int dom = m_ctx->compose(m_ctx->irr(s, s)[0], iid);
    int cod = m_ctx->compose(iid, m_ctx->irr(s, s)[0]);
    auto [coef, res] = m_ctx->expand_cells(x, dom, cod);
    require(res < kExactTol, ErrorKind::CheckFailed,
            "tube_2cat: unit constraint not in the diagonal component");
    Vec v = Vec::Zero(dim());
    for (int m = 0; m < coef.size(); ++m) v(it->second.first + m) = coef(m);
    return v;
  }

  /// Unit of the algebra: the sum of all object idempotents.
  Vec unit() const {
    Vec u = Vec::Zero(dim());
    for (int s = 0; s < 2; ++s)
      for (std::size_t i = 0; i < m_ctx->irr(s, s).size(); ++i)
        u += unit_p(s, static_cast<int>(i));
    return u;
  }

  /// Diagonal-grade corner Tub(B)^{ss} as a standalone *-algebra.
  StarAlgebra corner(int s) const {
    auto [off, count] = m_grade_range[s][s];
    return slice(off, count);
  }

  /// Fusion corner of grade s: the components (s,s,unit,unit,k), one per
  /// simple of B_ss.
  StarAlgebra fusion_corner(int s) const {
    std::vector<int> pos;
    for (std::size_t k = 0; k < m_ctx->irr(s, s).size(); ++k) {
      auto it = m_components.find({s, s, 0, 0, static_cast<int>(k)});
      require(it != m_components.end() && it->second.second == 1,
              ErrorKind::CheckFailed,
              "tube_2cat: fusion component is not one-dimensional");
      pos.push_back(it->second.first);
    }
    return slice_positions(pos);
  }

private:
  friend TwoCatTube build_tube_2cat(MoritaContext& ctx);

  StarAlgebra slice(int off, int count) const {
    std::vector<int> pos(count);
    for (int a = 0; a < count; ++a) pos[a] = off + a;
    return slice_positions(pos);
  }

  /// Sub-*-algebra on a subset of basis positions; requires closure.
  StarAlgebra slice_positions(const std::vector<int>& pos) const {
    const int n = static_cast<int>(pos.size());
    StarAlgebra out;
    out.dim = n;
    out.lmul.assign(n, Mat::Zero(n, n));
    out.invol = Mat::Zero(n, n);
    out.trace_vec = Vec::Zero(n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        Vec prod = m_alg.lmul[pos[a]].col(pos[b]);
        for (int c = 0; c < n; ++c) {
          out.lmul[a](c, b) = prod(pos[c]);
          prod(pos[c]) = 0.0;
        }
        require(prod.norm() < 1e-9, ErrorKind::CheckFailed,
                "tube_2cat: corner product escaped the corner");
      }
      Vec st = m_alg.invol.col(pos[a]);
      for (int c = 0; c < n; ++c) {
        out.invol(c, a) = st(pos[c]);
        st(pos[c]) = 0.0;
      }
      require(st.norm() < 1e-9, ErrorKind::CheckFailed,
              "tube_2cat: corner involution escaped the corner");
      out.trace_vec(a) = m_alg.trace_vec(pos[a]);
    }
    return out;
  }

  MoritaContext* m_ctx;
  std::vector<TwoCatTubeElement> m_basis;
  std::map<std::tuple<int, int, int, int, int>, std::pair<int, int>>
      m_components;
  std::pair<int, int> m_grade_range[2][2];
  StarAlgebra m_alg;
};

/// Builds the graded tube algebra of the module 2-category.  Grades are laid
/// out in the order (0,0), (0,1), (1,0), (1,1) with lexicographic (i,j,k)
/// inside, so the (0,0) block occupies the leading positions in the same
/// order as build_tube over the plain category.
inline TwoCatTube build_tube_2cat(MoritaContext& ctx) {
  TwoCatTube tube(ctx);

  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t) {
      int off = static_cast<int>(tube.m_basis.size());
      const auto& is = ctx.irr(s, s);
      const auto& js = ctx.irr(t, t);
      const auto& ks = ctx.irr(s, t);
      for (std::size_t i = 0; i < is.size(); ++i)
        for (std::size_t j = 0; j < js.size(); ++j)
          for (std::size_t k = 0; k < ks.size(); ++k) {
            int dom = ctx.compose(ks[k], js[j]);
            int cod = ctx.compose(is[i], ks[k]);
            int d = static_cast<int>(ctx.hom_cells(dom, cod).size());
            if (d == 0) continue;
            tube.m_components[{s, t, static_cast<int>(i), static_cast<int>(j),
                               static_cast<int>(k)}] = {
                static_cast<int>(tube.m_basis.size()), d};
            for (int m = 0; m < d; ++m)
              tube.m_basis.push_back({s, t, static_cast<int>(i),
                                      static_cast<int>(j), static_cast<int>(k),
                                      m});
          }
      tube.m_grade_range[s][t] = {
          off, static_cast<int>(tube.m_basis.size()) - off};
    }

  const int D = tube.dim();
  StarAlgebra& alg = tube.m_alg;
  alg.dim = D;
  alg.lmul.assign(D, Mat::Zero(D, D));

  // Annular product: for a: M_k⊗Y_j -> Y_i⊗M_k and b: M_k2⊗Y_l -> Y_j⊗M_k2
  // with matching middle object and grades,
  //   (ab)^m = Σ_w (ι_{Y_i}⊗w†)(a⊗ι_{M_k2})(ι_{M_k}⊗b)(w⊗ι_{Y_l}),
  // summed over the orthonormal hom basis w: M_m -> M_k⊗M_k2.
  for (int a = 0; a < D; ++a) {
    const TwoCatTubeElement& ea = tube.m_basis[a];
    const Mat amat = tube.basis_morphism(a);
    const int kca = ctx.irr(ea.s, ea.t)[ea.k];
    const int ambk = ctx.cell(kca).amb;
    const int ambyi = ctx.cell(ctx.irr(ea.s, ea.s)[ea.i]).amb;
    for (int b = 0; b < D; ++b) {
      const TwoCatTubeElement& eb = tube.m_basis[b];
      if (eb.s != ea.t || eb.i != ea.j) continue;
      const Mat bmat = tube.basis_morphism(b);
      const int kcb = ctx.irr(eb.s, eb.t)[eb.k];
      const int ambk2 = ctx.cell(kcb).amb;
      const int ambyl = ctx.cell(ctx.irr(eb.t, eb.t)[eb.j]).amb;
      const int kk = ctx.compose(kca, kcb);
      const auto& ms = ctx.irr(ea.s, eb.t);
      for (std::size_t m = 0; m < ms.size(); ++m) {
        auto it = tube.m_components.find(
            {ea.s, eb.t, ea.i, eb.j, static_cast<int>(m)});
        if (it == tube.m_components.end()) continue;
        const std::vector<Mat>& ws = ctx.hom_cells(ms[m], kk);
        if (ws.empty()) continue;
        int dom = ctx.compose(ms[m], ctx.irr(eb.t, eb.t)[eb.j]);
        int cod = ctx.compose(ctx.irr(ea.s, ea.s)[ea.i], ms[m]);
        Mat acc =
            Mat::Zero(ctx.cell(cod).amb, ctx.cell(dom).amb);
        for (const Mat& w : ws) {
          Mat tmp = kron(w, identity(ambyl));
          tmp = kron(identity(ambk), bmat) * tmp;
          tmp = kron(amat, identity(ambk2)) * tmp;
          tmp = kron(identity(ambyi), dagger(w)) * tmp;
          acc += tmp;
        }
        auto [coef, res] = ctx.expand_cells(acc, dom, cod);
        require(res < 1e-8, ErrorKind::CheckFailed,
                "tube_2cat: product fell outside the component basis");
        for (int mm = 0; mm < coef.size(); ++mm)
          alg.lmul[a](it->second.first + mm, b) = coef(mm);
      }
    }
  }

  // Involution: a in (s,t,i,j,k) lands in (t,s,j,i,kbar), with the dual
  // cell's standard pair inserted and contracted through the unit
  // constraints:
  //   a* = W_{Y_j⊗K̄} (R̄_{K̄}†⊗ι)(ι⊗a†⊗ι)(ι⊗R_{K̄}) V†_{K̄⊗Y_i}.
  alg.invol = Mat::Zero(D, D);
  for (int a = 0; a < D; ++a) {
    const TwoCatTubeElement& ea = tube.m_basis[a];
    const int kca = ctx.irr(ea.s, ea.t)[ea.k];
    const int kbar = ctx.dual_id(kca);
    const int kbpos = ctx.cell(kca).dual;
    auto [rins, rcon] = ctx.pair_of(kbar);
    const int iid = ctx.irr(ea.s, ea.s)[ea.i];
    const int jid = ctx.irr(ea.t, ea.t)[ea.j];
    const int ambkb = ctx.cell(kbar).amb;
    const int ambyi = ctx.cell(iid).amb;
    const int ambyj = ctx.cell(jid).amb;
    const Mat amat = tube.basis_morphism(a);
    Mat tmp = dagger(ctx.right_unitor(ctx.compose(kbar, iid)));
    tmp = kron(identity(ambkb * ambyi), rins) * tmp;
    tmp = kron(identity(ambkb), kron(dagger(amat), identity(ambkb))) * tmp;
    tmp = kron(dagger(rcon), identity(ambyj * ambkb)) * tmp;
    tmp = ctx.left_unitor(ctx.compose(jid, kbar)) * tmp;
    auto it = tube.m_components.find({ea.t, ea.s, ea.j, ea.i, kbpos});
    require(it != tube.m_components.end(), ErrorKind::CheckFailed,
            "tube_2cat: involution target component missing");
    int dom = ctx.compose(kbar, iid);
    int cod = ctx.compose(jid, kbar);
    auto [coef, res] = ctx.expand_cells(tmp, dom, cod);
    require(res < 1e-8, ErrorKind::CheckFailed,
            "tube_2cat: involution image not in the component basis");
    for (int mm = 0; mm < coef.size(); ++mm)
      alg.invol(it->second.first + mm, a) = coef(mm);
  }

  // Trace: supported on diagonal-grade components (s,s,i,i,unit); the
  // reduction through the unit constraints is a scalar on Y_i, weighted by
  // the intrinsic dimension d(Y_i).
  alg.trace_vec = Vec::Zero(D);
  for (int a = 0; a < D; ++a) {
    const TwoCatTubeElement& ea = tube.m_basis[a];
    if (ea.s != ea.t || ea.i != ea.j || ea.k != 0) continue;
    int iid = ctx.irr(ea.s, ea.s)[ea.i];
    Mat red = ctx.right_unitor(iid) * tube.basis_morphism(a) *
              dagger(ctx.left_unitor(iid));
    alg.trace_vec(a) = ctx.scalar_of(red, iid) * ctx.cell(iid).d;
  }
  return tube;
}

// ---------------------------------------------------------------------------
// Imprimitivity / strong Morita equivalence checks

/// Isotypic isometries of the backend simples inside a unitary G-action:
/// out[j] collects isometries u: U_j -> V with Σ_{j,α} u u† = ι.
inline std::vector<std::vector<Mat>> isotypic_isometries(
    const CategoryEngine& eng, const std::vector<Mat>& act) {
  const GroupIrreps& ir = eng.group().irreps();
  const int nv = static_cast<int>(act[0].rows());
  std::vector<std::vector<Mat>> out(ir.count());
  for (int j = 0; j < ir.count(); ++j) {
    const int dj = ir.dims[j];
    Mat avg = Mat::Zero(nv * dj, nv * dj);
    for (std::size_t g = 0; g < act.size(); ++g)
      avg += kron(ir.reps[j][g].conjugate(), act[g]);
    avg /= double(act.size());
    Mat kernel = projection_range(avg);
    for (Eigen::Index c = 0; c < kernel.cols(); ++c)
      out[j].push_back(std::sqrt(double(dj)) *
                       mat_of(kernel.col(c), nv, dj));
  }
  return out;
}

struct ImprimitivityReport {
  double frame_residual = 0.0;       ///< worst |d(Q)p(a) - Σ T T†|
  double completeness_residual = 0;  ///< worst |Σ u u† - ι| over bimodules
  std::vector<std::tuple<int, int, int, int>> span_ranks;  ///< (s,t,rank,dim)
  bool spans_full = true;
  std::vector<int> corner_dims;                  ///< dim of Tub^{ss}
  std::vector<std::vector<int>> corner_blocks;   ///< sorted block dims per s
  std::vector<int> fusion_dims;                  ///< #Irr(B_ss)
  bool grade1_pointed = false;        ///< every grade-1 simple invertible
  double group_like_residual = -1.0;  ///< grade-1 fusion structure when
                                      ///< pointed; -1 when not applicable
  double unit_residual = 0.0;         ///< |L(unit) - id|
};

/// Certifies the strong Morita equivalence carried by the graded tube:
/// the Q-frame identity d(Q)·p(X) = Σ_{j,α} T_j^α T_j^{α†} on every simple
/// bimodule, fullness of the corner products
/// Tub^{st}·Tub^{ts} = Tub^{ss}, agreement of the diagonal-corner block
/// counts, and the structure of the two fusion corners.
inline ImprimitivityReport verify_imprimitivity(TwoCatTube& tube,
                                                double tol = 1e-9,
                                                std::uint64_t seed = 5) {
  MoritaContext& ctx = tube.context();
  const CategoryEngine& eng = ctx.engine();
  const StarAlgebra& alg = tube.algebra();
  const double dq = ctx.qsystem().dq;
  const int q = ctx.qsystem().points;
  ImprimitivityReport rep;

  // Q-frame identity on each simple bimodule.
  for (int aid : ctx.irr(1, 1)) {
    const Cell& c = ctx.cell(aid);
    auto iso = isotypic_isometries(eng, c.act);
    Mat complete = Mat::Zero(c.amb, c.amb);
    for (const auto& us : iso)
      for (const Mat& u : us) complete += u * dagger(u);
    rep.completeness_residual = std::max(rep.completeness_residual,
                                         residual(complete, identity(c.amb)));
    Mat vdag = dagger(ctx.right_unitor(aid));
    Mat frame = Mat::Zero(c.amb * q, c.amb * q);
    for (const auto& us : iso)
      for (const Mat& u : us) {
        Mat t = vdag * c.l * kron(identity(q), u);
        frame += t * dagger(t);
      }
    const Mat& p = ctx.cell(ctx.compose(aid, ctx.unit_cell(1))).p;
    rep.frame_residual =
        std::max(rep.frame_residual, residual(frame, Mat(dq * p)));
  }
  require(rep.frame_residual < tol && rep.completeness_residual < tol,
          ErrorKind::CheckFailed,
          "imprimitivity failure: Q-frame identity residual " +
              std::to_string(rep.frame_residual));

  // Corner products span the diagonal corners at full rank.
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t) {
      auto [aoff, acount] = tube.grade_range(s, t);
      auto [boff, bcount] = tube.grade_range(t, s);
      auto [coff, ccount] = tube.grade_range(s, s);
      Mat span(ccount, static_cast<Eigen::Index>(acount) * bcount);
      Eigen::Index col = 0;
      for (int a = 0; a < acount; ++a)
        for (int b = 0; b < bcount; ++b)
          span.col(col++) =
              alg.lmul[aoff + a].col(boff + b).segment(coff, ccount);
      int rank = rank_of(span);
      rep.span_ranks.push_back({s, t, rank, ccount});
      if (rank != ccount) rep.spans_full = false;
    }
  require(rep.spans_full, ErrorKind::CheckFailed,
          "imprimitivity failure: corner products do not span the diagonal "
          "corner");

  // Unit of the graded algebra.
  Vec u = tube.unit();
  rep.unit_residual = residual(alg.left_mult(u), identity(alg.dim));
  require(rep.unit_residual < tol, ErrorKind::CheckFailed,
          "tube_2cat: object idempotents do not sum to the unit");

  // Diagonal corners: same number of Wedderburn blocks on both sides.
  for (int s = 0; s < 2; ++s) {
    StarAlgebra corner = tube.corner(s);
    rep.corner_dims.push_back(corner.dim);
    BlockDecomposition bd = decompose_star_algebra(corner, seed);
    rep.corner_blocks.push_back(bd.dims_sorted());
  }
  require(rep.corner_blocks[0].size() == rep.corner_blocks[1].size(),
          ErrorKind::CheckFailed,
          "imprimitivity failure: corner block counts differ");

  // Fusion corners: one generator per simple of B_ss; slicing validates the
  // one-dimensionality of each component and closure under product and star.
  for (int s = 0; s < 2; ++s)
    rep.fusion_dims.push_back(tube.fusion_corner(s).dim);

  // When every grade-1 simple is invertible (A ∘ Ā has the rank of the
  // unit) the grade-1 fusion corner is group-like: every product of
  // generators is a single generator with a unimodular coefficient.  For a
  // non-pointed dual (double-coset fusion) the test does not apply.
  rep.grade1_pointed = true;
  const int unit_rank = ctx.cell(ctx.unit_cell(1)).rank;
  for (int aid : ctx.irr(1, 1)) {
    int comp = ctx.compose(aid, ctx.dual_id(aid));
    if (ctx.cell(comp).rank != unit_rank) rep.grade1_pointed = false;
  }
  if (rep.grade1_pointed) {
    StarAlgebra f1 = tube.fusion_corner(1);
    rep.group_like_residual = 0.0;
    for (int a = 0; a < f1.dim; ++a)
      for (int b = 0; b < f1.dim; ++b) {
        Vec prod = f1.lmul[a].col(b);
        int nz = 0;
        double dev = 1.0;
        for (int c = 0; c < f1.dim; ++c)
          if (std::abs(prod(c)) > 1e-9) {
            ++nz;
            dev = std::abs(std::abs(prod(c)) - 1.0);
          }
        rep.group_like_residual = std::max(
            rep.group_like_residual, nz == 1 ? dev : 1.0);
      }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Regular half-braiding over the module cells

/// The regular half-braiding Z_s = ⊕_{A ∈ Irr(B_s1)} A⊗Y⊗Ā for a bimodule
/// Y ∈ B_11, presented blockwise: for a cell W ∈ B_st the component
/// c_W(B←A) maps W⊗A⊗Y⊗Ā -> B⊗Y⊗B̄⊗W through the hom basis
/// u_α: B -> W⊗A and its dual transpose.  One template covers all four
/// grades; verify() checks unitarity, equivariance, naturality and
/// multiplicativity blockwise.
class RegularHalfBraiding {
public:
  RegularHalfBraiding(MoritaContext& ctx, int y) : m_ctx(&ctx), m_y(y) {
    const Cell& cy = ctx.cell(y);
    require(cy.s == 1 && cy.t == 1, ErrorKind::Validation,
            "zreg: Y must be a bimodule cell");
    for (int s = 0; s < 2; ++s) m_summands[s] = ctx.irr(s, 1);
  }

  MoritaContext& context() const { return *m_ctx; }
  int y_cell() const { return m_y; }
  const std::vector<int>& summands(int s) const { return m_summands[s]; }

  /// Registry id of the summand cell A⊗Y⊗Ā.
  int summand_cell(int a_id) {
    return m_ctx->compose(m_ctx->compose(a_id, m_y), m_ctx->dual_id(a_id));
  }

  /// Blockwise braiding component for a (possibly composite) cell W of grade
  /// (s,t): the map W⊗A⊗Y⊗Ā -> B⊗Y⊗B̄⊗W.
  Mat block(int w, int b_id, int a_id) {
    MoritaContext& ctx = *m_ctx;
    const Cell& cw = ctx.cell(w);
    const int wa = ctx.compose(w, a_id);
    const std::vector<Mat>& us = ctx.hom_cells(b_id, wa);
    const int abar = ctx.dual_id(a_id);
    const int bbar = ctx.dual_id(b_id);
    const int ny = ctx.cell(m_y).amb;
    const int na = ctx.cell(a_id).amb;
    const int nabar = ctx.cell(abar).amb;
    const int nb = ctx.cell(b_id).amb;
    const int nbbar = ctx.cell(bbar).amb;
    Mat out = Mat::Zero(nb * ny * nbbar * cw.amb,
                        cw.amb * na * ny * nabar);
    if (us.empty()) return out;
    auto [rw, rwbar] = ctx.pair_of(w);
    (void)rwbar;
    const double scale =
        std::sqrt(ctx.cell(a_id).d / ctx.cell(b_id).d);
    Mat pre = dagger(ctx.right_unitor(abar));
    for (const Mat& u : us) {
      Mat uvee = ctx.cell_vee(u, b_id, wa);
      Mat v = kron(uvee, identity(cw.amb)) * kron(identity(nabar), rw) * pre;
      out += scale * kron(kron(dagger(u), identity(ny)), v);
    }
    // Compress onto the relative-tensor supports of both legs; the raw
    // formula maps support into support but does not vanish off-support.
    return cod_support(w, b_id) * out * dom_support(w, a_id);
  }

  /// Support projections of the blockwise domain and codomain cells.
  Mat dom_support(int w, int a_id) {
    return m_ctx
        ->cell(m_ctx->compose(
            m_ctx->compose(m_ctx->compose(w, a_id), m_y),
            m_ctx->dual_id(a_id)))
        .p;
  }
  Mat cod_support(int w, int b_id) {
    return m_ctx->cell(m_ctx->compose(summand_cell(b_id), w)).p;
  }

  struct Report {
    double unitarity = 0.0;
    double equivariance = 0.0;
    double naturality = -1.0;
    double multiplicativity = -1.0;
  };

  /// Blockwise verification over every simple cell of every grade, with
  /// naturality and multiplicativity probed on all composable simple pairs.
  Report verify(double tol = 1e-9) {
    MoritaContext& ctx = *m_ctx;
    Report rep;
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t) {
        const auto& bs = m_summands[s];
        const auto& as = m_summands[t];
        for (int w : ctx.irr(s, t)) {
          // Unitarity: Σ_A c_{BA} c_{B'A}† = δ_{BB'} p_cod.
          for (std::size_t b1 = 0; b1 < bs.size(); ++b1)
            for (std::size_t b2 = 0; b2 < bs.size(); ++b2) {
              Mat acc;
              for (std::size_t a = 0; a < as.size(); ++a) {
                Mat c1 = block(w, bs[b1], as[a]);
                Mat c2 = block(w, bs[b2], as[a]);
                acc = acc.size() ? Mat(acc + c1 * dagger(c2))
                                 : Mat(c1 * dagger(c2));
              }
              Mat want = b1 == b2 ? cod_support(w, bs[b1])
                                  : Mat(Mat::Zero(acc.rows(), acc.cols()));
              rep.unitarity = std::max(rep.unitarity, residual(acc, want));
            }
          // Dagger side: Σ_B c_{BA}† c_{BA'} = δ_{AA'} p_dom.
          for (std::size_t a1 = 0; a1 < as.size(); ++a1)
            for (std::size_t a2 = 0; a2 < as.size(); ++a2) {
              Mat acc;
              for (std::size_t b = 0; b < bs.size(); ++b) {
                Mat c1 = block(w, bs[b], as[a1]);
                Mat c2 = block(w, bs[b], as[a2]);
                acc = acc.size() ? Mat(acc + dagger(c1) * c2)
                                 : Mat(dagger(c1) * c2);
              }
              Mat want = a1 == a2 ? dom_support(w, as[a1])
                                  : Mat(Mat::Zero(acc.rows(), acc.cols()));
              rep.unitarity = std::max(rep.unitarity, residual(acc, want));
            }
          // Equivariance blockwise.
          for (std::size_t b = 0; b < bs.size(); ++b)
            for (std::size_t a = 0; a < as.size(); ++a) {
              Mat c1 = block(w, bs[b], as[a]);
              int dom = ctx.compose(
                  ctx.compose(ctx.compose(w, as[a]), m_y),
                  ctx.dual_id(as[a]));
              int cod = ctx.compose(summand_cell(bs[b]), w);
              for (std::size_t g = 0; g < ctx.cell(dom).act.size(); ++g)
                rep.equivariance = std::max(
                    rep.equivariance,
                    residual(Mat(ctx.cell(cod).act[g] * c1),
                             Mat(c1 * ctx.cell(dom).act[g])));
            }
        }
      }
    // Naturality and multiplicativity over composable simple pairs.
    rep.naturality = 0.0;
    rep.multiplicativity = 0.0;
    for (int s = 0; s < 2; ++s)
      for (int mid = 0; mid < 2; ++mid)
        for (int t = 0; t < 2; ++t) {
          const auto& bs = m_summands[s];
          const auto& as = m_summands[t];
          const auto& msum = m_summands[mid];
          for (int w1 : ctx.irr(s, mid))
            for (int w2 : ctx.irr(mid, t)) {
              int ww = ctx.compose(w1, w2);
              const int ny = ctx.cell(m_y).amb;
              for (std::size_t b = 0; b < bs.size(); ++b)
                for (std::size_t a = 0; a < as.size(); ++a) {
                  Mat cww = block(ww, bs[b], as[a]);
                  // Multiplicativity.
                  const int n1 = ctx.cell(w1).amb, n2 = ctx.cell(w2).amb;
                  Mat acc = Mat::Zero(cww.rows(), cww.cols());
                  for (int m : msum) {
                    Mat inner = block(w2, m, as[a]);
                    Mat outer = block(w1, bs[b], m);
                    acc += kron(outer, identity(n2)) *
                           kron(identity(n1), inner);
                  }
                  rep.multiplicativity =
                      std::max(rep.multiplicativity, residual(acc, cww));
                  // Naturality through every simple W'' inside W1⊗W2.
                  for (int w3 : ctx.irr(s, t)) {
                    const std::vector<Mat>& fs = ctx.hom_cells(w3, ww);
                    const int na = ctx.cell(as[a]).amb;
                    const int nabar = ctx.cell(ctx.dual_id(as[a])).amb;
                    const int nb = ctx.cell(bs[b]).amb;
                    const int nbbar = ctx.cell(ctx.dual_id(bs[b])).amb;
                    for (const Mat& f : fs) {
                      Mat lhs = cww * kron(f, identity(na * ny * nabar));
                      Mat rhs = kron(identity(nb * ny * nbbar), f) *
                                block(w3, bs[b], as[a]);
                      rep.naturality =
                          std::max(rep.naturality, residual(lhs, rhs));
                    }
                  }
                }
            }
        }
    require(rep.unitarity < tol && rep.equivariance < tol &&
                rep.naturality < tol && rep.multiplicativity < tol,
            ErrorKind::CheckFailed,
            "zreg: half-braiding verification failed (unitarity " +
                std::to_string(rep.unitarity) + ", naturality " +
                std::to_string(rep.naturality) + ", multiplicativity " +
                std::to_string(rep.multiplicativity) + ")");
    return rep;
  }

  /// The grade-0 row as a concrete half-braiding object over the plain
  /// category: every summand is compressed onto its support, the G-action
  /// is rotated into isotypic coordinates, and the braiding components are
  /// conjugated into the standard block layout.
  HalfBraidingObject to_half_braiding_object() {
    MoritaContext& ctx = *m_ctx;
    const CategoryEngine& eng = ctx.engine();
    const std::vector<int>& as = m_summands[0];
    std::vector<Mat> embed;   // support isometries per summand
    std::vector<int> ranks;
    int dimz = 0;
    for (int a_id : as) {
      const Cell& c = ctx.cell(summand_cell(a_id));
      embed.push_back(c.u);
      ranks.push_back(c.rank);
      dimz += c.rank;
    }
    // Compressed block G-action on Z0.
    const int order = eng.group().table().order;
    std::vector<Mat> zact(order, Mat::Zero(dimz, dimz));
    for (int g = 0; g < order; ++g) {
      int at = 0;
      for (std::size_t a = 0; a < as.size(); ++a) {
        const Cell& c = ctx.cell(summand_cell(as[a]));
        zact[g].block(at, at, ranks[a], ranks[a]) =
            dagger(c.u) * c.act[g] * c.u;
        at += ranks[a];
      }
    }
    // Isotypic rotation.
    auto iso = isotypic_isometries(eng, zact);
    HalfBraidingObject hb;
    hb.mult.resize(iso.size());
    int cols = 0;
    for (std::size_t i = 0; i < iso.size(); ++i) {
      hb.mult[i] = static_cast<int>(iso[i].size());
      cols += hb.mult[i] * eng.carrier_dim(static_cast<int>(i));
    }
    require(cols == dimz, ErrorKind::CheckFailed,
            "zreg: isotypic decomposition does not exhaust Z0");
    Mat phi(dimz, dimz);
    int at = 0;
    for (std::size_t i = 0; i < iso.size(); ++i)
      for (const Mat& u : iso[i]) {
        phi.middleCols(at, u.cols()) = u;
        at += static_cast<int>(u.cols());
      }
    require(residual(Mat(dagger(phi) * phi), identity(dimz)) < 1e-9,
            ErrorKind::CheckFailed, "zreg: isotypic frame is not unitary");
    // Assemble each braiding component in compressed coordinates, then
    // rotate into the standard layout.
    for (int s = 0; s < eng.simple_count(); ++s) {
      const int ds = eng.carrier_dim(s);
      const int w = ctx.irr(0, 0)[s];
      Mat cs = Mat::Zero(dimz * ds, ds * dimz);
      int roff = 0;
      for (std::size_t b = 0; b < as.size(); ++b) {
        int coff = 0;
        for (std::size_t a = 0; a < as.size(); ++a) {
          Mat blk = block(w, as[b], as[a]);
          Mat cblk = dagger(kron(embed[b], identity(ds))) * blk *
                     kron(identity(ds), embed[a]);
          cs.block(roff, coff, ranks[b] * ds, ds * ranks[a]) = cblk;
          coff += ds * ranks[a];
        }
        roff += ranks[b] * ds;
      }
      // The column blocking above is (A-summand outer, U_s inner) on the
      // domain side; regroup to the global (U_s ⊗ Z) order.
      Mat dom_perm = Mat::Zero(ds * dimz, ds * dimz);
      {
        int src = 0;
        for (std::size_t a = 0; a < as.size(); ++a)
          for (int x = 0; x < ds; ++x)
            for (int r = 0; r < ranks[a]; ++r) {
              int aoff = 0;
              for (std::size_t a2 = 0; a2 < a; ++a2) aoff += ranks[a2];
              dom_perm(x * dimz + aoff + r, src++) = 1.0;
            }
      }
      Mat cod_perm = Mat::Zero(dimz * ds, dimz * ds);
      {
        int src = 0;
        for (std::size_t b = 0; b < as.size(); ++b)
          for (int r = 0; r < ranks[b]; ++r)
            for (int x = 0; x < ds; ++x) {
              int boff = 0;
              for (std::size_t b2 = 0; b2 < b; ++b2) boff += ranks[b2];
              cod_perm((boff + r) * ds + x, src++) = 1.0;
            }
      }
      Mat global = cod_perm * cs * dagger(dom_perm);
      hb.c.push_back(dagger(kron(phi, identity(ds))) * global *
                     kron(identity(ds), phi));
    }
    return hb;
  }

private:
  MoritaContext* m_ctx;
  int m_y;
  std::vector<int> m_summands[2];
};

/// Builds the regular half-braiding of a bimodule cell (default: the unit).
inline RegularHalfBraiding build_zreg(MoritaContext& ctx, int y = -1) {
  return RegularHalfBraiding(ctx, y < 0 ? ctx.unit_cell(1) : y);
}

}  // namespace annulus
