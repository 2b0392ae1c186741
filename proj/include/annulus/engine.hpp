#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "annulus/group.hpp"
#include "annulus/linalg.hpp"

/// Category engine: tensor words over a finite label set of simple objects,
/// morphism spaces solved from symmetry-equivariance constraints, standard
/// solutions of the conjugate equations, categorical traces and the dual
/// (vee) map.  Two backends share the machinery: unitary representations of a
/// finite group, and a spin-truncated window of the representation category
/// of SU_q(2) acted on by the quantum-algebra generators E, F, K.
namespace annulus {

/// Tensor word of simple labels; empty word is the monoidal unit.  The
/// carrier is the Kronecker product of letter carriers, first letter slowest.
struct Word {
  std::vector<int> letters;

  static Word unit() { return {}; }
  static Word single(int s) { return {{s}}; }
  Word tensor(const Word& o) const {
    Word w = *this;
    w.letters.insert(w.letters.end(), o.letters.begin(), o.letters.end());
    return w;
  }
  bool operator==(const Word& o) const { return letters == o.letters; }
  bool operator<(const Word& o) const { return letters < o.letters; }
  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < letters.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(letters[i]);
    }
    return s + "]";
  }
};

/// Linear map between word carriers; rows = codomain, cols = domain.
struct Morphism {
  Word dom, cod;
  Mat m;
};

/// Basis of a morphism space, orthonormal for the normalized trace pairing
/// <v,w> = Tr(w† v)/dim(domain carrier) (equals the composition pairing
/// w* v = <v,w>·id whenever the domain is simple).
struct HomBasis {
  Word dom, cod;
  std::vector<Mat> basis;
  int dim() const { return static_cast<int>(basis.size()); }
};

/// Standard solution (R, Rbar) of the conjugate equations for a word X:
/// R: unit -> Xbar⊗X and Rbar: unit -> X⊗Xbar with |R| = |Rbar| = sqrt(d(X)).
struct StdPair {
  Morphism R, Rbar;
  double dim = 0.0;
};

// ---------------------------------------------------------------------------
// Backends
// ---------------------------------------------------------------------------

class GroupBackend {
public:
  GroupBackend(GroupTable table, GroupIrreps irreps)
      : m_g(std::move(table)), m_ir(std::move(irreps)) {}

  const GroupTable& table() const { return m_g; }
  const GroupIrreps& irreps() const { return m_ir; }

  int simple_count() const { return m_ir.count(); }
  int carrier_dim(int s) const { return m_ir.dims[s]; }
  double qdim(int s) const { return double(m_ir.dims[s]); }
  int dual(int s) const { return m_ir.dual[s]; }
  bool finite() const { return true; }
  std::string label_name(int s) const { return "irr" + std::to_string(s); }

  /// One matrix per group element acting on the word carrier.
  std::vector<Mat> word_actions(const Word& w) const {
    std::vector<Mat> out;
    out.reserve(m_g.order);
    for (int g = 0; g < m_g.order; ++g) {
      Mat a = Mat::Identity(1, 1);
      for (int s : w.letters) a = kron(a, m_ir.reps[s][g]);
      out.push_back(std::move(a));
    }
    return out;
  }

  /// Group backends solve hom spaces through the averaging projector, which
  /// is numerically an exact orthogonal projection.
  bool averaging_available() const { return true; }

private:
  GroupTable m_g;
  GroupIrreps m_ir;
};

/// Spin-truncated SU_q(2): labels l = 0..two_cutoff correspond to spins l/2.
/// The truncation restricts which objects can be named; carriers and
/// intertwiners are exact for the full quantum group.
class Suq2Backend {
public:
  Suq2Backend(double q, int two_cutoff) : m_q(q), m_two_cutoff(two_cutoff) {
    require(q > 0.0 && q < 1.0, ErrorKind::Validation,
            "suq2: deformation parameter must lie in (0,1)");
    require(two_cutoff >= 0, ErrorKind::Validation, "suq2: negative cutoff");
    for (int l = 0; l <= two_cutoff; ++l) {
      int d = l + 1;
      Mat e = Mat::Zero(d, d), k = Mat::Zero(d, d), rho = Mat::Zero(d, d);
      double j = l / 2.0;
      for (int idx = 0; idx < d; ++idx) {
        double m = -j + idx;
        k(idx, idx) = std::pow(m_q, m);
        rho(idx, idx) = std::pow(m_q, 2.0 * m);
        if (idx + 1 < d)
          e(idx + 1, idx) = std::sqrt(qint(j - m) * qint(j + m + 1.0));
      }
      m_e.push_back(e);
      m_f.push_back(e.adjoint());
      m_k.push_back(k);
      m_rho.push_back(rho);
    }
  }

  double q() const { return m_q; }
  int simple_count() const { return m_two_cutoff + 1; }
  int carrier_dim(int s) const { return s + 1; }
  double qdim(int s) const { return m_rho[s].trace().real(); }
  int dual(int s) const { return s; }
  bool finite() const { return false; }
  std::string label_name(int s) const {
    return s % 2 == 0 ? std::to_string(s / 2) : std::to_string(s) + "/2";
  }
  const Mat& rho(int s) const { return m_rho[s]; }

  /// Integer weights 2m of the word carrier basis (K acts as q^{weight/2}·...
  /// precisely, diag entries are q^{m} per letter; summed exponents are
  /// integers in the 2m normalization).  Order matches the Kronecker layout.
  std::vector<int> weights(const Word& w) const {
    std::vector<int> acc{0};
    for (int l : w.letters) {
      std::vector<int> next;
      next.reserve(acc.size() * (l + 1));
      for (int base : acc)
        for (int k = 0; k <= l; ++k) next.push_back(base + 2 * k - l);
      acc = std::move(next);
    }
    return acc;
  }

  /// Generators E, F, K acting through the iterated balanced coproduct
  /// Δ(E) = E⊗K⁻¹ + K⊗E, Δ(F) = F⊗K⁻¹ + K⊗F, Δ(K) = K⊗K, which preserves
  /// the *-structure so tensor products of unitary representations stay
  /// unitary.
  std::vector<Mat> word_actions(const Word& w) const {
    const int n = static_cast<int>(w.letters.size());
    int dim = 1;
    for (int s : w.letters) dim *= carrier_dim(s);
    // K on the whole word.
    Mat kw = Mat::Identity(1, 1);
    for (int s : w.letters) kw = kron(kw, m_k[s]);
    // E and F: sum over the position of the raising/lowering letter.
    Mat ew = Mat::Zero(dim, dim), fw = Mat::Zero(dim, dim);
    for (int t = 0; t < n; ++t) {
      Mat terme = Mat::Identity(1, 1), termf = Mat::Identity(1, 1);
      for (int p = 0; p < n; ++p) {
        int s = w.letters[p];
        if (p < t) {
          terme = kron(terme, m_k[s]);
          termf = kron(termf, m_k[s]);
        } else if (p == t) {
          terme = kron(terme, m_e[s]);
          termf = kron(termf, m_f[s]);
        } else {
          Mat kinv = m_k[s].diagonal().cwiseInverse().asDiagonal();
          terme = kron(terme, kinv);
          termf = kron(termf, kinv);
        }
      }
      ew += terme;
      fw += termf;
    }
    if (n == 0) {
      ew = Mat::Zero(1, 1);
      fw = Mat::Zero(1, 1);
    }
    return {ew, fw, kw};
  }

  bool averaging_available() const { return false; }

private:
  double qint(double n) const {  // quantum integer [n]_q
    return (std::pow(m_q, n) - std::pow(m_q, -n)) / (m_q - 1.0 / m_q);
  }
  double m_q;
  int m_two_cutoff;
  std::vector<Mat> m_e, m_f, m_k, m_rho;
};

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

class CategoryEngine {
public:
  explicit CategoryEngine(GroupBackend b) : m_backend(std::move(b)) {}
  explicit CategoryEngine(Suq2Backend b) : m_backend(std::move(b)) {}

  bool is_group() const {
    return std::holds_alternative<GroupBackend>(m_backend);
  }
  const GroupBackend& group() const { return std::get<GroupBackend>(m_backend); }
  const Suq2Backend& suq2() const { return std::get<Suq2Backend>(m_backend); }

  int simple_count() const {
    return std::visit([](const auto& b) { return b.simple_count(); }, m_backend);
  }
  int carrier_dim(int s) const {
    return std::visit([&](const auto& b) { return b.carrier_dim(s); }, m_backend);
  }
  double qdim(int s) const {
    return std::visit([&](const auto& b) { return b.qdim(s); }, m_backend);
  }
  int dual(int s) const {
    return std::visit([&](const auto& b) { return b.dual(s); }, m_backend);
  }
  bool finite() const {
    return std::visit([](const auto& b) { return b.finite(); }, m_backend);
  }
  std::string label_name(int s) const {
    return std::visit([&](const auto& b) { return b.label_name(s); }, m_backend);
  }

  int carrier_dim(const Word& w) const {
    int d = 1;
    for (int s : w.letters) d *= carrier_dim(s);
    return d;
  }

  Word dual_word(const Word& w) const {
    Word out;
    out.letters.reserve(w.letters.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
      out.letters.push_back(dual(*it));
    return out;
  }

  // --- morphism helpers ----------------------------------------------------

  Morphism id(const Word& w) const {
    return {w, w, identity(carrier_dim(w))};
  }

  Morphism compose(const Morphism& f, const Morphism& g) const {
    require(g.cod == f.dom, ErrorKind::ShapeMismatch,
            "compose: " + f.dom.str() + " expected, got " + g.cod.str());
    return {g.dom, f.cod, f.m * g.m};
  }

  Morphism tensor(const Morphism& f, const Morphism& g) const {
    return {f.dom.tensor(g.dom), f.cod.tensor(g.cod), kron(f.m, g.m)};
  }

  Morphism adjoint(const Morphism& f) const {
    return {f.cod, f.dom, dagger(f.m)};
  }

  /// Morphism space with memoized orthonormal basis.
  const HomBasis& hom(const Word& x, const Word& y) const {
    auto key = std::make_pair(x, y);
    auto it = m_hom.find(key);
    if (it != m_hom.end()) return it->second;
    HomBasis hb;
    hb.dom = x;
    hb.cod = y;
    const int dx = carrier_dim(x), dy = carrier_dim(y);
    Mat kernel;
    if (is_group()) {
      // Orthogonal projection onto the intertwiner space by group averaging.
      auto ax = group().word_actions(x);
      auto ay = group().word_actions(y);
      Mat p = Mat::Zero(dx * dy, dx * dy);
      for (std::size_t g = 0; g < ax.size(); ++g)
        p += kron(ax[g].conjugate(), ay[g]);
      p /= double(ax.size());
      kernel = projection_range(p);
    } else {
      kernel = suq2_kernel(x, y);
    }
    double scale = std::sqrt(double(dx));
    for (Eigen::Index c = 0; c < kernel.cols(); ++c)
      hb.basis.push_back(scale * mat_of(canonical_phase(kernel.col(c)), dy, dx));
    auto [pos, ok] = m_hom.emplace(key, std::move(hb));
    (void)ok;
    return pos->second;
  }

  /// Expansion of a morphism in the hom basis of its type; also returns the
  /// reconstruction residual (nonzero means the matrix was not equivariant).
  std::pair<Vec, double> expand(const Morphism& f) const {
    const HomBasis& hb = hom(f.dom, f.cod);
    const double dd = double(carrier_dim(f.dom));
    Vec coeff(hb.dim());
    Mat recon = Mat::Zero(f.m.rows(), f.m.cols());
    for (int c = 0; c < hb.dim(); ++c) {
      coeff(c) = (hb.basis[c].adjoint() * f.m).trace() / dd;
      recon += coeff(c) * hb.basis[c];
    }
    return {coeff, (recon - f.m).norm() / std::max(1.0, f.m.norm())};
  }

  // --- standard solutions ---------------------------------------------------

  /// Standard solution of the conjugate equations for a word, built from the
  /// single-letter pairs by nesting:
  ///   R_{U⊗V} = (ι ⊗ R_U ⊗ ι) R_V,   Rbar_{U⊗V} = (ι ⊗ Rbar_V ⊗ ι) Rbar_U.
  const StdPair& standard_pair(const Word& w) const {
    auto it = m_pairs.find(w);
    if (it != m_pairs.end()) return it->second;
    StdPair sp = w.letters.empty()     ? unit_pair()
                 : w.letters.size() == 1 ? letter_pair(w.letters[0])
                                         : nested_pair(w);
    auto [pos, ok] = m_pairs.emplace(w, std::move(sp));
    (void)ok;
    return pos->second;
  }

  /// Categorical trace Tr_X(T) = R_X* (ι ⊗ T) R_X for T in End(X).
  cx categorical_trace(const Morphism& t) const {
    require(t.dom == t.cod, ErrorKind::ShapeMismatch,
            "categorical_trace: not an endomorphism");
    const StdPair& sp = standard_pair(t.dom);
    Word xbar = dual_word(t.dom);
    Morphism mid = tensor(id(xbar), t);
    Mat val = sp.R.m.adjoint() * mid.m * sp.R.m;
    return val(0, 0);
  }

  /// Dual (vee) map: T: X -> Y goes to T^vee: Ybar -> Xbar,
  /// T^vee = (ι_Xbar ⊗ Rbar_Y*) (ι_Xbar ⊗ T ⊗ ι_Ybar) (R_X ⊗ ι_Ybar).
  Morphism vee(const Morphism& t) const {
    Word xbar = dual_word(t.dom), ybar = dual_word(t.cod);
    const StdPair& px = standard_pair(t.dom);
    const StdPair& py = standard_pair(t.cod);
    Morphism step1 = tensor(px.R, id(ybar));
    Morphism step2 = tensor(tensor(id(xbar), t), id(ybar));
    Morphism step3 = tensor(id(xbar), adjoint(py.Rbar));
    return compose(step3, compose(step2, step1));
  }

private:
  /// Quantum intertwiner solver.  The K-condition confines T to entries with
  /// equal integer weights; the E/F commutation conditions restrict to rows
  /// of weight difference ±2, so the joint kernel lives in a small
  /// weight-matched parameter space and stays fully SVD-accurate.
  Mat suq2_kernel(const Word& x, const Word& y) const {
    const Suq2Backend& b = suq2();
    const int dx = carrier_dim(x), dy = carrier_dim(y);
    auto wx = b.weights(x), wy = b.weights(y);
    std::vector<std::pair<int, int>> params;  // (row i in Y, col j in X)
    std::map<std::pair<int, int>, int> pidx;
    for (int i = 0; i < dy; ++i)
      for (int j = 0; j < dx; ++j)
        if (wy[i] == wx[j]) {
          pidx[{i, j}] = static_cast<int>(params.size());
          params.emplace_back(i, j);
        }
    const int p = static_cast<int>(params.size());
    if (p == 0) return Mat::Zero(dx * dy, 0);
    auto acts_x = b.word_actions(x);  // {E, F, K}
    auto acts_y = b.word_actions(y);
    std::vector<Mat> rows_blocks;
    for (int gen = 0; gen < 2; ++gen) {  // 0: E (shift +2), 1: F (shift -2)
      const Mat& gx = acts_x[gen];
      const Mat& gy = acts_y[gen];
      const int shift = gen == 0 ? 2 : -2;
      std::vector<std::pair<int, int>> rows;
      for (int i = 0; i < dy; ++i)
        for (int j = 0; j < dx; ++j)
          if (wy[i] == wx[j] + shift) rows.emplace_back(i, j);
      Mat c = Mat::Zero(static_cast<Eigen::Index>(rows.size()), p);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        auto [i, j] = rows[r];
        for (int k = 0; k < dy; ++k)
          if (gy(i, k) != cx(0.0)) {
            auto it = pidx.find({k, j});
            if (it != pidx.end()) c(r, it->second) += gy(i, k);
          }
        for (int k = 0; k < dx; ++k)
          if (gx(k, j) != cx(0.0)) {
            auto it = pidx.find({i, k});
            if (it != pidx.end()) c(r, it->second) -= gx(k, j);
          }
      }
      rows_blocks.push_back(std::move(c));
    }
    Mat pkernel = joint_kernel(rows_blocks, p);
    Mat out = Mat::Zero(dx * dy, pkernel.cols());
    for (Eigen::Index c = 0; c < pkernel.cols(); ++c)
      for (int k = 0; k < p; ++k) {
        auto [i, j] = params[k];
        out(j * dy + i, c) = pkernel(k, c);  // column-major vec layout
      }
    return out;
  }

  StdPair unit_pair() const {
    StdPair sp;
    sp.R = {Word::unit(), Word::unit(), Mat::Identity(1, 1)};
    sp.Rbar = sp.R;
    sp.dim = 1.0;
    return sp;
  }

  /// Single-letter standard pair.  For s with dual partner sbar != s the pair
  /// is solved once for min(s, sbar) and transported by the convention
  /// (R_sbar, Rbar_sbar) = (Rbar_s, R_s); self-dual letters keep the solver
  /// output (canonical phase, norm sqrt(d)).
  StdPair letter_pair(int s) const {
    int sb = dual(s);
    if (sb < s) {
      const StdPair& part = standard_pair(Word::single(sb));
      StdPair sp;
      sp.R = part.Rbar;
      sp.Rbar = part.R;
      sp.dim = part.dim;
      return sp;
    }
    Word ws = Word::single(s), wsb = Word::single(sb);
    const HomBasis& hr = hom(Word::unit(), wsb.tensor(ws));
    const HomBasis& hb = hom(Word::unit(), ws.tensor(wsb));
    require(hr.dim() == 1 && hb.dim() == 1, ErrorKind::Validation,
            "standard_pair: label " + std::to_string(s) +
                " has no (or non-unique) conjugate pairing");
    Vec r = vec_of(hr.basis[0]);
    r /= r.norm();
    Vec b = vec_of(hb.basis[0]);
    b /= b.norm();
    const int d = carrier_dim(s);
    // chi: (ι_s ⊗ r*)(b ⊗ ι_s) = chi · id_s fixes the intrinsic dimension
    // 1/|chi| and the partner normalization.
    Mat rmat = mat_of(r, d, d);  // coefficients r_{xy} on H_sbar ⊗ H_s
    Mat bmat = mat_of(b, d, d);
    Mat scal = bmat * rmat.conjugate();
    cx chi = scal.trace() / double(d);
    require(residual(scal, chi * identity(d)) < 1e-8, ErrorKind::CheckFailed,
            "standard_pair: pairing is not scalar for label " +
                std::to_string(s));
    double dim = 1.0 / std::abs(chi);
    double target = qdim(s);
    require(std::abs(dim - target) < 1e-6 * std::max(1.0, target),
            ErrorKind::CheckFailed,
            "standard_pair: intrinsic dimension " + std::to_string(dim) +
                " of label " + std::to_string(s) +
                " does not match backend dimension " + std::to_string(target));
    double lambda = std::sqrt(dim);
    cx mu = 1.0 / (lambda * chi);
    StdPair sp;
    sp.R = {Word::unit(), wsb.tensor(ws), lambda * Mat(mat_of(r, d * d, 1))};
    sp.Rbar = {Word::unit(), ws.tensor(wsb), Mat(mu * mat_of(b, d * d, 1))};
    sp.dim = dim;
    verify_pair(ws, sp);
    return sp;
  }

  StdPair nested_pair(const Word& w) const {
    Word head = Word::single(w.letters[0]);
    Word rest{std::vector<int>(w.letters.begin() + 1, w.letters.end())};
    const StdPair& pu = standard_pair(head);
    const StdPair& pv = standard_pair(rest);
    Word restbar = dual_word(rest), headbar = dual_word(head);
    StdPair sp;
    sp.R = compose(tensor(tensor(id(restbar), pu.R), id(rest)), pv.R);
    sp.R.cod = dual_word(w).tensor(w);
    sp.Rbar = compose(tensor(tensor(id(head), pv.Rbar), id(headbar)), pu.Rbar);
    sp.Rbar.cod = w.tensor(dual_word(w));
    sp.dim = pu.dim * pv.dim;
    return sp;
  }

  void verify_pair(const Word& w, const StdPair& sp) const {
    Word wb = dual_word(w);
    Morphism lhs1 = compose(tensor(id(w), adjoint(sp.R)),
                            tensor(sp.Rbar, id(w)));
    require(residual(lhs1.m, identity(carrier_dim(w))) < 1e-8,
            ErrorKind::CheckFailed,
            "standard_pair: first conjugate equation fails for " + w.str());
    Morphism lhs2 = compose(tensor(id(wb), adjoint(sp.Rbar)),
                            tensor(sp.R, id(wb)));
    require(residual(lhs2.m, identity(carrier_dim(wb))) < 1e-8,
            ErrorKind::CheckFailed,
            "standard_pair: second conjugate equation fails for " + w.str());
  }

  std::variant<GroupBackend, Suq2Backend> m_backend;
  mutable std::map<std::pair<Word, Word>, HomBasis> m_hom;
  mutable std::map<Word, StdPair> m_pairs;
};

/// Convenience constructors.
inline CategoryEngine group_engine(GroupTable table,
                                   std::optional<GroupIrreps> irreps = {},
                                   std::uint64_t seed = 7) {
  GroupIrreps ir = irreps ? std::move(*irreps) : compute_irreps(table, seed);
  return CategoryEngine(GroupBackend(std::move(table), std::move(ir)));
}

inline CategoryEngine suq2_engine(double q, int two_cutoff) {
  return CategoryEngine(Suq2Backend(q, two_cutoff));
}

// ---------------------------------------------------------------------------
// Fusion oracles (independent of the intertwiner solver)
// ---------------------------------------------------------------------------

/// N_{ij}^k for either backend: characters for groups, Clebsch-Gordan
/// interval counting for SU_q(2).
inline int fusion_oracle(const CategoryEngine& e, int i, int j, int k) {
  if (e.is_group())
    return fusion_count(e.group().irreps(), e.group().table(), i, j, k);
  // Labels are twice the spin: k appears in i⊗j iff |i-j| <= k <= i+j with
  // matching parity.
  if (k < std::abs(i - j) || k > i + j) return 0;
  return ((i + j - k) % 2 == 0) ? 1 : 0;
}

/// dim Hom(a⊗b, c⊗d) counted through the fusion oracle.  For SU_q(2) the sum
/// ranges over all intermediate spins, not only the truncated label window.
inline int hom_dim_oracle(const CategoryEngine& e, int a, int b, int c, int d) {
  int total = 0;
  if (e.is_group()) {
    for (int u = 0; u < e.simple_count(); ++u)
      total += fusion_oracle(e, a, b, u) * fusion_oracle(e, c, d, u);
    return total;
  }
  int lo = std::max(std::abs(a - b), std::abs(c - d));
  int hi = std::min(a + b, c + d);
  for (int u = lo; u <= hi; ++u)
    total += fusion_oracle(e, a, b, u) * fusion_oracle(e, c, d, u);
  return total;
}

}  // namespace annulus
