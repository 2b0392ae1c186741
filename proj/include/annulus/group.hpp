#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "annulus/linalg.hpp"
#include "annulus/star_algebra.hpp"

/// Finite groups given by multiplication tables: validation, conjugacy data,
/// unitary irreducible representations (ingested or computed from the regular
/// representation), characters and the character-based fusion oracle.
namespace annulus {

struct GroupTable {
  int order = 0;
  std::vector<std::vector<int>> mul;  ///< mul[a][b] = index of a*b
  std::vector<int> inv;
  int id = 0;  ///< index of the identity element

  int product(int a, int b) const { return mul[a][b]; }
  int conj(int g, int x) const {  // g x g^{-1}
    return mul[mul[g][x]][inv[g]];
  }
};

/// Validates the table as a group: square shape, in-range entries,
/// cancellation, identity, inverses, associativity.  Error messages carry the
/// offending cell.
inline GroupTable validate_group(const std::vector<std::vector<int>>& mul) {
  GroupTable g;
  g.order = static_cast<int>(mul.size());
  require(g.order > 0, ErrorKind::Validation, "group: empty table");
  const int n = g.order;
  for (int a = 0; a < n; ++a) {
    require(static_cast<int>(mul[a].size()) == n, ErrorKind::Validation,
            "group: row " + std::to_string(a) + " has wrong length");
    for (int b = 0; b < n; ++b)
      require(mul[a][b] >= 0 && mul[a][b] < n, ErrorKind::Validation,
              "group: entry (" + std::to_string(a) + "," + std::to_string(b) +
                  ") out of range");
  }
  // Rows and columns are permutations (cancellation laws).
  for (int a = 0; a < n; ++a) {
    std::vector<bool> seen_row(n, false), seen_col(n, false);
    for (int b = 0; b < n; ++b) {
      require(!seen_row[mul[a][b]], ErrorKind::Validation,
              "group: row " + std::to_string(a) + " repeats at column " +
                  std::to_string(b));
      require(!seen_col[mul[b][a]], ErrorKind::Validation,
              "group: column " + std::to_string(a) + " repeats at row " +
                  std::to_string(b));
      seen_row[mul[a][b]] = true;
      seen_col[mul[b][a]] = true;
    }
  }
  // Identity.
  g.id = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      ok = (mul[e][a] == a) && (mul[a][e] == a);
    if (ok) {
      g.id = e;
      break;
    }
  }
  require(g.id >= 0, ErrorKind::Validation, "group: no identity element");
  // Inverses.
  g.inv.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (mul[a][b] == g.id && mul[b][a] == g.id) {
        g.inv[a] = b;
        break;
      }
    require(g.inv[a] >= 0, ErrorKind::Validation,
            "group: element " + std::to_string(a) + " has no inverse");
  }
  // Associativity.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        require(mul[mul[a][b]][c] == mul[a][mul[b][c]], ErrorKind::Validation,
                "group: associativity fails at (" + std::to_string(a) + "," +
                    std::to_string(b) + "," + std::to_string(c) + ")");
  g.mul = mul;
  return g;
}

/// Closure of a set of element indices; validates it forms a subgroup and
/// returns the sorted element list.
inline std::vector<int> subgroup_closure(const GroupTable& g,
                                         std::vector<int> gens) {
  std::vector<bool> in(g.order, false);
  in[g.id] = true;
  for (int x : gens) {
    require(x >= 0 && x < g.order, ErrorKind::Validation,
            "subgroup: generator index " + std::to_string(x) + " out of range");
    in[x] = true;
  }
  bool grew = true;
  while (grew) {
    grew = false;
    for (int a = 0; a < g.order; ++a)
      if (in[a])
        for (int b = 0; b < g.order; ++b)
          if (in[b]) {
            int p = g.mul[a][b];
            if (!in[p]) {
              in[p] = true;
              grew = true;
            }
          }
  }
  std::vector<int> out;
  for (int a = 0; a < g.order; ++a)
    if (in[a]) out.push_back(a);
  return out;
}

/// Subgroup as a stand-alone group table plus the embedding into the parent.
struct Subgroup {
  GroupTable table;
  std::vector<int> elements;  ///< subgroup index -> parent index
};

inline Subgroup subgroup_table(const GroupTable& g,
                               const std::vector<int>& elements) {
  std::map<int, int> pos;
  for (std::size_t i = 0; i < elements.size(); ++i)
    pos[elements[i]] = static_cast<int>(i);
  const int m = static_cast<int>(elements.size());
  std::vector<std::vector<int>> mul(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      int p = g.mul[elements[a]][elements[b]];
      auto it = pos.find(p);
      require(it != pos.end(), ErrorKind::Validation,
              "subgroup: element set not closed under multiplication");
      mul[a][b] = it->second;
    }
  return {validate_group(mul), elements};
}

struct ConjugacyClasses {
  std::vector<std::vector<int>> classes;  ///< classes[k] = member elements
  std::vector<int> class_of;              ///< element -> class index
  std::vector<int> representative;        ///< class -> first member
};

inline ConjugacyClasses conjugacy_classes(const GroupTable& g) {
  ConjugacyClasses cc;
  cc.class_of.assign(g.order, -1);
  for (int x = 0; x < g.order; ++x) {
    if (cc.class_of[x] >= 0) continue;
    int k = static_cast<int>(cc.classes.size());
    std::vector<int> members;
    for (int h = 0; h < g.order; ++h) {
      int y = g.conj(h, x);
      if (cc.class_of[y] < 0) {
        cc.class_of[y] = k;
        members.push_back(y);
      }
    }
    std::sort(members.begin(), members.end());
    cc.classes.push_back(members);
    cc.representative.push_back(members.front());
  }
  return cc;
}

inline std::vector<int> centralizer(const GroupTable& g, int x) {
  std::vector<int> out;
  for (int h = 0; h < g.order; ++h)
    if (g.mul[h][x] == g.mul[x][h]) out.push_back(h);
  return out;
}

/// Complete set of unitary irreducible representations.
struct GroupIrreps {
  std::vector<std::vector<Mat>> reps;  ///< reps[i][g]
  std::vector<int> dims;
  std::vector<Vec> characters;  ///< characters[i](g)
  std::vector<int> dual;        ///< label of the conjugate irrep

  int count() const { return static_cast<int>(reps.size()); }
};

namespace detail {

inline Vec character_of(const std::vector<Mat>& rep) {
  Vec chi(static_cast<Eigen::Index>(rep.size()));
  for (std::size_t g = 0; g < rep.size(); ++g) chi(g) = rep[g].trace();
  return chi;
}

inline void finish_irreps(GroupIrreps& ir, const GroupTable& g) {
  const int n = g.order;
  int sum = 0;
  for (std::size_t i = 0; i < ir.reps.size(); ++i) {
    ir.dims.push_back(static_cast<int>(ir.reps[i][0].rows()));
    ir.characters.push_back(character_of(ir.reps[i]));
    sum += ir.dims.back() * ir.dims.back();
  }
  require(sum == n, ErrorKind::Validation,
          "irreps: squared dimensions sum to " + std::to_string(sum) +
              ", expected group order " + std::to_string(n));
  // Duals by conjugate characters.
  ir.dual.assign(ir.count(), -1);
  for (int i = 0; i < ir.count(); ++i) {
    for (int j = 0; j < ir.count(); ++j)
      if ((ir.characters[i].conjugate() - ir.characters[j]).norm() < 1e-6) {
        ir.dual[i] = j;
        break;
      }
    require(ir.dual[i] >= 0, ErrorKind::Validation,
            "irreps: no conjugate partner for label " + std::to_string(i));
  }
}

}  // namespace detail

/// Validates user-provided unitary irreps: one matrix per group element,
/// homomorphism, unitarity, irreducibility, pairwise inequivalence,
/// completeness.  The trivial representation is moved to label 0; the rest
/// keep input order.
inline GroupIrreps ingest_irreps(const GroupTable& g,
                                 std::vector<std::vector<Mat>> reps,
                                 double tol = 1e-8) {
  const int n = g.order;
  int trivial = -1;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    require(static_cast<int>(reps[i].size()) == n, ErrorKind::Validation,
            "irrep " + std::to_string(i) + ": expected " + std::to_string(n) +
                " matrices");
    const int d = static_cast<int>(reps[i][0].rows());
    for (int a = 0; a < n; ++a) {
      require(reps[i][a].rows() == d && reps[i][a].cols() == d,
              ErrorKind::Validation,
              "irrep " + std::to_string(i) + ": matrix " + std::to_string(a) +
                  " has inconsistent shape");
      require(residual(reps[i][a] * dagger(reps[i][a]), identity(d)) < tol,
              ErrorKind::Validation,
              "irrep " + std::to_string(i) + ": matrix " + std::to_string(a) +
                  " is not unitary");
      for (int b = 0; b < n; ++b)
        require(residual(reps[i][a] * reps[i][b], reps[i][g.mul[a][b]]) < tol,
                ErrorKind::Validation,
                "irrep " + std::to_string(i) + ": homomorphism fails at (" +
                    std::to_string(a) + "," + std::to_string(b) + ")");
    }
    // Irreducibility: commutant of the rep is trivial.
    std::vector<Mat> cons;
    for (int a = 0; a < n; ++a)
      cons.push_back(intertwiner_constraint(reps[i][a], reps[i][a]));
    require(joint_kernel(cons, d * d).cols() == 1, ErrorKind::Validation,
            "irrep " + std::to_string(i) + ": reducible");
    if (d == 1) {
      bool is_trivial = true;
      for (int a = 0; a < n; ++a)
        if (std::abs(reps[i][a](0, 0) - cx(1, 0)) > tol) is_trivial = false;
      if (is_trivial) trivial = static_cast<int>(i);
    }
  }
  require(trivial >= 0, ErrorKind::Validation,
          "irreps: trivial representation missing");
  // Pairwise inequivalence via characters.
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i + 1; j < reps.size(); ++j)
      require((detail::character_of(reps[i]) - detail::character_of(reps[j]))
                      .norm() > 1e-6,
              ErrorKind::Validation,
              "irreps: labels " + std::to_string(i) + " and " +
                  std::to_string(j) + " are equivalent");
  if (trivial != 0) std::swap(reps[0], reps[static_cast<std::size_t>(trivial)]);
  GroupIrreps ir;
  ir.reps = std::move(reps);
  detail::finish_irreps(ir, g);
  return ir;
}

/// Computes a complete set of unitary irreps by decomposing the regular
/// representation with a random averaged commutant element.  Deterministic
/// for a fixed seed; irreps are ordered trivial-first, then by dimension and
/// rounded character.
inline GroupIrreps compute_irreps(const GroupTable& g, std::uint64_t seed = 7) {
  const int n = g.order;
  Rng rng(seed);
  std::vector<Mat> reg(n, Mat::Zero(n, n));
  for (int a = 0; a < n; ++a)
    for (int h = 0; h < n; ++h) reg[a](g.mul[a][h], h) = 1.0;

  Mat m0 = rng.complex_matrix(n, n);
  m0 = 0.5 * (m0 + dagger(m0));
  Mat avg = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) avg += reg[a] * m0 * dagger(reg[a]);
  avg /= double(n);

  Eigen::SelfAdjointEigenSolver<Mat> es(avg);
  RVec ev = es.eigenvalues();
  double gap_cut = 1e-8 * std::max(1.0, ev(n - 1) - ev(0));
  std::vector<std::pair<int, int>> spaces;
  int begin = 0;
  for (int i = 1; i <= n; ++i)
    if (i == n || ev(i) - ev(i - 1) > gap_cut) {
      spaces.emplace_back(begin, i);
      begin = i;
    }

  struct Piece {
    std::vector<Mat> rep;
    Vec chi;
  };
  std::vector<Piece> pieces;
  for (auto [lo, hi] : spaces) {
    Mat v = es.eigenvectors().middleCols(lo, hi - lo);
    Piece p;
    p.rep.reserve(n);
    for (int a = 0; a < n; ++a) p.rep.push_back(dagger(v) * reg[a] * v);
    // Invariance check: V V† commutes with the action.
    for (int a = 0; a < n; ++a)
      require(residual(reg[a] * v * dagger(v), v * dagger(v) * reg[a]) < 1e-8,
              ErrorKind::CheckFailed,
              "compute_irreps: eigenspace not invariant; retry with a "
              "different seed");
    p.chi = detail::character_of(p.rep);
    pieces.push_back(std::move(p));
  }
  // Group equal characters, keep one representative each.
  std::vector<Piece> reps_unique;
  for (auto& p : pieces) {
    bool found = false;
    for (auto& q : reps_unique)
      if ((p.chi - q.chi).norm() < 1e-6) {
        found = true;
        break;
      }
    if (!found) reps_unique.push_back(std::move(p));
  }
  // Deterministic order: trivial first, then (dim, rounded character).
  auto round6 = [](cx z) {
    return std::pair<long long, long long>(
        static_cast<long long>(std::llround(z.real() * 1e6)),
        static_cast<long long>(std::llround(z.imag() * 1e6)));
  };
  std::stable_sort(reps_unique.begin(), reps_unique.end(),
                   [&](const Piece& a, const Piece& b) {
                     bool ta = (a.chi - Vec::Ones(n)).norm() < 1e-6;
                     bool tb = (b.chi - Vec::Ones(n)).norm() < 1e-6;
                     if (ta != tb) return ta;
                     if (a.rep[0].rows() != b.rep[0].rows())
                       return a.rep[0].rows() < b.rep[0].rows();
                     for (int i = 0; i < n; ++i) {
                       auto ra = round6(a.chi(i)), rb = round6(b.chi(i));
                       if (ra != rb) return ra < rb;
                     }
                     return false;
                   });
  GroupIrreps ir;
  for (auto& p : reps_unique) ir.reps.push_back(std::move(p.rep));
  detail::finish_irreps(ir, g);
  return ir;
}

/// Character-based fusion oracle: N_{ij}^k as exact integers.  Independent of
/// the intertwiner solver.
inline int fusion_count(const GroupIrreps& ir, const GroupTable& g, int i,
                        int j, int k) {
  cx acc = 0.0;
  for (int a = 0; a < g.order; ++a)
    acc += ir.characters[i](a) * ir.characters[j](a) *
           std::conj(ir.characters[k](a));
  acc /= double(g.order);
  long long n = std::llround(acc.real());
  require(std::abs(acc - cx(double(n), 0.0)) < 1e-6, ErrorKind::CheckFailed,
          "fusion_count: non-integral multiplicity");
  return static_cast<int>(n);
}

/// Group *-algebra C[G] with tau(sum c_g g) = c_e; used as a decomposition
/// oracle fixture.
inline StarAlgebra group_algebra(const GroupTable& g) {
  StarAlgebra alg;
  alg.dim = g.order;
  alg.lmul.assign(g.order, Mat::Zero(g.order, g.order));
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b) alg.lmul[a](g.mul[a][b], b) = 1.0;
  alg.invol = Mat::Zero(g.order, g.order);
  for (int a = 0; a < g.order; ++a) alg.invol(g.inv[a], a) = 1.0;
  alg.trace_vec = Vec::Zero(g.order);
  alg.trace_vec(g.id) = 1.0;
  return alg;
}

/// Multiplicity of irrep i in the representation induced from a subgroup
/// character chi (Frobenius reciprocity, evaluated classically).
inline int induced_multiplicity(const GroupIrreps& ir, const Subgroup& h,
                                const Vec& chi_sub, int i) {
  cx acc = 0.0;
  for (std::size_t s = 0; s < h.elements.size(); ++s)
    acc += std::conj(chi_sub(static_cast<Eigen::Index>(s))) *
           ir.characters[i](h.elements[s]);
  acc /= double(h.elements.size());
  long long n = std::llround(acc.real());
  require(std::abs(acc - cx(double(n), 0.0)) < 1e-6, ErrorKind::CheckFailed,
          "induced_multiplicity: non-integral value");
  return static_cast<int>(n);
}

}  // namespace annulus
