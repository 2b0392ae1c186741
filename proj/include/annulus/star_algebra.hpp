#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "annulus/linalg.hpp"

/// Finite-dimensional *-algebras presented by structure constants, their
/// trace forms, and Wedderburn block decomposition by spectral splitting of a
/// random self-adjoint central element.
namespace annulus {

/// Associative *-algebra with a fixed basis e_0..e_{D-1}:
///   e_a · e_b = sum_c lmul[a](c,b) e_c,
///   coords(x*) = invol · conj(coords(x)),
///   tau(x) = trace_vec . coords(x).
struct StarAlgebra {
  int dim = 0;
  std::vector<Mat> lmul;  ///< lmul[a](c,b) = structure constant C^c_{ab}
  Mat invol;              ///< D x D, anti-linear via conjugation of coords
  Vec trace_vec;          ///< tau on basis elements

  Vec product(const Vec& x, const Vec& y) const {
    Vec out = Vec::Zero(dim);
    for (int a = 0; a < dim; ++a)
      if (x(a) != cx(0, 0)) out += x(a) * (lmul[a] * y);
    return out;
  }
  Vec star(const Vec& x) const { return invol * x.conjugate(); }
  cx tau(const Vec& x) const { return (trace_vec.transpose() * x)(0); }
  Mat left_mult(const Vec& x) const {
    Mat out = Mat::Zero(dim, dim);
    for (int a = 0; a < dim; ++a)
      if (x(a) != cx(0, 0)) out += x(a) * lmul[a];
    return out;
  }
  Mat right_mult(const Vec& y) const {
    Mat out(dim, dim);
    for (int a = 0; a < dim; ++a) out.col(a) = lmul[a] * y;
    return out;
  }
  Vec basis(int a) const {
    Vec v = Vec::Zero(dim);
    v(a) = 1.0;
    return v;
  }
};

/// Solves for the two-sided unit; throws NotAnAlgebra when none exists.
inline Vec algebra_unit(const StarAlgebra& alg, double tol = kExactTol) {
  const int d = alg.dim;
  Mat lhs(2 * d * d, d);
  Vec rhs(2 * d * d);
  for (int a = 0; a < d; ++a) {
    lhs.col(a).head(d * d) = vec_of(alg.lmul[a]);
    Mat rm(d, d);
    for (int b = 0; b < d; ++b) rm.col(b) = alg.lmul[b].col(a);
    lhs.col(a).tail(d * d) = vec_of(rm);
  }
  Vec id = vec_of(identity(d));
  rhs.head(d * d) = id;
  rhs.tail(d * d) = id;
  Vec u = lhs.colPivHouseholderQr().solve(rhs);
  double res = (lhs * u - rhs).norm() / std::max(1.0, rhs.norm());
  require(res < tol, ErrorKind::NotAnAlgebra,
          "algebra_unit: no two-sided unit (residual " + std::to_string(res) +
              ")");
  return u;
}

/// Max associativity residual.  Checks every basis triple when the dimension
/// is small enough added to a handful of random-vector homomorphism probes;
/// larger algebras are probed on sampled triples only.
inline double associativity_residual(const StarAlgebra& alg, Rng& rng,
                                     int full_limit = 40, int samples = 256) {
  const int d = alg.dim;
  double worst = 0.0;
  auto triple = [&](int a, int b, int c) {
    Vec ab = alg.lmul[a].col(b);
    Vec bc = alg.lmul[b].col(c);
    Vec left = Vec::Zero(d), right = alg.lmul[a] * bc;
    for (int k = 0; k < d; ++k)
      if (ab(k) != cx(0, 0)) left += ab(k) * alg.lmul[k].col(c);
    double scale = std::max({1.0, left.norm(), right.norm()});
    worst = std::max(worst, (left - right).norm() / scale);
  };
  if (d <= full_limit) {
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c) triple(a, b, c);
  } else {
    for (int s = 0; s < samples; ++s) {
      int a = static_cast<int>(std::floor((rng.uniform(0, 1)) * d)) % d;
      int b = static_cast<int>(std::floor((rng.uniform(0, 1)) * d)) % d;
      int c = static_cast<int>(std::floor((rng.uniform(0, 1)) * d)) % d;
      triple(std::abs(a), std::abs(b), std::abs(c));
    }
    for (int s = 0; s < 8; ++s) {
      Vec x = rng.complex_matrix(d, 1), y = rng.complex_matrix(d, 1),
          z = rng.complex_matrix(d, 1);
      Vec left = alg.product(alg.product(x, y), z);
      Vec right = alg.product(x, alg.product(y, z));
      worst = std::max(worst,
                       (left - right).norm() /
                           std::max({1.0, left.norm(), right.norm()}));
    }
  }
  return worst;
}

/// Max residual of (xy)* = y* x* and x** = x over basis pairs.
inline double involution_residual(const StarAlgebra& alg) {
  const int d = alg.dim;
  double worst = 0.0;
  Mat invol_sq = alg.invol * alg.invol.conjugate();
  worst = std::max(worst, residual(invol_sq, identity(d)));
  for (int a = 0; a < d; ++a) {
    Vec sa = alg.invol.col(a);
    for (int b = 0; b < d; ++b) {
      Vec ab = alg.lmul[a].col(b);
      Vec lhs = alg.star(ab);
      Vec rhs = alg.product(alg.invol.col(b), sa);
      worst = std::max(
          worst, (lhs - rhs).norm() / std::max({1.0, lhs.norm(), rhs.norm()}));
    }
  }
  return worst;
}

/// Max residual of tau(xy) = tau(yx) over basis pairs.
inline double trace_residual(const StarAlgebra& alg) {
  const int d = alg.dim;
  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      cx lhs = (alg.trace_vec.transpose() * alg.lmul[a].col(b))(0);
      cx rhs = (alg.trace_vec.transpose() * alg.lmul[b].col(a))(0);
      worst = std::max(worst, std::abs(lhs - rhs) /
                                  std::max({1.0, std::abs(lhs), std::abs(rhs)}));
    }
  return worst;
}

/// Gram matrix G_ab = tau(e_a* e_b) of the trace pairing.
inline Mat gram_matrix(const StarAlgebra& alg) {
  const int d = alg.dim;
  Mat g(d, d);
  for (int a = 0; a < d; ++a) {
    Mat l = alg.left_mult(alg.invol.col(a));
    g.row(a) = (alg.trace_vec.transpose() * l);
  }
  return g;
}

struct GramReport {
  bool positive = false;
  double min_eig = 0.0;
  double hermiticity = 0.0;
};

/// Checks positive definiteness of the trace-pairing Gram matrix.
inline GramReport gram_positivity(const StarAlgebra& alg,
                                  double tol = kExactTol) {
  Mat g = gram_matrix(alg);
  GramReport rep;
  rep.hermiticity = residual(g, dagger(g));
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + dagger(g)));
  rep.min_eig = es.eigenvalues().minCoeff();
  rep.positive = rep.hermiticity < tol && rep.min_eig > tol;
  return rep;
}

struct Block {
  int dim = 0;         ///< matrix size n_b of the Wedderburn factor M_{n_b}
  Vec idempotent;      ///< coordinates of the minimal central projection
};

struct BlockDecomposition {
  std::vector<Block> blocks;
  double residual = 0.0;  ///< worst residual across all verification stages
  std::vector<int> dims() const {
    std::vector<int> d;
    d.reserve(blocks.size());
    for (const auto& b : blocks) d.push_back(b.dim);
    return d;
  }
  std::vector<int> dims_sorted() const {
    auto d = dims();
    std::sort(d.begin(), d.end());
    return d;
  }
};

namespace detail {

inline BlockDecomposition decompose_once(const StarAlgebra& alg,
                                         std::uint64_t seed, double tol) {
  const int d = alg.dim;
  Rng rng(seed);

  double assoc = associativity_residual(alg, rng);
  require(assoc < tol, ErrorKind::NotAnAlgebra,
          "decompose: associativity residual " + std::to_string(assoc));
  double inv_res = involution_residual(alg);
  require(inv_res < tol, ErrorKind::Validation,
          "decompose: involution residual " + std::to_string(inv_res));

  Vec unit = algebra_unit(alg, std::max(tol, 1e-8));
  Mat gram = gram_matrix(alg);
  HermSqrt gs = hermitian_sqrt(gram);  // throws NonSemisimple if degenerate

  // Center: joint kernel of left-minus-right multiplications.
  std::vector<Mat> cons;
  cons.reserve(d);
  for (int a = 0; a < d; ++a) {
    Mat rm(d, d);
    for (int b = 0; b < d; ++b) rm.col(b) = alg.lmul[b].col(a);
    cons.push_back(alg.lmul[a] - rm);
  }
  Mat center = joint_kernel(cons, d);
  require(center.cols() >= 1, ErrorKind::NonSemisimple,
          "decompose: empty center");

  // Random self-adjoint central element.
  Vec c = Vec::Zero(d);
  for (Eigen::Index k = 0; k < center.cols(); ++k)
    c += rng.complex_uniform() * center.col(k);
  Vec z = c + alg.star(c);

  // Left multiplication by z is self-adjoint for the Gram inner product;
  // hermitize and split the spectrum.
  Mat lz = alg.left_mult(z);
  Mat herm = gs.half * lz * gs.inv_half;
  double herm_res = residual(herm, dagger(herm));
  require(herm_res < std::max(tol, 1e-7), ErrorKind::Validation,
          "decompose: central element not self-adjoint under trace form, "
          "residual " + std::to_string(herm_res));
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (herm + dagger(herm)));
  RVec ev = es.eigenvalues();
  double spread = ev(d - 1) - ev(0);
  double gap_cut = 1e-6 * std::max(1.0, spread);

  std::vector<std::pair<int, int>> clusters;  // [begin, end) in eigen order
  int begin = 0;
  for (int i = 1; i <= d; ++i) {
    if (i == d || ev(i) - ev(i - 1) > gap_cut) {
      clusters.emplace_back(begin, i);
      begin = i;
    }
  }

  BlockDecomposition out;
  double worst = std::max({assoc, inv_res, gs.min_eig > 0 ? 0.0 : 1.0});
  Vec sum = Vec::Zero(d);
  for (auto [lo, hi] : clusters) {
    Mat pr = Mat::Zero(d, d);
    for (int i = lo; i < hi; ++i)
      pr += es.eigenvectors().col(i) * dagger(es.eigenvectors().col(i));
    Vec e = gs.inv_half * pr * gs.half * unit;
    // Residual checks: idempotent, self-adjoint, central.
    worst = std::max(worst, (alg.product(e, e) - e).norm() /
                                std::max(1.0, e.norm()));
    worst = std::max(worst,
                     (alg.star(e) - e).norm() / std::max(1.0, e.norm()));
    worst = std::max(worst, residual(alg.left_mult(e), alg.right_mult(e)));
    double tr = alg.left_mult(e).trace().real();
    int n = static_cast<int>(std::llround(std::sqrt(std::max(0.0, tr))));
    require(std::abs(tr - double(n) * n) < 1e-6 * std::max(1.0, tr),
            ErrorKind::NonSemisimple,
            "decompose: block trace " + std::to_string(tr) +
                " is not a perfect square");
    require(n >= 1, ErrorKind::NonSemisimple, "decompose: empty block");
    sum += e;
    out.blocks.push_back({n, e});
  }
  worst = std::max(worst, (sum - unit).norm() / std::max(1.0, unit.norm()));
  // Pairwise orthogonality.
  for (std::size_t i = 0; i < out.blocks.size(); ++i)
    for (std::size_t j = i + 1; j < out.blocks.size(); ++j) {
      Vec p = alg.product(out.blocks[i].idempotent, out.blocks[j].idempotent);
      worst = std::max(worst, p.norm());
    }
  int total = 0;
  for (const auto& b : out.blocks) total += b.dim * b.dim;
  require(total == d, ErrorKind::NonSemisimple,
          "decompose: block dims " + std::to_string(total) +
              " do not sum to algebra dim " + std::to_string(d));
  out.residual = worst;
  require(worst < std::max(tol, kSpectralTol), ErrorKind::CheckFailed,
          "decompose: verification residual " + std::to_string(worst));
  return out;
}

}  // namespace detail

/// Wedderburn decomposition of a finite-dimensional *-algebra with positive
/// definite trace form.  Runs twice with independent seeds and requires the
/// block-dimension multiset to agree, making the result seed-independent.
inline BlockDecomposition decompose_star_algebra(const StarAlgebra& alg,
                                                 std::uint64_t seed = 1,
                                                 double tol = kExactTol) {
  BlockDecomposition first = detail::decompose_once(alg, seed, tol);
  BlockDecomposition second = detail::decompose_once(alg, seed + 0x9e3779b9u, tol);
  require(first.dims_sorted() == second.dims_sorted(), ErrorKind::CheckFailed,
          "decompose: block multiset depends on seed");
  return first;
}

}  // namespace annulus
