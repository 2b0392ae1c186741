#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "annulus/common.hpp"

/// Dense linear-algebra primitives: Kronecker products, joint kernels,
/// rank-revealing range extraction, Hermitian square roots and phase
/// canonicalization.  Everything downstream builds on these.
namespace annulus {

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat dagger(const Mat& a) { return a.adjoint(); }

inline Mat identity(int n) { return Mat::Identity(n, n); }

/// Rotate a vector so its largest-modulus entry (lowest index among ties
/// within 1e-12 relative) becomes real positive.  Returns the zero vector
/// unchanged.
inline Vec canonical_phase(const Vec& v) {
  double best = 0.0;
  Eigen::Index arg = -1;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double m = std::abs(v(i));
    if (m > best * (1.0 + 1e-12)) {
      best = m;
      arg = i;
    }
  }
  if (arg < 0 || best == 0.0) return v;
  cx phase = v(arg) / best;
  return v / phase;
}

/// Orthonormal basis (columns) of the joint kernel of the stacked constraint
/// matrices.  All constraints must have the same column count.  The basis is
/// orthonormal for the standard inner product; the singular-value cutoff is
/// relative to the largest singular value.
inline Mat joint_kernel(const std::vector<Mat>& constraints, int cols,
                        double rank_cut = kRankCut) {
  Eigen::Index rows = 0;
  for (const auto& c : constraints) {
    require(c.cols() == cols, ErrorKind::ShapeMismatch,
            "joint_kernel: constraint column mismatch");
    rows += c.rows();
  }
  if (rows == 0) return identity(cols);
  Mat stacked(rows, cols);
  Eigen::Index at = 0;
  for (const auto& c : constraints) {
    stacked.middleRows(at, c.rows()) = c;
    at += c.rows();
  }
  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double cut = rank_cut * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  Mat null = svd.matrixV().rightCols(cols - rank);
  for (Eigen::Index j = 0; j < null.cols(); ++j)
    null.col(j) = canonical_phase(null.col(j));
  return null;
}

/// Orthonormal basis of the range of a (near-)projection matrix p, i.e. the
/// eigenvectors with eigenvalue close to 1.  p must be Hermitian within tol.
inline Mat projection_range(const Mat& p, double tol = 1e-8) {
  require(residual(p, dagger(p)) < tol, ErrorKind::Validation,
          "projection_range: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (p + dagger(p)));
  const auto& ev = es.eigenvalues();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    require(ev(i) < 0.5 - tol || ev(i) > 0.5 + tol, ErrorKind::Validation,
            "projection_range: eigenvalue far from {0,1}");
    if (ev(i) > 0.5) keep.push_back(i);
  }
  Mat out(p.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) =
        canonical_phase(es.eigenvectors().col(keep[j]));
  return out;
}

/// Numerical rank with a relative singular-value cutoff.
inline int rank_of(const Mat& m, double rank_cut = kRankCut) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  double cut = rank_cut * std::max(1.0, sv(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return rank;
}

/// Hermitian square root and inverse square root of a positive-definite
/// matrix; throws NonSemisimple when the smallest eigenvalue is not clearly
/// positive.
struct HermSqrt {
  Mat half;
  Mat inv_half;
  double min_eig;
};

inline HermSqrt hermitian_sqrt(const Mat& g, double tol = 1e-12) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + dagger(g)));
  const auto& ev = es.eigenvalues();
  double lo = ev.minCoeff(), hi = ev.maxCoeff();
  require(lo > tol * std::max(1.0, hi), ErrorKind::NonSemisimple,
          "hermitian_sqrt: matrix not positive definite (min eig " +
              std::to_string(lo) + ")");
  RVec sq = ev.array().sqrt();
  Mat v = es.eigenvectors();
  HermSqrt out;
  out.half = v * sq.asDiagonal() * dagger(v);
  out.inv_half = v * sq.cwiseInverse().asDiagonal() * dagger(v);
  out.min_eig = lo;
  return out;
}

/// vec(T) with column-major flattening matching Eigen's storage, plus the
/// inverse reshape.
inline Vec vec_of(const Mat& t) {
  return Eigen::Map<const Vec>(t.data(), t.size());
}

inline Mat mat_of(const Vec& v, int rows, int cols) {
  require(v.size() == static_cast<Eigen::Index>(rows) * cols,
          ErrorKind::ShapeMismatch, "mat_of: size mismatch");
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

/// Constraint matrix expressing B·T - T·A = 0 on vec(T), T: dom -> cod,
/// A: dom -> dom, B: cod -> cod.  vec is column-major, so
/// vec(B T) = (I ⊗ B) vec(T) and vec(T A) = (Aᵀ ⊗ I) vec(T).
inline Mat intertwiner_constraint(const Mat& a, const Mat& b) {
  int dom = static_cast<int>(a.rows());
  int cod = static_cast<int>(b.rows());
  return kron(identity(dom), b) - kron(a.transpose(), identity(cod));
}

}  // namespace annulus
