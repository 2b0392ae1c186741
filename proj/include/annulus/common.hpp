#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

/// Common aliases, error type, tolerances and small utilities shared by all
/// annulus modules.
namespace annulus {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Default tolerances.  Exact algebraic identities are checked against
/// kExactTol, anything that passes through an eigen/singular-value solver
/// against kSpectralTol.  Rank decisions use kRankCut (relative).
inline constexpr double kExactTol = 1e-9;
inline constexpr double kSpectralTol = 1e-7;
inline constexpr double kRankCut = 1e-10;

/// Error kinds mirror the failure modes the library can diagnose.
enum class ErrorKind {
  Validation,       ///< malformed input (bad table, non-group, bad JSON, ...)
  ShapeMismatch,    ///< morphism composed against the wrong carrier
  BackendMismatch,  ///< operation applied to the wrong backend kind
  NotAnAlgebra,     ///< associativity/unit solve failed
  NonSemisimple,    ///< trace form degenerate / decomposition impossible
  TruncationEscape, ///< product support escapes a finite truncation window
  CheckFailed,      ///< a verification stage exceeded its tolerance
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), m_kind(kind) {}
  ErrorKind kind() const { return m_kind; }

private:
  ErrorKind m_kind;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

/// Frobenius-norm residual of (a - b), normalized by max(1, |a|, |b|).
inline double residual(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorKind::ShapeMismatch,
         "residual: shape mismatch " + std::to_string(a.rows()) + "x" +
             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
             "x" + std::to_string(b.cols()));
  double na = a.norm(), nb = b.norm();
  return (a - b).norm() / std::max({1.0, na, nb});
}

/// Deterministic 64-bit FNV-1a hash, used for input digests in reports.
inline std::uint64_t fnv1a64(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes.data(), bytes.size());
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

/// Seeded RNG wrapper; every stochastic step in the library draws from one of
/// these so runs are reproducible.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : m_gen(seed) {}
  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(m_gen);
  }
  cx complex_uniform() { return {uniform(), uniform()}; }
  Mat complex_matrix(int r, int c) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = complex_uniform();
    return m;
  }

private:
  std::mt19937_64 m_gen;
};

/// Number of worker threads: min(hardware, ANNULUS_THREADS if set).
unsigned thread_budget();

}  // namespace annulus

#include <cstdlib>
#include <thread>

namespace annulus {
inline unsigned thread_budget() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ANNULUS_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && static_cast<unsigned>(v) < hw) return static_cast<unsigned>(v);
    if (v >= 1) return static_cast<unsigned>(v) > hw ? hw : static_cast<unsigned>(v);
  }
  return hw;
}
}  // namespace annulus
