#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <memory>
#include <mutex>

#include "mandala/errors.hpp"

namespace mandala {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Square real matrix with no structural guarantees. Distance matrices are
/// generally asymmetric, so they live here rather than in SymMatrix.
using GeneralSquareMatrix = Eigen::MatrixXd;

inline constexpr double kDefaultSymTol = 1e-9;
inline constexpr double kSpdReconstructTol = 1e-10;
inline constexpr double kDefaultCondFloor = 1e-12;

/// Eigendecomposition of a symmetric matrix. Eigenvalues are sorted
/// descending; `vectors` columns follow the same order and are orthonormal.
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
};

/// Dense symmetric matrix. Construction validates symmetry:
/// |m(i,j) - m(j,i)| <= sym_tol * max(1, max|entry|).
class SymMatrix {
 public:
  explicit SymMatrix(Matrix entries, double sym_tol = kDefaultSymTol);

  /// Builds (m + m^T)/2 without a symmetry check. The result is exactly
  /// symmetric entrywise.
  static SymMatrix symmetrized(const Matrix& m);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& mat() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

 private:
  SymMatrix() = default;
  Matrix entries_;
};

/// Symmetric positive-definite matrix. Positive definiteness is certified by
/// Cholesky at construction; the eigendecomposition is computed on first use
/// and cached with single-assignment semantics, so concurrent readers are
/// safe. Copies share the cache.
class SpdMatrix {
 public:
  explicit SpdMatrix(SymMatrix base);

  /// Assembles V diag(values) V^T from an existing orthonormal basis.
  /// All values must be > 0. Used by the matrix-function operations so the
  /// result carries its decomposition without a second solve.
  static SpdMatrix from_eigen_basis(Matrix vectors, Vector values);

  static SpdMatrix identity(int n);

  int dim() const { return base_.dim(); }
  const SymMatrix& sym() const { return base_; }
  const Matrix& mat() const { return base_.mat(); }

  /// Certified eigendecomposition (descending eigenvalues, orthonormal
  /// vectors, reconstruction verified). Throws NonConvergence or StillNotPd.
  const EigenDecomposition& eigen() const;

  /// ln det, as the sum of eigenvalue logs.
  double log_det() const;

 private:
  struct EigenCache {
    std::mutex mu;
    std::atomic<bool> ready{false};
    EigenDecomposition decomp;
  };

  SpdMatrix(SymMatrix base, std::shared_ptr<EigenCache> cache)
      : base_(std::move(base)), cache_(std::move(cache)) {}

  SymMatrix base_;
  std::shared_ptr<EigenCache> cache_;
};

/// Eigendecomposition of a symmetric matrix (not necessarily definite).
/// Eigenvalues descending, ties kept in solver order; vectors orthonormal.
/// The decomposition is verified: V^T V = I and V diag(l) V^T = m within
/// kSpdReconstructTol scaled by the spectral radius.
EigenDecomposition sym_eigen(const SymMatrix& m);

/// Inverse through the eigenbasis. Throws IllConditioned when
/// lambda_min/lambda_max < cond_floor; callers wanting to proceed anyway must
/// regularize first.
SpdMatrix spd_inverse(const SpdMatrix& m, double cond_floor = kDefaultCondFloor);

/// Fractional (or negative) matrix power: lambda -> lambda^s in the same
/// eigenbasis. s = 0 and s = 1 short-circuit to the exact identity / input.
SpdMatrix spd_power(const SpdMatrix& m, double s);

/// Principal logarithm: lambda -> ln lambda. The result is symmetric but in
/// general indefinite.
SymMatrix spd_log(const SpdMatrix& m);

/// Principal logarithm of the (non-symmetric) product a*b of two SPD
/// matrices, computed as a^{1/2} ln(a^{1/2} b a^{1/2}) a^{-1/2}. The product
/// is similar to an SPD matrix, so the log is real. tr of the result equals
/// tr(spd_log(a)) + tr(spd_log(b)).
GeneralSquareMatrix log_spd_product(const SpdMatrix& a, const SpdMatrix& b);

/// m + ridge * meanDiag * I, where meanDiag is the mean diagonal entry.
/// Throws StillNotPd when the result still fails the SPD certificate (e.g.
/// the zero matrix, whose meanDiag is 0).
SpdMatrix regularize(const SymMatrix& m, double ridge);

}  // namespace mandala
