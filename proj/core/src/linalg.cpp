#include "mandala/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace mandala {

namespace {

void check_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    raise(errc::dim_mismatch, std::string(what) + ": matrix is " +
                                  std::to_string(m.rows()) + "x" +
                                  std::to_string(m.cols()));
  }
  if (m.rows() == 0) {
    raise(errc::invalid_argument, std::string(what) + ": empty matrix");
  }
}

}  // namespace

SymMatrix::SymMatrix(Matrix entries, double sym_tol) {
  check_square(entries, "SymMatrix");
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  const int n = static_cast<int>(entries.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(entries(i, j) - entries(j, i)) > sym_tol * scale) {
        raise(errc::not_symmetric,
              "entry (" + std::to_string(i) + "," + std::to_string(j) +
                  ") differs from its transpose by " +
                  std::to_string(std::abs(entries(i, j) - entries(j, i))));
      }
    }
  }
  entries_ = std::move(entries);
}

SymMatrix SymMatrix::symmetrized(const Matrix& m) {
  check_square(m, "SymMatrix::symmetrized");
  SymMatrix out;
  const int n = static_cast<int>(m.rows());
  out.entries_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.entries_(i, i) = m(i, i);
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      out.entries_(i, j) = v;
      out.entries_(j, i) = v;
    }
  }
  return out;
}

SpdMatrix::SpdMatrix(SymMatrix base)
    : base_(std::move(base)), cache_(std::make_shared<EigenCache>()) {
  Eigen::LLT<Matrix> llt(base_.mat());
  if (llt.info() != Eigen::Success) {
    raise(errc::still_not_pd, "Cholesky factorization failed; matrix is not "
                              "positive definite");
  }
}

SpdMatrix SpdMatrix::from_eigen_basis(Matrix vectors, Vector values) {
  if (vectors.rows() != vectors.cols() || vectors.rows() != values.size()) {
    raise(errc::dim_mismatch, "eigen basis shape mismatch");
  }
  const int n = static_cast<int>(values.size());
  if ((values.array() <= 0.0).any()) {
    raise(errc::still_not_pd, "nonpositive eigenvalue in SPD assembly");
  }

  // Stable descending order, ties broken by original index.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  Vector sorted_values(n);
  Matrix sorted_vectors(n, n);
  for (int i = 0; i < n; ++i) {
    sorted_values[i] = values[order[i]];
    sorted_vectors.col(i) = vectors.col(order[i]);
  }

  Matrix assembled = sorted_vectors * sorted_values.asDiagonal() *
                     sorted_vectors.transpose();
  auto cache = std::make_shared<EigenCache>();
  cache->decomp = EigenDecomposition{std::move(sorted_values),
                                     std::move(sorted_vectors)};
  cache->ready.store(true, std::memory_order_release);
  return SpdMatrix(SymMatrix::symmetrized(assembled), std::move(cache));
}

SpdMatrix SpdMatrix::identity(int n) {
  return from_eigen_basis(Matrix::Identity(n, n), Vector::Ones(n));
}

const EigenDecomposition& SpdMatrix::eigen() const {
  EigenCache& cache = *cache_;
  if (!cache.ready.load(std::memory_order_acquire)) {
    std::lock_guard<std::mutex> lock(cache.mu);
    if (!cache.ready.load(std::memory_order_relaxed)) {
      EigenDecomposition decomp = sym_eigen(base_);
      if (decomp.values[decomp.values.size() - 1] <= 0.0) {
        raise(errc::still_not_pd,
              "smallest eigenvalue " +
                  std::to_string(decomp.values[decomp.values.size() - 1]) +
                  " is not positive");
      }
      cache.decomp = std::move(decomp);
      cache.ready.store(true, std::memory_order_release);
    }
  }
  return cache.decomp;
}

double SpdMatrix::log_det() const {
  return eigen().values.array().log().sum();
}

EigenDecomposition sym_eigen(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.mat());
  if (solver.info() != Eigen::Success) {
    raise(errc::non_convergence, "symmetric eigensolver did not converge");
  }
  const int n = m.dim();

  // Eigen returns ascending order; the contract is descending.
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.values[i] = solver.eigenvalues()[n - 1 - i];
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }

  // Certification: orthonormal basis and faithful reconstruction.
  const double scale = out.values.cwiseAbs().maxCoeff();
  const double ortho_err =
      (out.vectors.transpose() * out.vectors - Matrix::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  if (ortho_err > 1e-10) {
    raise(errc::non_convergence,
          "eigenvector basis lost orthonormality: " + std::to_string(ortho_err));
  }
  const double rec_err =
      (out.vectors * out.values.asDiagonal() * out.vectors.transpose() -
       m.mat())
          .cwiseAbs()
          .maxCoeff();
  if (rec_err > kSpdReconstructTol * scale) {
    raise(errc::non_convergence,
          "eigendecomposition reconstruction error " + std::to_string(rec_err));
  }
  return out;
}

SpdMatrix spd_inverse(const SpdMatrix& m, double cond_floor) {
  const EigenDecomposition& ed = m.eigen();
  const double lambda_max = ed.values[0];
  const double lambda_min = ed.values[ed.values.size() - 1];
  if (lambda_min / lambda_max < cond_floor) {
    raise(errc::ill_conditioned,
          "condition ratio " + std::to_string(lambda_min / lambda_max) +
              " below floor; regularize first");
  }
  return SpdMatrix::from_eigen_basis(ed.vectors, ed.values.cwiseInverse());
}

SpdMatrix spd_power(const SpdMatrix& m, double s) {
  if (s == 1.0) return m;
  if (s == 0.0) return SpdMatrix::identity(m.dim());
  const EigenDecomposition& ed = m.eigen();
  Vector powered = ed.values.array().pow(s);
  return SpdMatrix::from_eigen_basis(ed.vectors, std::move(powered));
}

SymMatrix spd_log(const SpdMatrix& m) {
  const EigenDecomposition& ed = m.eigen();
  Vector logged = ed.values.array().log();
  return SymMatrix::symmetrized(ed.vectors * logged.asDiagonal() *
                                ed.vectors.transpose());
}

GeneralSquareMatrix log_spd_product(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) {
    raise(errc::dim_mismatch, "log_spd_product: " + std::to_string(a.dim()) +
                                  " vs " + std::to_string(b.dim()));
  }
  const EigenDecomposition& ea = a.eigen();
  Vector sqrt_values = ea.values.cwiseSqrt();
  Matrix a_half =
      ea.vectors * sqrt_values.asDiagonal() * ea.vectors.transpose();
  Matrix a_half_inv = ea.vectors * sqrt_values.cwiseInverse().asDiagonal() *
                      ea.vectors.transpose();

  // a*b = a^{1/2} (a^{1/2} b a^{1/2}) a^{-1/2}, so the log transports the
  // same way.
  SpdMatrix inner(SymMatrix::symmetrized(a_half * b.mat() * a_half));
  SymMatrix inner_log = spd_log(inner);
  return a_half * inner_log.mat() * a_half_inv;
}

SpdMatrix regularize(const SymMatrix& m, double ridge) {
  if (ridge < 0.0) {
    raise(errc::invalid_argument, "ridge must be nonnegative");
  }
  Matrix out = m.mat();
  if (ridge > 0.0) {
    const double mean_diag = out.diagonal().mean();
    out.diagonal().array() += ridge * mean_diag;
  }
  try {
    return SpdMatrix(SymMatrix(std::move(out), kDefaultSymTol));
  } catch (const Error& e) {
    if (e.code() == errc::still_not_pd) {
      raise(errc::still_not_pd,
            "matrix remains non positive definite after ridge " +
                std::to_string(ridge));
    }
    throw;
  }
}

}  // namespace mandala
