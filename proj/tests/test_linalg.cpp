#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "mandala/linalg.hpp"
#include "mandala/synthetic.hpp"

using namespace mandala;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

TEST(SymMatrix, RejectsAsymmetry) {
  Matrix m(2, 2);
  m << 1.0, 2.0, 3.0, 1.0;
  EXPECT_THROW(SymMatrix{m}, Error);
  try {
    SymMatrix bad{m};
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::not_symmetric);
  }
}

TEST(SymMatrix, SymmetrizedIsExact) {
  Matrix m(2, 2);
  m << 1.0, 2.0, 3.0, 1.0;
  SymMatrix s = SymMatrix::symmetrized(m);
  EXPECT_EQ(s(0, 1), s(1, 0));
  EXPECT_DOUBLE_EQ(s(0, 1), 2.5);
}

TEST(SymEigen, Identity3x3) {
  EigenDecomposition ed = sym_eigen(SymMatrix(Matrix::Identity(3, 3)));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(ed.values[i], 1.0, 1e-12);
  // Any orthonormal basis is fine; verify through reconstruction.
  Matrix rec = ed.vectors * ed.values.asDiagonal() * ed.vectors.transpose();
  EXPECT_LT(max_abs_diff(rec, Matrix::Identity(3, 3)), 1e-12);
}

TEST(SymEigen, DiagonalAxisAligned) {
  EigenDecomposition ed = sym_eigen(SymMatrix(diag2(4.0, 1.0)));
  EXPECT_NEAR(ed.values[0], 4.0, 1e-12);
  EXPECT_NEAR(ed.values[1], 1.0, 1e-12);
  EXPECT_NEAR(std::abs(ed.vectors(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(ed.vectors(1, 1)), 1.0, 1e-12);
}

TEST(SymEigen, HandComputed2x2) {
  // [[2,1],[1,2]]: characteristic polynomial gives 3 and 1.
  Matrix m(2, 2);
  m << 2.0, 1.0, 1.0, 2.0;
  EigenDecomposition ed = sym_eigen(SymMatrix(m));
  EXPECT_NEAR(ed.values[0], 3.0, 1e-12);
  EXPECT_NEAR(ed.values[1], 1.0, 1e-12);
}

TEST(SymEigen, DescendingAndOrthonormal) {
  synthetic::Rng rng(11);
  for (int n : {2, 5, 16, 33}) {
    SpdMatrix m = synthetic::random_spd(n, rng, 0.01, 100.0);
    EigenDecomposition ed = sym_eigen(m.sym());
    for (int i = 1; i < n; ++i) EXPECT_GE(ed.values[i - 1], ed.values[i]);
    EXPECT_LT(max_abs_diff(ed.vectors.transpose() * ed.vectors,
                           Matrix::Identity(n, n)),
              1e-10);
    EXPECT_LT(max_abs_diff(ed.vectors * ed.values.asDiagonal() *
                               ed.vectors.transpose(),
                           m.mat()),
              1e-10 * ed.values[0]);
  }
}

TEST(SpdInverse, Diagonal) {
  SpdMatrix m(SymMatrix(diag2(2.0, 4.0)));
  Matrix inv = spd_inverse(m).mat();
  EXPECT_NEAR(inv(0, 0), 0.5, 1e-14);
  EXPECT_NEAR(inv(1, 1), 0.25, 1e-14);
  EXPECT_NEAR(inv(0, 1), 0.0, 1e-14);
}

TEST(SpdInverse, IdentityFixedPoint) {
  SpdMatrix m(SymMatrix(Matrix::Identity(4, 4)));
  EXPECT_LT(max_abs_diff(spd_inverse(m).mat(), Matrix::Identity(4, 4)), 1e-14);
}

TEST(SpdInverse, RandomProductIsIdentity) {
  synthetic::Rng rng(12);
  SpdMatrix m = synthetic::random_spd(8, rng);
  Matrix prod = m.mat() * spd_inverse(m).mat();
  EXPECT_LT(max_abs_diff(prod, Matrix::Identity(8, 8)), 1e-8);
}

TEST(SpdInverse, IllConditionedThrows) {
  Matrix m = diag2(1.0, 1e-14);
  SpdMatrix spd{SymMatrix(m)};
  try {
    spd_inverse(spd);
    FAIL() << "expected IllConditioned";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::ill_conditioned);
  }
}

TEST(SpdPower, SquareRootOfDiagonal) {
  SpdMatrix m(SymMatrix(diag2(4.0, 9.0)));
  Matrix r = spd_power(m, 0.5).mat();
  EXPECT_NEAR(r(0, 0), 2.0, 1e-14);
  EXPECT_NEAR(r(1, 1), 3.0, 1e-14);
}

TEST(SpdPower, ZeroGivesExactIdentity) {
  synthetic::Rng rng(13);
  SpdMatrix m = synthetic::random_spd(5, rng);
  EXPECT_EQ(max_abs_diff(spd_power(m, 0.0).mat(), Matrix::Identity(5, 5)), 0.0);
}

TEST(SpdPower, OneGivesInput) {
  synthetic::Rng rng(14);
  SpdMatrix m = synthetic::random_spd(5, rng);
  EXPECT_EQ(max_abs_diff(spd_power(m, 1.0).mat(), m.mat()), 0.0);
}

TEST(SpdPower, SquareMatchesDirectProduct) {
  Matrix m(2, 2);
  m << 2.0, 1.0, 1.0, 2.0;
  SpdMatrix spd{SymMatrix(m)};
  Matrix want = m * m;  // [[5,4],[4,5]]
  EXPECT_NEAR(want(0, 0), 5.0, 0.0);
  EXPECT_LT(max_abs_diff(spd_power(spd, 2.0).mat(), want), 1e-12);
}

TEST(SpdPower, RoundTrip) {
  synthetic::Rng rng(15);
  SpdMatrix m = synthetic::random_spd(6, rng);
  for (double s : {0.25, 0.5, 2.0}) {
    Matrix back = spd_power(spd_power(m, s), 1.0 / s).mat();
    EXPECT_LT(max_abs_diff(back, m.mat()) / m.mat().cwiseAbs().maxCoeff(),
              1e-8);
  }
}

TEST(SpdLog, IdentityIsZero) {
  SpdMatrix m(SymMatrix(Matrix::Identity(3, 3)));
  EXPECT_LT(spd_log(m).mat().cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SpdLog, DiagonalExponentials) {
  SpdMatrix m(SymMatrix(diag2(std::exp(1.0), std::exp(2.0))));
  Matrix l = spd_log(m).mat();
  EXPECT_NEAR(l(0, 0), 1.0, 1e-13);
  EXPECT_NEAR(l(1, 1), 2.0, 1e-13);
}

TEST(SpdLog, TraceIsLogDet) {
  synthetic::Rng rng(16);
  SpdMatrix m = synthetic::random_spd(6, rng);
  const double want = m.eigen().values.array().log().sum();
  EXPECT_NEAR(spd_log(m).mat().trace(), want, 1e-8 * (1.0 + std::abs(want)));
}

TEST(LogSpdProduct, IdentityLeftFactor) {
  synthetic::Rng rng(17);
  SpdMatrix b = synthetic::random_spd(4, rng);
  SpdMatrix eye(SymMatrix(Matrix::Identity(4, 4)));
  EXPECT_LT(max_abs_diff(log_spd_product(eye, b), spd_log(b).mat()), 1e-12);
}

TEST(LogSpdProduct, CommutingDiagonals) {
  SpdMatrix a(SymMatrix(diag2(2.0, 3.0)));
  SpdMatrix b(SymMatrix(diag2(5.0, 7.0)));
  Matrix l = log_spd_product(a, b);
  EXPECT_NEAR(l(0, 0), std::log(10.0), 1e-13);
  EXPECT_NEAR(l(1, 1), std::log(21.0), 1e-13);
  EXPECT_NEAR(l(0, 1), 0.0, 1e-13);
}

TEST(LogSpdProduct, ReproducesActualMatrixLog) {
  // exp(log(ab)) = ab through the scaled power series, checked on a small
  // well-conditioned pair: validates the matrix itself, not only its trace.
  synthetic::Rng rng(42);
  SpdMatrix a = synthetic::random_spd(4, rng, 0.5, 2.0);
  SpdMatrix b = synthetic::random_spd(4, rng, 0.5, 2.0);
  Matrix l = log_spd_product(a, b);
  Matrix expl = Matrix::Identity(4, 4);
  Matrix term = Matrix::Identity(4, 4);
  for (int k = 1; k < 60; ++k) {
    term = (term * l) / static_cast<double>(k);
    expl += term;
  }
  EXPECT_LT(max_abs_diff(expl, a.mat() * b.mat()), 1e-10);
}

TEST(LogSpdProduct, TraceAdditivity) {
  synthetic::Rng rng(18);
  SpdMatrix a = synthetic::random_spd(8, rng);
  SpdMatrix b = synthetic::random_spd(8, rng);
  const double want = spd_log(a).mat().trace() + spd_log(b).mat().trace();
  EXPECT_NEAR(log_spd_product(a, b).trace(), want,
              1e-8 * (1.0 + std::abs(want)));
}

TEST(LogSpdProduct, DimMismatchThrows) {
  synthetic::Rng rng(19);
  SpdMatrix a = synthetic::random_spd(3, rng);
  SpdMatrix b = synthetic::random_spd(4, rng);
  try {
    log_spd_product(a, b);
    FAIL() << "expected DimMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::dim_mismatch);
  }
}

TEST(Regularize, ZeroRidgeKeepsSpdInput) {
  synthetic::Rng rng(20);
  SpdMatrix m = synthetic::random_spd(4, rng);
  EXPECT_EQ(max_abs_diff(regularize(m.sym(), 0.0).mat(), m.mat()), 0.0);
}

TEST(Regularize, ZeroMatrixStaysSingular) {
  // meanDiag of the zero matrix is zero, so no ridge can help.
  SymMatrix zero{Matrix::Zero(3, 3)};
  try {
    regularize(zero, 1e-3);
    FAIL() << "expected StillNotPd";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::still_not_pd);
  }
}

TEST(Regularize, RankDeficientGramGetsFixed) {
  // Gram matrix of 3 vectors in 5 dimensions has rank <= 3.
  synthetic::Rng rng(21);
  std::normal_distribution<double> normal;
  Matrix x(5, 3);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = normal(rng);
  }
  Matrix gram = x * x.transpose();
  SymMatrix sym = SymMatrix::symmetrized(gram);
  EXPECT_THROW(SpdMatrix{sym}, Error);

  SpdMatrix fixed = regularize(sym, 1e-6);
  EXPECT_GT(fixed.eigen().values[4], 0.0);
}

TEST(Determinants, ProductRule) {
  synthetic::Rng rng(22);
  for (int n : {2, 4, 8, 16}) {
    SpdMatrix a = synthetic::random_spd(n, rng);
    SpdMatrix b = synthetic::random_spd(n, rng);
    const double want = a.mat().determinant() * b.mat().determinant();
    EXPECT_NEAR((a.mat() * b.mat()).determinant(), want,
                1e-8 * (1.0 + std::abs(want)));
  }
}

TEST(Determinants, LogDetIsTraceLog) {
  synthetic::Rng rng(23);
  for (int n : {2, 8, 32}) {
    SpdMatrix a = synthetic::random_spd(n, rng);
    EXPECT_NEAR(a.log_det(), spd_log(a).mat().trace(),
                1e-8 * (1.0 + std::abs(a.log_det())));
  }
}

TEST(SpdMatrix, InverseEqualsNegativePower) {
  synthetic::Rng rng(24);
  SpdMatrix m = synthetic::random_spd(7, rng);
  EXPECT_LT(max_abs_diff(spd_inverse(m).mat(), spd_power(m, -1.0).mat()) /
                spd_inverse(m).mat().cwiseAbs().maxCoeff(),
            1e-8);
}

TEST(SpdMatrix, ConcurrentEigenReads) {
  synthetic::Rng rng(25);
  SpdMatrix m = synthetic::random_spd(32, rng);
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&] {
      const EigenDecomposition& ed = m.eigen();
      if (ed.values.size() == 32) ok.fetch_add(1);
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok.load(), 8);
}

}  // namespace
