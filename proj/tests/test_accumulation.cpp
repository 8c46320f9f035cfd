#include <gtest/gtest.h>

#include <random>

#include "mandala/accumulation.hpp"

using namespace mandala;

namespace {

TEST(Accumulate, TwoByTwo) {
  Matrix d(2, 2);
  d << 0.0, 1.0, 2.0, 0.0;
  Vector phi = accumulate(d);
  EXPECT_DOUBLE_EQ(phi[0], 3.0);
  EXPECT_DOUBLE_EQ(phi[1], 3.0);
}

TEST(Accumulate, ZeroMatrix) {
  Vector phi = accumulate(Matrix::Zero(4, 4));
  EXPECT_EQ(phi.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Accumulate, AllOnesThreeByThree) {
  // Each index is counted once in a row of ones and once in a column: 3 + 3.
  Vector phi = accumulate(Matrix::Ones(3, 3));
  for (int t = 0; t < 3; ++t) EXPECT_DOUBLE_EQ(phi[t], 6.0);
}

TEST(Accumulate, DiagonalCountsTwice) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 5.0;
  Vector phi = accumulate(d);
  EXPECT_DOUBLE_EQ(phi[0], 10.0);
  EXPECT_DOUBLE_EQ(phi[1], 0.0);
}

TEST(Accumulate, Linearity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(6, 6), b(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      a(i, j) = u(rng);
      b(i, j) = u(rng);
    }
  }
  Vector lhs = accumulate(Matrix(0.5 * a + 2.0 * b));
  Vector rhs = 0.5 * accumulate(a) + 2.0 * accumulate(b);
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Accumulate, PermutationEquivariance) {
  // Integer entries keep all the partial sums exact, so the permuted
  // accumulation must match the accumulated permutation bit for bit.
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> u(-20, 20);
  const int n = 7;
  Matrix d(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) d(i, j) = static_cast<double>(u(rng));
  }
  std::vector<int> perm = {3, 0, 6, 1, 5, 2, 4};
  Matrix permuted(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) permuted(i, j) = d(perm[i], perm[j]);
  }
  Vector phi = accumulate(d);
  Vector phi_permuted = accumulate(permuted);
  for (int t = 0; t < n; ++t) {
    EXPECT_EQ(phi_permuted[t], phi[perm[t]]);
  }
}

TEST(Devectorize, RowMajorDefinition) {
  Vector phi(4);
  phi << 1.0, 2.0, 3.0, 4.0;
  AccumulationImage img = devectorize(phi, 2);
  EXPECT_DOUBLE_EQ(img(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(img(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(img(1, 0), 3.0);
  EXPECT_DOUBLE_EQ(img(1, 1), 4.0);
}

TEST(Devectorize, ConstantVector) {
  AccumulationImage img = devectorize(Vector::Constant(9, 2.5), 3);
  EXPECT_EQ((img.values.array() - 2.5).abs().maxCoeff(), 0.0);
}

TEST(Devectorize, LengthMismatchThrows) {
  try {
    devectorize(Vector::Zero(5), 2);
    FAIL() << "expected LengthMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::length_mismatch);
  }
}

TEST(Devectorize, RoundTripWithVectorize) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  Vector phi(16);
  for (int i = 0; i < 16; ++i) phi[i] = u(rng);
  Vector back = vectorize(devectorize(phi, 4).values);
  EXPECT_EQ((back - phi).cwiseAbs().maxCoeff(), 0.0);
}

TEST(CenterConcentration, ConstantImageIsOne) {
  AccumulationImage img = devectorize(Vector::Constant(1024, 3.7), 32);
  EXPECT_DOUBLE_EQ(center_concentration(img, 16), 1.0);
}

TEST(CenterConcentration, ZeroRingDegenerates) {
  Matrix v = Matrix::Zero(32, 32);
  for (int i = 8; i < 24; ++i) {
    for (int j = 8; j < 24; ++j) v(i, j) = 1.0;
  }
  AccumulationImage img{32, v, "test"};
  try {
    center_concentration(img, 16);
    FAIL() << "expected DegenerateRing";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::degenerate_ring);
  }
}

TEST(CenterConcentration, CenteredBumpExceedsOne) {
  Matrix v(32, 32);
  for (int i = 0; i < 32; ++i) {
    for (int j = 0; j < 32; ++j) {
      const double r2 = (i - 15.5) * (i - 15.5) + (j - 15.5) * (j - 15.5);
      v(i, j) = std::exp(-r2 / 50.0) + 0.01;
    }
  }
  AccumulationImage img{32, v, "test"};
  EXPECT_GT(center_concentration(img, 16), 1.0);
}

TEST(CenterConcentration, WindowValidation) {
  AccumulationImage img = devectorize(Vector::Constant(16, 1.0), 4);
  EXPECT_THROW(center_concentration(img, 0), Error);
  EXPECT_THROW(center_concentration(img, 4), Error);
}

}  // namespace
