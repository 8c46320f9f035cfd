#include <gtest/gtest.h>

#include <cmath>

#include "mandala/quadrature.hpp"
#include "mandala/synthetic.hpp"

using namespace mandala;

namespace {

GaussianPopulation gauss1d(double mean, double var) {
  Vector mu(1);
  mu[0] = mean;
  Matrix c(1, 1);
  c(0, 0) = var;
  return GaussianPopulation{mu, SpdMatrix(SymMatrix(c)), 0, 0.0, "test"};
}

GaussianPopulation product2d(const GaussianPopulation& a,
                             const GaussianPopulation& b) {
  Vector mu(2);
  mu << a.mean[0], b.mean[0];
  Matrix c = Matrix::Zero(2, 2);
  c(0, 0) = a.cov.mat()(0, 0);
  c(1, 1) = b.cov.mat()(0, 0);
  return GaussianPopulation{mu, SpdMatrix(SymMatrix(c)), 0, 0.0, "test"};
}

TEST(GaussLegendre, WeightsSumToTwo) {
  for (int n : {2, 31, 200}) {
    GaussLegendreRule rule = gauss_legendre(n);
    double sum = 0.0;
    for (double w : rule.weights) sum += w;
    EXPECT_NEAR(sum, 2.0, 1e-13);
  }
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  GaussLegendreRule rule = gauss_legendre(6);
  // x^2 and x^10 on [-1,1]; degree 10 < 2*6.
  double quad2 = 0.0, quad10 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    quad2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    quad10 += rule.weights[i] * std::pow(rule.nodes[i], 10);
  }
  EXPECT_NEAR(quad2, 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(quad10, 2.0 / 11.0, 1e-13);
}

TEST(Oracle, IdenticalGaussiansGiveZero) {
  GaussianPopulation p = gauss1d(0.0, 1.0);
  EXPECT_NEAR(
      divergence_integration_oracle(p, p, DistanceKind::bhattacharyya, 0.5),
      0.0, 1e-6);
  EXPECT_NEAR(divergence_integration_oracle(p, p, DistanceKind::kullback_leibler, 0.5),
              0.0, 1e-6);
}

TEST(Oracle, MatchesBhattacharyyaClosedForm) {
  GaussianPopulation p = gauss1d(0.0, 1.0);
  GaussianPopulation q = gauss1d(1.0, 2.0);
  const double closed = scalar_report(p, q, 0.5, Variant::corrected).bhattacharyya;
  EXPECT_NEAR(closed, 0.112779092247429197, 1e-15);
  EXPECT_NEAR(
      divergence_integration_oracle(p, q, DistanceKind::bhattacharyya, 0.5),
      closed, 1e-4);
}

TEST(Oracle, MatchesChernoffClosedForm) {
  GaussianPopulation p = gauss1d(0.0, 1.0);
  GaussianPopulation q = gauss1d(1.0, 2.0);
  const double closed = scalar_report(p, q, 0.3, Variant::corrected).chernoff;
  EXPECT_NEAR(closed, 0.107979285918984499, 1e-15);
  EXPECT_NEAR(divergence_integration_oracle(p, q, DistanceKind::chernoff, 0.3),
              closed, 1e-4);
}

TEST(Oracle, MatchesJeffreysClosedForm) {
  GaussianPopulation p = gauss1d(0.0, 1.0);
  GaussianPopulation q = gauss1d(1.0, 2.0);
  EXPECT_NEAR(
      divergence_integration_oracle(p, q, DistanceKind::kullback_leibler, 0.5),
      1.0, 1e-3);
}

TEST(Oracle, TensorizationOverProductDensities) {
  // For independent product densities the B/C/KL divergences all split into
  // sums over the axes.
  GaussianPopulation a1 = gauss1d(0.0, 1.0), b1 = gauss1d(0.8, 1.7);
  GaussianPopulation a2 = gauss1d(-0.3, 0.6), b2 = gauss1d(0.4, 1.2);
  GaussianPopulation p2 = product2d(a1, a2), q2 = product2d(b1, b2);

  for (DistanceKind kind : {DistanceKind::bhattacharyya,
                            DistanceKind::chernoff,
                            DistanceKind::kullback_leibler}) {
    const double want =
        divergence_integration_oracle(a1, b1, kind, 0.3) +
        divergence_integration_oracle(a2, b2, kind, 0.3);
    const double got = divergence_integration_oracle(p2, q2, kind, 0.3);
    EXPECT_NEAR(got, want, 1e-4) << to_string(kind);
  }
}

TEST(Oracle, ThreeDimensionalTensorization) {
  GaussianPopulation a1 = gauss1d(0.0, 1.0), b1 = gauss1d(0.5, 1.5);
  Vector mu3 = Vector::Zero(3);
  Matrix c3 = Matrix::Identity(3, 3);
  GaussianPopulation p3{mu3, SpdMatrix(SymMatrix(c3)), 0, 0.0, "test"};
  Vector mu3b(3);
  mu3b << 0.5, 0.5, 0.5;
  Matrix c3b = 1.5 * Matrix::Identity(3, 3);
  GaussianPopulation q3{mu3b, SpdMatrix(SymMatrix(c3b)), 0, 0.0, "test"};

  const double one_axis =
      divergence_integration_oracle(a1, b1, DistanceKind::bhattacharyya, 0.5);
  const double got = divergence_integration_oracle(
      p3, q3, DistanceKind::bhattacharyya, 0.5);
  EXPECT_NEAR(got, 3.0 * one_axis, 1e-4);
}

TEST(Oracle, RandomPairsAgainstClosedForms) {
  synthetic::Rng rng(77);
  for (int n : {1, 2}) {
    for (int trial = 0; trial < 3; ++trial) {
      GaussianPopulation p = synthetic::random_population(n, rng);
      GaussianPopulation q = synthetic::random_population(n, rng);
      ScalarDistanceReport rep = scalar_report(p, q, 0.3, Variant::corrected);
      EXPECT_NEAR(divergence_integration_oracle(
                      p, q, DistanceKind::bhattacharyya, 0.5),
                  rep.bhattacharyya, 1e-4);
      EXPECT_NEAR(
          divergence_integration_oracle(p, q, DistanceKind::chernoff, 0.3),
          rep.chernoff, 1e-4);
      EXPECT_NEAR(divergence_integration_oracle(
                      p, q, DistanceKind::kullback_leibler, 0.3),
                  rep.kl, 1e-3);
    }
  }
}

TEST(Oracle, DimensionTooLarge) {
  synthetic::Rng rng(78);
  GaussianPopulation p = synthetic::random_population(4, rng);
  try {
    divergence_integration_oracle(p, p, DistanceKind::bhattacharyya, 0.5);
    FAIL() << "expected DimensionTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::dimension_too_large);
  }
}

TEST(Oracle, MahalanobisHasNoIntegral) {
  synthetic::Rng rng(79);
  GaussianPopulation p = synthetic::random_population(2, rng);
  EXPECT_THROW(
      divergence_integration_oracle(p, p, DistanceKind::mahalanobis, 0.5),
      Error);
}

}  // namespace
