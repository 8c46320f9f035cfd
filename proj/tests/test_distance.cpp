#include <gtest/gtest.h>

#include <cmath>

#include "mandala/distance.hpp"
#include "mandala/synthetic.hpp"

using namespace mandala;

namespace {

// Frozen closed-form values for N(0,1) vs N(1,2), computed independently by
// high-precision evaluation of the scalar formulas (cross-checked against
// quadrature of the defining integrals in test_quadrature.cpp):
//   dB = 1/12 + ln(1.5/sqrt 2)/2, dC(0.3), Jeffreys divergence.
constexpr double kOneDimBhattacharyya = 0.112779092247429197;
constexpr double kOneDimChernoff03 = 0.107979285918984499;
constexpr double kOneDimJeffreys = 1.0;

GaussianPopulation pop(std::initializer_list<double> mean,
                       std::initializer_list<std::initializer_list<double>> cov) {
  const auto n = static_cast<Eigen::Index>(mean.size());
  Vector mu(n);
  Eigen::Index i = 0;
  for (double v : mean) mu[i++] = v;
  Matrix c(n, n);
  i = 0;
  for (const auto& row : cov) {
    Eigen::Index j = 0;
    for (double v : row) c(i, j++) = v;
    ++i;
  }
  return GaussianPopulation{mu, SpdMatrix(SymMatrix(c)), 0, 0.0, "test"};
}

GaussianPopulation std1d(double mean, double var) {
  return pop({mean}, {{var}});
}

TEST(Mahalanobis, IdentityCovariance) {
  GaussianPopulation p = pop({1.0, 0.0}, {{1.0, 0.0}, {0.0, 1.0}});
  GaussianPopulation q = pop({0.0, 0.0}, {{1.0, 0.0}, {0.0, 1.0}});
  DistanceMatrix d = mahalanobis_matrix(p, q);
  EXPECT_NEAR(d.matrix(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(d.matrix(1, 1), 0.0, 1e-12);
  EXPECT_NEAR(d.trace(), 1.0, 1e-12);
  EXPECT_FALSE(d.pooled);
}

TEST(Mahalanobis, EqualMeansGiveZero) {
  GaussianPopulation p = pop({0.3, -0.4}, {{2.0, 0.5}, {0.5, 1.0}});
  DistanceMatrix d = mahalanobis_matrix(p, p);
  EXPECT_LT(d.matrix.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Mahalanobis, AnisotropicHandEvaluation) {
  GaussianPopulation p = pop({2.0, 0.0}, {{4.0, 0.0}, {0.0, 1.0}});
  GaussianPopulation q = pop({0.0, 0.0}, {{4.0, 0.0}, {0.0, 1.0}});
  DistanceMatrix d = mahalanobis_matrix(p, q);
  EXPECT_NEAR(d.matrix(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(d.trace(), 1.0, 1e-12);
}

TEST(Mahalanobis, CovMismatchWithoutPooling) {
  GaussianPopulation p = pop({0.0}, {{1.0}});
  GaussianPopulation q = pop({1.0}, {{2.0}});
  try {
    mahalanobis_matrix(p, q);
    FAIL() << "expected CovMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::cov_mismatch);
  }
  DistanceMatrix d = mahalanobis_matrix(p, q, /*pooled_mode=*/true);
  EXPECT_TRUE(d.pooled);
  EXPECT_NEAR(d.trace(), 1.0 / 1.5, 1e-12);  // pooled variance 1.5
}

TEST(Bhattacharyya, IdenticalPopulationsVanish) {
  synthetic::Rng rng(31);
  GaussianPopulation p = synthetic::random_population(3, rng);
  DistanceMatrix d = bhattacharyya_matrix(p, p, Variant::corrected);
  EXPECT_LT(std::abs(d.trace()), 1e-12);
  EXPECT_EQ(d.s, 0.5);
}

TEST(Bhattacharyya, EqualCovarianceQuadraticOnly) {
  // mean gap (2,0), identity covariances: dB = 4/8 = 0.5, log term vanishes.
  GaussianPopulation p = pop({2.0, 0.0}, {{1.0, 0.0}, {0.0, 1.0}});
  GaussianPopulation q = pop({0.0, 0.0}, {{1.0, 0.0}, {0.0, 1.0}});
  EXPECT_NEAR(bhattacharyya_matrix(p, q).trace(), 0.5, 1e-12);
}

TEST(Bhattacharyya, OneDimClosedForm) {
  DistanceMatrix d = bhattacharyya_matrix(std1d(0.0, 1.0), std1d(1.0, 2.0));
  EXPECT_NEAR(d.trace(), kOneDimBhattacharyya, 1e-12);
}

TEST(Bhattacharyya, PaperExactDiscrepancyDetector) {
  synthetic::Rng rng(32);
  for (int n : {2, 5}) {
    GaussianPopulation p = synthetic::random_population(n, rng);
    GaussianPopulation q = synthetic::random_population(n, rng);
    const double literal =
        bhattacharyya_matrix(p, q, Variant::paper_exact).trace();
    const double closed =
        scalar_report(p, q, 0.5, Variant::corrected).bhattacharyya;
    const double want = 0.5 * (p.cov.log_det() + q.cov.log_det());
    EXPECT_NEAR(literal - closed, want, 1e-8 * (1.0 + std::abs(want)));
  }
}

TEST(Chernoff, RejectsOutOfRangeExponent) {
  synthetic::Rng rng(33);
  GaussianPopulation p = synthetic::random_population(2, rng);
  GaussianPopulation q = synthetic::random_population(2, rng);
  for (double s : {-0.1, 1.1}) {
    try {
      chernoff_matrix(p, q, s);
      FAIL() << "expected SOutOfRange";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), errc::s_out_of_range);
    }
  }
}

TEST(Chernoff, EndpointsVanish) {
  synthetic::Rng rng(34);
  GaussianPopulation p = synthetic::random_population(4, rng);
  GaussianPopulation q = synthetic::random_population(4, rng);
  EXPECT_LT(std::abs(chernoff_matrix(p, q, 0.0).trace()), 1e-10);
  EXPECT_LT(std::abs(chernoff_matrix(p, q, 1.0).trace()), 1e-10);
}

TEST(Chernoff, HalfIsBhattacharyya) {
  synthetic::Rng rng(35);
  GaussianPopulation p = synthetic::random_population(5, rng);
  GaussianPopulation q = synthetic::random_population(5, rng);
  const Matrix diff = chernoff_matrix(p, q, 0.5).matrix -
                      bhattacharyya_matrix(p, q, Variant::corrected).matrix;
  EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Chernoff, OneDimClosedForm) {
  DistanceMatrix d = chernoff_matrix(std1d(0.0, 1.0), std1d(1.0, 2.0), 0.3);
  EXPECT_NEAR(d.trace(), kOneDimChernoff03, 1e-12);
}

TEST(Chernoff, ParameterSwapSymmetry) {
  synthetic::Rng rng(36);
  GaussianPopulation p = synthetic::random_population(4, rng);
  GaussianPopulation q = synthetic::random_population(4, rng);
  for (double s : {0.1, 0.3, 0.7}) {
    const double lhs = scalar_report(p, q, s, Variant::corrected).chernoff;
    const double rhs =
        scalar_report(q, p, 1.0 - s, Variant::corrected).chernoff;
    EXPECT_NEAR(lhs, rhs, 1e-10);
  }
}

TEST(KullbackLeibler, PaperExactAtEqualInputs) {
  synthetic::Rng rng(37);
  GaussianPopulation p = synthetic::random_population(2, rng);
  DistanceMatrix d = kl_matrix(p, p, Variant::paper_exact);
  // The +2I term forces the value 2n even for identical populations.
  EXPECT_NEAR(d.trace(), 4.0, 1e-10);
  EXPECT_LT((d.matrix - 2.0 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(),
            1e-10);
}

TEST(KullbackLeibler, CorrectedVanishesAtEqualInputs) {
  synthetic::Rng rng(38);
  GaussianPopulation p = synthetic::random_population(3, rng);
  EXPECT_LT(kl_matrix(p, p, Variant::corrected).matrix.cwiseAbs().maxCoeff(),
            1e-10);
}

TEST(KullbackLeibler, CorrectedMatchesJeffreysClosedForm) {
  DistanceMatrix d =
      kl_matrix(std1d(0.0, 1.0), std1d(1.0, 2.0), Variant::corrected);
  EXPECT_NEAR(d.trace(), kOneDimJeffreys, 1e-12);
}

TEST(Hellinger, Values) {
  EXPECT_DOUBLE_EQ(hellinger_scalar(0.0), 0.0);
  EXPECT_GT(hellinger_scalar(50.0), 0.999999);
  EXPECT_LT(hellinger_scalar(50.0), 1.0);
  EXPECT_NEAR(hellinger_scalar(std::log(2.0)), 0.7071067811865476, 1e-15);
  try {
    hellinger_scalar(-0.5);
    FAIL() << "expected NegativeInput";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::negative_input);
  }
}

TEST(ScalarReport, IdenticalPopulations) {
  synthetic::Rng rng(39);
  GaussianPopulation p = synthetic::random_population(3, rng);
  ScalarDistanceReport pe = scalar_report(p, p, 0.3, Variant::paper_exact);
  EXPECT_LT(std::abs(pe.mahalanobis), 1e-12);
  EXPECT_LT(std::abs(pe.bhattacharyya), 1e-12);
  EXPECT_LT(std::abs(pe.chernoff), 1e-12);
  EXPECT_LT(std::abs(pe.hellinger), 1e-6);
  EXPECT_NEAR(pe.kl, 6.0, 1e-10);  // 2n with n = 3

  ScalarDistanceReport co = scalar_report(p, p, 0.3, Variant::corrected);
  EXPECT_LT(std::abs(co.kl), 1e-10);
}

TEST(ScalarReport, EqualCovariancesRelateBhattacharyyaToMahalanobis) {
  synthetic::Rng rng(40);
  GaussianPopulation p = synthetic::random_population(4, rng);
  GaussianPopulation q = p;
  q.mean.array() += 0.7;
  ScalarDistanceReport rep = scalar_report(p, q, 0.5, Variant::corrected);
  EXPECT_NEAR(rep.bhattacharyya, rep.mahalanobis / 8.0, 1e-10);
}

TEST(ScalarReport, TracesMatchScalars) {
  synthetic::Rng rng(41);
  GaussianPopulation p = synthetic::random_population(4, rng);
  GaussianPopulation q = synthetic::random_population(4, rng);
  ScalarDistanceReport pe = scalar_report(p, q, 0.3, Variant::paper_exact);
  ScalarDistanceReport co = scalar_report(p, q, 0.3, Variant::corrected);

  const auto rel = [](double got, double want) {
    return std::abs(got - want) / (1.0 + std::abs(want));
  };
  EXPECT_LT(rel(mahalanobis_matrix(p, q, true).trace(), pe.mahalanobis), 1e-8);
  EXPECT_LT(rel(bhattacharyya_matrix(p, q).trace(), pe.bhattacharyya), 1e-8);
  EXPECT_LT(rel(chernoff_matrix(p, q, 0.3).trace(), pe.chernoff), 1e-8);
  EXPECT_LT(rel(kl_matrix(p, q, Variant::paper_exact).trace(), pe.kl), 1e-8);
  EXPECT_LT(rel(kl_matrix(p, q, Variant::corrected).trace(), co.kl), 1e-8);
}

TEST(ScalarReport, SwapSymmetryOfBhattacharyya) {
  synthetic::Rng rng(43);
  GaussianPopulation p = synthetic::random_population(4, rng);
  GaussianPopulation q = synthetic::random_population(4, rng);
  EXPECT_NEAR(scalar_report(p, q, 0.5, Variant::corrected).bhattacharyya,
              scalar_report(q, p, 0.5, Variant::corrected).bhattacharyya,
              1e-10);
  EXPECT_NEAR(bhattacharyya_matrix(p, q).trace(),
              bhattacharyya_matrix(q, p).trace(), 1e-10);
}

TEST(ScalarReport, AffineScaleInvariance) {
  // x -> c x scales means by c and covariances by c^2; divergences between
  // the transformed populations are unchanged.
  synthetic::Rng rng(44);
  GaussianPopulation p = synthetic::random_population(3, rng);
  GaussianPopulation q = synthetic::random_population(3, rng);
  const double base = scalar_report(p, q, 0.5, Variant::corrected).bhattacharyya;
  for (double c : {0.1, 3.0, 25.0}) {
    GaussianPopulation ps{Vector(c * p.mean),
                          SpdMatrix(SymMatrix(Matrix(c * c * p.cov.mat()))),
                          0, 0.0, "test"};
    GaussianPopulation qs{Vector(c * q.mean),
                          SpdMatrix(SymMatrix(Matrix(c * c * q.cov.mat()))),
                          0, 0.0, "test"};
    const double scaled =
        scalar_report(ps, qs, 0.5, Variant::corrected).bhattacharyya;
    EXPECT_NEAR(scaled, base, 1e-9 * (1.0 + std::abs(base)));
  }
}

TEST(DistanceMatrixMeta, RidgeTravels) {
  synthetic::Rng rng(45);
  GaussianPopulation p = synthetic::random_population(2, rng);
  GaussianPopulation q = synthetic::random_population(2, rng);
  p.ridge_applied = 1e-6;
  q.ridge_applied = 2e-6;
  DistanceMatrix d = bhattacharyya_matrix(p, q);
  EXPECT_EQ(d.ridge_p, 1e-6);
  EXPECT_EQ(d.ridge_q, 2e-6);
}

}  // namespace
