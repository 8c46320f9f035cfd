#include "mandala/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace mandala {

namespace {

// Log-density of N(mu, Sigma) for n <= 3, backed by a hand-rolled Cholesky so
// the oracle shares no code with the implementation it cross-checks.
struct TinyGaussian {
  int n = 0;
  std::array<double, 3> mu{};
  std::array<std::array<double, 3>, 3> chol{};  // lower triangular
  double log_norm = 0.0;                        // -0.5 ln det(2 pi Sigma)

  static TinyGaussian from(const GaussianPopulation& g) {
    TinyGaussian t;
    t.n = g.dim();
    double log_det = 0.0;
    for (int i = 0; i < t.n; ++i) {
      t.mu[i] = g.mean[i];
      for (int j = 0; j <= i; ++j) {
        double sum = g.cov.mat()(i, j);
        for (int k = 0; k < j; ++k) sum -= t.chol[i][k] * t.chol[j][k];
        if (i == j) {
          if (sum <= 0.0) {
            raise(errc::still_not_pd, "oracle Cholesky pivot <= 0");
          }
          t.chol[i][j] = std::sqrt(sum);
          log_det += 2.0 * std::log(t.chol[i][j]);
        } else {
          t.chol[i][j] = sum / t.chol[j][j];
        }
      }
    }
    t.log_norm = -0.5 * (t.n * std::log(2.0 * std::numbers::pi) + log_det);
    return t;
  }

  double logpdf(const std::array<double, 3>& x) const {
    // Solve L y = (x - mu); quadratic form is |y|^2.
    std::array<double, 3> y{};
    double quad = 0.0;
    for (int i = 0; i < n; ++i) {
      double v = x[i] - mu[i];
      for (int k = 0; k < i; ++k) v -= chol[i][k] * y[k];
      y[i] = v / chol[i][i];
      quad += y[i] * y[i];
    }
    return log_norm - 0.5 * quad;
  }
};

}  // namespace

GaussLegendreRule gauss_legendre(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n, symmetric roots seeded by the Chebyshev guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

double divergence_integration_oracle(const GaussianPopulation& p,
                                     const GaussianPopulation& q,
                                     DistanceKind kind, double s) {
  if (p.dim() != q.dim()) {
    raise(errc::dim_mismatch, "population dims differ");
  }
  const int n = p.dim();
  if (n > 3) {
    raise(errc::dimension_too_large,
          "quadrature oracle supports n <= 3, got " + std::to_string(n));
  }
  if (kind == DistanceKind::mahalanobis) {
    raise(errc::invalid_argument,
          "Mahalanobis has no defining integral to quadrate");
  }
  if (kind == DistanceKind::bhattacharyya) s = 0.5;

  const TinyGaussian gp = TinyGaussian::from(p);
  const TinyGaussian gq = TinyGaussian::from(q);

  const int nodes_per_axis = (n <= 2) ? 200 : 80;
  GaussLegendreRule rule = gauss_legendre(nodes_per_axis);

  // Box: [min(mu)-10 sd, max(mu)+10 sd] per axis, pooled per-axis variance.
  std::array<double, 3> lo{}, hi{};
  for (int i = 0; i < n; ++i) {
    const double sd =
        std::sqrt(0.5 * (p.cov.mat()(i, i) + q.cov.mat()(i, i)));
    lo[i] = std::min(p.mean[i], q.mean[i]) - 10.0 * sd;
    hi[i] = std::max(p.mean[i], q.mean[i]) + 10.0 * sd;
  }

  std::array<std::vector<double>, 3> axis_x, axis_w;
  for (int i = 0; i < n; ++i) {
    axis_x[i].resize(nodes_per_axis);
    axis_w[i].resize(nodes_per_axis);
    const double half = 0.5 * (hi[i] - lo[i]);
    const double mid = 0.5 * (hi[i] + lo[i]);
    for (int k = 0; k < nodes_per_axis; ++k) {
      axis_x[i][k] = mid + half * rule.nodes[k];
      axis_w[i][k] = half * rule.weights[k];
    }
  }

  const auto integrand = [&](const std::array<double, 3>& x) {
    const double lp = gp.logpdf(x);
    const double lq = gq.logpdf(x);
    switch (kind) {
      case DistanceKind::bhattacharyya:
        return std::exp(0.5 * (lp + lq));
      case DistanceKind::chernoff:
        return std::exp(s * lp + (1.0 - s) * lq);
      case DistanceKind::kullback_leibler:
        return (std::exp(lp) - std::exp(lq)) * (lp - lq);
      default:
        return 0.0;
    }
  };

  double total = 0.0;
  std::array<double, 3> x{};
  if (n == 1) {
    for (int a = 0; a < nodes_per_axis; ++a) {
      x[0] = axis_x[0][a];
      total += axis_w[0][a] * integrand(x);
    }
  } else if (n == 2) {
    for (int a = 0; a < nodes_per_axis; ++a) {
      x[0] = axis_x[0][a];
      double inner = 0.0;
      for (int b = 0; b < nodes_per_axis; ++b) {
        x[1] = axis_x[1][b];
        inner += axis_w[1][b] * integrand(x);
      }
      total += axis_w[0][a] * inner;
    }
  } else {
    for (int a = 0; a < nodes_per_axis; ++a) {
      x[0] = axis_x[0][a];
      for (int b = 0; b < nodes_per_axis; ++b) {
        x[1] = axis_x[1][b];
        double inner = 0.0;
        for (int c = 0; c < nodes_per_axis; ++c) {
          x[2] = axis_x[2][c];
          inner += axis_w[2][c] * integrand(x);
        }
        total += axis_w[0][a] * axis_w[1][b] * inner;
      }
    }
  }

  if (kind == DistanceKind::kullback_leibler) return total;
  return -std::log(total);
}

}  // namespace mandala
