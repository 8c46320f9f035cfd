#pragma once

#include <vector>

#include "mandala/distance.hpp"
#include "mandala/gaussian.hpp"

namespace mandala {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n);

/// Evaluates the defining divergence integral by tensor-product
/// Gauss-Legendre quadrature on a box covering [min(mu) - 10 sd,
/// max(mu) + 10 sd] per axis, sd being the pooled standard deviation.
/// Node counts: 200 per axis for n <= 2, 80 for n = 3. The Gaussian tail
/// beyond 10 sd and the quadrature error are both far below 1e-5 for these
/// counts (the integrands are entire).
///
///   bhattacharyya      -ln Int sqrt(p q)
///   chernoff           -ln Int p^s q^{1-s}
///   kullback_leibler   Int (p - q) ln(p/q)   (the symmetrized form)
///
/// This path is deliberately independent of the closed-form code: densities
/// come from a local Cholesky factorization, not from spd_* functions.
/// Throws DimensionTooLarge for n > 3.
double divergence_integration_oracle(const GaussianPopulation& p,
                                     const GaussianPopulation& q,
                                     DistanceKind kind, double s);

}  // namespace mandala
