#pragma once

#include <cstdint>
#include <string>

#include "mandala/linalg.hpp"

namespace mandala {

/// A set of same-length sample vectors, one per row.
struct SampleSet {
  Matrix samples;  // count x dim

  std::int64_t count() const { return samples.rows(); }
  int dim() const { return static_cast<int>(samples.cols()); }
};

/// Gaussian population fitted to a sample set. `ridge_applied` is the ridge
/// multiplier handed to regularize() and travels with every serialized copy
/// so downstream numbers stay auditable.
struct GaussianPopulation {
  Vector mean;
  SpdMatrix cov;
  std::int64_t count = 0;
  double ridge_applied = 0.0;
  std::string source = "unknown";

  int dim() const { return static_cast<int>(mean.size()); }
};

/// Fits mean and unbiased (N-1) covariance:
///   mean = (1/N) sum a_k, cov = 1/(N-1) sum (a_k - mean)(a_k - mean)^T
/// All accumulations run in canonical sample-index order with compensated
/// (Neumaier) summation, then the covariance is symmetrized as (C + C^T)/2
/// before the ridge. Throws DegenerateSamples when even the ridged
/// covariance is not positive definite.
GaussianPopulation estimate_population(const SampleSet& s, double ridge);

}  // namespace mandala
