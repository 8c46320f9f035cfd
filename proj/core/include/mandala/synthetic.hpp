#pragma once

#include <cstdint>
#include <filesystem>
#include <random>

#include "mandala/clustering.hpp"
#include "mandala/gaussian.hpp"
#include "mandala/linalg.hpp"

namespace mandala::synthetic {

using Rng = std::mt19937_64;

/// Haar-ish random orthogonal basis from the QR of a Gaussian matrix.
Matrix random_orthogonal(int n, Rng& rng);

/// Random SPD matrix Q diag(lambda) Q^T with eigenvalues log-uniform in
/// [lambda_lo, lambda_hi].
SpdMatrix random_spd(int n, Rng& rng, double lambda_lo = 0.3,
                     double lambda_hi = 3.0);

/// Random Gaussian population: mean uniform in [-mean_scale, mean_scale]^n,
/// covariance from random_spd.
GaussianPopulation random_population(int n, Rng& rng, double mean_scale = 1.0);

/// Symmetric dissimilarity with zero diagonal and (almost surely) distinct
/// off-diagonal entries, uniform in (0, 1).
Matrix random_dissimilarity(int d, Rng& rng);

/// Complete linkage recomputed from first principles at every step: the
/// cluster distance is the max over original leaf pairs, never the
/// incremental update rule. Reference oracle for agglomerate().
Dendrogram reference_complete_linkage(const Matrix& delta);

/// Writes a CIFAR-format dataset (data_batch_1..5.bin and test_batch.bin)
/// with `per_class_per_batch` records of each class per batch. Images are
/// noisy with a class-dependent centered disk, so class pairs differ mostly
/// in the middle pixels. Deterministic in `seed`.
void write_cifar_fixture(const std::filesystem::path& dir,
                         int per_class_per_batch, std::uint64_t seed);

}  // namespace mandala::synthetic
