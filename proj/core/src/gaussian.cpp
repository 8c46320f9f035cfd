#include "mandala/gaussian.hpp"

#include <cmath>
#include <vector>

#include "mandala/parallel.hpp"

namespace mandala {

namespace {

// Neumaier running sum: exact enough that the result does not depend on
// sample order for non-cancelling data.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

constexpr std::int64_t kRowBlock = 64;

}  // namespace

GaussianPopulation estimate_population(const SampleSet& s, double ridge) {
  const std::int64_t n_samples = s.count();
  const int dim = s.dim();
  if (n_samples < 2) {
    raise(errc::degenerate_samples,
          "need at least 2 samples, got " + std::to_string(n_samples));
  }
  if (dim == 0) {
    raise(errc::invalid_argument, "zero-dimensional samples");
  }

  Vector mean(dim);
  parallel_for_blocks(0, dim, kRowBlock, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t j = lo; j < hi; ++j) {
      CompensatedSum acc;
      for (std::int64_t k = 0; k < n_samples; ++k) {
        acc.add(s.samples(k, j));
      }
      mean[j] = acc.value() / static_cast<double>(n_samples);
    }
  });

  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor centered = s.samples.rowwise() - mean.transpose();

  Matrix cov(dim, dim);
  parallel_for_blocks(0, dim, kRowBlock, [&](std::int64_t lo, std::int64_t hi) {
    const std::int64_t rows = hi - lo;
    std::vector<CompensatedSum> acc(static_cast<std::size_t>(rows) * dim);
    for (std::int64_t k = 0; k < n_samples; ++k) {
      const double* sample = centered.data() + k * dim;
      for (std::int64_t i = lo; i < hi; ++i) {
        const double ci = sample[i];
        CompensatedSum* out = acc.data() + (i - lo) * dim;
        for (int j = 0; j < dim; ++j) {
          out[j].add(ci * sample[j]);
        }
      }
    }
    const double norm = 1.0 / static_cast<double>(n_samples - 1);
    for (std::int64_t i = lo; i < hi; ++i) {
      for (int j = 0; j < dim; ++j) {
        cov(i, j) = acc[(i - lo) * dim + j].value() * norm;
      }
    }
  });

  SymMatrix sym_cov = SymMatrix::symmetrized(cov);

  GaussianPopulation out{
      .mean = std::move(mean),
      .cov = [&] {
        try {
          return regularize(sym_cov, ridge);
        } catch (const Error& e) {
          if (e.code() == errc::still_not_pd) {
            raise(errc::degenerate_samples,
                  "covariance not positive definite after ridge " +
                      std::to_string(ridge));
          }
          throw;
        }
      }(),
      .count = n_samples,
      .ridge_applied = ridge,
  };
  return out;
}

}  // namespace mandala
