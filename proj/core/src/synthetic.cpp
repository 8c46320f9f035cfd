#include "mandala/synthetic.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <vector>

#include "mandala/cifar.hpp"

namespace mandala::synthetic {

Matrix random_orthogonal(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix the sign convention so the basis is a deterministic function of g.
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

SpdMatrix random_spd(int n, Rng& rng, double lambda_lo, double lambda_hi) {
  Matrix q = random_orthogonal(n, rng);
  std::uniform_real_distribution<double> u(std::log(lambda_lo),
                                           std::log(lambda_hi));
  Vector values(n);
  for (int i = 0; i < n; ++i) values[i] = std::exp(u(rng));
  return SpdMatrix::from_eigen_basis(std::move(q), std::move(values));
}

GaussianPopulation random_population(int n, Rng& rng, double mean_scale) {
  std::uniform_real_distribution<double> u(-mean_scale, mean_scale);
  Vector mean(n);
  for (int i = 0; i < n; ++i) mean[i] = u(rng);
  GaussianPopulation p{
      .mean = std::move(mean),
      .cov = random_spd(n, rng),
      .count = 0,
      .ridge_applied = 0.0,
      .source = "synthetic",
  };
  return p;
}

Matrix random_dissimilarity(int d, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) {
    m(i, i) = 0.0;
    for (int j = i + 1; j < d; ++j) {
      const double v = u(rng);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

Dendrogram reference_complete_linkage(const Matrix& delta) {
  const int d = static_cast<int>(delta.rows());
  if (d < 2) raise(errc::too_few_leaves, "need at least 2 leaves");

  struct Cluster {
    int node;                 // current node label
    std::vector<int> leaves;  // original leaf indices
  };
  std::vector<Cluster> clusters(d);
  for (int i = 0; i < d; ++i) clusters[i] = Cluster{i, {i}};

  const auto cluster_distance = [&](const Cluster& a, const Cluster& b) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int la : a.leaves) {
      for (int lb : b.leaves) worst = std::max(worst, delta(la, lb));
    }
    return worst;
  };

  Dendrogram dn;
  dn.leaf_count = d;
  for (int step = 0; step < d - 1; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 1;
    int best_lo = 0, best_hi = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double v = cluster_distance(clusters[i], clusters[j]);
        int lo = clusters[i].node, hi = clusters[j].node;
        if (lo > hi) std::swap(lo, hi);
        if (v < best || (v == best && (lo < best_lo ||
                                       (lo == best_lo && hi < best_hi)))) {
          best = v;
          bi = i;
          bj = j;
          best_lo = lo;
          best_hi = hi;
        }
      }
    }

    dn.merges.push_back(Merge{best_lo, best_hi, best, d + step});
    clusters[bi].node = d + step;
    clusters[bi].leaves.insert(clusters[bi].leaves.end(),
                               clusters[bj].leaves.begin(),
                               clusters[bj].leaves.end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return dn;
}

void write_cifar_fixture(const std::filesystem::path& dir,
                         int per_class_per_batch, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  Rng rng(seed);
  std::uniform_int_distribution<int> noise(0, 70);
  std::normal_distribution<double> jitter(0.0, 2.5);

  std::vector<std::string> names;
  for (int b = 1; b <= 5; ++b) names.push_back("data_batch_" + std::to_string(b) + ".bin");
  names.push_back("test_batch.bin");

  for (const auto& name : names) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    for (int cls = 0; cls <= 9; ++cls) {
      // Class signature: disk radius and brightness in the image center.
      const double radius = 4.0 + cls;
      const double level = 90.0 + 15.0 * cls;
      for (int rec = 0; rec < per_class_per_batch; ++rec) {
        const double cx = 15.5 + jitter(rng);
        const double cy = 15.5 + jitter(rng);
        out.put(static_cast<char>(cls));
        std::array<std::uint8_t, 3 * kCifarPixels> pixels;
        for (int i = 0; i < kCifarSide; ++i) {
          for (int j = 0; j < kCifarSide; ++j) {
            const double r = std::hypot(i - cy, j - cx);
            double v = noise(rng);
            if (r < radius) v = std::min(255.0, level + noise(rng));
            const auto byte = static_cast<std::uint8_t>(v);
            const int t = i * kCifarSide + j;
            pixels[t] = byte;
            pixels[kCifarPixels + t] = byte;
            pixels[2 * kCifarPixels + t] = byte;
          }
        }
        out.write(reinterpret_cast<const char*>(pixels.data()), pixels.size());
      }
    }
  }
}

}  // namespace mandala::synthetic
