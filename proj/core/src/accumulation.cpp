#include "mandala/accumulation.hpp"

#include <cmath>

namespace mandala {

Vector accumulate(const GeneralSquareMatrix& delta) {
  if (delta.rows() != delta.cols()) {
    raise(errc::dim_mismatch, "accumulate needs a square matrix");
  }
  const Eigen::Index n = delta.rows();
  // Plain index-order sums: for symmetric input the column and row pass then
  // agree bitwise, so phi = 2 * row sum holds exactly.
  Vector out(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    double col = 0.0;
    for (Eigen::Index u = 0; u < n; ++u) col += delta(u, t);
    double row = 0.0;
    for (Eigen::Index v = 0; v < n; ++v) row += delta(t, v);
    out[t] = col + row;
  }
  return out;
}

Vector accumulate(const DistanceMatrix& d) { return accumulate(d.matrix); }

Vector vectorize(const Matrix& grid) {
  if (grid.rows() != grid.cols()) {
    raise(errc::dim_mismatch, "vectorize needs a square grid");
  }
  const int side = static_cast<int>(grid.rows());
  Vector out(static_cast<std::int64_t>(side) * side);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      out[static_cast<std::int64_t>(i) * side + j] = grid(i, j);
    }
  }
  return out;
}

AccumulationImage devectorize(const Vector& phi, int side) {
  if (side <= 0 ||
      phi.size() != static_cast<std::int64_t>(side) * side) {
    raise(errc::length_mismatch,
          "vector of length " + std::to_string(phi.size()) +
              " does not unflatten to side " + std::to_string(side));
  }
  AccumulationImage img;
  img.side = side;
  img.values.resize(side, side);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      img.values(i, j) = phi[static_cast<std::int64_t>(i) * side + j];
    }
  }
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      if (!std::isfinite(img.values(i, j))) {
        raise(errc::invalid_argument, "non-finite accumulation value");
      }
    }
  }
  return img;
}

double center_concentration(const AccumulationImage& img, int inner_side) {
  if (inner_side <= 0 || inner_side >= img.side) {
    raise(errc::invalid_argument,
          "inner side must be in (0, side), got " + std::to_string(inner_side));
  }
  const int off = (img.side - inner_side) / 2;

  double window = 0.0;
  double ring = 0.0;
  std::int64_t window_count = 0;
  std::int64_t ring_count = 0;
  for (int i = 0; i < img.side; ++i) {
    for (int j = 0; j < img.side; ++j) {
      const bool inside = i >= off && i < off + inner_side && j >= off &&
                          j < off + inner_side;
      if (inside) {
        window += img.values(i, j);
        ++window_count;
      } else {
        ring += img.values(i, j);
        ++ring_count;
      }
    }
  }
  const double ring_mean = ring / static_cast<double>(ring_count);
  if (ring_mean == 0.0) {
    raise(errc::degenerate_ring, "complement ring mean is zero");
  }
  return (window / static_cast<double>(window_count)) / ring_mean;
}

}  // namespace mandala
