#pragma once

#include <string>

#include "mandala/distance.hpp"
#include "mandala/linalg.hpp"

namespace mandala {

/// Per-pixel accumulated distance, devectorized back onto the image grid.
struct AccumulationImage {
  int side = 0;
  Matrix values;  // side x side
  std::string source_kind;

  double operator()(int i, int j) const { return values(i, j); }
};

/// phi_t = sum_u delta(u,t) + sum_v delta(t,v): column sum plus row sum, the
/// diagonal entering twice, exactly as the imaging formula reads.
Vector accumulate(const GeneralSquareMatrix& delta);
Vector accumulate(const DistanceMatrix& d);

/// Row-major flattening of a square grid (matches CIFAR pixel order) and its
/// inverse. devectorize(vectorize(img)) == img exactly; the pair is a pure
/// index permutation.
Vector vectorize(const Matrix& grid);
AccumulationImage devectorize(const Vector& phi, int side);

/// mean(central inner x inner window) / mean(complement ring), the window
/// offset by floor((side - inner)/2). Throws DegenerateRing when the ring
/// mean is exactly zero.
double center_concentration(const AccumulationImage& img, int inner_side);

}  // namespace mandala
