#pragma once

#include <filesystem>
#include <vector>

#include "mandala/linalg.hpp"

namespace mandala {

/// Min-max bounds used to normalize an image for export; recorded in the
/// JSON sidecar so renders stay reproducible.
struct NormalizationBounds {
  double min = 0.0;
  double max = 0.0;
};

/// 16-bit binary PGM (P5, maxval 65535, most significant byte first).
/// Values are normalized per image: v -> round((v - min)/(max - min) * 65535);
/// a constant image writes all zeros. Returns the bounds used.
NormalizationBounds write_pgm16(const std::filesystem::path& path,
                                const Matrix& values);

/// 8-bit binary PGM of small integer labels, written verbatim
/// (maxval = max(1, k-1)). Throws InvalidArgument for k > 256.
void write_label_pgm(const std::filesystem::path& path,
                     const std::vector<int>& grid, int side, int k);

/// 8-bit binary PPM (P6) under the built-in perceptually-uniform ramp
/// (viridis-like), min-max normalized. Returns the bounds used.
NormalizationBounds write_ppm_heatmap(const std::filesystem::path& path,
                                      const Matrix& values);

/// Same ramp applied to integer labels spread evenly over [0,1]; useful for
/// rendering cluster label images.
void write_ppm_labels(const std::filesystem::path& path,
                      const std::vector<int>& grid, int side, int k);

}  // namespace mandala
