#include "mandala/image_io.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>

namespace mandala {

namespace {

std::ofstream open_binary(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) {
    raise(errc::io_error, "cannot write '" + path.string() + "'");
  }
  return out;
}

// Anchor colors of the built-in ramp (dark violet to yellow), interpolated
// linearly in RGB.
constexpr std::array<std::array<std::uint8_t, 3>, 11> kRamp = {{
    {68, 1, 84},
    {72, 35, 116},
    {64, 67, 135},
    {52, 94, 141},
    {41, 120, 142},
    {32, 144, 140},
    {34, 167, 132},
    {68, 190, 112},
    {121, 209, 81},
    {189, 222, 38},
    {253, 231, 37},
}};

std::array<std::uint8_t, 3> ramp_color(double u) {
  u = std::clamp(u, 0.0, 1.0);
  const double pos = u * (kRamp.size() - 1);
  const int lo = std::min<int>(static_cast<int>(pos), kRamp.size() - 2);
  const double frac = pos - lo;
  std::array<std::uint8_t, 3> rgb;
  for (int c = 0; c < 3; ++c) {
    const double v = kRamp[lo][c] + frac * (kRamp[lo + 1][c] - kRamp[lo][c]);
    rgb[c] = static_cast<std::uint8_t>(std::lround(v));
  }
  return rgb;
}

NormalizationBounds bounds_of(const Matrix& values) {
  return NormalizationBounds{values.minCoeff(), values.maxCoeff()};
}

}  // namespace

NormalizationBounds write_pgm16(const std::filesystem::path& path,
                                const Matrix& values) {
  const NormalizationBounds b = bounds_of(values);
  const double span = b.max - b.min;
  auto out = open_binary(path);
  out << "P5\n" << values.cols() << " " << values.rows() << "\n65535\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      std::uint16_t v = 0;
      if (span > 0.0) {
        v = static_cast<std::uint16_t>(
            std::lround((values(i, j) - b.min) / span * 65535.0));
      }
      const char bytes[2] = {static_cast<char>(v >> 8),
                             static_cast<char>(v & 0xff)};
      out.write(bytes, 2);
    }
  }
  if (!out) raise(errc::io_error, "write failed for '" + path.string() + "'");
  return b;
}

void write_label_pgm(const std::filesystem::path& path,
                     const std::vector<int>& grid, int side, int k) {
  if (k > 256) {
    raise(errc::invalid_argument,
          "label PGM supports at most 256 clusters, got " + std::to_string(k));
  }
  if (static_cast<std::int64_t>(grid.size()) !=
      static_cast<std::int64_t>(side) * side) {
    raise(errc::size_mismatch, "label grid does not match side");
  }
  auto out = open_binary(path);
  out << "P5\n" << side << " " << side << "\n" << std::max(1, k - 1) << "\n";
  for (int v : grid) {
    const char byte = static_cast<char>(static_cast<std::uint8_t>(v));
    out.write(&byte, 1);
  }
  if (!out) raise(errc::io_error, "write failed for '" + path.string() + "'");
}

NormalizationBounds write_ppm_heatmap(const std::filesystem::path& path,
                                      const Matrix& values) {
  const NormalizationBounds b = bounds_of(values);
  const double span = b.max - b.min;
  auto out = open_binary(path);
  out << "P6\n" << values.cols() << " " << values.rows() << "\n255\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const double u = span > 0.0 ? (values(i, j) - b.min) / span : 0.0;
      const auto rgb = ramp_color(u);
      out.write(reinterpret_cast<const char*>(rgb.data()), 3);
    }
  }
  if (!out) raise(errc::io_error, "write failed for '" + path.string() + "'");
  return b;
}

void write_ppm_labels(const std::filesystem::path& path,
                      const std::vector<int>& grid, int side, int k) {
  if (static_cast<std::int64_t>(grid.size()) !=
      static_cast<std::int64_t>(side) * side) {
    raise(errc::size_mismatch, "label grid does not match side");
  }
  auto out = open_binary(path);
  out << "P6\n" << side << " " << side << "\n255\n";
  for (int v : grid) {
    const double u = k > 1 ? static_cast<double>(v) / (k - 1) : 0.0;
    const auto rgb = ramp_color(u);
    out.write(reinterpret_cast<const char*>(rgb.data()), 3);
  }
  if (!out) raise(errc::io_error, "write failed for '" + path.string() + "'");
}

}  // namespace mandala
