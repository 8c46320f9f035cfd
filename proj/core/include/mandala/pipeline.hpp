#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "mandala/cifar.hpp"
#include "mandala/clustering.hpp"
#include "mandala/distance.hpp"

namespace mandala {

/// End-to-end run configuration. Defaults follow the CIFAR experiment:
/// s = 0.3, ridge = 1e-6 (times the mean covariance diagonal), three- and
/// ten-cluster cuts, mean symmetrization, luma grayscale.
struct PipelineConfig {
  std::filesystem::path data_dir;
  int class_a = 3;  // cat
  int class_b = 5;  // dog
  bool train_only = true;
  DistanceKind kind = DistanceKind::bhattacharyya;
  double s = 0.3;
  /// Unset picks the reproduction default per kind: corrected for
  /// Bhattacharyya/Chernoff, paper-exact for Kullback-Leibler.
  std::optional<Variant> variant;
  double ridge = 1e-6;
  GrayscaleMode grayscale = GrayscaleMode::luma601;
  SymmetrizeMode symmetrize_mode = SymmetrizeMode::mean;
  std::vector<int> cluster_counts = {3, 10};
  std::optional<double> cluster_threshold;  // extra cut_at_threshold output
  int inner_side = 16;  // center-concentration window
  std::filesystem::path out_dir;
};

Variant default_variant(DistanceKind kind);

/// What run_pipeline measured; everything here is also in manifest.json.
struct PipelineResult {
  std::filesystem::path out_dir;
  double trace = 0.0;
  double expected_scalar = 0.0;  // closed form matching kind and variant
  double trace_residual = 0.0;   // |trace - scalar| / (1 + |scalar|)
  double center_ratio = 0.0;
  ScalarDistanceReport report;
  double seconds_total = 0.0;
  /// Files subject to the byte-identical determinism guarantee (manifest
  /// excluded: it carries timings).
  std::vector<std::filesystem::path> payload_files;
};

/// Loads one class from the CIFAR directory and fits its population.
GaussianPopulation estimate_stage(const std::filesystem::path& data_dir,
                                  int class_id, bool train_only,
                                  GrayscaleMode mode, double ridge);

/// Full pipeline: two populations, distance matrix, scalar report,
/// accumulation image, dendrogram, one labeling per cluster count, rendered
/// previews, and manifest.json with settings, hashes, residuals and the
/// center-concentration ratio.
PipelineResult run_pipeline(const PipelineConfig& cfg);

}  // namespace mandala
