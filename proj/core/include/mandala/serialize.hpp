#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mandala/accumulation.hpp"
#include "mandala/clustering.hpp"
#include "mandala/distance.hpp"
#include "mandala/gaussian.hpp"

namespace mandala {

/// Raw payloads are little-endian IEEE 754 binary64, row-major for matrices.
void write_raw_f64(const std::filesystem::path& path, const double* data,
                   std::size_t count);
std::vector<double> read_raw_f64(const std::filesystem::path& path);

/// SHA-256 of a file, lowercase hex. Recorded in manifests.
std::string sha256_file(const std::filesystem::path& path);

/// Population bundle: <stem>.json metadata {n, N, ridge, kindOfSource} plus
/// <stem>.mean.f64 and <stem>.cov.f64 payloads.
void save_population(const std::filesystem::path& stem,
                     const GaussianPopulation& p);
GaussianPopulation load_population(const std::filesystem::path& stem);

/// Distance matrix bundle: <stem>.json header {kind, s, variant, n, trace,
/// ridge metadata} plus the <stem>.f64 payload.
void save_distance_matrix(const std::filesystem::path& stem,
                          const DistanceMatrix& d);
DistanceMatrix load_distance_matrix(const std::filesystem::path& stem);

/// Accumulation image bundle: <stem>.json sidecar (side, source, pgm
/// normalization bounds), <stem>.f64 raw values, <stem>.pgm 16-bit preview.
void save_accumulation_image(const std::filesystem::path& stem,
                             const AccumulationImage& img);
AccumulationImage load_accumulation_image(const std::filesystem::path& stem);

/// Dendrogram: JSON array of {a, b, distance, newNode}.
void save_dendrogram(const std::filesystem::path& path, const Dendrogram& dn);
Dendrogram load_dendrogram(const std::filesystem::path& path);

/// Labeling bundle: <stem>.pgm index image plus <stem>.json legend with per
/// cluster mean accumulation and pixel count, in rank order. The JSON also
/// carries the raw grid so the bundle reloads without a PGM parser.
void save_label_image(const std::filesystem::path& stem, const LabelImage& li);
LabelImage load_label_image(const std::filesystem::path& stem);

}  // namespace mandala
