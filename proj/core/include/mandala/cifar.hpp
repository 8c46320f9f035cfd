#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mandala/gaussian.hpp"

namespace mandala {

/// One CIFAR-10 record as laid out on disk: a label byte followed by 3072
/// pixel bytes (1024 red, 1024 green, 1024 blue; each plane row-major 32x32).
struct CifarRecord {
  std::uint8_t label = 0;
  std::array<std::uint8_t, 3072> pixels{};
};

inline constexpr int kCifarSide = 32;
inline constexpr int kCifarPixels = kCifarSide * kCifarSide;  // 1024
inline constexpr std::size_t kCifarRecordBytes = 1 + 3 * kCifarPixels;

extern const std::array<const char*, 10> kCifarClassNames;

/// How the three color channels collapse to the single grayscale channel.
enum class GrayscaleMode { luma601, channel_mean };

const char* to_string(GrayscaleMode m) noexcept;
GrayscaleMode grayscale_mode_from_string(const std::string& s);

/// Grayscale 32x32 images of one class, vectorized row-major into [0,1]^1024
/// sample rows.
struct ImageSet {
  int class_id = -1;
  int side = kCifarSide;
  GrayscaleMode gray = GrayscaleMode::luma601;
  SampleSet samples;
};

/// Parses one binary batch file. The file size must be an exact multiple of
/// the 3073-byte record (MalformedFile otherwise); records keep file order.
std::vector<CifarRecord> read_batch(const std::filesystem::path& path);

/// Grayscale conversion into [0,1]:
///   luma601:       (0.299 R + 0.587 G + 0.114 B) / 255
///   channel_mean:  (R + G + B) / (3 * 255)
/// Row-major pixel order is preserved.
Vector to_grayscale_unit(const CifarRecord& r,
                         GrayscaleMode mode = GrayscaleMode::luma601);

/// All records matching class_id across the given batches, in
/// batch-then-record order. Throws ClassNotFound when nothing matches.
ImageSet collect_class(const std::vector<std::vector<CifarRecord>>& batches,
                       int class_id,
                       GrayscaleMode mode = GrayscaleMode::luma601);

/// The five training batch files (data_batch_1.bin .. data_batch_5.bin), or
/// those plus test_batch.bin.
std::vector<std::filesystem::path> batch_files(
    const std::filesystem::path& data_dir, bool train_only);

/// Convenience: read the batches under data_dir and collect one class.
ImageSet collect_class_from_dir(const std::filesystem::path& data_dir,
                                int class_id, bool train_only,
                                GrayscaleMode mode = GrayscaleMode::luma601);

/// Human-readable description of the expected directory layout, file sizes,
/// and the published archive checksum. Printed by the CLI; nothing is ever
/// downloaded.
std::string dataset_help();

}  // namespace mandala
