#include "mandala/cifar.hpp"

#include <algorithm>
#include <fstream>

namespace mandala {

const std::array<const char*, 10> kCifarClassNames = {
    "airplane", "automobile", "bird", "cat",   "deer",
    "dog",      "frog",       "horse", "ship", "truck"};

const char* to_string(GrayscaleMode m) noexcept {
  return m == GrayscaleMode::luma601 ? "luma601" : "channel-mean";
}

GrayscaleMode grayscale_mode_from_string(const std::string& s) {
  if (s == "luma601" || s == "luma") return GrayscaleMode::luma601;
  if (s == "channel-mean" || s == "mean") return GrayscaleMode::channel_mean;
  raise(errc::invalid_argument, "unknown grayscale mode '" + s + "'");
}

std::vector<CifarRecord> read_batch(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary | std::ios::ate);
  if (!file.is_open()) {
    raise(errc::io_error, "cannot open '" + path.string() + "'");
  }
  const std::streamoff size = file.tellg();
  if (size % static_cast<std::streamoff>(kCifarRecordBytes) != 0) {
    raise(errc::malformed_file,
          "'" + path.string() + "' is " + std::to_string(size) +
              " bytes, not a multiple of " + std::to_string(kCifarRecordBytes));
  }
  file.seekg(0, std::ios::beg);

  const std::size_t count = static_cast<std::size_t>(size) / kCifarRecordBytes;
  std::vector<CifarRecord> records(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::array<char, kCifarRecordBytes> buf;
    if (!file.read(buf.data(), buf.size())) {
      raise(errc::io_error, "short read in '" + path.string() + "'");
    }
    records[i].label = static_cast<std::uint8_t>(buf[0]);
    if (records[i].label > 9) {
      raise(errc::malformed_file,
            "record " + std::to_string(i) + " in '" + path.string() +
                "' has label " + std::to_string(records[i].label));
    }
    std::copy(buf.begin() + 1, buf.end(),
              reinterpret_cast<char*>(records[i].pixels.data()));
  }
  return records;
}

Vector to_grayscale_unit(const CifarRecord& r, GrayscaleMode mode) {
  Vector out(kCifarPixels);
  for (int t = 0; t < kCifarPixels; ++t) {
    const double red = r.pixels[t];
    const double green = r.pixels[kCifarPixels + t];
    const double blue = r.pixels[2 * kCifarPixels + t];
    double y = 0.0;
    switch (mode) {
      case GrayscaleMode::luma601:
        y = (0.299 * red + 0.587 * green + 0.114 * blue) / 255.0;
        break;
      case GrayscaleMode::channel_mean:
        y = (red + green + blue) / (3.0 * 255.0);
        break;
    }
    out[t] = std::clamp(y, 0.0, 1.0);
  }
  return out;
}

ImageSet collect_class(const std::vector<std::vector<CifarRecord>>& batches,
                       int class_id, GrayscaleMode mode) {
  if (class_id < 0 || class_id > 9) {
    raise(errc::invalid_argument,
          "class id must be 0..9, got " + std::to_string(class_id));
  }
  std::int64_t matches = 0;
  for (const auto& batch : batches) {
    for (const auto& record : batch) {
      if (record.label == class_id) ++matches;
    }
  }
  if (matches == 0) {
    raise(errc::class_not_found,
          "no records with class " + std::to_string(class_id));
  }

  ImageSet set;
  set.class_id = class_id;
  set.gray = mode;
  set.samples.samples.resize(matches, kCifarPixels);
  std::int64_t row = 0;
  for (const auto& batch : batches) {
    for (const auto& record : batch) {
      if (record.label != class_id) continue;
      set.samples.samples.row(row++) = to_grayscale_unit(record, mode);
    }
  }
  return set;
}

std::vector<std::filesystem::path> batch_files(
    const std::filesystem::path& data_dir, bool train_only) {
  std::vector<std::filesystem::path> files;
  for (int i = 1; i <= 5; ++i) {
    files.push_back(data_dir / ("data_batch_" + std::to_string(i) + ".bin"));
  }
  if (!train_only) {
    files.push_back(data_dir / "test_batch.bin");
  }
  return files;
}

ImageSet collect_class_from_dir(const std::filesystem::path& data_dir,
                                int class_id, bool train_only,
                                GrayscaleMode mode) {
  std::vector<std::vector<CifarRecord>> batches;
  for (const auto& file : batch_files(data_dir, train_only)) {
    batches.push_back(read_batch(file));
  }
  return collect_class(batches, class_id, mode);
}

std::string dataset_help() {
  return
      "CIFAR-10 binary version (not downloaded by this tool):\n"
      "  archive : cifar-10-binary.tar.gz from the CIFAR-10 homepage\n"
      "            (https://www.cs.toronto.edu/~kriz/cifar.html)\n"
      "  md5     : c32a1d4ab5d03f1284b67883e8d87530\n"
      "  layout  : point --data-dir (or CIFAR10_DATA_DIR) at the directory\n"
      "            containing the extracted .bin files:\n"
      "              data_batch_1.bin .. data_batch_5.bin   (training)\n"
      "              test_batch.bin                         (test)\n"
      "  format  : 10000 records per file, 3073 bytes each\n"
      "            (30730000 bytes per file); record = 1 label byte +\n"
      "            1024 R + 1024 G + 1024 B bytes, rows left to right\n"
      "  classes : 0 airplane, 1 automobile, 2 bird, 3 cat, 4 deer,\n"
      "            5 dog, 6 frog, 7 horse, 8 ship, 9 truck\n";
}

}  // namespace mandala
