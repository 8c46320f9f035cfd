#include "mandala/serialize.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

#include "mandala/image_io.hpp"

static_assert(std::endian::native == std::endian::little,
              "raw f64 payloads are little-endian; add byte swapping before "
              "building on a big-endian target");

namespace mandala {

namespace {

using nlohmann::json;

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    raise(errc::io_error, "cannot open '" + path.string() + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    raise(errc::malformed_file, "'" + path.string() + "': " + e.what());
  }
  return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out.is_open()) {
    raise(errc::io_error, "cannot write '" + path.string() + "'");
  }
  out << j.dump(2) << "\n";
  if (!out) raise(errc::io_error, "write failed for '" + path.string() + "'");
}

std::filesystem::path with_suffix(const std::filesystem::path& stem,
                                  const char* suffix) {
  std::filesystem::path p = stem;
  p += suffix;
  return p;
}

}  // namespace

void write_raw_f64(const std::filesystem::path& path, const double* data,
                   std::size_t count) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) {
    raise(errc::io_error, "cannot write '" + path.string() + "'");
  }
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(count * sizeof(double)));
  if (!out) raise(errc::io_error, "write failed for '" + path.string() + "'");
}

std::vector<double> read_raw_f64(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in.is_open()) {
    raise(errc::io_error, "cannot open '" + path.string() + "'");
  }
  const std::streamoff size = in.tellg();
  if (size % sizeof(double) != 0) {
    raise(errc::malformed_file,
          "'" + path.string() + "' is not a whole number of binary64 values");
  }
  in.seekg(0, std::ios::beg);
  std::vector<double> data(static_cast<std::size_t>(size) / sizeof(double));
  if (!in.read(reinterpret_cast<char*>(data.data()), size)) {
    raise(errc::io_error, "short read in '" + path.string() + "'");
  }
  return data;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    raise(errc::io_error, "cannot open '" + path.string() + "'");
  }
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);

  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

void save_population(const std::filesystem::path& stem,
                     const GaussianPopulation& p) {
  const auto mean_path = with_suffix(stem, ".mean.f64");
  const auto cov_path = with_suffix(stem, ".cov.f64");
  write_raw_f64(mean_path, p.mean.data(), static_cast<std::size_t>(p.dim()));

  // Covariance goes out row-major regardless of in-memory layout.
  const int n = p.dim();
  std::vector<double> row_major(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      row_major[static_cast<std::size_t>(i) * n + j] = p.cov.mat()(i, j);
    }
  }
  write_raw_f64(cov_path, row_major.data(), row_major.size());

  write_json(with_suffix(stem, ".json"),
             json{{"n", p.dim()},
                  {"N", p.count},
                  {"ridge", p.ridge_applied},
                  {"kindOfSource", p.source},
                  {"files",
                   {{"mean", mean_path.filename().string()},
                    {"cov", cov_path.filename().string()}}}});
}

GaussianPopulation load_population(const std::filesystem::path& stem) {
  const json j = read_json(with_suffix(stem, ".json"));
  const int n = j.at("n").get<int>();

  const auto mean = read_raw_f64(with_suffix(stem, ".mean.f64"));
  const auto cov = read_raw_f64(with_suffix(stem, ".cov.f64"));
  if (static_cast<int>(mean.size()) != n ||
      cov.size() != static_cast<std::size_t>(n) * n) {
    raise(errc::malformed_file,
          "payload sizes do not match n=" + std::to_string(n));
  }

  Matrix c(n, n);
  for (int i = 0; i < n; ++i) {
    for (int jj = 0; jj < n; ++jj) {
      c(i, jj) = cov[static_cast<std::size_t>(i) * n + jj];
    }
  }
  GaussianPopulation p{
      .mean = Eigen::Map<const Vector>(mean.data(), n),
      .cov = SpdMatrix(SymMatrix(std::move(c))),
      .count = j.at("N").get<std::int64_t>(),
      .ridge_applied = j.at("ridge").get<double>(),
      .source = j.at("kindOfSource").get<std::string>(),
  };
  return p;
}

void save_distance_matrix(const std::filesystem::path& stem,
                          const DistanceMatrix& d) {
  const int n = d.dim();
  std::vector<double> row_major(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      row_major[static_cast<std::size_t>(i) * n + j] = d.matrix(i, j);
    }
  }
  const auto payload = with_suffix(stem, ".f64");
  write_raw_f64(payload, row_major.data(), row_major.size());

  write_json(with_suffix(stem, ".json"),
             json{{"kind", to_string(d.kind)},
                  {"s", d.s},
                  {"variant", to_string(d.variant)},
                  {"n", n},
                  {"trace", d.trace()},
                  {"pooled", d.pooled},
                  {"ridge", {{"p", d.ridge_p}, {"q", d.ridge_q}}},
                  {"file", payload.filename().string()}});
}

DistanceMatrix load_distance_matrix(const std::filesystem::path& stem) {
  const json j = read_json(with_suffix(stem, ".json"));
  const int n = j.at("n").get<int>();
  const auto data = read_raw_f64(with_suffix(stem, ".f64"));
  if (data.size() != static_cast<std::size_t>(n) * n) {
    raise(errc::malformed_file,
          "payload size does not match n=" + std::to_string(n));
  }
  DistanceMatrix d;
  d.kind = distance_kind_from_string(j.at("kind").get<std::string>());
  d.s = j.at("s").get<double>();
  d.variant = variant_from_string(j.at("variant").get<std::string>());
  d.pooled = j.at("pooled").get<bool>();
  d.ridge_p = j.at("ridge").at("p").get<double>();
  d.ridge_q = j.at("ridge").at("q").get<double>();
  d.matrix.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int jj = 0; jj < n; ++jj) {
      d.matrix(i, jj) = data[static_cast<std::size_t>(i) * n + jj];
    }
  }
  return d;
}

void save_accumulation_image(const std::filesystem::path& stem,
                             const AccumulationImage& img) {
  const int side = img.side;
  std::vector<double> row_major(static_cast<std::size_t>(side) * side);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      row_major[static_cast<std::size_t>(i) * side + j] = img.values(i, j);
    }
  }
  write_raw_f64(with_suffix(stem, ".f64"), row_major.data(), row_major.size());

  const auto pgm = with_suffix(stem, ".pgm");
  const NormalizationBounds b = write_pgm16(pgm, img.values);
  write_json(with_suffix(stem, ".json"),
             json{{"side", side},
                  {"sourceKind", img.source_kind},
                  {"normalization", {{"min", b.min}, {"max", b.max}}},
                  {"files",
                   {{"raw", with_suffix(stem, ".f64").filename().string()},
                    {"pgm", pgm.filename().string()}}}});
}

AccumulationImage load_accumulation_image(const std::filesystem::path& stem) {
  const json j = read_json(with_suffix(stem, ".json"));
  const int side = j.at("side").get<int>();
  const auto data = read_raw_f64(with_suffix(stem, ".f64"));
  if (data.size() != static_cast<std::size_t>(side) * side) {
    raise(errc::malformed_file, "accumulation payload size mismatch");
  }
  AccumulationImage img =
      devectorize(Eigen::Map<const Vector>(data.data(),
                                           static_cast<Eigen::Index>(data.size())),
                  side);
  img.source_kind = j.at("sourceKind").get<std::string>();
  return img;
}

void save_dendrogram(const std::filesystem::path& path, const Dendrogram& dn) {
  json merges = json::array();
  for (const Merge& m : dn.merges) {
    merges.push_back(json{{"a", m.a},
                          {"b", m.b},
                          {"distance", m.distance},
                          {"newNode", m.new_node}});
  }
  write_json(path, json{{"leafCount", dn.leaf_count}, {"merges", merges}});
}

Dendrogram load_dendrogram(const std::filesystem::path& path) {
  const json j = read_json(path);
  Dendrogram dn;
  dn.leaf_count = j.at("leafCount").get<int>();
  for (const auto& m : j.at("merges")) {
    dn.merges.push_back(Merge{m.at("a").get<int>(), m.at("b").get<int>(),
                              m.at("distance").get<double>(),
                              m.at("newNode").get<int>()});
  }
  if (static_cast<int>(dn.merges.size()) != dn.leaf_count - 1) {
    raise(errc::malformed_file, "dendrogram must have leafCount - 1 merges");
  }
  return dn;
}

void save_label_image(const std::filesystem::path& stem, const LabelImage& li) {
  const int k = static_cast<int>(li.legend.size());
  write_label_pgm(with_suffix(stem, ".pgm"), li.grid, li.side, k);

  json legend = json::array();
  for (std::size_t rank = 0; rank < li.legend.size(); ++rank) {
    const ClusterLegendEntry& e = li.legend[rank];
    legend.push_back(json{{"rank", rank},
                          {"label", e.label},
                          {"meanPhi", e.mean_phi},
                          {"pixels", e.pixels}});
  }
  write_json(with_suffix(stem, ".json"),
             json{{"side", li.side},
                  {"k", k},
                  {"legend", legend},
                  {"grid", li.grid},
                  {"files", {{"pgm", with_suffix(stem, ".pgm").filename().string()}}}});
}

LabelImage load_label_image(const std::filesystem::path& stem) {
  const json j = read_json(with_suffix(stem, ".json"));
  LabelImage li;
  li.side = j.at("side").get<int>();
  li.grid = j.at("grid").get<std::vector<int>>();
  if (static_cast<std::int64_t>(li.grid.size()) !=
      static_cast<std::int64_t>(li.side) * li.side) {
    raise(errc::malformed_file, "label grid size mismatch");
  }
  for (const auto& e : j.at("legend")) {
    li.legend.push_back(ClusterLegendEntry{e.at("label").get<int>(),
                                           e.at("meanPhi").get<double>(),
                                           e.at("pixels").get<std::int64_t>()});
  }
  return li;
}

}  // namespace mandala
