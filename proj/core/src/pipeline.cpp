#include "mandala/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <nlohmann/json.hpp>

#include "mandala/accumulation.hpp"
#include "mandala/image_io.hpp"
#include "mandala/serialize.hpp"

namespace mandala {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string population_source(int class_id, bool train_only,
                              GrayscaleMode mode) {
  std::string name = class_id >= 0 && class_id <= 9
                         ? kCifarClassNames[static_cast<std::size_t>(class_id)]
                         : "?";
  return "cifar10:class=" + std::to_string(class_id) + "(" + name +
         "):gray=" + to_string(mode) + (train_only ? ":train" : ":train+test");
}

}  // namespace

Variant default_variant(DistanceKind kind) {
  return kind == DistanceKind::kullback_leibler ? Variant::paper_exact
                                                : Variant::corrected;
}

GaussianPopulation estimate_stage(const std::filesystem::path& data_dir,
                                  int class_id, bool train_only,
                                  GrayscaleMode mode, double ridge) {
  ImageSet set = collect_class_from_dir(data_dir, class_id, train_only, mode);
  GaussianPopulation p = estimate_population(set.samples, ridge);
  p.source = population_source(class_id, train_only, mode);
  return p;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  const auto t0 = Clock::now();
  if (cfg.inner_side <= 0 || cfg.inner_side >= kCifarSide) {
    raise(errc::invalid_argument, "inner_side must be in (0, 32)");
  }
  for (int k : cfg.cluster_counts) {
    if (k < 1) raise(errc::invalid_argument, "cluster counts must be >= 1");
  }
  if (!(cfg.s >= 0.0 && cfg.s <= 1.0)) {
    raise(errc::s_out_of_range, "s = " + std::to_string(cfg.s));
  }
  const Variant variant = cfg.variant.value_or(default_variant(cfg.kind));
  std::filesystem::create_directories(cfg.out_dir);

  PipelineResult result;
  result.out_dir = cfg.out_dir;
  auto payload = [&](const std::filesystem::path& p) {
    result.payload_files.push_back(p);
    return p;
  };

  json manifest;
  manifest["settings"] = {
      {"dataDir", cfg.data_dir.string()},
      {"classPair", {cfg.class_a, cfg.class_b}},
      {"trainOnly", cfg.train_only},
      {"kind", to_string(cfg.kind)},
      {"s", cfg.s},
      {"variant", to_string(variant)},
      {"ridge", cfg.ridge},
      {"grayscale", to_string(cfg.grayscale)},
      {"symmetrize", to_string(cfg.symmetrize_mode)},
      {"clusterCounts", cfg.cluster_counts},
      {"innerSide", cfg.inner_side},
      {"mahalanobisPooled", cfg.kind == DistanceKind::mahalanobis},
  };

  // Populations.
  auto stage_start = Clock::now();
  GaussianPopulation pop_a = estimate_stage(cfg.data_dir, cfg.class_a,
                                            cfg.train_only, cfg.grayscale,
                                            cfg.ridge);
  GaussianPopulation pop_b = estimate_stage(cfg.data_dir, cfg.class_b,
                                            cfg.train_only, cfg.grayscale,
                                            cfg.ridge);
  save_population(cfg.out_dir / "pop_a", pop_a);
  save_population(cfg.out_dir / "pop_b", pop_b);
  for (const char* name : {"pop_a", "pop_b"}) {
    payload(cfg.out_dir / (std::string(name) + ".json"));
    payload(cfg.out_dir / (std::string(name) + ".mean.f64"));
    payload(cfg.out_dir / (std::string(name) + ".cov.f64"));
  }
  manifest["timings"]["estimateSeconds"] = seconds_since(stage_start);
  manifest["populations"] = {
      {"a", {{"class", cfg.class_a}, {"N", pop_a.count}, {"ridge", pop_a.ridge_applied}}},
      {"b", {{"class", cfg.class_b}, {"N", pop_b.count}, {"ridge", pop_b.ridge_applied}}},
  };

  // Distance matrix. Mahalanobis always runs pooled here: the class
  // covariances of real data are never equal.
  stage_start = Clock::now();
  DistanceMatrix dm = compute_distance_matrix(pop_a, pop_b, cfg.kind, cfg.s,
                                              variant, /*pooled_mode=*/true);
  save_distance_matrix(cfg.out_dir / "distmat", dm);
  payload(cfg.out_dir / "distmat.json");
  payload(cfg.out_dir / "distmat.f64");
  manifest["timings"]["distmatSeconds"] = seconds_since(stage_start);

  // Scalar cross-check.
  stage_start = Clock::now();
  result.report = scalar_report(pop_a, pop_b, cfg.s, variant);
  result.trace = dm.trace();
  switch (cfg.kind) {
    case DistanceKind::mahalanobis:
      result.expected_scalar = result.report.mahalanobis;
      break;
    case DistanceKind::bhattacharyya:
      result.expected_scalar =
          variant == Variant::paper_exact
              ? result.report.bhattacharyya +
                    0.5 * (pop_a.cov.log_det() + pop_b.cov.log_det())
              : result.report.bhattacharyya;
      break;
    case DistanceKind::chernoff:
      result.expected_scalar = result.report.chernoff;
      break;
    case DistanceKind::kullback_leibler:
      result.expected_scalar = result.report.kl;
      break;
  }
  result.trace_residual = std::abs(result.trace - result.expected_scalar) /
                          (1.0 + std::abs(result.expected_scalar));
  manifest["scalars"] = {
      {"mahalanobis", result.report.mahalanobis},
      {"bhattacharyya", result.report.bhattacharyya},
      {"chernoff", result.report.chernoff},
      {"kl", result.report.kl},
      {"hellinger", result.report.hellinger},
      {"s", result.report.s},
      {"variant", to_string(result.report.variant)},
  };
  manifest["traceCheck"] = {
      {"trace", result.trace},
      {"closedForm", result.expected_scalar},
      {"residual", result.trace_residual},
  };
  {
    std::ofstream rep(cfg.out_dir / "scalar_report.json");
    rep << manifest["scalars"].dump(2) << "\n";
  }
  manifest["timings"]["scalarSeconds"] = seconds_since(stage_start);

  // Accumulation image.
  stage_start = Clock::now();
  Vector phi = accumulate(dm);
  AccumulationImage acc = devectorize(phi, kCifarSide);
  acc.source_kind = std::string(to_string(cfg.kind)) + ":" +
                    to_string(variant) + ":s=" + std::to_string(cfg.s);
  save_accumulation_image(cfg.out_dir / "phi", acc);
  payload(cfg.out_dir / "phi.json");
  payload(cfg.out_dir / "phi.f64");
  payload(cfg.out_dir / "phi.pgm");
  write_ppm_heatmap(cfg.out_dir / "phi.ppm", acc.values);
  payload(cfg.out_dir / "phi.ppm");
  result.center_ratio = center_concentration(acc, cfg.inner_side);
  manifest["centerConcentration"] = {
      {"innerSide", cfg.inner_side},
      {"ratio", result.center_ratio},
  };
  manifest["timings"]["accumulateSeconds"] = seconds_since(stage_start);

  // Clustering.
  stage_start = Clock::now();
  Matrix delta = symmetrize(dm, cfg.symmetrize_mode);
  Dendrogram dn = agglomerate(delta);
  save_dendrogram(cfg.out_dir / "dendrogram.json", dn);
  payload(cfg.out_dir / "dendrogram.json");
  for (int k : cfg.cluster_counts) {
    ClusterLabeling labeling = cut(dn, k);
    LabelImage li = label_image(labeling, acc);
    const std::string stem = "labels_k" + std::to_string(k);
    save_label_image(cfg.out_dir / stem, li);
    payload(cfg.out_dir / (stem + ".json"));
    payload(cfg.out_dir / (stem + ".pgm"));
    write_ppm_labels(cfg.out_dir / (stem + ".ppm"), li.grid, li.side,
                     labeling.k);
    payload(cfg.out_dir / (stem + ".ppm"));
  }
  if (cfg.cluster_threshold) {
    ClusterLabeling labeling = cut_at_threshold(dn, *cfg.cluster_threshold);
    LabelImage li = label_image(labeling, acc);
    save_label_image(cfg.out_dir / "labels_threshold", li);
    payload(cfg.out_dir / "labels_threshold.pgm");
  }
  manifest["timings"]["clusterSeconds"] = seconds_since(stage_start);

  // Hashes over every payload file.
  for (const auto& file : result.payload_files) {
    manifest["hashes"][file.filename().string()] = sha256_file(file);
  }

  result.seconds_total = seconds_since(t0);
  manifest["timings"]["totalSeconds"] = result.seconds_total;
  {
    std::ofstream out(cfg.out_dir / "manifest.json");
    out << manifest.dump(2) << "\n";
  }
  return result;
}

}  // namespace mandala
