// Command-line frontend: each pipeline stage is resumable from the
// serialized artifacts of the previous one, so the expensive covariance
// estimation runs once per class.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mandala/accumulation.hpp"
#include "mandala/cifar.hpp"
#include "mandala/clustering.hpp"
#include "mandala/distance.hpp"
#include "mandala/errors.hpp"
#include "mandala/image_io.hpp"
#include "mandala/parallel.hpp"
#include "mandala/pipeline.hpp"
#include "mandala/serialize.hpp"
#include "mandala/verify.hpp"

namespace {

namespace fs = std::filesystem;
using namespace mandala;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitInputError = 3;

fs::path resolve_data_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("CIFAR10_DATA_DIR")) return env;
  raise(errc::invalid_argument,
        "no data directory: pass --data-dir or set CIFAR10_DATA_DIR\n" +
            dataset_help());
}

bool is_input_error(errc code) {
  switch (code) {
    case errc::io_error:
    case errc::malformed_file:
    case errc::class_not_found:
    case errc::invalid_argument:
    case errc::s_out_of_range:
    case errc::k_out_of_range:
    case errc::length_mismatch:
    case errc::size_mismatch:
    case errc::dim_mismatch:
      return true;
    default:
      return false;
  }
}

struct CommonFlags {
  std::string data_dir;
  int threads = 0;
};

int run(CLI::App& app, int argc, char** argv) {
  CommonFlags common;
  app.add_option("--threads", common.threads,
                 "Worker cap for parallel stages (0 = hardware)");

  // ---- estimate ----------------------------------------------------------
  auto* estimate = app.add_subcommand(
      "estimate", "Fit a Gaussian population to one CIFAR-10 class");
  int est_class = 3;
  double est_ridge = 1e-6;
  bool est_all_batches = false;
  std::string est_gray = "luma601";
  std::string est_out;
  estimate->add_option("--data-dir", common.data_dir, "CIFAR-10 binary dir");
  estimate->add_option("--class", est_class, "Class id 0..9")->required();
  estimate->add_option("--ridge", est_ridge, "Ridge multiplier")->capture_default_str();
  estimate->add_option("--gray", est_gray, "luma601 | channel-mean")->capture_default_str();
  estimate->add_flag("--include-test-batch", est_all_batches,
                     "Use all six batches instead of the five training ones");
  estimate->add_option("--out", est_out, "Output stem (3 files)")->required();
  estimate->callback([&] {
    set_max_threads(common.threads);
    GaussianPopulation p = estimate_stage(
        resolve_data_dir(common.data_dir), est_class, !est_all_batches,
        grayscale_mode_from_string(est_gray), est_ridge);
    save_population(est_out, p);
    std::cout << "population: n=" << p.dim() << " N=" << p.count
              << " ridge=" << p.ridge_applied << " -> " << est_out
              << ".{json,mean.f64,cov.f64}\n";
  });

  // ---- distmat -----------------------------------------------------------
  auto* distmat = app.add_subcommand(
      "distmat", "Compute a statistical distance matrix of two populations");
  std::string dm_pop_a, dm_pop_b, dm_kind = "bhattacharyya", dm_variant;
  double dm_s = 0.3;
  bool dm_pooled = false;
  std::string dm_out;
  distmat->add_option("--pop-a", dm_pop_a, "Population stem")->required();
  distmat->add_option("--pop-b", dm_pop_b, "Population stem")->required();
  distmat->add_option("--kind", dm_kind,
                      "mahalanobis | bhattacharyya | chernoff | kl")->capture_default_str();
  distmat->add_option("--s", dm_s, "Chernoff exponent in [0,1]")->capture_default_str();
  distmat->add_option("--variant", dm_variant, "paper-exact | corrected");
  distmat->add_flag("--pooled", dm_pooled,
                    "Mahalanobis: average the two covariances");
  distmat->add_option("--out", dm_out, "Output stem (2 files)")->required();
  distmat->callback([&] {
    GaussianPopulation a = load_population(dm_pop_a);
    GaussianPopulation b = load_population(dm_pop_b);
    const DistanceKind kind = distance_kind_from_string(dm_kind);
    const Variant variant = dm_variant.empty()
                                ? default_variant(kind)
                                : variant_from_string(dm_variant);
    DistanceMatrix dm = compute_distance_matrix(a, b, kind, dm_s, variant,
                                                dm_pooled);
    save_distance_matrix(dm_out, dm);

    ScalarDistanceReport rep = scalar_report(a, b, dm_s, variant);
    std::cout << "kind=" << to_string(dm.kind) << " variant="
              << to_string(dm.variant) << " trace=" << dm.trace()
              << " dM=" << rep.mahalanobis << " dB=" << rep.bhattacharyya
              << " dC=" << rep.chernoff << " dKL=" << rep.kl
              << " dH=" << rep.hellinger << "\n";
  });

  // ---- accumulate --------------------------------------------------------
  auto* acc_cmd = app.add_subcommand(
      "accumulate", "Collapse a distance matrix to an accumulation image");
  std::string acc_in, acc_out;
  int acc_side = 0;
  acc_cmd->add_option("--distmat", acc_in, "Distance matrix stem")->required();
  acc_cmd->add_option("--side", acc_side,
                      "Image side (default: sqrt of the matrix dim)");
  acc_cmd->add_option("--out", acc_out, "Output stem (3 files)")->required();
  acc_cmd->callback([&] {
    DistanceMatrix dm = load_distance_matrix(acc_in);
    int side = acc_side;
    if (side == 0) {
      side = static_cast<int>(std::lround(std::sqrt(double(dm.dim()))));
    }
    AccumulationImage img = devectorize(accumulate(dm), side);
    img.source_kind = std::string(to_string(dm.kind)) + ":" +
                      to_string(dm.variant) + ":s=" + std::to_string(dm.s);
    save_accumulation_image(acc_out, img);
    std::cout << "accumulation image " << side << "x" << side << " -> "
              << acc_out << ".{json,f64,pgm}\n";
  });

  // ---- cluster -----------------------------------------------------------
  auto* cluster_cmd = app.add_subcommand(
      "cluster", "Complete-linkage clustering of a distance matrix");
  std::string cl_in, cl_acc, cl_mode = "mean", cl_out;
  std::vector<int> cl_counts = {3, 10};
  std::optional<double> cl_threshold;
  double cl_threshold_value = 0.0;
  cluster_cmd->add_option("--distmat", cl_in, "Distance matrix stem")
      ->required();
  cluster_cmd->add_option("--acc", cl_acc,
                          "Accumulation image stem (legend ordering)")
      ->required();
  cluster_cmd->add_option("--symmetrize", cl_mode, "mean | abs-mean | max")
      ->capture_default_str();
  cluster_cmd->add_option("--clusters", cl_counts, "Cluster counts")->capture_default_str();
  auto* thr_opt = cluster_cmd->add_option("--threshold", cl_threshold_value,
                                          "Also cut at this merge distance");
  cluster_cmd->add_option("--out", cl_out, "Output prefix")->required();
  cluster_cmd->callback([&] {
    DistanceMatrix dm = load_distance_matrix(cl_in);
    AccumulationImage acc = load_accumulation_image(cl_acc);
    Dendrogram dn = agglomerate(symmetrize(dm, symmetrize_mode_from_string(cl_mode)));
    save_dendrogram(cl_out + ".dendrogram.json", dn);
    for (int k : cl_counts) {
      LabelImage li = label_image(cut(dn, k), acc);
      save_label_image(cl_out + ".k" + std::to_string(k), li);
    }
    if (thr_opt->count() > 0) {
      cl_threshold = cl_threshold_value;
      ClusterLabeling labeling = cut_at_threshold(dn, *cl_threshold);
      LabelImage li = label_image(labeling, acc);
      save_label_image(cl_out + ".threshold", li);
      std::cout << "threshold " << *cl_threshold << " -> " << labeling.k
                << " clusters\n";
    }
    std::cout << "dendrogram: " << dn.merges.size() << " merges, last at "
              << dn.merges.back().distance << "\n";
  });

  // ---- render ------------------------------------------------------------
  auto* render = app.add_subcommand(
      "render", "Render an accumulation image or labeling as PPM");
  std::string rd_acc, rd_labels, rd_out;
  render->add_option("--acc", rd_acc, "Accumulation image stem");
  render->add_option("--labels", rd_labels, "Labeling stem (PGM index image)");
  render->add_option("--out", rd_out, "Output .ppm path")->required();
  render->callback([&] {
    if (rd_acc.empty() == rd_labels.empty()) {
      raise(errc::invalid_argument, "pass exactly one of --acc / --labels");
    }
    if (!rd_acc.empty()) {
      AccumulationImage img = load_accumulation_image(rd_acc);
      write_ppm_heatmap(rd_out, img.values);
    } else {
      LabelImage li = load_label_image(rd_labels);
      write_ppm_labels(rd_out, li.grid, li.side,
                       static_cast<int>(li.legend.size()));
    }
    std::cout << "wrote " << rd_out << "\n";
  });

  // ---- pipeline ----------------------------------------------------------
  auto* pipe = app.add_subcommand("pipeline",
                                  "Run the full class-pair experiment");
  PipelineConfig cfg;
  std::vector<int> pair = {3, 5};
  std::string pipe_kind = "bhattacharyya", pipe_variant, pipe_gray = "luma601",
              pipe_sym = "mean", pipe_out;
  bool pipe_all_batches = false;
  double pipe_threshold = 0.0;
  pipe->add_option("--data-dir", common.data_dir, "CIFAR-10 binary dir");
  pipe->add_option("--class-pair", pair, "Two class ids")->capture_default_str()
      ->expected(2);
  pipe->add_option("--kind", pipe_kind, "Distance kind")->capture_default_str();
  pipe->add_option("--s", cfg.s, "Chernoff exponent")->capture_default_str();
  pipe->add_option("--variant", pipe_variant, "paper-exact | corrected");
  pipe->add_option("--ridge", cfg.ridge, "Ridge multiplier")->capture_default_str();
  pipe->add_option("--gray", pipe_gray, "Grayscale mode")->capture_default_str();
  pipe->add_option("--symmetrize", pipe_sym, "Symmetrization")->capture_default_str();
  pipe->add_option("--clusters", cfg.cluster_counts, "Cluster counts")->capture_default_str();
  auto* pipe_thr = pipe->add_option("--threshold", pipe_threshold,
                                    "Extra threshold cut");
  pipe->add_option("--inner-side", cfg.inner_side,
                   "Center-concentration window")->capture_default_str();
  pipe->add_flag("--include-test-batch", pipe_all_batches,
                 "Use all six batches");
  pipe->add_option("--out", pipe_out, "Output directory")->required();
  pipe->callback([&] {
    set_max_threads(common.threads);
    cfg.data_dir = resolve_data_dir(common.data_dir);
    cfg.class_a = pair[0];
    cfg.class_b = pair[1];
    cfg.train_only = !pipe_all_batches;
    cfg.kind = distance_kind_from_string(pipe_kind);
    if (!pipe_variant.empty()) cfg.variant = variant_from_string(pipe_variant);
    cfg.grayscale = grayscale_mode_from_string(pipe_gray);
    cfg.symmetrize_mode = symmetrize_mode_from_string(pipe_sym);
    if (pipe_thr->count() > 0) cfg.cluster_threshold = pipe_threshold;
    cfg.out_dir = pipe_out;
    PipelineResult res = run_pipeline(cfg);
    std::cout << "pipeline done in " << res.seconds_total << "s\n"
              << "  trace=" << res.trace << " closed-form="
              << res.expected_scalar << " residual=" << res.trace_residual
              << "\n  center-concentration ratio=" << res.center_ratio
              << "\n  manifest: " << (res.out_dir / "manifest.json").string()
              << "\n";
  });

  // ---- verify ------------------------------------------------------------
  auto* verify_cmd =
      app.add_subcommand("verify", "Run the built-in invariant suite");
  std::string level = "fast";
  verify_cmd->add_option("--level", level, "fast | full")->capture_default_str();
  bool verify_failed = false;
  verify_cmd->callback([&] {
    VerifyLevel lvl;
    if (level == "fast") {
      lvl = VerifyLevel::fast;
    } else if (level == "full") {
      lvl = VerifyLevel::full;
    } else {
      raise(errc::invalid_argument, "level must be fast or full");
    }
    verify_failed = !run_verify(lvl, std::cout).all_pass();
  });

  // ---- dataset-info ------------------------------------------------------
  auto* info = app.add_subcommand(
      "dataset-info", "Print the expected CIFAR-10 layout and checksums");
  info->callback([&] { std::cout << dataset_help(); });

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  return verify_failed ? kExitVerifyFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statistical distance matrices, accumulation images and "
               "cluster mandalas for Gaussian populations"};
  try {
    return run(app, argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? kExitInputError : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
