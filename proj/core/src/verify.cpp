#include "mandala/verify.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "mandala/accumulation.hpp"
#include "mandala/clustering.hpp"
#include "mandala/distance.hpp"
#include "mandala/quadrature.hpp"
#include "mandala/synthetic.hpp"

namespace mandala {

namespace {

using synthetic::Rng;

struct Recorder {
  VerifyReport& report;
  std::ostream& log;

  void check(const std::string& name, double residual, double tolerance) {
    const bool pass = residual <= tolerance;
    report.checks.push_back(VerifyCheck{name, residual, tolerance, pass});
    log << (pass ? "[PASS] " : "[FAIL] ") << std::left << std::setw(52) << name
        << " residual " << std::scientific << std::setprecision(3) << residual
        << " (tol " << tolerance << ")\n"
        << std::defaultfloat;
  }
};

double rel(double got, double want) {
  return std::abs(got - want) / (1.0 + std::abs(want));
}

bool same_merges(const Dendrogram& a, const Dendrogram& b) {
  if (a.leaf_count != b.leaf_count || a.merges.size() != b.merges.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.merges.size(); ++i) {
    if (a.merges[i].a != b.merges[i].a || a.merges[i].b != b.merges[i].b ||
        a.merges[i].distance != b.merges[i].distance ||
        a.merges[i].new_node != b.merges[i].new_node) {
      return false;
    }
  }
  return true;
}

void spd_identities(Recorder& rec, Rng& rng) {
  double worst_det = 0.0, worst_logdet = 0.0, worst_logprod = 0.0;
  double worst_power = 0.0, worst_inverse = 0.0;
  for (int n : {2, 4, 8, 16, 32}) {
    SpdMatrix a = synthetic::random_spd(n, rng);
    SpdMatrix b = synthetic::random_spd(n, rng);
    if (n <= 16) {
      const double det_prod = a.mat().determinant() * b.mat().determinant();
      worst_det = std::max(
          worst_det, rel((a.mat() * b.mat()).determinant(), det_prod));
    }
    worst_logdet = std::max(
        worst_logdet, rel(spd_log(a).mat().trace(), a.log_det()));
    worst_logprod = std::max(
        worst_logprod, rel(log_spd_product(a, b).trace(),
                           spd_log(a).mat().trace() + spd_log(b).mat().trace()));
    for (double s : {0.25, 0.5, 2.0}) {
      worst_power = std::max(
          worst_power,
          (spd_power(spd_power(a, s), 1.0 / s).mat() - a.mat())
                  .cwiseAbs()
                  .maxCoeff() /
              a.mat().cwiseAbs().maxCoeff());
    }
    worst_inverse = std::max(
        worst_inverse,
        (spd_inverse(a).mat() - spd_power(a, -1.0).mat()).cwiseAbs().maxCoeff() /
            spd_inverse(a).mat().cwiseAbs().maxCoeff());
  }
  rec.check("det(a)det(b) = det(ab)", worst_det, 1e-8);
  rec.check("ln det a = tr ln a", worst_logdet, 1e-8);
  rec.check("tr ln(ab) = tr ln a + tr ln b", worst_logprod, 1e-8);
  rec.check("power round trip (m^s)^(1/s) = m", worst_power, 1e-8);
  rec.check("inverse = power(-1)", worst_inverse, 1e-8);
}

void trace_consistency(Recorder& rec, Rng& rng) {
  double worst_m = 0.0, worst_b = 0.0, worst_c = 0.0;
  double worst_kl_pe = 0.0, worst_kl_c = 0.0, worst_detector = 0.0;
  for (int n : {2, 4, 8, 16}) {
    for (int trial = 0; trial < 8; ++trial) {
      GaussianPopulation p = synthetic::random_population(n, rng);
      GaussianPopulation q = synthetic::random_population(n, rng);
      ScalarDistanceReport pe = scalar_report(p, q, 0.3, Variant::paper_exact);
      ScalarDistanceReport co = scalar_report(p, q, 0.3, Variant::corrected);

      worst_m = std::max(worst_m, rel(mahalanobis_matrix(p, q, true).trace(),
                                      pe.mahalanobis));
      worst_b = std::max(
          worst_b,
          rel(bhattacharyya_matrix(p, q, Variant::corrected).trace(),
              pe.bhattacharyya));
      worst_c = std::max(
          worst_c, rel(chernoff_matrix(p, q, 0.3).trace(), pe.chernoff));
      worst_kl_pe = std::max(
          worst_kl_pe, rel(kl_matrix(p, q, Variant::paper_exact).trace(), pe.kl));
      worst_kl_c = std::max(
          worst_kl_c, rel(kl_matrix(p, q, Variant::corrected).trace(), co.kl));

      // Printed-form detector: the literal Bhattacharyya matrix trace sits
      // exactly (ln det S1 + ln det S2)/2 above the scalar closed form.
      const double detector =
          bhattacharyya_matrix(p, q, Variant::paper_exact).trace() -
          pe.bhattacharyya;
      worst_detector = std::max(
          worst_detector,
          rel(detector, 0.5 * (p.cov.log_det() + q.cov.log_det())));
    }
  }
  rec.check("trace(D_M pooled) = closed form", worst_m, 1e-8);
  rec.check("trace(D_B corrected) = closed form", worst_b, 1e-8);
  rec.check("trace(D_C s=0.3) = closed form", worst_c, 1e-8);
  rec.check("trace(D_KL paper-exact) = closed form", worst_kl_pe, 1e-8);
  rec.check("trace(D_KL corrected) = Jeffreys", worst_kl_c, 1e-8);
  rec.check("paper-exact D_B discrepancy detector", worst_detector, 1e-8);
}

void reductions(Recorder& rec, Rng& rng) {
  double worst_equal = 0.0, worst_ends = 0.0, worst_eighth = 0.0;
  double worst_hellinger = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 << trial;
    GaussianPopulation p = synthetic::random_population(n, rng);
    GaussianPopulation q = synthetic::random_population(n, rng);

    worst_equal = std::max(
        worst_equal,
        (chernoff_matrix(p, q, 0.5).matrix -
         bhattacharyya_matrix(p, q, Variant::corrected).matrix)
            .cwiseAbs()
            .maxCoeff());
    worst_ends = std::max({worst_ends,
                           std::abs(chernoff_matrix(p, q, 0.0).trace()),
                           std::abs(chernoff_matrix(p, q, 1.0).trace())});

    GaussianPopulation q_same_cov = q;
    q_same_cov.cov = p.cov;
    worst_eighth = std::max(
        worst_eighth,
        std::abs(bhattacharyya_matrix(p, q_same_cov, Variant::corrected).trace() -
                 mahalanobis_matrix(p, q_same_cov).trace() / 8.0));

    const ScalarDistanceReport rep =
        scalar_report(p, q, 0.5, Variant::corrected);
    worst_hellinger = std::max(
        worst_hellinger,
        std::abs(rep.hellinger -
                 std::sqrt(1.0 - std::exp(-rep.bhattacharyya))));
  }
  rec.check("Chernoff(0.5) = Bhattacharyya corrected", worst_equal, 1e-10);
  rec.check("Chernoff trace at s in {0,1} = 0", worst_ends, 1e-10);
  rec.check("equal covariances: tr D_B = tr D_M / 8", worst_eighth, 1e-10);
  rec.check("Hellinger = sqrt(1 - exp(-dB))", worst_hellinger, 1e-12);
}

void clustering_oracle(Recorder& rec, Rng& rng) {
  int mismatches = 0;
  double monotone_violation = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 7);  // up to 8 leaves
    Matrix delta = synthetic::random_dissimilarity(d, rng);
    Dendrogram got = agglomerate(delta);
    Dendrogram fast = agglomerate_fast(delta);
    Dendrogram want = synthetic::reference_complete_linkage(delta);
    if (!same_merges(got, want)) ++mismatches;
    if (!same_merges(fast, want)) ++mismatches;
    for (std::size_t i = 1; i < got.merges.size(); ++i) {
      monotone_violation =
          std::max(monotone_violation, got.merges[i - 1].distance -
                                           got.merges[i].distance);
    }
  }
  rec.check("clustering matches first-principles oracle",
            static_cast<double>(mismatches), 0.0);
  rec.check("complete-linkage merges nondecreasing", monotone_violation, 0.0);

  // Cut consistency on one random dendrogram.
  Matrix delta = synthetic::random_dissimilarity(9, rng);
  Dendrogram dn = agglomerate(delta);
  int cut_mismatch = 0;
  for (int k = 2; k < 9; ++k) {
    const double lo = dn.merges[static_cast<std::size_t>(9 - k) - 1].distance;
    const double hi = dn.merges[static_cast<std::size_t>(9 - k)].distance;
    const double t = 0.5 * (lo + hi);
    if (cut(dn, k).labels != cut_at_threshold(dn, t).labels) ++cut_mismatch;
  }
  rec.check("cut(k) = cut_at_threshold(t between merges)",
            static_cast<double>(cut_mismatch), 0.0);
}

void round_trips(Recorder& rec, Rng& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Matrix grid(16, 16);
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) grid(i, j) = u(rng);
  }
  const double rt =
      (devectorize(vectorize(grid), 16).values - grid).cwiseAbs().maxCoeff();
  rec.check("devectorize(vectorize(img)) = img", rt, 0.0);

  // Accumulation linearity and the symmetric shortcut.
  Matrix a(8, 8), b(8, 8);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      a(i, j) = u(rng);
      b(i, j) = u(rng);
    }
  }
  const double lin =
      (accumulate(Matrix(2.0 * a + 3.0 * b)) -
       (2.0 * accumulate(a) + 3.0 * accumulate(b)))
          .cwiseAbs()
          .maxCoeff();
  rec.check("accumulate is linear", lin, 1e-12);

  Matrix sym = a + a.transpose();
  Vector row_sums(sym.rows());
  for (Eigen::Index i = 0; i < sym.rows(); ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < sym.cols(); ++j) acc += sym(i, j);
    row_sums[i] = acc;
  }
  const double twice =
      (accumulate(sym) - 2.0 * row_sums).cwiseAbs().maxCoeff();
  rec.check("symmetric delta: phi = 2 row sums", twice, 0.0);
}

void quadrature_oracles(Recorder& rec, Rng& rng) {
  double worst_b = 0.0, worst_c = 0.0, worst_j = 0.0;
  for (int n : {1, 2}) {
    for (int trial = 0; trial < 4; ++trial) {
      GaussianPopulation p = synthetic::random_population(n, rng);
      GaussianPopulation q = synthetic::random_population(n, rng);
      ScalarDistanceReport rep = scalar_report(p, q, 0.3, Variant::corrected);
      worst_b = std::max(
          worst_b,
          std::abs(divergence_integration_oracle(
                       p, q, DistanceKind::bhattacharyya, 0.5) -
                   rep.bhattacharyya));
      worst_c = std::max(
          worst_c, std::abs(divergence_integration_oracle(
                                p, q, DistanceKind::chernoff, 0.3) -
                            rep.chernoff));
      worst_j = std::max(
          worst_j, std::abs(divergence_integration_oracle(
                                p, q, DistanceKind::kullback_leibler, 0.5) -
                            rep.kl));
    }
  }
  rec.check("quadrature of defining integral vs dB", worst_b, 1e-4);
  rec.check("quadrature of defining integral vs dC(0.3)", worst_c, 1e-4);
  rec.check("quadrature of Jeffreys integral vs corrected dKL", worst_j, 1e-3);
}

void smoke_1024(Recorder& rec, Rng& rng) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  const int n = 1024;
  GaussianPopulation p = synthetic::random_population(n, rng, 0.2);
  GaussianPopulation q = synthetic::random_population(n, rng, 0.2);
  DistanceMatrix dm = bhattacharyya_matrix(p, q, Variant::corrected);
  const ScalarDistanceReport rep = scalar_report(p, q, 0.5, Variant::corrected);
  const double residual = rel(dm.trace(), rep.bhattacharyya);

  Vector phi = accumulate(dm);
  AccumulationImage img = devectorize(phi, 32);
  Dendrogram dn = agglomerate(symmetrize(dm, SymmetrizeMode::mean));
  double monotone_violation = 0.0;
  for (std::size_t i = 1; i < dn.merges.size(); ++i) {
    monotone_violation = std::max(
        monotone_violation, dn.merges[i - 1].distance - dn.merges[i].distance);
  }
  (void)cut(dn, 10);
  (void)img;

  const double seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  rec.check("n=1024 smoke: trace residual", residual, 1e-8);
  rec.check("n=1024 smoke: merges nondecreasing", monotone_violation, 0.0);
  rec.check("n=1024 smoke: runtime seconds < 300", seconds, 300.0);
}

}  // namespace

VerifyReport run_verify(VerifyLevel level, std::ostream& log) {
  VerifyReport report;
  Recorder rec{report, log};
  Rng rng(0x5eed5eedULL);

  spd_identities(rec, rng);
  trace_consistency(rec, rng);
  reductions(rec, rng);
  clustering_oracle(rec, rng);
  round_trips(rec, rng);

  if (level == VerifyLevel::full) {
    quadrature_oracles(rec, rng);
    smoke_1024(rec, rng);
  }

  log << (report.all_pass() ? "verification passed" : "VERIFICATION FAILED")
      << " (" << report.checks.size() << " checks)\n";
  return report;
}

}  // namespace mandala
