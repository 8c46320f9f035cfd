#include "mandala/distance.hpp"

#include <cmath>

namespace mandala {

namespace {

void check_same_dim(const GaussianPopulation& p, const GaussianPopulation& q) {
  if (p.dim() != q.dim()) {
    raise(errc::dim_mismatch, "population dims " + std::to_string(p.dim()) +
                                  " vs " + std::to_string(q.dim()));
  }
}

// d^T M^{-1} d through the eigenbasis of M.
double quadratic_form_inv(const SpdMatrix& m, const Vector& d) {
  const EigenDecomposition& ed = m.eigen();
  Vector z = ed.vectors.transpose() * d;
  return (z.array().square() / ed.values.array()).sum();
}

// tr(A^{-1} B) for SPD A, symmetric B: entrywise product of A^{-1} and B.
double trace_inv_times(const SpdMatrix& a, const Matrix& b) {
  Matrix inv = spd_inverse(a).mat();
  return inv.cwiseProduct(b).sum();
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Rank-1 term c * d (M^{-1} d)^T; the full n x n product is materialized once
// at assembly time.
Matrix rank_one_quadratic(double coeff, const Vector& d, const SpdMatrix& m) {
  Vector w = spd_inverse(m).mat() * d;
  return (coeff * d) * w.transpose();
}

DistanceMatrix chernoff_like(const GaussianPopulation& p,
                             const GaussianPopulation& q, double s,
                             Variant variant, DistanceKind kind) {
  check_same_dim(p, q);
  Vector d = p.mean - q.mean;
  SpdMatrix mix(SymMatrix::symmetrized((1.0 - s) * p.cov.mat() +
                                       s * q.cov.mat()));

  // Exponents inside the product log: +1/2 at s = 1/2 per the Chernoff form;
  // the literal Bhattacharyya print uses -1/2.
  double ea = 1.0 - s;
  double eb = s;
  if (kind == DistanceKind::bhattacharyya && variant == Variant::paper_exact) {
    ea = -0.5;
    eb = -0.5;
  }

  Matrix log_term =
      spd_log(mix).mat() -
      log_spd_product(spd_power(p.cov, ea), spd_power(q.cov, eb));

  const double coeff = 0.5 * s * (1.0 - s);
  DistanceMatrix out;
  out.kind = kind;
  out.s = s;
  out.variant = variant;
  out.ridge_p = p.ridge_applied;
  out.ridge_q = q.ridge_applied;
  out.matrix = rank_one_quadratic(coeff, d, mix) + 0.5 * log_term;
  return out;
}

}  // namespace

const char* to_string(DistanceKind k) noexcept {
  switch (k) {
    case DistanceKind::mahalanobis:
      return "mahalanobis";
    case DistanceKind::bhattacharyya:
      return "bhattacharyya";
    case DistanceKind::chernoff:
      return "chernoff";
    case DistanceKind::kullback_leibler:
      return "kullback-leibler";
  }
  return "?";
}

const char* to_string(Variant v) noexcept {
  return v == Variant::paper_exact ? "paper-exact" : "corrected";
}

DistanceKind distance_kind_from_string(const std::string& s) {
  if (s == "mahalanobis" || s == "M") return DistanceKind::mahalanobis;
  if (s == "bhattacharyya" || s == "B") return DistanceKind::bhattacharyya;
  if (s == "chernoff" || s == "C") return DistanceKind::chernoff;
  if (s == "kullback-leibler" || s == "kl" || s == "KL") {
    return DistanceKind::kullback_leibler;
  }
  raise(errc::invalid_argument, "unknown distance kind '" + s + "'");
}

Variant variant_from_string(const std::string& s) {
  if (s == "paper-exact") return Variant::paper_exact;
  if (s == "corrected") return Variant::corrected;
  raise(errc::invalid_argument, "unknown variant '" + s + "'");
}

DistanceMatrix mahalanobis_matrix(const GaussianPopulation& p,
                                  const GaussianPopulation& q,
                                  bool pooled_mode) {
  check_same_dim(p, q);
  Vector d = p.mean - q.mean;

  DistanceMatrix out;
  out.kind = DistanceKind::mahalanobis;
  out.s = 0.0;
  out.ridge_p = p.ridge_applied;
  out.ridge_q = q.ridge_applied;

  if (pooled_mode) {
    SpdMatrix pooled(
        SymMatrix::symmetrized(0.5 * (p.cov.mat() + q.cov.mat())));
    out.pooled = true;
    out.matrix = rank_one_quadratic(1.0, d, pooled);
    return out;
  }

  const double scale =
      std::max({max_abs(p.cov.mat()), max_abs(q.cov.mat()), 1e-300});
  const double diff = max_abs(p.cov.mat() - q.cov.mat());
  if (diff > 1e-8 * scale) {
    raise(errc::cov_mismatch,
          "covariances differ by " + std::to_string(diff / scale) +
              " relative; pass pooled_mode to average them");
  }
  out.matrix = rank_one_quadratic(1.0, d, p.cov);
  return out;
}

DistanceMatrix bhattacharyya_matrix(const GaussianPopulation& p,
                                    const GaussianPopulation& q,
                                    Variant variant) {
  return chernoff_like(p, q, 0.5, variant, DistanceKind::bhattacharyya);
}

DistanceMatrix chernoff_matrix(const GaussianPopulation& p,
                               const GaussianPopulation& q, double s,
                               Variant variant) {
  if (!(s >= 0.0 && s <= 1.0)) {
    raise(errc::s_out_of_range, "s = " + std::to_string(s));
  }
  return chernoff_like(p, q, s, variant, DistanceKind::chernoff);
}

DistanceMatrix kl_matrix(const GaussianPopulation& p,
                         const GaussianPopulation& q, Variant variant) {
  check_same_dim(p, q);
  const int n = p.dim();
  Vector d = p.mean - q.mean;
  Matrix inv1 = spd_inverse(p.cov).mat();
  Matrix inv2 = spd_inverse(q.cov).mat();

  DistanceMatrix out;
  out.kind = DistanceKind::kullback_leibler;
  out.s = 0.0;
  out.variant = variant;
  out.ridge_p = p.ridge_applied;
  out.ridge_q = q.ridge_applied;

  if (variant == Variant::paper_exact) {
    SpdMatrix sum(SymMatrix::symmetrized(p.cov.mat() + q.cov.mat()));
    out.matrix = rank_one_quadratic(0.5, d, sum) +
                 0.5 * (inv1 * q.cov.mat() + inv2 * p.cov.mat() +
                        2.0 * Matrix::Identity(n, n));
  } else {
    Vector w = (inv1 + inv2) * d;
    out.matrix = (0.5 * d) * w.transpose() +
                 0.5 * (inv1 * q.cov.mat() + inv2 * p.cov.mat() -
                        2.0 * Matrix::Identity(n, n));
  }
  return out;
}

double hellinger_scalar(double d_b) {
  if (d_b < 0.0) {
    raise(errc::negative_input,
          "Bhattacharyya distance must be nonnegative, got " +
              std::to_string(d_b));
  }
  // 1 - exp(-x) via expm1 keeps small distances accurate.
  return std::sqrt(-std::expm1(-d_b));
}

ScalarDistanceReport scalar_report(const GaussianPopulation& p,
                                   const GaussianPopulation& q, double s,
                                   Variant variant) {
  check_same_dim(p, q);
  if (!(s >= 0.0 && s <= 1.0)) {
    raise(errc::s_out_of_range, "s = " + std::to_string(s));
  }
  const int n = p.dim();
  Vector d = p.mean - q.mean;

  ScalarDistanceReport rep;
  rep.s = s;
  rep.variant = variant;
  rep.ridge_p = p.ridge_applied;
  rep.ridge_q = q.ridge_applied;

  const double scale =
      std::max({max_abs(p.cov.mat()), max_abs(q.cov.mat()), 1e-300});
  rep.mahalanobis_pooled =
      max_abs(p.cov.mat() - q.cov.mat()) > 1e-8 * scale;

  SpdMatrix pooled(SymMatrix::symmetrized(0.5 * (p.cov.mat() + q.cov.mat())));
  rep.mahalanobis = rep.mahalanobis_pooled ? quadratic_form_inv(pooled, d)
                                           : quadratic_form_inv(p.cov, d);

  // Bhattacharyya, Eq-style closed form:
  //   1/4 d^T (S1+S2)^{-1} d + 1/2 [ln det((S1+S2)/2)
  //                                 - (ln det S1 + ln det S2)/2]
  SpdMatrix sum(SymMatrix::symmetrized(p.cov.mat() + q.cov.mat()));
  const double logdet1 = p.cov.log_det();
  const double logdet2 = q.cov.log_det();
  rep.bhattacharyya = 0.25 * quadratic_form_inv(sum, d) +
                      0.5 * (pooled.log_det() - 0.5 * (logdet1 + logdet2));

  // Chernoff: s(1-s)/2 d^T M^{-1} d + 1/2 [ln det M
  //            - (1-s) ln det S1 - s ln det S2], M = (1-s) S1 + s S2.
  SpdMatrix mix(
      SymMatrix::symmetrized((1.0 - s) * p.cov.mat() + s * q.cov.mat()));
  rep.chernoff =
      0.5 * s * (1.0 - s) * quadratic_form_inv(mix, d) +
      0.5 * (mix.log_det() - (1.0 - s) * logdet1 - s * logdet2);

  if (variant == Variant::paper_exact) {
    rep.kl = 0.5 * quadratic_form_inv(sum, d) +
             0.5 * (trace_inv_times(p.cov, q.cov.mat()) +
                    trace_inv_times(q.cov, p.cov.mat()) + 2.0 * n);
  } else {
    rep.kl = 0.5 * (quadratic_form_inv(p.cov, d) + quadratic_form_inv(q.cov, d)) +
             0.5 * (trace_inv_times(p.cov, q.cov.mat()) +
                    trace_inv_times(q.cov, p.cov.mat()) - 2.0 * n);
  }

  rep.hellinger = hellinger_scalar(std::max(rep.bhattacharyya, 0.0));
  return rep;
}

DistanceMatrix compute_distance_matrix(const GaussianPopulation& p,
                                       const GaussianPopulation& q,
                                       DistanceKind kind, double s,
                                       Variant variant, bool pooled_mode) {
  switch (kind) {
    case DistanceKind::mahalanobis:
      return mahalanobis_matrix(p, q, pooled_mode);
    case DistanceKind::bhattacharyya:
      return bhattacharyya_matrix(p, q, variant);
    case DistanceKind::chernoff:
      return chernoff_matrix(p, q, s, variant);
    case DistanceKind::kullback_leibler:
      return kl_matrix(p, q, variant);
  }
  raise(errc::invalid_argument, "unknown distance kind");
}

}  // namespace mandala
