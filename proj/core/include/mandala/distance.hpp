#pragma once

#include <string>

#include "mandala/gaussian.hpp"
#include "mandala/linalg.hpp"

namespace mandala {

enum class DistanceKind { mahalanobis, bhattacharyya, chernoff, kullback_leibler };

/// Two readings of the equations whose printed matrix form disagrees with the
/// printed scalar form:
///  - Bhattacharyya: the literal matrix uses exponents -1/2 inside the log,
///    which shifts the trace away from the scalar closed form by
///    (ln det S1 + ln det S2)/2. `corrected` uses +1/2 (the Chernoff form at
///    s = 1/2) and its trace matches the scalar exactly.
///  - Kullback-Leibler: the literal matrix carries a +2I term, so it never
///    vanishes at p = q (trace 2n). `corrected` is the symmetrized (Jeffreys)
///    divergence, which vanishes at p = q and matches direct quadrature of
///    the defining integral.
/// Mahalanobis and Chernoff are self-consistent; the tag is recorded but both
/// readings produce the same matrix for them.
enum class Variant { paper_exact, corrected };

const char* to_string(DistanceKind k) noexcept;
const char* to_string(Variant v) noexcept;
DistanceKind distance_kind_from_string(const std::string& s);
Variant variant_from_string(const std::string& s);

/// n x n matrix whose trace is the scalar statistical distance. Generally
/// asymmetric.
struct DistanceMatrix {
  DistanceKind kind = DistanceKind::bhattacharyya;
  double s = 0.5;  // Chernoff exponent; fixed 0.5 for Bhattacharyya
  Variant variant = Variant::corrected;
  bool pooled = false;  // Mahalanobis only: covariances were averaged
  double ridge_p = 0.0;
  double ridge_q = 0.0;
  GeneralSquareMatrix matrix;

  int dim() const { return static_cast<int>(matrix.rows()); }
  double trace() const { return matrix.trace(); }
};

/// Scalar closed forms evaluated directly (never via matrix traces).
/// `kl` follows `variant`; all other fields are variant-free:
/// mahalanobis uses the pooled covariance when the inputs differ, and
/// hellinger = sqrt(1 - exp(-bhattacharyya)) by construction.
struct ScalarDistanceReport {
  double mahalanobis = 0.0;
  double bhattacharyya = 0.0;
  double chernoff = 0.0;
  double kl = 0.0;
  double hellinger = 0.0;
  double s = 0.5;
  Variant variant = Variant::paper_exact;
  bool mahalanobis_pooled = false;
  double ridge_p = 0.0;
  double ridge_q = 0.0;
};

/// (mu1-mu2)(mu1-mu2)^T Sigma^{-1}. Requires equal covariances (within 1e-8
/// relative) unless pooled_mode, which substitutes Sigma = (S1+S2)/2 and
/// flags the output. Throws CovMismatch otherwise.
DistanceMatrix mahalanobis_matrix(const GaussianPopulation& p,
                                  const GaussianPopulation& q,
                                  bool pooled_mode = false);

/// Bhattacharyya distance matrix. `corrected` (default) is the Chernoff form
/// at s = 1/2:
///   1/4 d d^T (S1+S2)^{-1} + 1/2 [ln((S1+S2)/2) - ln(S1^{1/2} S2^{1/2})]
/// `paper_exact` keeps the printed -1/2 exponents inside the product log.
DistanceMatrix bhattacharyya_matrix(const GaussianPopulation& p,
                                    const GaussianPopulation& q,
                                    Variant variant = Variant::corrected);

/// Chernoff distance matrix, s in [0,1]:
///   s(1-s)/2 d d^T M^{-1} + 1/2 [ln M - ln(S1^{1-s} S2^s)],
///   M = (1-s) S1 + s S2.
DistanceMatrix chernoff_matrix(const GaussianPopulation& p,
                               const GaussianPopulation& q, double s,
                               Variant variant = Variant::corrected);

/// Kullback-Leibler distance matrix. `paper_exact` (default):
///   1/2 d d^T (S1+S2)^{-1} + 1/2 (S1^{-1} S2 + S2^{-1} S1 + 2I)
/// `corrected` (symmetrized/Jeffreys, vanishes at p = q):
///   1/2 d d^T (S1^{-1}+S2^{-1}) + 1/2 (S1^{-1} S2 + S2^{-1} S1 - 2I)
DistanceMatrix kl_matrix(const GaussianPopulation& p,
                         const GaussianPopulation& q,
                         Variant variant = Variant::paper_exact);

/// Hellinger distance from a Bhattacharyya scalar: sqrt(1 - exp(-dB)).
/// Monotone increasing, range [0, 1). Throws NegativeInput for dB < 0.
double hellinger_scalar(double d_b);

/// All five scalars from their closed forms.
ScalarDistanceReport scalar_report(const GaussianPopulation& p,
                                   const GaussianPopulation& q, double s,
                                   Variant variant = Variant::paper_exact);

DistanceMatrix compute_distance_matrix(const GaussianPopulation& p,
                                       const GaussianPopulation& q,
                                       DistanceKind kind, double s,
                                       Variant variant, bool pooled_mode);

}  // namespace mandala
