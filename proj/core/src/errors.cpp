#include "mandala/errors.hpp"

namespace mandala {

const char* to_string(errc code) noexcept {
  switch (code) {
    case errc::non_convergence:
      return "NonConvergence";
    case errc::ill_conditioned:
      return "IllConditioned";
    case errc::still_not_pd:
      return "StillNotPd";
    case errc::not_symmetric:
      return "NotSymmetric";
    case errc::dim_mismatch:
      return "DimMismatch";
    case errc::degenerate_samples:
      return "DegenerateSamples";
    case errc::cov_mismatch:
      return "CovMismatch";
    case errc::s_out_of_range:
      return "SOutOfRange";
    case errc::negative_input:
      return "NegativeInput";
    case errc::dimension_too_large:
      return "DimensionTooLarge";
    case errc::length_mismatch:
      return "LengthMismatch";
    case errc::degenerate_ring:
      return "DegenerateRing";
    case errc::too_few_leaves:
      return "TooFewLeaves";
    case errc::k_out_of_range:
      return "KOutOfRange";
    case errc::size_mismatch:
      return "SizeMismatch";
    case errc::malformed_file:
      return "MalformedFile";
    case errc::io_error:
      return "IoError";
    case errc::class_not_found:
      return "ClassNotFound";
    case errc::invalid_argument:
      return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace mandala
