#pragma once

#include <stdexcept>
#include <string>

namespace mandala {

/// Failure categories surfaced by the library. Each maps to one documented
/// error condition of the public API.
enum class errc {
  non_convergence,
  ill_conditioned,
  still_not_pd,
  not_symmetric,
  dim_mismatch,
  degenerate_samples,
  cov_mismatch,
  s_out_of_range,
  negative_input,
  dimension_too_large,
  length_mismatch,
  degenerate_ring,
  too_few_leaves,
  k_out_of_range,
  size_mismatch,
  malformed_file,
  io_error,
  class_not_found,
  invalid_argument,
};

const char* to_string(errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace mandala
