#pragma once

#include <stdexcept>
#include <string>

namespace linklab {

enum class errc {
  not_prime,
  no_irreducible_found,
  order_too_large,
  division_by_zero,
  field_mismatch,
  rank_too_large,
  dimension_error,
  structure_mismatch,
  not_symmetric,
  no_convergence,
  disconnected,
  not_mean_zero,
  invalid_point,
  invalid_isometry,
  numerical_degeneracy,
  bad_holonomy,
  class_violation,
  malformed_input,
  link_mismatch,
  missing_lambda,
  constraint_violated,
  rank_deficient,
};

const char* errc_name(errc c);

/// Exception carrying a machine-checkable error code plus a human message.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) { throw Error(code, message); }

}  // namespace linklab
