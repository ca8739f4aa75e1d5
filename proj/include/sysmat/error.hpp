#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sysmat {

/// Stable error categories. The CLI maps them onto exit codes.
enum class Errc {
  empty_matrix,
  dimension_mismatch,
  singular_pencil,
  pole_evaluation,
  invalid_argument,
  no_rotation,
  rank_deficient_rows,
  inconsistent_deflation,
  structural_inconsistency,
  not_strongly_minimal,
  a_not_regular,
  zero_row_col,
  diverging_scaling,
  parse_error,
  non_finite,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sysmat
