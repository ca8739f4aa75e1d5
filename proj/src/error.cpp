#include "sysmat/error.hpp"

namespace sysmat {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::empty_matrix: return "empty_matrix";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::singular_pencil: return "singular_pencil";
    case Errc::pole_evaluation: return "pole_evaluation";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::no_rotation: return "no_rotation";
    case Errc::rank_deficient_rows: return "rank_deficient_rows";
    case Errc::inconsistent_deflation: return "inconsistent_deflation";
    case Errc::structural_inconsistency: return "structural_inconsistency";
    case Errc::not_strongly_minimal: return "not_strongly_minimal";
    case Errc::a_not_regular: return "a_not_regular";
    case Errc::zero_row_col: return "zero_row_col";
    case Errc::diverging_scaling: return "diverging_scaling";
    case Errc::parse_error: return "parse_error";
    case Errc::non_finite: return "non_finite";
  }
  return "unknown";
}

}  // namespace sysmat
