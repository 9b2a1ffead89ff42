#include "pir/errors.hpp"

namespace pir {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::bad_params: return "BadParams";
    case Errc::uncovered_database: return "UncoveredDatabase";
    case Errc::too_large: return "TooLarge";
    case Errc::status_mismatch: return "StatusMismatch";
    case Errc::duality_violation: return "DualityViolation";
    case Errc::non_positive_s: return "NonPositiveS";
    case Errc::field_too_small: return "FieldTooSmall";
    case Errc::inconsistent: return "Inconsistent";
    case Errc::rank_deficient: return "RankDeficient";
    case Errc::integrality_violation: return "IntegralityViolation";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::decode_failure: return "DecodeFailure";
    case Errc::negative_entry: return "NegativeEntry";
    case Errc::undercounted: return "Undercounted";
    case Errc::internal_invariant_broken: return "InternalInvariantBroken";
    case Errc::parse_error: return "ParseError";
  }
  return "Error";
}

}  // namespace pir
