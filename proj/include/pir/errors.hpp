#pragma once

#include <stdexcept>
#include <string>

namespace pir {

enum class Errc {
  bad_params,
  uncovered_database,
  too_large,
  status_mismatch,
  duality_violation,
  non_positive_s,
  field_too_small,
  inconsistent,
  rank_deficient,
  integrality_violation,
  dimension_mismatch,
  decode_failure,
  negative_entry,
  undercounted,
  internal_invariant_broken,
  parse_error,
};

const char* errc_name(Errc c);

/// All library errors are thrown as pir::Error; `code` identifies the condition.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace pir
