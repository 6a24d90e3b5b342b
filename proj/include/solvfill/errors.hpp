#pragma once

#include <stdexcept>
#include <string>

namespace solvfill {

// Error categories. The CLI maps these onto exit codes: input/validation
// problems exit 1, numeric failures of the structure theory exit 2.
enum class Errc {
  dimension_mismatch,
  parse_error,
  validation_failed,
  max_nonpositive,
  proportionality_violation,
  degenerate_geodesic,
  frame_not_orthonormal,
  frame_not_normal_to_geodesic,
  not_a_cycle,
  apex_off_slice,
  cycle_off_slice,
  rank_range,
  eigenvalue_below_threshold,
  unsupported,
  internal_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::dimension_mismatch: return "DIMENSION_MISMATCH";
    case Errc::parse_error: return "PARSE_ERROR";
    case Errc::validation_failed: return "VALIDATION_FAILED";
    case Errc::max_nonpositive: return "MAX_NONPOSITIVE";
    case Errc::proportionality_violation: return "PROPORTIONALITY_VIOLATION";
    case Errc::degenerate_geodesic: return "DEGENERATE_GEODESIC";
    case Errc::frame_not_orthonormal: return "FRAME_NOT_ORTHONORMAL";
    case Errc::frame_not_normal_to_geodesic: return "FRAME_NOT_NORMAL_TO_GEODESIC";
    case Errc::not_a_cycle: return "NOT_A_CYCLE";
    case Errc::apex_off_slice: return "APEX_OFF_SLICE";
    case Errc::cycle_off_slice: return "CYCLE_OFF_SLICE";
    case Errc::rank_range: return "RANK_RANGE";
    case Errc::eigenvalue_below_threshold: return "EIGENVALUE_BELOW_THRESHOLD";
    case Errc::unsupported: return "UNSUPPORTED";
    case Errc::internal_error: return "INTERNAL_ERROR";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace solvfill
