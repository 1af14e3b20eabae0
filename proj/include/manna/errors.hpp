#pragma once

#include <stdexcept>
#include <string>

namespace manna {

enum class Errc {
  bad_json,
  bad_value,
  zero_denominator,
  ragged_matrix,
  duplicate_label,
  bad_allocation,
  bad_parameter,
  zero_total_agent,
  tau_violation,
  length_mismatch,
  index_out_of_range,
  budget_exceeded,
  bagfill_precondition,
  defect,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::bad_json: return "bad-json";
    case Errc::bad_value: return "bad-value";
    case Errc::zero_denominator: return "zero-denominator";
    case Errc::ragged_matrix: return "ragged-matrix";
    case Errc::duplicate_label: return "duplicate-label";
    case Errc::bad_allocation: return "bad-allocation";
    case Errc::bad_parameter: return "bad-parameter";
    case Errc::zero_total_agent: return "zero-total-agent";
    case Errc::tau_violation: return "tau-violation";
    case Errc::length_mismatch: return "length-mismatch";
    case Errc::index_out_of_range: return "index-out-of-range";
    case Errc::budget_exceeded: return "budget-exceeded";
    case Errc::bagfill_precondition: return "bagfill-precondition";
    case Errc::defect: return "defect";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool ok, Errc code, const std::string& msg) {
  if (!ok) fail(code, msg);
}

// Always-on internal invariant check; a firing check is a bug in this
// library, never a user error.
inline void check(bool ok, const std::string& msg) {
  if (!ok) fail(Errc::defect, std::string("internal invariant violated: ") + msg);
}

}  // namespace manna
