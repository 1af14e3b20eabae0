#pragma once

#include <utility>

#include "manna/core.hpp"
#include "manna/mixed.hpp"

namespace manna::search {

struct SearchOutcome {
  Rat alpha;              // 0 when every probe failed
  Allocation allocation;  // welfare-max in the all-fail case
  int probes = 0;
};

inline Allocation welfare_max_allocation(const Instance& inst) {
  validate_instance(inst);
  return mixed::detail::argmax_allocation(inst);
}

// Bisects alpha over [epsilon, 1] down to width params.delta and returns the
// largest probed alpha the solver could satisfy, together with its
// allocation. Success is monotone in alpha (a harder target only shrinks the
// feasible set), so the search keeps one success/failure frontier; the
// midpoints halve the interval, which caps the probe count at
// ceil(log2(1/delta)) + 1 including the opening probe at alpha = 1.
inline SearchOutcome opt_alpha_mms_po(const Instance& inst, const SolverParams& params,
                                      int threads = 1) {
  require(params.delta > 0, Errc::bad_parameter, "delta must be positive");

  SearchOutcome out;
  out.alpha = 0;
  bool found = false;
  Rat min_fail;
  bool failed_any = false;

  auto probe = [&](const Rat& alpha) {
    SolverParams p = params;
    p.alpha = alpha;
    auto res = mixed::solve_alpha_mms_po(inst, p, threads);
    ++out.probes;
    if (res.allocation) {
      check(!failed_any || alpha < min_fail, "success never appears above a failed alpha");
      if (!found || alpha > out.alpha) {
        out.alpha = alpha;
        out.allocation = std::move(*res.allocation);
        found = true;
      }
      return true;
    }
    check(!found || alpha > out.alpha, "failure never appears below a successful alpha");
    if (!failed_any || alpha < min_fail) min_fail = alpha;
    failed_any = true;
    return false;
  };

  if (probe(Rat(1))) return out;

  Rat lo = params.epsilon;
  Rat hi = 1;
  while (Rat(hi - lo) > params.delta) {
    Rat mid = Rat((lo + hi) / 2);
    if (probe(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  if (!found) out.allocation = welfare_max_allocation(inst);
  return out;
}

}  // namespace manna::search
