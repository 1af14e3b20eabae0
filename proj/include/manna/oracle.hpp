#pragma once

#include <optional>
#include <vector>

#include "manna/core.hpp"
#include "manna/enumerate.hpp"

// Exhaustive reference implementations. Everything here enumerates all n^m
// labeled allocations; there is deliberately no algorithmic cleverness beyond
// fixing item 0 into bundle 0 where bundle labels are interchangeable.
namespace manna::oracle {

constexpr long long kDefaultBudget = 20'000'000;

struct MmsResult {
  Rat value;
  Allocation witness;
};

// Maximin share of a single valuation over n labeled bundles. The witness is
// the lexicographically smallest assignment vector attaining the value; since
// relabeling bundles keeps the bundle multiset, that vector has item 0 in
// bundle 0 and the pruned enumeration still finds it.
inline MmsResult exact_mms(const std::vector<Rat>& values, int n,
                           long long budget = kDefaultBudget, int threads = 1) {
  require(n >= 1, Errc::bad_parameter, "exact_mms: n must be at least 1");
  int m = static_cast<int>(values.size());
  detail::require_budget(n, m, budget, "exact_mms");
  if (m == 0) return {Rat(0), Allocation{std::vector<std::vector<int>>(n)}};

  struct Local {
    bool has = false;
    Rat value;
    std::vector<int> assign;
  };
  auto prefixes = detail::assignment_prefixes(m - 1, n, threads);
  std::vector<Local> results(prefixes.size());
  detail::run_chunks(static_cast<int>(prefixes.size()), threads, [&](int ci) {
    const auto& pre = prefixes[ci];
    int d = static_cast<int>(pre.size());
    std::vector<int> a(m, 0);
    std::vector<Rat> bval(n, Rat(0));
    bval[0] += values[0];
    for (int t = 0; t < d; ++t) {
      a[1 + t] = pre[t];
      bval[pre[t]] += values[1 + t];
    }
    Local& loc = results[ci];
    auto dfs = [&](auto&& self, int j) -> void {
      if (j == m) {
        const Rat* mn = &bval[0];
        for (int k = 1; k < n; ++k) {
          if (bval[k] < *mn) mn = &bval[k];
        }
        if (!loc.has || *mn > loc.value) {
          loc.has = true;
          loc.value = *mn;
          loc.assign = a;
        }
        return;
      }
      for (int k = 0; k < n; ++k) {
        a[j] = k;
        bval[k] += values[j];
        self(self, j + 1);
        bval[k] -= values[j];
      }
    };
    dfs(dfs, 1 + d);
  });
  const Local* best = nullptr;
  for (const Local& loc : results) {
    if (loc.has && (!best || loc.value > best->value)) best = &loc;
  }
  check(best != nullptr, "exact_mms found no allocation");
  return {best->value, allocation_from_assignment(best->assign, n)};
}

// Largest alpha such that some allocation is alpha-MMS against the given MMS
// vector, capped at 1. An agent with a negative MMS contributes mms/v for a
// negative own value; any non-negative own value fully satisfies that agent.
inline Rat exact_alpha_star(const Instance& inst, const std::vector<Rat>& mms,
                            long long budget = kDefaultBudget, int threads = 1) {
  require(static_cast<int>(mms.size()) == inst.n, Errc::length_mismatch,
          "exact_alpha_star: mms vector must have one entry per agent");
  detail::require_budget(inst.n, inst.m, budget, "exact_alpha_star");
  int n = inst.n, m = inst.m;

  struct Local {
    Rat best = Rat(-1);
  };
  auto prefixes = detail::assignment_prefixes(m, n, threads);
  std::vector<Local> results(prefixes.size());
  detail::run_chunks(static_cast<int>(prefixes.size()), threads, [&](int ci) {
    const auto& pre = prefixes[ci];
    int d = static_cast<int>(pre.size());
    std::vector<Rat> own(n, Rat(0));
    for (int t = 0; t < d; ++t) own[pre[t]] += inst.values[pre[t]][t];
    Local& loc = results[ci];
    // Cached thresholds best * mms_i for the positive-MMS agents turn the
    // common reject path into sign tests and one comparison, with exact
    // divisions only on improvements.
    std::vector<Rat> tb(n);
    auto refresh = [&]() {
      for (int i = 0; i < n; ++i) {
        if (mms[i] > 0) tb[i] = loc.best * mms[i];
      }
    };
    refresh();
    auto leaf = [&]() {
      for (int i = 0; i < n; ++i) {
        const Rat& v = own[i];
        if (mms[i] > 0) {
          if (v < 0 || !(v > tb[i])) return;
        } else if (mms[i] == 0) {
          if (v < 0 || !(Rat(1) > loc.best)) return;
        } else {
          if (v >= 0) {
            if (!(Rat(1) > loc.best)) return;
          } else {
            if (!(mms[i] < loc.best * v)) return;
          }
        }
      }
      Rat cand;
      bool first = true;
      for (int i = 0; i < n; ++i) {
        const Rat& v = own[i];
        Rat r;
        if (mms[i] > 0) {
          r = v / mms[i];
        } else if (mms[i] == 0) {
          r = 1;
        } else {
          r = v >= 0 ? Rat(1) : mms[i] / v;
        }
        if (first || r < cand) {
          cand = r;
          first = false;
        }
      }
      check(n == 0 || cand > loc.best, "alpha-star candidate did not improve");
      loc.best = cand;
      refresh();
    };
    auto dfs = [&](auto&& self, int j) -> void {
      if (j == m) {
        leaf();
        return;
      }
      for (int k = 0; k < n; ++k) {
        own[k] += inst.values[k][j];
        self(self, j + 1);
        own[k] -= inst.values[k][j];
      }
    };
    dfs(dfs, d);
  });
  Rat best = Rat(-1);
  for (const Local& loc : results) {
    if (loc.best > best) best = loc.best;
  }
  check(best >= 0, "alpha-star scan saw no allocation");
  return best > 1 ? Rat(1) : best;
}

// First allocation in enumeration order meeting the alpha-MMS thresholds, if
// any. Test helper backing the completeness checks.
inline std::optional<Allocation> find_alpha_mms_allocation(const Instance& inst,
                                                           const std::vector<Rat>& mms,
                                                           const Rat& alpha,
                                                           long long budget = kDefaultBudget) {
  require(alpha > 0 && alpha <= 1, Errc::bad_parameter, "alpha must be in (0, 1]");
  require(static_cast<int>(mms.size()) == inst.n, Errc::length_mismatch,
          "find_alpha_mms_allocation: mms vector must have one entry per agent");
  detail::require_budget(inst.n, inst.m, budget, "find_alpha_mms_allocation");
  int n = inst.n, m = inst.m;
  std::vector<Rat> threshold(n);
  for (int i = 0; i < n; ++i) {
    threshold[i] = mms[i] >= 0 ? Rat(alpha * mms[i]) : Rat(mms[i] / alpha);
  }
  std::vector<Rat> own(n, Rat(0));
  std::vector<int> a(m, 0);
  std::optional<Allocation> found;
  auto dfs = [&](auto&& self, int j) -> bool {
    if (j == m) {
      for (int i = 0; i < n; ++i) {
        if (own[i] < threshold[i]) return false;
      }
      found = allocation_from_assignment(a, n);
      return true;
    }
    for (int k = 0; k < n; ++k) {
      a[j] = k;
      own[k] += inst.values[k][j];
      bool done = self(self, j + 1);
      own[k] -= inst.values[k][j];
      if (done) return true;
    }
    return false;
  };
  dfs(dfs, 0);
  return found;
}

// B gamma-dominates A if every agent improves by the (1+gamma) margin on the
// appropriate side of zero and at least one agent strictly does.
inline bool gamma_dominates(const Instance& inst, const Allocation& b, const Allocation& a,
                            const Rat& gamma) {
  require(gamma >= 0, Errc::bad_parameter, "gamma must be non-negative");
  bool strict = false;
  for (int i = 0; i < inst.n; ++i) {
    Rat va = bundle_value(inst, i, a.bundles[i]);
    Rat vb = bundle_value(inst, i, b.bundles[i]);
    Rat need = va >= 0 ? Rat((1 + gamma) * va) : Rat(va / (1 + gamma));
    if (vb < need) return false;
    if (vb > need) strict = true;
  }
  return strict;
}

inline bool is_gamma_po(const Instance& inst, const Allocation& alloc, const Rat& gamma,
                        long long budget = kDefaultBudget, int threads = 1) {
  require(gamma >= 0, Errc::bad_parameter, "gamma must be non-negative");
  validate_allocation(inst, alloc);
  detail::require_budget(inst.n, inst.m, budget, "is_gamma_po");
  int n = inst.n, m = inst.m;
  std::vector<Rat> need(n);
  for (int i = 0; i < n; ++i) {
    Rat va = bundle_value(inst, i, alloc.bundles[i]);
    need[i] = va >= 0 ? Rat((1 + gamma) * va) : Rat(va / (1 + gamma));
  }
  std::atomic<bool> dominated{false};
  auto prefixes = detail::assignment_prefixes(m, n, threads);
  detail::run_chunks(static_cast<int>(prefixes.size()), threads, [&](int ci) {
    if (dominated.load(std::memory_order_relaxed)) return;
    const auto& pre = prefixes[ci];
    int d = static_cast<int>(pre.size());
    std::vector<Rat> own(n, Rat(0));
    for (int t = 0; t < d; ++t) own[pre[t]] += inst.values[pre[t]][t];
    auto dfs = [&](auto&& self, int j) -> bool {
      if (j == m) {
        bool strict = false;
        for (int i = 0; i < n; ++i) {
          if (own[i] < need[i]) return false;
          if (own[i] > need[i]) strict = true;
        }
        return strict;
      }
      for (int k = 0; k < n; ++k) {
        own[k] += inst.values[k][j];
        bool hit = self(self, j + 1);
        own[k] -= inst.values[k][j];
        if (hit) return true;
      }
      return false;
    };
    if (dfs(dfs, d)) dominated.store(true, std::memory_order_relaxed);
  });
  return !dominated.load();
}

// Lexicographically smallest gamma-dominating allocation, if any. Backs the
// verify report, where a bare boolean would bury the evidence.
inline std::optional<Allocation> find_gamma_dominator(const Instance& inst,
                                                      const Allocation& alloc, const Rat& gamma,
                                                      long long budget = kDefaultBudget) {
  require(gamma >= 0, Errc::bad_parameter, "gamma must be non-negative");
  validate_allocation(inst, alloc);
  detail::require_budget(inst.n, inst.m, budget, "find_gamma_dominator");
  int n = inst.n, m = inst.m;
  std::vector<Rat> need(n);
  for (int i = 0; i < n; ++i) {
    Rat va = bundle_value(inst, i, alloc.bundles[i]);
    need[i] = va >= 0 ? Rat((1 + gamma) * va) : Rat(va / (1 + gamma));
  }
  std::vector<int> assign(m, 0);
  std::vector<Rat> own(n, Rat(0));
  auto dfs = [&](auto&& self, int j) -> bool {
    if (j == m) {
      bool strict = false;
      for (int i = 0; i < n; ++i) {
        if (own[i] < need[i]) return false;
        if (own[i] > need[i]) strict = true;
      }
      return strict;
    }
    for (int k = 0; k < n; ++k) {
      assign[j] = k;
      own[k] += inst.values[k][j];
      bool hit = self(self, j + 1);
      own[k] -= inst.values[k][j];
      if (hit) return true;
    }
    return false;
  };
  if (!dfs(dfs, 0)) return std::nullopt;
  Allocation dom;
  dom.bundles.assign(n, {});
  for (int j = 0; j < m; ++j) dom.bundles[assign[j]].push_back(j);
  return dom;
}

}  // namespace manna::oracle
