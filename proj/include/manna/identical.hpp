#pragma once

#include <algorithm>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "manna/core.hpp"
#include "manna/enumerate.hpp"

namespace manna::identical {

// Approximate maximin share for agents with a common valuation. The search
// enumerates placements of the few value-heavy items exactly and spreads the
// light ones greedily; all arithmetic is exact, so results are reproducible
// bit for bit.

struct BigSmallSplit {
  std::vector<int> big;           // |v_j| >= threshold
  std::vector<int> small_goods;   // below threshold, v_j >= 0
  std::vector<int> small_chores;  // below threshold, v_j < 0
  Rat threshold;
};

inline BigSmallSplit big_small_split(const std::vector<Rat>& values, const Rat& threshold) {
  BigSmallSplit out;
  out.threshold = threshold;
  for (int j = 0; j < static_cast<int>(values.size()); ++j) {
    if (abs(values[j]) >= threshold) {
      out.big.push_back(j);
    } else if (values[j] >= 0) {
      out.small_goods.push_back(j);
    } else {
      out.small_chores.push_back(j);
    }
  }
  return out;
}

// Bundle classes relative to the normalized per-bundle target of 1. The
// boundary values land as written: 1 and 1 - eps belong to b2, 0 to b3.
struct BSets {
  std::vector<int> b1;  // above 1
  std::vector<int> b2;  // within [1 - eps, 1]
  std::vector<int> b3;  // within [0, 1 - eps)
  std::vector<int> b4;  // negative
};

inline BSets classify_bsets(const std::vector<Rat>& bundle_values, const Rat& epsilon) {
  BSets out;
  Rat low = Rat(1) - epsilon;
  for (int k = 0; k < static_cast<int>(bundle_values.size()); ++k) {
    const Rat& v = bundle_values[k];
    if (v > 1) {
      out.b1.push_back(k);
    } else if (v >= low) {
      out.b2.push_back(k);
    } else if (v >= 0) {
      out.b3.push_back(k);
    } else {
      out.b4.push_back(k);
    }
  }
  return out;
}

namespace detail {

struct DrainOutcome {
  std::vector<Rat> bundle_values;
  std::vector<int> chore_bundle;  // parallel to split.small_chores, -1 if left over
  size_t drained = 0;
};

// Overfull bundles absorb small chores one at a time, lowest bundle index and
// lowest item index first, reclassifying after every step. A receiving bundle
// was above 1 and the chore is lighter than eps/2, so it cannot fall below
// 1 - eps/2.
inline DrainOutcome drain_small_chores(const std::vector<Rat>& values, int n,
                                       const std::vector<int>& big_assign,
                                       const BigSmallSplit& split, const Rat& epsilon) {
  check(big_assign.size() == split.big.size(), "big assignment must cover the big items");
  DrainOutcome out;
  out.bundle_values.assign(n, Rat(0));
  for (size_t t = 0; t < split.big.size(); ++t) {
    check(big_assign[t] >= 0 && big_assign[t] < n, "big assignment bundle out of range");
    out.bundle_values[big_assign[t]] += values[split.big[t]];
  }
  out.chore_bundle.assign(split.small_chores.size(), -1);
  Rat floor_line = Rat(1) - epsilon / 2;
  while (out.drained < split.small_chores.size()) {
    int target = -1;
    for (int k = 0; k < n && target < 0; ++k) {
      if (out.bundle_values[k] > 1) target = k;
    }
    if (target < 0) break;
    int j = split.small_chores[out.drained];
    out.chore_bundle[out.drained++] = target;
    out.bundle_values[target] += values[j];
    check(out.bundle_values[target] >= floor_line, "draining dropped a bundle below 1 - eps/2");
  }
  return out;
}

// Post-drain salvage test shared by is_partition_valid and the search leaf.
inline bool completable(const BSets& sets, const std::vector<Rat>& bundle_values,
                        const Rat& small_plus_total, const Rat& epsilon) {
  if (sets.b1.empty() || sets.b4.empty()) return true;
  Rat pool = small_plus_total;
  for (int k : sets.b3) pool += bundle_values[k];
  for (int k : sets.b4) pool += bundle_values[k];
  Rat cap = Rat(1) - epsilon / 2;
  return pool >= cap * static_cast<int>(sets.b3.size() + sets.b4.size());
}

}  // namespace detail

// A partition of the big items survives unless, after draining, overfull
// bundles coexist with negative ones and the light bundles plus the small
// goods cannot all be topped up to near-average.
inline bool is_partition_valid(const std::vector<Rat>& values, int n,
                               const std::vector<int>& big_partition, const BigSmallSplit& split,
                               const Rat& epsilon) {
  auto post = detail::drain_small_chores(values, n, big_partition, split, epsilon);
  Rat small_plus_total = 0;
  for (int j : split.small_goods) small_plus_total += values[j];
  BSets sets = classify_bsets(post.bundle_values, epsilon);
  return detail::completable(sets, post.bundle_values, small_plus_total, epsilon);
}

// Tops every bag up to 1 - eps, cheapest remaining item first (which drains
// chores before goods), with the last bag absorbing the leftovers. Condition
// set 1 caps bags at 1 and item magnitudes at eps and wants one unit of value
// per bag; set 2 tightens the caps to 1 - eps/2 and eps/2 in exchange for a
// pooled total of only 1 - eps/2 per bag. Under either set the greedy pass
// provably cannot run dry, so going empty mid-bag is reported as a defect.
inline Allocation bag_fill(const std::vector<Rat>& values, std::vector<std::vector<int>> bags,
                           std::vector<int> smalls, const Rat& epsilon, int condition_set) {
  require(condition_set == 1 || condition_set == 2, Errc::bad_parameter,
          "bag-fill condition set must be 1 or 2");
  require(epsilon > 0 && epsilon < 1, Errc::bad_parameter, "epsilon must lie in (0, 1)");
  int n = static_cast<int>(bags.size());
  require(n >= 1, Errc::bad_parameter, "bag-fill needs at least one bag");

  Allocation out;
  out.bundles = std::move(bags);
  std::vector<Rat> bag_values(n, Rat(0));
  std::vector<char> used(values.size(), 0);
  auto claim = [&](int j) {
    require(j >= 0 && j < static_cast<int>(values.size()), Errc::index_out_of_range,
            "bag-fill item index out of range");
    require(!used[j], Errc::bad_value, "bag-fill item listed twice");
    used[j] = 1;
  };
  Rat total = 0;
  for (int k = 0; k < n; ++k) {
    for (int j : out.bundles[k]) {
      claim(j);
      bag_values[k] += values[j];
      total += values[j];
    }
  }
  Rat item_cap = condition_set == 1 ? Rat(epsilon) : Rat(epsilon / 2);
  Rat bag_cap = condition_set == 1 ? Rat(1) : Rat(1 - epsilon / 2);
  for (int j : smalls) {
    claim(j);
    require(abs(values[j]) < item_cap, Errc::bagfill_precondition,
            condition_set == 1 ? "bag-fill condition set 1: item magnitude must stay below eps"
                               : "bag-fill condition set 2: item magnitude must stay below eps/2");
    total += values[j];
  }
  for (int k = 0; k < n; ++k) {
    require(bag_values[k] <= bag_cap, Errc::bagfill_precondition,
            condition_set == 1 ? "bag-fill condition set 1: initial bag value must not exceed 1"
                               : "bag-fill condition set 2: initial bag value must not exceed 1 - eps/2");
  }
  require(total >= bag_cap * n, Errc::bagfill_precondition,
          condition_set == 1 ? "bag-fill condition set 1: pooled value must reach 1 per bag"
                             : "bag-fill condition set 2: pooled value must reach 1 - eps/2 per bag");

  // Consuming the items in (value, index) order is the same as repeatedly
  // taking the cheapest remaining one.
  std::sort(smalls.begin(), smalls.end(), [&](int a, int b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return a < b;
  });
  Rat fill_line = Rat(1) - epsilon;
  size_t next = 0;
  for (int k = 0; k + 1 < n; ++k) {
    while (bag_values[k] < fill_line) {
      check(next < smalls.size(), "bag-fill ran out of items before the last bag");
      int j = smalls[next++];
      out.bundles[k].push_back(j);
      bag_values[k] += values[j];
    }
  }
  for (; next < smalls.size(); ++next) {
    out.bundles[n - 1].push_back(smalls[next]);
    bag_values[n - 1] += values[smalls[next]];
  }
  for (int k = 0; k < n; ++k) {
    check(bag_values[k] >= fill_line, "bag-fill left a bag below 1 - eps");
  }
  return out;
}

struct GoodsOnlyResult {
  Rat value;
  std::vector<int> assignment;  // item -> bundle
};

namespace detail {

inline GoodsOnlyResult goods_only_exact(const std::vector<Rat>& values, int n) {
  int m = static_cast<int>(values.size());
  std::vector<Rat> rest(m + 1, Rat(0));
  for (int j = m - 1; j >= 0; --j) rest[j] = rest[j + 1] + values[j];
  std::vector<Rat> bval(n, Rat(0));
  std::vector<int> assign(m, 0);
  GoodsOnlyResult best;
  bool has = false;
  auto dfs = [&](auto&& self, int j) -> void {
    Rat low = bval[0];
    for (int k = 1; k < n; ++k) {
      if (bval[k] < low) low = bval[k];
    }
    if (has && low + rest[j] < best.value) return;
    if (j == m) {
      if (!has || low > best.value) {
        has = true;
        best.value = low;
        best.assignment = assign;
      }
      return;
    }
    for (int k = 0; k < n; ++k) {
      assign[j] = k;
      bval[k] += values[j];
      self(self, j + 1);
      bval[k] -= values[j];
    }
    assign[j] = 0;
  };
  dfs(dfs, 0);
  return best;
}

// Largest e with base^e <= w, together with base^e, for w > 0 and base > 1.
inline std::pair<long long, Rat> floor_log(const Rat& w, const Rat& base) {
  long long e = 0;
  Rat p = 1;
  if (w >= 1) {
    while (p * base <= w) {
      p *= base;
      ++e;
    }
  } else {
    while (p > w) {
      p /= base;
      --e;
    }
  }
  return {e, p};
}

// Max-min partition after rounding each value down to a power of 1 + eps/4.
// Items collapse into exponent groups, states are remaining-count vectors,
// and f(k, S) = max over splits T of min(value(T), f(k - 1, S - T)).
inline GoodsOnlyResult goods_only_grouped(const std::vector<Rat>& values, int n,
                                          const Rat& epsilon, long long budget) {
  Rat base = Rat(1) + epsilon / 4;
  std::map<long long, std::pair<Rat, std::vector<int>>> groups;
  std::vector<int> zero_items;
  for (int j = 0; j < static_cast<int>(values.size()); ++j) {
    if (values[j] == 0) {
      zero_items.push_back(j);
      continue;
    }
    auto [e, p] = floor_log(values[j], base);
    auto& slot = groups[e];
    slot.first = p;
    slot.second.push_back(j);
  }
  int ng = static_cast<int>(groups.size());
  std::vector<Rat> unit(ng);
  std::vector<std::vector<int>> members(ng);
  std::vector<int> count(ng);
  {
    int g = 0;
    for (auto& entry : groups) {
      unit[g] = entry.second.first;
      members[g] = std::move(entry.second.second);
      count[g] = static_cast<int>(members[g].size());
      ++g;
    }
  }
  Int states = 1;
  for (int g = 0; g < ng; ++g) states *= count[g] + 1;
  require(states <= budget, Errc::budget_exceeded,
          "grouped goods-only mms needs " + states.str() + " states, budget is " +
              std::to_string(budget));
  std::vector<long long> stride(ng, 1);
  for (int g = 1; g < ng; ++g) stride[g] = stride[g - 1] * (count[g - 1] + 1);
  auto encode = [&](const std::vector<int>& cnt) {
    long long code = 0;
    for (int g = 0; g < ng; ++g) code += cnt[g] * stride[g];
    return code;
  };
  auto rounded_value = [&](const std::vector<int>& cnt) {
    Rat s = 0;
    for (int g = 0; g < ng; ++g) s += unit[g] * cnt[g];
    return s;
  };
  // Odometer over sub-count-vectors, group 0 fastest; returns false once the
  // sweep wraps around.
  auto next_sub = [&](std::vector<int>& t, const std::vector<int>& limit) {
    int g = 0;
    while (g < ng && t[g] == limit[g]) t[g++] = 0;
    if (g == ng) return false;
    ++t[g];
    return true;
  };

  std::vector<std::unordered_map<long long, Rat>> memo(n + 1);
  auto f = [&](auto&& self, int k, const std::vector<int>& cnt) -> Rat {
    if (k == 1) return rounded_value(cnt);
    long long code = encode(cnt);
    auto it = memo[k].find(code);
    if (it != memo[k].end()) return it->second;
    Rat best;
    bool has = false;
    std::vector<int> t(ng, 0);
    std::vector<int> remainder(ng);
    do {
      for (int g = 0; g < ng; ++g) remainder[g] = cnt[g] - t[g];
      Rat head = rounded_value(t);
      Rat tail = self(self, k - 1, remainder);
      Rat cand = head < tail ? head : tail;
      if (!has || cand > best) {
        has = true;
        best = cand;
      }
    } while (next_sub(t, cnt));
    memo[k].emplace(code, best);
    return best;
  };

  std::vector<int> cur = count;
  std::vector<std::vector<int>> bundle_counts;
  for (int k = n; k >= 2; --k) {
    std::vector<int> t(ng, 0);
    std::vector<int> remainder(ng);
    std::vector<int> pick;
    Rat best;
    bool has = false;
    do {
      for (int g = 0; g < ng; ++g) remainder[g] = cur[g] - t[g];
      Rat head = rounded_value(t);
      Rat tail = f(f, k - 1, remainder);
      Rat cand = head < tail ? head : tail;
      if (!has || cand > best) {
        has = true;
        best = cand;
        pick = t;
      }
    } while (next_sub(t, cur));
    bundle_counts.push_back(pick);
    for (int g = 0; g < ng; ++g) cur[g] -= pick[g];
  }
  bundle_counts.push_back(cur);

  GoodsOnlyResult out;
  out.assignment.assign(values.size(), 0);
  for (int j : zero_items) out.assignment[j] = 0;
  std::vector<size_t> cursor(ng, 0);
  for (int b = 0; b < n; ++b) {
    for (int g = 0; g < ng; ++g) {
      for (int c = 0; c < bundle_counts[b][g]; ++c) {
        out.assignment[members[g][cursor[g]++]] = b;
      }
    }
  }
  std::vector<Rat> bval(n, Rat(0));
  for (int j = 0; j < static_cast<int>(values.size()); ++j) {
    bval[out.assignment[j]] += values[j];
  }
  out.value = bval[0];
  for (int k = 1; k < n; ++k) {
    if (bval[k] < out.value) out.value = bval[k];
  }
  return out;
}

}  // namespace detail

// Exact when the full enumeration fits the budget, otherwise a rounded
// dynamic program losing at most a factor 1 - eps/4.
inline GoodsOnlyResult goods_only_mms(const std::vector<Rat>& values, int n, const Rat& epsilon,
                                      long long budget = 20'000'000) {
  require(n >= 1, Errc::bad_parameter, "need at least one bundle");
  require(epsilon > 0 && epsilon < 1, Errc::bad_parameter, "epsilon must lie in (0, 1)");
  for (const Rat& v : values) {
    require(v >= 0, Errc::bad_value, "goods-only mms expects non-negative values");
  }
  if (values.empty()) return {Rat(0), {}};
  if (manna::detail::power_count(n, static_cast<int>(values.size())) <= budget) {
    return detail::goods_only_exact(values, n);
  }
  return detail::goods_only_grouped(values, n, epsilon, budget);
}

struct ApproxMms {
  Rat value;
  Allocation witness;
};

namespace detail {

struct Candidate {
  bool has = false;
  Rat value;
  std::vector<int> assign;
};

inline bool improves(const Candidate& cand, const Candidate& over) {
  if (!cand.has) return false;
  if (!over.has) return true;
  if (cand.value != over.value) return cand.value > over.value;
  return cand.assign < over.assign;
}

// Enumerates all n^|big| placements of the big items. A node is cut once
// even the most optimistic completion, every remaining positive value landing
// on the current minimum bundle, cannot strictly beat the incumbent; ties are
// never cut, so the merged winner keeps the lexicographically smallest
// assignment. Leaf evaluation is injected by the caller.
template <class Leaf>
Candidate enumerate_big_partitions(const std::vector<Rat>& values, int n,
                                   const std::vector<int>& big, const Rat& optimistic_gain,
                                   int threads, Leaf leaf) {
  int nb = static_cast<int>(big.size());
  std::vector<Rat> rem_pos(nb + 1, Rat(0));
  for (int t = nb - 1; t >= 0; --t) {
    rem_pos[t] = rem_pos[t + 1];
    if (values[big[t]] > 0) rem_pos[t] += values[big[t]];
  }
  auto prefixes = manna::detail::assignment_prefixes(nb, n, threads);
  std::vector<Candidate> chunk_best(prefixes.size());
  manna::detail::run_chunks(static_cast<int>(prefixes.size()), threads, [&](int ci) {
    const auto& pre = prefixes[ci];
    std::vector<Rat> bval(n, Rat(0));
    std::vector<int> big_assign(nb, 0);
    for (size_t t = 0; t < pre.size(); ++t) {
      big_assign[t] = pre[t];
      bval[pre[t]] += values[big[t]];
    }
    Candidate local;
    auto dfs = [&](auto&& self, int depth) -> void {
      if (local.has) {
        Rat low = bval[0];
        for (int k = 1; k < n; ++k) {
          if (bval[k] < low) low = bval[k];
        }
        if (low + rem_pos[depth] + optimistic_gain < local.value) return;
      }
      if (depth == nb) {
        Candidate cand = leaf(big_assign);
        if (improves(cand, local)) local = std::move(cand);
        return;
      }
      for (int k = 0; k < n; ++k) {
        big_assign[depth] = k;
        bval[k] += values[big[depth]];
        self(self, depth + 1);
        bval[k] -= values[big[depth]];
      }
      big_assign[depth] = 0;
    };
    dfs(dfs, static_cast<int>(pre.size()));
    chunk_best[ci] = std::move(local);
  });
  Candidate best;
  for (auto& cand : chunk_best) {
    if (improves(cand, best)) best = std::move(cand);
  }
  return best;
}

inline Allocation to_allocation(const std::vector<int>& assign, int n) {
  Allocation alloc;
  alloc.bundles.assign(n, {});
  for (int j = 0; j < static_cast<int>(assign.size()); ++j) {
    alloc.bundles[assign[j]].push_back(j);
  }
  return alloc;
}

inline Candidate finish_candidate(const std::vector<Rat>& values, int n, std::vector<int> assign) {
  Candidate cand;
  cand.has = true;
  std::vector<Rat> final_val(n, Rat(0));
  for (int j = 0; j < static_cast<int>(assign.size()); ++j) {
    check(assign[j] >= 0, "every item must be placed");
    final_val[assign[j]] += values[j];
  }
  cand.assign = std::move(assign);
  cand.value = final_val[0];
  for (int k = 1; k < n; ++k) {
    if (final_val[k] < cand.value) cand.value = final_val[k];
  }
  return cand;
}

}  // namespace detail

// Goods-side search on values normalized to sum to n. Big items are placed
// exhaustively; overfull bundles first shed small chores one at a time, then
// the leaf is finished by bag-filling or, when only overfull and light
// bundles remain, by repartitioning the light bundles as a goods-only
// sub-problem.
inline ApproxMms approx_mms_nonneg(const std::vector<Rat>& values, int n, const Rat& epsilon,
                                   long long budget = 20'000'000, int threads = 1) {
  require(n >= 1, Errc::bad_parameter, "need at least one bundle");
  require(epsilon > 0 && epsilon < 1, Errc::bad_parameter, "epsilon must lie in (0, 1)");
  int m = static_cast<int>(values.size());
  Rat total = 0;
  for (const Rat& v : values) total += v;
  require(total == n, Errc::bad_parameter, "values must be normalized to sum to n");

  auto split = big_small_split(values, Rat(epsilon / 2));
  manna::detail::require_budget(n, static_cast<int>(split.big.size()), budget,
                                "identical mms enumeration");
  Rat small_plus_total = 0;
  for (int j : split.small_goods) small_plus_total += values[j];

  auto leaf = [&](const std::vector<int>& big_assign) -> detail::Candidate {
    auto post = detail::drain_small_chores(values, n, big_assign, split, epsilon);
    std::vector<Rat>& bval = post.bundle_values;
    std::vector<int> assign(m, -1);
    for (size_t t = 0; t < split.big.size(); ++t) assign[split.big[t]] = big_assign[t];
    for (size_t t = 0; t < post.drained; ++t) {
      assign[split.small_chores[t]] = post.chore_bundle[t];
    }

    BSets sets = classify_bsets(bval, epsilon);
    if (!detail::completable(sets, bval, small_plus_total, epsilon)) return {};
    if (sets.b1.empty()) {
      std::vector<std::vector<int>> bags(n);
      for (int j = 0; j < m; ++j) {
        if (assign[j] >= 0) bags[assign[j]].push_back(j);
      }
      std::vector<int> rest = split.small_goods;
      rest.insert(rest.end(), split.small_chores.begin() + post.drained,
                  split.small_chores.end());
      std::sort(rest.begin(), rest.end());
      auto filled = bag_fill(values, std::move(bags), rest, epsilon, 1);
      for (int k = 0; k < n; ++k) {
        for (int j : filled.bundles[k]) assign[j] = k;
      }
    } else {
      check(post.drained == split.small_chores.size(),
            "an overfull bundle implies the chores ran out");
      if (!sets.b4.empty()) {
        std::vector<int> lanes = sets.b3;
        lanes.insert(lanes.end(), sets.b4.begin(), sets.b4.end());
        std::sort(lanes.begin(), lanes.end());
        std::vector<int> lane_of(n, -1);
        for (size_t r = 0; r < lanes.size(); ++r) lane_of[lanes[r]] = static_cast<int>(r);
        std::vector<std::vector<int>> bags(lanes.size());
        for (int j = 0; j < m; ++j) {
          if (assign[j] >= 0 && lane_of[assign[j]] >= 0) bags[lane_of[assign[j]]].push_back(j);
        }
        auto filled = bag_fill(values, std::move(bags), split.small_goods, epsilon, 2);
        for (size_t r = 0; r < lanes.size(); ++r) {
          for (int j : filled.bundles[r]) assign[j] = lanes[r];
        }
      } else if (sets.b3.empty()) {
        // Only overfull and near-target bundles; the small goods cannot hurt.
        for (int j : split.small_goods) assign[j] = 0;
      } else {
        std::vector<int> slot_of(n, -1);
        for (size_t q = 0; q < sets.b3.size(); ++q) slot_of[sets.b3[q]] = static_cast<int>(q);
        std::vector<std::vector<int>> light_items(sets.b3.size());
        for (int j = 0; j < m; ++j) {
          if (assign[j] >= 0 && slot_of[assign[j]] >= 0) light_items[slot_of[assign[j]]].push_back(j);
        }
        std::vector<Rat> pseudo;
        for (int k : sets.b3) pseudo.push_back(bval[k]);
        for (int j : split.small_goods) pseudo.push_back(values[j]);
        auto sub = goods_only_mms(pseudo, static_cast<int>(sets.b3.size()), epsilon, budget);
        for (size_t q = 0; q < sets.b3.size(); ++q) {
          int dest = sets.b3[sub.assignment[q]];
          for (int j : light_items[q]) assign[j] = dest;
        }
        for (size_t u = 0; u < split.small_goods.size(); ++u) {
          assign[split.small_goods[u]] = sets.b3[sub.assignment[sets.b3.size() + u]];
        }
      }
    }
    return detail::finish_candidate(values, n, std::move(assign));
  };

  auto best =
      detail::enumerate_big_partitions(values, n, split.big, small_plus_total, threads, leaf);
  check(best.has, "at least one partition is completable");
  return {best.value, detail::to_allocation(best.assign, n)};
}

// Chores-side search on values normalized to sum to -n. Small goods pad the
// lightest bundle, small chores then go to the fullest one, so no single
// bundle drifts far from the average.
inline ApproxMms approx_mms_negative(const std::vector<Rat>& values, int n, const Rat& epsilon,
                                     long long budget = 20'000'000, int threads = 1) {
  require(n >= 1, Errc::bad_parameter, "need at least one bundle");
  require(epsilon > 0 && epsilon < 1, Errc::bad_parameter, "epsilon must lie in (0, 1)");
  int m = static_cast<int>(values.size());
  Rat total = 0;
  for (const Rat& v : values) total += v;
  require(total == -n, Errc::bad_parameter, "values must be normalized to sum to -n");

  Rat sigma = Rat(epsilon / (Rat(1) - epsilon));
  auto split = big_small_split(values, sigma);
  manna::detail::require_budget(n, static_cast<int>(split.big.size()), budget,
                                "identical mms enumeration");
  Rat small_plus_total = 0;
  for (int j : split.small_goods) small_plus_total += values[j];

  auto leaf = [&](const std::vector<int>& big_assign) -> detail::Candidate {
    std::vector<Rat> bval(n, Rat(0));
    std::vector<int> assign(m, -1);
    for (size_t t = 0; t < split.big.size(); ++t) {
      assign[split.big[t]] = big_assign[t];
      bval[big_assign[t]] += values[split.big[t]];
    }
    for (int j : split.small_goods) {
      int k = 0;
      for (int q = 1; q < n; ++q) {
        if (bval[q] < bval[k]) k = q;
      }
      assign[j] = k;
      bval[k] += values[j];
    }
    for (int j : split.small_chores) {
      int k = 0;
      for (int q = 1; q < n; ++q) {
        if (bval[q] > bval[k]) k = q;
      }
      assign[j] = k;
      bval[k] += values[j];
    }
    return detail::finish_candidate(values, n, std::move(assign));
  };

  auto best =
      detail::enumerate_big_partitions(values, n, split.big, small_plus_total, threads, leaf);
  check(best.has, "enumeration always yields a candidate");
  return {best.value, detail::to_allocation(best.assign, n)};
}

// Dispatch on the sign of the total. Values are normalized internally; the
// returned share is in the caller's units. A zero total is handled exactly:
// the maximin share is 0 and one bundle holding everything attains it.
inline ApproxMms approx_mms(const std::vector<Rat>& values, int n, const Rat& epsilon,
                            long long budget = 20'000'000, int threads = 1) {
  require(n >= 1, Errc::bad_parameter, "need at least one bundle");
  require(epsilon > 0 && epsilon < 1, Errc::bad_parameter, "epsilon must lie in (0, 1)");
  Rat total = 0;
  for (const Rat& v : values) total += v;
  if (total == 0) {
    Allocation alloc;
    alloc.bundles.assign(n, {});
    for (int j = 0; j < static_cast<int>(values.size()); ++j) alloc.bundles[0].push_back(j);
    return {Rat(0), alloc};
  }
  Rat scale = Rat(Rat(n) / abs(total));
  std::vector<Rat> w(values.size());
  for (size_t j = 0; j < values.size(); ++j) w[j] = Rat(values[j] * scale);
  ApproxMms res = total > 0 ? approx_mms_nonneg(w, n, epsilon, budget, threads)
                            : approx_mms_negative(w, n, epsilon, budget, threads);
  res.value = Rat(res.value / scale);
  return res;
}

// Per-agent share targets for the mixed-manna pipeline, computed on the
// normalized instance.
struct MmsProfile {
  std::vector<Rat> mu_tilde;
  std::vector<int> sign;  // sign of v_i(M): +1 or -1 (zero rows are removed upstream)
  Rat epsilon_used;
};

}  // namespace manna::identical
