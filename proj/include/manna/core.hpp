#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "manna/errors.hpp"
#include "manna/rational.hpp"

namespace manna {

struct Instance {
  int n = 0;
  int m = 0;
  std::vector<std::string> item_labels;
  std::vector<std::vector<Rat>> values;  // n rows, one per agent; m columns
};

// Per-agent sign split and the global good/chore partition. An item valued
// zero by an agent counts as a good for that agent; an item is a global good
// as soon as one agent values it non-negatively.
struct ItemClassification {
  std::vector<std::vector<int>> goods_of;
  std::vector<std::vector<int>> chores_of;
  std::vector<int> global_goods;
  std::vector<int> global_chores;
  std::vector<Rat> v_plus;   // per agent, sum over goods_of
  std::vector<Rat> v_minus;  // per agent, sum of |v_ij| over chores_of
};

// Bundles may be empty; bundle k belongs to agent k.
struct Allocation {
  std::vector<std::vector<int>> bundles;
};

struct SolverParams {
  Rat alpha = Rat(1);
  Rat epsilon = Rat(1, 10);
  Rat gamma = Rat(1, 10);
  Rat tau = Rat(1, 4);
  Rat delta = Rat(1, 1024);
  long long big_budget = 20'000'000;
  std::uint64_t seed = 0;
};

inline void validate_instance(const Instance& inst) {
  require(inst.n >= 1, Errc::bad_value, "field 'agents': must be at least 1");
  require(static_cast<int>(inst.item_labels.size()) == inst.m, Errc::length_mismatch,
          "field 'items': label count does not match m");
  require(static_cast<int>(inst.values.size()) == inst.n, Errc::ragged_matrix,
          "field 'values': expected one row per agent");
  for (int i = 0; i < inst.n; ++i) {
    require(static_cast<int>(inst.values[i].size()) == inst.m, Errc::ragged_matrix,
            "field 'values': row " + std::to_string(i) + " has wrong length");
  }
  std::set<std::string> seen;
  for (const auto& label : inst.item_labels) {
    require(seen.insert(label).second, Errc::duplicate_label,
            "field 'items': duplicate label '" + label + "'");
  }
}

inline Instance make_instance(int n, std::vector<std::string> labels,
                              std::vector<std::vector<Rat>> values) {
  Instance inst;
  inst.n = n;
  inst.m = static_cast<int>(labels.size());
  inst.item_labels = std::move(labels);
  inst.values = std::move(values);
  validate_instance(inst);
  return inst;
}

inline Rat total_value(const Instance& inst, int agent) {
  Rat t = 0;
  for (const Rat& v : inst.values[agent]) t += v;
  return t;
}

inline ItemClassification classify_items(const Instance& inst) {
  ItemClassification cls;
  cls.goods_of.resize(inst.n);
  cls.chores_of.resize(inst.n);
  cls.v_plus.assign(inst.n, Rat(0));
  cls.v_minus.assign(inst.n, Rat(0));
  for (int i = 0; i < inst.n; ++i) {
    for (int j = 0; j < inst.m; ++j) {
      const Rat& v = inst.values[i][j];
      if (v >= 0) {
        cls.goods_of[i].push_back(j);
        cls.v_plus[i] += v;
      } else {
        cls.chores_of[i].push_back(j);
        cls.v_minus[i] -= v;
      }
    }
  }
  for (int j = 0; j < inst.m; ++j) {
    bool good = false;
    for (int i = 0; i < inst.n; ++i) {
      if (inst.values[i][j] >= 0) {
        good = true;
        break;
      }
    }
    (good ? cls.global_goods : cls.global_chores).push_back(j);
  }
  return cls;
}

// Scales each row so that |v_i(M)| = n. Errors out on zero-total rows; the
// mixed-manna pipeline removes those agents before normalizing.
inline std::pair<Instance, std::vector<Rat>> normalize(const Instance& inst) {
  Instance out = inst;
  std::vector<Rat> scales(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    Rat t = total_value(inst, i);
    require(t != 0, Errc::zero_total_agent,
            "agent " + std::to_string(i) + " has zero total value; cannot normalize");
    Rat c = Rat(inst.n) / (t < 0 ? Rat(-t) : t);
    scales[i] = c;
    for (int j = 0; j < inst.m; ++j) out.values[i][j] *= c;
  }
  return {std::move(out), std::move(scales)};
}

inline std::vector<bool> check_tau_condition(const Instance& inst, const Rat& tau) {
  ItemClassification cls = classify_items(inst);
  std::vector<bool> ok(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    Rat total = cls.v_plus[i] - cls.v_minus[i];
    if (total < 0) total = -total;
    const Rat& lesser = cls.v_plus[i] < cls.v_minus[i] ? cls.v_plus[i] : cls.v_minus[i];
    ok[i] = total >= tau * lesser;
  }
  return ok;
}

inline Rat bundle_value(const Instance& inst, int agent, const std::vector<int>& bundle) {
  require(agent >= 0 && agent < inst.n, Errc::index_out_of_range, "agent index out of range");
  Rat t = 0;
  for (int j : bundle) {
    require(j >= 0 && j < inst.m, Errc::index_out_of_range, "item index out of range");
    t += inst.values[agent][j];
  }
  return t;
}

inline void validate_allocation(const Instance& inst, const Allocation& alloc) {
  require(static_cast<int>(alloc.bundles.size()) == inst.n, Errc::bad_allocation,
          "allocation must have exactly one bundle per agent");
  std::vector<int> seen(inst.m, 0);
  for (const auto& bundle : alloc.bundles) {
    for (int j : bundle) {
      require(j >= 0 && j < inst.m, Errc::index_out_of_range, "item index out of range");
      require(seen[j] == 0, Errc::bad_allocation,
              "item '" + inst.item_labels[j] + "' allocated twice");
      seen[j] = 1;
    }
  }
  for (int j = 0; j < inst.m; ++j) {
    require(seen[j] == 1, Errc::bad_allocation,
            "item '" + inst.item_labels[j] + "' not allocated");
  }
}

inline Allocation allocation_from_assignment(const std::vector<int>& assign, int n) {
  Allocation alloc;
  alloc.bundles.assign(n, {});
  for (int j = 0; j < static_cast<int>(assign.size()); ++j) {
    check(assign[j] >= 0 && assign[j] < n, "assignment entry out of range");
    alloc.bundles[assign[j]].push_back(j);
  }
  return alloc;
}

inline std::vector<int> assignment_from_allocation(const Instance& inst, const Allocation& alloc) {
  validate_allocation(inst, alloc);
  std::vector<int> assign(inst.m, -1);
  for (int k = 0; k < inst.n; ++k) {
    for (int j : alloc.bundles[k]) assign[j] = k;
  }
  return assign;
}

// alpha must lie in (0, 1]; callers short-circuit alpha <= 0 to true since
// any allocation is alpha-MMS there.
inline bool satisfies_alpha_mms(const Instance& inst, const Allocation& alloc,
                                const std::vector<Rat>& mms, const Rat& alpha) {
  require(alpha > 0 && alpha <= 1, Errc::bad_parameter, "alpha must be in (0, 1]");
  require(static_cast<int>(mms.size()) == inst.n, Errc::length_mismatch,
          "mms vector must have one entry per agent");
  require(static_cast<int>(alloc.bundles.size()) == inst.n, Errc::bad_allocation,
          "allocation must have exactly one bundle per agent");
  for (int i = 0; i < inst.n; ++i) {
    Rat v = bundle_value(inst, i, alloc.bundles[i]);
    if (mms[i] >= 0) {
      if (v < alpha * mms[i]) return false;
    } else {
      if (v < mms[i] / alpha) return false;
    }
  }
  return true;
}

inline Rat welfare(const Instance& inst, const Allocation& alloc) {
  require(static_cast<int>(alloc.bundles.size()) == inst.n, Errc::bad_allocation,
          "allocation must have exactly one bundle per agent");
  Rat w = 0;
  for (int i = 0; i < inst.n; ++i) w += bundle_value(inst, i, alloc.bundles[i]);
  return w;
}

}  // namespace manna
