#pragma once

#include <optional>
#include <vector>

#include "manna/core.hpp"

namespace manna::lp {

// Fractional relaxation over the SMALL items: maximize total welfare
//   max sum_{i,t} v_it x_it
// subject to per-agent floors sum_t v_it x_it >= c_i, full availability
// sum_i x_it <= 1 for goods, mandatory disposal sum_i x_it >= 1 for chores,
// and x >= 0. Columns are positions into a caller-chosen SMALL item list.
struct SmallLpSpec {
  int agents = 0;
  std::vector<std::vector<Rat>> values;           // agents x items
  std::vector<std::vector<int>> small_goods_of;   // per agent, column ids with v >= 0
  std::vector<std::vector<int>> small_chores_of;  // per agent, column ids with v < 0
  std::vector<Rat> c;
};

struct FractionalAllocation {
  std::vector<std::vector<Rat>> x;  // agents x items
};

inline int item_count(const SmallLpSpec& spec) {
  return spec.agents == 0 ? 0 : static_cast<int>(spec.values[0].size());
}

inline void validate_spec(const SmallLpSpec& spec) {
  require(spec.agents >= 1, Errc::bad_parameter, "lp spec needs at least one agent");
  require(static_cast<int>(spec.values.size()) == spec.agents, Errc::length_mismatch,
          "lp spec: values row count");
  require(static_cast<int>(spec.c.size()) == spec.agents, Errc::length_mismatch,
          "lp spec: c length");
  require(static_cast<int>(spec.small_goods_of.size()) == spec.agents, Errc::length_mismatch,
          "lp spec: small_goods_of length");
  require(static_cast<int>(spec.small_chores_of.size()) == spec.agents, Errc::length_mismatch,
          "lp spec: small_chores_of length");
  int k = item_count(spec);
  for (int i = 0; i < spec.agents; ++i) {
    require(static_cast<int>(spec.values[i].size()) == k, Errc::ragged_matrix,
            "lp spec: ragged values");
    std::vector<int> seen(k, 0);
    for (int t : spec.small_goods_of[i]) {
      require(t >= 0 && t < k, Errc::index_out_of_range, "lp spec: good column out of range");
      require(spec.values[i][t] >= 0, Errc::bad_value, "lp spec: good column valued negatively");
      ++seen[t];
    }
    for (int t : spec.small_chores_of[i]) {
      require(t >= 0 && t < k, Errc::index_out_of_range, "lp spec: chore column out of range");
      require(spec.values[i][t] < 0, Errc::bad_value, "lp spec: chore column valued non-negatively");
      ++seen[t];
    }
    for (int t = 0; t < k; ++t) {
      require(seen[t] == 1, Errc::bad_value,
              "lp spec: columns must be partitioned into goods and chores per agent");
    }
  }
}

// A column is a global good when someone weakly likes it; otherwise every
// agent strictly dislikes it and full disposal is enforced.
inline std::vector<bool> global_good_columns(const SmallLpSpec& spec) {
  int k = item_count(spec);
  std::vector<bool> good(k, false);
  for (int i = 0; i < spec.agents; ++i) {
    for (int t = 0; t < k; ++t) {
      if (spec.values[i][t] >= 0) good[t] = true;
    }
  }
  return good;
}

namespace detail {

// Dense exact-arithmetic two-phase primal simplex with Bland's rule. All
// orders (columns, rows, tie-breaks) are fixed, so the output is a
// deterministic function of the spec.
struct Tableau {
  std::vector<std::vector<Rat>> row;  // each row: coefficients then rhs
  std::vector<int> basis;
  int cols = 0;

  Rat& rhs(int r) { return row[r][cols]; }

  void pivot(int r, int j) {
    Rat p = row[r][j];
    for (int t = 0; t <= cols; ++t) row[r][t] /= p;
    for (int q = 0; q < static_cast<int>(row.size()); ++q) {
      if (q == r || row[q][j] == 0) continue;
      Rat f = row[q][j];
      for (int t = 0; t <= cols; ++t) row[q][t] -= f * row[r][t];
    }
    basis[r] = j;
  }

  // Maximizes cost over the current basis; returns false on unboundedness.
  bool simplex(const std::vector<Rat>& cost) {
    int r_count = static_cast<int>(row.size());
    while (true) {
      std::vector<Rat> red = cost;
      for (int r = 0; r < r_count; ++r) {
        const Rat& cb = cost[basis[r]];
        if (cb == 0) continue;
        for (int j = 0; j < cols; ++j) red[j] -= cb * row[r][j];
      }
      int enter = -1;
      for (int j = 0; j < cols; ++j) {
        if (red[j] > 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Rat best;
      for (int r = 0; r < r_count; ++r) {
        if (row[r][enter] <= 0) continue;
        Rat ratio = rhs(r) / row[r][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis[r] < basis[leave])) {
          best = ratio;
          leave = r;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace detail

inline std::optional<FractionalAllocation> solve_small_lp(const SmallLpSpec& spec) {
  validate_spec(spec);
  int n = spec.agents;
  int k = item_count(spec);
  std::vector<bool> is_good = global_good_columns(spec);
  int structural = n * k;
  int n_rows = n + k;  // one availability or disposal row per column

  detail::Tableau tab;
  tab.cols = structural + n_rows;
  tab.row.assign(n_rows, std::vector<Rat>(tab.cols + 1, Rat(0)));
  // Agent floor rows: sum v x - s = c.
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < k; ++t) tab.row[i][i * k + t] = spec.values[i][t];
    tab.row[i][structural + i] = -1;
    tab.rhs(i) = spec.c[i];
  }
  // Column rows: goods get +slack (<= 1), chores get -surplus (>= 1).
  for (int t = 0; t < k; ++t) {
    int r = n + t;
    for (int i = 0; i < n; ++i) tab.row[r][i * k + t] = 1;
    tab.row[r][structural + r] = is_good[t] ? Rat(1) : Rat(-1);
    tab.rhs(r) = 1;
  }
  for (int r = 0; r < n_rows; ++r) {
    if (tab.rhs(r) < 0) {
      for (int t = 0; t <= tab.cols; ++t) tab.row[r][t] = -tab.row[r][t];
    }
  }
  // Start from slack columns where they are +1 after sign normalization;
  // everything else gets an artificial variable.
  tab.basis.assign(n_rows, -1);
  int art_begin = tab.cols;
  for (int r = 0; r < n_rows; ++r) {
    if (tab.row[r][structural + r] == 1) {
      tab.basis[r] = structural + r;
    } else {
      for (auto& row : tab.row) row.insert(row.end() - 1, Rat(0));
      ++tab.cols;
      tab.row[r][tab.cols - 1] = 1;
      tab.basis[r] = tab.cols - 1;
    }
  }

  if (tab.cols > art_begin) {
    std::vector<Rat> phase1(tab.cols, Rat(0));
    for (int j = art_begin; j < tab.cols; ++j) phase1[j] = -1;
    check(tab.simplex(phase1), "phase-1 LP cannot be unbounded");
    Rat infeas = 0;
    for (int r = 0; r < n_rows; ++r) {
      if (tab.basis[r] >= art_begin) infeas += tab.rhs(r);
    }
    if (infeas > 0) return std::nullopt;
    // Drive zero-valued artificials out of the basis; rows that cannot pivot
    // are redundant and dropped.
    for (int r = n_rows - 1; r >= 0; --r) {
      if (tab.basis[r] < art_begin) continue;
      int j = 0;
      while (j < art_begin && tab.row[r][j] == 0) ++j;
      if (j < art_begin) {
        tab.pivot(r, j);
      } else {
        tab.row.erase(tab.row.begin() + r);
        tab.basis.erase(tab.basis.begin() + r);
      }
    }
    for (auto& row : tab.row) row.erase(row.begin() + art_begin, row.begin() + tab.cols);
    tab.cols = art_begin;
  }

  std::vector<Rat> objective(tab.cols, Rat(0));
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < k; ++t) objective[i * k + t] = spec.values[i][t];
  }
  check(tab.simplex(objective), "small LP is bounded for well-formed specs");

  FractionalAllocation frac;
  frac.x.assign(n, std::vector<Rat>(k, Rat(0)));
  for (int r = 0; r < static_cast<int>(tab.row.size()); ++r) {
    if (tab.basis[r] < structural) {
      check(tab.rhs(r) >= 0, "simplex kept a negative basic value");
      frac.x[tab.basis[r] / k][tab.basis[r] % k] = tab.rhs(r);
    }
  }
  // Structural sanity of the reported optimum.
  for (int t = 0; t < k; ++t) {
    Rat s = 0;
    for (int i = 0; i < n; ++i) {
      check(frac.x[i][t] >= 0 && frac.x[i][t] <= 1, "share outside [0, 1]");
      s += frac.x[i][t];
    }
    if (is_good[t]) {
      check(s <= 1, "good over-allocated");
    } else {
      check(s == 1, "optimal solutions dispose chores exactly");
    }
  }
  for (int i = 0; i < n; ++i) {
    Rat v = 0;
    for (int t = 0; t < k; ++t) v += spec.values[i][t] * frac.x[i][t];
    check(v >= spec.c[i], "agent floor violated at optimum");
  }
  return frac;
}

inline Rat lp_objective(const SmallLpSpec& spec, const FractionalAllocation& frac) {
  require(static_cast<int>(frac.x.size()) == spec.agents, Errc::length_mismatch,
          "objective: allocation row count");
  Rat w = 0;
  for (int i = 0; i < spec.agents; ++i) {
    require(frac.x[i].size() == spec.values[i].size(), Errc::length_mismatch,
            "objective: allocation column count");
    for (int t = 0; t < static_cast<int>(frac.x[i].size()); ++t) {
      w += spec.values[i][t] * frac.x[i][t];
    }
  }
  return w;
}

}  // namespace manna::lp
