#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "manna/core.hpp"
#include "manna/enumerate.hpp"
#include "manna/identical.hpp"
#include "manna/lp.hpp"

namespace manna::mixed {

// Everything pre-processing did to the input: the effective epsilon, the
// zero-total agents that left (with the chores they absorbed), and the
// normalized instance over the agents and items that remain.
struct PreprocessResult {
  bool trivial = false;  // alpha <= epsilon: a welfare-max allocation suffices
  Rat epsilon;           // min{epsilon, gamma*alpha/(1+gamma)}
  Instance reduced;      // kept agents x kept items, rows scaled to |v_i(M)| = n'
  std::vector<Rat> scales;
  std::vector<int> kept_agents;
  std::vector<int> kept_items;
  std::vector<int> removed_agents;
  std::vector<std::vector<int>> removed_bundles;  // parallel to removed_agents
};

inline PreprocessResult preprocess(const Instance& inst, const SolverParams& params) {
  validate_instance(inst);
  require(params.alpha > 0 && params.alpha <= 1, Errc::bad_parameter, "alpha must lie in (0, 1]");
  require(params.epsilon > 0 && params.epsilon < 1, Errc::bad_parameter,
          "epsilon must lie in (0, 1)");
  require(params.gamma > 0, Errc::bad_parameter, "gamma must be positive");

  PreprocessResult out;
  if (params.alpha <= params.epsilon) {
    out.trivial = true;
    out.epsilon = params.epsilon;
    return out;
  }
  out.epsilon =
      std::min(params.epsilon, Rat(params.gamma * params.alpha / (Rat(1) + params.gamma)));

  for (int i = 0; i < inst.n; ++i) {
    if (total_value(inst, i) == 0) {
      for (int j = 0; j < inst.m; ++j) {
        require(inst.values[i][j] == 0, Errc::tau_violation,
                "agent " + std::to_string(i) +
                    " has zero total value but a nonzero entry; the tau condition rules this out");
      }
      out.removed_agents.push_back(i);
    } else {
      out.kept_agents.push_back(i);
    }
  }
  out.removed_bundles.assign(out.removed_agents.size(), {});

  // Items every remaining agent dislikes go to a zero-total agent, who is
  // indifferent to them. Without such an agent nothing is dumped.
  std::vector<bool> dumped(inst.m, false);
  if (!out.removed_agents.empty()) {
    for (int j = 0; j < inst.m; ++j) {
      bool chore_for_all = true;
      for (int i : out.kept_agents) chore_for_all = chore_for_all && inst.values[i][j] < 0;
      if (chore_for_all) {
        dumped[j] = true;
        out.removed_bundles[0].push_back(j);
      }
    }
  }
  for (int j = 0; j < inst.m; ++j) {
    if (!dumped[j]) out.kept_items.push_back(j);
  }

  if (out.kept_agents.empty()) return out;

  Instance red;
  red.n = static_cast<int>(out.kept_agents.size());
  red.m = static_cast<int>(out.kept_items.size());
  for (int j : out.kept_items) red.item_labels.push_back(inst.item_labels[j]);
  for (int i : out.kept_agents) {
    std::vector<Rat> row;
    row.reserve(out.kept_items.size());
    for (int j : out.kept_items) row.push_back(inst.values[i][j]);
    red.values.push_back(std::move(row));
  }
  if (red.m == 0) {
    out.reduced = std::move(red);
    out.scales.assign(out.reduced.n, Rat(1));
    return out;
  }
  auto normalized = normalize(red);
  out.reduced = std::move(normalized.first);
  out.scales = std::move(normalized.second);
  return out;
}

// mu-tilde profile of a normalized instance: each agent's share target from
// the identical-agents search at accuracy epsilon/2, plus the sign of her
// total. Positive totals pin mu-tilde into [0, 1], negative ones below -1.
inline identical::MmsProfile compute_mms_profile(const Instance& inst, const Rat& epsilon,
                                                 long long budget = 20'000'000, int threads = 1) {
  require(epsilon > 0 && epsilon < 1, Errc::bad_parameter, "epsilon must lie in (0, 1)");
  identical::MmsProfile profile;
  profile.epsilon_used = epsilon;
  for (int i = 0; i < inst.n; ++i) {
    Rat total = total_value(inst, i);
    check(abs(total) == inst.n, "profile expects rows normalized to |v_i(M)| = n");
    int sign = total > 0 ? 1 : -1;
    Rat mu = identical::approx_mms(inst.values[i], inst.n, Rat(epsilon / 2), budget, threads).value;
    if (sign > 0) {
      check(mu >= 0 && mu <= 1, "a positive-total agent has mu-tilde in [0, 1]");
    } else {
      check(mu <= -1, "a negative-total agent has mu-tilde at most -1");
    }
    profile.mu_tilde.push_back(std::move(mu));
    profile.sign.push_back(sign);
  }
  return profile;
}

// Per-agent BIG/SMALL split of a normalized instance. Goods clear a threshold
// scaling with the agent's mu-tilde when it is non-negative; chores always
// compare against epsilon/(2n).
struct BigSmallProfile {
  std::vector<std::vector<int>> big_plus_of;
  std::vector<std::vector<int>> big_minus_of;
  std::vector<int> big;
  std::vector<int> small;
  std::vector<std::vector<int>> small_plus_of;
  std::vector<std::vector<int>> small_minus_of;
};

inline BigSmallProfile build_big_small(const Instance& inst,
                                       const identical::MmsProfile& profile) {
  require(static_cast<int>(profile.mu_tilde.size()) == inst.n, Errc::length_mismatch,
          "profile must cover every agent");
  BigSmallProfile out;
  out.big_plus_of.resize(inst.n);
  out.big_minus_of.resize(inst.n);
  out.small_plus_of.resize(inst.n);
  out.small_minus_of.resize(inst.n);
  Rat base = Rat(profile.epsilon_used / (2 * inst.n));
  std::vector<bool> is_big(inst.m, false);
  for (int i = 0; i < inst.n; ++i) {
    Rat good_line = profile.mu_tilde[i] >= 0 ? Rat(base * profile.mu_tilde[i]) : base;
    for (int j = 0; j < inst.m; ++j) {
      const Rat& v = inst.values[i][j];
      if (v >= 0) {
        if (v > good_line) {
          out.big_plus_of[i].push_back(j);
          is_big[j] = true;
        }
      } else if (-v > base) {
        out.big_minus_of[i].push_back(j);
        is_big[j] = true;
      }
    }
  }
  for (int j = 0; j < inst.m; ++j) (is_big[j] ? out.big : out.small).push_back(j);
  for (int i = 0; i < inst.n; ++i) {
    for (int j : out.small) {
      (inst.values[i][j] >= 0 ? out.small_plus_of[i] : out.small_minus_of[i]).push_back(j);
    }
  }
  return out;
}

// Relaxation over the SMALL items for one fixed assignment of BIG: agent i
// must recover min{alpha*mu_i, mu_i/alpha} - v_i(B_i) from her SMALL share.
inline lp::SmallLpSpec build_small_lp_spec(const Instance& inst, const BigSmallProfile& bsp,
                                           const identical::MmsProfile& profile, const Rat& alpha,
                                           const std::vector<int>& big_assign) {
  require(alpha > 0 && alpha <= 1, Errc::bad_parameter, "alpha must lie in (0, 1]");
  require(big_assign.size() == bsp.big.size(), Errc::length_mismatch,
          "big assignment must cover the big set");
  lp::SmallLpSpec spec;
  spec.agents = inst.n;
  spec.values.resize(inst.n);
  spec.small_goods_of.resize(inst.n);
  spec.small_chores_of.resize(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    const Rat& mu = profile.mu_tilde[i];
    Rat target = std::min(Rat(alpha * mu), Rat(mu / alpha));
    Rat big_part = 0;
    for (size_t p = 0; p < bsp.big.size(); ++p) {
      int owner = big_assign[p];
      require(owner >= 0 && owner < inst.n, Errc::index_out_of_range,
              "big assignment entry out of range");
      if (owner == i) big_part += inst.values[i][bsp.big[p]];
    }
    for (size_t t = 0; t < bsp.small.size(); ++t) {
      const Rat& v = inst.values[i][bsp.small[t]];
      spec.values[i].push_back(v);
      (v >= 0 ? spec.small_goods_of[i] : spec.small_chores_of[i]).push_back(static_cast<int>(t));
    }
    spec.c.push_back(Rat(target - big_part));
  }
  return spec;
}

namespace detail {

// One simple cycle of the bipartite share graph, as alternating agent and
// item walks: agents[t] holds shares of items[t-1] and items[t] (cyclically).
struct ShareCycle {
  std::vector<int> agents;
  std::vector<int> items;
};

inline std::optional<ShareCycle> find_share_cycle(const std::vector<std::vector<Rat>>& x) {
  int n = static_cast<int>(x.size());
  int m = n == 0 ? 0 : static_cast<int>(x[0].size());
  int total = n + m;
  std::vector<std::vector<int>> adj(total);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (x[i][j] > 0) {
        adj[i].push_back(n + j);
        adj[n + j].push_back(i);
      }
    }
  }
  std::vector<int> state(total, 0);  // 0 fresh, 1 on stack, 2 done
  std::vector<int> parent(total, -1);
  std::vector<size_t> cursor(total, 0);
  for (int root = 0; root < total; ++root) {
    if (state[root] != 0) continue;
    std::vector<int> stack = {root};
    state[root] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      if (cursor[u] == adj[u].size()) {
        state[u] = 2;
        stack.pop_back();
        continue;
      }
      int w = adj[u][cursor[u]++];
      if (w == parent[u]) continue;
      if (state[w] == 0) {
        parent[w] = u;
        state[w] = 1;
        stack.push_back(w);
      } else if (state[w] == 1) {
        std::vector<int> path;
        for (int v = u; v != w; v = parent[v]) path.push_back(v);
        path.push_back(w);
        if (path[0] >= n) std::rotate(path.begin(), path.begin() + 1, path.end());
        ShareCycle cyc;
        for (size_t t = 0; t < path.size(); t += 2) {
          cyc.agents.push_back(path[t]);
          cyc.items.push_back(path[t + 1] - n);
        }
        return cyc;
      }
    }
  }
  return std::nullopt;
}

// Removes at least one edge of the given cycle without costing any agent
// value and without changing any item's share total. Shortcuts handle items
// the two sharers grade differently and zero-valued shares; the general case
// shifts scaled utilities by delta around the cycle.
inline void break_share_cycle(const Instance& inst, std::vector<std::vector<Rat>>& x,
                              const ShareCycle& cyc) {
  int k = static_cast<int>(cyc.agents.size());
  std::vector<int> agents = cyc.agents;
  std::vector<int> items = cyc.items;

  for (int t = 0; t < k; ++t) {
    int a = agents[t], b = agents[(t + 1) % k], j = items[t];
    bool ga = inst.values[a][j] >= 0, gb = inst.values[b][j] >= 0;
    if (ga != gb) {
      int good = ga ? a : b, chore = ga ? b : a;
      x[good][j] += x[chore][j];
      x[chore][j] = 0;
      return;
    }
  }
  for (int t = 0; t < k; ++t) {
    int a = agents[t], b = agents[(t + 1) % k], j = items[t];
    if (inst.values[a][j] == 0 || inst.values[b][j] == 0) {
      int recv = inst.values[a][j] > inst.values[b][j]   ? a
                 : inst.values[b][j] > inst.values[a][j] ? b
                                                         : std::min(a, b);
      int from = recv == a ? b : a;
      x[recv][j] += x[from][j];
      x[from][j] = 0;
      return;
    }
  }

  // Orient the walk so the product of diagonal over off-diagonal values is at
  // least 1; the product is invariant under rotation, so this fixes the
  // direction once and for all.
  Rat prod_num = 1, prod_den = 1;
  for (int t = 0; t < k; ++t) {
    prod_num *= inst.values[agents[t]][items[t]];
    prod_den *= inst.values[agents[(t + 1) % k]][items[t]];
  }
  if (Rat(prod_num / prod_den) < 1) {
    std::vector<int> ra = {agents[0]};
    std::vector<int> ri;
    for (int t = k - 1; t >= 1; --t) ra.push_back(agents[t]);
    for (int t = k - 1; t >= 0; --t) ri.push_back(items[t]);
    agents = std::move(ra);
    items = std::move(ri);
  }

  // Anchor the lowest-index good item (falling back to the lowest-index
  // chore) in the last slot of the walk.
  int anchor = -1;
  for (int t = 0; t < k; ++t) {
    if (inst.values[agents[t]][items[t]] > 0 && (anchor == -1 || items[t] < items[anchor])) {
      anchor = t;
    }
  }
  if (anchor == -1) {
    for (int t = 0; t < k; ++t) {
      if (anchor == -1 || items[t] < items[anchor]) anchor = t;
    }
  }
  int shift = (anchor + 1) % k;
  std::rotate(agents.begin(), agents.begin() + shift, agents.end());
  std::rotate(items.begin(), items.begin() + shift, items.end());

  std::vector<Rat> scale(k);
  scale[0] = 1;
  for (int t = 1; t < k; ++t) {
    scale[t] = Rat(scale[t - 1] * inst.values[agents[t - 1]][items[t - 1]] /
                   inst.values[agents[t]][items[t - 1]]);
  }
  std::vector<Rat> tv_diag(k), tv_off(k), u_diag(k), u_off(k);
  for (int t = 0; t < k; ++t) {
    int nxt = (t + 1) % k;
    tv_diag[t] = Rat(scale[t] * inst.values[agents[t]][items[t]]);
    tv_off[t] = Rat(scale[nxt] * inst.values[agents[nxt]][items[t]]);
    u_diag[t] = Rat(tv_diag[t] * x[agents[t]][items[t]]);
    u_off[t] = Rat(tv_off[t] * x[agents[nxt]][items[t]]);
    if (t + 1 < k) check(tv_off[t] == tv_diag[t], "sharers of a non-anchor item agree after scaling");
  }
  check(abs(tv_off[k - 1]) <= abs(tv_diag[k - 1]), "the anchor orientation favors the diagonal");

  int edges_before = 0;
  for (int t = 0; t < k; ++t) {
    int nxt = (t + 1) % k;
    edges_before += (x[agents[t]][items[t]] > 0) + (x[agents[nxt]][items[t]] > 0);
  }

  Rat delta;
  bool found = false;
  for (int t = 0; t < k; ++t) {
    if (u_off[t] > 0 && (!found || u_off[t] < delta)) {
      delta = u_off[t];
      found = true;
    }
    if (u_diag[t] < 0 && (!found || Rat(-u_diag[t]) < delta)) {
      delta = Rat(-u_diag[t]);
      found = true;
    }
  }
  check(found, "a same-sign cycle always offers a utility step");

  int q = items[k - 1];
  int diag_agent = agents[k - 1], off_agent = agents[0];
  Rat anchor_before = Rat(x[diag_agent][q] + x[off_agent][q]);
  for (int t = 0; t < k; ++t) {
    int nxt = (t + 1) % k;
    x[agents[t]][items[t]] = Rat((u_diag[t] + delta) / tv_diag[t]);
    x[agents[nxt]][items[t]] = Rat((u_off[t] - delta) / tv_off[t]);
    check(x[agents[t]][items[t]] >= 0 && x[agents[nxt]][items[t]] >= 0,
          "shifted shares stay non-negative");
  }
  if (inst.values[diag_agent][q] > 0) {
    Rat leftover = Rat(anchor_before - x[diag_agent][q] - x[off_agent][q]);
    check(leftover >= 0, "a good anchor only sheds share");
    int recv = x[diag_agent][q] > x[off_agent][q]   ? diag_agent
               : x[off_agent][q] > x[diag_agent][q] ? off_agent
                                                    : std::min(diag_agent, off_agent);
    x[recv][q] += leftover;
  } else {
    Rat extra = Rat(x[diag_agent][q] + x[off_agent][q] - anchor_before);
    check(extra >= 0, "a chore anchor only gains share");
    x[off_agent][q] -= extra;
    check(x[off_agent][q] >= 0, "the off-diagonal chore share stays non-negative");
  }

  int edges_after = 0;
  for (int t = 0; t < k; ++t) {
    int nxt = (t + 1) % k;
    edges_after += (x[agents[t]][items[t]] > 0) + (x[agents[nxt]][items[t]] > 0);
  }
  check(edges_after < edges_before, "every cycle pass removes an edge");
}

// First cycle of a digraph found by depth-first search from the lowest-index
// vertex, as the vertex list along the cycle edges.
inline std::optional<std::vector<int>> find_digraph_cycle(
    const std::vector<std::vector<int>>& edges) {
  int n = static_cast<int>(edges.size());
  std::vector<int> state(n, 0);
  std::vector<size_t> cursor(n, 0);
  for (int root = 0; root < n; ++root) {
    if (state[root] != 0) continue;
    std::vector<int> stack = {root};
    state[root] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      if (cursor[u] == edges[u].size()) {
        state[u] = 2;
        stack.pop_back();
        continue;
      }
      int w = edges[u][cursor[u]++];
      if (state[w] == 0) {
        state[w] = 1;
        stack.push_back(w);
      } else if (state[w] == 1) {
        auto at = std::find(stack.begin(), stack.end(), w);
        return std::vector<int>(at, stack.end());
      }
    }
  }
  return std::nullopt;
}

// Every item to the agent who values it most, ties to the lowest index.
inline Allocation argmax_allocation(const Instance& inst) {
  Allocation alloc;
  alloc.bundles.assign(inst.n, {});
  for (int j = 0; j < inst.m; ++j) {
    int best = 0;
    for (int i = 1; i < inst.n; ++i) {
      if (inst.values[i][j] > inst.values[best][j]) best = i;
    }
    alloc.bundles[best].push_back(j);
  }
  return alloc;
}

}  // namespace detail

// Removes every cycle from the bipartite graph of positive shares. No agent's
// value drops and no item's share total changes.
inline lp::FractionalAllocation acyclify(const Instance& inst, lp::FractionalAllocation frac) {
  require(static_cast<int>(frac.x.size()) == inst.n, Errc::length_mismatch, "acyclify: row count");
  for (auto& row : frac.x) {
    require(static_cast<int>(row.size()) == inst.m, Errc::length_mismatch,
            "acyclify: column count");
    for (const Rat& s : row) {
      require(s >= 0 && s <= 1, Errc::bad_value, "acyclify: share outside [0, 1]");
    }
  }
  std::vector<Rat> value_before(inst.n, Rat(0));
  std::vector<Rat> col_before(inst.m, Rat(0));
  for (int i = 0; i < inst.n; ++i) {
    for (int j = 0; j < inst.m; ++j) {
      value_before[i] += inst.values[i][j] * frac.x[i][j];
      col_before[j] += frac.x[i][j];
    }
  }

  long long guard = static_cast<long long>(inst.n) * inst.m + 2;
  while (auto cyc = detail::find_share_cycle(frac.x)) {
    check(guard-- > 0, "cycle elimination terminates");
    detail::break_share_cycle(inst, frac.x, *cyc);
  }

  for (int i = 0; i < inst.n; ++i) {
    Rat after = 0;
    for (int j = 0; j < inst.m; ++j) after += inst.values[i][j] * frac.x[i][j];
    check(after >= value_before[i], "removing cycles never costs an agent value");
  }
  for (int j = 0; j < inst.m; ++j) {
    Rat after = 0;
    for (int i = 0; i < inst.n; ++i) after += frac.x[i][j];
    check(after == col_before[j], "removing cycles preserves item share totals");
  }
  return frac;
}

// Directed envy edges: i -> k when i strictly prefers k's bundle to her own.
inline std::vector<std::vector<int>> build_envy_graph(const Instance& inst,
                                                      const Allocation& alloc) {
  require(static_cast<int>(alloc.bundles.size()) == inst.n, Errc::bad_allocation,
          "envy graph needs one bundle per agent");
  std::vector<Rat> own(inst.n);
  for (int i = 0; i < inst.n; ++i) own[i] = bundle_value(inst, i, alloc.bundles[i]);
  std::vector<std::vector<int>> edges(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    for (int k = 0; k < inst.n; ++k) {
      if (k != i && bundle_value(inst, i, alloc.bundles[k]) > own[i]) edges[i].push_back(k);
    }
  }
  return edges;
}

// Rotates bundles along envy cycles (everyone takes her successor's bundle)
// until the envy graph is acyclic. The allocation may be partial.
inline Allocation eliminate_envy_cycles(const Instance& inst, Allocation alloc) {
  long long guard = 1'000'000;
  while (true) {
    auto cyc = detail::find_digraph_cycle(build_envy_graph(inst, alloc));
    if (!cyc) return alloc;
    check(guard-- > 0, "envy cycle elimination terminates");
    int r = static_cast<int>(cyc->size());
    std::vector<std::vector<int>> rotated(r);
    for (int t = 0; t < r; ++t) rotated[t] = alloc.bundles[(*cyc)[(t + 1) % r]];
    for (int t = 0; t < r; ++t) {
      int agent = (*cyc)[t];
      Rat before = bundle_value(inst, agent, alloc.bundles[agent]);
      alloc.bundles[agent] = std::move(rotated[t]);
      check(bundle_value(inst, agent, alloc.bundles[agent]) > before,
            "every agent on an envy cycle strictly improves");
    }
  }
}

// What the rounding pass did: which items were shared, how they split between
// the argmax route and the sink route, and each agent's value before/after.
struct RoundingTrace {
  std::vector<int> shared;       // S
  std::vector<int> s_plus;       // handed to the argmax agent
  std::vector<int> s_minus_eps;  // handed to the sink
  int sink_agent = -1;           // -1 when nothing went to a sink
  std::vector<Rat> pre_round_values;
  std::vector<Rat> post_round_values;
};

// Rounds an acyclic fractional allocation to an integral one. Expects every
// item fully assigned and fractional sharing confined to items below the
// per-agent thresholds of the profile (the solver guarantees both).
inline std::pair<Allocation, RoundingTrace> round_fractional(const Instance& inst,
                                                             const lp::FractionalAllocation& frac,
                                                             const identical::MmsProfile& profile,
                                                             const Rat& epsilon) {
  require(static_cast<int>(frac.x.size()) == inst.n, Errc::length_mismatch, "round: row count");
  for (auto& row : frac.x) {
    require(static_cast<int>(row.size()) == inst.m, Errc::length_mismatch, "round: column count");
  }
  require(static_cast<int>(profile.mu_tilde.size()) == inst.n, Errc::length_mismatch,
          "round: profile must cover every agent");
  int n = inst.n;

  RoundingTrace trace;
  trace.pre_round_values.assign(n, Rat(0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < inst.m; ++j) {
      trace.pre_round_values[i] += inst.values[i][j] * frac.x[i][j];
    }
  }

  std::vector<int> owner(inst.m, -1);
  for (int j = 0; j < inst.m; ++j) {
    Rat total = 0;
    int holders = 0, last = -1;
    for (int i = 0; i < n; ++i) {
      if (frac.x[i][j] > 0) {
        ++holders;
        last = i;
      }
      total += frac.x[i][j];
    }
    require(total == 1, Errc::bad_value, "round expects every item fully assigned");
    if (holders >= 2) {
      trace.shared.push_back(j);
    } else {
      owner[j] = last;
    }
  }
  check(static_cast<int>(trace.shared.size()) <= n - 1,
        "an acyclic share graph leaves at most n - 1 shared items");

  for (int j : trace.shared) {
    bool heavy = false;
    for (int i = 0; i < n && !heavy; ++i) {
      heavy = abs(inst.values[i][j]) > Rat(epsilon * abs(profile.mu_tilde[i]) / (2 * n));
    }
    (heavy ? trace.s_minus_eps : trace.s_plus).push_back(j);
  }
  for (int j : trace.s_plus) {
    int best = 0;
    for (int i = 1; i < n; ++i) {
      if (inst.values[i][j] > inst.values[best][j]) best = i;
    }
    owner[j] = best;
  }
  if (!trace.s_minus_eps.empty()) {
    bool positive = false;
    for (int i = 0; i < n; ++i) positive = positive || profile.sign[i] > 0;
    check(positive, "a nontrivial shared chore implies a positive-total agent");
  }

  Allocation alloc;
  alloc.bundles.assign(n, {});
  for (int j = 0; j < inst.m; ++j) {
    if (owner[j] >= 0) alloc.bundles[owner[j]].push_back(j);
  }
  alloc = eliminate_envy_cycles(inst, alloc);

  if (!trace.s_minus_eps.empty()) {
    auto edges = build_envy_graph(inst, alloc);
    int sink = -1;
    for (int i = 0; i < n && sink < 0; ++i) {
      if (edges[i].empty()) sink = i;
    }
    check(sink >= 0, "an acyclic envy graph has a sink");
    trace.sink_agent = sink;

    Rat dump_pos = 0, dump_all = 0;
    for (int j : trace.s_minus_eps) {
      const Rat& v = inst.values[sink][j];
      dump_all += v;
      if (v > 0) dump_pos += v;
    }
    Rat held = bundle_value(inst, sink, alloc.bundles[sink]);
    Rat line = profile.sign[sink] > 0 ? Rat(1) : Rat(-1);
    check(held >= Rat(line - dump_pos / n), "the sink holds its guarantee before the dump");
    check(Rat(held + dump_all) >= Rat(line - epsilon / 2),
          "the dump costs the sink at most eps/2");

    auto& bundle = alloc.bundles[sink];
    bundle.insert(bundle.end(), trace.s_minus_eps.begin(), trace.s_minus_eps.end());
    std::sort(bundle.begin(), bundle.end());
  }

  trace.post_round_values.resize(n);
  Rat welfare_pre = 0, welfare_post = 0;
  for (int i = 0; i < n; ++i) {
    trace.post_round_values[i] = bundle_value(inst, i, alloc.bundles[i]);
    welfare_pre += trace.pre_round_values[i];
    welfare_post += trace.post_round_values[i];
    Rat slack = i == trace.sink_agent ? Rat(epsilon / 2)
                                      : Rat(epsilon * abs(profile.mu_tilde[i]) / 2);
    check(trace.post_round_values[i] >= Rat(trace.pre_round_values[i] - slack),
          "rounding losses stay within the per-agent bound");
  }
  Rat welfare_slack = trace.s_minus_eps.empty() ? Rat(0) : epsilon;
  check(welfare_post >= Rat(welfare_pre - welfare_slack),
        "rounding costs at most eps of welfare overall");
  return {std::move(alloc), std::move(trace)};
}

// When the rounded allocation carries too little absolute value for the
// Pareto argument, either hand a negative-total agent's bundle to a
// positive-total agent who values it, or rotate bundles along a cycle of
// positive-total agents. Runs at most one such step.
inline Allocation gamma_po_fixup(const Instance& inst, Allocation alloc,
                                 const identical::MmsProfile& profile, const Rat& alpha) {
  require(static_cast<int>(alloc.bundles.size()) == inst.n, Errc::bad_allocation,
          "fix-up needs one bundle per agent");
  require(static_cast<int>(profile.sign.size()) == inst.n, Errc::length_mismatch,
          "fix-up: profile must cover every agent");
  int n = inst.n;
  std::vector<Rat> own(n);
  Rat mass = 0;
  bool any_positive = false;
  for (int i = 0; i < n; ++i) {
    own[i] = bundle_value(inst, i, alloc.bundles[i]);
    mass += abs(own[i]);
    any_positive = any_positive || profile.sign[i] > 0;
  }
  if (mass >= alpha || !any_positive) return alloc;

  bool transferred = false;
  for (int i = 0; i < n && !transferred; ++i) {
    if (profile.sign[i] <= 0) continue;
    for (int k = 0; k < n && !transferred; ++k) {
      if (profile.sign[k] > 0) continue;
      if (bundle_value(inst, i, alloc.bundles[k]) >= 1) {
        auto& mine = alloc.bundles[i];
        mine.insert(mine.end(), alloc.bundles[k].begin(), alloc.bundles[k].end());
        std::sort(mine.begin(), mine.end());
        alloc.bundles[k].clear();
        check(bundle_value(inst, i, mine) >= 1, "the transfer leaves the receiver above 1");
        transferred = true;
      }
    }
  }
  if (!transferred) {
    std::vector<std::vector<int>> edges(n);
    for (int i = 0; i < n; ++i) {
      if (profile.sign[i] <= 0 || own[i] >= alpha) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || profile.sign[k] <= 0) continue;
        if (bundle_value(inst, i, alloc.bundles[k]) >= 1) edges[i].push_back(k);
      }
    }
    auto cyc = detail::find_digraph_cycle(edges);
    check(cyc.has_value(), "the fix-up graph always has a cycle");
    int r = static_cast<int>(cyc->size());
    std::vector<std::vector<int>> rotated(r);
    for (int t = 0; t < r; ++t) rotated[t] = alloc.bundles[(*cyc)[(t + 1) % r]];
    for (int t = 0; t < r; ++t) {
      int agent = (*cyc)[t];
      alloc.bundles[agent] = std::move(rotated[t]);
      check(bundle_value(inst, agent, alloc.bundles[agent]) >= 1,
            "every rotated agent lands above 1");
    }
  }

  Rat mass_after = 0;
  bool reached = false;
  for (int i = 0; i < n; ++i) {
    Rat v = bundle_value(inst, i, alloc.bundles[i]);
    mass_after += abs(v);
    reached = reached || v >= alpha;
  }
  check(mass_after >= alpha, "the fix-up restores the absolute-value mass");
  check(reached, "some agent ends at or above alpha");
  return alloc;
}

namespace detail {

struct BigCandidate {
  bool has = false;
  Rat welfare;
  std::vector<int> assign;
  lp::FractionalAllocation x;
};

inline bool improves(const BigCandidate& next, const BigCandidate& cur) {
  if (!cur.has) return next.has;
  if (!next.has) return false;
  if (next.welfare != cur.welfare) return next.welfare > cur.welfare;
  return std::lexicographical_compare(next.assign.begin(), next.assign.end(), cur.assign.begin(),
                                      cur.assign.end());
}

}  // namespace detail

struct SolveOutcome {
  std::optional<Allocation> allocation;  // empty: no alpha-MMS allocation exists
  PreprocessResult pre;
  std::optional<RoundingTrace> trace;  // reduced-instance coordinates
};

inline SolveOutcome solve_alpha_mms_po(const Instance& inst, const SolverParams& params,
                                       int threads = 1) {
  SolveOutcome out;
  out.pre = preprocess(inst, params);
  if (out.pre.trivial) {
    out.allocation = detail::argmax_allocation(inst);
    return out;
  }
  if (out.pre.kept_agents.empty() || out.pre.kept_items.empty()) {
    Allocation alloc;
    alloc.bundles.assign(inst.n, {});
    for (size_t r = 0; r < out.pre.removed_agents.size(); ++r) {
      alloc.bundles[out.pre.removed_agents[r]] = out.pre.removed_bundles[r];
    }
    validate_allocation(inst, alloc);
    out.allocation = std::move(alloc);
    return out;
  }

  const Instance& red = out.pre.reduced;
  const Rat& eps = out.pre.epsilon;
  int n = red.n;
  auto profile = compute_mms_profile(red, eps, params.big_budget, threads);
  auto bsp = build_big_small(red, profile);
  int nbig = static_cast<int>(bsp.big.size());
  Int needed = manna::detail::power_count(n, nbig);
  require(needed <= params.big_budget, Errc::budget_exceeded,
          "big-set enumeration over " + std::to_string(nbig) + " big items needs " + needed.str() +
              " assignments, budget is " + std::to_string(params.big_budget) +
              "; the tau condition keeps the big set near n^3/eps items");

  std::vector<Rat> target(n), small_plus_val(n, Rat(0));
  for (int i = 0; i < n; ++i) {
    const Rat& mu = profile.mu_tilde[i];
    target[i] = std::min(Rat(params.alpha * mu), Rat(mu / params.alpha));
    for (int j : bsp.small_plus_of[i]) small_plus_val[i] += red.values[i][j];
  }
  // Best value agent i can still reach: her big bundle so far, every
  // unassigned big item she likes, and all of her SMALL goods.
  std::vector<std::vector<Rat>> rem_pos(n, std::vector<Rat>(nbig + 1, Rat(0)));
  for (int i = 0; i < n; ++i) {
    for (int p = nbig - 1; p >= 0; --p) {
      const Rat& v = red.values[i][bsp.big[p]];
      rem_pos[i][p] = Rat(rem_pos[i][p + 1] + (v > 0 ? v : Rat(0)));
    }
  }

  auto leaf = [&](const std::vector<int>& assign, detail::BigCandidate& best) {
    lp::SmallLpSpec spec = build_small_lp_spec(red, bsp, profile, params.alpha, assign);
    detail::BigCandidate cand;
    Rat big_welfare = 0;
    for (size_t p = 0; p < assign.size(); ++p) {
      big_welfare += red.values[assign[p]][bsp.big[p]];
    }
    if (bsp.small.empty()) {
      bool ok = true;
      for (int i = 0; i < n; ++i) ok = ok && spec.c[i] <= 0;
      if (!ok) return;
      cand.has = true;
      cand.welfare = big_welfare;
      cand.assign = assign;
      cand.x.x.assign(n, {});
    } else {
      auto sol = lp::solve_small_lp(spec);
      if (!sol) return;
      cand.has = true;
      cand.welfare = Rat(big_welfare + lp::lp_objective(spec, *sol));
      cand.assign = assign;
      cand.x = std::move(*sol);
    }
    if (detail::improves(cand, best)) best = std::move(cand);
  };

  auto prefixes = manna::detail::assignment_prefixes(nbig, n, threads);
  std::vector<detail::BigCandidate> chunk_best(prefixes.size());
  manna::detail::run_chunks(static_cast<int>(prefixes.size()), threads, [&](int chunk) {
    const std::vector<int>& prefix = prefixes[chunk];
    std::vector<int> assign(nbig, 0);
    std::vector<Rat> held(n, Rat(0));
    for (size_t p = 0; p < prefix.size(); ++p) {
      assign[p] = prefix[p];
      held[prefix[p]] += red.values[prefix[p]][bsp.big[p]];
    }
    detail::BigCandidate& best = chunk_best[chunk];
    auto feasible_so_far = [&](int depth) {
      for (int i = 0; i < n; ++i) {
        if (Rat(held[i] + rem_pos[i][depth] + small_plus_val[i]) < target[i]) return false;
      }
      return true;
    };
    int base = static_cast<int>(prefix.size());
    if (!feasible_so_far(base)) return;
    if (base == nbig) {
      leaf(assign, best);
      return;
    }
    int depth = base;
    std::vector<int> cursor(nbig, 0);
    while (depth >= base) {
      if (depth == nbig) {
        leaf(assign, best);
        --depth;
        if (depth >= base) held[assign[depth]] -= red.values[assign[depth]][bsp.big[depth]];
        continue;
      }
      if (cursor[depth] == n) {
        cursor[depth] = 0;
        --depth;
        if (depth >= base) held[assign[depth]] -= red.values[assign[depth]][bsp.big[depth]];
        continue;
      }
      int who = cursor[depth]++;
      assign[depth] = who;
      held[who] += red.values[who][bsp.big[depth]];
      if (feasible_so_far(depth + 1)) {
        ++depth;
      } else {
        held[who] -= red.values[who][bsp.big[depth]];
      }
    }
  });
  detail::BigCandidate best;
  for (auto& cand : chunk_best) {
    if (detail::improves(cand, best)) best = std::move(cand);
  }
  if (!best.has) return out;

  // Assemble the full share matrix and complete leftover SMALL goods to the
  // agent who values them most.
  lp::FractionalAllocation full;
  full.x.assign(n, std::vector<Rat>(red.m, Rat(0)));
  for (size_t p = 0; p < best.assign.size(); ++p) full.x[best.assign[p]][bsp.big[p]] = 1;
  for (size_t t = 0; t < bsp.small.size(); ++t) {
    int j = bsp.small[t];
    Rat sum = 0;
    bool global_good = false;
    for (int i = 0; i < n; ++i) {
      full.x[i][j] = best.x.x[i][t];
      sum += best.x.x[i][t];
      global_good = global_good || red.values[i][j] >= 0;
    }
    if (global_good) {
      if (sum < 1) {
        int recv = 0;
        for (int i = 1; i < n; ++i) {
          if (red.values[i][j] > red.values[recv][j]) recv = i;
        }
        full.x[recv][j] += Rat(1 - sum);
      }
    } else {
      check(sum == 1, "chore columns leave the relaxation fully disposed");
    }
  }

  full = acyclify(red, std::move(full));
  auto [rounded, trace] = round_fractional(red, full, profile, eps);
  Rat relaxed = Rat(params.alpha - eps);
  check(satisfies_alpha_mms(red, rounded, profile.mu_tilde, relaxed),
        "the rounded allocation meets the relaxed share targets");
  rounded = gamma_po_fixup(red, std::move(rounded), profile, params.alpha);
  check(satisfies_alpha_mms(red, rounded, profile.mu_tilde, relaxed),
        "the fix-up preserves the relaxed share targets");

  Allocation alloc;
  alloc.bundles.assign(inst.n, {});
  for (int i = 0; i < n; ++i) {
    for (int j : rounded.bundles[i]) {
      alloc.bundles[out.pre.kept_agents[i]].push_back(out.pre.kept_items[j]);
    }
  }
  for (size_t r = 0; r < out.pre.removed_agents.size(); ++r) {
    alloc.bundles[out.pre.removed_agents[r]] = out.pre.removed_bundles[r];
  }
  validate_allocation(inst, alloc);
  out.allocation = std::move(alloc);
  out.trace = std::move(trace);
  return out;
}

}  // namespace manna::mixed
