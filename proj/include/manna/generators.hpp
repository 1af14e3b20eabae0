#pragma once

#include <random>
#include <string>
#include <vector>

#include "manna/core.hpp"

// Instance generators: the fixed 3-agent non-existence certificate, the
// PARTITION reductions, and a seeded random-corpus generator.
namespace manna::generators {

// The 15-item instance with no alpha-MMS allocation for any alpha > 0.
// Twelve goods (j,k) valued 10^6 + 10^3*O[j][k] + E_i[j][k] by agent i, plus
// three chores each worth -16219999/4 to everyone. Every agent's MMS is
// exactly 1/4.
inline Instance gen_nonexistence() {
  static const int O[3][4] = {{17, 25, 12, 1}, {2, 22, 3, 28}, {11, 0, 21, 23}};
  static const int E[3][3][4] = {
      {{3, -1, -1, -1}, {0, 0, 0, 0}, {0, 0, 0, 0}},
      {{3, -1, 0, 0}, {-1, 0, 0, 0}, {-1, 0, 0, 0}},
      {{3, 0, -1, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}},
  };
  const Rat chore = Rat(-16219999, 4);

  std::vector<std::string> labels;
  for (int j = 1; j <= 3; ++j)
    for (int k = 1; k <= 4; ++k)
      labels.push_back("g" + std::to_string(j) + std::to_string(k));
  for (int j = 1; j <= 3; ++j) labels.push_back("c" + std::to_string(j));

  std::vector<std::vector<Rat>> values(3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 4; ++k)
        values[i].push_back(Rat(1'000'000 + 1'000 * O[j][k] + E[i][j][k]));
    for (int j = 0; j < 3; ++j) values[i].push_back(chore);
  }
  return make_instance(3, std::move(labels), std::move(values));
}

enum class PartitionVariant { two_agent, tau };

// Reduction from PARTITION with beta = 1/4. The two-agent variant has goods
// equal to the weights and two chores of -(sum w)/2 + 1/4 each; its MMS is
// 1/4 exactly when an equal-sum bipartition of the weights exists, and 0
// otherwise. The tau variant pads with (n-2) goods of value 1/4 so that
// v(M+) >= (1+tau) |v(M-)|; n must be large enough for that inequality.
inline Instance gen_partition_reduction(const std::vector<long long>& weights,
                                        PartitionVariant variant, int n = 2,
                                        const Rat& tau = Rat(1, 4)) {
  require(!weights.empty(), Errc::bad_parameter,
          "gen_partition_reduction: weights must be nonempty");
  for (long long w : weights)
    require(w >= 0, Errc::bad_parameter,
            "gen_partition_reduction: weights must be nonnegative");
  const Rat beta(1, 4);
  Rat sum = 0;
  for (long long w : weights) sum += w;

  int m = static_cast<int>(weights.size());
  int fillers = 0;
  if (variant == PartitionVariant::two_agent) {
    n = 2;
  } else {
    // (n-2)*beta + sum >= (1+tau)(sum + 2*beta)
    Rat need = (Rat(1) + tau) * (sum + 2 * beta) - sum;
    int minimal = 2;
    while (Rat(minimal - 2) * beta < need) ++minimal;
    require(n >= minimal, Errc::bad_parameter,
            "gen_partition_reduction: the tau variant needs n >= " +
                std::to_string(minimal) + " for this weight set");
    fillers = n - 2;
  }

  std::vector<std::string> labels;
  std::vector<Rat> row;
  for (int j = 0; j < m; ++j) {
    labels.push_back("g" + std::to_string(j + 1));
    row.push_back(Rat(weights[j]));
  }
  for (int j = 0; j < fillers; ++j) {
    labels.push_back("f" + std::to_string(j + 1));
    row.push_back(beta);
  }
  for (int j = 0; j < 2; ++j) {
    labels.push_back("c" + std::to_string(j + 1));
    row.push_back(Rat(-sum / 2 + beta));
  }
  std::vector<std::vector<Rat>> values(n, row);
  return make_instance(n, std::move(labels), std::move(values));
}

// Uniform integer values in [lo, hi], resampled wholesale until every agent
// satisfies the tau condition. Deterministic per seed.
inline Instance gen_random(int n, int m, long long lo, long long hi,
                           const Rat& tau, std::uint64_t seed) {
  require(n >= 1, Errc::bad_parameter, "gen_random: n must be at least 1");
  require(m >= 0, Errc::bad_parameter, "gen_random: m must be nonnegative");
  require(lo <= hi, Errc::bad_parameter, "gen_random: lo must be at most hi");
  require(tau >= 0, Errc::bad_parameter, "gen_random: tau must be nonnegative");

  std::vector<std::string> labels;
  for (int j = 0; j < m; ++j) labels.push_back("i" + std::to_string(j));

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> dist(lo, hi);
  for (int attempt = 0; attempt < 100'000; ++attempt) {
    std::vector<std::vector<Rat>> values(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) values[i].push_back(Rat(dist(rng)));
    Instance inst = make_instance(n, labels, std::move(values));
    auto ok = check_tau_condition(inst, tau);
    bool all = true;
    for (bool b : ok) all = all && b;
    if (all) return inst;
  }
  fail(Errc::bad_parameter,
       "gen_random: no draw satisfied the tau condition in 100000 attempts; "
       "widen the range or lower tau");
}

}  // namespace manna::generators
