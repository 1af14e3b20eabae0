#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <vector>

#include "manna/generators.hpp"
#include "manna/oracle.hpp"
#include "manna/search.hpp"

using manna::Allocation;
using manna::Errc;
using manna::Error;
using manna::Instance;
using manna::Rat;
using manna::SolverParams;

namespace {

Instance inst_of(std::vector<std::vector<Rat>> values) {
  int n = static_cast<int>(values.size());
  int m = static_cast<int>(values[0].size());
  std::vector<std::string> labels;
  for (int j = 0; j < m; ++j) labels.push_back("i" + std::to_string(j));
  return manna::make_instance(n, labels, std::move(values));
}

std::vector<Rat> mms_vector(const Instance& inst) {
  std::vector<Rat> mms;
  for (int i = 0; i < inst.n; ++i) {
    mms.push_back(manna::oracle::exact_mms(inst.values[i], inst.n).value);
  }
  return mms;
}

Errc code_of(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::defect;
}

}  // namespace

TEST_CASE("welfare max hands every item to its argmax agent") {
  auto diag = manna::search::welfare_max_allocation(inst_of({{2, 0}, {0, 2}}));
  CHECK(diag.bundles == std::vector<std::vector<int>>{{0}, {1}});

  auto tied = manna::search::welfare_max_allocation(inst_of({{1, 1}, {1, 1}}));
  CHECK(tied.bundles == std::vector<std::vector<int>>{{0, 1}, {}});

  auto chores = manna::search::welfare_max_allocation(inst_of({{-3, -1}, {-2, -2}}));
  CHECK(chores.bundles == std::vector<std::vector<int>>{{1}, {0}});
}

TEST_CASE("opt validates delta") {
  SolverParams params;
  params.delta = Rat(0);
  CHECK(code_of([&] { manna::search::opt_alpha_mms_po(inst_of({{1, 1}}), params); }) ==
        Errc::bad_parameter);
}

TEST_CASE("opt reaches alpha one on identical ones") {
  Instance inst = inst_of({{1, 1}, {1, 1}});
  SolverParams params;
  params.epsilon = Rat(1, 10);
  params.gamma = Rat(1, 10);
  params.delta = Rat(1, 64);
  auto res = manna::search::opt_alpha_mms_po(inst, params);
  CHECK(res.alpha == Rat(1));
  CHECK(res.probes == 1);
  CHECK(res.allocation.bundles == std::vector<std::vector<int>>{{0}, {1}});
  auto mms = mms_vector(inst);
  CHECK(mms == std::vector<Rat>{Rat(1), Rat(1)});
  CHECK(manna::satisfies_alpha_mms(inst, res.allocation, mms, Rat(9, 10)));
}

TEST_CASE("opt splits three and one between identical agents") {
  Instance inst = inst_of({{3, 1}, {3, 1}});
  SolverParams params;
  params.delta = Rat(1, 64);
  auto res = manna::search::opt_alpha_mms_po(inst, params);
  CHECK(res.alpha == Rat(1));
  CHECK(res.allocation.bundles == std::vector<std::vector<int>>{{0}, {1}});
}

TEST_CASE("opt respects the probe budget and the oracle across a random corpus") {
  SolverParams params;
  params.epsilon = Rat(1, 10);
  params.gamma = Rat(1, 10);
  params.delta = Rat(1, 32);
  const Rat slack = Rat(params.epsilon + params.delta);
  for (int t = 0; t < 12; ++t) {
    Instance inst = manna::generators::gen_random(3, 4, -9, 9, Rat(1, 4), 11000 + t);
    CAPTURE(t);
    auto res = manna::search::opt_alpha_mms_po(inst, params);
    CHECK(res.probes >= 1);
    CHECK(res.probes <= 6);  // ceil(log2(32)) + 1

    auto mms = mms_vector(inst);
    Rat astar = manna::oracle::exact_alpha_star(inst, mms);
    if (res.alpha == 0) {
      CHECK(astar <= slack);
      CHECK(res.allocation.bundles == manna::search::welfare_max_allocation(inst).bundles);
    } else {
      CHECK(res.alpha >= Rat(astar - slack));
      CHECK(manna::oracle::is_gamma_po(inst, res.allocation, params.gamma));
      Rat assured = Rat(res.alpha - params.epsilon);
      if (assured > 0) {
        CHECK(manna::satisfies_alpha_mms(inst, res.allocation, mms, assured));
      }
      if (res.alpha == 1) CHECK(res.probes == 1);
    }
  }
}

TEST_CASE("opt falls back to welfare max on the nonexistence instance", "[slow]") {
  Instance inst = manna::generators::gen_nonexistence();
  SolverParams params;
  params.epsilon = Rat(1, 10);
  params.gamma = Rat(1, 10);
  params.delta = Rat(1, 2);
  auto res = manna::search::opt_alpha_mms_po(inst, params);
  CHECK(res.alpha == 0);
  CHECK(res.probes == 2);
  auto fallback = manna::search::welfare_max_allocation(inst);
  CHECK(res.allocation.bundles == fallback.bundles);
  for (int chore = 12; chore < 15; ++chore) {
    CHECK(std::find(res.allocation.bundles[0].begin(), res.allocation.bundles[0].end(), chore) !=
          res.allocation.bundles[0].end());
  }
}
