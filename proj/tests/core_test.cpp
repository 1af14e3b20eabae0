#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "manna/core.hpp"
#include "manna/json_io.hpp"

using manna::Allocation;
using manna::Errc;
using manna::Error;
using manna::Instance;
using manna::Rat;

namespace {

Instance random_instance(std::mt19937_64& rng, int max_n = 3, int max_m = 6) {
  std::uniform_int_distribution<int> nd(1, max_n), md(0, max_m), vd(-20, 20);
  int n = nd(rng), m = md(rng);
  std::vector<std::string> labels;
  for (int j = 0; j < m; ++j) labels.push_back("i" + std::to_string(j));
  std::vector<std::vector<Rat>> values(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) values[i].push_back(Rat(vd(rng)));
  return manna::make_instance(n, labels, values);
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::defect;
}

}  // namespace

TEST_CASE("parse_instance basic") {
  Instance inst = manna::parse_instance(
      R"({"agents": 2, "items": ["a", "b"], "values": [["1", "-1/2"], ["3", "0.25"]]})");
  REQUIRE(inst.n == 2);
  REQUIRE(inst.m == 2);
  CHECK(inst.item_labels[1] == "b");
  CHECK(inst.values[0][1] == Rat(-1) / 2);
  CHECK(inst.values[1][1] == Rat(1) / 4);
  CHECK(inst.values[1][0] == Rat(3));
}

TEST_CASE("parse_instance accepts integer JSON numbers and empty item sets") {
  Instance inst = manna::parse_instance(R"({"agents": 2, "items": [], "values": [[], []]})");
  CHECK(inst.m == 0);
  Instance inst2 =
      manna::parse_instance(R"({"agents": 1, "items": ["a", "b"], "values": [[5, -7]]})");
  CHECK(inst2.values[0][0] == Rat(5));
  CHECK(inst2.values[0][1] == Rat(-7));
}

TEST_CASE("parse_instance error taxonomy") {
  CHECK(code_of([] { manna::parse_instance("{nope"); }) == Errc::bad_json);
  CHECK(code_of([] {
          manna::parse_instance(R"({"agents": 2, "items": ["a"], "values": [["1"], []]})");
        }) == Errc::ragged_matrix);
  CHECK(code_of([] {
          manna::parse_instance(R"({"agents": 1, "items": ["a"], "values": [["1/0"]]})");
        }) == Errc::zero_denominator);
  CHECK(code_of([] {
          manna::parse_instance(R"({"agents": 1, "items": ["a", "a"], "values": [["1", "2"]]})");
        }) == Errc::duplicate_label);
  CHECK(code_of([] {
          manna::parse_instance(R"({"agents": 1, "items": ["a"], "values": [[0.25]]})");
        }) == Errc::bad_value);
  CHECK(code_of([] { manna::parse_instance(R"({"agents": 0, "items": [], "values": []})"); }) ==
        Errc::bad_value);
}

TEST_CASE("serialize parse identity") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 200; ++t) {
    Instance inst = random_instance(rng);
    std::string text = manna::serialize_instance(inst);
    Instance back = manna::parse_instance(text);
    CHECK(back.n == inst.n);
    CHECK(back.item_labels == inst.item_labels);
    CHECK(back.values == inst.values);
    CHECK(manna::serialize_instance(back) == text);
  }
}

TEST_CASE("classify_items") {
  Instance inst = manna::make_instance(1, {"a", "b"}, {{Rat(2), Rat(-3)}});
  auto cls = manna::classify_items(inst);
  CHECK(cls.goods_of[0] == std::vector<int>{0});
  CHECK(cls.chores_of[0] == std::vector<int>{1});
  CHECK(cls.global_goods == std::vector<int>{0});
  CHECK(cls.global_chores == std::vector<int>{1});
  CHECK(cls.v_plus[0] == Rat(2));
  CHECK(cls.v_minus[0] == Rat(3));
}

TEST_CASE("classify_items zero counts as good, global chores need unanimity") {
  Instance inst =
      manna::make_instance(2, {"a", "b", "c"},
                           {{Rat(0), Rat(-1), Rat(-2)}, {Rat(-5), Rat(1), Rat(-3)}});
  auto cls = manna::classify_items(inst);
  CHECK(cls.goods_of[0] == std::vector<int>{0});
  CHECK(cls.goods_of[1] == std::vector<int>{1});
  CHECK(cls.global_goods == std::vector<int>{0, 1});
  CHECK(cls.global_chores == std::vector<int>{2});
}

TEST_CASE("classification sums match totals") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    Instance inst = random_instance(rng);
    auto cls = manna::classify_items(inst);
    for (int i = 0; i < inst.n; ++i) {
      CHECK(manna::total_value(inst, i) == cls.v_plus[i] - cls.v_minus[i]);
    }
  }
}

TEST_CASE("normalize") {
  Instance inst = manna::make_instance(2, {"a", "b"}, {{Rat(3), Rat(1)}, {Rat(3), Rat(1)}});
  auto [norm, scales] = manna::normalize(inst);
  CHECK(scales == std::vector<Rat>{Rat(1) / 2, Rat(1) / 2});
  CHECK(norm.values[0] == std::vector<Rat>{Rat(3) / 2, Rat(1) / 2});
  CHECK(manna::total_value(norm, 0) == Rat(2));

  Instance neg = manna::make_instance(1, {"a", "b"}, {{Rat(-3), Rat(1)}});
  auto [nneg, nscales] = manna::normalize(neg);
  CHECK(manna::total_value(nneg, 0) == Rat(-1));
  CHECK(nscales[0] == Rat(1) / 2);

  Instance zero = manna::make_instance(1, {"a", "b"}, {{Rat(1), Rat(-1)}});
  CHECK(code_of([&] { manna::normalize(zero); }) == Errc::zero_total_agent);
}

TEST_CASE("normalize is idempotent") {
  std::mt19937_64 rng(21);
  int done = 0;
  while (done < 100) {
    Instance inst = random_instance(rng);
    bool nonzero = inst.m > 0;
    for (int i = 0; i < inst.n && nonzero; ++i) nonzero = manna::total_value(inst, i) != 0;
    if (!nonzero) continue;
    auto [norm, scales] = manna::normalize(inst);
    auto [again, rescales] = manna::normalize(norm);
    CHECK(again.values == norm.values);
    for (const Rat& c : rescales) CHECK(c == Rat(1));
    ++done;
  }
}

TEST_CASE("classification is scale invariant") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 100; ++t) {
    Instance inst = random_instance(rng);
    Instance scaled = inst;
    for (int i = 0; i < inst.n; ++i) {
      Rat c = Rat(1 + (t % 5)) / Rat(3);
      for (int j = 0; j < inst.m; ++j) scaled.values[i][j] *= c;
    }
    auto a = manna::classify_items(inst);
    auto b = manna::classify_items(scaled);
    CHECK(a.goods_of == b.goods_of);
    CHECK(a.global_goods == b.global_goods);
    CHECK(a.global_chores == b.global_chores);
  }
}

TEST_CASE("check_tau_condition") {
  Instance inst = manna::make_instance(
      3, {"a", "b"}, {{Rat(1), Rat(-1)}, {Rat(3), Rat(-1)}, {Rat(2), Rat(0)}});
  auto ok = manna::check_tau_condition(inst, Rat(1) / 4);
  CHECK(ok == std::vector<bool>{false, true, true});
  // |v(M)| = 2 >= tau * 1 holds right up to tau = 2.
  CHECK(manna::check_tau_condition(inst, Rat(2))[1]);
  CHECK_FALSE(manna::check_tau_condition(inst, Rat(3))[1]);
}

TEST_CASE("bundle_value and welfare") {
  Instance inst =
      manna::make_instance(2, {"a", "b", "c"}, {{Rat(1), Rat(2), Rat(-3)}, {Rat(4), Rat(0), Rat(1)}});
  CHECK(manna::bundle_value(inst, 0, {0, 2}) == Rat(-2));
  CHECK(manna::bundle_value(inst, 1, {}) == Rat(0));
  Allocation alloc{{{0, 2}, {1}}};
  CHECK(manna::welfare(inst, alloc) == Rat(-2));
  Allocation better{{{1}, {0, 2}}};
  CHECK(manna::welfare(inst, better) == Rat(7));
}

TEST_CASE("validate_allocation") {
  Instance inst = manna::make_instance(2, {"a", "b"}, {{Rat(1), Rat(1)}, {Rat(1), Rat(1)}});
  manna::validate_allocation(inst, Allocation{{{0, 1}, {}}});
  CHECK(code_of([&] { manna::validate_allocation(inst, Allocation{{{0}, {}}}); }) ==
        Errc::bad_allocation);
  CHECK(code_of([&] { manna::validate_allocation(inst, Allocation{{{0, 1}, {1}}}); }) ==
        Errc::bad_allocation);
  CHECK(code_of([&] { manna::validate_allocation(inst, Allocation{{{0, 1}}}); }) ==
        Errc::bad_allocation);
}

TEST_CASE("allocation json round trip") {
  Instance inst = manna::make_instance(2, {"a", "b", "c"},
                                       {{Rat(1), Rat(1), Rat(1)}, {Rat(1), Rat(1), Rat(1)}});
  Allocation alloc{{{2, 0}, {1}}};
  std::string text = manna::serialize_allocation(inst, alloc);
  Allocation back = manna::parse_allocation(text, inst);
  CHECK(back.bundles == std::vector<std::vector<int>>{{0, 2}, {1}});
  CHECK(code_of([&] {
          manna::parse_allocation(R"({"bundles": [["a"], ["b"]]})", inst);
        }) == Errc::bad_allocation);
  CHECK(code_of([&] {
          manna::parse_allocation(R"({"bundles": [["a", "z"], ["b", "c"]]})", inst);
        }) == Errc::bad_allocation);
}

TEST_CASE("satisfies_alpha_mms") {
  Instance inst = manna::make_instance(2, {"a", "b"}, {{Rat(4), Rat(2)}, {Rat(4), Rat(2)}});
  std::vector<Rat> mms{Rat(2), Rat(2)};
  CHECK(manna::satisfies_alpha_mms(inst, Allocation{{{1}, {0}}}, mms, Rat(1)));
  CHECK(manna::satisfies_alpha_mms(inst, Allocation{{{0}, {1}}}, mms, Rat(1)));
  CHECK_FALSE(manna::satisfies_alpha_mms(inst, Allocation{{{0, 1}, {}}}, mms, Rat(1)));
  // 0 >= alpha * 0 holds; empty bundles pass when the MMS is zero.
  CHECK(manna::satisfies_alpha_mms(inst, Allocation{{{0, 1}, {}}},
                                   std::vector<Rat>{Rat(2), Rat(0)}, Rat(1)));
}

TEST_CASE("satisfies_alpha_mms negative side divides by alpha") {
  Instance inst = manna::make_instance(1, {"a", "b"}, {{Rat(-2), Rat(-2)}});
  std::vector<Rat> mms{Rat(-2)};
  // Threshold at alpha = 1/2 is -4, met with equality.
  CHECK(manna::satisfies_alpha_mms(inst, Allocation{{{0, 1}}}, mms, Rat(1) / 2));
  CHECK_FALSE(manna::satisfies_alpha_mms(inst, Allocation{{{0, 1}}}, mms, Rat(2) / 3));
  CHECK(code_of([&] {
          manna::satisfies_alpha_mms(inst, Allocation{{{0, 1}}}, mms, Rat(0));
        }) == Errc::bad_parameter);
}

TEST_CASE("alpha mms is monotone in alpha") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> md(1, 5), vd(-9, 9), bd(0, 2);
  for (int t = 0; t < 200; ++t) {
    Instance inst = random_instance(rng, 3, 5);
    if (inst.m == 0) continue;
    std::vector<Rat> mms(inst.n);
    for (int i = 0; i < inst.n; ++i) mms[i] = Rat(vd(rng));
    std::vector<int> assign(inst.m);
    for (int j = 0; j < inst.m; ++j) assign[j] = bd(rng) % inst.n;
    Allocation alloc = manna::allocation_from_assignment(assign, inst.n);
    if (manna::satisfies_alpha_mms(inst, alloc, mms, Rat(3) / 4)) {
      CHECK(manna::satisfies_alpha_mms(inst, alloc, mms, Rat(1) / 2));
    }
  }
}
