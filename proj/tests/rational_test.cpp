#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "manna/rational.hpp"

using manna::Errc;
using manna::Error;
using manna::Int;
using manna::Rat;

TEST_CASE("parse integers") {
  CHECK(manna::parse_rational("3") == Rat(3));
  CHECK(manna::parse_rational("-17") == Rat(-17));
  CHECK(manna::parse_rational("+4") == Rat(4));
  CHECK(manna::parse_rational("0") == Rat(0));
  CHECK(manna::parse_rational("007") == Rat(7));
  CHECK(manna::parse_rational("123456789012345678901234567890") ==
        Rat(Int("123456789012345678901234567890")));
}

TEST_CASE("parse fractions") {
  CHECK(manna::parse_rational("1/2") == Rat(1) / 2);
  CHECK(manna::parse_rational("-1/2") == Rat(-1) / 2);
  CHECK(manna::parse_rational("2/4") == Rat(1) / 2);
  CHECK(manna::parse_rational("-16219999/4") == Rat(-16219999) / 4);
  CHECK(manna::parse_rational("0/5") == Rat(0));
}

TEST_CASE("parse decimals") {
  CHECK(manna::parse_rational("0.25") == Rat(1) / 4);
  CHECK(manna::parse_rational("-0.1") == Rat(-1) / 10);
  CHECK(manna::parse_rational("2.50") == Rat(5) / 2);
  CHECK(manna::parse_rational("-4054999.75") == Rat(-16219999) / 4);
}

TEST_CASE("parse rejects malformed literals") {
  for (const char* bad : {"", "-", "abc", "1.2.3", "1/2/3", "1/", "/2", ".5", "1.", "1/-2",
                          "1e3", " 1", "1 ", "--1", "0x10"}) {
    CHECK_THROWS_AS(manna::parse_rational(bad), Error);
  }
  try {
    manna::parse_rational("1/0");
    FAIL("expected an error for 1/0");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::zero_denominator);
  }
}

TEST_CASE("make_rational canonicalizes") {
  CHECK(manna::make_rational(2, 4) == Rat(1) / 2);
  CHECK(manna::make_rational(1, -2) == Rat(-1) / 2);
  CHECK(manna::make_rational(-1, -2) == Rat(1) / 2);
  CHECK_THROWS_AS(manna::make_rational(1, 0), Error);
}

TEST_CASE("format lowest terms") {
  CHECK(manna::format_rational(Rat(5)) == "5");
  CHECK(manna::format_rational(Rat(-1) / 2) == "-1/2");
  CHECK(manna::format_rational(Rat(0)) == "0");
  CHECK(manna::format_rational(Rat(4) / 2) == "2");
  CHECK(manna::format_rational(Rat(-16219999) / 4) == "-16219999/4");
}

TEST_CASE("format parse round trip") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<long long> num(-1000000, 1000000);
  std::uniform_int_distribution<long long> den(1, 10000);
  for (int t = 0; t < 2000; ++t) {
    Rat r = Rat(num(rng)) / Rat(den(rng));
    CHECK(manna::parse_rational(manna::format_rational(r)) == r);
  }
}

TEST_CASE("is_integer") {
  CHECK(manna::is_integer(Rat(4)));
  CHECK(manna::is_integer(Rat(4) / 2));
  CHECK_FALSE(manna::is_integer(Rat(1) / 2));
}
