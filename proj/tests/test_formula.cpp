#include <catch2/catch_amalgamated.hpp>

#include "nmr/formula.hpp"
#include "support.hpp"

using namespace nmr;

namespace {

std::vector<std::uint32_t> model_ints(const ModelSet& m) {
  std::vector<std::uint32_t> out;
  for (auto a : m.members()) out.push_back(a);
  return out;
}

ModelSet models_of(const std::string& text, std::vector<std::string> vars) {
  return models(*parse_formula(text, vars), static_cast<int>(vars.size()));
}

}  // namespace

TEST_CASE("truth tables of the connectives") {
  // variable i is bit i; the first declared variable prints leftmost
  CHECK(model_ints(models_of("p | q", {"p", "q"})) == std::vector<std::uint32_t>{1, 2, 3});
  CHECK(model_ints(models_of("p & q", {"p", "q"})) == std::vector<std::uint32_t>{3});
  CHECK(model_ints(models_of("p -> q", {"p", "q"})) == std::vector<std::uint32_t>{0, 2, 3});
  CHECK(model_ints(models_of("!p", {"p", "q"})) == std::vector<std::uint32_t>{0, 2});
  CHECK(model_ints(models_of("true", {"p"})) == std::vector<std::uint32_t>{0, 1});
  CHECK(model_ints(models_of("false", {"p"})).empty());
  CHECK(model_ints(models_of("p & !p", {"p"})).empty());
  CHECK(model_ints(models_of("p | q", {"p", "q", "r"})) ==
        std::vector<std::uint32_t>{1, 2, 3, 5, 6, 7});
}

TEST_CASE("operator precedence and associativity") {
  auto same = [](const std::string& x, const std::string& y, std::vector<std::string> vars) {
    return models_of(x, vars) == models_of(y, vars);
  };
  CHECK(same("!p & q | r", "((!p) & q) | r", {"p", "q", "r"}));
  CHECK(same("p | q & r", "p | (q & r)", {"p", "q", "r"}));
  CHECK(same("p -> q -> r", "p -> (q -> r)", {"p", "q", "r"}));
  CHECK(same("p & q -> r", "(p & q) -> r", {"p", "q", "r"}));
  CHECK(same("!p -> q", "(!p) -> q", {"p", "q"}));
  CHECK_FALSE(same("p -> q -> r", "(p -> q) -> r", {"p", "q", "r"}));
}

TEST_CASE("parser diagnostics") {
  SECTION("unknown variable") {
    try {
      parse_formula("p & z", {"p", "q"});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownVariable);
    }
  }
  SECTION("syntax errors report a position") {
    for (const char* bad : {"p &", "(p | q", "p q", "", "| p", "p !q"}) {
      try {
        parse_formula(bad, {"p", "q"});
        FAIL("expected an error for: " + std::string(bad));
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SyntaxError);
      }
    }
  }
  SECTION("duplicate variable names") {
    CHECK_THROWS_AS(parse_formula("p", {"p", "p"}), Error);
  }
  SECTION("too many variables") {
    std::vector<std::string> vars;
    for (int i = 0; i < 17; ++i) vars.push_back("v" + std::to_string(i));
    try {
      parse_formula("v0", vars);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CapacityExceeded);
    }
  }
  SECTION("reserved words cannot be variables") {
    CHECK_THROWS_AS(parse_formula("p", {"true", "p"}), Error);
  }
}

TEST_CASE("assignments print first variable leftmost") {
  CHECK(format_assignment(0b01u, 2) == "10");  // p=1 q=0
  CHECK(format_assignment(0b10u, 2) == "01");
  CHECK(format_assignment(0b110u, 3) == "011");
  CHECK(format_assignment(0u, 3) == "000");
}

TEST_CASE("disjunctive normal form round trips") {
  std::vector<std::string> vars{"p", "q", "r"};
  SECTION("empty set prints as false") {
    ModelSet none = ModelSet::none(3);
    CHECK(to_dnf(none, vars) == "false");
    CHECK(models_of(to_dnf(none, vars), vars) == none);
  }
  SECTION("random sets survive the round trip") {
    std::mt19937_64 rng(59);
    for (int round = 0; round < 50; ++round) {
      ModelSet m = ModelSet::none(3);
      for (std::uint32_t a = 0; a < 8; ++a)
        if (rng() % 2) m.add(a);
      CHECK(models_of(to_dnf(m, vars), vars) == m);
    }
  }
  SECTION("random formulas survive models -> dnf -> models") {
    std::mt19937_64 rng(61);
    std::vector<std::string> four{"a", "b", "c", "d"};
    for (int round = 0; round < 50; ++round) {
      auto f = testsupport::random_formula(rng, 4, 4);
      ModelSet m = models(*f, 4);
      CHECK(models_of(to_dnf(m, four), four) == m);
    }
  }
}

TEST_CASE("model sets behave like sets") {
  ModelSet a = models_of("p", {"p", "q"});
  ModelSet b = models_of("q", {"p", "q"});
  CHECK((a & b) == models_of("p & q", {"p", "q"}));
  CHECK((a | b) == models_of("p | q", {"p", "q"}));
  CHECK((a - b) == models_of("p & !q", {"p", "q"}));
  CHECK(a.complemented() == models_of("!p", {"p", "q"}));
  CHECK(ModelSet::all(2).is_universe());
  CHECK(ModelSet::all(2).count() == 4);
  CHECK_FALSE(a.is_universe());
  CHECK(a.contains(1));
  CHECK_FALSE(a.contains(2));
}
