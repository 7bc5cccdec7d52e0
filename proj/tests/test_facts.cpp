#include <catch2/catch_amalgamated.hpp>

#include "nmr/enumerate.hpp"
#include "nmr/fact_verifiers.hpp"
#include "support.hpp"

using namespace nmr;
using testsupport::load_structure;
using testsupport::set;

namespace {

Subset witness_set(const Witness& w, const std::string& label) {
  for (const auto& [name, value] : w.sets)
    if (name == label) return value;
  FAIL("witness has no set labelled " + label);
  return 0;
}

}  // namespace

TEST_CASE("fact ids round trip through their names") {
  for (FactId f : all_facts()) {
    auto back = fact_from_string(to_string(f));
    REQUIRE(back.has_value());
    CHECK(*back == f);
  }
  CHECK_FALSE(fact_from_string("NO_SUCH_FACT").has_value());
}

TEST_CASE("transitivity of strict smaller-than") {
  SECTION("holds on a smooth structure") {
    auto v = verify_fact(load_structure("chain.pref"), FactId::LessTrans);
    CHECK(v.status == FactStatus::Holds);
    CHECK(v.hypothesis_met);
  }
  SECTION("off hypothesis the chain breaks, and the break is reported") {
    auto s = load_structure("non_trans.pref");
    auto v = verify_fact(s, FactId::LessTrans);
    CHECK(v.status == FactStatus::Vacuous);
    CHECK_FALSE(v.hypothesis_met);
    REQUIRE(v.witness.has_value());
    CHECK(witness_set(*v.witness, "A") == set(s, {"c"}));
    CHECK(witness_set(*v.witness, "B") == set(s, {"b"}));
    CHECK(witness_set(*v.witness, "C") == set(s, {"a"}));
    // and the witness is real: both hops hold, the composite does not
    CHECK(less(s, set(s, {"c"}), set(s, {"b"})));
    CHECK(less(s, set(s, {"b"}), set(s, {"a"})));
    CHECK_FALSE(less(s, set(s, {"c"}), set(s, {"a"})));
  }
}

TEST_CASE("rank characterisation of the weak order") {
  SECTION("needs a ranked structure") {
    auto s = load_structure("trans_no_rank.pref");
    CHECK_THROWS_AS(verify_fact(s, FactId::Rk), Error);
    CHECK_THROWS_AS(verify_fact(s, FactId::TransRank), Error);
  }
  SECTION("holds on ranked structures") {
    std::mt19937_64 rng(31);
    int seen = 0;
    auto check_one = [&](const PreferentialStructure& s) {
      if (!s.is_ranked()) return;
      ++seen;
      CHECK(verify_fact(s, FactId::Rk).status == FactStatus::Holds);
      CHECK(verify_fact(s, FactId::TransRank).status == FactStatus::Holds);
    };
    check_one(load_structure("chain.pref"));
    for_each_acyclic_structure(3, check_one);
    for (int i = 0; i < 150; ++i) check_one(random_ranked_structure(rng, 6));
    CHECK(seen > 100);
  }
}

TEST_CASE("replacing the big side of smaller-than") {
  SECTION("needs rankedness, smoothness is not enough") {
    auto s = load_structure("trans_no_rank.pref");  // smooth but unranked
    REQUIRE(s.is_smooth());
    auto v = verify_fact(s, FactId::LessM);
    CHECK(v.status == FactStatus::Vacuous);
    CHECK_FALSE(v.hypothesis_met);
    REQUIRE(v.witness.has_value());
    // the reported replacement really breaks the relation
    Subset x = witness_set(*v.witness, "X");
    Subset y = witness_set(*v.witness, "Y");
    Subset yp = witness_set(*v.witness, "Y'");
    CHECK(less(s, x, y));
    CHECK(classify(s, y, yp) == SizeClass::Medium);
    CHECK_FALSE(less(s, x, yp));
  }
  SECTION("holds under the hypothesis") {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 150; ++i) {
      auto s = random_ranked_structure(rng, 6);
      auto v = verify_fact(s, FactId::LessM);
      CHECK(v.hypothesis_met);
      CHECK(v.status == FactStatus::Holds);
    }
  }
}

TEST_CASE("coherent families transfer across subset references") {
  SECTION("holds when both coherence conditions do") {
    auto v = verify_fact(load_structure("chain.pref"), FactId::Subset);
    CHECK(v.status == FactStatus::Holds);
    CHECK(v.hypothesis_met);
  }
  SECTION("vacuous when the second condition fails") {
    auto v = verify_fact(load_structure("non_trans.pref"), FactId::Subset);
    CHECK(v.status != FactStatus::Fails);
    CHECK_FALSE(v.hypothesis_met);
  }
}

TEST_CASE("no fact fails on its hypothesis class, exhaustively for small sizes") {
  std::vector<PreferentialStructure> pool;
  for (int n = 1; n <= 4; ++n)
    for_each_acyclic_structure(n, [&](const PreferentialStructure& s) { pool.push_back(s); });

  for (const auto& s : pool) {
    for (FactId f : all_facts()) {
      if ((f == FactId::Rk || f == FactId::TransRank) && !s.is_ranked()) continue;
      CHECK(verify_fact(s, f).status != FactStatus::Fails);
    }
  }
}

TEST_CASE("the two meta facts always hold") {
  std::mt19937_64 rng(41);
  std::vector<PreferentialStructure> pool;
  for_each_acyclic_structure(4, [&](const PreferentialStructure& s) { pool.push_back(s); });
  for (int i = 0; i < 100; ++i) pool.push_back(random_structure(rng, 6));
  for (const auto& s : pool) {
    CHECK(verify_fact(s, FactId::Coher).status == FactStatus::Holds);
    CHECK(verify_fact(s, FactId::TriangleCorollary).status == FactStatus::Holds);
  }
}

TEST_CASE("verification is capped at ten elements") {
  std::vector<std::string> names;
  for (int i = 0; i < 11; ++i) names.push_back("e" + std::to_string(i));
  auto s = PreferentialStructure::build(names, {});
  try {
    verify_fact(s, FactId::Coher);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapacityExceeded);
  }
}

TEST_CASE("sweeping facts over generated structures") {
  SweepOptions opt;
  opt.exhaustive_max = 3;
  opt.samples = 60;
  opt.sample_max = 5;
  opt.ranked_samples = 25;
  opt.seed = 42;

  auto entries = run_fact_sweep(all_facts(), opt);
  REQUIRE(entries.size() == all_facts().size());
  for (const auto& e : entries) {
    CHECK(e.fails == 0);
    CHECK_FALSE(e.first_failure.has_value());
    CHECK(e.holds > 0);  // hypothesis class was exercised
    CHECK(e.structures == e.holds + e.fails + e.vacuous);
  }

  SECTION("same options give the same counts") {
    auto again = run_fact_sweep(all_facts(), opt);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      CHECK(entries[i].holds == again[i].holds);
      CHECK(entries[i].vacuous == again[i].vacuous);
    }
  }

  SECTION("restricting the population to a class") {
    SweepOptions ranked = opt;
    ranked.cls = StructureClass::Ranked;
    for (const auto& e : run_fact_sweep(all_facts(), ranked)) {
      CHECK(e.fails == 0);
      CHECK(e.vacuous == 0);  // every ranked structure meets every hypothesis
    }
  }
}
