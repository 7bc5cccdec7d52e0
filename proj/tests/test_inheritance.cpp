#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "nmr/inheritance.hpp"
#include "support.hpp"

using namespace nmr;
using testsupport::load_diagram;
using testsupport::random_diagram;

namespace {

const TargetReport& report(const InferenceResult& r, const InheritanceDiagram& d,
                           const std::string& name) {
  return r.targets[d.node(name)];
}

TargetStatus status_of(const InferenceResult& r, const InheritanceDiagram& d,
                       const std::string& name) {
  return report(r, d, name).status;
}

bool specificity_contains(const std::vector<SpecificityInstance>& v, const InheritanceDiagram& d,
                          const std::string& lo, const std::string& hi, const std::string& at) {
  for (const auto& i : v)
    if (i.more_specific == d.node(lo) && i.less_specific == d.node(hi) &&
        i.conflict == d.node(at))
      return true;
  return false;
}

}  // namespace

TEST_CASE("diagram construction and parsing") {
  SECTION("fixture files load") {
    CHECK(load_diagram("tweety.diag").n() == 4);
    CHECK(load_diagram("nixon.diag").n() == 4);
    CHECK(load_diagram("up_down.diag").n() == 5);
  }
  SECTION("both arrow kinds between the same nodes are refused") {
    try {
      InheritanceDiagram::build({"A", "B"}, {{0, 1, true}, {0, 1, false}});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConflictingParallelArrows);
    }
  }
  SECTION("duplicate arrows collapse to one") {
    auto d = InheritanceDiagram::build({"A", "B"}, {{0, 1, true}, {0, 1, true}});
    CHECK(d.arrows().size() == 1);
  }
  SECTION("cycles are refused, whatever the polarity mix") {
    CHECK_THROWS_AS(InheritanceDiagram::build({"A"}, {{0, 0, true}}), Error);
    CHECK_THROWS_AS(InheritanceDiagram::build({"A", "B"}, {{0, 1, true}, {1, 0, true}}), Error);
    CHECK_THROWS_AS(InheritanceDiagram::build({"A", "B"}, {{0, 1, true}, {1, 0, false}}), Error);
  }
  SECTION("parser diagnostics carry line numbers") {
    try {
      parse_diagram("nodes A B\nA => B\n");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SyntaxError);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    try {
      parse_diagram("nodes A B\nA -> C\n");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownName);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_diagram("nodes A B A\n"), Error);
  }
  SECTION("nodes may be declared across several lines") {
    auto d = parse_diagram("nodes A B\nnodes C\nC -/> A\n");
    CHECK(d.n() == 3);
    CHECK(d.arrows().size() == 1);
    CHECK_FALSE(d.arrows()[0].positive);
  }
}

TEST_CASE("specificity instances read off a diagram") {
  SECTION("one instance, direct") {
    auto d = load_diagram("tweety.diag");
    auto v = derive_specificity(d);
    REQUIRE(v.size() == 1);
    CHECK(specificity_contains(v, d, "C", "B", "A"));
    CHECK(v[0].direct);
  }
  SECTION("a bare conflict has none") {
    CHECK(derive_specificity(load_diagram("nixon.diag")).empty());
  }
  SECTION("two instances on the five-node ladder") {
    auto d = load_diagram("up_down.diag");
    auto v = derive_specificity(d);
    REQUIRE(v.size() == 2);
    CHECK(specificity_contains(v, d, "Z", "U", "X"));
    CHECK(specificity_contains(v, d, "X", "V", "Y"));
    CHECK(v[0].direct);
    CHECK(v[1].direct);
  }
  SECTION("an instance through a chain of positive arrows is not direct") {
    auto d = parse_diagram("nodes Z W U X\nZ -> W\nW -> U\nU -> X\nZ -/> X\n");
    auto v = derive_specificity(d);
    REQUIRE(v.size() == 1);
    CHECK(specificity_contains(v, d, "Z", "U", "X"));
    CHECK_FALSE(v[0].direct);
  }
}

TEST_CASE("inference on the bundled diagrams") {
  SECTION("exception wins over the inherited default") {
    auto d = load_diagram("tweety.diag");
    auto r = infer(d, d.node("D"));
    CHECK(status_of(r, d, "A") == TargetStatus::OutBig);
    CHECK(status_of(r, d, "B") == TargetStatus::InBig);
    CHECK(status_of(r, d, "C") == TargetStatus::InBig);
    CHECK(r.cells.size() == 1);
    CHECK(report(r, d, "A").out.is_one());
  }
  SECTION("an unresolvable conflict splits evenly") {
    auto d = load_diagram("nixon.diag");
    auto r = infer(d, d.node("U"));
    CHECK(status_of(r, d, "V") == TargetStatus::InBig);
    CHECK(status_of(r, d, "X") == TargetStatus::InBig);
    CHECK(status_of(r, d, "Y") == TargetStatus::Split);
    CHECK(report(r, d, "Y").in.str() == "1/2");
    CHECK(report(r, d, "Y").out.str() == "1/2");
    CHECK(r.cells.size() == 2);
  }
  SECTION("a more specific source resolves the same conflict") {
    auto d = load_diagram("extended_nixon.diag");
    auto r = infer(d, d.node("Z"));
    CHECK(status_of(r, d, "X") == TargetStatus::OutBig);
    CHECK(status_of(r, d, "Y") == TargetStatus::InBig);
    CHECK(r.cells.size() == 1);
  }
  SECTION("preemption works in both directions on the ladder") {
    auto d = load_diagram("up_down.diag");
    auto r = infer(d, d.node("Z"));
    CHECK(status_of(r, d, "U") == TargetStatus::InBig);
    CHECK(status_of(r, d, "X") == TargetStatus::OutBig);
    CHECK(status_of(r, d, "V") == TargetStatus::InBig);
    CHECK(status_of(r, d, "Y") == TargetStatus::InBig);
  }
  SECTION("independent conflicts split independently") {
    auto d = load_diagram("two_nixon.diag");
    auto r = infer(d, d.node("U"));
    CHECK(status_of(r, d, "Y") == TargetStatus::Split);
    CHECK(status_of(r, d, "Y2") == TargetStatus::Split);
    CHECK(r.cells.size() == 4);
    for (const auto& c : r.cells) CHECK(c.fraction().str() == "1/4");
    CHECK(report(r, d, "Y").in.str() == "1/2");
    CHECK(report(r, d, "Y2").in.str() == "1/2");
  }
  SECTION("the source's own exception arrow preempts a remoter default") {
    auto d = load_diagram("nixon_w.diag");
    auto r = infer(d, d.node("Z"));
    CHECK(status_of(r, d, "W") == TargetStatus::InBig);
    CHECK(status_of(r, d, "Y") == TargetStatus::OutBig);
    CHECK(r.cells.size() == 1);
  }
  SECTION("source is in by definition, unreachable nodes are untouched") {
    auto d = parse_diagram("nodes A B C\nA -> B\n");
    auto r = infer(d, d.node("A"));
    CHECK(status_of(r, d, "A") == TargetStatus::InBig);
    CHECK(status_of(r, d, "B") == TargetStatus::InBig);
    CHECK(status_of(r, d, "C") == TargetStatus::None);
    CHECK(report(r, d, "C").unknown.is_one());
  }
  SECTION("unknown source is refused") {
    auto d = load_diagram("nixon.diag");
    CHECK_THROWS_AS(infer(d, 99), Error);
  }
}

TEST_CASE("a target fed from both halves of a split is mixed") {
  auto d = parse_diagram("nodes U V X Y T\nU -> V\nU -> X\nV -> Y\nX -/> Y\nY -> T\n");
  auto r = infer(d, d.node("U"));
  CHECK(status_of(r, d, "Y") == TargetStatus::Split);
  CHECK(status_of(r, d, "T") == TargetStatus::Mixed);
  CHECK(report(r, d, "T").in.str() == "1/2");
  CHECK(report(r, d, "T").unknown.str() == "1/2");

  SECTION("the knob turns split propagation off") {
    InferOptions opts;
    opts.split_cells_propagate = false;
    auto r2 = infer(d, d.node("U"), opts);
    CHECK(status_of(r2, d, "Y") == TargetStatus::Split);
    CHECK(status_of(r2, d, "T") == TargetStatus::None);
    CHECK(report(r2, d, "T").unknown.is_one());
  }
}

TEST_CASE("per-target fractions always sum to one") {
  auto check_one = [](const InheritanceDiagram& d) {
    for (int src = 0; src < d.n(); ++src) {
      auto r = infer(d, src);
      for (const auto& t : r.targets) {
        auto total = t.in + t.out + t.unknown;
        CHECK(total.is_one());
      }
      auto mass = Dyadic::zero();
      for (const auto& c : r.cells) mass = mass + c.fraction();
      CHECK(mass.is_one());
    }
  };
  for (const char* name :
       {"tweety.diag", "nixon.diag", "extended_nixon.diag", "up_down.diag", "two_nixon.diag"})
    check_one(load_diagram(name));
  std::mt19937_64 rng(43);
  for (int i = 0; i < 120; ++i) check_one(random_diagram(rng, 5, 8));
}

TEST_CASE("processing order does not change the outcome") {
  std::mt19937_64 rng(47);
  auto shuffled = [&](int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(p[i], p[static_cast<int>(rng() % (i + 1))]);
    return p;
  };
  auto same = [](const InferenceResult& a, const InferenceResult& b) {
    if (a.targets.size() != b.targets.size() || a.cells.size() != b.cells.size()) return false;
    for (std::size_t i = 0; i < a.targets.size(); ++i) {
      if (a.targets[i].status != b.targets[i].status) return false;
      if (!(a.targets[i].in == b.targets[i].in)) return false;
      if (!(a.targets[i].out == b.targets[i].out)) return false;
    }
    for (std::size_t i = 0; i < a.cells.size(); ++i)
      if (a.cells[i].membership != b.cells[i].membership) return false;
    return true;
  };

  for (const char* name : {"tweety.diag", "nixon.diag", "extended_nixon.diag", "up_down.diag",
                           "two_nixon.diag", "nixon_w.diag"}) {
    auto d = load_diagram(name);
    for (int src = 0; src < d.n(); ++src) {
      auto base = infer(d, src);
      for (int round = 0; round < 20; ++round) {
        InferOptions opts;
        opts.priority = shuffled(d.n());
        CHECK(same(base, infer(d, src, opts)));
      }
    }
  }
}

TEST_CASE("every preemption is justified by a specificity instance") {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 100; ++i) {
    auto d = random_diagram(rng, 5, 8);
    auto instances = derive_specificity(d);
    for (int src = 0; src < d.n(); ++src) {
      auto r = infer(d, src);
      for (const auto& ev : r.trace) {
        for (const auto& p : ev.preempted) {
          CHECK(p.dropped.to == ev.target);
          CHECK(p.by.to == ev.target);
          CHECK(p.dropped.positive != p.by.positive);
          CHECK(specificity_contains(instances, d, d.nodes()[p.by.from],
                                     d.nodes()[p.dropped.from], d.nodes()[ev.target]));
        }
      }
    }
  }
}

TEST_CASE("dropping a preempted arrow does not change the verdict") {
  for (const char* name :
       {"tweety.diag", "extended_nixon.diag", "up_down.diag", "nixon_w.diag"}) {
    auto d = load_diagram(name);
    for (int src = 0; src < d.n(); ++src) {
      auto r = infer(d, src);
      std::vector<Arrow> dropped;
      for (const auto& ev : r.trace)
        for (const auto& p : ev.preempted) dropped.push_back(p.dropped);
      if (dropped.empty()) continue;
      std::vector<Arrow> kept;
      for (const auto& a : d.arrows()) {
        bool out = false;
        for (const auto& x : dropped)
          if (x.from == a.from && x.to == a.to && x.positive == a.positive) out = true;
        if (!out) kept.push_back(a);
      }
      auto d2 = InheritanceDiagram::build(d.nodes(), kept);
      auto r2 = infer(d2, src);
      for (int t = 0; t < d.n(); ++t) {
        CHECK(r.targets[t].status == r2.targets[t].status);
        CHECK(r.targets[t].in == r2.targets[t].in);
      }
    }
  }
}

TEST_CASE("derivations in words") {
  auto d = load_diagram("tweety.diag");
  auto lines = explain(d, d.node("D"), d.node("A"));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].find("preempt B -> A") != std::string::npos);
  CHECK(lines[0].find("C -/> A") != std::string::npos);
  CHECK(lines[0].find("=> OUT") != std::string::npos);
  CHECK(lines[1] == "A: OUT_BIG (in 0/1, out 1/1, unknown 0/1)");

  CHECK(explain(d, d.node("D"), d.node("D"))[0] == "D: source, IN by definition");

  auto nixon = load_diagram("nixon.diag");
  auto ylines = explain(nixon, nixon.node("U"), nixon.node("Y"));
  REQUIRE(ylines.size() >= 2);
  CHECK(ylines[0].find("split") != std::string::npos);
  CHECK(ylines.back().find("SPLIT (in 1/2, out 1/2") != std::string::npos);
}
