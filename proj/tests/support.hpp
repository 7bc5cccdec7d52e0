#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nmr/core_revision.hpp"
#include "nmr/formula.hpp"
#include "nmr/inheritance.hpp"
#include "nmr/prefstruct.hpp"
#include "nmr/size_algebra.hpp"

#ifndef NMR_FIXTURE_DIR
#define NMR_FIXTURE_DIR "fixtures"
#endif

namespace testsupport {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline std::string fixture_path(const std::string& name) {
  return std::string(NMR_FIXTURE_DIR) + "/" + name;
}

inline nmr::PreferentialStructure load_structure(const std::string& name) {
  return nmr::parse_structure(read_file(fixture_path(name)));
}

inline nmr::InheritanceDiagram load_diagram(const std::string& name) {
  return nmr::parse_diagram(read_file(fixture_path(name)));
}

/// subset literal by element names, e.g. set(s, {"a", "c"})
inline nmr::Subset set(const nmr::PreferentialStructure& s, std::vector<std::string> names) {
  return s.subset(names);
}

/// Independent degree-of-smallness oracle: plain recursion over candidate
/// chains through the public classify interface, no tables, no memo.
inline int naive_small_degree(const nmr::PreferentialStructure& s, nmr::Subset a, nmr::Subset b) {
  using namespace nmr;
  if (classify(s, b, a) != SizeClass::Small) return 0;
  int best = 1;
  for (Subset c = 0; c <= b; ++c) {
    if (!is_subset(c, b) || c == b || c == a || !is_subset(a, c)) continue;
    if (c == 0 || classify(s, b, c) != SizeClass::Small) continue;
    int below = naive_small_degree(s, a, c);
    if (below >= 1) best = std::max(best, 1 + below);
  }
  return best;
}

inline nmr::FormulaPtr random_formula(std::mt19937_64& rng, int num_vars, int depth) {
  using F = nmr::Formula;
  auto pick = [&](std::uint64_t k) { return rng() % k; };
  if (depth == 0 || pick(4) == 0) {
    if (pick(10) == 0) return F::make_const(pick(2) == 0);
    return F::make_var(static_cast<int>(pick(num_vars)));
  }
  switch (pick(4)) {
    case 0:  return F::make_not(random_formula(rng, num_vars, depth - 1));
    case 1:  return F::make(F::Kind::And, random_formula(rng, num_vars, depth - 1),
                            random_formula(rng, num_vars, depth - 1));
    case 2:  return F::make(F::Kind::Or, random_formula(rng, num_vars, depth - 1),
                            random_formula(rng, num_vars, depth - 1));
    default: return F::make(F::Kind::Implies, random_formula(rng, num_vars, depth - 1),
                            random_formula(rng, num_vars, depth - 1));
  }
}

/// Random valid diagram: random topological order, up to max_arrows arrows.
inline nmr::InheritanceDiagram random_diagram(std::mt19937_64& rng, int max_nodes,
                                              int max_arrows) {
  auto pick = [&](std::uint64_t k) { return static_cast<int>(rng() % k); };
  int n = 2 + pick(max_nodes - 1);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::string(1, char('A' + i)));
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[pick(i + 1)]);
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) slots.emplace_back(perm[i], perm[j]);
  for (std::size_t i = slots.size(); i > 1; --i) std::swap(slots[i - 1], slots[pick(i)]);
  int negat = 10 + pick(60);  // percent
  std::vector<nmr::Arrow> arrows;
  int want = pick(max_arrows + 1);
  for (const auto& [from, to] : slots) {
    if (static_cast<int>(arrows.size()) >= want) break;
    arrows.push_back({from, to, pick(100) >= negat});
  }
  return nmr::InheritanceDiagram::build(std::move(names), std::move(arrows));
}

}  // namespace testsupport
