#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nmr/errors.hpp"
#include "nmr/fact_verifiers.hpp"
#include "nmr/prefstruct.hpp"

namespace nmr {

inline constexpr int kMaxEnumerationElements = 5;  // 2^(n(n-1)) relation candidates

inline std::vector<std::string> default_names(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::string(1, char('a' + i)));
  return names;
}

inline bool is_acyclic_relation(int n, const std::vector<Subset>& beaters) {
  Subset alive = n ? (Subset(1) << n) - 1 : 0;
  bool changed = true;
  while (alive && changed) {
    changed = false;
    for (int i = 0; i < n; ++i)
      if ((alive >> i) & 1)
        if ((beaters[i] & alive) == 0) {
          alive &= ~(Subset(1) << i);
          changed = true;
        }
  }
  return alive == 0;
}

/// All irreflexive acyclic relations on n named elements, in a fixed
/// deterministic order (relation bitmask ascending).
template <typename Fn>
void for_each_acyclic_structure(int n, Fn&& fn) {
  if (n > kMaxEnumerationElements)
    throw Error(ErrorCode::CapacityExceeded,
                "exhaustive enumeration supports at most " +
                    std::to_string(kMaxEnumerationElements) + " elements");
  auto names = default_names(n);
  int npairs = n * (n - 1);
  std::vector<std::pair<int, int>> pairs;  // (winner, loser)
  for (int w = 0; w < n; ++w)
    for (int l = 0; l < n; ++l)
      if (w != l) pairs.emplace_back(w, l);
  std::vector<Subset> beaters(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << npairs); ++mask) {
    std::fill(beaters.begin(), beaters.end(), 0);
    for (int p = 0; p < npairs; ++p)
      if ((mask >> p) & 1) beaters[pairs[p].second] |= Subset(1) << pairs[p].first;
    if (!is_acyclic_relation(n, beaters)) continue;
    fn(PreferentialStructure::from_relation(names, beaters));
  }
}

namespace detail {
// modulo draw; sequence stability matters here, distribution quality does not
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t k) { return rng() % k; }
}  // namespace detail

/// Random acyclic structure: random topological order plus a per-structure
/// edge density, so the sample mixes sparse, dense, transitive and
/// non-transitive relations.
inline PreferentialStructure random_structure(std::mt19937_64& rng, int max_n) {
  int n = 1 + static_cast<int>(detail::bounded(rng, max_n));
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[detail::bounded(rng, i + 1)]);
  std::uint64_t density = detail::bounded(rng, 101);
  std::vector<Subset> beaters(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (detail::bounded(rng, 100) < density)
        beaters[perm[j]] |= Subset(1) << perm[i];
  return PreferentialStructure::from_relation(default_names(n), beaters);
}

/// Random ranked structure: random layer assignment, x beats y iff the
/// layer of x is lower. Every ranked acyclic relation has this shape.
inline PreferentialStructure random_ranked_structure(std::mt19937_64& rng, int max_n) {
  int n = 1 + static_cast<int>(detail::bounded(rng, max_n));
  int layers = 1 + static_cast<int>(detail::bounded(rng, n));
  std::vector<int> layer(n);
  for (int i = 0; i < n; ++i) layer[i] = static_cast<int>(detail::bounded(rng, layers));
  std::vector<Subset> beaters(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (layer[j] < layer[i]) beaters[i] |= Subset(1) << j;
  return PreferentialStructure::from_relation(default_names(n), beaters);
}

enum class StructureClass { All, Smooth, NonSmooth, Ranked, NonRanked, Transitive };

inline std::optional<StructureClass> structure_class_from_string(const std::string& s) {
  if (s == "all") return StructureClass::All;
  if (s == "smooth") return StructureClass::Smooth;
  if (s == "nonsmooth") return StructureClass::NonSmooth;
  if (s == "ranked") return StructureClass::Ranked;
  if (s == "nonranked") return StructureClass::NonRanked;
  if (s == "transitive") return StructureClass::Transitive;
  return std::nullopt;
}

inline bool in_structure_class(const PreferentialStructure& s, StructureClass c) {
  switch (c) {
    case StructureClass::All:        return true;
    case StructureClass::Smooth:     return s.is_smooth();
    case StructureClass::NonSmooth:  return !s.is_smooth();
    case StructureClass::Ranked:     return s.is_ranked();
    case StructureClass::NonRanked:  return !s.is_ranked();
    case StructureClass::Transitive: return s.is_transitive();
  }
  return true;
}

struct SweepOptions {
  int exhaustive_max = 4;    // enumerate every structure up to this size
  int samples = 0;           // seeded random structures on top
  int sample_max = 7;
  int ranked_samples = 0;    // extra seeded ranked structures
  std::uint64_t seed = 42;
  StructureClass cls = StructureClass::All;
};

/// Visit the sweep population in a deterministic order: exhaustive sizes
/// first, then the random sample, then the ranked sample.
template <typename Fn>
void for_each_sweep_structure(const SweepOptions& o, Fn&& fn) {
  auto visit = [&](const PreferentialStructure& s) {
    if (in_structure_class(s, o.cls)) fn(s);
  };
  for (int n = 1; n <= o.exhaustive_max; ++n)
    for_each_acyclic_structure(n, visit);
  std::mt19937_64 rng(o.seed);
  for (int i = 0; i < o.samples; ++i) visit(random_structure(rng, o.sample_max));
  for (int i = 0; i < o.ranked_samples; ++i) visit(random_ranked_structure(rng, o.sample_max));
}

struct FactFailure {
  PreferentialStructure structure;
  FactVerdict verdict;
};

struct FactSweepEntry {
  FactId fact;
  long structures = 0;  // structures visited
  long holds = 0;       // hypothesis met, statement verified
  long fails = 0;       // hypothesis met, counterexample found
  long vacuous = 0;     // hypothesis not met (statement not counted)
  std::optional<FactFailure> first_failure;         // counts against the fact
  std::optional<FactFailure> first_off_hypothesis;  // vacuous, witness anyway
};

/// Run the chosen facts over the sweep population. RK and TRANS_RANK are
/// rank-dependent and count non-ranked structures as vacuous.
inline std::vector<FactSweepEntry> run_fact_sweep(const std::vector<FactId>& facts,
                                                  const SweepOptions& o) {
  std::vector<FactSweepEntry> out(facts.size());
  for (std::size_t i = 0; i < facts.size(); ++i) out[i].fact = facts[i];
  for_each_sweep_structure(o, [&](const PreferentialStructure& s) {
    bool ranked = s.is_ranked();
    for (auto& entry : out) {
      ++entry.structures;
      if ((entry.fact == FactId::Rk || entry.fact == FactId::TransRank) && !ranked) {
        ++entry.vacuous;
        continue;
      }
      FactVerdict v = verify_fact(s, entry.fact);
      switch (v.status) {
        case FactStatus::Holds:
          ++entry.holds;
          break;
        case FactStatus::Fails:
          ++entry.fails;
          if (!entry.first_failure) entry.first_failure = FactFailure{s, v};
          break;
        case FactStatus::Vacuous:
          ++entry.vacuous;
          if (v.witness && !entry.first_off_hypothesis)
            entry.first_off_hypothesis = FactFailure{s, v};
          break;
      }
    }
  });
  return out;
}

}  // namespace nmr
