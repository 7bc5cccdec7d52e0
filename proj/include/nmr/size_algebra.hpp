#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nmr/errors.hpp"
#include "nmr/prefstruct.hpp"

namespace nmr {

/// Size of a subset A relative to a nonempty reference set X, generated by
/// minimisation: A is BIG when it contains all minimal elements of X, SMALL
/// when it misses every minimal element, MEDIUM otherwise. BIG and SMALL
/// are dual: A is BIG in X iff X\A is SMALL in X.
enum class SizeClass { Small, Medium, Big };

inline const char* to_string(SizeClass c) {
  switch (c) {
    case SizeClass::Small:  return "SMALL";
    case SizeClass::Medium: return "MEDIUM";
    case SizeClass::Big:    return "BIG";
  }
  return "?";
}

namespace detail {
inline void require_subset_of(const PreferentialStructure& s, Subset a, Subset x,
                              const char* what) {
  if (!is_subset(a, s.universe()))
    throw Error(ErrorCode::NotASubset, std::string(what) + " is not a subset of the universe");
  if (!is_subset(a, x))
    throw Error(ErrorCode::NotASubset, std::string(what) + " " + s.format_subset(a) +
                                           " is not a subset of the reference " + s.format_subset(x));
}
}  // namespace detail

inline SizeClass classify(const PreferentialStructure& s, Subset x, Subset a) {
  if (x == 0) throw Error(ErrorCode::EmptyReference, "reference set is empty");
  detail::require_subset_of(s, x, s.universe(), "reference");
  detail::require_subset_of(s, a, x, "set");
  Subset m = s.mu_unchecked(x);
  if (is_subset(m, a)) return SizeClass::Big;
  if ((m & a) == 0) return SizeClass::Small;
  return SizeClass::Medium;
}

/// A < B relative to X: A is SMALL and B is BIG in X. Without an explicit
/// reference, X defaults to A ∪ B. Not absolute: the same A, B can compare
/// differently under different references.
inline bool less(const PreferentialStructure& s, Subset a, Subset b,
                 std::optional<Subset> x = std::nullopt) {
  Subset ref = x.value_or(a | b);
  if (ref == 0) throw Error(ErrorCode::EmptyReference, "A and B are both empty");
  detail::require_subset_of(s, a, ref, "A");
  detail::require_subset_of(s, b, ref, "B");
  return classify(s, ref, a) == SizeClass::Small && classify(s, ref, b) == SizeClass::Big;
}

/// Refined comparison: A <' B relative to X when either
///   (1) B is BIG and A is SMALL or MEDIUM, or
///   (2) B is MEDIUM and A is SMALL.
/// With the default reference X = A ∪ B, case (2) can never fire: a SMALL A
/// forces B to be BIG in A ∪ B. An explicit larger X can exercise it.
inline bool less_prime(const PreferentialStructure& s, Subset a, Subset b,
                       std::optional<Subset> x = std::nullopt) {
  Subset ref = x.value_or(a | b);
  if (ref == 0) throw Error(ErrorCode::EmptyReference, "A and B are both empty");
  detail::require_subset_of(s, a, ref, "A");
  detail::require_subset_of(s, b, ref, "B");
  SizeClass ca = classify(s, ref, a);
  SizeClass cb = classify(s, ref, b);
  if (cb == SizeClass::Big) return ca != SizeClass::Big;
  if (cb == SizeClass::Medium) return ca == SizeClass::Small;
  return false;
}

/// Length of the longest chain A = C_k ⊆ ... ⊆ C_0 = B where each link
/// C_{i+1} is SMALL in C_i; 0 when A is not SMALL in B at all. The empty
/// set is SMALL in every nonempty set, so A = ∅ still yields a finite
/// maximum (the reference sets of the chain must be nonempty).
inline int small_degree(const PreferentialStructure& s, Subset a, Subset b) {
  if (b == 0) throw Error(ErrorCode::EmptyReference, "B is empty");
  detail::require_subset_of(s, b, s.universe(), "B");
  detail::require_subset_of(s, a, b, "A");
  // best[c] = longest small-chain from a up to c, -1 when none exists
  std::unordered_map<Subset, int> best;
  auto rec = [&](auto&& self, Subset c) -> int {
    if (c == a) return 0;
    if (auto it = best.find(c); it != best.end()) return it->second;
    int r = -1;
    Subset allowed = (c & ~s.mu_unchecked(c)) & ~a;  // candidates C' with A ⊆ C' ∈ I(C)
    if (is_subset(a, c & ~s.mu_unchecked(c))) {
      for_each_subset_of(allowed, [&](Subset extra) {
        int sub = self(self, a | extra);
        if (sub >= 0) r = std::max(r, 1 + sub);
      });
    }
    best[c] = r;
    return r;
  };
  return std::max(0, rec(rec, b));
}

/// Counterexample data attached to a failed check: named subsets plus an
/// optional offending element.
struct Witness {
  std::vector<std::pair<std::string, Subset>> sets;
  std::optional<int> element;
  std::string note;
};

struct SizeVerdict {
  bool holds = true;
  std::optional<Witness> witness;
};

/// Coherence between the size algebras of different reference sets:
/// growing the reference keeps SMALL sets SMALL. Checked through the
/// element-wise equivalent (minimisation shrinks under subsets); see
/// check_muPR for the raw form.
inline SizeVerdict check_coh1(const PreferentialStructure& s) {
  Subset u = s.universe();
  for (Subset y = 1; u && y <= u; ++y) {
    Subset my = s.mu_unchecked(y);
    Subset bad = 0;
    for_each_subset_of(y, [&](Subset x) {
      if (bad || x == 0) return;
      if (Subset v = (my & x) & ~s.mu_unchecked(x); v) bad = x;
    });
    if (bad) {
      Subset x = bad;
      int e = std::countr_zero((my & x) & ~s.mu_unchecked(x));
      return {false, Witness{{{"X", x}, {"Y", y}}, e,
                             "SMALL in the subset but not in the superset"}};
    }
  }
  return {};
}

/// Removing a SMALL set from the reference keeps the other SMALL sets
/// SMALL. Element-wise equivalent: for every B disjoint from mu(X),
/// mu(X\B) ⊆ mu(X) ∪ B.
inline SizeVerdict check_coh2(const PreferentialStructure& s) {
  Subset u = s.universe();
  for (Subset x = 1; u && x <= u; ++x) {
    Subset mx = s.mu_unchecked(x);
    Subset result = 0, witness_b = 0;
    for_each_subset_of(x & ~mx, [&](Subset b) {
      if (result) return;
      Subset m2 = s.mu_unchecked(x & ~b);
      if (Subset v = m2 & ~(mx | b); v) {
        result = v;
        witness_b = b;
      }
    });
    if (result)
      return {false, Witness{{{"X", x}, {"B", witness_b}}, std::countr_zero(result),
                             "minimal after removal but neither minimal before nor removed"}};
  }
  return {};
}

/// mu(Y) ∩ X ⊆ mu(X) for X ⊆ Y: minimal elements stay minimal in subsets.
inline SizeVerdict check_muPR(const PreferentialStructure& s) {
  Subset u = s.universe();
  for (Subset y = 1; u && y <= u; ++y) {
    Subset my = s.mu_unchecked(y);
    Subset bad = 0;
    for_each_subset_of(y, [&](Subset x) {
      if (bad || x == 0) return;
      if ((my & x) & ~s.mu_unchecked(x)) bad = x;
    });
    if (bad)
      return {false, Witness{{{"X", bad}, {"Y", y}},
                             std::countr_zero((my & bad) & ~s.mu_unchecked(bad)),
                             "minimal in the superset but not in the subset"}};
  }
  return {};
}

/// Cumulativity at the mu level: mu(X) ⊆ Y ⊆ X implies mu(Y) = mu(X).
inline SizeVerdict check_muCUM(const PreferentialStructure& s) {
  Subset u = s.universe();
  for (Subset x = 1; u && x <= u; ++x) {
    Subset mx = s.mu_unchecked(x);
    Subset found = 0;
    for_each_subset_of(x & ~mx, [&](Subset extra) {
      if (found) return;
      Subset y = mx | extra;
      if (s.mu_unchecked(y) != mx) found = y;
    });
    if (found)
      return {false, Witness{{{"X", x}, {"Y", found}}, std::nullopt,
                             "Y between mu(X) and X but mu(Y) differs from mu(X)"}};
  }
  return {};
}

/// mu(X) = mu(Y) ∩ X whenever X ⊆ Y meets mu(Y).
inline SizeVerdict check_muEQ(const PreferentialStructure& s) {
  Subset u = s.universe();
  for (Subset y = 1; u && y <= u; ++y) {
    Subset my = s.mu_unchecked(y);
    Subset bad = 0;
    for_each_subset_of(y, [&](Subset x) {
      if (bad || x == 0 || (x & my) == 0) return;
      if (s.mu_unchecked(x) != (my & x)) bad = x;
    });
    if (bad)
      return {false, Witness{{{"X", bad}, {"Y", y}}, std::nullopt,
                             "X meets mu(Y) but mu(X) differs from mu(Y) ∩ X"}};
  }
  return {};
}

}  // namespace nmr
