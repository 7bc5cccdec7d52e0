#pragma once

#include <array>
#include <climits>
#include <optional>
#include <string>
#include <vector>

#include "nmr/bitvec.hpp"
#include "nmr/errors.hpp"
#include "nmr/prefstruct.hpp"
#include "nmr/size_algebra.hpp"

namespace nmr {

/// Verifiable statements about the size relations of a single structure.
/// Each runs an exhaustive search over the relevant subset quantifiers.
enum class FactId {
  Subset,             // BIG is reference-stable and < transfers to BIG subsets
  Coher,              // the coherence checkers agree with their element forms
  LessTrans,          // < is transitive (on smooth structures)
  Rk,                 // <' matches the rank characterisation (ranked structures)
  TransRank,          // <' is transitive (on ranked structures)
  LessM,              // < survives replacing either side by a MEDIUM subset (ranked)
  TriangleCorollary,  // two sets cannot each be mostly inside the other while disagreeing on a third
};

inline const char* to_string(FactId f) {
  switch (f) {
    case FactId::Subset:            return "SUBSET";
    case FactId::Coher:             return "COHER";
    case FactId::LessTrans:         return "LESS_TRANS";
    case FactId::Rk:                return "RK";
    case FactId::TransRank:         return "TRANS_RANK";
    case FactId::LessM:             return "LESS_M";
    case FactId::TriangleCorollary: return "TRIANGLE_COROLLARY";
  }
  return "?";
}

inline std::optional<FactId> fact_from_string(const std::string& s) {
  for (FactId f : {FactId::Subset, FactId::Coher, FactId::LessTrans, FactId::Rk,
                   FactId::TransRank, FactId::LessM, FactId::TriangleCorollary})
    if (s == to_string(f)) return f;
  return std::nullopt;
}

inline std::vector<FactId> all_facts() {
  return {FactId::Subset, FactId::Coher, FactId::LessTrans, FactId::Rk,
          FactId::TransRank, FactId::LessM, FactId::TriangleCorollary};
}

/// HOLDS: hypothesis met, no counterexample.
/// FAILS: hypothesis met, counterexample attached.
/// VACUOUS: hypothesis not met; the statement was still searched and a
/// counterexample, if any, is attached for reporting (it does not count
/// against the fact).
enum class FactStatus { Holds, Fails, Vacuous };

inline const char* to_string(FactStatus s) {
  switch (s) {
    case FactStatus::Holds:   return "holds";
    case FactStatus::Fails:   return "fails";
    case FactStatus::Vacuous: return "vacuous";
  }
  return "?";
}

struct FactVerdict {
  FactId fact;
  FactStatus status;
  bool hypothesis_met = true;
  std::optional<Witness> witness;
};

inline constexpr int kMaxVerifyElements = 10;  // powerset tables are 4^n bits

namespace detail {

struct SizeTables {
  explicit SizeTables(const PreferentialStructure& s)
      : n(s.n()), count(std::size_t(1) << s.n()), mu(s.mu_table()) {}

  bool small_in(Subset a, Subset ref) const { return (a & mu[ref]) == 0; }
  bool big_in(Subset a, Subset ref) const { return is_subset(mu[ref], a); }
  bool medium_in(Subset a, Subset ref) const { return !small_in(a, ref) && !big_in(a, ref); }

  bool less(Subset a, Subset b) const {  // default reference a|b, which is nonempty unless both are
    Subset ref = a | b;
    return ref && small_in(a, ref) && big_in(b, ref);
  }
  bool less_prime(Subset a, Subset b, Subset ref) const {
    if (big_in(b, ref)) return !big_in(a, ref);
    if (medium_in(b, ref)) return small_in(a, ref);
    return false;
  }
  bool less_prime(Subset a, Subset b) const {
    Subset ref = a | b;
    return ref && less_prime(a, b, ref);
  }

  // row[a] over b: a < b; col[b] over a: a < b
  void build_less_rows() {
    less_row.assign(count, Bitvec(count));
    less_col.assign(count, Bitvec(count));
    for (Subset a = 0; a < count; ++a)
      for (Subset b = 0; b < count; ++b)
        if (less(a, b)) {
          less_row[a].set(b);
          less_col[b].set(a);
        }
  }
  void build_less_prime_rows() {
    lp_row.assign(count, Bitvec(count));
    for (Subset a = 0; a < count; ++a)
      for (Subset b = 0; b < count; ++b)
        if (less_prime(a, b)) lp_row[a].set(b);
  }

  int n;
  std::size_t count;
  std::vector<Subset> mu;
  std::vector<Bitvec> less_row, less_col, lp_row;
};

inline std::size_t first_diff(const Bitvec& a, const Bitvec& b) {
  Bitvec d = (a - b) | (b - a);
  return d.next_set(0);
}

// transitivity of a relation given as rows; returns witness (a, b, c)
inline std::optional<std::array<Subset, 3>> transitivity_gap(const std::vector<Bitvec>& row) {
  for (Subset a = 0; a < row.size(); ++a)
    for (std::size_t b = row[a].next_set(0); b < row[a].size(); b = row[a].next_set(b + 1))
      if (!row[b].subset_of(row[a])) {
        Subset c = static_cast<Subset>((row[b] - row[a]).next_set(0));
        return std::array<Subset, 3>{a, static_cast<Subset>(b), c};
      }
  return std::nullopt;
}

}  // namespace detail

inline FactVerdict verify_fact(const PreferentialStructure& s, FactId fact) {
  if (s.n() > kMaxVerifyElements)
    throw Error(ErrorCode::CapacityExceeded,
                "fact verification quantifies over the powerset; at most " +
                    std::to_string(kMaxVerifyElements) + " elements supported");

  const bool ranked = s.is_ranked();
  if ((fact == FactId::Rk || fact == FactId::TransRank) && !ranked)
    throw Error(ErrorCode::NotRanked, std::string(to_string(fact)) + " needs a ranked structure");

  detail::SizeTables t(s);
  const Subset u = s.universe();
  FactVerdict v{fact, FactStatus::Holds, true, std::nullopt};
  auto fail = [&](Witness w) {
    if (!v.witness) v.witness = std::move(w);
  };

  switch (fact) {
    case FactId::LessTrans: {
      v.hypothesis_met = s.is_smooth();
      t.build_less_rows();
      if (auto g = detail::transitivity_gap(t.less_row))
        fail({{{"A", (*g)[0]}, {"B", (*g)[1]}, {"C", (*g)[2]}}, std::nullopt,
              "A < B and B < C but not A < C"});
      break;
    }

    case FactId::TransRank: {
      t.build_less_prime_rows();
      if (auto g = detail::transitivity_gap(t.lp_row))
        fail({{{"A", (*g)[0]}, {"B", (*g)[1]}, {"C", (*g)[2]}}, std::nullopt,
              "A <' B and B <' C but not A <' C"});
      break;
    }

    case FactId::Rk: {
      std::vector<int> rk(s.n());
      for (int i = 0; i < s.n(); ++i) rk[i] = s.rank_of(i);
      auto rkmin = [&](Subset a) {
        int best = INT_MAX;  // empty set ranks below everything
        for (Subset rest = a; rest;) {
          int i = std::countr_zero(rest);
          rest &= rest - 1;
          best = std::min(best, rk[i]);
        }
        return best;
      };
      // relative form: within any reference X, A <' B iff B reaches the best
      // layer of X and either A does not, or both do and mu(A) ⊊ mu(B) = mu(X)
      for (Subset x = 1; u && x <= u && !v.witness; ++x) {
        int rx = rkmin(x);
        for_each_subset_of(x, [&](Subset a) {
          if (v.witness) return;
          for_each_subset_of(x, [&](Subset b) {
            if (v.witness || (a == 0 && b == 0)) return;
            bool lhs = t.less_prime(a, b, x);
            int ra = rkmin(a), rb = rkmin(b);
            bool rhs = (rb < ra && rb == rx) ||
                       (rb == ra && ra == rx && t.mu[b] == t.mu[x] &&
                        is_proper_subset(t.mu[a], t.mu[b]));
            if (lhs != rhs)
              fail({{{"X", x}, {"A", a}, {"B", b}}, std::nullopt,
                    lhs ? "A <' B in X but the rank characterisation denies it"
                        : "rank characterisation affirms A <' B in X but <' denies it"});
          });
        });
      }
      // absolute form over the default reference
      for (Subset a = 0; a <= u && u && !v.witness; ++a)
        for (Subset b = 0; b <= u; ++b) {
          if ((a | b) == 0) continue;
          bool lhs = t.less_prime(a, b);
          int ra = rkmin(a), rb = rkmin(b);
          bool rhs = rb < ra || (rb == ra && is_proper_subset(t.mu[a], t.mu[b]));
          if (lhs != rhs) {
            fail({{{"A", a}, {"B", b}}, std::nullopt,
                  "absolute rank characterisation of <' disagrees"});
            break;
          }
        }
      break;
    }

    case FactId::LessM: {
      // Needs rankedness: on merely smooth structures replacing the BIG side
      // by a MEDIUM subset can break <.
      v.hypothesis_met = ranked;
      t.build_less_rows();
      // non-BIG subsets of x, as a row over subsets
      std::vector<Bitvec> non_big(t.count, Bitvec(t.count));
      for (Subset x = 0; x < t.count; ++x)
        for_each_subset_of(x, [&](Subset a) {
          if (!t.big_in(a, x)) non_big[x].set(a);
        });
      for (Subset y = 1; u && y <= u && !v.witness; ++y) {
        for_each_subset_of(y, [&](Subset yp) {
          if (v.witness || !t.medium_in(yp, y)) return;
          // every X below Y stays below Y'
          if (!t.less_col[y].subset_of(t.less_col[yp])) {
            Subset x = static_cast<Subset>((t.less_col[y] - t.less_col[yp]).next_set(0));
            fail({{{"X", x}, {"Y", y}, {"Y'", yp}}, std::nullopt,
                  "X < Y and Y' MEDIUM in Y but not X < Y'"});
            return;
          }
          // and every non-BIG subset of such an X sits below Y' as well
          for (std::size_t x = t.less_col[y].next_set(0); x < t.count;
               x = t.less_col[y].next_set(x + 1)) {
            if (!non_big[x].subset_of(t.less_col[yp])) {
              Subset xp = static_cast<Subset>((non_big[x] - t.less_col[yp]).next_set(0));
              fail({{{"X", static_cast<Subset>(x)}, {"X'", xp}, {"Y", y}, {"Y'", yp}},
                    std::nullopt, "X < Y, X' not BIG in X, Y' MEDIUM in Y, but not X' < Y'"});
              return;
            }
          }
        });
      }
      break;
    }

    case FactId::Subset: {
      v.hypothesis_met = check_coh1(s).holds && check_coh2(s).holds;
      // part 1: for X BIG in X', a set is mostly in A judged inside X iff it
      // is judged so inside X'
      for (Subset xp = 1; u && xp <= u && !v.witness; ++xp) {
        Subset mxp = t.mu[xp];
        for_each_subset_of(xp & ~mxp, [&](Subset extra) {
          if (v.witness) return;
          Subset x = mxp | extra;
          for_each_subset_of(xp, [&](Subset a) {
            if (v.witness) return;
            if (t.big_in(x & a, x) != t.big_in(xp & a, xp))
              fail({{{"X", x}, {"X'", xp}, {"A", a}}, std::nullopt,
                    "X BIG in X' but A is judged differently by the two references"});
          });
        });
      }
      if (v.witness) break;
      // part 2: replacing either side of < by a BIG subset never changes the
      // comparison; row (left side) and column (right side) stability
      t.build_less_rows();
      for (Subset x = 1; u && x <= u && !v.witness; ++x) {
        Subset mx = t.mu[x];
        for_each_subset_of(x & ~mx, [&](Subset extra) {
          if (v.witness) return;
          Subset xp = mx | extra;  // xp BIG in x
          if (!(t.less_row[x] == t.less_row[xp])) {
            Subset y = static_cast<Subset>(detail::first_diff(t.less_row[x], t.less_row[xp]));
            fail({{{"X", x}, {"X'", xp}, {"Y", y}}, std::nullopt,
                  "X' BIG in X but X < Y and X' < Y disagree"});
            return;
          }
          if (!(t.less_col[x] == t.less_col[xp])) {
            Subset y = static_cast<Subset>(detail::first_diff(t.less_col[x], t.less_col[xp]));
            fail({{{"Y", y}, {"X", x}, {"X'", xp}}, std::nullopt,
                  "X' BIG in X but Y < X and Y < X' disagree"});
          }
        });
      }
      break;
    }

    case FactId::Coher: {
      SizeVerdict coh1 = check_coh1(s), coh2 = check_coh2(s);
      SizeVerdict mupr = check_muPR(s), mucum = check_muCUM(s);
      if (coh1.holds != mupr.holds)
        fail({{}, std::nullopt, "coh1 and its element form disagree"});
      else if (mucum.holds && !coh2.holds)
        fail({*coh2.witness});
      else if (coh1.holds && coh2.holds && !mucum.holds)
        fail({*mucum.witness});
      break;
    }

    case FactId::TriangleCorollary: {
      // B mostly in C and C mostly in B, while some A separates them
      // (mu(B) inside A, mu(C) outside A): impossible. A = mu(B) witnesses
      // the separation whenever one exists, so quantifying pairs suffices.
      for (Subset b = 1; u && b <= u && !v.witness; ++b)
        for (Subset c = 1; c <= u; ++c) {
          if (is_subset(t.mu[c], b) && is_subset(t.mu[b], c) && (t.mu[b] & t.mu[c]) == 0) {
            fail({{{"B", b}, {"C", c}, {"A", t.mu[b]}}, std::nullopt,
                  "mutual mostly-in with disjoint minimal sets"});
            break;
          }
        }
      break;
    }
  }

  if (!v.hypothesis_met)
    v.status = FactStatus::Vacuous;
  else
    v.status = v.witness ? FactStatus::Fails : FactStatus::Holds;
  return v;
}

/// A SMALL in A ∪ B forces B BIG in A ∪ B (one direction only; A = B is a
/// counterexample to the converse on any structure).
inline SizeVerdict check_remark_less(const PreferentialStructure& s) {
  Subset u = s.universe();
  for (Subset a = 0; u && a <= u; ++a)
    for (Subset b = 0; b <= u; ++b) {
      Subset ref = a | b;
      if (ref == 0) continue;
      Subset m = s.mu_unchecked(ref);
      if ((a & m) == 0 && !is_subset(m, b))
        return {false, Witness{{{"A", a}, {"B", b}}, std::nullopt,
                               "A SMALL in A ∪ B but B not BIG"}};
    }
  return {};
}

/// First (A, B) with B BIG in A ∪ B but A not SMALL, demonstrating that the
/// converse of the remark fails; exists whenever the universe is nonempty.
inline std::optional<std::pair<Subset, Subset>> remark_less_converse_gap(
    const PreferentialStructure& s) {
  Subset u = s.universe();
  for (Subset a = 0; u && a <= u; ++a)
    for (Subset b = 0; b <= u; ++b) {
      Subset ref = a | b;
      if (ref == 0) continue;
      Subset m = s.mu_unchecked(ref);
      if (is_subset(m, b) && (a & m) != 0) return std::make_pair(a, b);
    }
  return std::nullopt;
}

}  // namespace nmr
