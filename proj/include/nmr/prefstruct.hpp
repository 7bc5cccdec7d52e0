#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nmr/errors.hpp"

namespace nmr {

/// A subset of the universe, element i at bit i. The universe is capped at
/// 16 elements, so subset enumeration (2^n) and per-subset tables stay cheap.
using Subset = std::uint32_t;

inline constexpr int kMaxElements = 16;

inline int set_size(Subset a) { return std::popcount(a); }
inline bool is_subset(Subset a, Subset b) { return (a & ~b) == 0; }
inline bool is_proper_subset(Subset a, Subset b) { return a != b && is_subset(a, b); }

/// Invoke fn(s) for every subset s of mask, ascending in the usual
/// sub-mask order starting from the empty set.
template <typename Fn>
void for_each_subset_of(Subset mask, Fn&& fn) {
  Subset s = 0;
  while (true) {
    fn(s);
    if (s == mask) break;
    s = (s - mask) & mask;  // next subset of mask
  }
}

/// Finite strict preference relation over named elements. A pair (b, a)
/// reads "b is preferred to a" (b beats a, written b ≺ a); minimisation
/// keeps the unbeaten elements. The relation must be irreflexive and
/// acyclic; transitivity, smoothness and rankedness are properties a given
/// structure may or may not have and are queried, never assumed.
///
/// Immutable after construction; all members are const-safe and the type
/// can be shared across threads freely.
class PreferentialStructure {
 public:
  /// Validating constructor from named pairs (beater first).
  static PreferentialStructure build(const std::vector<std::string>& names,
                                     const std::vector<std::pair<std::string, std::string>>& pairs) {
    if (names.size() > kMaxElements)
      throw Error(ErrorCode::CapacityExceeded,
                  "at most " + std::to_string(kMaxElements) + " elements supported, got " +
                      std::to_string(names.size()));
    PreferentialStructure s;
    s.names_ = names;
    for (std::size_t i = 0; i < names.size(); ++i) {
      for (std::size_t j = i + 1; j < names.size(); ++j)
        if (names[i] == names[j])
          throw Error(ErrorCode::DuplicateName, "element '" + names[i] + "' declared twice");
    }
    s.beaters_.assign(names.size(), 0);
    s.beats_.assign(names.size(), 0);
    for (const auto& [winner, loser] : pairs) {
      int w = s.find(winner);
      if (w < 0) throw Error(ErrorCode::UnknownName, "unknown element '" + winner + "'");
      int l = s.find(loser);
      if (l < 0) throw Error(ErrorCode::UnknownName, "unknown element '" + loser + "'");
      if (w == l)
        throw Error(ErrorCode::ReflexivePair, "element '" + winner + "' cannot beat itself");
      s.beaters_[l] |= Subset(1) << w;
      s.beats_[w] |= Subset(1) << l;
    }
    s.check_acyclic();
    return s;
  }

  /// Constructor from adjacency masks: beaters[i] = set of elements beating i.
  /// Used by the enumeration sweeps; validates the same invariants.
  static PreferentialStructure from_relation(std::vector<std::string> names,
                                             std::vector<Subset> beaters) {
    if (names.size() > kMaxElements)
      throw Error(ErrorCode::CapacityExceeded, "too many elements");
    PreferentialStructure s;
    s.names_ = std::move(names);
    s.beaters_ = std::move(beaters);
    s.beats_.assign(s.names_.size(), 0);
    for (int i = 0; i < s.n(); ++i) {
      if (s.beaters_[i] & (Subset(1) << i))
        throw Error(ErrorCode::ReflexivePair, "element '" + s.names_[i] + "' beats itself");
      for (int j = 0; j < s.n(); ++j)
        if (s.beaters_[i] & (Subset(1) << j)) s.beats_[j] |= Subset(1) << i;
    }
    s.check_acyclic();
    return s;
  }

  int n() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  Subset universe() const { return n() == 0 ? 0 : (Subset(1) << n()) - 1; }

  /// mask of elements beating element i
  Subset beaters(int i) const { return beaters_[i]; }
  /// mask of elements beaten by element i
  Subset beats(int i) const { return beats_[i]; }

  int find(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<int>(i);
    return -1;
  }

  int element(const std::string& name) const {
    int i = find(name);
    if (i < 0) throw Error(ErrorCode::UnknownName, "unknown element '" + name + "'");
    return i;
  }

  Subset subset(const std::vector<std::string>& members) const {
    Subset s = 0;
    for (const auto& m : members) s |= Subset(1) << element(m);
    return s;
  }

  std::vector<std::string> names_of(Subset a) const {
    std::vector<std::string> out;
    for (int i = 0; i < n(); ++i)
      if (a & (Subset(1) << i)) out.push_back(names_[i]);
    return out;
  }

  std::string format_subset(Subset a) const {
    std::string out = "{";
    bool first = true;
    for (int i = 0; i < n(); ++i)
      if (a & (Subset(1) << i)) {
        if (!first) out += ",";
        out += names_[i];
        first = false;
      }
    return out + "}";
  }

  /// Minimal (unbeaten-within-A) elements. Nonempty for every nonempty A:
  /// with an acyclic relation on a finite carrier every subset has an
  /// unbeaten element.
  Subset mu(Subset a) const {
    if (a == 0) throw Error(ErrorCode::EmptyInput, "mu of the empty set");
    if (!is_subset(a, universe())) throw Error(ErrorCode::NotASubset, "argument not a subset of the universe");
    return mu_unchecked(a);
  }

  /// Same, no precondition checks; mu(0) = 0. Hot path for sweeps.
  Subset mu_unchecked(Subset a) const {
    Subset m = 0;
    for (Subset rest = a; rest;) {
      int i = std::countr_zero(rest);
      rest &= rest - 1;
      if ((beaters_[i] & a) == 0) m |= Subset(1) << i;
    }
    return m;
  }

  /// mu for every subset of the universe, indexed by mask.
  std::vector<Subset> mu_table() const {
    std::vector<Subset> t(std::size_t(1) << n());
    for (Subset a = 0; a < t.size(); ++a) t[a] = mu_unchecked(a);
    return t;
  }

  bool is_transitive() const {
    for (int a = 0; a < n(); ++a)
      for (Subset rest = beats_[a]; rest;) {
        int b = std::countr_zero(rest);
        rest &= rest - 1;
        if (!is_subset(beats_[b], beats_[a])) return false;
      }
    return true;
  }

  /// Every non-minimal element of every nonempty subset is beaten by a
  /// minimal element of that subset.
  bool is_smooth() const {
    Subset u = universe();
    for (Subset a = 1; a <= u && u; ++a) {
      Subset m = mu_unchecked(a);
      for (Subset rest = a & ~m; rest;) {
        int x = std::countr_zero(rest);
        rest &= rest - 1;
        if ((beaters_[x] & m) == 0) return false;
      }
    }
    return true;
  }

  /// Incomparability propagates: if x and x' are incomparable then they
  /// beat exactly the same elements and are beaten by exactly the same
  /// elements. Equivalent formulation of the usual layered picture.
  bool is_ranked() const {
    for (int x = 0; x < n(); ++x)
      for (int y = x + 1; y < n(); ++y) {
        Subset bx = Subset(1) << x, by = Subset(1) << y;
        bool comparable = (beats_[x] & by) || (beats_[y] & bx);
        if (comparable) continue;
        if (beats_[x] != beats_[y] || beaters_[x] != beaters_[y]) return false;
      }
    return true;
  }

  /// Layer index of an element in a ranked structure: 0 for globally
  /// unbeaten elements, and x beats y iff rank_of(x) < rank_of(y).
  int rank_of(int x) const {
    require_ranked();
    return rank_unchecked(x);
  }

  /// Rank of the minimal elements of A (the best layer A reaches).
  int rank_of_set(Subset a) const {
    require_ranked();
    if (a == 0) throw Error(ErrorCode::EmptyInput, "rank of the empty set");
    if (!is_subset(a, universe())) throw Error(ErrorCode::NotASubset, "argument not a subset of the universe");
    int best = kMaxElements + 1;
    for (int i = 0; i < n(); ++i)
      if (a & (Subset(1) << i)) best = std::min(best, rank_unchecked(i));
    return best;
  }

  std::vector<std::pair<std::string, std::string>> pairs() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (int w = 0; w < n(); ++w)
      for (int l = 0; l < n(); ++l)
        if (beats_[w] & (Subset(1) << l)) out.emplace_back(names_[w], names_[l]);
    return out;
  }

 private:
  PreferentialStructure() = default;

  void require_ranked() const {
    if (!is_ranked()) throw Error(ErrorCode::NotRanked, "structure is not ranked");
  }

  // longest beater chain ending at x; in a ranked structure this is the
  // layer index because every element of every lower layer beats x
  int rank_unchecked(int x) const {
    int r = 0;
    for (Subset rest = beaters_[x]; rest;) {
      int b = std::countr_zero(rest);
      rest &= rest - 1;
      r = std::max(r, rank_unchecked(b) + 1);
    }
    return r;
  }

  void check_acyclic() const {
    // Kahn elimination; on failure walk the leftover subgraph for a witness.
    Subset alive = universe();
    bool changed = true;
    while (alive && changed) {
      changed = false;
      for (Subset rest = alive; rest;) {
        int i = std::countr_zero(rest);
        rest &= rest - 1;
        if ((beaters_[i] & alive) == 0) {
          alive &= ~(Subset(1) << i);
          changed = true;
        }
      }
    }
    if (!alive) return;
    // every element left is beaten within `alive`; follow beaters until an
    // element repeats, then report the loop
    std::vector<int> path;
    std::vector<int> seen_at(n(), -1);
    int cur = std::countr_zero(alive);
    while (seen_at[cur] < 0) {
      seen_at[cur] = static_cast<int>(path.size());
      path.push_back(cur);
      cur = std::countr_zero(beaters_[cur] & alive);
    }
    std::ostringstream msg;
    msg << "preference cycle: ";
    for (std::size_t i = seen_at[cur]; i < path.size(); ++i) msg << names_[path[i]] << " beats ";
    msg << names_[cur];
    throw Error(ErrorCode::CycleDetected, msg.str());
  }

  std::vector<std::string> names_;
  std::vector<Subset> beaters_;
  std::vector<Subset> beats_;
};

/// Text format, one item per line, '#' starts a comment:
///   elements: a b c
///   prefers: x y        (x beats y)
/// Parse errors carry 1-based line numbers.
inline PreferentialStructure parse_structure(const std::string& text) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::pair<int, std::pair<std::string, std::string>>> pair_lines;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_elements = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
    if (head == "elements:") {
      std::string name;
      while (ls >> name) {
        if (std::find(names.begin(), names.end(), name) != names.end())
          throw Error(ErrorCode::DuplicateName, where() + "element '" + name + "' declared twice");
        names.push_back(name);
      }
      have_elements = true;
    } else if (head == "prefers:") {
      if (!have_elements)
        throw Error(ErrorCode::SyntaxError, where() + "'prefers:' before any 'elements:' line");
      std::string w, l, extra;
      if (!(ls >> w >> l))
        throw Error(ErrorCode::SyntaxError, where() + "'prefers:' needs two element names");
      if (ls >> extra)
        throw Error(ErrorCode::SyntaxError, where() + "trailing token '" + extra + "'");
      pairs.emplace_back(w, l);
      pair_lines.push_back({lineno, {w, l}});
    } else {
      throw Error(ErrorCode::SyntaxError, where() + "expected 'elements:' or 'prefers:', got '" + head + "'");
    }
  }
  if (!have_elements) throw Error(ErrorCode::SyntaxError, "no 'elements:' line");
  try {
    return PreferentialStructure::build(names, pairs);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnknownName || e.code() == ErrorCode::ReflexivePair) {
      // attribute the failure to its line
      for (const auto& [ln, p] : pair_lines) {
        try {
          PreferentialStructure::build(names, {p});
        } catch (const Error& inner) {
          if (inner.code() == e.code())
            throw Error(e.code(), "line " + std::to_string(ln) + ": " + inner.what());
        }
      }
    }
    throw;
  }
}

}  // namespace nmr
