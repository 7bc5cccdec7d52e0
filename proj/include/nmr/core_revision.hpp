#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nmr/errors.hpp"
#include "nmr/formula.hpp"

namespace nmr {

/// Pluggable distance between truth assignments. Construction validates
/// symmetry, d(x,x) = 0, and positive definiteness - exhaustively for up to
/// 8 variables, by seeded sampling above that.
class DistanceFn {
 public:
  using Fn = std::function<std::uint32_t(Assignment, Assignment)>;

  static DistanceFn hamming() {
    DistanceFn d;
    d.name_ = "hamming";
    d.fn_ = [](Assignment a, Assignment b) {
      return static_cast<std::uint32_t>(std::popcount(a ^ b));
    };
    return d;
  }

  static DistanceFn checked(std::string name, Fn fn, int num_vars, std::uint64_t seed = 42) {
    DistanceFn d;
    d.name_ = std::move(name);
    d.fn_ = std::move(fn);
    auto verify = [&](Assignment x, Assignment y) {
      if (d.fn_(x, x) != 0)
        throw Error(ErrorCode::InvalidDistance, d.name_ + ": d(x,x) != 0");
      if (d.fn_(x, y) != d.fn_(y, x))
        throw Error(ErrorCode::InvalidDistance, d.name_ + ": not symmetric");
      if (x != y && d.fn_(x, y) == 0)
        throw Error(ErrorCode::InvalidDistance, d.name_ + ": distinct points at distance 0");
    };
    Assignment count = Assignment(1) << num_vars;
    if (num_vars <= 8) {
      for (Assignment x = 0; x < count; ++x)
        for (Assignment y = x; y < count; ++y) verify(x, y);
    } else {
      std::mt19937_64 rng(seed);
      for (int i = 0; i < 4096; ++i) verify(rng() % count, rng() % count);
    }
    return d;
  }

  const std::string& name() const { return name_; }
  std::uint32_t operator()(Assignment a, Assignment b) const { return fn_(a, b); }

 private:
  DistanceFn() = default;
  std::string name_;
  Fn fn_;
};

/// Distance from x to the nearest assignment outside X; nullopt (infinite)
/// when X is the whole universe.
inline std::optional<std::uint32_t> depth_point(const ModelSet& x_set, Assignment x,
                                                const DistanceFn& d) {
  if (!x_set.contains(x))
    throw Error(ErrorCode::NotAMember, "assignment is not a member of the set");
  std::optional<std::uint32_t> best;
  ModelSet outside = x_set.complemented();
  for (Assignment y : outside.members()) {
    std::uint32_t v = d(x, y);
    if (!best || v < *best) best = v;
  }
  return best;
}

/// Depth of the whole set: its deepest point.
inline std::optional<std::uint32_t> depth_set(const ModelSet& x_set, const DistanceFn& d) {
  if (x_set.empty()) throw Error(ErrorCode::EmptyInput, "depth of the empty set");
  std::optional<std::uint32_t> best = 0;
  for (Assignment x : x_set.members()) {
    auto v = depth_point(x_set, x, d);
    if (!v) return std::nullopt;  // X is the universe
    if (*v > *best) best = v;
  }
  return best;
}

/// Keep the points whose depth is at least depth(X)/m (exact integer
/// comparison m*depth(x) >= depth(X)). m = 1 keeps only the deepest
/// points; larger m keeps shallower ones too. The whole universe is its
/// own core (everything is infinitely deep).
inline ModelSet core(const ModelSet& x_set, unsigned m, const DistanceFn& d) {
  assert(m >= 1);
  if (x_set.empty()) throw Error(ErrorCode::EmptyInput, "core of the empty set");
  if (x_set.is_universe()) return x_set;
  std::uint64_t dx = *depth_set(x_set, d);
  ModelSet out(x_set.num_vars());
  for (Assignment x : x_set.members())
    if (std::uint64_t(m) * *depth_point(x_set, x, d) >= dx) out.add(x);
  return out;
}

/// Distance revision: the members of X closest to Y. Empty Y imposes no
/// preference and yields X itself.
inline ModelSet revise(const ModelSet& y_set, const ModelSet& x_set, const DistanceFn& d) {
  if (x_set.empty()) throw Error(ErrorCode::EmptyInput, "revision by the empty set");
  if (y_set.num_vars() != x_set.num_vars())
    throw Error(ErrorCode::NotASubset, "operands over different variable lists");
  if (y_set.empty()) return x_set;
  auto ys = y_set.members();
  std::uint32_t best = UINT32_MAX;
  ModelSet out(x_set.num_vars());
  for (Assignment x : x_set.members()) {
    std::uint32_t dist = UINT32_MAX;
    for (Assignment y : ys) dist = std::min(dist, d(y, x));
    if (dist < best) {
      best = dist;
      out = ModelSet(x_set.num_vars());
    }
    if (dist == best) out.add(x);
  }
  return out;
}

/// Iterated peeling: repeatedly revise the complement-so-far into the
/// remainder and strip the result. layers partitions the input from its
/// boundary inward; core is the remainder after half the steps (upper
/// half, so an odd number of layers keeps the deeper side).
struct PeelResult {
  std::vector<ModelSet> layers;
  ModelSet core;
};

inline PeelResult peel(const ModelSet& x0, const DistanceFn& d) {
  if (x0.empty()) throw Error(ErrorCode::EmptyInput, "peel of the empty set");
  std::vector<ModelSet> remainders{x0};
  ModelSet y = x0.complemented();
  ModelSet x = x0;
  PeelResult res;
  while (true) {
    ModelSet z = revise(y, x, d);
    res.layers.push_back(z);
    if (z == x) break;
    x = x - z;
    y = y | z;
    remainders.push_back(x);
  }
  std::size_t n = res.layers.size() - 1;
  res.core = remainders[(n + 1) / 2];
  return res;
}

inline ModelSet core_formula(const Formula& f, int num_vars, unsigned m, const DistanceFn& d) {
  ModelSet ms = models(f, num_vars);
  if (ms.empty()) throw Error(ErrorCode::UnsatisfiableInput, "formula has no models");
  return core(ms, m, d);
}

/// Peeling on the formula side: the same recurrence expressed over formula
/// model sets, with each layer rendered back as a full DNF. Agrees with
/// peel(models(f)) by construction; the DNF strings reparse to the layers.
struct PeelFormulaResult {
  std::vector<ModelSet> layers;
  ModelSet core;
  std::vector<std::string> layer_dnf;
  std::string core_dnf;
};

inline PeelFormulaResult peel_formula(const Formula& f, const std::vector<std::string>& vars,
                                      const DistanceFn& d) {
  int nv = static_cast<int>(vars.size());
  ModelSet phi = models(f, nv);
  if (phi.empty()) throw Error(ErrorCode::UnsatisfiableInput, "formula has no models");
  std::vector<ModelSet> remainders{phi};
  ModelSet psi = phi.complemented();
  PeelFormulaResult res;
  while (true) {
    ModelSet tau = revise(psi, phi, d);  // psi * phi
    res.layers.push_back(tau);
    res.layer_dnf.push_back(to_dnf(tau, vars));
    if (tau == phi) break;
    phi = phi - tau;  // phi & !tau
    psi = psi | tau;  // psi | tau
    remainders.push_back(phi);
  }
  std::size_t n = res.layers.size() - 1;
  res.core = remainders[(n + 1) / 2];
  res.core_dnf = to_dnf(res.core, vars);
  return res;
}

}  // namespace nmr
