#pragma once

#include <cassert>
#include <cstdint>
#include <string>

namespace nmr {

/// Nonnegative dyadic rational num / 2^exp, kept normalised (num odd or
/// zero). Cell fractions and their aggregates are always of this form, so
/// arithmetic stays exact in 64 bits for diagrams within the node cap.
struct Dyadic {
  std::uint64_t num = 0;
  int exp = 0;

  static Dyadic zero() { return {0, 0}; }
  static Dyadic one() { return {1, 0}; }
  /// 2^-k
  static Dyadic pow2(int k) { return Dyadic{1, k}.normalised(); }

  Dyadic normalised() const {
    Dyadic d = *this;
    if (d.num == 0) {
      d.exp = 0;
      return d;
    }
    while (d.exp > 0 && (d.num & 1) == 0) {
      d.num >>= 1;
      --d.exp;
    }
    return d;
  }

  Dyadic operator+(const Dyadic& o) const {
    int e = exp > o.exp ? exp : o.exp;
    assert(e < 63);
    Dyadic r{(num << (e - exp)) + (o.num << (e - o.exp)), e};
    return r.normalised();
  }

  Dyadic halved() const { return Dyadic{num, exp + 1}.normalised(); }

  bool operator==(const Dyadic& o) const = default;
  bool is_zero() const { return num == 0; }
  bool is_one() const { return num == 1 && exp == 0; }

  /// exact "p/q" rendering, q a power of two ("0/1", "1/1", "3/4", ...)
  std::string str() const {
    return std::to_string(num) + "/" + std::to_string(std::uint64_t(1) << exp);
  }
};

}  // namespace nmr
