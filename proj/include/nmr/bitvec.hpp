#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

namespace nmr {

/// Fixed-width dynamic bitset. Used for sets of truth assignments (up to
/// 2^16 bits) and for per-subset lookup tables in the sweep verifiers.
class Bitvec {
 public:
  Bitvec() = default;
  explicit Bitvec(std::size_t nbits, bool value = false)
      : nbits_(nbits), words_((nbits + 63) / 64, value ? ~0ull : 0ull) {
    trim();
  }

  std::size_t size() const { return nbits_; }

  bool test(std::size_t i) const {
    assert(i < nbits_);
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i) {
    assert(i < nbits_);
    words_[i >> 6] |= 1ull << (i & 63);
  }
  void reset(std::size_t i) {
    assert(i < nbits_);
    words_[i >> 6] &= ~(1ull << (i & 63));
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (uint64_t w : words_) c += std::popcount(w);
    return c;
  }
  bool any() const {
    for (uint64_t w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  Bitvec& operator&=(const Bitvec& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  Bitvec& operator|=(const Bitvec& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  /// set difference: this \ o
  Bitvec& operator-=(const Bitvec& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  friend Bitvec operator&(Bitvec a, const Bitvec& b) { return a &= b; }
  friend Bitvec operator|(Bitvec a, const Bitvec& b) { return a |= b; }
  friend Bitvec operator-(Bitvec a, const Bitvec& b) { return a -= b; }

  Bitvec complemented() const {
    Bitvec r = *this;
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
  }

  bool subset_of(const Bitvec& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  bool intersects(const Bitvec& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  bool operator==(const Bitvec& o) const = default;

  /// index of the first set bit at or after `from`, or size() if none
  std::size_t next_set(std::size_t from) const {
    if (from >= nbits_) return nbits_;
    std::size_t wi = from >> 6;
    uint64_t w = words_[wi] & (~0ull << (from & 63));
    while (true) {
      if (w) return (wi << 6) + std::countr_zero(w);
      if (++wi == words_.size()) return nbits_;
      w = words_[wi];
    }
  }

  std::vector<uint32_t> members() const {
    std::vector<uint32_t> out;
    for (std::size_t i = next_set(0); i < nbits_; i = next_set(i + 1))
      out.push_back(static_cast<uint32_t>(i));
    return out;
  }

 private:
  void trim() {
    if (nbits_ & 63) words_.back() &= (1ull << (nbits_ & 63)) - 1;
  }

  std::size_t nbits_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace nmr
