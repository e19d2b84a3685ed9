#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace h4 {

// Runtime-sized bitset used for vertex sets and triple neighborhoods.
// All binary operations require operands of equal size.
class DynBitset {
 public:
  DynBitset() = default;
  explicit DynBitset(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  std::size_t word_count() const { return w_.size(); }
  std::uint64_t word(std::size_t i) const { return w_[i]; }
  std::uint64_t& word(std::size_t i) { return w_[i]; }

  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t(1) << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
  void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }
  void clear() { std::fill(w_.begin(), w_.end(), std::uint64_t(0)); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto x : w_) c += std::size_t(std::popcount(x));
    return c;
  }
  bool any() const {
    for (auto x : w_)
      if (x) return true;
    return false;
  }
  bool none() const { return !any(); }

  DynBitset& operator&=(const DynBitset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  DynBitset& operator|=(const DynBitset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  // set difference
  DynBitset& operator-=(const DynBitset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }
  friend DynBitset operator&(DynBitset a, const DynBitset& b) { return a &= b; }
  friend DynBitset operator|(DynBitset a, const DynBitset& b) { return a |= b; }
  friend DynBitset operator-(DynBitset a, const DynBitset& b) { return a -= b; }
  bool operator==(const DynBitset&) const = default;

  std::size_t and_count(const DynBitset& o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < w_.size(); ++i)
      c += std::size_t(std::popcount(w_[i] & o.w_[i]));
    return c;
  }
  bool intersects(const DynBitset& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }
  bool is_subset_of(const DynBitset& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  int find_first() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return int(i * 64 + std::size_t(std::countr_zero(w_[i])));
    return -1;
  }
  // first set bit strictly after i, or -1
  int find_next(int i) const {
    std::size_t j = std::size_t(i) + 1;
    if (j >= n_) return -1;
    std::size_t wi = j >> 6;
    std::uint64_t x = w_[wi] & (~std::uint64_t(0) << (j & 63));
    while (true) {
      if (x) return int(wi * 64 + std::size_t(std::countr_zero(x)));
      if (++wi >= w_.size()) return -1;
      x = w_[wi];
    }
  }
  // k-th set bit, 0-based; -1 if fewer than k+1 bits set
  int nth(std::size_t k) const {
    for (std::size_t wi = 0; wi < w_.size(); ++wi) {
      std::size_t c = std::size_t(std::popcount(w_[wi]));
      if (k < c) {
        std::uint64_t x = w_[wi];
        while (k--) x &= x - 1;
        return int(wi * 64 + std::size_t(std::countr_zero(x)));
      }
      k -= c;
    }
    return -1;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < w_.size(); ++wi) {
      std::uint64_t x = w_[wi];
      while (x) {
        f(int(wi * 64 + std::size_t(std::countr_zero(x))));
        x &= x - 1;
      }
    }
  }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(count());
    for_each([&](int v) { out.push_back(v); });
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace h4
