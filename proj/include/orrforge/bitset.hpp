#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace orrforge {

// Fixed-size dynamic bitset over 64-bit words. Vertex and element sets are
// at most a few thousand bits, so everything is kept simple and inline.
class DynBitset {
public:
  DynBitset() = default;
  explicit DynBitset(int n) : n_(n), w_((n + 63) / 64, 0) {}

  int size() const { return n_; }

  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(int i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void clear() { std::fill(w_.begin(), w_.end(), 0); }

  void set_all() {
    std::fill(w_.begin(), w_.end(), ~std::uint64_t{0});
    trim();
  }

  int count() const {
    int c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }

  bool any() const {
    for (auto w : w_)
      if (w) return true;
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
  DynBitset& operator^=(const DynBitset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }
  // this \ o
  DynBitset& subtract(const DynBitset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }

  friend DynBitset operator&(DynBitset a, const DynBitset& b) { return a &= b; }
  friend DynBitset operator|(DynBitset a, const DynBitset& b) { return a |= b; }

  bool operator==(const DynBitset& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const DynBitset& o) const { return !(*this == o); }

  bool subset_of(const DynBitset& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  bool intersects(const DynBitset& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  static int count_and(const DynBitset& a, const DynBitset& b) {
    int c = 0;
    for (std::size_t i = 0; i < a.w_.size(); ++i) c += std::popcount(a.w_[i] & b.w_[i]);
    return c;
  }

  // Index of the first set bit, or -1.
  int find_first() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return int(i * 64) + std::countr_zero(w_[i]);
    return -1;
  }

  // First set bit strictly after `prev`, or -1.
  int find_next(int prev) const {
    int i = prev + 1;
    if (i >= n_) return -1;
    std::size_t wi = std::size_t(i) >> 6;
    std::uint64_t w = w_[wi] & (~std::uint64_t{0} << (i & 63));
    while (true) {
      if (w) return int(wi * 64) + std::countr_zero(w);
      if (++wi >= w_.size()) return -1;
      w = w_[wi];
    }
  }

  template <class F>
  void for_each(F&& f) const {
    for (int v = find_first(); v != -1; v = find_next(v)) f(v);
  }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(count());
    for_each([&](int v) { out.push_back(v); });
    return out;
  }

  static DynBitset from(int n, const std::vector<int>& members) {
    DynBitset b(n);
    for (int v : members) b.set(v);
    return b;
  }

private:
  void trim() {
    if (n_ & 63) w_.back() &= (~std::uint64_t{0}) >> (64 - (n_ & 63));
  }

  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace orrforge
