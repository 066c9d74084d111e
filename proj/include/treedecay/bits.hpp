#ifndef TREEDECAY_BITS_HPP_
#define TREEDECAY_BITS_HPP_

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace treedecay {

/// Fixed-capacity bitset with word-level iteration over set bits.
template <std::size_t Words>
class FixedBits {
 public:
  static constexpr std::size_t kCapacity = 64 * Words;

  constexpr FixedBits() = default;

  static FixedBits from_word(std::uint64_t w) {
    FixedBits b;
    b.words_[0] = w;
    return b;
  }

  /// Bits [0, n) set.
  static FixedBits prefix(std::size_t n) {
    FixedBits b;
    for (std::size_t w = 0; w < Words && n > 0; ++w) {
      const std::size_t take = n < 64 ? n : 64;
      b.words_[w] = take == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << take) - 1);
      n -= take;
    }
    return b;
  }

  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

  bool none() const {
    for (auto w : words_) {
      if (w) return false;
    }
    return true;
  }
  bool any() const { return !none(); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  /// Index of the lowest set bit, or kCapacity when empty.
  std::size_t first() const {
    for (std::size_t w = 0; w < Words; ++w) {
      if (words_[w]) return 64 * w + static_cast<std::size_t>(std::countr_zero(words_[w]));
    }
    return kCapacity;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < Words; ++w) {
      std::uint64_t word = words_[w];
      while (word) {
        f(64 * w + static_cast<std::size_t>(std::countr_zero(word)));
        word &= word - 1;
      }
    }
  }

  std::uint64_t word(std::size_t w) const { return words_[w]; }

  FixedBits& operator|=(const FixedBits& o) {
    for (std::size_t w = 0; w < Words; ++w) words_[w] |= o.words_[w];
    return *this;
  }
  FixedBits& operator&=(const FixedBits& o) {
    for (std::size_t w = 0; w < Words; ++w) words_[w] &= o.words_[w];
    return *this;
  }
  FixedBits& operator^=(const FixedBits& o) {
    for (std::size_t w = 0; w < Words; ++w) words_[w] ^= o.words_[w];
    return *this;
  }
  /// this & ~o
  FixedBits& subtract(const FixedBits& o) {
    for (std::size_t w = 0; w < Words; ++w) words_[w] &= ~o.words_[w];
    return *this;
  }

  friend FixedBits operator|(FixedBits a, const FixedBits& b) { return a |= b; }
  friend FixedBits operator&(FixedBits a, const FixedBits& b) { return a &= b; }
  friend FixedBits operator^(FixedBits a, const FixedBits& b) { return a ^= b; }
  friend FixedBits minus(FixedBits a, const FixedBits& b) { return a.subtract(b); }

  bool intersects(const FixedBits& o) const {
    for (std::size_t w = 0; w < Words; ++w) {
      if (words_[w] & o.words_[w]) return true;
    }
    return false;
  }

  bool operator==(const FixedBits&) const = default;
  auto operator<=>(const FixedBits&) const = default;

  std::size_t hash() const {
    std::size_t h = 0;
    for (auto w : words_) h = h * 0x9E3779B97F4A7C15ull + std::hash<std::uint64_t>{}(w);
    return h;
  }

 private:
  std::array<std::uint64_t, Words> words_{};
};

/// Site and face sets of boxes handled by the exhaustive kernels.
using Bits = FixedBits<4>;

struct BitsHash {
  std::size_t operator()(const Bits& b) const { return b.hash(); }
};

}  // namespace treedecay

#endif  // TREEDECAY_BITS_HPP_
