#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weakiso/error.hpp"

namespace weakiso {

inline constexpr int kMaxN = 24;

/// Dimension of the cube C_n, 1 <= n <= kMaxN.
class Dimension {
 public:
  constexpr explicit Dimension(int n) : n_(n) {
    if (n < 1 || n > kMaxN) {
      throw Error(ErrorKind::DimensionOutOfRange,
                  "dimension " + std::to_string(n) + " outside 1.." + std::to_string(kMaxN));
    }
  }

  constexpr int value() const noexcept { return n_; }
  constexpr operator int() const noexcept { return n_; }  // NOLINT: used as a count everywhere

  /// Number of words, 2^n.
  constexpr std::uint32_t size() const noexcept { return std::uint32_t{1} << n_; }
  constexpr std::uint32_t all_ones() const noexcept { return size() - 1; }

  friend constexpr bool operator==(Dimension, Dimension) = default;

 private:
  int n_;
};

inline void require_same(Dimension a, Dimension b) {
  if (a != b) {
    throw Error(ErrorKind::DimensionMismatch,
                "dimensions " + std::to_string(a.value()) + " and " + std::to_string(b.value()));
  }
}

/// Raw-bit helpers. Coordinate k (1-based) of an n-bit word lives at bit n-k,
/// so the numeric value of a word reads its text form as binary.
namespace bits {

constexpr std::uint32_t coord_mask(int n, int k) noexcept { return std::uint32_t{1} << (n - k); }
constexpr bool coord(std::uint32_t w, int n, int k) noexcept { return (w >> (n - k)) & 1U; }
constexpr int weight(std::uint32_t w) noexcept { return std::popcount(w); }
constexpr int distance(std::uint32_t x, std::uint32_t y) noexcept { return std::popcount(x ^ y); }
constexpr bool is_even(std::uint32_t w) noexcept { return (std::popcount(w) & 1) == 0; }

/// Next larger integer with the same popcount (Gosper's hack). Returns 0 on overflow
/// past `limit`.
constexpr std::uint32_t next_same_weight(std::uint32_t x) noexcept {
  const std::uint32_t u = x & (~x + 1);
  const std::uint32_t v = x + u;
  if (v == 0) return 0;
  return v + (((v ^ x) / u) >> 2);
}

}  // namespace bits

class CoordPermutation;

/// An n-bit word of C_n.
class Word {
 public:
  Word(Dimension n, std::uint32_t bits) : n_(n), bits_(bits) {
    if ((bits & ~n.all_ones()) != 0) {
      throw Error(ErrorKind::InvalidParams, "word has bits beyond dimension " + std::to_string(n.value()));
    }
  }

  static Word zero(Dimension n) { return Word(n, 0); }
  static Word ones(Dimension n) { return Word(n, n.all_ones()); }
  /// e_k: weight-1 word with its 1 at coordinate k.
  static Word unit(Dimension n, int k) {
    check_coord(n, k);
    return Word(n, bits::coord_mask(n, k));
  }
  /// 1̄^j: all ones except a 0 at coordinate j.
  static Word ones_except(Dimension n, int j) {
    check_coord(n, j);
    return Word(n, n.all_ones() ^ bits::coord_mask(n, j));
  }

  static Word parse(std::string_view text) {
    if (text.empty() || text.size() > static_cast<std::size_t>(kMaxN)) {
      throw Error(ErrorKind::Parse, "word text must have 1.." + std::to_string(kMaxN) + " characters");
    }
    std::uint32_t v = 0;
    for (char ch : text) {
      if (ch != '0' && ch != '1') throw Error(ErrorKind::Parse, "invalid word '" + std::string(text) + "'");
      v = (v << 1) | static_cast<std::uint32_t>(ch - '0');
    }
    return Word(Dimension(static_cast<int>(text.size())), v);
  }

  static Word parse(Dimension n, std::string_view text) {
    Word w = parse(text);
    if (w.dim() != n) {
      throw Error(ErrorKind::DimensionMismatch,
                  "word '" + std::string(text) + "' does not have length " + std::to_string(n.value()));
    }
    return w;
  }

  Dimension dim() const noexcept { return n_; }
  std::uint32_t bits() const noexcept { return bits_; }
  bool coord(int k) const {
    check_coord(n_, k);
    return bits::coord(bits_, n_, k);
  }

  std::string str() const {
    std::string s(static_cast<std::size_t>(n_.value()), '0');
    for (int k = 1; k <= n_; ++k) {
      if (bits::coord(bits_, n_, k)) s[static_cast<std::size_t>(k - 1)] = '1';
    }
    return s;
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (auto c = a.n_.value() <=> b.n_.value(); c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

  static void check_coord(Dimension n, int k) {
    if (k < 1 || k > n) {
      throw Error(ErrorKind::InvalidParams,
                  "coordinate " + std::to_string(k) + " outside 1.." + std::to_string(n.value()));
    }
  }

 private:
  Dimension n_;
  std::uint32_t bits_;
};

enum class Parity { Even, Odd };

inline int weight(const Word& w) noexcept { return bits::weight(w.bits()); }

inline int distance(const Word& x, const Word& y) {
  require_same(x.dim(), y.dim());
  return bits::distance(x.bits(), y.bits());
}

/// Componentwise mod-2 sum; add(x, a) is the translation T_a applied to x.
inline Word add(const Word& x, const Word& y) {
  require_same(x.dim(), y.dim());
  return Word(x.dim(), x.bits() ^ y.bits());
}

inline Word complement(const Word& x) { return Word(x.dim(), x.bits() ^ x.dim().all_ones()); }

inline Parity parity(const Word& x) noexcept { return bits::is_even(x.bits()) ? Parity::Even : Parity::Odd; }

/// Coordinate permutation π acting as (x_1..x_n) -> (x_π(1)..x_π(n)).
/// Stored 1-based: image(k) = π(k).
class CoordPermutation {
 public:
  CoordPermutation(Dimension n, std::vector<int> images) : n_(n), images_(std::move(images)) {
    if (images_.size() != static_cast<std::size_t>(n.value())) {
      throw Error(ErrorKind::InvalidParams, "permutation table must have n entries");
    }
    std::vector<bool> seen(images_.size() + 1, false);
    for (int v : images_) {
      if (v < 1 || v > n || seen[static_cast<std::size_t>(v)]) {
        throw Error(ErrorKind::InvalidParams, "coordinate table is not a permutation of 1..n");
      }
      seen[static_cast<std::size_t>(v)] = true;
    }
    build_masks();
  }

  static CoordPermutation identity(Dimension n) {
    std::vector<int> t(static_cast<std::size_t>(n.value()));
    std::iota(t.begin(), t.end(), 1);
    return CoordPermutation(n, std::move(t));
  }

  /// Transposition of coordinates a and b.
  static CoordPermutation swap(Dimension n, int a, int b) {
    auto t = identity(n).images_;
    Word::check_coord(n, a);
    Word::check_coord(n, b);
    std::swap(t[static_cast<std::size_t>(a - 1)], t[static_cast<std::size_t>(b - 1)]);
    return CoordPermutation(n, std::move(t));
  }

  Dimension dim() const noexcept { return n_; }
  int operator()(int k) const { return images_.at(static_cast<std::size_t>(k - 1)); }
  const std::vector<int>& images() const noexcept { return images_; }

  CoordPermutation inverse() const {
    std::vector<int> inv(images_.size());
    for (std::size_t k = 0; k < images_.size(); ++k) inv[static_cast<std::size_t>(images_[k] - 1)] = static_cast<int>(k) + 1;
    return CoordPermutation(n_, std::move(inv));
  }

  bool is_identity() const {
    for (std::size_t k = 0; k < images_.size(); ++k)
      if (images_[k] != static_cast<int>(k) + 1) return false;
    return true;
  }

  /// Apply the induced map to raw bits (hot path, no checks).
  std::uint32_t apply_bits(std::uint32_t x) const noexcept {
    std::uint32_t out = 0;
    for (int k = 0; k < n_; ++k) {
      if (x & src_mask_[static_cast<std::size_t>(k)]) out |= dst_mask_[static_cast<std::size_t>(k)];
    }
    return out;
  }

  friend bool operator==(const CoordPermutation& a, const CoordPermutation& b) {
    return a.n_ == b.n_ && a.images_ == b.images_;
  }

 private:
  void build_masks() {
    const int n = n_;
    src_mask_.resize(static_cast<std::size_t>(n));
    dst_mask_.resize(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
      // output coordinate k reads input coordinate π(k)
      src_mask_[static_cast<std::size_t>(k - 1)] = bits::coord_mask(n, images_[static_cast<std::size_t>(k - 1)]);
      dst_mask_[static_cast<std::size_t>(k - 1)] = bits::coord_mask(n, k);
    }
  }

  Dimension n_;
  std::vector<int> images_;
  std::vector<std::uint32_t> src_mask_;
  std::vector<std::uint32_t> dst_mask_;
};

inline Word apply_perm(const CoordPermutation& pi, const Word& x) {
  require_same(pi.dim(), x.dim());
  return Word(x.dim(), pi.apply_bits(x.bits()));
}

/// Calls `fn(permutation)` for every permutation of 1..n in lexicographic order.
template <typename Fn>
void for_each_coord_permutation(Dimension n, Fn&& fn) {
  auto t = CoordPermutation::identity(n).images();
  do {
    fn(CoordPermutation(n, t));
  } while (std::next_permutation(t.begin(), t.end()));
}

/// Words of weight k in strictly increasing numeric order.
class WeightRange {
 public:
  WeightRange(Dimension n, int k) : n_(n), k_(k) {
    if (k < 0 || k > n) throw Error(ErrorKind::InvalidParams, "weight outside 0..n");
  }

  class iterator {
   public:
    using value_type = Word;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    iterator(Dimension n, std::uint32_t cur, bool done) : n_(n.value()), cur_(cur), done_(done) {}
    Word operator*() const { return Word(Dimension(n_), cur_); }
    iterator& operator++() {
      if (cur_ == 0) {
        done_ = true;
        return *this;
      }
      const std::uint32_t next = bits::next_same_weight(cur_);
      if (next == 0 || next > (std::uint32_t{1} << n_) - 1) {
        done_ = true;
      } else {
        cur_ = next;
      }
      return *this;
    }
    iterator operator++(int) {
      auto t = *this;
      ++*this;
      return t;
    }
    bool operator==(const iterator& o) const { return done_ == o.done_ && (done_ || cur_ == o.cur_); }

   private:
    int n_ = 1;
    std::uint32_t cur_ = 0;
    bool done_ = true;
  };

  iterator begin() const {
    const std::uint32_t first = k_ == 0 ? 0 : (std::uint32_t{1} << k_) - 1;
    return iterator(n_, first, false);
  }
  iterator end() const { return iterator(n_, 0, true); }

 private:
  Dimension n_;
  int k_;
};

inline WeightRange words_of_weight(Dimension n, int k) { return WeightRange(n, k); }

/// All 2^n words in increasing numeric order.
class AllWordsRange {
 public:
  explicit AllWordsRange(Dimension n) : n_(n) {}
  class iterator {
   public:
    using value_type = Word;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    iterator(int n, std::uint64_t cur) : n_(n), cur_(cur) {}
    Word operator*() const { return Word(Dimension(n_), static_cast<std::uint32_t>(cur_)); }
    iterator& operator++() {
      ++cur_;
      return *this;
    }
    iterator operator++(int) {
      auto t = *this;
      ++cur_;
      return t;
    }
    bool operator==(const iterator& o) const { return cur_ == o.cur_; }

   private:
    int n_ = 1;
    std::uint64_t cur_ = 0;
  };
  iterator begin() const { return iterator(n_, 0); }
  iterator end() const { return iterator(n_, n_.size()); }

 private:
  Dimension n_;
};

inline AllWordsRange all_words(Dimension n) { return AllWordsRange(n); }

}  // namespace weakiso
