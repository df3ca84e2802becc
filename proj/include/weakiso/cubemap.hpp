#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "weakiso/bitword.hpp"
#include "weakiso/guards.hpp"

namespace weakiso {

/// A subset P of {1..n}. Distance 0 is implicit and never stored.
class PreservedSet {
 public:
  explicit PreservedSet(Dimension n, std::uint32_t mask = 0) : n_(n), mask_(mask) {
    if ((mask & ~full_mask(n)) != 0) throw Error(ErrorKind::InvalidParams, "distance outside 1..n");
  }

  PreservedSet(Dimension n, std::initializer_list<int> ds) : PreservedSet(n) {
    for (int d : ds) insert(d);
  }

  static PreservedSet from_list(Dimension n, const std::vector<int>& ds) {
    PreservedSet p(n);
    for (int d : ds) p.insert(d);
    return p;
  }
  static PreservedSet all(Dimension n) { return PreservedSet(n, full_mask(n)); }
  /// Every even distance <= n.
  static PreservedSet evens(Dimension n) {
    PreservedSet p(n);
    for (int d = 2; d <= n; d += 2) p.insert(d);
    return p;
  }

  Dimension dim() const noexcept { return n_; }
  std::uint32_t mask() const noexcept { return mask_; }
  bool contains(int d) const noexcept { return d >= 1 && d <= n_ && ((mask_ >> d) & 1U); }
  bool empty() const noexcept { return mask_ == 0; }
  int size() const noexcept { return std::popcount(mask_); }
  bool is_full() const noexcept { return mask_ == full_mask(n_); }

  void insert(int d) {
    if (d < 1 || d > n_) throw Error(ErrorKind::InvalidParams, "distance " + std::to_string(d) + " outside 1..n");
    mask_ |= std::uint32_t{1} << d;
  }

  bool includes(const PreservedSet& other) const noexcept { return (other.mask_ & ~mask_) == 0; }

  std::vector<int> members() const {
    std::vector<int> out;
    for (int d = 1; d <= n_; ++d)
      if (contains(d)) out.push_back(d);
    return out;
  }

  friend bool operator==(const PreservedSet&, const PreservedSet&) = default;

  static constexpr std::uint32_t full_mask(int n) noexcept {
    return ((std::uint32_t{1} << (n + 1)) - 1) & ~std::uint32_t{1};
  }

 private:
  Dimension n_;
  std::uint32_t mask_;
};

/// Dense bijection of C_n: table[v] is the image of the word with numeric value v.
class CubeMap {
 public:
  /// Validates length and bijectivity.
  CubeMap(Dimension n, std::vector<std::uint32_t> table) : n_(n), table_(std::move(table)) {
    if (table_.size() != n.size()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "map table has " + std::to_string(table_.size()) + " entries, expected " + std::to_string(n.size()));
    }
    std::vector<bool> seen(table_.size(), false);
    for (std::size_t v = 0; v < table_.size(); ++v) {
      const std::uint32_t img = table_[v];
      if (img >= n.size()) throw Error(ErrorKind::DimensionMismatch, "image outside C_n");
      if (seen[img]) {
        throw Error(ErrorKind::NotABijection,
                    "image " + Word(n, img).str() + " appears more than once");
      }
      seen[img] = true;
    }
  }

  static CubeMap from_table(Dimension n, const std::vector<Word>& entries) {
    if (entries.size() != n.size()) {
      throw Error(ErrorKind::DimensionMismatch, "expected 2^n entries");
    }
    std::vector<std::uint32_t> t;
    t.reserve(entries.size());
    for (const Word& w : entries) {
      require_same(w.dim(), n);
      t.push_back(w.bits());
    }
    return CubeMap(n, std::move(t));
  }

  static CubeMap identity(Dimension n) {
    std::vector<std::uint32_t> t(n.size());
    for (std::uint32_t v = 0; v < n.size(); ++v) t[v] = v;
    return CubeMap(n, std::move(t));
  }

  /// Builds a table from a raw-bit function.
  template <typename Fn>
  static CubeMap generate(Dimension n, Fn&& fn) {
    std::vector<std::uint32_t> t(n.size());
    for (std::uint32_t v = 0; v < n.size(); ++v) t[v] = fn(v);
    return CubeMap(n, std::move(t));
  }

  Dimension dim() const noexcept { return n_; }
  const std::vector<std::uint32_t>& table() const noexcept { return table_; }
  std::uint32_t at(std::uint32_t v) const { return table_.at(v); }
  std::uint32_t operator[](std::uint32_t v) const noexcept { return table_[v]; }
  Word operator()(const Word& w) const {
    require_same(w.dim(), n_);
    return Word(n_, table_[w.bits()]);
  }

  bool is_identity() const noexcept {
    for (std::uint32_t v = 0; v < table_.size(); ++v)
      if (table_[v] != v) return false;
    return true;
  }

  friend bool operator==(const CubeMap& a, const CubeMap& b) { return a.n_ == b.n_ && a.table_ == b.table_; }
  friend bool operator<(const CubeMap& a, const CubeMap& b) {
    if (a.n_ != b.n_) return a.n_.value() < b.n_.value();
    return a.table_ < b.table_;
  }

 private:
  Dimension n_;
  std::vector<std::uint32_t> table_;
};

/// f ∘ g (apply g first).
inline CubeMap compose(const CubeMap& f, const CubeMap& g) {
  require_same(f.dim(), g.dim());
  std::vector<std::uint32_t> t(f.table().size());
  for (std::uint32_t v = 0; v < t.size(); ++v) t[v] = f[g[v]];
  return CubeMap(f.dim(), std::move(t));
}

inline CubeMap inverse(const CubeMap& f) {
  std::vector<std::uint32_t> t(f.table().size());
  for (std::uint32_t v = 0; v < t.size(); ++v) t[f[v]] = v;
  return CubeMap(f.dim(), std::move(t));
}

inline CubeMap translation(const Word& a) {
  const std::uint32_t s = a.bits();
  return CubeMap::generate(a.dim(), [s](std::uint32_t v) { return v ^ s; });
}

inline CubeMap coordinate_permutation(const CoordPermutation& pi) {
  return CubeMap::generate(pi.dim(), [&pi](std::uint32_t v) { return pi.apply_bits(v); });
}

struct ScanOptions {
  int threads = 1;
  Guards guards = Guards::from_env();
  bool override_guard = false;
};

namespace detail {

/// Bit d set when some pair at distance d is moved to a different distance.
inline std::uint32_t broken_distances(const std::vector<std::uint32_t>& t, std::uint32_t begin, std::uint32_t step,
                                      std::uint32_t all_broken) {
  std::uint32_t bad = 0;
  const auto size = static_cast<std::uint32_t>(t.size());
  for (std::uint32_t x = begin; x < size; x += step) {
    const std::uint32_t fx = t[x];
    for (std::uint32_t y = x + 1; y < size; ++y) {
      const int d = std::popcount(x ^ y);
      if ((bad >> d) & 1U) continue;
      if (std::popcount(fx ^ t[y]) != d) {
        bad |= std::uint32_t{1} << d;
        if (bad == all_broken) return bad;
      }
    }
  }
  return bad;
}

}  // namespace detail

/// D(f): every d such that all pairs at distance d stay at distance d.
inline PreservedSet preserved_distances(const CubeMap& f, const ScanOptions& opts = {}) {
  const int n = f.dim();
  if (!opts.override_guard) {
    require_guard(n <= opts.guards.spectrum_max_n,
                  "pairwise scan for n=" + std::to_string(n) + " exceeds guard n<=" +
                      std::to_string(opts.guards.spectrum_max_n));
  }
  const std::uint32_t full = PreservedSet::full_mask(n);
  const int workers = std::max(1, std::min(opts.threads, 64));
  std::uint32_t bad = 0;
  if (workers == 1) {
    bad = detail::broken_distances(f.table(), 0, 1, full);
  } else {
    std::vector<std::uint32_t> partial(static_cast<std::size_t>(workers), 0);
    {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          partial[static_cast<std::size_t>(w)] =
              detail::broken_distances(f.table(), static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(workers), full);
        });
      }
    }
    for (auto p : partial) bad |= p;
  }
  return PreservedSet(f.dim(), full & ~bad);
}

/// Direct check that every d in P is preserved; cheaper than a full spectrum.
inline bool is_P_isometry(const CubeMap& f, const PreservedSet& P) {
  require_same(f.dim(), P.dim());
  const auto& t = f.table();
  const auto size = static_cast<std::uint32_t>(t.size());
  const std::uint32_t want = P.mask();
  for (std::uint32_t x = 0; x < size; ++x) {
    for (std::uint32_t y = x + 1; y < size; ++y) {
      const int d = std::popcount(x ^ y);
      if (((want >> d) & 1U) && std::popcount(t[x] ^ t[y]) != d) return false;
    }
  }
  return true;
}

inline bool is_p_isometry(const CubeMap& f, int p) {
  PreservedSet P(f.dim());
  P.insert(p);
  return is_P_isometry(f, P);
}

}  // namespace weakiso

template <>
struct std::hash<weakiso::CubeMap> {
  std::size_t operator()(const weakiso::CubeMap& f) const noexcept {
    std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(f.dim().value());
    for (std::uint32_t v : f.table()) {
      h ^= v;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};
