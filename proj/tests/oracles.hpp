#pragma once

// Independent slow reference computations used by the unit tests. Words are
// handled as '0'/'1' strings, coordinate 1 first, so none of the library's bit
// tricks are reused here.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "weakiso/weakiso.hpp"

namespace oracle {

inline std::string text(int n, std::uint32_t v) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int k = 0; k < n; ++k)
    if ((v >> (n - 1 - k)) & 1U) s[static_cast<std::size_t>(k)] = '1';
  return s;
}

inline int hamming(const std::string& a, const std::string& b) {
  int d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) d += a[k] != b[k];
  return d;
}

inline int ones(const std::string& a) { return static_cast<int>(std::count(a.begin(), a.end(), '1')); }

/// Distances d with: d(x,y) = d implies d(f x, f y) = d, over all pairs.
inline std::vector<int> spectrum(const weakiso::CubeMap& f) {
  const int n = f.dim();
  std::vector<bool> broken(static_cast<std::size_t>(n + 1), false);
  for (std::uint32_t x = 0; x < f.dim().size(); ++x)
    for (std::uint32_t y = 0; y < f.dim().size(); ++y) {
      const int d = hamming(text(n, x), text(n, y));
      if (d > 0 && hamming(text(n, f[x]), text(n, f[y])) != d) broken[static_cast<std::size_t>(d)] = true;
    }
  std::vector<int> out;
  for (int d = 1; d <= n; ++d)
    if (!broken[static_cast<std::size_t>(d)]) out.push_back(d);
  return out;
}

inline weakiso::CubeMap random_bijection(weakiso::Dimension n, std::mt19937_64& rng) {
  std::vector<std::uint32_t> t(n.size());
  for (std::uint32_t v = 0; v < n.size(); ++v) t[v] = v;
  std::shuffle(t.begin(), t.end(), rng);
  return weakiso::CubeMap(n, std::move(t));
}

inline weakiso::BigInt choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  weakiso::BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace oracle
