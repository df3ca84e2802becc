#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weakiso/bigint.hpp"
#include "weakiso/bitword.hpp"

namespace weakiso {

struct CountProfile {
  Dimension n;
  int p;
  std::vector<BigInt> values;  // A_2, A_4, ...
};

/// Number of weight-w words at distance d from a fixed weight-m word.
/// A match shares t = (m + d - w)/2 positions with the fixed support.
inline BigInt count_weight_at_distance(int n, int m, int w, int d) {
  for (int v : {m, w, d}) {
    if (v < 0 || v > n) throw Error(ErrorKind::InvalidParams, "weights and distances must lie in 0..n");
  }
  const int twice_t = m + d - w;
  if (twice_t < 0 || twice_t % 2 != 0) return 0;
  const int t = twice_t / 2;
  return binomial(m, t) * binomial(n - m, d - t);
}

namespace detail {

/// Splits p into the two admissible shapes: n/2 for even n, (n-1)/2 for odd n.
inline void require_half_distance(int n, int p) {
  if (2 * p != n && 2 * p != n - 1) {
    throw Error(ErrorKind::ResidueMismatch,
                "p=" + std::to_string(p) + " is neither n/2 nor (n-1)/2 for n=" + std::to_string(n));
  }
}

}  // namespace detail

/// Words of weight p at distance p from a fixed word of weight 2k, p ∈ {n/2, (n-1)/2}.
inline BigInt A2k(int n, int p, int k) {
  detail::require_half_distance(n, p);
  if (k < 0) throw Error(ErrorKind::InvalidParams, "k must be non-negative");
  return binomial(2 * k, k) * binomial(n - 2 * k, p - k);
}

inline CountProfile A_profile(int n, int p) {
  detail::require_half_distance(n, p);
  CountProfile prof{Dimension(n), p, {}};
  for (int k = 1; 2 * k <= n; ++k) prof.values.push_back(A2k(n, p, k));
  return prof;
}

/// A_{2(k+1)} / A_{2k} for p = (n-1)/2, in the closed form
/// (2k+1)((n-1)/2 - k + 1) / ((k+1)(n-2k)).
inline Rational H_ratio(int n, int k) {
  if (n % 2 == 0) throw Error(ErrorKind::ResidueMismatch, "the ratio is defined for odd n");
  if (k < 0 || n - 2 * k == 0) throw Error(ErrorKind::InvalidParams, "zero denominator");
  const int q = (n - 1) / 2;
  return Rational(BigInt(2 * k + 1) * (q - k + 1), BigInt(k + 1) * (n - 2 * k));
}

inline int B_odd(int k) {
  if (k < 0) throw Error(ErrorKind::InvalidParams, "k must be non-negative");
  return k + 1;
}

struct Case2PairCounts {
  BigInt shared;    // two weight-2 words sharing a position
  BigInt disjoint;  // two weight-2 words with disjoint supports
  bool identity_holds;
};

inline Case2PairCounts case2_pair_counts(int n) {
  if (n < 4 || n % 4 != 0) throw Error(ErrorKind::ResidueMismatch, "needs n ≡ 0 mod 4");
  const int h = n / 2;
  Case2PairCounts c{binomial(n - 3, h - 1) + binomial(n - 3, h - 2), 4 * binomial(n - 4, h - 2), false};
  c.identity_holds = c.shared * (n - 2) == c.disjoint * (n - 3);
  return c;
}

}  // namespace weakiso
