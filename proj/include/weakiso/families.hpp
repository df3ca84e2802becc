#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "weakiso/bigint.hpp"
#include "weakiso/bitword.hpp"
#include "weakiso/cubemap.hpp"
#include "weakiso/guards.hpp"

namespace weakiso {

// ---------------------------------------------------------------------------
// Parameter records
// ---------------------------------------------------------------------------

/// T_a ∘ π.
struct IsometryParams {
  Word a;
  CoordPermutation pi;
  friend bool operator==(const IsometryParams&, const IsometryParams&) = default;
};

/// A permutation of the complement pairs plus a flip bit per pair. Pairs are
/// indexed by their smaller member, which is exactly the words with coordinate
/// 1 equal to 0, i.e. numeric values 0 .. 2^(n-1)-1.
struct NIsometryParams {
  Dimension n;
  std::vector<std::uint32_t> pair_perm;  // pair_perm[r] = representative hit by pair r
  std::vector<bool> flips;               // flips[r]: r lands on pair_perm[r] ⊕ 1̄
  friend bool operator==(const NIsometryParams&, const NIsometryParams&) = default;
};

/// T_a ∘ π on even words and T_b ∘ σ on odd words, weight(a) ≡ weight(b) mod 2.
struct EvenIsometryParams {
  Word a;
  CoordPermutation pi;
  Word b;
  CoordPermutation sigma;
  friend bool operator==(const EvenIsometryParams&, const EvenIsometryParams&) = default;
};

/// σ_{i,j}: a bijection {1..n}\{i} -> {1..n}\{j}; sigma[i-1] is unused and held at 0.
struct SigmaIJParams {
  Dimension n;
  int i;
  int j;
  std::vector<int> sigma;
  friend bool operator==(const SigmaIJParams&, const SigmaIJParams&) = default;

  /// σ_{i,i} with the identity bijection.
  static SigmaIJParams diagonal(Dimension n, int i) {
    std::vector<int> s(static_cast<std::size_t>(n.value()));
    for (int k = 1; k <= n; ++k) s[static_cast<std::size_t>(k - 1)] = (k == i) ? 0 : k;
    return SigmaIJParams{n, i, i, std::move(s)};
  }
};

/// n ≡ 2 mod 4. S is a subset of X (one word per complement pair).
struct HalfCaseIParams {
  CoordPermutation pi;
  std::vector<Word> S;
  Word shift;
  friend bool operator==(const HalfCaseIParams&, const HalfCaseIParams&) = default;
};

/// n ≡ 0 mod 4. S1, S2 are subsets of the even words of X; a, b have odd weight.
struct HalfCaseIIParams {
  CoordPermutation pi1;
  CoordPermutation pi2;
  std::vector<Word> S1;
  std::vector<Word> S2;
  Word a;
  Word b;
  Word shift;
  friend bool operator==(const HalfCaseIIParams&, const HalfCaseIIParams&) = default;
};

/// x -> a + π(x) on one parity class.
struct EvenRestriction {
  Word a;
  CoordPermutation pi;
  friend bool operator==(const EvenRestriction&, const EvenRestriction&) = default;
};

/// x -> shift + τ(x) on one parity class, τ a σ_{i,j}-mapping.
struct SigmaRestriction {
  SigmaIJParams tau;
  Word shift;
  friend bool operator==(const SigmaRestriction&, const SigmaRestriction&) = default;
};

using MidPlusPart = std::variant<EvenRestriction, SigmaRestriction>;

/// n odd. outer_shift + even_part on E, outer_shift + odd_part on O.
/// n ≡ 1 mod 4: both parts must coincide (one global map).
/// n ≡ 3 mod 4: parts are independent; their translations have even weight.
struct MidPlusParams {
  MidPlusPart even_part;
  MidPlusPart odd_part;
  Word outer_shift;
  friend bool operator==(const MidPlusParams&, const MidPlusParams&) = default;
};

/// n ≡ 3 mod 4: τ on E, T_{1̄^j} ∘ τ on O, then the outer translation.
struct TripleParams {
  SigmaIJParams tau;
  Word outer_shift;
  friend bool operator==(const TripleParams&, const TripleParams&) = default;
};

using FamilyParams = std::variant<IsometryParams, NIsometryParams, EvenIsometryParams, SigmaIJParams,
                                  HalfCaseIParams, HalfCaseIIParams, MidPlusParams, TripleParams>;

enum class Family { Isometry, NIsometry, EvenIsometry, SigmaIJ, HalfCaseI, HalfCaseII, MidPlus, Triple };

inline constexpr Family kAllFamilies[] = {Family::Isometry,  Family::NIsometry,  Family::EvenIsometry,
                                          Family::SigmaIJ,   Family::HalfCaseI,  Family::HalfCaseII,
                                          Family::MidPlus,   Family::Triple};

constexpr std::string_view family_tag(Family f) noexcept {
  switch (f) {
    case Family::Isometry: return "isometry";
    case Family::NIsometry: return "n_isometry";
    case Family::EvenIsometry: return "even_isometry";
    case Family::SigmaIJ: return "sigma_ij";
    case Family::HalfCaseI: return "half_case1";
    case Family::HalfCaseII: return "half_case2";
    case Family::MidPlus: return "mid_plus";
    case Family::Triple: return "triple";
  }
  return "";
}

inline std::optional<Family> family_from_tag(std::string_view tag) {
  for (Family f : kAllFamilies)
    if (family_tag(f) == tag) return f;
  return std::nullopt;
}

inline Family family_of(const FamilyParams& p) { return static_cast<Family>(p.index()); }

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

namespace detail {

inline void require_residue(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::WrongResidue, what);
}

/// Member of X: weight < n/2, or weight n/2 with coordinate 1 equal to 0.
inline bool in_half_x(int n, std::uint32_t w) {
  const int wt = std::popcount(w);
  if (2 * wt < n) return true;
  return 2 * wt == n && !bits::coord(w, n, 1);
}

inline std::uint32_t pair_rep(std::uint32_t w, std::uint32_t ones) { return std::min(w, w ^ ones); }

/// Flag per pair representative (index < 2^(n-1)).
inline std::vector<bool> pair_flags(Dimension n, const std::vector<Word>& S) {
  std::vector<bool> flags(n.size() / 2, false);
  for (const Word& w : S) flags[pair_rep(w.bits(), n.all_ones())] = true;
  return flags;
}

/// X sorted by numeric value.
inline std::vector<std::uint32_t> half_x(Dimension n, bool even_only) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t w = 0; w < n.size(); ++w)
    if (in_half_x(n, w) && (!even_only || bits::is_even(w))) out.push_back(w);
  return out;
}

/// Raw evaluator for σ_{i,j}: moves coordinate u (u != i) to σ(u), then
/// complements everything when c_i = 1.
class SigmaEval {
 public:
  explicit SigmaEval(const SigmaIJParams& p) : n_(p.n), imask_(bits::coord_mask(p.n, p.i)), ones_(p.n.all_ones()) {
    for (int u = 1; u <= p.n; ++u) {
      if (u == p.i) continue;
      src_.push_back(bits::coord_mask(p.n, u));
      dst_.push_back(bits::coord_mask(p.n, p.sigma[static_cast<std::size_t>(u - 1)]));
    }
  }
  std::uint32_t operator()(std::uint32_t c) const noexcept {
    std::uint32_t d = 0;
    for (std::size_t k = 0; k < src_.size(); ++k)
      if (c & src_[k]) d |= dst_[k];
    return (c & imask_) ? d ^ ones_ : d;
  }

 private:
  int n_;
  std::uint32_t imask_;
  std::uint32_t ones_;
  std::vector<std::uint32_t> src_;
  std::vector<std::uint32_t> dst_;
};

inline const Word& part_translation(const MidPlusPart& part) {
  return std::visit(
      [](const auto& p) -> const Word& {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, EvenRestriction>) {
          return p.a;
        } else {
          return p.shift;
        }
      },
      part);
}

}  // namespace detail

inline void validate(const SigmaIJParams& p) {
  const int n = p.n;
  Word::check_coord(p.n, p.i);
  Word::check_coord(p.n, p.j);
  if (p.sigma.size() != static_cast<std::size_t>(n)) throw Error(ErrorKind::InvalidParams, "sigma table must have n entries");
  std::vector<bool> hit(static_cast<std::size_t>(n) + 1, false);
  for (int u = 1; u <= n; ++u) {
    const int v = p.sigma[static_cast<std::size_t>(u - 1)];
    if (u == p.i) {
      if (v != 0) throw Error(ErrorKind::InvalidParams, "sigma is undefined at coordinate i");
      continue;
    }
    if (v < 1 || v > n || v == p.j || hit[static_cast<std::size_t>(v)]) {
      throw Error(ErrorKind::InvalidParams, "sigma is not a bijection onto {1..n} minus {j}");
    }
    hit[static_cast<std::size_t>(v)] = true;
  }
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

inline CubeMap build_isometry(const IsometryParams& p) {
  require_same(p.a.dim(), p.pi.dim());
  const std::uint32_t a = p.a.bits();
  return CubeMap::generate(p.a.dim(), [&](std::uint32_t c) { return a ^ p.pi.apply_bits(c); });
}

inline CubeMap build_n_isometry(const NIsometryParams& p) {
  const Dimension n = p.n;
  const std::uint32_t half = n.size() / 2;
  if (p.pair_perm.size() != half || p.flips.size() != half) {
    throw Error(ErrorKind::InvalidParams, "pair permutation needs 2^(n-1) entries");
  }
  std::vector<bool> seen(half, false);
  for (std::uint32_t r : p.pair_perm) {
    if (r >= half || seen[r]) throw Error(ErrorKind::InvalidParams, "pair permutation is not a bijection");
    seen[r] = true;
  }
  std::vector<std::uint32_t> t(n.size());
  const std::uint32_t ones = n.all_ones();
  for (std::uint32_t r = 0; r < half; ++r) {
    const std::uint32_t img = p.flips[r] ? (p.pair_perm[r] ^ ones) : p.pair_perm[r];
    t[r] = img;
    t[r ^ ones] = img ^ ones;
  }
  return CubeMap(n, std::move(t));
}

inline CubeMap build_even_isometry(const EvenIsometryParams& p) {
  const Dimension n = p.a.dim();
  require_same(n, p.b.dim());
  require_same(n, p.pi.dim());
  require_same(n, p.sigma.dim());
  if (parity(p.a) != parity(p.b)) {
    throw Error(ErrorKind::ParityViolation, "a and b must both have even or both odd weight");
  }
  const std::uint32_t a = p.a.bits();
  const std::uint32_t b = p.b.bits();
  return CubeMap::generate(n, [&](std::uint32_t c) {
    return bits::is_even(c) ? a ^ p.pi.apply_bits(c) : b ^ p.sigma.apply_bits(c);
  });
}

inline CubeMap build_sigma_ij(const SigmaIJParams& p) {
  validate(p);
  const detail::SigmaEval tau(p);
  return CubeMap::generate(p.n, [&](std::uint32_t c) { return tau(c); });
}

/// The classical diagonal example: σ_{i,i} with the identity bijection, n odd.
inline CubeMap build_krasin_example(Dimension n, int i) {
  detail::require_residue(n % 2 == 1, "the diagonal example needs odd n");
  return build_sigma_ij(SigmaIJParams::diagonal(n, i));
}

inline CubeMap build_half_case1(const HalfCaseIParams& p) {
  const Dimension n = p.pi.dim();
  require_same(n, p.shift.dim());
  detail::require_residue(n % 4 == 2, "case I needs n ≡ 2 mod 4");
  for (const Word& w : p.S) {
    require_same(w.dim(), n);
    if (!detail::in_half_x(n, w.bits())) throw Error(ErrorKind::InvalidParams, "S contains " + w.str() + " outside X");
  }
  const auto flags = detail::pair_flags(n, p.S);
  const std::uint32_t ones = n.all_ones();
  const std::uint32_t shift = p.shift.bits();
  return CubeMap::generate(n, [&](std::uint32_t c) {
    std::uint32_t d = p.pi.apply_bits(c);
    if (flags[detail::pair_rep(c, ones)]) d ^= ones;
    return d ^ shift;
  });
}

inline CubeMap build_half_case2(const HalfCaseIIParams& p) {
  const Dimension n = p.pi1.dim();
  for (Dimension d : {p.pi2.dim(), p.a.dim(), p.b.dim(), p.shift.dim()}) require_same(n, d);
  detail::require_residue(n % 4 == 0, "case II needs n ≡ 0 mod 4");
  if (parity(p.a) != Parity::Odd || parity(p.b) != Parity::Odd) {
    throw Error(ErrorKind::ParityViolation, "a and b must have odd weight");
  }
  for (const auto* S : {&p.S1, &p.S2}) {
    for (const Word& w : *S) {
      require_same(w.dim(), n);
      if (!detail::in_half_x(n, w.bits()) || parity(w) != Parity::Even) {
        throw Error(ErrorKind::InvalidParams, "S1/S2 contains " + w.str() + " outside E_X");
      }
    }
  }
  const auto f1 = detail::pair_flags(n, p.S1);
  const auto f2 = detail::pair_flags(n, p.S2);
  const std::uint32_t ones = n.all_ones();
  const std::uint32_t a = p.a.bits();
  const std::uint32_t b = p.b.bits();
  const std::uint32_t shift = p.shift.bits();
  return CubeMap::generate(n, [&](std::uint32_t c) {
    std::uint32_t d;
    if (bits::is_even(c)) {
      d = p.pi1.apply_bits(c);
      if (f1[detail::pair_rep(c, ones)]) d ^= ones;
    } else {
      const std::uint32_t e = c ^ a;
      d = b ^ p.pi2.apply_bits(e);
      if (f2[detail::pair_rep(e, ones)]) d ^= ones;
    }
    return d ^ shift;
  });
}

inline void validate(const MidPlusParams& p) {
  const Dimension n = p.outer_shift.dim();
  detail::require_residue(n % 2 == 1, "mid-plus family needs odd n");
  for (const MidPlusPart* part : {&p.even_part, &p.odd_part}) {
    std::visit(
        [&](const auto& q) {
          if constexpr (std::is_same_v<std::decay_t<decltype(q)>, EvenRestriction>) {
            require_same(n, q.a.dim());
            require_same(n, q.pi.dim());
          } else {
            require_same(n, q.tau.n);
            require_same(n, q.shift.dim());
            validate(q.tau);
          }
        },
        *part);
  }
  if (n % 4 == 1) {
    if (!(p.even_part == p.odd_part)) {
      throw Error(ErrorKind::IllegalCombination, "n ≡ 1 mod 4 admits only one global map on both parity classes");
    }
  } else {
    if (std::holds_alternative<SigmaRestriction>(p.odd_part) &&
        parity(detail::part_translation(p.odd_part)) != Parity::Even) {
      throw Error(ErrorKind::ParityViolation, "the odd-part sigma shift must have even weight when n ≡ 3 mod 4");
    }
    // Both parts preserve parity, so mismatched translations would send E and O onto the same class.
    if (parity(detail::part_translation(p.even_part)) != parity(detail::part_translation(p.odd_part))) {
      throw Error(ErrorKind::ParityViolation, "part translations must have equal parity");
    }
  }
}

inline CubeMap build_mid_plus(const MidPlusParams& p) {
  validate(p);
  const Dimension n = p.outer_shift.dim();
  auto evaluator = [](const MidPlusPart& part) -> std::function<std::uint32_t(std::uint32_t)> {
    if (const auto* e = std::get_if<EvenRestriction>(&part)) {
      return [a = e->a.bits(), pi = e->pi](std::uint32_t c) { return a ^ pi.apply_bits(c); };
    }
    const auto& s = std::get<SigmaRestriction>(part);
    return [shift = s.shift.bits(), tau = detail::SigmaEval(s.tau)](std::uint32_t c) { return shift ^ tau(c); };
  };
  const auto on_even = evaluator(p.even_part);
  const auto on_odd = evaluator(p.odd_part);
  const std::uint32_t outer = p.outer_shift.bits();
  return CubeMap::generate(n, [&](std::uint32_t c) { return outer ^ (bits::is_even(c) ? on_even(c) : on_odd(c)); });
}

inline CubeMap build_triple(const TripleParams& p) {
  const Dimension n = p.tau.n;
  require_same(n, p.outer_shift.dim());
  detail::require_residue(n % 4 == 3, "triple family needs n ≡ 3 mod 4");
  validate(p.tau);
  const detail::SigmaEval tau(p.tau);
  const std::uint32_t ones_j = Word::ones_except(n, p.tau.j).bits();
  const std::uint32_t outer = p.outer_shift.bits();
  return CubeMap::generate(n, [&](std::uint32_t c) {
    const std::uint32_t d = tau(c);
    return outer ^ (bits::is_even(c) ? d : d ^ ones_j);
  });
}

inline CubeMap build(const FamilyParams& params) {
  return std::visit(
      [](const auto& p) -> CubeMap {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IsometryParams>) return build_isometry(p);
        else if constexpr (std::is_same_v<T, NIsometryParams>) return build_n_isometry(p);
        else if constexpr (std::is_same_v<T, EvenIsometryParams>) return build_even_isometry(p);
        else if constexpr (std::is_same_v<T, SigmaIJParams>) return build_sigma_ij(p);
        else if constexpr (std::is_same_v<T, HalfCaseIParams>) return build_half_case1(p);
        else if constexpr (std::is_same_v<T, HalfCaseIIParams>) return build_half_case2(p);
        else if constexpr (std::is_same_v<T, MidPlusParams>) return build_mid_plus(p);
        else return build_triple(p);
      },
      params);
}

/// Distances every member of the family is guaranteed to preserve.
inline PreservedSet family_requirement(Family f, Dimension n) {
  PreservedSet P(n);
  switch (f) {
    case Family::Isometry: return PreservedSet::all(n);
    case Family::NIsometry: P.insert(n); return P;
    case Family::EvenIsometry: return PreservedSet::evens(n);
    case Family::SigmaIJ:
    case Family::MidPlus:
      detail::require_residue(n % 2 == 1, "family needs odd n");
      P.insert((n + 1) / 2);
      return P;
    case Family::HalfCaseI:
    case Family::HalfCaseII:
      detail::require_residue(n % 2 == 0, "family needs even n");
      P.insert(n / 2);
      P.insert(n);
      return P;
    case Family::Triple:
      detail::require_residue(n % 4 == 3, "family needs n ≡ 3 mod 4");
      P.insert((n - 1) / 2);
      P.insert((n + 1) / 2);
      P.insert(n);
      return P;
  }
  return P;
}

inline bool family_defined_for(Family f, int n) {
  switch (f) {
    case Family::Isometry:
    case Family::NIsometry:
    case Family::EvenIsometry: return true;
    case Family::SigmaIJ:
    case Family::MidPlus: return n % 2 == 1;
    case Family::HalfCaseI: return n % 4 == 2;
    case Family::HalfCaseII: return n % 4 == 0;
    case Family::Triple: return n % 4 == 3;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

namespace detail {

template <typename Fn>
void for_each_sigma(Dimension n, Fn&& fn) {
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      std::vector<int> targets;
      for (int k = 1; k <= n; ++k)
        if (k != j) targets.push_back(k);
      do {
        SigmaIJParams p{n, i, j, std::vector<int>(static_cast<std::size_t>(n.value()), 0)};
        std::size_t t = 0;
        for (int u = 1; u <= n; ++u)
          if (u != i) p.sigma[static_cast<std::size_t>(u - 1)] = targets[t++];
        fn(p);
      } while (std::next_permutation(targets.begin(), targets.end()));
    }
  }
}

template <typename Fn>
void for_each_subset(const std::vector<std::uint32_t>& universe, Dimension n, Fn&& fn) {
  const std::uint64_t count = std::uint64_t{1} << universe.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    std::vector<Word> S;
    for (std::size_t k = 0; k < universe.size(); ++k)
      if ((mask >> k) & 1U) S.emplace_back(n, universe[k]);
    fn(S);
  }
}

inline std::vector<Word> words_where(Dimension n, const std::function<bool(std::uint32_t)>& pred) {
  std::vector<Word> out;
  for (std::uint32_t w = 0; w < n.size(); ++w)
    if (pred(w)) out.emplace_back(n, w);
  return out;
}

inline BigInt count_perms(int n) { return factorial(static_cast<std::uint64_t>(n)); }

/// Number of parameter tuples the canonical enumeration of `f` walks.
inline BigInt enumeration_tuples(Family f, Dimension n) {
  const BigInt words = pow2(static_cast<std::uint64_t>(n.value()));
  const BigInt perms = count_perms(n);
  const BigInt sigmas = BigInt(n.value()) * n.value() * factorial(static_cast<std::uint64_t>(n.value() - 1));
  switch (f) {
    case Family::Isometry: return words * perms;
    case Family::NIsometry: {
      const auto half = static_cast<std::uint64_t>(n.size() / 2);
      return factorial(half) * pow2(half);
    }
    case Family::EvenIsometry: return words * perms * (words / 2) * perms;
    case Family::SigmaIJ: return sigmas;
    case Family::HalfCaseI:
      return perms * pow2(n.size() / 2) * (words / 2);
    case Family::HalfCaseII: {
      const BigInt subsets = pow2(n.size() / 4);
      return perms * subsets * perms * subsets * (words / 4) * (words / 2);
    }
    case Family::MidPlus:
      if (n % 4 == 1) return words * perms + words * sigmas;
      {
        const BigInt part = (words / 2) * perms + sigmas * (words / 2);
        return part * part * 2;
      }
    case Family::Triple: return sigmas * words;
  }
  return 0;
}

/// Walks a parameter cover of the family. For n <= 4 callers deduplicate; for
/// n >= 5 every tuple below yields a distinct map.
template <typename Fn>
void walk_family(Family f, Dimension n, Fn&& emit) {
  switch (f) {
    case Family::Isometry:
      for (std::uint32_t a = 0; a < n.size(); ++a)
        for_each_coord_permutation(n, [&](const CoordPermutation& pi) { emit(build_isometry({Word(n, a), pi})); });
      return;
    case Family::NIsometry: {
      const std::uint32_t half = n.size() / 2;
      std::vector<std::uint32_t> perm(half);
      for (std::uint32_t r = 0; r < half; ++r) perm[r] = r;
      do {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << half); ++mask) {
          std::vector<bool> flips(half);
          for (std::uint32_t r = 0; r < half; ++r) flips[r] = (mask >> r) & 1U;
          emit(build_n_isometry({n, perm, std::move(flips)}));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      return;
    }
    case Family::EvenIsometry:
      for (std::uint32_t a = 0; a < n.size(); ++a)
        for_each_coord_permutation(n, [&](const CoordPermutation& pi) {
          for (std::uint32_t b = 0; b < n.size(); ++b) {
            if (bits::is_even(a) != bits::is_even(b)) continue;
            for_each_coord_permutation(n, [&](const CoordPermutation& sigma) {
              emit(build_even_isometry({Word(n, a), pi, Word(n, b), sigma}));
            });
          }
        });
      return;
    case Family::SigmaIJ:
      for_each_sigma(n, [&](const SigmaIJParams& p) { emit(build_sigma_ij(p)); });
      return;
    case Family::HalfCaseI: {
      // (π, S, shift) and (π, X∖S, shift ⊕ 1̄) coincide: shift ranges over words with coordinate 1 = 0.
      const auto X = half_x(n, false);
      for_each_coord_permutation(n, [&](const CoordPermutation& pi) {
        for_each_subset(X, n, [&](const std::vector<Word>& S) {
          for (std::uint32_t s = 0; s < n.size() / 2; ++s) emit(build_half_case1({pi, S, Word(n, s)}));
        });
      });
      return;
    }
    case Family::HalfCaseII: {
      // a is pinned to the smallest odd word; b and shift range over words with coordinate 1 = 0.
      const auto EX = half_x(n, true);
      const Word a(n, 1);
      for_each_coord_permutation(n, [&](const CoordPermutation& pi1) {
        for_each_subset(EX, n, [&](const std::vector<Word>& S1) {
          for_each_coord_permutation(n, [&](const CoordPermutation& pi2) {
            for_each_subset(EX, n, [&](const std::vector<Word>& S2) {
              for (std::uint32_t b = 0; b < n.size() / 2; ++b) {
                if (bits::is_even(b)) continue;
                for (std::uint32_t s = 0; s < n.size() / 2; ++s)
                  emit(build_half_case2({pi1, pi2, S1, S2, a, Word(n, b), Word(n, s)}));
              }
            });
          });
        });
      });
      return;
    }
    case Family::MidPlus: {
      const Word zero = Word::zero(n);
      if (n % 4 == 1) {
        for (std::uint32_t a = 0; a < n.size(); ++a)
          for_each_coord_permutation(n, [&](const CoordPermutation& pi) {
            const EvenRestriction part{Word(n, a), pi};
            emit(build_mid_plus({part, part, zero}));
          });
        for_each_sigma(n, [&](const SigmaIJParams& tau) {
          for (std::uint32_t s = 0; s < n.size(); ++s) {
            const SigmaRestriction part{tau, Word(n, s)};
            emit(build_mid_plus({part, part, zero}));
          }
        });
        return;
      }
      // Even outer shifts are absorbed by the parts, so outer ∈ {0̄, smallest odd word}.
      std::vector<MidPlusPart> parts;
      for (std::uint32_t a = 0; a < n.size(); ++a) {
        if (!bits::is_even(a)) continue;
        for_each_coord_permutation(n, [&](const CoordPermutation& pi) { parts.emplace_back(EvenRestriction{Word(n, a), pi}); });
      }
      for_each_sigma(n, [&](const SigmaIJParams& tau) {
        for (std::uint32_t s = 0; s < n.size(); ++s)
          if (bits::is_even(s)) parts.emplace_back(SigmaRestriction{tau, Word(n, s)});
      });
      for (std::uint32_t outer : {std::uint32_t{0}, std::uint32_t{1}})
        for (const auto& pe : parts)
          for (const auto& po : parts) emit(build_mid_plus({pe, po, Word(n, outer)}));
      return;
    }
    case Family::Triple:
      for_each_sigma(n, [&](const SigmaIJParams& tau) {
        for (std::uint32_t s = 0; s < n.size(); ++s) emit(build_triple({tau, Word(n, s)}));
      });
      return;
  }
}

}  // namespace detail

/// Calls `visit(map)` once per distinct member of the family, in a fixed order.
/// Refuses with ResourceGuard when the parameter walk exceeds the guard.
template <typename Visit>
void enumerate_family(Family f, Dimension n, Visit&& visit, const Guards& guards = Guards::from_env()) {
  if (!family_defined_for(f, n)) {
    throw Error(ErrorKind::WrongResidue, std::string(family_tag(f)) + " is not defined for n=" + std::to_string(n.value()));
  }
  const BigInt tuples = detail::enumeration_tuples(f, n);
  require_guard(tuples <= guards.enumerate_limit,
                "enumerating " + std::string(family_tag(f)) + " at n=" + std::to_string(n.value()) + " walks " +
                    to_decimal(tuples) + " parameter tuples");
  // isometries and pair permutations never repeat a map
  if (n <= 4 && f != Family::Isometry && f != Family::NIsometry) {
    std::unordered_set<CubeMap> seen;
    detail::walk_family(f, n, [&](CubeMap m) {
      if (seen.insert(m).second) visit(m);
    });
  } else {
    detail::walk_family(f, n, [&](const CubeMap& m) { visit(m); });
  }
}

inline std::vector<CubeMap> collect_family(Family f, Dimension n, const Guards& guards = Guards::from_env()) {
  std::vector<CubeMap> out;
  enumerate_family(f, n, [&](const CubeMap& m) { out.push_back(m); }, guards);
  return out;
}

/// Number of distinct maps the family produces. Closed forms where the
/// parametrization is collision-free up to the known quotients; small
/// dimensions are counted by enumeration.
inline BigInt param_space_size(Family f, Dimension n, const Guards& guards = Guards::from_env()) {
  if (!family_defined_for(f, n)) {
    throw Error(ErrorKind::WrongResidue, std::string(family_tag(f)) + " is not defined for n=" + std::to_string(n.value()));
  }
  const auto nn = static_cast<std::uint64_t>(n.value());
  const BigInt nfact = factorial(nn);
  auto by_enumeration = [&] {
    BigInt count = 0;
    enumerate_family(f, n, [&](const CubeMap&) { ++count; }, guards);
    return count;
  };
  switch (f) {
    case Family::Isometry: return pow2(nn) * nfact;
    case Family::NIsometry: {
      const std::uint64_t half = std::uint64_t{1} << (nn - 1);
      return factorial(half) * pow2(half);
    }
    case Family::EvenIsometry:
      if (n <= 2) return by_enumeration();
      return pow2(2 * nn - 1) * nfact * nfact;
    case Family::SigmaIJ:
      if (n == 1) return 1;
      return BigInt(n.value()) * nfact;
    case Family::HalfCaseI:
      if (n <= 2) return by_enumeration();
      return nfact * pow2(nn - 1) * pow2(std::uint64_t{1} << (nn - 1));
    case Family::HalfCaseII: {
      if (n <= 4) return by_enumeration();
      const BigInt part = pow2(nn - 2) * nfact * pow2(std::uint64_t{1} << (nn - 2));
      return 2 * part * part;
    }
    case Family::MidPlus: {
      if (n <= 3) return by_enumeration();
      const BigInt np1 = factorial(nn + 1);
      if (n % 4 == 1) return pow2(nn) * np1;
      const BigInt part = pow2(nn - 1) * np1;
      return 2 * part * part;
    }
    case Family::Triple:
      if (n <= 3) return by_enumeration();
      return pow2(nn) * BigInt(n.value()) * nfact;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Random members
// ---------------------------------------------------------------------------

namespace detail {

inline Word random_word(Dimension n, std::mt19937_64& rng) {
  return Word(n, static_cast<std::uint32_t>(rng()) & n.all_ones());
}

inline Word random_word_of_parity(Dimension n, Parity p, std::mt19937_64& rng) {
  std::uint32_t w = static_cast<std::uint32_t>(rng()) & n.all_ones();
  if (bits::is_even(w) != (p == Parity::Even)) w ^= 1;
  return Word(n, w);
}

inline CoordPermutation random_perm(Dimension n, std::mt19937_64& rng) {
  auto t = CoordPermutation::identity(n).images();
  std::shuffle(t.begin(), t.end(), rng);
  return CoordPermutation(n, std::move(t));
}

inline SigmaIJParams random_sigma(Dimension n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coord(1, n.value());
  const int i = coord(rng);
  const int j = coord(rng);
  std::vector<int> targets;
  for (int k = 1; k <= n; ++k)
    if (k != j) targets.push_back(k);
  std::shuffle(targets.begin(), targets.end(), rng);
  SigmaIJParams p{n, i, j, std::vector<int>(static_cast<std::size_t>(n.value()), 0)};
  std::size_t t = 0;
  for (int u = 1; u <= n; ++u)
    if (u != i) p.sigma[static_cast<std::size_t>(u - 1)] = targets[t++];
  return p;
}

inline std::vector<Word> random_subset(Dimension n, const std::vector<std::uint32_t>& universe, std::mt19937_64& rng) {
  std::vector<Word> S;
  for (std::uint32_t w : universe)
    if (rng() & 1U) S.emplace_back(n, w);
  return S;
}

}  // namespace detail

/// A parameter record drawn from the family; every draw is valid.
inline FamilyParams random_params(Family f, Dimension n, std::mt19937_64& rng) {
  if (!family_defined_for(f, n)) {
    throw Error(ErrorKind::WrongResidue, std::string(family_tag(f)) + " is not defined for n=" + std::to_string(n.value()));
  }
  using namespace detail;
  switch (f) {
    case Family::Isometry: return IsometryParams{random_word(n, rng), random_perm(n, rng)};
    case Family::NIsometry: {
      const std::uint32_t half = n.size() / 2;
      NIsometryParams p{n, std::vector<std::uint32_t>(half), std::vector<bool>(half)};
      for (std::uint32_t r = 0; r < half; ++r) p.pair_perm[r] = r;
      std::shuffle(p.pair_perm.begin(), p.pair_perm.end(), rng);
      for (std::uint32_t r = 0; r < half; ++r) p.flips[r] = rng() & 1U;
      return p;
    }
    case Family::EvenIsometry: {
      const Word a = random_word(n, rng);
      return EvenIsometryParams{a, random_perm(n, rng), random_word_of_parity(n, parity(a), rng), random_perm(n, rng)};
    }
    case Family::SigmaIJ: return random_sigma(n, rng);
    case Family::HalfCaseI: return HalfCaseIParams{random_perm(n, rng), random_subset(n, half_x(n, false), rng), random_word(n, rng)};
    case Family::HalfCaseII: {
      const auto EX = half_x(n, true);
      return HalfCaseIIParams{random_perm(n, rng),
                              random_perm(n, rng),
                              random_subset(n, EX, rng),
                              random_subset(n, EX, rng),
                              random_word_of_parity(n, Parity::Odd, rng),
                              random_word_of_parity(n, Parity::Odd, rng),
                              random_word(n, rng)};
    }
    case Family::MidPlus: {
      auto part = [&](Parity shift_parity) -> MidPlusPart {
        if (rng() & 1U) return EvenRestriction{random_word_of_parity(n, shift_parity, rng), random_perm(n, rng)};
        return SigmaRestriction{random_sigma(n, rng), random_word_of_parity(n, shift_parity, rng)};
      };
      if (n % 4 == 1) {
        auto both = (rng() & 1U) ? MidPlusPart(EvenRestriction{random_word(n, rng), random_perm(n, rng)})
                                 : MidPlusPart(SigmaRestriction{random_sigma(n, rng), random_word(n, rng)});
        return MidPlusParams{both, both, random_word(n, rng)};
      }
      auto even_part = part(Parity::Even);
      auto odd_part = part(Parity::Even);
      return MidPlusParams{std::move(even_part), std::move(odd_part), random_word(n, rng)};
    }
    case Family::Triple: return TripleParams{random_sigma(n, rng), random_word(n, rng)};
  }
  throw Error(ErrorKind::InvalidParams, "unknown family");
}

}  // namespace weakiso
