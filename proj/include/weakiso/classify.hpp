#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "weakiso/bitword.hpp"
#include "weakiso/cubemap.hpp"
#include "weakiso/families.hpp"

namespace weakiso {

enum class ClassTag { Isometry, EvenIsometry, HalfAndN, MidPlus, Triple, NOnly, Generic };

constexpr std::string_view class_tag_name(ClassTag t) noexcept {
  switch (t) {
    case ClassTag::Isometry: return "Isometry";
    case ClassTag::EvenIsometry: return "EvenIsometry";
    case ClassTag::HalfAndN: return "HalfAndN";
    case ClassTag::MidPlus: return "MidPlus";
    case ClassTag::Triple: return "Triple";
    case ClassTag::NOnly: return "NOnly";
    case ClassTag::Generic: return "Generic";
  }
  return "";
}

struct ClassLabel {
  ClassTag tag;
  std::optional<FamilyParams> recovered;
  PreservedSet spectrum;
};

namespace detail {

inline int coord_of_bit(int n, std::uint32_t single) { return n - std::countr_zero(single); }

inline std::uint32_t pair_word(int n, int k, int m) { return bits::coord_mask(n, k) | bits::coord_mask(n, m); }

/// Reads π from a map g that acts as π on weight-2 words: the images of
/// e_k + e_m (m != k) share exactly one coordinate q, and π(q) = k.
inline std::optional<CoordPermutation> perm_by_common_coordinate(Dimension n,
                                                                 const std::function<std::uint32_t(std::uint32_t)>& g) {
  std::vector<int> images(static_cast<std::size_t>(n.value()), 0);
  for (int k = 1; k <= n; ++k) {
    std::uint32_t common = n.all_ones();
    for (int m = 1; m <= n; ++m) {
      if (m == k) continue;
      const std::uint32_t img = g(pair_word(n, k, m));
      if (std::popcount(img) != 2) return std::nullopt;
      common &= img;
    }
    if (std::popcount(common) != 1) return std::nullopt;
    const int q = coord_of_bit(n, common);
    if (images[static_cast<std::size_t>(q - 1)] != 0) return std::nullopt;
    images[static_cast<std::size_t>(q - 1)] = k;
  }
  return CoordPermutation(n, std::move(images));
}

/// Reads σ_{i,j} from a map g that acts as it on weight-2 words:
/// e_i + e_k goes to 1̄ + e_σ(k), everything else stays weight 2.
inline std::optional<SigmaIJParams> sigma_from_pairs(Dimension n, const std::function<std::uint32_t(std::uint32_t)>& g) {
  const std::uint32_t ones = n.all_ones();
  int i = 0;
  for (int k = 1; k <= n && i == 0; ++k) {
    bool all_heavy = true;
    for (int m = 1; m <= n && all_heavy; ++m)
      if (m != k && std::popcount(g(pair_word(n, k, m))) != n - 1) all_heavy = false;
    if (all_heavy) i = k;
  }
  if (i == 0) return std::nullopt;
  SigmaIJParams p{n, i, 0, std::vector<int>(static_cast<std::size_t>(n.value()), 0)};
  std::vector<bool> hit(static_cast<std::size_t>(n.value()) + 1, false);
  for (int k = 1; k <= n; ++k) {
    if (k == i) continue;
    const std::uint32_t low = g(pair_word(n, i, k)) ^ ones;
    if (std::popcount(low) != 1) return std::nullopt;
    const int s = coord_of_bit(n, low);
    if (hit[static_cast<std::size_t>(s)]) return std::nullopt;
    hit[static_cast<std::size_t>(s)] = true;
    p.sigma[static_cast<std::size_t>(k - 1)] = s;
  }
  for (int k = 1; k <= n; ++k)
    if (!hit[static_cast<std::size_t>(k)]) p.j = k;
  return p;
}

using LinearPart = std::variant<CoordPermutation, SigmaIJParams>;

inline std::uint32_t eval_part(const LinearPart& part, std::uint32_t c) {
  if (const auto* pi = std::get_if<CoordPermutation>(&part)) return pi->apply_bits(c);
  return SigmaEval(std::get<SigmaIJParams>(part))(c);
}

inline bool agrees_on_even(Dimension n, const LinearPart& part, const std::function<std::uint32_t(std::uint32_t)>& h) {
  if (const auto* pi = std::get_if<CoordPermutation>(&part)) {
    for (std::uint32_t c = 0; c < n.size(); ++c)
      if (bits::is_even(c) && pi->apply_bits(c) != h(c)) return false;
    return true;
  }
  const SigmaEval tau(std::get<SigmaIJParams>(part));
  for (std::uint32_t c = 0; c < n.size(); ++c)
    if (bits::is_even(c) && tau(c) != h(c)) return false;
  return true;
}

/// Finds a coordinate permutation or σ_{i,j} agreeing with h on every even word.
/// Reads the structure off weight-2 images for n >= 5; small cubes are matched
/// exhaustively because the weight-2 configuration is ambiguous there.
inline std::optional<LinearPart> match_on_even(Dimension n, const std::function<std::uint32_t(std::uint32_t)>& h,
                                               bool allow_perm, bool allow_sigma) {
  if (n <= 4) {
    std::optional<LinearPart> found;
    if (allow_perm) {
      for_each_coord_permutation(n, [&](const CoordPermutation& pi) {
        if (!found && agrees_on_even(n, pi, h)) found = pi;
      });
    }
    if (!found && allow_sigma && n >= 2) {
      for_each_sigma(n, [&](const SigmaIJParams& tau) {
        if (!found && agrees_on_even(n, tau, h)) found = tau;
      });
    }
    return found;
  }
  if (allow_perm) {
    if (auto pi = perm_by_common_coordinate(n, h); pi && agrees_on_even(n, *pi, h)) return LinearPart(*pi);
  }
  if (allow_sigma) {
    if (auto tau = sigma_from_pairs(n, h)) {
      validate(*tau);
      if (agrees_on_even(n, *tau, h)) return LinearPart(*tau);
    }
  }
  return std::nullopt;
}

/// Flip-aware E-part reader for the {n/2, n} families: g acts on E as π up to
/// complementing whole pairs. Returns π and the flagged pair representatives.
inline std::optional<std::pair<CoordPermutation, std::vector<bool>>> match_flipped_on_even(
    Dimension n, const std::function<std::uint32_t(std::uint32_t)>& g) {
  const std::uint32_t ones = n.all_ones();
  auto flags_for = [&](const CoordPermutation& pi) -> std::optional<std::vector<bool>> {
    std::vector<bool> flags(n.size() / 2, false);
    for (std::uint32_t r = 0; r < n.size() / 2; ++r) {
      if (!bits::is_even(r)) continue;
      const std::uint32_t want = pi.apply_bits(r);
      const std::uint32_t got = g(r);
      if (got == (want ^ ones)) {
        flags[r] = true;
      } else if (got != want) {
        return std::nullopt;
      }
      if (g(r ^ ones) != (got ^ ones)) return std::nullopt;
    }
    return flags;
  };
  if (n <= 4) {
    std::optional<std::pair<CoordPermutation, std::vector<bool>>> found;
    for_each_coord_permutation(n, [&](const CoordPermutation& pi) {
      if (found) return;
      if (auto fl = flags_for(pi)) found.emplace(pi, std::move(*fl));
    });
    return found;
  }
  // n - 2 != 2 here, so the weight-2 member of each image pair is the π image.
  auto light = [&](std::uint32_t c) {
    const std::uint32_t img = g(c);
    return std::popcount(img) == 2 ? img : img ^ ones;
  };
  auto pi = perm_by_common_coordinate(n, light);
  if (!pi) return std::nullopt;
  auto fl = flags_for(*pi);
  if (!fl) return std::nullopt;
  return std::make_pair(*pi, std::move(*fl));
}

/// Members of X (or E_X) whose pair is flagged.
inline std::vector<Word> flagged_x_members(Dimension n, const std::vector<bool>& flags, bool even_only) {
  std::vector<Word> S;
  for (std::uint32_t w : half_x(n, even_only))
    if (flags[pair_rep(w, n.all_ones())]) S.emplace_back(n, w);
  return S;
}

template <typename Params, typename Builder>
std::optional<Params> confirm(const CubeMap& f, Params p, Builder&& builder) {
  try {
    if (builder(p) == f) return p;
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Recovery operations
// ---------------------------------------------------------------------------

/// f = T_a ∘ π with a = f(0̄) and π read from the images of the unit words.
inline IsometryParams decompose_isometry(const CubeMap& f) {
  const Dimension n = f.dim();
  const std::uint32_t a = f[0];
  std::vector<int> images(static_cast<std::size_t>(n.value()), 0);
  for (int k = 1; k <= n; ++k) {
    const std::uint32_t img = f[bits::coord_mask(n, k)] ^ a;
    if (std::popcount(img) != 1) {
      throw Error(ErrorKind::NotAnIsometry, "unit word e_" + std::to_string(k) + " does not map to a unit word");
    }
    // π(e_k) = e_q with π(q) = k
    const int q = detail::coord_of_bit(n, img);
    if (images[static_cast<std::size_t>(q - 1)] != 0) throw Error(ErrorKind::NotAnIsometry, "unit images collide");
    images[static_cast<std::size_t>(q - 1)] = k;
  }
  IsometryParams p{Word(n, a), CoordPermutation(n, std::move(images))};
  if (build_isometry(p) != f) throw Error(ErrorKind::NotAnIsometry, "map is not a translation composed with a permutation");
  return p;
}

namespace detail {

inline std::optional<EvenIsometryParams> even_params(const CubeMap& f) {
  const Dimension n = f.dim();
  const std::uint32_t a = f[0];
  const std::uint32_t e = 1;  // reference odd word
  auto on_e = [&](std::uint32_t c) { return f[c] ^ a; };
  auto on_o = [&](std::uint32_t w) { return f[w ^ e] ^ f[e]; };
  const auto pi = match_on_even(n, on_e, true, false);
  if (!pi) return std::nullopt;
  const auto sigma = match_on_even(n, on_o, true, false);
  if (!sigma) return std::nullopt;
  const auto& s = std::get<CoordPermutation>(*sigma);
  const std::uint32_t b = f[e] ^ s.apply_bits(e);
  return confirm(f, EvenIsometryParams{Word(n, a), std::get<CoordPermutation>(*pi), Word(n, b), s},
                 [](const EvenIsometryParams& q) { return build_even_isometry(q); });
}

}  // namespace detail

/// T_a∘π on E and T_b∘σ on O. Requires 2 ∈ D(f) and n >= 3.
inline EvenIsometryParams recover_even_params(const CubeMap& f) {
  const Dimension n = f.dim();
  if (n <= 2) throw Error(ErrorKind::SmallDimension, "even-isometry recovery needs n >= 3");
  if (!is_p_isometry(f, 2)) throw Error(ErrorKind::NotEvenIsometry, "map does not preserve distance 2");
  if (auto p = detail::even_params(f)) return *p;
  throw Error(ErrorKind::NotEvenIsometry, "map is not of the form T_a∘π on E and T_b∘σ on O");
}

inline SigmaIJParams recognize_sigma_ij(const CubeMap& f) {
  const Dimension n = f.dim();
  if (f[0] != 0) throw Error(ErrorKind::NotSigmaIJ, "a sigma mapping fixes the zero word");
  const std::uint32_t ones = n.all_ones();
  int i = 0;
  for (int k = 1; k <= n; ++k) {
    if (f[bits::coord_mask(n, k)] == ones) {
      if (i != 0) throw Error(ErrorKind::NotSigmaIJ, "two unit words map to the all-ones word");
      i = k;
    }
  }
  if (i == 0) throw Error(ErrorKind::NotSigmaIJ, "no unit word maps to the all-ones word");
  SigmaIJParams p{n, i, 0, std::vector<int>(static_cast<std::size_t>(n.value()), 0)};
  std::vector<bool> hit(static_cast<std::size_t>(n.value()) + 1, false);
  for (int k = 1; k <= n; ++k) {
    if (k == i) continue;
    const std::uint32_t img = f[bits::coord_mask(n, k)];
    if (std::popcount(img) != 1) throw Error(ErrorKind::NotSigmaIJ, "unit word does not map to a unit word");
    const int s = detail::coord_of_bit(n, img);
    if (hit[static_cast<std::size_t>(s)]) throw Error(ErrorKind::NotSigmaIJ, "unit images collide");
    hit[static_cast<std::size_t>(s)] = true;
    p.sigma[static_cast<std::size_t>(k - 1)] = s;
  }
  for (int k = 1; k <= n; ++k)
    if (!hit[static_cast<std::size_t>(k)]) p.j = k;
  if (build_sigma_ij(p) != f) throw Error(ErrorKind::NotSigmaIJ, "map does not follow the sigma branch structure");
  return p;
}

inline NIsometryParams recover_n_isometry(const CubeMap& f) {
  const Dimension n = f.dim();
  const std::uint32_t ones = n.all_ones();
  const std::uint32_t half = n.size() / 2;
  NIsometryParams p{n, std::vector<std::uint32_t>(half), std::vector<bool>(half)};
  for (std::uint32_t r = 0; r < half; ++r) {
    const std::uint32_t img = f[r];
    if (f[r ^ ones] != (img ^ ones)) throw Error(ErrorKind::NotInFamily, "map does not preserve complement pairs");
    p.pair_perm[r] = detail::pair_rep(img, ones);
    p.flips[r] = img != p.pair_perm[r];
  }
  return p;
}

inline HalfCaseIParams recover_half_case1(const CubeMap& f) {
  const Dimension n = f.dim();
  detail::require_residue(n % 4 == 2, "case I needs n ≡ 2 mod 4");
  const std::uint32_t ones = n.all_ones();
  const std::uint32_t shift = f[0];
  auto g = [&](std::uint32_t c) { return f[c] ^ shift; };
  std::vector<int> images(static_cast<std::size_t>(n.value()), 0);
  for (int k = 1; k <= n; ++k) {
    std::uint32_t img = g(bits::coord_mask(n, k));
    if (std::popcount(img) != 1) img ^= ones;
    if (std::popcount(img) != 1) throw Error(ErrorKind::NotInFamily, "unit word leaves the unit pairs");
    const int q = detail::coord_of_bit(n, img);
    if (images[static_cast<std::size_t>(q - 1)] != 0) throw Error(ErrorKind::NotInFamily, "unit images collide");
    images[static_cast<std::size_t>(q - 1)] = k;
  }
  const CoordPermutation pi(n, std::move(images));
  std::vector<bool> flags(n.size() / 2, false);
  for (std::uint32_t r = 0; r < n.size() / 2; ++r) {
    const std::uint32_t want = pi.apply_bits(r);
    if (g(r) == (want ^ ones)) {
      flags[r] = true;
    } else if (g(r) != want) {
      throw Error(ErrorKind::NotInFamily, "pair image is neither π(c) nor its complement");
    }
  }
  HalfCaseIParams p{pi, detail::flagged_x_members(n, flags, false), Word(n, shift)};
  if (build_half_case1(p) != f) throw Error(ErrorKind::NotInFamily, "map is not a case I {n/2,n}-isometry");
  return p;
}

inline HalfCaseIIParams recover_half_case2(const CubeMap& f) {
  const Dimension n = f.dim();
  detail::require_residue(n % 4 == 0, "case II needs n ≡ 0 mod 4");
  const std::uint32_t shift = f[0];
  const std::uint32_t a = 1;
  auto g = [&](std::uint32_t c) { return f[c] ^ shift; };
  const std::uint32_t b = g(a);
  if (bits::is_even(b)) throw Error(ErrorKind::NotInFamily, "odd words do not stay odd after normalization");
  auto even_side = detail::match_flipped_on_even(n, g);
  auto odd_side = detail::match_flipped_on_even(n, [&](std::uint32_t u) { return g(u ^ a) ^ b; });
  if (!even_side || !odd_side) throw Error(ErrorKind::NotInFamily, "parity classes are not flipped permutations");
  HalfCaseIIParams p{even_side->first,
                     odd_side->first,
                     detail::flagged_x_members(n, even_side->second, true),
                     detail::flagged_x_members(n, odd_side->second, true),
                     Word(n, a),
                     Word(n, b),
                     Word(n, shift)};
  if (build_half_case2(p) != f) throw Error(ErrorKind::NotInFamily, "map is not a case II {n/2,n}-isometry");
  return p;
}

inline MidPlusParams recover_mid_plus(const CubeMap& f) {
  const Dimension n = f.dim();
  detail::require_residue(n % 2 == 1, "mid-plus family needs odd n");
  const Word zero = Word::zero(n);
  if (n % 4 == 1) {
    try {
      const auto iso = decompose_isometry(f);
      const EvenRestriction part{iso.a, iso.pi};
      return MidPlusParams{part, part, zero};
    } catch (const Error&) {
    }
    const std::uint32_t c = f[0];
    try {
      const auto tau = recognize_sigma_ij(compose(translation(Word(n, c)), f));
      const SigmaRestriction part{tau, Word(n, c)};
      return MidPlusParams{part, part, zero};
    } catch (const Error&) {
    }
    throw Error(ErrorKind::NotInFamily, "map is neither an isometry nor a translated sigma mapping");
  }
  const std::uint32_t outer = bits::is_even(f[0]) ? 0 : 1;
  auto g = [&](std::uint32_t c) { return f[c] ^ outer; };
  const std::uint32_t tE = g(0);
  const std::uint32_t e = 1;
  auto to_part = [&](const detail::LinearPart& lp, std::uint32_t t) -> MidPlusPart {
    if (const auto* pi = std::get_if<CoordPermutation>(&lp)) return EvenRestriction{Word(n, t), *pi};
    return SigmaRestriction{std::get<SigmaIJParams>(lp), Word(n, t)};
  };
  const auto onE = detail::match_on_even(n, [&](std::uint32_t c) { return g(c) ^ tE; }, true, true);
  const auto onO = detail::match_on_even(n, [&](std::uint32_t w) { return g(w ^ e) ^ g(e); }, true, true);
  if (!onE || !onO) throw Error(ErrorKind::NotInFamily, "a parity class is not a permutation or sigma restriction");
  const std::uint32_t tO = g(e) ^ detail::eval_part(*onO, e);
  MidPlusParams p{to_part(*onE, tE), to_part(*onO, tO), Word(n, outer)};
  if (auto ok = detail::confirm(f, p, [](const MidPlusParams& q) { return build_mid_plus(q); })) return *ok;
  throw Error(ErrorKind::NotInFamily, "map is not an (n+1)/2-isometry of the listed shapes");
}

inline TripleParams recover_triple(const CubeMap& f) {
  const Dimension n = f.dim();
  detail::require_residue(n % 4 == 3, "triple family needs n ≡ 3 mod 4");
  const std::uint32_t outer = f[0];
  const auto onE = detail::match_on_even(n, [&](std::uint32_t c) { return f[c] ^ outer; }, false, true);
  if (!onE) throw Error(ErrorKind::NotInFamily, "even words are not moved by a sigma mapping");
  TripleParams p{std::get<SigmaIJParams>(*onE), Word(n, outer)};
  if (auto ok = detail::confirm(f, p, [](const TripleParams& q) { return build_triple(q); })) return *ok;
  // n = 3: several σ agree on E; try them all.
  std::optional<TripleParams> found;
  if (n <= 4) {
    detail::for_each_sigma(n, [&](const SigmaIJParams& tau) {
      if (!found && build_triple({tau, Word(n, outer)}) == f) found = TripleParams{tau, Word(n, outer)};
    });
  }
  if (found) return *found;
  throw Error(ErrorKind::NotInFamily, "map is not a triple isometry");
}

/// Tries one family's recovery; nullopt when the map is not a member.
inline std::optional<FamilyParams> recover(const CubeMap& f, Family fam) {
  const int n = f.dim();
  if (!family_defined_for(fam, n)) return std::nullopt;
  try {
    switch (fam) {
      case Family::Isometry: return decompose_isometry(f);
      case Family::NIsometry: return recover_n_isometry(f);
      case Family::EvenIsometry:
        if (n <= 2) {
          if (auto p = detail::even_params(f)) return *p;
          return std::nullopt;
        }
        return recover_even_params(f);
      case Family::SigmaIJ: return recognize_sigma_ij(f);
      case Family::HalfCaseI: return recover_half_case1(f);
      case Family::HalfCaseII: return recover_half_case2(f);
      case Family::MidPlus: return recover_mid_plus(f);
      case Family::Triple: return recover_triple(f);
    }
  } catch (const Error&) {
  }
  return std::nullopt;
}

/// Every family description the map admits, finest first.
inline std::vector<FamilyParams> describe_all(const CubeMap& f) {
  std::vector<FamilyParams> out;
  for (Family fam : kAllFamilies)
    if (auto p = recover(f, fam)) out.push_back(std::move(*p));
  return out;
}

/// Strongest classification label whose distance requirement the spectrum meets.
inline ClassTag tag_for_spectrum(const PreservedSet& D) {
  const int n = D.dim();
  if (D.is_full()) return ClassTag::Isometry;
  if (n >= 2 && D.includes(PreservedSet::evens(D.dim()))) return ClassTag::EvenIsometry;
  if (n % 2 == 0 && D.contains(n / 2) && D.contains(n)) return ClassTag::HalfAndN;
  if (n % 4 == 3 && D.contains((n - 1) / 2) && D.contains((n + 1) / 2) && D.contains(n)) return ClassTag::Triple;
  if (n % 2 == 1 && D.contains((n + 1) / 2)) return ClassTag::MidPlus;
  if (D.contains(n)) return ClassTag::NOnly;
  return ClassTag::Generic;
}

inline ClassLabel classify(const CubeMap& f, const ScanOptions& opts = {}) {
  PreservedSet D = preserved_distances(f, opts);
  const ClassTag tag = tag_for_spectrum(D);
  const int n = f.dim();
  std::vector<Family> order;
  switch (tag) {
    case ClassTag::Isometry: order = {Family::Isometry}; break;
    case ClassTag::EvenIsometry:
      order = {Family::EvenIsometry, Family::HalfCaseI, Family::HalfCaseII, Family::NIsometry};
      break;
    case ClassTag::HalfAndN: order = {Family::HalfCaseI, Family::HalfCaseII, Family::NIsometry}; break;
    case ClassTag::Triple: order = {Family::Triple, Family::MidPlus}; break;
    case ClassTag::MidPlus: order = {Family::SigmaIJ, Family::MidPlus}; break;
    case ClassTag::NOnly: order = {Family::NIsometry}; break;
    case ClassTag::Generic: break;
  }
  std::optional<FamilyParams> recovered;
  for (Family fam : order) {
    if (!family_defined_for(fam, n)) continue;
    if ((fam == Family::NIsometry) && !D.contains(n)) continue;
    if ((recovered = recover(f, fam))) break;
  }
  return ClassLabel{tag, std::move(recovered), std::move(D)};
}

// ---------------------------------------------------------------------------
// Embedding C_n into C_{n+1}
// ---------------------------------------------------------------------------

/// ψ((0,c)) = (0,f(c)) and ψ(1̄+(0,c)) = 1̄+(0,f(c)). The word (0,c) has the
/// same numeric value as c, so the lower half of the table is f itself.
inline CubeMap lift_embed(const CubeMap& f) {
  const Dimension m(f.dim() + 1);
  const std::uint32_t ones = m.all_ones();
  const std::uint32_t half = f.dim().size();
  std::vector<std::uint32_t> t(m.size());
  for (std::uint32_t c = 0; c < half; ++c) {
    t[c] = f[c];
    t[c ^ ones] = f[c] ^ ones;
  }
  return CubeMap(m, std::move(t));
}

inline CubeMap restrict_from_extended(const CubeMap& g) {
  const Dimension n(g.dim() - 1);
  std::vector<std::uint32_t> t(n.size());
  for (std::uint32_t c = 0; c < n.size(); ++c) {
    if (g[c] >= n.size()) throw Error(ErrorKind::DoesNotStabilize, "map moves the embedded cube");
    t[c] = g[c];
  }
  return CubeMap(n, std::move(t));
}

}  // namespace weakiso
