#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"

using namespace weakiso;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no exception";
  return ErrorKind::EmptyP;
}

std::vector<int> spectrum_of(const CubeMap& f) { return preserved_distances(f).members(); }

bool contains(const std::vector<int>& v, int d) { return std::find(v.begin(), v.end(), d) != v.end(); }

CoordPermutation perm(int n, std::vector<int> t) { return CoordPermutation(Dimension(n), std::move(t)); }

Word w(const char* s) { return Word::parse(s); }

// Brute force over all bijections of C_n, counting those preserving P.
std::uint64_t brute_count(int n, const std::vector<int>& P) {
  std::vector<std::uint32_t> t(std::size_t{1} << n);
  for (std::uint32_t v = 0; v < t.size(); ++v) t[v] = v;
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (std::uint32_t x = 0; x < t.size() && ok; ++x)
      for (std::uint32_t y = x + 1; y < t.size() && ok; ++y) {
        const int d = oracle::hamming(oracle::text(n, x), oracle::text(n, y));
        if (contains(P, d) && oracle::hamming(oracle::text(n, t[x]), oracle::text(n, t[y])) != d) ok = false;
      }
    count += ok;
  } while (std::next_permutation(t.begin(), t.end()));
  return count;
}

}  // namespace

TEST(Isometry, Examples) {
  const Dimension n(3);
  EXPECT_TRUE(build_isometry({Word::zero(n), CoordPermutation::identity(n)}).is_identity());
  const CubeMap c = build_isometry({Word::ones(n), CoordPermutation::identity(n)});
  for (std::uint32_t v = 0; v < n.size(); ++v) EXPECT_EQ(c[v], v ^ 7U);
  const CubeMap f = build_isometry({w("101"), CoordPermutation::swap(n, 1, 2)});
  EXPECT_EQ(f(w("100")), w("111"));
  EXPECT_EQ(spectrum_of(f), (std::vector<int>{1, 2, 3}));
}

TEST(NIsometry, Examples) {
  const Dimension n(3);
  NIsometryParams p{n, {0, 1, 2, 3}, {false, false, false, false}};
  EXPECT_TRUE(build_n_isometry(p).is_identity());
  p.flips.assign(4, true);
  const CubeMap c = build_n_isometry(p);
  for (std::uint32_t v = 0; v < n.size(); ++v) EXPECT_EQ(c[v], v ^ 7U);
  EXPECT_EQ(collect_family(Family::NIsometry, Dimension(2)).size(), 8U);
  EXPECT_EQ(brute_count(2, {2}), 8U);
}

TEST(NIsometry, MapsPairsOntoPairs) {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 7; ++n) {
    const Dimension d(n);
    for (int k = 0; k < 20; ++k) {
      const CubeMap f = build(random_params(Family::NIsometry, d, rng));
      for (std::uint32_t v = 0; v < d.size(); ++v) ASSERT_EQ(f[v] ^ f[v ^ d.all_ones()], d.all_ones());
      EXPECT_TRUE(contains(spectrum_of(f), n));
    }
  }
}

TEST(NIsometry, RejectsBadPairTable) {
  const Dimension n(3);
  EXPECT_EQ(kind_of([&] { build_n_isometry({n, {0, 0, 2, 3}, {false, false, false, false}}); }),
            ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([&] { build_n_isometry({n, {0, 1, 2}, {false, false, false}}); }), ErrorKind::InvalidParams);
}

TEST(EvenIsometry, Examples) {
  const Dimension n(4);
  const auto id = CoordPermutation::identity(n);
  EXPECT_TRUE(build_even_isometry({Word::zero(n), id, Word::zero(n), id}).is_identity());
  const CubeMap f = build_even_isometry({Word::zero(n), id, Word::zero(n), CoordPermutation::swap(n, 1, 2)});
  const auto D = spectrum_of(f);
  EXPECT_TRUE(contains(D, 2) && contains(D, 4));
  EXPECT_FALSE(contains(D, 1));
  EXPECT_EQ(D, oracle::spectrum(f));
  EXPECT_EQ(kind_of([&] { build_even_isometry({w("0110"), id, w("0100"), id}); }), ErrorKind::ParityViolation);
}

TEST(EvenIsometry, BruteForceCountAtThree) {
  EXPECT_EQ(brute_count(3, {2}), 1152U);
  EXPECT_EQ(param_space_size(Family::EvenIsometry, Dimension(3)), BigInt(1152));
  EXPECT_EQ(brute_count(3, {1, 2, 3}), 48U);
  EXPECT_EQ(param_space_size(Family::Isometry, Dimension(3)), BigInt(48));
}

TEST(SigmaIJ, Examples) {
  const Dimension n(3);
  const SigmaIJParams p{n, 1, 2, {0, 1, 3}};
  const CubeMap f = build_sigma_ij(p);
  EXPECT_EQ(f(w("000")), w("000"));
  EXPECT_EQ(f(w("100")), w("111"));
  EXPECT_EQ(kind_of([&] { build_sigma_ij({n, 1, 2, {0, 2, 3}}); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([&] { build_sigma_ij({n, 4, 2, {0, 1, 3}}); }), ErrorKind::InvalidParams);
}

TEST(SigmaIJ, FixesZeroAndSendsUnitToOnes) {
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 9; ++n) {
    const Dimension d(n);
    for (int k = 0; k < 10; ++k) {
      const SigmaIJParams p = detail::random_sigma(d, rng);
      const CubeMap f = build_sigma_ij(p);
      EXPECT_EQ(f[0], 0U);
      EXPECT_EQ(f(Word::unit(d, p.i)), Word::ones(d));
    }
  }
}

TEST(SigmaIJ, PreservesParityAtFive) {
  const Dimension n(5);
  detail::for_each_sigma(n, [&](const SigmaIJParams& p) {
    const CubeMap f = build_sigma_ij(p);
    for (std::uint32_t v = 0; v < n.size(); ++v)
      ASSERT_EQ(oracle::ones(oracle::text(5, v)) % 2, oracle::ones(oracle::text(5, f[v])) % 2);
  });
}

TEST(SigmaIJ, TranslationLaw) {
  std::mt19937_64 rng(8);
  for (int n = 1; n <= 7; ++n) {
    const Dimension d(n);
    std::vector<SigmaIJParams> ps;
    if (n <= 5) {
      detail::for_each_sigma(d, [&](const SigmaIJParams& p) { ps.push_back(p); });
    } else {
      for (int k = 0; k < 40; ++k) ps.push_back(detail::random_sigma(d, rng));
    }
    for (const auto& p : ps) {
      const CubeMap f = build_sigma_ij(p);
      for (std::uint32_t a = 0; a < d.size(); ++a)
        for (std::uint32_t c = 0; c < d.size(); ++c) ASSERT_EQ(f[a ^ c], f[a] ^ f[c]);
    }
  }
}

TEST(DiagonalExample, MatchesSigma) {
  EXPECT_EQ(build_krasin_example(Dimension(3), 1), build_sigma_ij(SigmaIJParams::diagonal(Dimension(3), 1)));
  const Dimension n(5);
  const CubeMap f = build_krasin_example(n, 2);
  EXPECT_EQ(f[0], 0U);
  EXPECT_EQ(f(Word::unit(n, 2)), Word::ones(n));
  EXPECT_TRUE(contains(oracle::spectrum(f), 3));
  EXPECT_EQ(kind_of([] { build_krasin_example(Dimension(4), 1); }), ErrorKind::WrongResidue);
}

TEST(HalfCaseI, Examples) {
  const Dimension n(6);
  const auto id = CoordPermutation::identity(n);
  EXPECT_TRUE(build_half_case1({id, {}, Word::zero(n)}).is_identity());
  const CubeMap f = build_half_case1({id, {Word::zero(n)}, Word::zero(n)});
  EXPECT_EQ(f[0], n.all_ones());
  EXPECT_EQ(f[n.all_ones()], 0U);
  for (std::uint32_t v = 1; v + 1 < n.size(); ++v) EXPECT_EQ(f[v], v);
  EXPECT_EQ(spectrum_of(f), (std::vector<int>{3, 6}));
  EXPECT_EQ(oracle::spectrum(f), (std::vector<int>{3, 6}));
  EXPECT_EQ(kind_of([] { build_half_case1({CoordPermutation::identity(Dimension(4)), {}, Word::zero(Dimension(4))}); }),
            ErrorKind::WrongResidue);
}

TEST(HalfCaseI, RejectsWordsOutsideX) {
  const Dimension n(6);
  const auto id = CoordPermutation::identity(n);
  EXPECT_EQ(kind_of([&] { build_half_case1({id, {w("100011")}, Word::zero(n)}); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([&] { build_half_case1({id, {w("111100")}, Word::zero(n)}); }), ErrorKind::InvalidParams);
}

TEST(HalfCaseII, Examples) {
  const Dimension n(4);
  const auto id = CoordPermutation::identity(n);
  const Word e1 = Word::unit(n, 1);
  const CubeMap f = build_half_case2({id, id, {}, {}, e1, e1, Word::zero(n)});
  const auto D = oracle::spectrum(f);
  EXPECT_TRUE(contains(D, 2) && contains(D, 4));
  EXPECT_EQ(D, spectrum_of(f));
  EXPECT_EQ(kind_of([&] { build_half_case2({id, id, {}, {}, w("1100"), e1, Word::zero(n)}); }),
            ErrorKind::ParityViolation);
  EXPECT_EQ(kind_of([&] { build_half_case2({id, id, {w("0100")}, {}, e1, e1, Word::zero(n)}); }),
            ErrorKind::InvalidParams);
}

TEST(MidPlus, SigmaOnBothPartsAtFive) {
  const Dimension n(5);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const SigmaIJParams tau = detail::random_sigma(n, rng);
    const SigmaRestriction part{tau, Word::zero(n)};
    EXPECT_EQ(build_mid_plus({part, part, Word::zero(n)}), build_sigma_ij(tau));
  }
}

TEST(MidPlus, IllegalCombinationAtFive) {
  const Dimension n(5);
  const SigmaRestriction s1{SigmaIJParams::diagonal(n, 1), Word::zero(n)};
  const SigmaRestriction s2{SigmaIJParams::diagonal(n, 2), Word::zero(n)};
  EXPECT_EQ(kind_of([&] { build_mid_plus({s1, s2, Word::zero(n)}); }), ErrorKind::IllegalCombination);
  const EvenRestriction e{Word::zero(n), CoordPermutation::identity(n)};
  EXPECT_EQ(kind_of([&] { build_mid_plus({e, s1, Word::zero(n)}); }), ErrorKind::IllegalCombination);
  EXPECT_EQ(kind_of([&] { build_mid_plus({EvenRestriction{Word::zero(Dimension(4)), CoordPermutation::identity(Dimension(4))},
                                          EvenRestriction{Word::zero(Dimension(4)), CoordPermutation::identity(Dimension(4))},
                                          Word::zero(Dimension(4))}); }),
            ErrorKind::WrongResidue);
}

TEST(MidPlus, CasesAtSeven) {
  const Dimension n(7);
  const EvenRestriction even{w("0000011"), perm(7, {2, 1, 3, 4, 5, 6, 7})};
  const SigmaRestriction odd{{n, 2, 5, {3, 0, 1, 2, 4, 6, 7}}, w("0110000")};
  const CubeMap f = build_mid_plus({even, odd, Word::zero(n)});
  EXPECT_TRUE(contains(oracle::spectrum(f), 4));

  // Two unrelated σ maps on the two parity classes.
  const SigmaRestriction t1{SigmaIJParams::diagonal(n, 1), Word::zero(n)};
  const SigmaRestriction t2{{n, 3, 6, {1, 2, 0, 3, 4, 5, 7}}, Word::zero(n)};
  const CubeMap g = build_mid_plus({t1, t2, Word::zero(n)});
  const auto D = oracle::spectrum(g);
  EXPECT_TRUE(contains(D, 4));
  EXPECT_FALSE(contains(D, 7));
}

TEST(MidPlus, OddSigmaShiftMustBeEven) {
  const Dimension n(7);
  const SigmaRestriction t{SigmaIJParams::diagonal(n, 1), Word::zero(n)};
  const SigmaRestriction bad{SigmaIJParams::diagonal(n, 2), w("1000000")};
  EXPECT_EQ(kind_of([&] { build_mid_plus({t, bad, Word::zero(n)}); }), ErrorKind::ParityViolation);
}

TEST(Triple, Examples) {
  const Dimension n3(3);
  const CubeMap f = build_triple({SigmaIJParams::diagonal(n3, 1), Word::zero(n3)});
  EXPECT_EQ(oracle::spectrum(f), (std::vector<int>{1, 2, 3}));

  const Dimension n(7);
  std::mt19937_64 rng(21);
  for (int k = 0; k < 5; ++k) {
    SigmaIJParams tau{n, 2, 5, std::vector<int>(7, 0)};
    std::vector<int> targets{1, 2, 3, 4, 6, 7};
    std::shuffle(targets.begin(), targets.end(), rng);
    std::size_t t = 0;
    for (int u = 1; u <= 7; ++u)
      if (u != 2) tau.sigma[static_cast<std::size_t>(u - 1)] = targets[t++];
    const auto D = spectrum_of(build_triple({tau, Word::zero(n)}));
    EXPECT_TRUE(contains(D, 3) && contains(D, 4) && contains(D, 7));
    EXPECT_FALSE(contains(D, 1));
  }
  EXPECT_EQ(kind_of([] { build_triple({SigmaIJParams::diagonal(Dimension(5), 1), Word::zero(Dimension(5))}); }),
            ErrorKind::WrongResidue);
}

// Every sampled member preserves the family's distances; p, n => n-p closure
// holds on every spectrum.
TEST(Families, SoundnessOnSamples) {
  std::mt19937_64 rng(2024);
  for (int n = 1; n <= 7; ++n) {
    const Dimension d(n);
    for (Family f : kAllFamilies) {
      if (!family_defined_for(f, n)) {
        EXPECT_EQ(kind_of([&] { random_params(f, d, rng); }), ErrorKind::WrongResidue);
        continue;
      }
      const PreservedSet req = family_requirement(f, d);
      for (int k = 0; k < 200; ++k) {
        const CubeMap m = build(random_params(f, d, rng));
        const PreservedSet D = preserved_distances(m);
        ASSERT_TRUE(D.includes(req)) << family_tag(f) << " n=" << n;
        if (D.contains(n)) {
          for (int p : D.members()) EXPECT_TRUE(p == n || D.contains(n - p));
        }
        if (n <= 4 && k < 5) {
          EXPECT_EQ(D.members(), oracle::spectrum(m));
        }
      }
    }
  }
}

// Enumeration count agrees with param_space_size wherever the walk is cheap.
TEST(Families, SizeMatchesEnumeration) {
  int compared = 0;
  for (int n = 1; n <= 7; ++n) {
    const Dimension d(n);
    for (Family f : kAllFamilies) {
      if (!family_defined_for(f, n)) continue;
      const BigInt tuples = detail::enumeration_tuples(f, d);
      if (tuples * d.size() > BigInt(1) << 27) continue;
      std::uint64_t count = 0;
      enumerate_family(f, d, [&](const CubeMap&) { ++count; });
      EXPECT_EQ(BigInt(count), param_space_size(f, d)) << family_tag(f) << " n=" << n;
      ++compared;
    }
  }
  EXPECT_EQ(compared, 24);
}

TEST(Families, EnumerationHasNoDuplicates) {
  const std::pair<Family, int> cases[] = {{Family::Isometry, 6},  {Family::SigmaIJ, 7}, {Family::MidPlus, 5},
                                          {Family::NIsometry, 3}, {Family::Triple, 3},  {Family::HalfCaseII, 4},
                                          {Family::HalfCaseI, 2}, {Family::EvenIsometry, 4}};
  for (auto [f, n] : cases) {
    std::set<std::vector<std::uint32_t>> seen;
    std::size_t total = 0;
    enumerate_family(f, Dimension(n), [&](const CubeMap& m) {
      seen.insert(m.table());
      ++total;
    });
    EXPECT_EQ(seen.size(), total) << family_tag(f) << " n=" << n;
  }
}

TEST(Families, KnownSizes) {
  EXPECT_EQ(param_space_size(Family::NIsometry, Dimension(2)), BigInt(8));
  EXPECT_EQ(param_space_size(Family::NIsometry, Dimension(4)), BigInt(10321920));
  EXPECT_EQ(param_space_size(Family::SigmaIJ, Dimension(9)), BigInt(9 * 362880));
  EXPECT_EQ(param_space_size(Family::HalfCaseII, Dimension(4)), BigInt(294912));
  EXPECT_EQ(kind_of([] { param_space_size(Family::Triple, Dimension(5)); }), ErrorKind::WrongResidue);
}

TEST(Families, EnumerationGuard) {
  Guards g = Guards::from_env();
  g.enumerate_limit = 1000;
  EXPECT_EQ(kind_of([&] { collect_family(Family::Isometry, Dimension(5), g); }), ErrorKind::ResourceGuard);
  EXPECT_EQ(kind_of([&] { collect_family(Family::HalfCaseI, Dimension(5)); }), ErrorKind::WrongResidue);
}

// The smaller member of a weight-n/2 complement pair is the one with coordinate 1 equal to 0.
TEST(Families, PairRepresentativeConvention) {
  for (int n = 2; n <= 12; n += 2) {
    const Dimension d(n);
    for (std::uint32_t v = 0; v < d.size(); ++v) {
      const std::string s = oracle::text(n, v);
      if (oracle::ones(s) != n / 2) continue;
      const std::uint32_t rep = detail::pair_rep(v, d.all_ones());
      EXPECT_EQ(rep == v, s[0] == '0');
    }
  }
}
