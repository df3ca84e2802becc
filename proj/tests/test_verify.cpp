#include <gtest/gtest.h>

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

std::vector<int> closure_of(int n, std::initializer_list<int> ds) { return closure(PreservedSet(Dimension(n), ds)).members(); }

VerificationReport run(const std::string& id, int n, std::vector<int> P = {}, std::optional<int> p = std::nullopt) {
  VerifyRequest r;
  r.id = id;
  r.n = n;
  r.P = std::move(P);
  r.p = p;
  return run_verify(r);
}

}  // namespace

TEST(Closure, Examples) {
  EXPECT_EQ(closure_of(5, {1}), (std::vector<int>{1, 2, 3, 4, 5}));
  EXPECT_EQ(closure_of(6, {2}), (std::vector<int>{2, 4, 6}));
  EXPECT_EQ(closure_of(6, {4}), (std::vector<int>{2, 4, 6}));
  EXPECT_EQ(closure_of(6, {3}), (std::vector<int>{3, 6}));
  EXPECT_EQ(closure_of(6, {2, 3}), (std::vector<int>{2, 3, 4, 6}));
  EXPECT_EQ(closure_of(7, {3}), (std::vector<int>{3, 4, 7}));
  EXPECT_EQ(closure_of(7, {4}), (std::vector<int>{4}));
  EXPECT_EQ(closure_of(7, {5}), (std::vector<int>{1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(closure_of(9, {4}), (std::vector<int>{2, 4, 6, 8}));
  EXPECT_EQ(closure_of(9, {5}), (std::vector<int>{5}));
  EXPECT_EQ(closure_of(5, {2, 3}), (std::vector<int>{1, 2, 3, 4, 5}));
  EXPECT_EQ(closure_of(7, {2, 7}), (std::vector<int>{1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(closure_of(8, {3, 8}), (std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8}));
  EXPECT_EQ(closure_of(7, {7}), (std::vector<int>{7}));
  EXPECT_EQ(closure_of(7, {1, 7}).size(), 7U);
}

TEST(Closure, GenericDistances) {
  EXPECT_TRUE(is_generic_distance(9, 3));
  EXPECT_FALSE(is_generic_distance(9, 4));
  EXPECT_FALSE(is_generic_distance(9, 5));
  EXPECT_FALSE(is_generic_distance(8, 4));
  EXPECT_FALSE(is_generic_distance(8, 8));
  EXPECT_TRUE(is_generic_distance(8, 3));
}

// Every member of aut(n,P) preserves closure(P); exhaustive over P for n <= 3,
// over generators for the rest.
TEST(Closure, SoundAgainstOracle) {
  for (int n = 1; n <= 3; ++n) {
    const Dimension d(n);
    for (std::uint32_t s = 1; s < (1U << n); ++s) {
      PreservedSet P(d);
      for (int k = 1; k <= n; ++k)
        if ((s >> (k - 1)) & 1U) P.insert(k);
      const PreservedSet Q = closure(P);
      for (const auto& m : brute_force_members(d, P)) ASSERT_TRUE(preserved_distances(m).includes(Q));
    }
  }
  for (int n = 4; n <= 7; ++n) {
    const Dimension d(n);
    for (int p = 1; p <= n; ++p) {
      const PreservedSet Q = closure(PreservedSet(d, {p}));
      for (const auto& g : aut_group(d, PreservedSet(d, {p})).generators())
        ASSERT_TRUE(preserved_distances(g).includes(Q)) << "n=" << n << " p=" << p;
    }
  }
}

TEST(ClassRequirement, Values) {
  const Dimension n(7);
  EXPECT_EQ(class_requirement(ClassTag::Triple, n).members(), (std::vector<int>{3, 4, 7}));
  EXPECT_EQ(class_requirement(ClassTag::MidPlus, n).members(), (std::vector<int>{4}));
  EXPECT_TRUE(class_requirement(ClassTag::Generic, n).empty());
  EXPECT_EQ(class_requirement(ClassTag::HalfAndN, Dimension(6)).members(), (std::vector<int>{3, 6}));
}

TEST(UnionSize, MatchesSearch) {
  const Dimension five(5);
  const auto fams5 = families_preserving(PreservedSet(five, {3}));
  EXPECT_EQ(union_size(five, fams5), BigInt(23040));
  EXPECT_EQ(union_size(five, fams5), aut_group(five, PreservedSet(five, {3})).order());

  const Dimension four(4);
  const PreservedSet P4(four, {2, 4});
  EXPECT_EQ(union_size(four, families_preserving(P4)), aut_group(four, P4).order());

  const Dimension seven(7);
  const PreservedSet T(seven, {3, 4, 7});
  EXPECT_EQ(union_size(seven, families_preserving(T)), aut_group(seven, T).order());
  EXPECT_EQ(union_size(seven, {}), BigInt(0));
}

TEST(RunVerify, Passing) {
  for (const auto& [id, n] : std::vector<std::pair<std::string, int>>{
           {"lemma1", 4}, {"lemma2", 5}, {"thm2", 3}, {"thm3", 3}, {"thm6", 5}, {"thm7", 3}, {"sec3.5", 5}}) {
    const auto rep = run(id, n);
    EXPECT_TRUE(rep.pass) << id << " n=" << n << " " << rep.evidence.dump();
    EXPECT_EQ(rep.n, n);
  }
  EXPECT_TRUE(run("thm-krasin", 6, {}, 2).pass);
  EXPECT_TRUE(run("main", 5, {3}).pass);
  EXPECT_TRUE(run("main", 6, {2, 3}).pass);
}

// aut(4,{2}) is the larger case-II group, so the even-isometry count falls short.
TEST(RunVerify, DistanceTwoAtFourFails) {
  const auto rep = run("lemma2", 4);
  EXPECT_FALSE(rep.pass);
  const auto& checks = rep.evidence.at("checks");
  EXPECT_EQ(checks[0].at("oracle_order"), "294912");
  EXPECT_EQ(checks[0].at("expected_order"), "73728");
  EXPECT_TRUE(checks[1].at("pass").get<bool>());
}

TEST(RunVerify, Errors) {
  EXPECT_EQ(kind_of([] { run("lemma1", 7); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([] { run("thm5", 8); }), ErrorKind::ResourceGuard);
  EXPECT_EQ(kind_of([] { run("sec3.5", 7); }), ErrorKind::ResourceGuard);
  EXPECT_EQ(kind_of([] { run("thm-krasin", 6); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([] { run("thm-krasin", 7, {}, 3); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([] { run("main", 5); }), ErrorKind::EmptyP);
  EXPECT_EQ(kind_of([] { run("main", 9, {3}); }), ErrorKind::ResourceGuard);
  EXPECT_EQ(kind_of([] { run("nope", 3); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([] { run("lemma1", 0); }), ErrorKind::DimensionOutOfRange);
}

TEST(RunVerify, ReportShape) {
  const auto rep = run("thm3", 2);
  const auto j = report_json(rep, false);
  EXPECT_EQ(j.at("id"), "thm3");
  EXPECT_EQ(j.at("status"), "pass");
  EXPECT_EQ(j.at("P"), io::json::parse("[2]"));
  EXPECT_FALSE(j.contains("wall_seconds"));
  EXPECT_TRUE(report_json(rep, true).contains("wall_seconds"));
  EXPECT_EQ(verify_ids().size(), 11U);
}
