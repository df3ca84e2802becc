#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "weakiso/classify.hpp"
#include "weakiso/families.hpp"
#include "weakiso/groupsearch.hpp"
#include "weakiso/io.hpp"

namespace weakiso {

// ---------------------------------------------------------------------------
// Spectrum-level upgrade rules
// ---------------------------------------------------------------------------

/// Distances outside the exceptional set {(n-1)/2, n/2, (n+1)/2, n}.
inline bool is_generic_distance(int n, int p) {
  if (p == n) return false;
  if (n % 2 == 0) return 2 * p != n;
  return 2 * p != n - 1 && 2 * p != n + 1;
}

/// Everything forced by preserving P, using only the stated upgrade rules.
inline PreservedSet closure(const PreservedSet& P) {
  const Dimension n = P.dim();
  const int N = n.value();
  const PreservedSet evens = PreservedSet::evens(n);
  PreservedSet Q = P;
  while (true) {
    PreservedSet R = Q;
    for (int p : Q.members()) {
      if (p == 1 || (p % 2 == 1 && is_generic_distance(N, p))) R = PreservedSet::all(n);
      if (p == 2 || (p % 2 == 0 && is_generic_distance(N, p))) R = R.includes(evens) ? R : PreservedSet(n, R.mask() | evens.mask());
      if (p < N && Q.contains(N)) R.insert(N - p);
      if (p < N && Q.contains(N - p)) R.insert(N);
    }
    if (N % 2 == 0 && Q.contains(N / 2)) R.insert(N);
    if (N % 4 == 3 && Q.contains((N - 1) / 2)) {
      R.insert((N + 1) / 2);
      R.insert(N);
    }
    if (N % 4 == 1 && N > 1 && Q.contains((N - 1) / 2)) R = PreservedSet(n, R.mask() | evens.mask());
    if (N % 2 == 1 && N >= 3 && Q.includes(evens)) {
      // an even isometry that also keeps n, or (n ≡ 1) keeps (n+1)/2, is an isometry
      if (Q.contains(N) || (N % 4 == 1 && Q.contains((N + 1) / 2))) R = PreservedSet::all(n);
    }
    if (R == Q) return Q;
    Q = R;
  }
}

/// The distance set a class is defined by.
inline PreservedSet class_requirement(ClassTag tag, Dimension n) {
  const int N = n.value();
  switch (tag) {
    case ClassTag::Isometry: return PreservedSet::all(n);
    case ClassTag::EvenIsometry: return PreservedSet::evens(n);
    case ClassTag::HalfAndN: return PreservedSet::from_list(n, {N / 2, N});
    case ClassTag::Triple: return PreservedSet::from_list(n, {(N - 1) / 2, (N + 1) / 2, N});
    case ClassTag::MidPlus: return PreservedSet::from_list(n, {(N + 1) / 2});
    case ClassTag::NOnly: return PreservedSet::from_list(n, {N});
    case ClassTag::Generic: break;
  }
  return PreservedSet(n);
}

/// Families all of whose members preserve Q.
inline std::vector<Family> families_preserving(const PreservedSet& Q) {
  std::vector<Family> out;
  for (Family f : kAllFamilies)
    if (family_defined_for(f, Q.dim()) && family_requirement(f, Q.dim()).includes(Q)) out.push_back(f);
  return out;
}

/// Number of distinct maps in the union of the given families. For n <= 4 the
/// smaller families are walked and tested against the largest one; above that
/// the union is the largest family, or triple plus isometry.
inline BigInt union_size(Dimension n, const std::vector<Family>& fams, const Guards& guards = Guards::from_env()) {
  if (fams.empty()) return 0;
  std::vector<BigInt> sizes;
  for (Family f : fams) sizes.push_back(param_space_size(f, n, guards));
  const auto big = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  const Family top = fams[big];
  if (n <= 4) {
    std::unordered_set<CubeMap> extra;
    for (std::size_t k = 0; k < fams.size(); ++k) {
      if (k == big) continue;
      enumerate_family(
          fams[k], n,
          [&](const CubeMap& m) {
            if (!recover(m, top)) extra.insert(m);
          },
          guards);
    }
    return sizes[big] + BigInt(extra.size());
  }
  // triple maps sit inside mid_plus and n_isometry but are never isometries
  if (top == Family::Triple) {
    BigInt total = 0;
    for (std::size_t k = 0; k < fams.size(); ++k) {
      if (fams[k] != Family::Triple && fams[k] != Family::Isometry) throw std::logic_error("unexpected family mix");
      total += sizes[k];
    }
    return total;
  }
  return sizes[big];
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct VerifyOptions {
  bool slow = false;
  int threads = 1;
  Guards guards = Guards::from_env();
};

struct VerifyRequest {
  std::string id;
  int n = 0;
  std::optional<int> p;  // thm-krasin
  std::vector<int> P;    // main
};

struct VerificationReport {
  std::string id;
  int n = 0;
  std::vector<int> P;
  bool pass = false;
  io::json evidence = io::json::object();
  double wall_seconds = 0;
};

inline io::json report_json(const VerificationReport& r, bool timing) {
  io::json j{{"id", r.id}, {"n", r.n}, {"P", r.P}, {"status", r.pass ? "pass" : "fail"}, {"evidence", r.evidence}};
  if (timing) j["wall_seconds"] = r.wall_seconds;
  return j;
}

namespace detail {

/// Gathers named checks into the evidence object.
class Checks {
 public:
  void order(const std::string& name, const BigInt& oracle, const BigInt& expected) {
    add({{"check", name}, {"pass", oracle == expected}, {"oracle_order", to_decimal(oracle)}, {"expected_order", to_decimal(expected)}});
  }

  void fact(const std::string& name, bool ok, io::json details = io::json::object()) {
    details["check"] = name;
    details["pass"] = ok;
    add(std::move(details));
  }

  /// Runs `why_not` on every generator; a non-empty result is a failure.
  void generators(const std::string& name, const std::vector<CubeMap>& gens,
                  const std::function<std::optional<std::string>(const CubeMap&)>& why_not) {
    io::json failures = io::json::array();
    std::size_t failed = 0;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      auto reason = why_not(gens[k]);
      if (!reason) continue;
      ++failed;
      if (failures.size() < 3) failures.push_back({{"index", k}, {"reason", *reason}, {"map", io::map_to_json(gens[k])}});
    }
    io::json d{{"generators", gens.size()}, {"failed", failed}};
    if (failed) d["counterexamples"] = std::move(failures);
    fact(name, failed == 0, std::move(d));
  }

  bool pass() const { return pass_; }
  io::json take() { return io::json{{"checks", std::move(list_)}}; }

 private:
  void add(io::json c) {
    pass_ = pass_ && c["pass"].get<bool>();
    list_.push_back(std::move(c));
  }

  io::json list_ = io::json::array();
  bool pass_ = true;
};

inline std::optional<std::string> spectrum_covers(const CubeMap& g, const PreservedSet& want, int threads) {
  const auto D = preserved_distances(g, ScanOptions{threads});
  if (D.includes(want)) return std::nullopt;
  return "spectrum " + io::spectrum_json(D).dump() + " misses part of " + io::spectrum_json(want).dump();
}

inline std::optional<std::string> recovers_in(const CubeMap& g, const std::vector<Family>& fams) {
  for (Family f : fams) {
    if (auto p = recover(g, f); p && build(*p) == g) return std::nullopt;
  }
  std::string names;
  for (Family f : fams) names += (names.empty() ? "" : ", ") + std::string(family_tag(f));
  return "no recovery in {" + names + "}";
}

inline bool in_matrix(const std::vector<int>& allowed, int n) {
  return std::find(allowed.begin(), allowed.end(), n) != allowed.end();
}

inline void outside_matrix(const VerifyRequest& r) {
  throw Error(ErrorKind::InvalidParams, "n=" + std::to_string(r.n) + " is outside the supported range for " + r.id);
}

inline void needs_slow(const VerifyRequest& r, const VerifyOptions& o) {
  require_guard(o.slow, r.id + " at n=" + std::to_string(r.n) + " needs --slow");
}

}  // namespace detail

inline const std::vector<std::string>& verify_ids() {
  static const std::vector<std::string> ids{"lemma1", "lemma2", "thm2", "thm3", "thm4", "thm5",
                                            "thm6",   "thm7",   "sec3.5", "thm-krasin", "main"};
  return ids;
}

/// Runs one verification. Throws InvalidParams outside the supported matrix and
/// ResourceGuard when a case needs --slow or exceeds the search guard.
inline VerificationReport run_verify(const VerifyRequest& req, const VerifyOptions& opts = {}) {
  using detail::Checks;
  const auto t0 = std::chrono::steady_clock::now();
  SearchOptions so{opts.threads, opts.guards, false};
  if (opts.slow) so.guards.search_max_n = std::max(so.guards.search_max_n, 8);
  const int N = req.n;
  if (N < 1 || N > kMaxN) throw Error(ErrorKind::DimensionOutOfRange, "n must lie in 1.." + std::to_string(kMaxN));
  const Dimension n(N);
  const int threads = opts.threads;

  VerificationReport rep;
  rep.id = req.id;
  rep.n = N;
  Checks checks;

  auto search = [&](const PreservedSet& P) { return aut_group(n, P, so); };
  auto set_P = [&](const PreservedSet& P) { rep.P = P.members(); };

  const std::string& id = req.id;
  if (id == "lemma1") {
    if (!detail::in_matrix({2, 3, 4, 5, 6}, N)) detail::outside_matrix(req);
    const auto P = PreservedSet::from_list(n, {1});
    set_P(P);
    const auto G = search(P);
    checks.order("order equals isometry count", G.order(), param_space_size(Family::Isometry, n, opts.guards));
    checks.generators("generators decompose as isometries", G.generators(), [&](const CubeMap& g) -> std::optional<std::string> {
      try {
        if (build_isometry(decompose_isometry(g)) != g) return "rebuilt table differs";
      } catch (const Error& e) {
        return e.what();
      }
      return detail::spectrum_covers(g, PreservedSet::all(n), threads);
    });
  } else if (id == "lemma2" || id == "thm2") {
    if (!detail::in_matrix(id == "lemma2" ? std::vector<int>{3, 4, 5, 6} : std::vector<int>{3, 4, 5}, N)) detail::outside_matrix(req);
    const auto P = PreservedSet::from_list(n, {2});
    set_P(P);
    const auto G = search(P);
    checks.order("order equals even-isometry count", G.order(), param_space_size(Family::EvenIsometry, n, opts.guards));
    if (id == "lemma2") {
      checks.generators("generators preserve every even distance", G.generators(),
                        [&](const CubeMap& g) { return detail::spectrum_covers(g, PreservedSet::evens(n), threads); });
    } else {
      checks.generators("generators recover even-isometry parameters", G.generators(),
                        [&](const CubeMap& g) { return detail::recovers_in(g, {Family::EvenIsometry}); });
    }
  } else if (id == "thm3") {
    if (!detail::in_matrix({2, 3, 4, 5}, N)) detail::outside_matrix(req);
    const auto P = PreservedSet::from_list(n, {N});
    set_P(P);
    const auto G = search(P);
    checks.order("order equals n-isometry count", G.order(), param_space_size(Family::NIsometry, n, opts.guards));
    checks.generators("generators recover pair permutations", G.generators(),
                      [&](const CubeMap& g) { return detail::recovers_in(g, {Family::NIsometry}); });
  } else if (id == "thm4" || id == "thm5") {
    const bool case1 = id == "thm4";
    if (case1 && N != 6) detail::outside_matrix(req);
    if (!case1 && N != 4 && N != 8) detail::outside_matrix(req);
    if (!case1 && N == 8) detail::needs_slow(req, opts);
    const Family fam = case1 ? Family::HalfCaseI : Family::HalfCaseII;
    const auto P = PreservedSet::from_list(n, {N / 2});
    const auto PN = PreservedSet::from_list(n, {N / 2, N});
    set_P(P);
    const auto G = search(P);
    const auto H = search(PN);
    checks.order("order equals {n/2,n} order", G.order(), H.order());
    bool mutual = true;
    for (const auto& g : G.generators()) mutual = mutual && H.contains(g);
    for (const auto& h : H.generators()) mutual = mutual && G.contains(h);
    checks.fact("groups contain each other's generators", mutual);
    checks.order(std::string("order equals ") + std::string(family_tag(fam)) + " count", G.order(),
                 param_space_size(fam, n, opts.guards));
    checks.generators("generators recover flip parameters", G.generators(),
                      [&](const CubeMap& g) { return detail::recovers_in(g, {fam}); });
  } else if (id == "thm6") {
    if (!detail::in_matrix({5, 7}, N)) detail::outside_matrix(req);
    const auto P = PreservedSet::from_list(n, {(N + 1) / 2});
    set_P(P);
    const auto G = search(P);
    checks.order("order equals mid_plus count", G.order(), param_space_size(Family::MidPlus, n, opts.guards));
    checks.generators("generators recover mid_plus parameters", G.generators(),
                      [&](const CubeMap& g) { return detail::recovers_in(g, {Family::MidPlus}); });
    if (N % 4 == 1) {
      checks.generators("generators are labelled MidPlus or Isometry", G.generators(), [&](const CubeMap& g) -> std::optional<std::string> {
        const auto tag = classify(g, ScanOptions{threads}).tag;
        if (tag == ClassTag::MidPlus || tag == ClassTag::Isometry) return std::nullopt;
        return "label " + std::string(class_tag_name(tag));
      });
    }
  } else if (id == "thm7") {
    if (!detail::in_matrix({3, 7}, N)) detail::outside_matrix(req);
    const auto P = PreservedSet::from_list(n, {(N - 1) / 2, (N + 1) / 2, N});
    set_P(P);
    const auto G = search(P);
    checks.order("order equals |triple ∪ isometry|", G.order(), union_size(n, {Family::Isometry, Family::Triple}, opts.guards));
    checks.generators("generators are triple maps or isometries", G.generators(),
                      [&](const CubeMap& g) { return detail::recovers_in(g, {Family::Triple, Family::Isometry}); });
  } else if (id == "sec3.5") {
    if (!detail::in_matrix({5, 7}, N)) detail::outside_matrix(req);
    if (N == 7) detail::needs_slow(req, opts);
    const int q = (N - 1) / 2;
    const auto P = PreservedSet::from_list(n, {q});
    set_P(P);
    const auto G = search(P);
    if (N == 5) {
      checks.order("order equals even-isometry count", G.order(), param_space_size(Family::EvenIsometry, n, opts.guards));
      checks.generators("generators preserve every even distance", G.generators(),
                        [&](const CubeMap& g) { return detail::spectrum_covers(g, PreservedSet::evens(n), threads); });
    } else {
      const auto want = PreservedSet::from_list(n, {q, q + 1, N});
      checks.order("order equals |triple ∪ isometry|", G.order(), union_size(n, {Family::Isometry, Family::Triple}, opts.guards));
      checks.generators("generators preserve {(n-1)/2,(n+1)/2,n}", G.generators(),
                        [&](const CubeMap& g) { return detail::spectrum_covers(g, want, threads); });
    }
  } else if (id == "thm-krasin") {
    if (!req.p) throw Error(ErrorKind::InvalidParams, "thm-krasin needs p");
    const int p = *req.p;
    const bool odd_case = (N == 6 && p == 5) || (N == 7 && p == 5);
    if (!odd_case && !(N == 6 && p == 2)) {
      throw Error(ErrorKind::InvalidParams, "(n,p)=(" + std::to_string(N) + "," + std::to_string(p) + ") is outside the supported range");
    }
    const auto P = PreservedSet::from_list(n, {p});
    set_P(P);
    const auto G = search(P);
    if (odd_case) {
      checks.order("order equals 2^n n!", G.order(), pow2(static_cast<std::uint64_t>(N)) * factorial(static_cast<std::uint64_t>(N)));
      checks.generators("generators decompose as isometries", G.generators(),
                        [&](const CubeMap& g) { return detail::recovers_in(g, {Family::Isometry}); });
    } else {
      checks.order("order equals even-isometry count", G.order(), param_space_size(Family::EvenIsometry, n, opts.guards));
      checks.generators("generators preserve every even distance", G.generators(),
                        [&](const CubeMap& g) { return detail::spectrum_covers(g, PreservedSet::evens(n), threads); });
    }
  } else if (id == "main") {
    const auto P = PreservedSet::from_list(n, req.P);
    if (P.empty()) throw Error(ErrorKind::EmptyP, "P must contain at least one distance");
    set_P(P);
    const auto Q = closure(P);
    const ClassTag tag = tag_for_spectrum(Q);
    const bool predicted = Q == class_requirement(tag, n);
    const auto G = search(P);
    checks.fact("predicted class", true,
                {{"closure", io::spectrum_json(Q)}, {"class", std::string(class_tag_name(tag))}, {"order_predicted", predicted}});
    if (predicted) {
      const auto fams = families_preserving(Q);
      checks.order("order equals class count", G.order(), union_size(n, fams, opts.guards));
      checks.generators("generators belong to the class", G.generators(),
                        [&](const CubeMap& g) { return detail::recovers_in(g, fams); });
    } else {
      checks.generators("generators belong to some family", G.generators(), [&](const CubeMap& g) -> std::optional<std::string> {
        if (classify(g, ScanOptions{threads}).tag == ClassTag::Generic) return "label Generic";
        if (describe_all(g).empty()) return "no family recovers the map";
        return std::nullopt;
      });
    }
    checks.generators("generators preserve the closure", G.generators(),
                      [&](const CubeMap& g) { return detail::spectrum_covers(g, Q, threads); });
  } else {
    throw Error(ErrorKind::InvalidParams, "unknown verification id '" + id + "'");
  }

  rep.pass = checks.pass();
  rep.evidence = checks.take();
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace weakiso
