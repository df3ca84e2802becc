#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "weakiso/bigint.hpp"
#include "weakiso/bitword.hpp"
#include "weakiso/cubemap.hpp"
#include "weakiso/detail/refinement.hpp"
#include "weakiso/detail/schreier_sims.hpp"
#include "weakiso/guards.hpp"

namespace weakiso {

/// The cube with each pair colored by its distance when that distance lies in P.
class DistanceGraph {
 public:
  DistanceGraph(Dimension n, PreservedSet P) : n_(n), P_(std::move(P)) { require_same(n, P_.dim()); }

  Dimension dim() const noexcept { return n_; }
  const PreservedSet& preserved() const noexcept { return P_; }

  /// d when d ∈ P, otherwise 0 (unconstrained).
  int color(std::uint32_t x, std::uint32_t y) const noexcept {
    const int d = bits::distance(x, y);
    return P_.contains(d) ? d : 0;
  }

  detail::ColoredGraph colored() const {
    detail::ColoredGraph g;
    g.size = n_.size();
    g.edge_colors = n_.value() + 1;
    g.vertex_color.assign(g.size, 0);
    g.edge.assign(std::size_t{g.size} * g.size, 0);
    for (std::uint32_t x = 0; x < g.size; ++x)
      for (std::uint32_t y = 0; y < g.size; ++y)
        if (x != y) g.edge[std::size_t{x} * g.size + y] = static_cast<std::uint8_t>(color(x, y));
    return g;
  }

 private:
  Dimension n_;
  PreservedSet P_;
};

/// A permutation group on the 2^n words: canonical generators, stabilizer
/// chain over the base 0, 1, 2, ... and the exact order.
class PermGroup {
 public:
  static PermGroup from_generators(Dimension n, const std::vector<CubeMap>& gens) {
    std::vector<detail::Perm> raw;
    raw.reserve(gens.size());
    for (const auto& g : gens) {
      require_same(n, g.dim());
      raw.push_back(g.table());
    }
    return PermGroup(n, detail::StabChain::from_generators(n.size(), raw));
  }

  Dimension dim() const noexcept { return n_; }
  std::size_t degree() const noexcept { return n_.size(); }
  const std::vector<CubeMap>& generators() const& noexcept { return gens_; }
  // by value on temporaries, so `for (auto& g : aut_group(...).generators())` is safe
  std::vector<CubeMap> generators() && { return std::move(gens_); }
  const BigInt& order() const noexcept { return order_; }
  const detail::StabChain& chain() const noexcept { return *chain_; }

  bool contains(const CubeMap& f) const { return f.dim() == n_ && chain_->contains(f.table()); }

  /// Basic orbit lengths, one per base point with a nontrivial orbit.
  std::vector<std::pair<std::uint32_t, std::size_t>> basic_orbits() const {
    std::vector<std::pair<std::uint32_t, std::size_t>> out;
    for (std::uint32_t l = 0; l < degree(); ++l)
      if (chain_->orbit_size(l) > 1) out.emplace_back(l, chain_->orbit_size(l));
    return out;
  }

 private:
  PermGroup(Dimension n, detail::StabChain chain)
      : n_(n), chain_(std::make_shared<const detail::StabChain>(std::move(chain))) {
    order_ = chain_->order();
    for (auto& g : chain_->canonical_generators()) gens_.emplace_back(n, std::move(g));
  }

  Dimension n_;
  std::shared_ptr<const detail::StabChain> chain_;
  BigInt order_;
  std::vector<CubeMap> gens_;
};

inline const BigInt& group_order(const PermGroup& g) { return g.order(); }

inline bool group_contains(const PermGroup& g, const CubeMap& f) { return g.contains(f); }

struct SearchOptions {
  int threads = 1;
  Guards guards = Guards::from_env();
  bool override_guard = false;
};

/// All bijections f with P ⊆ D(f), found by backtracking search on the
/// distance-colored cube and confirmed by Schreier–Sims.
inline PermGroup aut_group(Dimension n, const PreservedSet& P, const SearchOptions& opts = {}) {
  require_same(n, P.dim());
  if (P.empty()) throw Error(ErrorKind::EmptyP, "P must contain at least one distance");
  if (!opts.override_guard) {
    require_guard(n <= opts.guards.search_max_n, "automorphism search for n=" + std::to_string(n.value()) +
                                                     " exceeds guard n<=" + std::to_string(opts.guards.search_max_n));
  }
  const auto graph = DistanceGraph(n, P).colored();
  const auto twins = detail::reduce_twins(graph);
  const auto found = detail::AutSearch(twins.quotient, opts.threads).run();

  // Lift quotient automorphisms class-to-class by sorted member position, then
  // add the full symmetric group on each twin class.
  std::vector<detail::Perm> gens;
  for (const auto& q : found.generators) {
    detail::Perm g(graph.size);
    for (std::size_t k = 0; k < twins.classes.size(); ++k) {
      const auto& from = twins.classes[k];
      const auto& to = twins.classes[q[k]];
      for (std::size_t m = 0; m < from.size(); ++m) g[from[m]] = to[m];
    }
    gens.push_back(std::move(g));
  }
  BigInt expected = found.order;
  for (const auto& cls : twins.classes) {
    expected *= factorial(cls.size());
    if (cls.size() < 2) continue;
    auto swap = detail::identity_perm(graph.size);
    std::swap(swap[cls[0]], swap[cls[1]]);
    gens.push_back(std::move(swap));
    if (cls.size() > 2) {
      auto cycle = detail::identity_perm(graph.size);
      for (std::size_t m = 0; m < cls.size(); ++m) cycle[cls[m]] = cls[(m + 1) % cls.size()];
      gens.push_back(std::move(cycle));
    }
  }
  for (const auto& g : gens) {
    if (!graph.is_automorphism(g)) throw std::logic_error("search produced a non-automorphism");
  }
  PermGroup G = PermGroup::from_generators(n, [&] {
    std::vector<CubeMap> maps;
    for (auto& g : gens) maps.emplace_back(n, std::move(g));
    return maps;
  }());
  if (G.order() != expected) {
    throw std::logic_error("Schreier-Sims order " + to_decimal(G.order()) + " disagrees with search order " +
                           to_decimal(expected));
  }
  for (const auto& g : G.generators()) {
    if (!is_P_isometry(g, P)) throw std::logic_error("normalized generator fails the P check");
  }
  return G;
}

/// Every bijection preserving P, by walking all (2^n)! tables.
inline std::vector<CubeMap> brute_force_members(Dimension n, const PreservedSet& P,
                                                const Guards& guards = Guards::from_env()) {
  require_same(n, P.dim());
  require_guard(n <= guards.brute_force_max_n, "brute force needs n<=" + std::to_string(guards.brute_force_max_n));
  detail::Perm t = detail::identity_perm(n.size());
  std::vector<CubeMap> members;
  do {
    CubeMap f(n, t);
    if (is_P_isometry(f, P)) members.push_back(std::move(f));
  } while (std::next_permutation(t.begin(), t.end()));
  return members;
}

/// The group of brute_force_members; independent of the search.
inline PermGroup brute_force_group(Dimension n, const PreservedSet& P, const Guards& guards = Guards::from_env()) {
  const auto members = brute_force_members(n, P, guards);
  PermGroup G = PermGroup::from_generators(n, members);
  if (G.order() != BigInt(members.size())) {
    throw std::logic_error("brute-force member count disagrees with Schreier-Sims");
  }
  return G;
}

}  // namespace weakiso
