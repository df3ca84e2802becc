#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "weakiso/bigint.hpp"

namespace weakiso::detail {

using Perm = std::vector<std::uint32_t>;

inline Perm identity_perm(std::size_t degree) {
  Perm p(degree);
  for (std::uint32_t i = 0; i < degree; ++i) p[i] = i;
  return p;
}

inline bool is_identity_perm(const Perm& p) {
  for (std::uint32_t i = 0; i < p.size(); ++i)
    if (p[i] != i) return false;
  return true;
}

/// a ∘ b (apply b first).
inline Perm compose_perm(const Perm& a, const Perm& b) {
  Perm r(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = a[b[i]];
  return r;
}

inline Perm invert_perm(const Perm& a) {
  Perm r(a.size());
  for (std::uint32_t i = 0; i < a.size(); ++i) r[a[i]] = i;
  return r;
}

/// Stabilizer chain over the full base 0, 1, ..., degree-1. Level l holds the
/// orbit of l under the generators fixing 0..l-1, with an explicit transversal.
/// Deterministic Schreier–Sims: Schreier generators are checked deepest level
/// first and each (point, generator) pair is stripped at most once.
class StabChain {
 public:
  explicit StabChain(std::size_t degree) : degree_(degree), levels_(degree) {
    for (std::uint32_t l = 0; l < degree; ++l) {
      levels_[l].pos.assign(degree, -1);
      levels_[l].pos[l] = 0;
      levels_[l].points.push_back(l);
      levels_[l].u.push_back(identity_perm(degree));
      levels_[l].uinv.push_back(identity_perm(degree));
    }
  }

  static StabChain from_generators(std::size_t degree, const std::vector<Perm>& gens) {
    StabChain c(degree);
    for (const Perm& g : gens) c.add_generator(g);
    return c;
  }

  std::size_t degree() const noexcept { return degree_; }

  /// Adds g and restores the chain invariants.
  void add_generator(const Perm& g) {
    auto [h, j] = strip(g, 0);
    if (j == degree_) return;
    insert_strong(h, j);
    complete(j);
  }

  bool contains(const Perm& g) const {
    if (g.size() != degree_) return false;
    return strip(g, 0).second == degree_;
  }

  BigInt order() const {
    BigInt r = 1;
    for (const auto& lv : levels_) r *= lv.points.size();
    return r;
  }

  std::size_t orbit_size(std::size_t level) const { return levels_[level].points.size(); }
  const std::vector<std::uint32_t>& orbit(std::size_t level) const { return levels_[level].points; }
  bool in_orbit(std::size_t level, std::uint32_t p) const { return levels_[level].pos[p] >= 0; }
  const Perm& transversal(std::size_t level, std::uint32_t p) const {
    return levels_[level].u[static_cast<std::size_t>(levels_[level].pos[p])];
  }
  const std::vector<Perm>& strong_generators() const noexcept { return strong_; }

  /// Lex-least element g (comparing g(0), g(1), ...) with g fixing 0..level-1 and g(level) = p.
  Perm least_in_coset(std::size_t level, std::uint32_t p) const {
    Perm g = transversal(level, p);
    for (std::size_t j = level + 1; j < degree_; ++j) {
      const auto& lv = levels_[j];
      if (lv.points.size() == 1) continue;
      std::uint32_t best = lv.points.front();
      for (std::uint32_t gamma : lv.points)
        if (g[gamma] < g[best]) best = gamma;
      if (best != j) g = compose_perm(g, lv.u[static_cast<std::size_t>(lv.pos[best])]);
    }
    return g;
  }

  /// A small generating set that depends only on the group: deepest level
  /// first, one least coset element per orbit point not yet reached.
  std::vector<Perm> canonical_generators() const {
    std::vector<Perm> out;
    std::vector<std::uint32_t> parent(degree_);
    for (std::uint32_t v = 0; v < degree_; ++v) parent[v] = v;
    auto find = [&](std::uint32_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    auto absorb = [&](const Perm& g) {
      for (std::uint32_t v = 0; v < degree_; ++v) {
        const std::uint32_t a = find(v), b = find(g[v]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    };
    for (std::size_t l = degree_; l-- > 0;) {
      if (levels_[l].points.size() == 1) continue;
      std::vector<std::uint32_t> pts = levels_[l].points;
      std::sort(pts.begin(), pts.end());
      for (std::uint32_t p : pts) {
        if (find(p) == find(static_cast<std::uint32_t>(l))) continue;
        Perm g = least_in_coset(l, p);
        absorb(g);
        out.push_back(std::move(g));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Level {
    std::vector<std::uint32_t> points;
    std::vector<std::int32_t> pos;
    std::vector<Perm> u;
    std::vector<Perm> uinv;
    std::vector<std::size_t> gens;          // indices into strong_
    std::vector<std::vector<char>> checked;  // [point index][gens index]
  };

  /// Sifts g from `from` downwards; returns the residue and the level where it
  /// stopped (degree_ when it reduced to the identity).
  std::pair<Perm, std::size_t> strip(Perm g, std::size_t from) const {
    for (std::size_t l = from; l < degree_; ++l) {
      const std::uint32_t beta = g[l];
      if (beta == l) continue;
      const auto& lv = levels_[l];
      if (lv.pos[beta] < 0) return {std::move(g), l};
      const Perm& ui = lv.uinv[static_cast<std::size_t>(lv.pos[beta])];
      for (auto& x : g) x = ui[x];
    }
    return {std::move(g), degree_};
  }

  /// h fixes 0..j-1 and moves j.
  void insert_strong(const Perm& h, std::size_t j) {
    strong_.push_back(h);
    const std::size_t idx = strong_.size() - 1;
    for (std::size_t l = 0; l <= j; ++l) levels_[l].gens.push_back(idx);
    for (std::size_t l = 0; l <= j; ++l) extend_orbit(l);
  }

  void extend_orbit(std::size_t l) {
    Level& lv = levels_[l];
    for (std::size_t k = 0; k < lv.points.size(); ++k) {
      const std::uint32_t p = lv.points[k];
      for (std::size_t gi : lv.gens) {
        const Perm& s = strong_[gi];
        const std::uint32_t q = s[p];
        if (lv.pos[q] >= 0) continue;
        lv.pos[q] = static_cast<std::int32_t>(lv.points.size());
        lv.points.push_back(q);
        Perm uq = compose_perm(s, lv.u[k]);
        lv.uinv.push_back(invert_perm(uq));
        lv.u.push_back(std::move(uq));
      }
    }
  }

  void complete(std::size_t top) {
    std::size_t i = top;
    while (true) {
      bool restarted = false;
      Level& lv = levels_[i];
      if (lv.gens.empty()) {
        if (i == 0) break;
        --i;
        continue;
      }
      lv.checked.resize(lv.points.size());
      for (std::size_t pi = 0; pi < lv.points.size() && !restarted; ++pi) {
        auto& row = lv.checked[pi];
        row.resize(lv.gens.size(), 0);
        for (std::size_t si = 0; si < lv.gens.size(); ++si) {
          if (row[si]) continue;
          row[si] = 1;
          const Perm& s = strong_[lv.gens[si]];
          const std::uint32_t p = lv.points[pi];
          const std::uint32_t sp = s[p];
          // u_{s(p)}^{-1} ∘ s ∘ u_p fixes i
          const Perm& up = lv.u[pi];
          const Perm& uinv_sp = lv.uinv[static_cast<std::size_t>(lv.pos[sp])];
          Perm h(degree_);
          for (std::size_t x = 0; x < degree_; ++x) h[x] = uinv_sp[s[up[x]]];
          auto [res, j] = strip(std::move(h), i + 1);
          if (j == degree_) continue;
          insert_strong(res, j);
          i = j;
          restarted = true;
          break;
        }
      }
      if (restarted) continue;
      if (i == 0) break;
      --i;
    }
  }

  std::size_t degree_;
  std::vector<Level> levels_;
  std::vector<Perm> strong_;
};

}  // namespace weakiso::detail
