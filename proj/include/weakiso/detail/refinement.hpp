#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstring>
#include <mutex>
#include <numeric>
#include <thread>
#include <tuple>
#include <vector>

#include "weakiso/bigint.hpp"
#include "weakiso/detail/schreier_sims.hpp"

namespace weakiso::detail {

/// Complete graph with colored vertices and colored edges (color 0 = no constraint).
struct ColoredGraph {
  std::uint32_t size = 0;
  int edge_colors = 1;
  std::vector<int> vertex_color;
  std::vector<std::uint8_t> edge;  // size*size, symmetric

  std::uint8_t at(std::uint32_t a, std::uint32_t b) const noexcept { return edge[std::size_t{a} * size + b]; }

  bool is_automorphism(const Perm& g) const {
    for (std::uint32_t a = 0; a < size; ++a) {
      if (vertex_color[a] != vertex_color[g[a]]) return false;
      for (std::uint32_t b = a + 1; b < size; ++b)
        if (at(a, b) != at(g[a], g[b])) return false;
    }
    return true;
  }
};

/// Vertices u, v are twins when swapping them is an automorphism. Twin classes
/// partition the vertex set; each class is uniformly colored inside.
struct TwinReduction {
  std::vector<std::vector<std::uint32_t>> classes;  // members ascending, classes by least member
  ColoredGraph quotient;
};

inline TwinReduction reduce_twins(const ColoredGraph& g) {
  const std::uint32_t N = g.size;
  std::vector<std::int32_t> cls(N, -1);
  TwinReduction tr;
  auto twins = [&](std::uint32_t u, std::uint32_t v) {
    if (g.vertex_color[u] != g.vertex_color[v]) return false;
    for (std::uint32_t w = 0; w < N; ++w)
      if (w != u && w != v && g.at(u, w) != g.at(v, w)) return false;
    return true;
  };
  for (std::uint32_t u = 0; u < N; ++u) {
    if (cls[u] >= 0) continue;
    cls[u] = static_cast<std::int32_t>(tr.classes.size());
    std::vector<std::uint32_t> members{u};
    for (std::uint32_t v = u + 1; v < N; ++v) {
      if (cls[v] < 0 && twins(u, v)) {
        cls[v] = cls[u];
        members.push_back(v);
      }
    }
    tr.classes.push_back(std::move(members));
  }
  const auto M = static_cast<std::uint32_t>(tr.classes.size());
  ColoredGraph& q = tr.quotient;
  q.size = M;
  q.edge_colors = g.edge_colors;
  q.edge.assign(std::size_t{M} * M, 0);
  // vertex color of a class: (original color, size, inside color), renumbered
  std::vector<std::tuple<int, std::size_t, int>> keys(M);
  for (std::uint32_t k = 0; k < M; ++k) {
    const auto& mem = tr.classes[k];
    const int inside = mem.size() > 1 ? g.at(mem[0], mem[1]) : -1;
    keys[k] = {g.vertex_color[mem[0]], mem.size(), inside};
  }
  auto sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  q.vertex_color.resize(M);
  for (std::uint32_t k = 0; k < M; ++k)
    q.vertex_color[k] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), keys[k]) - sorted.begin());
  for (std::uint32_t a = 0; a < M; ++a)
    for (std::uint32_t b = 0; b < M; ++b)
      if (a != b) q.edge[std::size_t{a} * M + b] = g.at(tr.classes[a][0], tr.classes[b][0]);
  return tr;
}

using Cells = std::vector<std::vector<std::uint32_t>>;

/// Splits cells by per-cell edge-color counts until nothing changes. New cells
/// keep their parent's position and are ordered by signature, so the result is
/// equivariant under automorphisms.
inline void refine(const ColoredGraph& g, Cells& cells) {
  const std::uint32_t N = g.size;
  const auto C = static_cast<std::size_t>(g.edge_colors);
  std::vector<std::uint32_t> cell_of(N);
  std::vector<std::uint32_t> counts;
  while (true) {
    const std::size_t K = cells.size();
    if (K == N) return;
    for (std::size_t c = 0; c < K; ++c)
      for (std::uint32_t v : cells[c]) cell_of[v] = static_cast<std::uint32_t>(c);
    const std::size_t stride = K * C;
    counts.assign(std::size_t{N} * stride, 0);
    for (std::uint32_t v = 0; v < N; ++v) {
      std::uint32_t* row = &counts[std::size_t{v} * stride];
      for (std::uint32_t w = 0; w < N; ++w)
        if (w != v) ++row[cell_of[w] * C + g.at(v, w)];
    }
    auto sig_less = [&](std::uint32_t a, std::uint32_t b) {
      const auto* ra = &counts[std::size_t{a} * stride];
      const auto* rb = &counts[std::size_t{b} * stride];
      const int c = std::memcmp(ra, rb, stride * sizeof(std::uint32_t));
      // memcmp order is fine: any fixed total order on signatures is equivariant
      return c < 0 || (c == 0 && a < b);
    };
    auto sig_eq = [&](std::uint32_t a, std::uint32_t b) {
      return std::memcmp(&counts[std::size_t{a} * stride], &counts[std::size_t{b} * stride],
                         stride * sizeof(std::uint32_t)) == 0;
    };
    Cells next;
    next.reserve(N);
    for (auto& cell : cells) {
      if (cell.size() == 1) {
        next.push_back(std::move(cell));
        continue;
      }
      std::sort(cell.begin(), cell.end(), sig_less);
      std::size_t start = 0;
      for (std::size_t k = 1; k <= cell.size(); ++k) {
        if (k == cell.size() || !sig_eq(cell[start], cell[k])) {
          next.emplace_back(cell.begin() + static_cast<std::ptrdiff_t>(start), cell.begin() + static_cast<std::ptrdiff_t>(k));
          start = k;
        }
      }
    }
    const bool stable = next.size() == K;
    cells = std::move(next);
    if (stable) return;
  }
}

inline Cells initial_cells(const ColoredGraph& g) {
  std::vector<std::uint32_t> order(g.size);
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return g.vertex_color[a] < g.vertex_color[b]; });
  Cells cells;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || g.vertex_color[order[k]] != g.vertex_color[order[k - 1]]) cells.emplace_back();
    cells.back().push_back(order[k]);
  }
  refine(g, cells);
  return cells;
}

/// Smallest cell with more than one vertex; first such on ties. -1 if discrete.
inline int target_cell(const Cells& cells) {
  int best = -1;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (cells[c].size() < 2) continue;
    if (best < 0 || cells[c].size() < cells[static_cast<std::size_t>(best)].size()) best = static_cast<int>(c);
  }
  return best;
}

inline Cells individualize(const ColoredGraph& g, const Cells& cells, int cell, std::uint32_t v) {
  Cells out;
  out.reserve(cells.size() + 1);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (static_cast<int>(c) != cell) {
      out.push_back(cells[c]);
      continue;
    }
    out.push_back({v});
    std::vector<std::uint32_t> rest;
    for (std::uint32_t w : cells[c])
      if (w != v) rest.push_back(w);
    out.push_back(std::move(rest));
  }
  refine(g, out);
  return out;
}

inline std::vector<std::size_t> shape(const Cells& cells) {
  std::vector<std::size_t> s;
  s.reserve(cells.size());
  for (const auto& c : cells) s.push_back(c.size());
  return s;
}

struct SearchResult {
  std::vector<Perm> generators;  // automorphisms of the searched graph
  BigInt order;                  // product of basic orbit lengths
};

/// Backtracking automorphism search with refinement and orbit pruning.
class AutSearch {
 public:
  AutSearch(const ColoredGraph& g, int threads) : g_(g), threads_(std::max(1, threads)) {}

  SearchResult run() {
    SearchResult res;
    res.order = 1;
    const std::uint32_t N = g_.size;
    parent_.resize(N);
    std::iota(parent_.begin(), parent_.end(), 0U);

    // first path
    std::vector<Cells> path{initial_cells(g_)};
    std::vector<int> targets;
    std::vector<std::uint32_t> base;
    while (true) {
      const int t = target_cell(path.back());
      if (t < 0) break;
      const std::uint32_t b = path.back()[static_cast<std::size_t>(t)].front();
      targets.push_back(t);
      base.push_back(b);
      path.push_back(individualize(g_, path.back(), t, b));
    }
    for (const auto& p : path) shapes_.push_back(shape(p));
    first_leaf_ = leaf_order(path.back());

    for (std::size_t lvl = base.size(); lvl-- > 0;) {
      const auto& cell = path[lvl][static_cast<std::size_t>(targets[lvl])];
      std::vector<std::uint32_t> todo;
      for (std::uint32_t v : cell)
        if (v != base[lvl]) todo.push_back(v);
      run_level(path[lvl], targets[lvl], base[lvl], lvl, todo, res.generators);
      std::size_t orbit = 0;
      const std::uint32_t root = find(base[lvl]);
      for (std::uint32_t v = 0; v < N; ++v)
        if (find(v) == root) ++orbit;
      res.order *= orbit;
    }
    return res;
  }

 private:
  static std::vector<std::uint32_t> leaf_order(const Cells& cells) {
    std::vector<std::uint32_t> out;
    for (const auto& c : cells) out.push_back(c.front());
    return out;
  }

  std::uint32_t find(std::uint32_t v) {
    while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
    return v;
  }

  void absorb(const Perm& g) {
    for (std::uint32_t v = 0; v < g.size(); ++v) {
      const std::uint32_t a = find(v), b = find(g[v]);
      if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }
  }

  /// Looks for a leaf below `cells` that yields an automorphism.
  bool descend(const Cells& cells, std::size_t depth, Perm& found) const {
    if (shape(cells) != shapes_[depth]) return false;
    const int t = target_cell(cells);
    if (t < 0) {
      const auto leaf = leaf_order(cells);
      Perm g(g_.size);
      for (std::size_t k = 0; k < leaf.size(); ++k) g[first_leaf_[k]] = leaf[k];
      if (!g_.is_automorphism(g)) return false;
      found = std::move(g);
      return true;
    }
    for (std::uint32_t v : cells[static_cast<std::size_t>(t)]) {
      if (descend(individualize(g_, cells, t, v), depth + 1, found)) return true;
    }
    return false;
  }

  void run_level(const Cells& cells, int target, std::uint32_t b, std::size_t lvl,
                 const std::vector<std::uint32_t>& todo, std::vector<Perm>& gens) {
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      while (true) {
        const std::size_t k = next.fetch_add(1);
        if (k >= todo.size()) return;
        const std::uint32_t v = todo[k];
        {
          std::lock_guard lock(mu);
          if (find(v) == find(b)) continue;
        }
        Perm g;
        if (!descend(individualize(g_, cells, target, v), lvl + 1, g)) continue;
        std::lock_guard lock(mu);
        if (find(v) == find(b)) continue;
        absorb(g);
        gens.push_back(std::move(g));
      }
    };
    if (threads_ == 1 || todo.size() < 2) {
      worker();
      return;
    }
    std::vector<std::jthread> pool;
    const int n = std::min<int>(threads_, static_cast<int>(todo.size()));
    for (int w = 0; w < n; ++w) pool.emplace_back(worker);
  }

  const ColoredGraph& g_;
  int threads_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::vector<std::size_t>> shapes_;
  std::vector<std::uint32_t> first_leaf_;
};

}  // namespace weakiso::detail
