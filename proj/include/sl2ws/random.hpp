#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <vector>

#include "diagram.hpp"

// Random diagram generators for property checks.
namespace sl2ws {

// Random binary tree with leaves 1..n, built by repeatedly subdividing a random edge,
// with random cyclic orientations.
inline JacobiDiagram random_tree(std::mt19937_64& rng, int n, std::vector<int> labels = {}) {
  if (labels.empty()) {
    labels.resize(static_cast<std::size_t>(n));
    std::iota(labels.begin(), labels.end(), 1);
  }
  std::shuffle(labels.begin(), labels.end(), rng);
  // edges as pairs of vertex ids; vertices < 0 are leaves (-(index+1))
  struct E {
    int a, b;
  };
  std::vector<E> edges{{-1, -2}};
  int tri = 0;
  for (int i = 2; i < n; ++i) {
    std::size_t k = rng() % edges.size();
    E e = edges[k];
    int t = tri++;
    edges[k] = {e.a, t};
    edges.push_back({t, e.b});
    edges.push_back({t, -(i + 1)});
  }
  DiagramBuilder b;
  std::vector<int> leaf_he;
  for (int i = 0; i < n; ++i) leaf_he.push_back(b.add_leaf(labels[static_cast<std::size_t>(i)]));
  std::vector<std::vector<int>> slots(static_cast<std::size_t>(tri));
  std::vector<std::array<int, 3>> hes(static_cast<std::size_t>(tri));
  for (int t = 0; t < tri; ++t) hes[static_cast<std::size_t>(t)] = {b.new_half_edge(), b.new_half_edge(), b.new_half_edge()};
  std::vector<int> used(static_cast<std::size_t>(tri), 0);
  auto take = [&](int v) {
    if (v < 0) return leaf_he[static_cast<std::size_t>(-v - 1)];
    return hes[static_cast<std::size_t>(v)][static_cast<std::size_t>(used[static_cast<std::size_t>(v)]++)];
  };
  for (auto e : edges) {
    int x = take(e.a), y = take(e.b);
    b.connect(x, y);
  }
  for (int t = 0; t < tri; ++t) {
    auto c = hes[static_cast<std::size_t>(t)];
    if (rng() % 2) std::swap(c[1], c[2]);
    b.add_trivalent(c);
  }
  return b.build();
}

// Same diagram with half-edges renumbered randomly and cyclic orders rotated.
inline JacobiDiagram shuffle_half_edges(std::mt19937_64& rng, const JacobiDiagram& d) {
  std::vector<int> perm(static_cast<std::size_t>(d.half_edge_count()));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  auto p = [&](int h) { return perm[static_cast<std::size_t>(h)]; };
  std::vector<Leaf> leaves;
  for (auto l : d.leaves()) leaves.push_back({l.label, p(l.half_edge)});
  std::shuffle(leaves.begin(), leaves.end(), rng);
  std::vector<Trivalent> tri;
  for (auto t : d.trivalent()) {
    std::array<int, 3> c{p(t.cyclic[0]), p(t.cyclic[1]), p(t.cyclic[2])};
    std::rotate(c.begin(), c.begin() + static_cast<long>(rng() % 3), c.end());
    tri.push_back({c});
  }
  std::shuffle(tri.begin(), tri.end(), rng);
  std::vector<int> partner(perm.size());
  for (int h = 0; h < d.half_edge_count(); ++h) partner[static_cast<std::size_t>(p(h))] = p(d.partner(h));
  return JacobiDiagram(leaves, tri, partner, d.circles());
}

// Random one-loop diagram on labels 1..n: pick one from the enumeration.
inline JacobiDiagram random_one_loop(std::mt19937_64& rng, int n) {
  static std::mutex mu;
  static std::map<int, std::vector<JacobiDiagram>> cache;
  const JacobiDiagram* pick;
  {
    std::lock_guard lock(mu);
    auto& all = cache[n];
    if (all.empty()) all = one_loop_diagrams(n);
    pick = &all[rng() % all.size()];
  }
  return shuffle_half_edges(rng, *pick);
}

}  // namespace sl2ws
