#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "canonical.hpp"
#include "diagram.hpp"
#include "matrix.hpp"
#include "weight.hpp"

namespace sl2ws {

// ---- permutations of the middle labels ----

// Rank of `seq` among the lexicographically ordered permutations of its sorted entries.
inline std::size_t permutation_rank(const std::vector<int>& seq) {
  std::size_t r = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    std::size_t smaller = 0;
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (seq[j] < seq[i]) ++smaller;
    r = r * (seq.size() - i) + smaller;
  }
  return r;
}

inline std::vector<int> permutation_unrank(std::vector<int> sorted, std::size_t r) {
  std::vector<int> out;
  std::vector<std::size_t> fact(sorted.size() + 1, 1);
  for (std::size_t i = 1; i <= sorted.size(); ++i) fact[i] = fact[i - 1] * i;
  while (!sorted.empty()) {
    std::size_t f = fact[sorted.size() - 1];
    std::size_t k = r / f;
    r %= f;
    out.push_back(sorted[k]);
    sorted.erase(sorted.begin() + static_cast<long>(k));
  }
  return out;
}

// Basis tree number `index` on a label set: linear_tree(min, sigma, max).
inline JacobiDiagram comb_tree(const std::vector<int>& sorted_labels, std::size_t index) {
  std::vector<int> mid(sorted_labels.begin() + 1, sorted_labels.end() - 1);
  std::vector<int> l{sorted_labels.front()};
  for (int x : permutation_unrank(mid, index)) l.push_back(x);
  l.push_back(sorted_labels.back());
  return linear_tree(l);
}

// ---- IHX normal form of trees ----

struct TreeCoordinates {
  std::vector<int> labels;             // sorted
  std::map<std::size_t, Rational> coords;  // basis index -> coefficient
};

namespace detail {

struct LieNode {
  int letter = 0;  // > 0 for a letter
  int left = -1, right = -1;
  std::uint64_t mask = 0;
};

using WordComb = std::map<std::vector<int>, Rational>;

class LieReader {
 public:
  explicit LieReader(const JacobiDiagram& d) : d_(d) {}

  // Read the tree rooted at leaf half-edge `root` as a bracket expression.
  int read(int root) { return expr(d_.partner(root)); }
  const std::vector<LieNode>& nodes() const { return nodes_; }

 private:
  int expr(int he) {
    const int v = d_.owner(he);
    if (d_.is_leaf_vertex(v)) {
      int l = d_.leaves()[static_cast<std::size_t>(v)].label;
      nodes_.push_back({l, -1, -1, std::uint64_t{1} << l});
      return static_cast<int>(nodes_.size()) - 1;
    }
    auto c = d_.trivalent()[static_cast<std::size_t>(v - d_.leaf_count())].cyclic;
    while (c[0] != he) std::rotate(c.begin(), c.begin() + 1, c.end());
    int a = expr(d_.partner(c[1]));
    int b = expr(d_.partner(c[2]));
    nodes_.push_back({0, a, b, nodes_[static_cast<std::size_t>(a)].mask | nodes_[static_cast<std::size_t>(b)].mask});
    return static_cast<int>(nodes_.size()) - 1;
  }

  const JacobiDiagram& d_;
  std::vector<LieNode> nodes_;
};

// Right-normed normal form [a1,[a2,...[ak, M]]] with M the largest letter.
class RightNormer {
 public:
  RightNormer(const std::vector<LieNode>& nodes, int max_letter) : nodes_(nodes), max_(max_letter) {}

  WordComb normal(int x) const {
    const LieNode& n = nodes_[static_cast<std::size_t>(x)];
    if (n.letter > 0) return {{{}, Rational(1)}};
    if (nodes_[static_cast<std::size_t>(n.right)].mask >> max_ & 1u) return apply(n.left, normal(n.right));
    WordComb r = apply(n.right, normal(n.left));
    for (auto& [w, c] : r) c = -c;
    return r;
  }

  // [X, r] for every right-normed word r in comb.
  WordComb apply(int x, const WordComb& comb) const {
    const LieNode& n = nodes_[static_cast<std::size_t>(x)];
    WordComb out;
    if (n.letter > 0) {
      for (const auto& [w, c] : comb) {
        std::vector<int> nw{n.letter};
        nw.insert(nw.end(), w.begin(), w.end());
        out.emplace(std::move(nw), c);
      }
      return out;
    }
    // [[X1,X2], r] = [X1,[X2,r]] - [X2,[X1,r]]
    WordComb a = apply(n.left, apply(n.right, comb));
    WordComb b = apply(n.right, apply(n.left, comb));
    for (auto& [w, c] : a) out[w] += c;
    for (auto& [w, c] : b) out[w] -= c;
    std::erase_if(out, [](const auto& kv) { return is_zero(kv.second); });
    return out;
  }

 private:
  const std::vector<LieNode>& nodes_;
  int max_;
};

}  // namespace detail

// Coordinates of a connected tree over comb_tree(labels, .) on its own label set.
inline TreeCoordinates normalize_tree(const JacobiDiagram& t) {
  if (!is_connected(t) || first_betti(t) != 0 || t.leaf_count() < 2)
    throw Error(Errc::NotATree, "input is not a connected tree");
  TreeCoordinates out;
  out.labels = t.labels();
  if (out.labels.back() >= 63) throw Error(Errc::BadLabelSet, "labels must be below 63");
  int root = -1;
  for (const auto& l : t.leaves())
    if (l.label == out.labels.front()) root = l.half_edge;
  detail::LieReader reader(t);
  int top = reader.read(root);
  detail::RightNormer norm(reader.nodes(), out.labels.back());
  for (const auto& [w, c] : norm.normal(top)) out.coords[permutation_rank(w)] += c;
  return out;
}

inline std::size_t factorial_size(int k) {
  std::size_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::size_t>(i);
  return f;
}

// Coordinates over linear_tree_basis(n); labels must be exactly 1..n.
inline RationalVector ihx_normalize(const JacobiDiagram& t, int n) {
  std::vector<int> want(static_cast<std::size_t>(n));
  std::iota(want.begin(), want.end(), 1);
  if (t.labels() != want) throw Error(Errc::BadLabelSet, "labels must be exactly 1.." + std::to_string(n));
  TreeCoordinates tc = normalize_tree(t);
  RationalVector v(factorial_size(n - 2));
  for (const auto& [i, c] : tc.coords) v[i] = c;
  return v;
}

// ---- loop reduction ----

// Internal edge (smallest half-edge id) on a shortest cycle, with the cycle length;
// nullopt for a forest.
inline std::optional<std::pair<int, int>> shortest_cycle_edge(const JacobiDiagram& d) {
  std::optional<std::pair<int, int>> best;
  const int V = d.vertex_count();
  for (int h = 0; h < d.half_edge_count(); ++h) {
    const int p = d.partner(h);
    if (p < h || d.is_leaf_half_edge(h) || d.is_leaf_half_edge(p)) continue;
    const int u = d.owner(h), v = d.owner(p);
    if (u == v) return std::pair{h, 1};
    // BFS from u to v avoiding the edge {h, p}
    std::vector<int> dist(static_cast<std::size_t>(V), -1);
    std::deque<int> q{u};
    dist[static_cast<std::size_t>(u)] = 0;
    while (!q.empty() && dist[static_cast<std::size_t>(v)] < 0) {
      int x = q.front();
      q.pop_front();
      for (int e : d.half_edges_of(x)) {
        if (e == h || e == p) continue;
        int y = d.owner(d.partner(e));
        if (dist[static_cast<std::size_t>(y)] < 0) {
          dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
          q.push_back(y);
        }
      }
    }
    if (dist[static_cast<std::size_t>(v)] < 0) continue;
    const int len = dist[static_cast<std::size_t>(v)] + 1;
    if (!best || len < best->second) best = std::pair{h, len};
  }
  return best;
}

namespace detail {
inline std::mutex& forest_memo_mutex() {
  static std::mutex m;
  return m;
}
inline std::map<std::string, DiagramCombination>& forest_memo() {
  static std::map<std::string, DiagramCombination> m;
  return m;
}
}  // namespace detail

// Express d through forests: circles give 3, self-loops give 0, otherwise expand an edge
// of a shortest cycle and recurse.
inline DiagramCombination reduce_to_forests(const JacobiDiagram& d) {
  check_distinct(d.labels());
  DiagramCombination out;
  if (has_self_loop(d)) return out;
  CanonicalForm cf = canonical(d);
  {
    std::lock_guard lock(detail::forest_memo_mutex());
    auto it = detail::forest_memo().find(cf.key);
    if (it != detail::forest_memo().end()) {
      out.add(it->second, cf.sign);
      return out;
    }
  }
  const JacobiDiagram& rep = cf.diagram;
  DiagramCombination res;
  if (rep.circles() > 0) {
    JacobiDiagram stripped(rep.leaves(), rep.trivalent(), rep.partners(), 0);
    res.add(reduce_to_forests(stripped), power_of_three(rep.circles()));
  } else if (auto e = shortest_cycle_edge(rep)) {
    const DiagramCombination expanded = cv_expand(rep, e->first);
    for (const auto& [k, term] : expanded.terms()) res.add(reduce_to_forests(term.diagram), term.coeff);
  } else {
    res.add_canonical({rep, 1, cf.key}, 1);
  }
  {
    std::lock_guard lock(detail::forest_memo_mutex());
    detail::forest_memo().emplace(cf.key, res);
  }
  out.add(res, cf.sign);
  return out;
}

// ---- forest coordinates ----

// A forest in normal form is a product of basis combs, one per component. The key lists
// (label mask << 32 | comb index) per component, sorted.
using ForestKey = std::vector<std::uint64_t>;
using ForestVector = std::map<ForestKey, Rational>;

inline std::uint64_t label_mask(const std::vector<int>& labels) {
  std::uint64_t m = 0;
  for (int l : labels) m |= std::uint64_t{1} << l;
  return m;
}

inline ForestVector forest_coordinates(const JacobiDiagram& forest) {
  ForestVector acc{{{}, Rational(1)}};
  if (forest.circles() > 0) throw Error(Errc::NotATree, "forest with circles");
  for (const auto& comp : split_components(forest)) {
    TreeCoordinates tc = normalize_tree(comp);
    if (tc.labels.back() >= 32) throw Error(Errc::BadLabelSet, "labels must be below 32");
    const std::uint64_t m = label_mask(tc.labels) << 32;
    ForestVector next;
    for (const auto& [key, c] : acc)
      for (const auto& [idx, x] : tc.coords) {
        ForestKey k = key;
        k.push_back(m | idx);
        std::sort(k.begin(), k.end());
        next[k] += c * x;
      }
    acc = std::move(next);
  }
  std::erase_if(acc, [](const auto& kv) { return is_zero(kv.second); });
  return acc;
}

inline ForestVector forest_coordinates(const DiagramCombination& comb) {
  ForestVector out;
  for (const auto& [k, term] : comb.terms())
    for (const auto& [fk, c] : forest_coordinates(term.diagram)) out[fk] += term.coeff * c;
  std::erase_if(out, [](const auto& kv) { return is_zero(kv.second); });
  return out;
}

// Diagram of a forest key (product of basis combs).
inline JacobiDiagram forest_from_key(const ForestKey& key) {
  JacobiDiagram out;
  bool first = true;
  for (std::uint64_t e : key) {
    std::uint64_t m = e >> 32;
    std::vector<int> labels;
    for (int l = 0; l < 32; ++l)
      if (m >> l & 1u) labels.push_back(l);
    JacobiDiagram t = comb_tree(labels, static_cast<std::size_t>(e & 0xffffffffu));
    out = first ? t : disjoint_union(out, t);
    first = false;
  }
  return out;
}

}  // namespace sl2ws
