#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"

namespace sl2ws {

struct Leaf {
  int label = 0;
  int half_edge = 0;
  friend bool operator==(const Leaf&, const Leaf&) = default;
};

struct Trivalent {
  std::array<int, 3> cyclic{};
  friend bool operator==(const Trivalent&, const Trivalent&) = default;
};

// Unitrivalent graph on half-edges 0..H-1. Vertices are numbered leaves first
// (0..L-1), then trivalent vertices (L..L+T-1).
class JacobiDiagram {
 public:
  JacobiDiagram() = default;
  JacobiDiagram(std::vector<Leaf> leaves, std::vector<Trivalent> trivalent, std::vector<int> partner,
                int circles = 0)
      : leaves_(std::move(leaves)), trivalent_(std::move(trivalent)), partner_(std::move(partner)),
        circles_(circles) {
    validate();
  }

  const std::vector<Leaf>& leaves() const { return leaves_; }
  const std::vector<Trivalent>& trivalent() const { return trivalent_; }
  const std::vector<int>& partners() const { return partner_; }
  int partner(int he) const { return partner_[static_cast<std::size_t>(he)]; }
  int circles() const { return circles_; }
  int half_edge_count() const { return static_cast<int>(partner_.size()); }
  int vertex_count() const { return static_cast<int>(leaves_.size() + trivalent_.size()); }
  int leaf_count() const { return static_cast<int>(leaves_.size()); }
  int trivalent_count() const { return static_cast<int>(trivalent_.size()); }

  int owner(int he) const { return owner_[static_cast<std::size_t>(he)]; }
  bool is_leaf_vertex(int v) const { return v < leaf_count(); }
  bool is_leaf_half_edge(int he) const { return is_leaf_vertex(owner(he)); }

  // Half-edges of vertex v (one for a leaf, three in cyclic order for a trivalent vertex).
  std::vector<int> half_edges_of(int v) const {
    if (is_leaf_vertex(v)) return {leaves_[static_cast<std::size_t>(v)].half_edge};
    const auto& c = trivalent_[static_cast<std::size_t>(v - leaf_count())].cyclic;
    return {c[0], c[1], c[2]};
  }

  std::vector<int> labels() const {
    std::vector<int> l;
    for (const auto& x : leaves_) l.push_back(x.label);
    std::sort(l.begin(), l.end());
    return l;
  }

  friend bool operator==(const JacobiDiagram& a, const JacobiDiagram& b) {
    return a.leaves_ == b.leaves_ && a.trivalent_ == b.trivalent_ && a.partner_ == b.partner_ &&
           a.circles_ == b.circles_;
  }

 private:
  void validate() {
    const std::size_t h = partner_.size();
    owner_.assign(h, -1);
    auto claim = [&](int he, int v) {
      if (he < 0 || static_cast<std::size_t>(he) >= h)
        throw Error(Errc::DanglingHalfEdge, "half-edge " + std::to_string(he) + " is not matched");
      if (owner_[static_cast<std::size_t>(he)] != -1)
        throw Error(Errc::DanglingHalfEdge, "half-edge " + std::to_string(he) + " listed in two vertices");
      owner_[static_cast<std::size_t>(he)] = v;
    };
    std::set<int> seen;
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
      if (leaves_[i].label <= 0) throw Error(Errc::SchemaError, "leaf labels must be positive");
      if (!seen.insert(leaves_[i].label).second)
        throw Error(Errc::DuplicateLabel, "label " + std::to_string(leaves_[i].label));
      claim(leaves_[i].half_edge, static_cast<int>(i));
    }
    for (std::size_t i = 0; i < trivalent_.size(); ++i)
      for (int he : trivalent_[i].cyclic) claim(he, static_cast<int>(leaves_.size() + i));
    for (std::size_t i = 0; i < h; ++i) {
      if (owner_[i] == -1) throw Error(Errc::DanglingHalfEdge, "half-edge " + std::to_string(i) + " has no vertex");
      int p = partner_[i];
      if (p < 0 || static_cast<std::size_t>(p) >= h || p == static_cast<int>(i) ||
          partner_[static_cast<std::size_t>(p)] != static_cast<int>(i))
        throw Error(Errc::DanglingHalfEdge, "edges are not a perfect matching at " + std::to_string(i));
    }
    if (circles_ < 0) throw Error(Errc::SchemaError, "negative circle count");
  }

  std::vector<Leaf> leaves_;
  std::vector<Trivalent> trivalent_;
  std::vector<int> partner_;
  int circles_ = 0;
  std::vector<int> owner_;
};

class DiagramBuilder {
 public:
  int add_leaf(int label) {
    leaves_.push_back({label, next()});
    return leaves_.back().half_edge;
  }
  std::array<int, 3> add_trivalent() {
    Trivalent t{{next(), next(), next()}};
    trivalent_.push_back(t);
    return t.cyclic;
  }
  void add_trivalent(std::array<int, 3> cyclic) { trivalent_.push_back({cyclic}); }
  int new_half_edge() { return next(); }
  void connect(int a, int b) {
    partner_[static_cast<std::size_t>(a)] = b;
    partner_[static_cast<std::size_t>(b)] = a;
  }
  void add_circles(int k) { circles_ += k; }
  JacobiDiagram build() const { return JacobiDiagram(leaves_, trivalent_, partner_, circles_); }

 private:
  int next() {
    partner_.push_back(-1);
    return static_cast<int>(partner_.size()) - 1;
  }
  std::vector<Leaf> leaves_;
  std::vector<Trivalent> trivalent_;
  std::vector<int> partner_;
  int circles_ = 0;
};

inline int degree(const JacobiDiagram& d) {
  const int v = d.vertex_count();
  if (v % 2 != 0) throw Error(Errc::OddVertexCount, std::to_string(v) + " vertices");
  return v / 2;
}

// Connected components of the vertex graph; returns component id per vertex.
inline std::vector<int> components(const JacobiDiagram& d, int* count = nullptr) {
  const int n = d.vertex_count();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int c = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[static_cast<std::size_t>(s)] != -1) continue;
    std::vector<int> stack{s};
    comp[static_cast<std::size_t>(s)] = c;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int he : d.half_edges_of(v)) {
        int w = d.owner(d.partner(he));
        if (comp[static_cast<std::size_t>(w)] == -1) {
          comp[static_cast<std::size_t>(w)] = c;
          stack.push_back(w);
        }
      }
    }
    ++c;
  }
  if (count) *count = c;
  return comp;
}

inline int first_betti(const JacobiDiagram& d) {
  int comps = 0;
  components(d, &comps);
  return d.half_edge_count() / 2 - d.vertex_count() + comps + d.circles();
}

inline bool has_self_loop(const JacobiDiagram& d) {
  for (int he = 0; he < d.half_edge_count(); ++he)
    if (d.owner(he) == d.owner(d.partner(he))) return true;
  return false;
}

inline bool is_forest(const JacobiDiagram& d) { return first_betti(d) == 0; }

inline bool is_connected(const JacobiDiagram& d) {
  int comps = 0;
  components(d, &comps);
  return comps == 1 && d.circles() == 0;
}

inline void check_distinct(const std::vector<int>& labels) {
  std::set<int> s(labels.begin(), labels.end());
  if (s.size() != labels.size()) throw Error(Errc::DuplicateLabel, "labels must be distinct");
}

// Caterpillar i1 - t1 - ... - t_{n-2} - in; cyclic order at t_j is
// (toward i1, leaf, toward in).
inline JacobiDiagram linear_tree(const std::vector<int>& labels) {
  check_distinct(labels);
  const std::size_t n = labels.size();
  if (n < 2) throw Error(Errc::SchemaError, "a linear tree needs at least two labels");
  DiagramBuilder b;
  std::vector<int> leaf(n);
  for (std::size_t i = 0; i < n; ++i) leaf[i] = b.add_leaf(labels[i]);
  if (n == 2) {
    b.connect(leaf[0], leaf[1]);
    return b.build();
  }
  std::vector<std::array<int, 3>> t;
  for (std::size_t j = 0; j + 2 < n; ++j) t.push_back(b.add_trivalent());
  b.connect(t.front()[0], leaf[0]);
  for (std::size_t j = 0; j < t.size(); ++j) b.connect(t[j][1], leaf[j + 1]);
  for (std::size_t j = 0; j + 1 < t.size(); ++j) b.connect(t[j][2], t[j + 1][0]);
  b.connect(t.back()[2], leaf[n - 1]);
  return b.build();
}

// linear_tree(1, sigma, n) over permutations sigma of 2..n-1 in lexicographic order.
inline std::vector<JacobiDiagram> linear_tree_basis(int n) {
  if (n < 2) throw Error(Errc::PreconditionViolation, "n >= 2");
  std::vector<int> mid;
  for (int i = 2; i < n; ++i) mid.push_back(i);
  std::vector<JacobiDiagram> out;
  do {
    std::vector<int> l{1};
    l.insert(l.end(), mid.begin(), mid.end());
    l.push_back(n);
    out.push_back(linear_tree(l));
  } while (std::next_permutation(mid.begin(), mid.end()));
  return out;
}

// Replace every label l by sigma(l).
inline JacobiDiagram relabel(const JacobiDiagram& d, const std::function<int(int)>& sigma) {
  std::vector<Leaf> leaves = d.leaves();
  for (auto& l : leaves) l.label = sigma(l.label);
  return JacobiDiagram(leaves, d.trivalent(), d.partners(), d.circles());
}

// Reverse the cyclic order at trivalent vertex t (index among trivalent vertices).
inline JacobiDiagram reverse_vertex(const JacobiDiagram& d, int t) {
  std::vector<Trivalent> tri = d.trivalent();
  auto& c = tri.at(static_cast<std::size_t>(t)).cyclic;
  std::swap(c[1], c[2]);
  return JacobiDiagram(d.leaves(), tri, d.partners(), d.circles());
}

// Disjoint union; half-edges of b are shifted past those of a.
inline JacobiDiagram disjoint_union(const JacobiDiagram& a, const JacobiDiagram& b) {
  const int off = a.half_edge_count();
  std::vector<Leaf> leaves = a.leaves();
  for (auto l : b.leaves()) leaves.push_back({l.label, l.half_edge + off});
  std::vector<Trivalent> tri = a.trivalent();
  for (auto t : b.trivalent()) tri.push_back({{t.cyclic[0] + off, t.cyclic[1] + off, t.cyclic[2] + off}});
  std::vector<int> partner = a.partners();
  for (int p : b.partners()) partner.push_back(p + off);
  return JacobiDiagram(leaves, tri, partner, a.circles() + b.circles());
}

// Split into connected components (circles dropped); each piece renumbered densely.
inline std::vector<JacobiDiagram> split_components(const JacobiDiagram& d) {
  int count = 0;
  auto comp = components(d, &count);
  std::vector<JacobiDiagram> out;
  for (int c = 0; c < count; ++c) {
    std::map<int, int> renum;
    auto id = [&](int he) {
      auto [it, ins] = renum.try_emplace(he, static_cast<int>(renum.size()));
      return it->second;
    };
    std::vector<Leaf> leaves;
    std::vector<Trivalent> tri;
    for (int v = 0; v < d.vertex_count(); ++v) {
      if (comp[static_cast<std::size_t>(v)] != c) continue;
      if (d.is_leaf_vertex(v)) {
        const auto& l = d.leaves()[static_cast<std::size_t>(v)];
        leaves.push_back({l.label, id(l.half_edge)});
      } else {
        const auto& t = d.trivalent()[static_cast<std::size_t>(v - d.leaf_count())].cyclic;
        tri.push_back({{id(t[0]), id(t[1]), id(t[2])}});
      }
    }
    std::vector<int> partner(renum.size());
    for (auto [old, nw] : renum) partner[static_cast<std::size_t>(nw)] = renum.at(d.partner(old));
    out.emplace_back(leaves, tri, partner, 0);
  }
  return out;
}

// ---- one-loop diagrams ----

namespace detail {

// Planted binary trees on a label set, in prefix code: -1 marks an internal node
// followed by its two subtrees; a positive entry is a leaf label. The subtree holding
// the smallest label comes first, so each unordered tree appears once.
inline const std::vector<std::vector<int>>& planted_trees(unsigned mask) {
  static std::map<unsigned, std::vector<std::vector<int>>> cache;
  auto it = cache.find(mask);
  if (it != cache.end()) return it->second;
  std::vector<std::vector<int>> out;
  if ((mask & (mask - 1)) == 0) {
    out.push_back({__builtin_ctz(mask) + 1});
  } else {
    const unsigned low = mask & (~mask + 1);
    const unsigned rest = mask ^ low;
    // A = low | s for s a proper subset of rest (B = rest \ s nonempty)
    for (unsigned s = rest;; s = (s - 1) & rest) {
      if (s != rest) {
        const unsigned a = low | s, bmask = rest ^ s;
        const auto& ta = planted_trees(a);
        const auto& tb = planted_trees(bmask);
        for (const auto& x : ta)
          for (const auto& y : tb) {
            std::vector<int> code{-1};
            code.insert(code.end(), x.begin(), x.end());
            code.insert(code.end(), y.begin(), y.end());
            out.push_back(std::move(code));
          }
      }
      if (s == 0) break;
    }
  }
  return cache.emplace(mask, std::move(out)).first->second;
}

// Builds a planted tree from its code and returns the half-edge at its root.
inline int build_planted(DiagramBuilder& b, const std::vector<int>& code, std::size_t& pos) {
  int x = code[pos++];
  if (x > 0) return b.add_leaf(x);
  auto t = b.add_trivalent();
  b.connect(t[1], build_planted(b, code, pos));
  b.connect(t[2], build_planted(b, code, pos));
  return t[0];
}

// Set partitions of the bits of `mask` into exactly c blocks, blocks ordered by lowest bit.
inline void set_partitions(unsigned mask, int c, std::vector<unsigned>& cur,
                           const std::function<void(const std::vector<unsigned>&)>& f) {
  if (mask == 0) {
    if (static_cast<int>(cur.size()) == c) f(cur);
    return;
  }
  if (static_cast<int>(cur.size()) >= c) return;
  const unsigned low = mask & (~mask + 1);
  const unsigned rest = mask ^ low;
  for (unsigned s = rest;; s = (s - 1) & rest) {
    cur.push_back(low | s);
    set_partitions(rest ^ s, c, cur, f);
    cur.pop_back();
    if (s == 0) break;
  }
}

}  // namespace detail

// Calls f on every connected one-loop diagram with labels 1..n (cycle length >= 2, no
// circles), each isomorphism class exactly once. Cycle vertices w_1..w_c have cyclic order
// (previous cycle edge, branch, next cycle edge). The block holding label 1 is placed first
// on the cycle and the reflection is fixed by comparing the neighbouring blocks.
inline void for_each_one_loop_diagram(int n, const std::function<bool(const JacobiDiagram&)>& f,
                                      std::vector<int> cycle_lengths = {}) {
  if (n < 2 || n > 16) throw Error(Errc::PreconditionViolation, "one-loop enumeration needs 2 <= n <= 16");
  if (cycle_lengths.empty())
    for (int c = 2; c <= n; ++c) cycle_lengths.push_back(c);
  const unsigned full = (1u << n) - 1;
  bool stop = false;
  for (int c : cycle_lengths) {
    if (stop) break;
    std::vector<unsigned> cur;
    detail::set_partitions(full, c, cur, [&](const std::vector<unsigned>& blocks) {
      if (stop) return;
      // blocks[0] holds label 1; arrange the others around the cycle
      std::vector<int> order(blocks.size() - 1);
      std::iota(order.begin(), order.end(), 1);
      do {
        if (stop) return;
        auto lowbit = [&](int i) {
          unsigned m = blocks[static_cast<std::size_t>(i)];
          return m & (~m + 1);
        };
        if (c >= 3 && lowbit(order.front()) > lowbit(order.back())) continue;  // mirror image
        std::vector<unsigned> cyc{blocks[0]};
        for (int i : order) cyc.push_back(blocks[static_cast<std::size_t>(i)]);
        // product over per-block planted trees
        std::vector<std::size_t> choice(cyc.size(), 0);
        while (true) {
          DiagramBuilder b;
          std::vector<std::array<int, 3>> w;
          for (std::size_t i = 0; i < cyc.size(); ++i) w.push_back(b.add_trivalent());
          for (std::size_t i = 0; i < cyc.size(); ++i) b.connect(w[i][2], w[(i + 1) % cyc.size()][0]);
          for (std::size_t i = 0; i < cyc.size(); ++i) {
            std::size_t pos = 0;
            b.connect(w[i][1], detail::build_planted(b, detail::planted_trees(cyc[i])[choice[i]], pos));
          }
          if (!f(b.build())) {
            stop = true;
            return;
          }
          std::size_t i = 0;
          for (; i < cyc.size(); ++i) {
            if (++choice[i] < detail::planted_trees(cyc[i]).size()) break;
            choice[i] = 0;
          }
          if (i == cyc.size()) break;
        }
      } while (std::next_permutation(order.begin(), order.end()));
    });
  }
}

inline std::vector<JacobiDiagram> one_loop_diagrams(int n) {
  if (n < 4) throw Error(Errc::PreconditionViolation, "one_loop_diagrams needs n >= 4");
  std::vector<JacobiDiagram> out;
  for_each_one_loop_diagram(n, [&](const JacobiDiagram& d) {
    out.push_back(d);
    return true;
  });
  return out;
}

}  // namespace sl2ws
