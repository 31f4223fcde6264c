#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <string>
#include <vector>

#include "diagram.hpp"
#include "rational.hpp"

namespace sl2ws {

// d = sign * diagram, where `diagram` is the canonical representative (cyclic orders
// ascending in canonical half-edge ids) and `key` identifies the unoriented isomorphism
// class. A diagram with an orientation-reversing automorphism is zero; its sign is then
// not well defined, which is harmless.
struct CanonicalForm {
  JacobiDiagram diagram;
  int sign = 1;
  std::string key;
};

namespace detail {

class Canonicalizer {
 public:
  explicit Canonicalizer(const JacobiDiagram& d) : d_(d), n_(d.vertex_count()) {
    adj_.resize(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v)
      for (int he : d.half_edges_of(v)) adj_[static_cast<std::size_t>(v)].push_back(d.owner(d.partner(he)));
  }

  CanonicalForm run() {
    std::vector<long> colors(static_cast<std::size_t>(n_));
    std::vector<int> by_label(static_cast<std::size_t>(d_.leaf_count()));
    std::iota(by_label.begin(), by_label.end(), 0);
    std::sort(by_label.begin(), by_label.end(), [&](int a, int b) {
      return d_.leaves()[static_cast<std::size_t>(a)].label < d_.leaves()[static_cast<std::size_t>(b)].label;
    });
    for (std::size_t i = 0; i < by_label.size(); ++i) colors[static_cast<std::size_t>(by_label[i])] = static_cast<long>(i);
    for (int v = d_.leaf_count(); v < n_; ++v) colors[static_cast<std::size_t>(v)] = d_.leaf_count();
    search(colors);
    return finish();
  }

 private:
  void refine(std::vector<long>& colors) const {
    std::size_t classes = count_classes(colors);
    while (true) {
      std::vector<std::pair<std::vector<long>, int>> sig(static_cast<std::size_t>(n_));
      for (int v = 0; v < n_; ++v) {
        auto& s = sig[static_cast<std::size_t>(v)].first;
        s.push_back(colors[static_cast<std::size_t>(v)]);
        std::vector<long> nb;
        for (int w : adj_[static_cast<std::size_t>(v)]) nb.push_back(colors[static_cast<std::size_t>(w)]);
        std::sort(nb.begin(), nb.end());
        s.insert(s.end(), nb.begin(), nb.end());
        sig[static_cast<std::size_t>(v)].second = v;
      }
      std::sort(sig.begin(), sig.end());
      long c = -1;
      for (std::size_t i = 0; i < sig.size(); ++i) {
        if (i == 0 || sig[i].first != sig[i - 1].first) ++c;
        colors[static_cast<std::size_t>(sig[i].second)] = c;
      }
      std::size_t now = static_cast<std::size_t>(c + 1);
      if (now == classes) return;
      classes = now;
    }
  }

  static std::size_t count_classes(const std::vector<long>& colors) {
    std::vector<long> c = colors;
    std::sort(c.begin(), c.end());
    return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
  }

  void search(std::vector<long> colors) {
    refine(colors);
    if (count_classes(colors) == static_cast<std::size_t>(n_)) {
      std::vector<int> order(static_cast<std::size_t>(n_));
      for (int v = 0; v < n_; ++v) order[static_cast<std::size_t>(colors[static_cast<std::size_t>(v)])] = v;
      consider(order);
      return;
    }
    // first non-singleton class
    std::map<long, std::vector<int>> cls;
    for (int v = 0; v < n_; ++v) cls[colors[static_cast<std::size_t>(v)]].push_back(v);
    for (const auto& [c, members] : cls) {
      if (members.size() < 2) continue;
      for (int v : members) {
        std::vector<long> next(colors.size());
        for (std::size_t i = 0; i < colors.size(); ++i) next[i] = 2 * colors[i] + 1;
        next[static_cast<std::size_t>(v)] = 2 * c;
        search(std::move(next));
      }
      return;
    }
  }

  // Given a vertex order, assign canonical half-edge ids and encode.
  void consider(const std::vector<int>& order) {
    std::vector<int> rank(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
    const int h = d_.half_edge_count();
    std::vector<int> id(static_cast<std::size_t>(h), -1);
    int next = 0;
    for (int v : order) {
      auto hes = d_.half_edges_of(v);
      std::sort(hes.begin(), hes.end(), [&](int a, int b) {
        auto key = [&](int x) {
          int p = d_.partner(x);
          int pid = id[static_cast<std::size_t>(p)];
          return std::tuple(rank[static_cast<std::size_t>(d_.owner(p))], pid < 0 ? INT_MAX : pid, x);
        };
        return key(a) < key(b);
      });
      for (int x : hes) id[static_cast<std::size_t>(x)] = next++;
    }
    std::string s = "c" + std::to_string(d_.circles());
    for (int v : order) {
      if (d_.is_leaf_vertex(v))
        s += "L" + std::to_string(d_.leaves()[static_cast<std::size_t>(v)].label);
      else
        s += "T";
    }
    std::vector<std::pair<int, int>> edges;
    for (int x = 0; x < h; ++x) {
      int a = id[static_cast<std::size_t>(x)], b = id[static_cast<std::size_t>(d_.partner(x))];
      if (a < b) edges.emplace_back(a, b);
    }
    std::sort(edges.begin(), edges.end());
    for (auto [a, b] : edges) s += ":" + std::to_string(a) + "," + std::to_string(b);
    if (best_key_.empty() || s < best_key_) {
      best_key_ = std::move(s);
      best_order_ = order;
      best_id_ = std::move(id);
    }
  }

  CanonicalForm finish() const {
    const auto& id = best_id_;
    std::vector<Leaf> leaves;
    std::vector<Trivalent> tri;
    int sign = 1;
    for (int v : best_order_) {
      if (d_.is_leaf_vertex(v)) {
        const auto& l = d_.leaves()[static_cast<std::size_t>(v)];
        leaves.push_back({l.label, id[static_cast<std::size_t>(l.half_edge)]});
      } else {
        const auto& c = d_.trivalent()[static_cast<std::size_t>(v - d_.leaf_count())].cyclic;
        std::array<int, 3> m{id[static_cast<std::size_t>(c[0])], id[static_cast<std::size_t>(c[1])],
                             id[static_cast<std::size_t>(c[2])]};
        // a cyclic triple is an even permutation of its sorted form iff it is a rotation of it
        bool even = (m[0] < m[1] && m[1] < m[2]) || (m[1] < m[2] && m[2] < m[0]) || (m[2] < m[0] && m[0] < m[1]);
        if (!even) sign = -sign;
        std::sort(m.begin(), m.end());
        tri.push_back({m});
      }
    }
    std::vector<int> partner(static_cast<std::size_t>(d_.half_edge_count()));
    for (int x = 0; x < d_.half_edge_count(); ++x)
      partner[static_cast<std::size_t>(id[static_cast<std::size_t>(x)])] = id[static_cast<std::size_t>(d_.partner(x))];
    return CanonicalForm{JacobiDiagram(leaves, tri, partner, d_.circles()), sign, best_key_};
  }

  const JacobiDiagram& d_;
  int n_;
  std::vector<std::vector<int>> adj_;
  std::string best_key_;
  std::vector<int> best_order_;
  std::vector<int> best_id_;
};

}  // namespace detail

inline CanonicalForm canonical(const JacobiDiagram& d) {
  if (d.vertex_count() == 0) return {d, 1, "c" + std::to_string(d.circles())};
  return detail::Canonicalizer(d).run();
}

// Formal combination of diagrams keyed by canonical form. Diagrams with a self-loop
// vanish by antisymmetry and are dropped on insertion.
class DiagramCombination {
 public:
  struct Term {
    Rational coeff;
    JacobiDiagram diagram;  // canonical representative
  };

  void add(const JacobiDiagram& d, const Rational& c) {
    if (is_zero(c) || has_self_loop(d)) return;
    add_canonical(canonical(d), c);
  }
  void add_canonical(const CanonicalForm& cf, const Rational& c) {
    if (is_zero(c)) return;
    auto [it, ins] = terms_.try_emplace(cf.key, Term{c * cf.sign, cf.diagram});
    if (!ins) {
      it->second.coeff += c * cf.sign;
      if (is_zero(it->second.coeff)) terms_.erase(it);
    }
  }
  void add(const DiagramCombination& o, const Rational& scale = 1) {
    for (const auto& [k, t] : o.terms_) add_canonical({t.diagram, 1, k}, t.coeff * scale);
  }

  const std::map<std::string, Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

 private:
  std::map<std::string, Term> terms_;
};

}  // namespace sl2ws
