#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "canonical.hpp"
#include "diagram.hpp"
#include "matrix.hpp"
#include "tensor.hpp"

namespace sl2ws {

// W(D) in <sl2>^{tensor n}: n EXT slots, slot j-1 belongs to label j.
struct WeightValue {
  int ambient_n = 0;
  Tensor<Rational> tensor;

  friend bool operator==(const WeightValue& a, const WeightValue& b) {
    return a.ambient_n == b.ambient_n && a.tensor == b.tensor;
  }
  WeightValue& operator+=(const WeightValue& o) {
    tensor += o.tensor;
    return *this;
  }
};

inline WeightValue zero_weight(int n) {
  return {n, Tensor<Rational>(std::vector<SlotBasis>(static_cast<std::size_t>(n), SlotBasis::EXT))};
}

inline void check_labels(const JacobiDiagram& d, int n) {
  for (const auto& l : d.leaves())
    if (l.label < 1 || l.label > n)
      throw Error(Errc::LabelOutOfRange, "label " + std::to_string(l.label) + " outside 1.." + std::to_string(n));
  // distinctness is a diagram invariant; a RepeatedLabel can only come from raw input
  std::set<int> s;
  for (const auto& l : d.leaves())
    if (!s.insert(l.label).second) throw Error(Errc::RepeatedLabel, std::to_string(l.label));
}

// Place an SL2 tensor whose slot i carries label slot_labels[i] into n EXT slots.
inline WeightValue embed(const Tensor<Rational>& t, const std::vector<int>& slot_labels, int n) {
  std::vector<std::size_t> label_slot(static_cast<std::size_t>(n) + 1, SIZE_MAX);
  for (std::size_t i = 0; i < slot_labels.size(); ++i) label_slot[static_cast<std::size_t>(slot_labels[i])] = i;
  WeightValue w = zero_weight(n);
  for (const auto& [k, v] : t.entries()) {
    PackedIndex nk = 0;
    for (int j = 1; j <= n; ++j) {
      std::size_t s = label_slot[static_cast<std::size_t>(j)];
      nk = with_digit(nk, static_cast<std::size_t>(j - 1), s == SIZE_MAX ? 0 : digit(k, s) + 1);
    }
    w.tensor.add(nk, v);
  }
  return w;
}

inline Rational power_of_three(int k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 3, static_cast<unsigned long>(k));
  return Rational(r);
}

// Contract the tensor network of d: b at trivalent vertices (slots in cyclic order),
// c for struts, kappa on internal edges, 3 per circle. Returns an SL2 tensor and the
// leaf label of each open slot.
inline Tensor<Rational> contract_network(const JacobiDiagram& d, std::vector<int>& slot_labels) {
  Tensor<Rational> acc = Tensor<Rational>::scalar(power_of_three(d.circles()));
  std::vector<int> open;  // half-edge per slot
  auto slot_of = [&](int he) -> long {
    auto it = std::find(open.begin(), open.end(), he);
    return it == open.end() ? -1 : it - open.begin();
  };
  // struts
  for (const auto& l : d.leaves()) {
    int p = d.partner(l.half_edge);
    if (d.is_leaf_half_edge(p) && l.half_edge < p) {
      acc = tensor_product(acc, casimir());
      open.push_back(l.half_edge);
      open.push_back(p);
    }
  }
  // trivalent vertices in BFS order so that contractions happen early
  const int L = d.leaf_count();
  std::vector<bool> done(static_cast<std::size_t>(d.trivalent_count()), false);
  for (int s = 0; s < d.trivalent_count(); ++s) {
    if (done[static_cast<std::size_t>(s)]) continue;
    std::deque<int> queue{s};
    done[static_cast<std::size_t>(s)] = true;
    while (!queue.empty()) {
      int t = queue.front();
      queue.pop_front();
      const auto& c = d.trivalent()[static_cast<std::size_t>(t)].cyclic;
      acc = tensor_product(acc, bracket_tensor());
      for (int he : c) open.push_back(he);
      for (int he : c) {
        int p = d.partner(he);
        if (d.is_leaf_half_edge(p)) continue;
        long a = slot_of(he), b = slot_of(p);
        if (a >= 0 && b >= 0) {
          acc = contract(acc, static_cast<std::size_t>(a), static_cast<std::size_t>(b), kappa());
          open.erase(open.begin() + std::max(a, b));
          open.erase(open.begin() + std::min(a, b));
        } else {
          int w = d.owner(p) - L;
          if (!done[static_cast<std::size_t>(w)]) {
            done[static_cast<std::size_t>(w)] = true;
            queue.push_back(w);
          }
        }
      }
    }
  }
  slot_labels.clear();
  for (int he : open) {
    int leaf = d.is_leaf_half_edge(he) ? d.owner(he) : d.owner(d.partner(he));
    slot_labels.push_back(d.leaves()[static_cast<std::size_t>(leaf)].label);
  }
  return acc;
}

inline WeightValue weight_direct(const JacobiDiagram& d, int n) {
  check_labels(d, n);
  std::vector<int> labels;
  Tensor<Rational> t = contract_network(d, labels);
  return embed(t, labels, n);
}

// Product of weights of diagrams on disjoint label sets.
inline WeightValue multiply_disjoint(const WeightValue& a, const WeightValue& b) {
  if (a.ambient_n != b.ambient_n) throw Error(Errc::SlotMismatch, "ambient n differs");
  WeightValue out = zero_weight(a.ambient_n);
  for (const auto& [ka, va] : a.tensor.entries())
    for (const auto& [kb, vb] : b.tensor.entries()) {
      bool ok = true;
      for (int s = 0; s < a.ambient_n && ok; ++s)
        if (digit(ka, static_cast<std::size_t>(s)) && digit(kb, static_cast<std::size_t>(s))) ok = false;
      if (!ok) throw Error(Errc::RepeatedLabel, "weights overlap in a slot");
      out.tensor.add(ka | kb, va * vb);
    }
  return out;
}

inline WeightValue casimir_power(int n) {
  if (n < 2 || n % 2 != 0) throw Error(Errc::OddN, "casimir_power needs even n >= 2");
  Tensor<Rational> t = Tensor<Rational>::scalar(1);
  std::vector<int> labels;
  for (int i = 1; i <= n; ++i) labels.push_back(i);
  for (int i = 0; i < n / 2; ++i) t = tensor_product(t, casimir());
  return embed(t, labels, n);
}

// ---- CV identity ----

// kappa-contraction of b(x,a,b) b(y,c,d) over (x,y) equals
// parallel * c(a,c) c(b,d) + crossed * c(a,d) c(b,c).
struct CVIdentity {
  Rational parallel;
  Rational crossed;
  Tensor<Rational> lhs;
};

inline CVIdentity derive_cv_identity() {
  Tensor<Rational> bb = tensor_product(bracket_tensor(), bracket_tensor());
  Tensor<Rational> lhs = contract(bb, 0, 3, kappa());  // slots (a, b, c, d)
  Tensor<Rational> cc = tensor_product(casimir(), casimir());  // (a, c, b, d) / (a, d, b, c)
  Tensor<Rational> par = permute_slots(cc, std::vector<std::size_t>{0, 2, 1, 3});
  Tensor<Rational> crs = permute_slots(cc, std::vector<std::size_t>{0, 3, 1, 2});
  // also offer the (a,b)(c,d) pattern so that a solution using it would be visible
  Tensor<Rational> same = cc;
  std::vector<Tensor<Rational>> pats{par, crs, same};
  std::vector<RationalVector> basis;
  RationalVector target(81);
  auto index = [](PackedIndex k) {
    std::size_t r = 0;
    for (std::size_t s = 0; s < 4; ++s) r = r * 3 + digit(k, s);
    return r;
  };
  for (const auto& p : pats) {
    RationalVector v(81);
    for (const auto& [k, x] : p.entries()) v[index(k)] = x;
    basis.push_back(std::move(v));
  }
  for (const auto& [k, x] : lhs.entries()) target[index(k)] = x;
  auto sol = solve_in_span(basis, target);
  if (!sol) throw Error(Errc::NoExactSolution, "CV identity has no solution in the strut patterns");
  // the three patterns are independent, so the solution is unique
  if (!is_zero((*sol)[2])) throw Error(Errc::NoExactSolution, "CV identity needs the (a,b)(c,d) pattern");
  Tensor<Rational> check = par * (*sol)[0] + crs * (*sol)[1];
  if (!(check == lhs)) throw Error(Errc::NoExactSolution, "CV identity verification failed");
  return {(*sol)[0], (*sol)[1], lhs};
}

inline const CVIdentity& cv_identity() {
  static const CVIdentity id = derive_cv_identity();
  return id;
}

// Internal edge given by one of its half-edges. u = (hu, a, b), v = (hv, c, d) after
// rotation; both vertices are deleted and the outer stubs a, b, c, d rejoined as
// parallel (a-c, b-d) and crossed (a-d, b-c).
inline DiagramCombination cv_expand(const JacobiDiagram& d, int half_edge) {
  if (half_edge < 0 || half_edge >= d.half_edge_count())
    throw Error(Errc::NotInternalEdge, "no such half-edge");
  const int hv = d.partner(half_edge);
  const int L = d.leaf_count();
  const int u = d.owner(half_edge), v = d.owner(hv);
  if (d.is_leaf_vertex(u) || d.is_leaf_vertex(v) || u == v)
    throw Error(Errc::NotInternalEdge, "half-edge " + std::to_string(half_edge) + " is not on an internal edge");
  auto rotate = [&](int vert, int h) {
    auto c = d.trivalent()[static_cast<std::size_t>(vert - L)].cyclic;
    while (c[0] != h) std::rotate(c.begin(), c.begin() + 1, c.end());
    return c;
  };
  auto cu = rotate(u, half_edge), cv = rotate(v, hv);
  // stubs (a, b, c, d); a stub whose partner is another stub forms a through-strand
  const std::array<int, 4> stub{cu[1], cu[2], cv[1], cv[2]};
  const CVIdentity& id = cv_identity();
  DiagramCombination out;
  for (int pattern = 0; pattern < 2; ++pattern) {
    // pattern 0: a-c, b-d ; pattern 1: a-d, b-c
    std::array<int, 4> mate = pattern == 0 ? std::array<int, 4>{2, 3, 0, 1} : std::array<int, 4>{3, 2, 1, 0};
    // Each stub is linked to its mate (new connection) and to its old partner, which may
    // itself be a stub. Paths of links run between two outside half-edges, which get
    // joined; closed chains of stubs become circles.
    auto stub_index = [&](int he) {
      for (int s = 0; s < 4; ++s)
        if (stub[static_cast<std::size_t>(s)] == he) return s;
      return -1;
    };
    std::vector<int> partner = d.partners();
    int circles = d.circles();
    std::array<bool, 4> used{};
    for (int s0 = 0; s0 < 4; ++s0) {
      const int x = d.partner(stub[static_cast<std::size_t>(s0)]);
      if (stub_index(x) >= 0 || used[static_cast<std::size_t>(s0)]) continue;
      int s = s0, y = -1;
      while (true) {
        used[static_cast<std::size_t>(s)] = true;
        const int m = mate[static_cast<std::size_t>(s)];
        used[static_cast<std::size_t>(m)] = true;
        const int ext = d.partner(stub[static_cast<std::size_t>(m)]);
        const int t = stub_index(ext);
        if (t < 0) {
          y = ext;
          break;
        }
        s = t;
      }
      partner[static_cast<std::size_t>(x)] = y;
      partner[static_cast<std::size_t>(y)] = x;
    }
    for (int s0 = 0; s0 < 4; ++s0) {
      if (used[static_cast<std::size_t>(s0)]) continue;
      int s = s0;
      while (!used[static_cast<std::size_t>(s)]) {
        used[static_cast<std::size_t>(s)] = true;
        const int m = mate[static_cast<std::size_t>(s)];
        used[static_cast<std::size_t>(m)] = true;
        s = stub_index(d.partner(stub[static_cast<std::size_t>(m)]));
      }
      ++circles;
    }
    // rebuild without u, v and their six half-edges
    std::set<int> removed{cu[0], cu[1], cu[2], cv[0], cv[1], cv[2]};
    std::map<int, int> renum;
    for (int h = 0; h < d.half_edge_count(); ++h)
      if (!removed.count(h)) renum.emplace(h, static_cast<int>(renum.size()));
    std::vector<Leaf> leaves;
    for (const auto& l : d.leaves()) leaves.push_back({l.label, renum.at(l.half_edge)});
    std::vector<Trivalent> tri;
    for (int t = 0; t < d.trivalent_count(); ++t) {
      if (t + L == u || t + L == v) continue;
      const auto& c = d.trivalent()[static_cast<std::size_t>(t)].cyclic;
      tri.push_back({{renum.at(c[0]), renum.at(c[1]), renum.at(c[2])}});
    }
    std::vector<int> np(renum.size());
    for (auto [old, nw] : renum) np[static_cast<std::size_t>(nw)] = renum.at(partner[static_cast<std::size_t>(old)]);
    out.add(JacobiDiagram(leaves, tri, np, circles), pattern == 0 ? id.parallel : id.crossed);
  }
  return out;
}

// ---- CV evaluator ----

class WeightMemo {
 public:
  std::optional<WeightValue> find(const std::string& key) const {
    std::lock_guard lock(mu_);
    auto it = memo_.find(key);
    if (it == memo_.end()) return std::nullopt;
    return it->second;
  }
  void insert(const std::string& key, const WeightValue& w) {
    std::lock_guard lock(mu_);
    memo_.emplace(key, w);
  }
  std::size_t size() const {
    std::lock_guard lock(mu_);
    return memo_.size();
  }

 private:
  mutable std::mutex mu_;
  std::map<std::string, WeightValue> memo_;
};

// Diagram with no internal edges: struts, lone Y vertices and circles.
inline WeightValue weight_base_case(const JacobiDiagram& d, int n) {
  Tensor<Rational> t = Tensor<Rational>::scalar(power_of_three(d.circles()));
  std::vector<int> labels;
  auto label_of = [&](int he) { return d.leaves()[static_cast<std::size_t>(d.owner(he))].label; };
  for (const auto& l : d.leaves()) {
    int p = d.partner(l.half_edge);
    if (d.is_leaf_half_edge(p) && l.half_edge < p) {
      t = tensor_product(t, casimir());
      labels.push_back(l.label);
      labels.push_back(label_of(p));
    }
  }
  for (const auto& tv : d.trivalent()) {
    t = tensor_product(t, bracket_tensor());
    for (int he : tv.cyclic) labels.push_back(label_of(d.partner(he)));
  }
  return embed(t, labels, n);
}

inline WeightValue weight_cv(const JacobiDiagram& d, int n, WeightMemo* memo = nullptr) {
  check_labels(d, n);
  static WeightMemo shared;
  if (!memo) memo = &shared;
  CanonicalForm cf = canonical(d);
  const std::string key = cf.key + "#" + std::to_string(n);
  if (auto hit = memo->find(key)) {
    WeightValue w = *hit;
    w.tensor *= Rational(cf.sign);
    return w;
  }
  const JacobiDiagram& rep = cf.diagram;
  WeightValue w = zero_weight(n);
  if (!has_self_loop(rep)) {
    int edge = -1;
    for (int h = 0; h < rep.half_edge_count() && edge < 0; ++h)
      if (!rep.is_leaf_half_edge(h) && !rep.is_leaf_half_edge(rep.partner(h))) edge = h;
    if (edge < 0) {
      w = weight_base_case(rep, n);
    } else {
      const DiagramCombination expanded = cv_expand(rep, edge);
      for (const auto& [k, term] : expanded.terms()) {
        WeightValue part = weight_cv(term.diagram, n, memo);
        part.tensor *= term.coeff;
        w += part;
      }
    }
  }
  memo->insert(key, w);
  w.tensor *= Rational(cf.sign);
  return w;
}

// ---- IHX ----

// The three diagrams of the IHX relation at internal edge (half_edge, partner):
// I is d itself; with u = (hu, a, b), v = (hv, c, d) the H term reattaches
// u = (hu, a, c), v = (hv, b, d) and the X term u = (hu, a, d), v = (hv, c, b).
inline std::array<JacobiDiagram, 3> ihx_terms(const JacobiDiagram& d, int half_edge) {
  const int hv = d.partner(half_edge);
  const int L = d.leaf_count();
  const int u = d.owner(half_edge), v = d.owner(hv);
  if (d.is_leaf_vertex(u) || d.is_leaf_vertex(v) || u == v) throw Error(Errc::NotInternalEdge, "ihx_terms");
  auto rotate = [&](int vert, int h) {
    auto c = d.trivalent()[static_cast<std::size_t>(vert - L)].cyclic;
    while (c[0] != h) std::rotate(c.begin(), c.begin() + 1, c.end());
    return c;
  };
  const auto cu = rotate(u, half_edge), cv = rotate(v, hv);
  auto with = [&](std::array<int, 3> nu, std::array<int, 3> nv) {
    std::vector<Trivalent> tri = d.trivalent();
    tri[static_cast<std::size_t>(u - L)] = {nu};
    tri[static_cast<std::size_t>(v - L)] = {nv};
    return JacobiDiagram(d.leaves(), tri, d.partners(), d.circles());
  };
  // Reassigning which vertex owns a stub keeps the stub's own half-edge id and partner.
  return {d, with({cu[0], cu[1], cv[1]}, {cv[0], cu[2], cv[2]}),
          with({cu[0], cu[1], cv[2]}, {cv[0], cv[1], cu[2]})};
}

// Signs (I, H, X) making the weighted sum vanish; derived once by ihx_sign_derivation().
inline constexpr std::array<int, 3> kIhxSigns{1, -1, -1};

inline std::optional<std::array<int, 3>> ihx_sign_derivation() {
  JacobiDiagram t = linear_tree({1, 2, 3, 4});
  int edge = -1;
  for (int h = 0; h < t.half_edge_count() && edge < 0; ++h)
    if (!t.is_leaf_half_edge(h) && !t.is_leaf_half_edge(t.partner(h))) edge = h;
  auto terms = ihx_terms(t, edge);
  std::vector<RationalVector> basis;
  RationalVector target;
  for (int i = 0; i < 3; ++i) {
    WeightValue w = weight_direct(terms[static_cast<std::size_t>(i)], 4);
    RationalVector v(256);
    for (const auto& [k, x] : w.tensor.entries()) v[k >> 56] = x;
    if (i == 0)
      target = v;
    else
      basis.push_back(v);
  }
  for (auto& x : target) x = -x;
  auto sol = solve_in_span(basis, target);
  if (!sol) return std::nullopt;
  std::array<int, 3> s{1, 0, 0};
  for (int i = 0; i < 2; ++i) {
    const Rational& x = (*sol)[static_cast<std::size_t>(i)];
    if (x == 1)
      s[static_cast<std::size_t>(i + 1)] = 1;
    else if (x == -1)
      s[static_cast<std::size_t>(i + 1)] = -1;
    else
      return std::nullopt;
  }
  return s;
}

}  // namespace sl2ws
