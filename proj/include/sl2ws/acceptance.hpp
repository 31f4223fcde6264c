#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "characters.hpp"
#include "fk.hpp"
#include "random.hpp"
#include "rewrite.hpp"

namespace sl2ws {

struct AcceptanceOptions {
  bool long_run = false;
  std::uint64_t seed = 20240601;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // what was checked, or the first failures
  double seconds = 0;
};

namespace detail {

// Collects failed expectations; pass() is true when none were recorded.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool pass() const { return failed_ == 0; }
  std::string summary(const std::string& ok_text) const {
    if (pass()) return ok_text + " (" + std::to_string(checks_) + " checks)";
    std::string s = std::to_string(failed_) + " of " + std::to_string(checks_) + " checks failed:";
    for (const auto& f : failures_) s += " [" + f + "]";
    return s;
  }

 private:
  std::size_t checks_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
};

// dim of the joint kernel of ad_h, ad_e, ad_f on the 3^n SL2 tensors.
inline std::size_t joint_kernel_dimension(int n) {
  std::size_t dim = 1;
  for (int i = 0; i < n; ++i) dim *= 3;
  const std::vector<SlotBasis> slots(static_cast<std::size_t>(n), SlotBasis::SL2);
  std::map<std::pair<PackedIndex, int>, std::size_t> rows_of;
  std::vector<SparseVector> rows;
  std::size_t cols = 0;
  for (std::size_t j = 0; j < dim; ++j) {
    std::vector<unsigned> idx(static_cast<std::size_t>(n));
    for (std::size_t r = j, s = 0; s < idx.size(); ++s, r /= 3) idx[s] = static_cast<unsigned>(r % 3);
    Tensor<Rational> t(slots);
    t.add(pack(idx), 1);
    // ad_h is diagonal: only zero-weight words can be in the kernel
    if (!adjoint_act(Generator::h, t).is_zero()) continue;
    for (Generator x : {Generator::e, Generator::f}) {
      const Tensor<Rational> image = adjoint_act(x, t);
      for (const auto& [k, v] : image.entries()) {
        auto [it, ins] = rows_of.emplace(std::pair{k, x == Generator::e ? 0 : 1}, rows.size());
        if (ins) rows.emplace_back();
        rows[it->second].emplace(cols, v);
      }
    }
    ++cols;
  }
  return cols - echelon_of(std::move(rows)).rank();
}

inline WeightValue weight_of(const DiagramCombination& comb, int n) {
  WeightValue out = zero_weight(n);
  for (const auto& [k, t] : comb.terms()) {
    WeightValue w = weight_direct(t.diagram, n);
    w.tensor *= t.coeff;
    out += w;
  }
  return out;
}

inline WeightValue weight_of_coords(const RationalVector& c, int n) {
  const auto basis = linear_tree_basis(n);
  WeightValue out = zero_weight(n);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (is_zero(c[i])) continue;
    WeightValue w = weight_direct(basis[i], n);
    w.tensor *= c[i];
    out += w;
  }
  return out;
}

inline std::vector<int> internal_half_edges(const JacobiDiagram& d) {
  std::vector<int> out;
  for (int h = 0; h < d.half_edge_count(); ++h)
    if (!d.is_leaf_half_edge(h) && !d.is_leaf_half_edge(d.partner(h))) out.push_back(h);
  return out;
}

}  // namespace detail

struct ExpectedDimensions {
  int n;
  long c, inv, ker;
};
inline constexpr ExpectedDimensions kExpectedDimensions[] = {{2, 1, 1, 0},   {3, 1, 1, 0},     {4, 2, 3, 0},      {5, 6, 6, 0},
                                             {6, 24, 15, 10}, {7, 120, 36, 84}, {8, 720, 91, 630}, {9, 5040, 232, 4808}};

inline CriterionResult criterion_table1(const AcceptanceOptions& o) {
  detail::Checker c;
  for (const auto& e : kExpectedDimensions) {
    if (e.n == 9 && !o.long_run) continue;
    const Table1Row r = table1_row(e.n);
    c.expect(r.dim_c == e.c && r.dim_inv == e.inv && r.dim_ker == e.ker,
             "dimension row n=" + std::to_string(e.n) + " got (" + r.dim_c.get_str() + "," + r.dim_inv.get_str() + "," + r.dim_ker.get_str() + ")");
  }
  return {1, "dimension table", c.pass(), c.summary(o.long_run ? "n = 2..9" : "n = 2..8")};
}

inline CriterionResult criterion_tree_basis(const AcceptanceOptions&) {
  detail::Checker c;
  for (int n = 2; n <= 8; ++n) {
    const TreeBasis& tb = tree_basis(n);
    c.expect(tb.pivots().size() == riordan_number(n).get_ui(), "tree basis rank at n=" + std::to_string(n));
  }
  for (int n = 2; n <= 6; ++n)
    c.expect(Integer(static_cast<unsigned long>(detail::joint_kernel_dimension(n))) == riordan_number(n),
             "joint kernel of ad at n=" + std::to_string(n));
  return {2, "tree basis spans Inv", c.pass(), c.summary("rank R_n for n = 2..8, joint kernel for n <= 6")};
}

inline CriterionResult criterion_injectivity(const AcceptanceOptions&) {
  detail::Checker c;
  for (int n = 2; n <= 8; ++n) {
    const std::size_t ker = homotopy_matrix(n).cols() - image_space(n).rank();
    c.expect((ker == 0) == (n <= 5), "kernel at n=" + std::to_string(n) + " has dimension " + std::to_string(ker));
  }
  for (int n = 2; n <= 7; ++n) {
    const auto basis = homotopy_kernel_basis(n);
    c.expect(basis.empty() == (n <= 5), "explicit kernel basis at n=" + std::to_string(n));
  }
  return {3, "W injective exactly for n <= 5", c.pass(), c.summary("n = 2..8")};
}

inline CriterionResult criterion_surjectivity(const AcceptanceOptions&) {
  detail::Checker c;
  for (int n = 2; n <= 8; ++n) {
    const ImageSpace& im = image_space(n);
    const std::size_t rn = riordan_number(n).get_ui();
    if (n == 2 || n % 2 == 1) {
      c.expect(im.rank() == rn, "rank at n=" + std::to_string(n));
    } else {
      c.expect(im.rank() + 1 == rn, "rank at n=" + std::to_string(n));
      c.expect(!im.contains(tree_basis(n).coordinates(casimir_power(n))), "c^n in image at n=" + std::to_string(n));
      c.expect(cokernel_check(n), "image + c^n at n=" + std::to_string(n));
    }
  }
  return {4, "image of W", c.pass(), c.summary("rank R_n for n in {2,3,5,7}, R_n - 1 and c^n complement for {4,6,8}")};
}

inline CriterionResult criterion_relators(const AcceptanceOptions& o) {
  detail::Checker c;
  for (int k = 3; k <= (o.long_run ? 8 : 7); ++k) {
    const RelatorSet r = one_loop_relators(k);
    const std::size_t want = k <= 4 ? 0 : static_cast<std::size_t>(kExpectedDimensions[k - 1].ker);
    c.expect(r.stats.in_kernel, "relators of degree " + std::to_string(k) + " not in kernel");
    c.expect(r.rank() == want, "relator span in degree " + std::to_string(k) + " is " + std::to_string(r.rank()));
  }
  return {5, "1-loop relators span the kernel", c.pass(), c.summary(o.long_run ? "degrees 3..8" : "degrees 3..7")};
}

inline CriterionResult criterion_image_membership(const AcceptanceOptions&) {
  detail::Checker c;
  for (int n : {4, 6, 8}) {
    const TreeBasis& tb = tree_basis(n);
    for (const auto& t : tb.trees()) {
      if (is_strut_only(t.partition))
        c.expect(strut_congruence(t.partition), "strut congruence " + to_string(t.partition));
      else
        c.expect(image_membership(t.partition), "image membership " + to_string(t.partition));
    }
    const HomotopyMatrix& m = homotopy_matrix(n);
    for (std::size_t j = 0; j < m.cols(); ++j)
      c.expect(phi_coordinates(m.column(j), n) == 0, "phi on column " + std::to_string(j) + " at n=" + std::to_string(n));
    c.expect(phi(casimir_power(n).tensor, n) == 1, "phi(c^n) at n=" + std::to_string(n));
  }
  return {6, "image membership and phi", c.pass(), c.summary("n = 4, 6, 8")};
}

inline CriterionResult criterion_evaluators(const AcceptanceOptions& o) {
  detail::Checker c;
  for (int n = 2; n <= 7; ++n)
    for (const auto& t : linear_tree_basis(n)) c.expect(weight_cv(t, n) == weight_direct(t, n), "weight_cv on a linear tree, n=" + std::to_string(n));
  std::mt19937_64 rng(o.seed);
  for (int it = 0; it < 100; ++it) {
    const int n = 4 + static_cast<int>(rng() % 3);
    const JacobiDiagram d = random_one_loop(rng, n);
    const WeightValue w = weight_direct(d, n);
    c.expect(weight_cv(d, n) == w, "weight_cv on a one-loop diagram");
    c.expect(detail::weight_of(reduce_to_forests(d), n) == w, "reduce_to_forests on a one-loop diagram");
    const JacobiDiagram t = random_tree(rng, n + 1);
    c.expect(detail::weight_of_coords(ihx_normalize(t, n + 1), n + 1) == weight_direct(t, n + 1), "ihx_normalize on a tree");
  }
  return {7, "evaluators agree", c.pass(), c.summary("linear trees n <= 7, 100 one-loop diagrams, 100 trees")};
}

inline CriterionResult criterion_fk(const AcceptanceOptions&) {
  detail::Checker c;
  {
    QTensor want(std::vector<SlotBasis>(2, SlotBasis::V2));
    want.add(pack({kV2Top, kV2Bottom}), 1);
    want.add(pack({kV2Zero, kV2Zero}), QFrac(-LaurentPoly::q(-1) - LaurentPoly::q(-3)));
    want.add(pack({kV2Bottom, kV2Top}), QFrac(LaurentPoly::q(-2)));
    c.expect(c_tilde() == want, "c~ listing");
  }
  {
    // the v-2 v0 v2 entry is -q^-4 (see the README)
    const std::vector<std::pair<std::vector<unsigned>, LaurentPoly>> rows = {
        {{kV2Top, kV2Zero, kV2Bottom}, LaurentPoly(1)},
        {{kV2Zero, kV2Bottom, kV2Top}, LaurentPoly::q(-2)},
        {{kV2Bottom, kV2Top, kV2Zero}, LaurentPoly::q(-2)},
        {{kV2Zero, kV2Zero, kV2Zero}, LaurentPoly::q(-5) - LaurentPoly::q(-1)},
        {{kV2Top, kV2Bottom, kV2Zero}, -LaurentPoly::q(-2)},
        {{kV2Zero, kV2Top, kV2Bottom}, -LaurentPoly::q(-2)},
        {{kV2Bottom, kV2Zero, kV2Top}, -LaurentPoly::q(-4)}};
    QTensor want(std::vector<SlotBasis>(3, SlotBasis::V2));
    for (const auto& [idx, v] : rows) want.add(pack(idx), QFrac(v));
    c.expect(b_tilde() == want, "b~ listing");
  }
  c.expect(apply_map(apply_map(QTensor::scalar(1), 0, delta1()), 0, pi2()).is_zero(), "pi2 o delta1 = 0");
  for (unsigned x = 0; x < 4; ++x) {
    QTensor v(std::vector<SlotBasis>(2, SlotBasis::V1));
    v.add(pack({x >> 1, x & 1u}), 1);
    const QTensor once = apply_map(v, 0, p2());
    c.expect(apply_map(once, 0, p2()) == once, "p2 idempotent");
  }
  c.expect(eps2_factorization_check(), "eps2 factorization");
  for (int n = 2; n <= 6; ++n) {
    try {
      transition_matrix(n);
      c.expect(true, "");
    } catch (const Error& e) {
      c.expect(false, std::string("transition matrix n=") + std::to_string(n) + ": " + e.what());
    }
  }
  std::size_t trees = 0;
  for (int n = 2; n <= 7; ++n)
    for (const auto& p : riordan_partitions(n)) {
      c.expect(check_prop_rho(p), "rho(f(T)) for " + to_string(p));
      ++trees;
    }
  return {8, "FK calculus", c.pass(), c.summary("c~, b~, maps, transition n <= 6, rho on " + std::to_string(trees) + " trees")};
}

inline CriterionResult criterion_characters(const AcceptanceOptions&) {
  detail::Checker c;
  c.expect(chi_C(6, identity_type(6)) == 24 && chi_C(6, {2, 2, 2}) == 8 && chi_C(6, {2, 2, 1, 1}) == 0, "chi_C values");
  for (int n = 2; n <= 8; ++n)
    c.expect(chi_inv(n, identity_type(n)) == Rational(riordan_number(n)), "chi_inv(1) at n=" + std::to_string(n));
  for (int n = 2; n <= 5; ++n)
    for (const auto& ct : integer_partitions(n))
      c.expect(chi_inv(n, ct) == chi_inv_trace(n, ct), "chi_inv trace at " + shape_string(ct));
  for (int n = 2; n <= 8; ++n) {
    try {
      const auto dec = decompose(chi_kernel(n), n);
      Integer dim = 0;
      for (const auto& [lam, m] : dec) dim += m * shape_dimension(lam);
      c.expect(dim == table1_row(n).dim_ker, "kernel character dimension at n=" + std::to_string(n));
      if (n == 6) c.expect(dec == std::map<YoungShape, Integer>{{{3, 1, 1, 1}, 1}}, "kernel at n=6 is V(3,1,1,1)");
    } catch (const Error& e) {
      c.expect(false, e.what());
    }
  }
  return {9, "characters", c.pass(), c.summary("chi_C, chi_inv n <= 8, traces n <= 5, kernel decompositions n <= 8")};
}

inline CriterionResult criterion_properties(const AcceptanceOptions& o) {
  detail::Checker c;
  std::mt19937_64 rng(o.seed + 10);
  std::size_t cases = 0;
  for (int it = 0; it < 150; ++it, ++cases) {
    const int n = 3 + static_cast<int>(rng() % 5);
    const JacobiDiagram d = random_tree(rng, n);
    const int t = static_cast<int>(rng() % static_cast<unsigned>(d.trivalent_count()));
    WeightValue w = weight_direct(d, n);
    w.tensor *= Rational(-1);
    c.expect(weight_direct(reverse_vertex(d, t), n) == w, "AS");
  }
  for (int it = 0; it < 150; ++it, ++cases) {
    const int n = 4 + static_cast<int>(rng() % 4);
    const JacobiDiagram d = random_tree(rng, n);
    const auto internal = detail::internal_half_edges(d);
    const auto terms = ihx_terms(d, internal[rng() % internal.size()]);
    WeightValue sum = zero_weight(n);
    for (int i = 0; i < 3; ++i) {
      WeightValue w = weight_direct(terms[static_cast<std::size_t>(i)], n);
      w.tensor *= Rational(kIhxSigns[static_cast<std::size_t>(i)]);
      sum += w;
    }
    c.expect(sum.tensor.is_zero(), "IHX");
  }
  for (int it = 0; it < 100; ++it, ++cases) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const JacobiDiagram d = n >= 4 && it % 2 ? random_one_loop(rng, n) : random_tree(rng, n);
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 1);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    const JacobiDiagram sd = relabel(d, [&](int l) { return sigma[static_cast<std::size_t>(l - 1)]; });
    std::vector<std::size_t> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)] - 1);
    c.expect(weight_direct(sd, n).tensor == permute_slots(weight_direct(d, n).tensor, perm), "equivariance");
  }
  for (int it = 0; it < 150; ++it, ++cases) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const JacobiDiagram d = n >= 4 && it % 3 == 0 ? random_one_loop(rng, std::min(n, 6)) : random_tree(rng, n);
    c.expect(is_invariant(weight_direct(d, d.leaf_count()).tensor), "invariance");
  }
  return {10, "randomized properties", c.pass(), c.summary(std::to_string(cases) + " cases, seed " + std::to_string(o.seed))};
}

inline std::vector<std::function<CriterionResult(const AcceptanceOptions&)>> acceptance_criteria() {
  return {criterion_table1,   criterion_tree_basis, criterion_injectivity, criterion_surjectivity, criterion_relators,
          criterion_image_membership, criterion_evaluators, criterion_fk,      criterion_characters,   criterion_properties};
}

// Runs every criterion; exceptions count as failures. `report` sees each result as it finishes.
inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o,
                                                   const std::function<void(const CriterionResult&)>& report = {}) {
  std::vector<CriterionResult> out;
  int id = 0;
  for (const auto& f : acceptance_criteria()) {
    ++id;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = f(o);
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (report) report(r);
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s << "criterion " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.name << ": " << r.detail;
  return s.str();
}

}  // namespace sl2ws
