#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "sl2ws/tensor.hpp"

using namespace sl2ws;

namespace {

Tensor<Rational> random_tensor(std::mt19937_64& rng, std::size_t slots, int terms) {
  Tensor<Rational> t(std::vector<SlotBasis>(slots, SlotBasis::SL2));
  std::uniform_int_distribution<unsigned> d(0, 2);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int i = 0; i < terms; ++i) {
    std::vector<unsigned> idx(slots);
    for (auto& x : idx) x = d(rng);
    t.add(pack(idx), c(rng));
  }
  return t;
}

// 2x2 matrices for h, e, f; used to check ad through commutators.
using Mat = std::array<std::array<int, 2>, 2>;
Mat matrix_of(unsigned y) {
  if (y == kH) return {{{1, 0}, {0, -1}}};
  if (y == kE) return {{{0, 1}, {0, 0}}};
  return {{{0, 0}, {1, 0}}};
}
Mat commutator(const Mat& a, const Mat& b) {
  Mat r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) r[i][j] += a[i][k] * b[k][j] - b[i][k] * a[k][j];
  return r;
}

}  // namespace

TEST(Tensor, KappaValues) {
  EXPECT_EQ(kappa()(kH, kH), 2);
  EXPECT_EQ(kappa()(kE, kF), 1);
  EXPECT_EQ(kappa()(kF, kE), 1);
  EXPECT_EQ(kappa()(kE, kE), 0);
  EXPECT_EQ(kappa()(kH, kE), 0);
}

TEST(Tensor, CasimirAndBracketEntries) {
  EXPECT_EQ(casimir().at({kH, kH}), make_rational(1, 2));
  EXPECT_EQ(casimir().at({kE, kF}), 1);
  EXPECT_EQ(casimir().at({kH, kE}), 0);
  EXPECT_EQ(bracket_tensor().at({kH, kE, kF}), 1);
  EXPECT_EQ(bracket_tensor().at({kH, kF, kE}), -1);
  EXPECT_EQ(bracket_tensor().at({kH, kH, kH}), 0);
}

TEST(Tensor, AdjointMatchesMatrixCommutators) {
  for (Generator g : {Generator::h, Generator::e, Generator::f}) {
    unsigned gx = g == Generator::h ? kH : g == Generator::e ? kE : kF;
    for (unsigned y = 0; y < 3; ++y) {
      Mat want = commutator(matrix_of(gx), matrix_of(y));
      Mat got{};
      for (auto [c, t] : ad_sl2(g, y)) {
        Mat m = matrix_of(t);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) got[i][j] += c * m[i][j];
      }
      EXPECT_EQ(got, want);
    }
  }
}

TEST(Tensor, Invariance) {
  EXPECT_TRUE(is_invariant(casimir()));
  EXPECT_TRUE(is_invariant(bracket_tensor()));
  Tensor<Rational> hh({SlotBasis::SL2, SlotBasis::SL2});
  hh.add({kH, kH}, 1);
  EXPECT_FALSE(is_invariant(hh));
  EXPECT_TRUE(adjoint_act(Generator::h, hh).is_zero());
  Tensor<Rational> expect({SlotBasis::SL2, SlotBasis::SL2});
  expect.add({kE, kH}, -2);
  expect.add({kH, kE}, -2);
  EXPECT_EQ(adjoint_act(Generator::e, hh), expect);
  Tensor<Rational> ff({SlotBasis::SL2, SlotBasis::SL2});
  ff.add({kF, kF}, 1);
  Tensor<Rational> hf({SlotBasis::SL2, SlotBasis::SL2});
  hf.add({kH, kF}, 1);
  hf.add({kF, kH}, 1);
  EXPECT_EQ(adjoint_act(Generator::e, ff), hf);
}

TEST(Tensor, ContractionAgainstLoopOracle) {
  Tensor<Rational> cc = tensor_product(casimir(), casimir());
  Tensor<Rational> got = contract(cc, 1, 2, kappa());
  Tensor<Rational> c = casimir();
  Tensor<Rational> want({SlotBasis::SL2, SlotBasis::SL2});
  for (unsigned a = 0; a < 3; ++a)
    for (unsigned b = 0; b < 3; ++b)
      for (unsigned x = 0; x < 3; ++x)
        for (unsigned y = 0; y < 3; ++y) want.add({a, b}, c.at({a, x}) * kappa()(x, y) * c.at({y, b}));
  EXPECT_EQ(got, want);
  // c is the kappa-dual of kappa, so this is c again
  EXPECT_EQ(got, casimir());
  EXPECT_THROW(contract(sl2_to_ext(cc), 0, 1, kappa()), Error);
}

TEST(Tensor, ScalarProductAndSwap) {
  Tensor<Rational> three = Tensor<Rational>::scalar(3);
  EXPECT_EQ(tensor_product(three, casimir()), casimir() * Rational(3));
  EXPECT_EQ(permute_slots(casimir(), std::vector<std::size_t>{1, 0}), casimir());
}

TEST(TensorProperty, ContractionOrderIndependent) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 50; ++it) {
    Tensor<Rational> t = random_tensor(rng, 6, 40);
    // (0,3) then (1,4) [indices shift after the first contraction]
    Tensor<Rational> a = contract(contract(t, 0, 3, kappa()), 0, 2, kappa());
    Tensor<Rational> b = contract(contract(t, 1, 4, kappa()), 0, 2, kappa());
    EXPECT_EQ(a, b);
  }
}

TEST(TensorProperty, PermutationIsGroupAction) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 50; ++it) {
    Tensor<Rational> t = random_tensor(rng, 5, 20);
    std::vector<std::size_t> s(5), u(5), us(5);
    std::iota(s.begin(), s.end(), 0);
    std::iota(u.begin(), u.end(), 0);
    std::shuffle(s.begin(), s.end(), rng);
    std::shuffle(u.begin(), u.end(), rng);
    for (std::size_t i = 0; i < 5; ++i) us[i] = u[s[i]];
    EXPECT_EQ(permute_slots(permute_slots(t, s), u), permute_slots(t, us));
  }
}

TEST(TensorProperty, BracketTotallyAntisymmetric) {
  for (auto perm : std::vector<std::vector<std::size_t>>{{1, 0, 2}, {0, 2, 1}, {2, 1, 0}})
    EXPECT_EQ(permute_slots(bracket_tensor(), perm), -bracket_tensor());
}

TEST(TensorProperty, AdjointBracketRelation) {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 20; ++it) {
    Tensor<Rational> t = sl2_to_ext(random_tensor(rng, 4, 15));
    Tensor<Rational> lhs = adjoint_act(Generator::e, adjoint_act(Generator::f, t)) -
                           adjoint_act(Generator::f, adjoint_act(Generator::e, t));
    EXPECT_EQ(lhs, adjoint_act(Generator::h, t));
  }
}

TEST(TensorProperty, InvariancePreservedByPermutation) {
  Tensor<Rational> t = tensor_product(casimir(), bracket_tensor());
  std::vector<std::size_t> p{0, 1, 2, 3, 4};
  do {
    EXPECT_TRUE(is_invariant(permute_slots(t, p)));
  } while (std::next_permutation(p.begin(), p.end()));
}

TEST(Tensor, ApplyLocalMatchesContraction) {
  // applying kappa as a map (2 inputs, 0 outputs) equals contraction
  Tensor<Rational> k({SlotBasis::SL2, SlotBasis::SL2});
  for (unsigned a = 0; a < 3; ++a)
    for (unsigned b = 0; b < 3; ++b) k.add({a, b}, kappa()(a, b));
  Tensor<Rational> t = tensor_product(bracket_tensor(), casimir());
  EXPECT_EQ(apply_local(t, 2, k, 2), contract(t, 2, 3, kappa()));
  // identity map on one slot
  Tensor<Rational> id({SlotBasis::SL2, SlotBasis::SL2});
  for (unsigned a = 0; a < 3; ++a) id.add({a, a}, 1);
  EXPECT_EQ(apply_local(t, 4, id, 1), t);
  EXPECT_EQ(apply_local(t, 0, id, 1), t);
}
