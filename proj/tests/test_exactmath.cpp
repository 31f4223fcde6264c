#include <gtest/gtest.h>

#include <random>

#include "sl2ws/laurent.hpp"
#include "sl2ws/matrix.hpp"
#include "sl2ws/qfrac.hpp"

using namespace sl2ws;

namespace {

// Plain Gaussian elimination over Q, no fraction-free tricks.
std::size_t naive_rank(std::vector<RationalVector> a) {
  std::size_t r = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && is_zero(a[p][c])) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || is_zero(a[i][c])) continue;
      Rational f = a[i][c] / a[r][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

ExactMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double density) {
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> val(-4, 4);
  ExactMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (u(rng) < density) m.set(r, c, make_rational(val(rng), 1 + (val(rng) + 4) % 3));
  return m;
}

std::vector<RationalVector> dense_rows(const ExactMatrix& m) {
  std::vector<RationalVector> a(m.rows(), RationalVector(m.cols()));
  for (const auto& [rc, v] : m.entries()) a[rc.first][rc.second] = v;
  return a;
}

}  // namespace

TEST(Rational, SerializesWithoutUnitDenominator) {
  EXPECT_EQ(to_string(make_rational(3)), "3");
  EXPECT_EQ(to_string(make_rational(-2, 4)), "-1/2");
  EXPECT_EQ(parse_rational("6/4"), make_rational(3, 2));
  EXPECT_THROW(parse_rational("x"), Error);
}

TEST(Laurent, QuantumIntegers) {
  EXPECT_EQ(qint(1), LaurentPoly(1));
  EXPECT_TRUE(qint(0).is_zero());
  EXPECT_EQ(qint(2), LaurentPoly::q(1) + LaurentPoly::q(-1));
  EXPECT_EQ(qint(-3), -qint(3));
  for (int m = 0; m < 30; ++m) {
    EXPECT_EQ(eval_at_one(qint(m)), m);
    EXPECT_EQ(qint(m).bar(), qint(m));
  }
}

TEST(Laurent, QuantumIntegerIsQuotient) {
  // [m](q - q^-1) = q^m - q^-m
  for (int m = 0; m < 12; ++m)
    EXPECT_EQ(qint(m) * (LaurentPoly::q(1) - LaurentPoly::q(-1)), LaurentPoly::q(m) - LaurentPoly::q(-m));
}

TEST(Laurent, Factorials) {
  EXPECT_EQ(qfact(0), LaurentPoly(1));
  EXPECT_EQ(qfact(2), LaurentPoly::q(1) + LaurentPoly::q(-1));
  LaurentPoly three = (LaurentPoly::q(1) + LaurentPoly::q(-1)) * (LaurentPoly::q(2) + 1 + LaurentPoly::q(-2));
  EXPECT_EQ(qfact(3), three);
}

TEST(Laurent, EvalAtOne) {
  EXPECT_EQ(eval_at_one(LaurentPoly::q(1) + LaurentPoly::q(-1)), 2);
  EXPECT_EQ(eval_at_one(LaurentPoly{}), 0);
  EXPECT_EQ(eval_at_one(LaurentPoly::q(-1) + LaurentPoly::q(-3)), 2);
}

TEST(Laurent, ExactDivision) {
  LaurentPoly a = qint(3) * qint(5) * LaurentPoly::q(-7);
  auto d = divide_exact(a, qint(5));
  ASSERT_TRUE(d);
  EXPECT_EQ(*d, qint(3) * LaurentPoly::q(-7));
  EXPECT_FALSE(divide_exact(qint(3), qint(2)));
  EXPECT_THROW(divide_or_throw(qint(3), qint(2)), Error);
  // quantum binomials are Laurent polynomials
  for (int n = 0; n < 9; ++n)
    for (int k = 0; k <= n; ++k) EXPECT_TRUE(divide_exact(qfact(n), qfact(k) * qfact(n - k)));
}

TEST(QFrac, NormalFormAndArithmetic) {
  QFrac half = QFrac(1).divided_by_two();
  EXPECT_EQ(half.two_power(), 1u);
  EXPECT_EQ(half * QFrac(qint(2)), QFrac(1));
  EXPECT_EQ(half + half, QFrac(LaurentPoly(2), 1));
  EXPECT_EQ(half.eval_at_one(), make_rational(1, 2));
  // -1/(q^-1 + q^-3) = -q^2/[2]
  QFrac e(LaurentPoly::q(2) * -1, 1);
  EXPECT_EQ(e * QFrac(LaurentPoly::q(-1) + LaurentPoly::q(-3)), QFrac(-1));
  EXPECT_TRUE((half - half).is_zero());
}

TEST(Matrix, SmallExamples) {
  ExactMatrix id(3, 3);
  for (int i = 0; i < 3; ++i) id.set(i, i, 1);
  EXPECT_EQ(rank(id), 3u);
  EXPECT_TRUE(kernel_basis(id).empty());
  EXPECT_EQ(rank(ExactMatrix(2, 5)), 0u);
  ExactMatrix ones(1, 2);
  ones.set(0, 0, 1);
  ones.set(0, 1, 1);
  auto k = kernel_basis(ones);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0][0], -k[0][1]);
}

TEST(Matrix, SolveInSpan) {
  std::vector<RationalVector> b{{1, 0}, {0, 1}};
  auto x = solve_in_span(b, {3, 5});
  ASSERT_TRUE(x);
  EXPECT_EQ(*x, (RationalVector{3, 5}));
  std::vector<RationalVector> b2{{1, 1}};
  EXPECT_FALSE(solve_in_span(b2, {1, 0}));
}

TEST(MatrixProperty, RankNullityAndNaiveAgreement) {
  constexpr int kIterations = 200;
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> dim(1, 50);
  std::uniform_real_distribution<double> dens(0.02, 0.5);
  for (int it = 0; it < kIterations; ++it) {
    ExactMatrix m = random_matrix(rng, dim(rng), dim(rng), dens(rng));
    auto k = kernel_basis(m);
    std::size_t r = rank(m);
    EXPECT_EQ(r + k.size(), m.cols());
    EXPECT_EQ(r, naive_rank(dense_rows(m)));
    for (const auto& v : k)
      for (const auto& y : m.multiply(v)) EXPECT_TRUE(is_zero(y));
  }
}

TEST(MatrixProperty, SolveRecombines) {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 100; ++it) {
    ExactMatrix m = random_matrix(rng, 8, 5, 0.4);
    std::vector<RationalVector> basis;
    for (std::size_t c = 0; c < m.cols(); ++c) basis.push_back(m.column(c));
    RationalVector x(m.cols());
    for (auto& v : x) v = make_rational(static_cast<long>(rng() % 7) - 3);
    RationalVector target = m.multiply(x);
    auto sol = solve_in_span(basis, target);
    ASSERT_TRUE(sol);
    EXPECT_EQ(m.multiply(*sol), target);
  }
}

TEST(MatrixProperty, InverseAndModularFilter) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 30; ++it) {
    ExactMatrix m = random_matrix(rng, 6, 6, 0.6);
    auto a = dense_rows(m);
    auto inv = inverse(a);
    EXPECT_EQ(inv.has_value(), rank(m) == 6);
    ModularEchelon me(6);
    std::size_t mr = 0;
    for (const auto& r : m.sparse_rows()) mr += me.insert(r);
    EXPECT_EQ(mr, rank(m));
  }
}
