#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "sl2ws/json_io.hpp"
#include "sl2ws/riordan.hpp"
#include "test_support.hpp"

using namespace sl2ws;

namespace {

// All set partitions of {1..n} (restricted growth strings), filtered.
std::size_t brute_force_riordan_count(int n) {
  std::size_t count = 0;
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int blocks) {
    if (i == n) {
      std::vector<std::vector<int>> parts(static_cast<std::size_t>(blocks));
      for (int x = 0; x < n; ++x) parts[static_cast<std::size_t>(rgs[static_cast<std::size_t>(x)])].push_back(x + 1);
      if (is_riordan(parts, n)) ++count;
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      rgs[static_cast<std::size_t>(i)] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  rgs[0] = 0;
  rec(1, 1);
  return count;
}

// Points on a circle; two convex hulls meet iff some pair of their edges (or chords) meet.
bool hulls_disjoint(const std::vector<std::vector<int>>& parts, int n) {
  auto pt = [&](int i) {
    double a = 2 * M_PI * i / n;
    return std::pair{std::cos(a), std::sin(a)};
  };
  auto cross = [](std::pair<double, double> o, std::pair<double, double> a, std::pair<double, double> b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
  };
  auto edges = [&](const std::vector<int>& p) {
    std::vector<std::pair<int, int>> e;
    for (std::size_t i = 0; i < p.size(); ++i) e.emplace_back(p[i], p[(i + 1) % p.size()]);
    return e;
  };
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      for (auto [a, b] : edges(parts[i]))
        for (auto [c, d] : edges(parts[j])) {
          double d1 = cross(pt(a), pt(b), pt(c)), d2 = cross(pt(a), pt(b), pt(d));
          double d3 = cross(pt(c), pt(d), pt(a)), d4 = cross(pt(c), pt(d), pt(b));
          if (d1 * d2 < 0 && d3 * d4 < 0) return false;
        }
  return true;
}

RationalVector flat(const Tensor<Rational>& t) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < t.arity(); ++i) size *= 4;
  RationalVector v(size);
  for (const auto& [k, x] : t.entries()) v[k >> (64 - 2 * t.arity())] = x;
  return v;
}

}  // namespace

TEST(Riordan, Numbers) {
  const long want[] = {1, 1, 3, 6, 15, 36, 91, 232, 603, 1585, 4213};
  for (int n = 2; n <= 12; ++n) EXPECT_EQ(riordan_number(n), want[n - 2]) << n;
  EXPECT_THROW(riordan_number(1), Error);
}

TEST(Riordan, CountsMatchBruteForce) {
  for (int n = 2; n <= 10; ++n) EXPECT_EQ(Integer(brute_force_riordan_count(n)), riordan_number(n)) << n;
  for (int n = 2; n <= 12; ++n) EXPECT_EQ(Integer(riordan_partitions(n).size()), riordan_number(n)) << n;
}

TEST(Riordan, OrderAtFour) {
  auto p = riordan_partitions(4);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0].parts, (std::vector<std::vector<int>>{{1, 2, 3, 4}}));
  EXPECT_EQ(p[1].parts, (std::vector<std::vector<int>>{{1, 2}, {3, 4}}));
  EXPECT_EQ(p[2].parts, (std::vector<std::vector<int>>{{1, 4}, {2, 3}}));
}

TEST(Riordan, Examples) {
  EXPECT_TRUE(is_riordan({{1, 4, 5, 9, 10}, {2, 3}, {6, 7, 8}}, 10));
  EXPECT_FALSE(is_riordan({{1, 4, 6}, {2, 3}, {5, 7, 8}}, 8));
  EXPECT_FALSE(is_riordan({{1, 2}, {3}}, 3));
  EXPECT_THROW(parse(R"({"riordan":[[1,3],[2,4]]})"), Error);
}

TEST(RiordanProperty, NoncrossingMatchesGeometry) {
  std::mt19937_64 rng(67);
  for (int it = 0; it < 500; ++it) {
    int n = 4 + static_cast<int>(rng() % 7);
    int blocks = 1 + static_cast<int>(rng() % 4);
    std::vector<std::vector<int>> parts(static_cast<std::size_t>(blocks));
    for (int x = 1; x <= n; ++x) parts[rng() % parts.size()].push_back(x);
    std::erase_if(parts, [](const auto& p) { return p.empty(); });
    EXPECT_EQ(is_noncrossing(parts), hulls_disjoint(parts, n));
  }
}

TEST(TreeBasis, SmallCases) {
  EXPECT_EQ(tree_basis(2).weights().front().tensor, sl2_to_ext(casimir()));
  EXPECT_EQ(tree_basis(3).weights().front().tensor, sl2_to_ext(bracket_tensor()));
  EXPECT_EQ(tree_basis(5).size(), 6u);
}

TEST(TreeBasis, RankIsRiordanNumber) {
  for (int n = 2; n <= 8; ++n) {
    const TreeBasis& b = tree_basis(n);
    EXPECT_EQ(Integer(b.size()), riordan_number(n));
    EXPECT_EQ(b.pivots().size(), b.size());
    // independent exact rank over the full tensors
    EchelonBasis e;
    for (const auto& w : b.weights()) {
      SparseVector s;
      for (const auto& [k, x] : w.tensor.entries()) s.emplace(k >> (64 - 2 * n), x);
      e.insert(s);
    }
    EXPECT_EQ(e.rank(), b.size()) << n;
  }
}

TEST(TreeBasis, InvariantDimensionOracle) {
  // ker ad_h is spanned by the words with as many e as f; on it take ker ad_e and ker ad_f
  for (int n = 2; n <= 6; ++n) {
    std::size_t dim = 1;
    for (int i = 0; i < n; ++i) dim *= 3;
    std::vector<SlotBasis> slots(static_cast<std::size_t>(n), SlotBasis::SL2);
    std::map<PackedIndex, std::size_t> rows_of;
    std::vector<SparseVector> rows;
    std::size_t cols = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      std::vector<unsigned> idx(static_cast<std::size_t>(n));
      for (std::size_t r = j, s = 0; s < idx.size(); ++s, r /= 3) idx[s] = static_cast<unsigned>(r % 3);
      Tensor<Rational> t(slots);
      t.add(pack(idx), 1);
      if (!adjoint_act(Generator::h, t).is_zero()) continue;
      for (Generator x : {Generator::e, Generator::f}) {
        const Tensor<Rational> image = adjoint_act(x, t);
        for (const auto& [k, v] : image.entries()) {
          PackedIndex key = k | (x == Generator::e ? 0 : 1);  // slot 31 is unused here
          auto [it, ins] = rows_of.emplace(key, rows.size());
          if (ins) rows.emplace_back();
          rows[it->second].emplace(cols, v);
        }
      }
      ++cols;
    }
    std::size_t kernel = cols - echelon_of(rows).rank();
    EXPECT_EQ(Integer(kernel), riordan_number(n)) << n;
  }
}

TEST(TreeBasis, Coordinates) {
  for (int n = 2; n <= 6; ++n) {
    const TreeBasis& b = tree_basis(n);
    for (std::size_t i = 0; i < b.size(); ++i) {
      RationalVector e(b.size());
      e[i] = 1;
      EXPECT_EQ(b.coordinates(b.weights()[i]), e);
    }
  }
  const TreeBasis& b4 = tree_basis(4);
  RationalVector c = b4.coordinates(casimir_power(4));
  RationalVector e(3);
  e[b4.index_of(normalized({{1, 2}, {3, 4}}))] = 1;
  EXPECT_EQ(c, e);
  // oracle: exact solve against the full basis tensors
  WeightValue w = weight_direct(linear_tree({1, 3, 2, 4}), 4);
  std::vector<RationalVector> cols;
  for (const auto& x : b4.weights()) cols.push_back(flat(x.tensor));
  auto sol = solve_in_span(cols, flat(w.tensor));
  ASSERT_TRUE(sol);
  EXPECT_EQ(b4.coordinates(w), *sol);
}

TEST(TreeBasis, RejectsNonInvariant) {
  Tensor<Rational> t({SlotBasis::SL2, SlotBasis::SL2});
  t.add({kE, kE}, 1);
  try {
    coordinates(t, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotInInvariantSpan);
  }
  Tensor<Rational> u(std::vector<SlotBasis>(2, SlotBasis::EXT));
  u.add({0, 0}, 1);
  EXPECT_THROW(coordinates(u, 2), Error);
}

TEST(TreeBasisProperty, CoordinatesOfRandomTreesRecombine) {
  std::mt19937_64 rng(71);
  for (int it = 0; it < 40; ++it) {
    int n = 2 + static_cast<int>(rng() % 6);
    JacobiDiagram d = testing_support::random_tree(rng, n);
    WeightValue w = weight_direct(d, n);
    RationalVector g = coordinates(w.tensor, n);
    WeightValue sum = zero_weight(n);
    for (std::size_t i = 0; i < g.size(); ++i) {
      WeightValue x = tree_basis(n).weights()[i];
      x.tensor *= g[i];
      sum += x;
    }
    EXPECT_EQ(sum, w);
  }
}

TEST(TreeBasisProperty, FastEntriesMatchWeights) {
  std::mt19937_64 rng(73);
  for (int it = 0; it < 30; ++it) {
    int n = 2 + static_cast<int>(rng() % 7);
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::iota(labels.begin(), labels.end(), 1);
    std::shuffle(labels.begin(), labels.end(), rng);
    Tensor<Rational> w = project_to_sl2(weight_direct(linear_tree(labels), n).tensor);
    for (int s = 0; s < 50; ++s) {
      std::vector<unsigned> x(static_cast<std::size_t>(n));
      for (auto& v : x) v = static_cast<unsigned>(rng() % 3);
      EXPECT_EQ(linear_tree_entry(labels, x), w.at(pack(x)));
    }
    for (const auto& [k, v] : w.entries()) EXPECT_EQ(linear_tree_entry(labels, unpack(k, static_cast<std::size_t>(n))), v);
  }
}
