#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "sl2ws/analysis.hpp"

using namespace sl2ws;

namespace {

struct Row {
  int n;
  long c, inv, ker;
};
// Expected dimensions of C_n, Inv and the kernel.
const Row kTable[] = {{2, 1, 1, 0}, {3, 1, 1, 0}, {4, 2, 3, 0}, {5, 6, 6, 0}, {6, 24, 15, 10}, {7, 120, 36, 84}, {8, 720, 91, 630}};

// Rank of the raw weight tensors of the linear trees, without tree coordinates.
std::size_t raw_weight_rank(int n) {
  std::map<PackedIndex, std::size_t> pos;
  std::vector<SparseVector> rows;
  for (const auto& t : linear_tree_basis(n)) {
    SparseVector r;
    const WeightValue w = weight_direct(t, n);
    for (const auto& [k, v] : w.tensor.entries()) r.emplace(pos.emplace(k, pos.size()).first->second, v);
    rows.push_back(std::move(r));
  }
  return echelon_of(rows).rank();
}

}  // namespace

TEST(HomotopyMatrix, ColumnsAreTreeCoordinatesOfWeights) {
  for (int n = 2; n <= 7; ++n) {
    const HomotopyMatrix& m = homotopy_matrix(n);
    ASSERT_EQ(m.cols(), factorial_size(n - 2));
    ASSERT_EQ(m.rows(), riordan_number(n).get_ui());
    const auto trees = linear_tree_basis(n);
    const std::size_t step = n <= 6 ? 1 : 7;
    for (std::size_t j = 0; j < trees.size(); j += step)
      EXPECT_EQ(m.column(j), tree_basis(n).coordinates(weight_direct(trees[j], n))) << "n=" << n << " col " << j;
  }
}

TEST(HomotopyMatrix, RankMatchesRawTensors) {
  for (int n = 2; n <= 7; ++n) EXPECT_EQ(image_space(n).rank(), raw_weight_rank(n)) << n;
}

TEST(HomotopyMatrix, Errors) {
  EXPECT_THROW(homotopy_matrix(1), Error);
  EXPECT_THROW(homotopy_matrix(10), Error);
}

TEST(DimensionTable, Rows) {
  for (const Row& r : kTable) {
    Table1Row t = table1_row(r.n);
    EXPECT_EQ(t.dim_c, r.c) << r.n;
    EXPECT_EQ(t.dim_inv, r.inv) << r.n;
    EXPECT_EQ(t.dim_ker, r.ker) << r.n;
  }
}

TEST(DimensionTableProperty, ClosedFormKernelDimension) {
  for (int n = 3; n <= 8; ++n) EXPECT_EQ(table1_row(n).dim_ker, kernel_dimension_formula(n)) << n;
  // the strut spans Inv at n = 2, so the even-order correction term does not apply there
  EXPECT_EQ(kernel_dimension_formula(2), 1);
  EXPECT_EQ(table1_row(2).dim_ker, 0);
}

TEST(DimensionTableProperty, InjectiveExactlyUpToFive) {
  for (int n = 2; n <= 8; ++n) EXPECT_EQ(table1_row(n).dim_ker == 0, n <= 5) << n;
}

TEST(DimensionTableProperty, SurjectiveExactlyForOddOrTwo) {
  for (int n = 2; n <= 8; ++n) {
    const ImageSpace& im = image_space(n);
    const std::size_t expect = (n % 2 == 1 || n == 2) ? im.dimension() : im.dimension() - 1;
    EXPECT_EQ(im.rank(), expect) << n;
  }
}

TEST(HomotopyMatrix, KernelBasisIsKilled) {
  for (int n = 5; n <= 7; ++n) {
    const auto ker = homotopy_kernel_basis(n);
    EXPECT_EQ(ker.size(), table1_row(n).dim_ker.get_ui());
    const ExactMatrix m = homotopy_matrix(n).matrix();
    for (const auto& v : ker)
      for (const auto& x : m.multiply(v)) EXPECT_TRUE(is_zero(x));
  }
}

TEST(Cokernel, EvenOrders) {
  EXPECT_TRUE(cokernel_check(4));
  EXPECT_TRUE(cokernel_check(6));
  EXPECT_TRUE(cokernel_check(8));
  EXPECT_THROW(cokernel_check(3), Error);
  EXPECT_THROW(cokernel_check(2), Error);
}

TEST(Phi, Values) {
  for (int n : {4, 6, 8}) {
    EXPECT_EQ(phi(casimir_power(n).tensor, n), 1) << n;
    const HomotopyMatrix& m = homotopy_matrix(n);
    for (std::size_t j = 0; j < m.cols(); ++j) EXPECT_EQ(phi_coordinates(m.column(j), n), 0) << n << " " << j;
    const TreeBasis& tb = tree_basis(n);
    for (std::size_t i = 0; i < tb.size(); ++i)
      if (!is_strut_only(tb.trees()[i].partition)) {
        EXPECT_EQ(phi(tb.weights()[i].tensor, n), 0);
      }
  }
  EXPECT_EQ(phi(weight_direct(linear_tree({1, 3, 2, 5, 4, 6}), 6).tensor, 6), 0);
  EXPECT_THROW(phi(casimir_power(4).tensor, 5), Error);
  Tensor<Rational> bad(std::vector<SlotBasis>(4, SlotBasis::SL2));
  bad.add(pack({kE, kE, kE, kE}), 1);
  EXPECT_THROW(phi(bad, 4), Error);
}

TEST(ImageMembership, TreesWithTrivalentVertices) {
  for (int n : {4, 6, 8}) {
    const TreeBasis& tb = tree_basis(n);
    for (const auto& t : tb.trees())
      EXPECT_EQ(image_membership(t.partition), !is_strut_only(t.partition)) << to_string(t.partition);
  }
}

TEST(ImageMembership, StrutOnlyCongruentToCasimirPower) {
  for (int n : {4, 6, 8}) {
    std::size_t count = 0;
    for (const auto& t : tree_basis(n).trees())
      if (is_strut_only(t.partition)) {
        ++count;
        EXPECT_TRUE(strut_congruence(t.partition)) << to_string(t.partition);
      }
    // noncrossing perfect matchings: Catalan numbers
    EXPECT_EQ(count, std::vector<std::size_t>({0, 0, 0, 0, 2, 0, 5, 0, 14})[static_cast<std::size_t>(n)]);
  }
  EXPECT_THROW(strut_congruence(normalized({{1, 2, 3}})), Error);
}

TEST(Relators, CycleEdges) {
  for (const auto& d : one_loop_diagrams(6)) {
    auto sc = shortest_cycle_edge(d);
    ASSERT_TRUE(sc);
    EXPECT_EQ(detail::cycle_edges(d).size(), static_cast<std::size_t>(sc->second));
  }
}

TEST(Relators, LowDegreesAreTrivial) {
  for (int k : {3, 4}) {
    RelatorSet r = one_loop_relators(k);
    EXPECT_TRUE(r.vectors.empty()) << k;
    EXPECT_TRUE(r.stats.exhausted);
    EXPECT_TRUE(kernel_span_check(k));
  }
}

TEST(Relators, SpanKernelInDegreesFiveAndSix) {
  for (auto [k, dim] : {std::pair{5, 10u}, std::pair{6, 84u}}) {
    RelatorSet r = one_loop_relators(k);
    EXPECT_EQ(r.rank(), dim) << k;
    EXPECT_TRUE(r.stats.in_kernel);
    // independent check against an exact kernel basis
    const auto ker = homotopy_kernel_basis(k + 1);
    for (const auto& v : r.vectors) EXPECT_TRUE(solve_in_span(ker, v).has_value());
    EXPECT_TRUE(kernel_span_check(k));
  }
}

TEST(Relators, FullEnumerationAtDegreeFive) {
  RelatorSet r = one_loop_relators(5, {.stop_at_kernel_dim = false});
  EXPECT_TRUE(r.stats.exhausted);
  EXPECT_EQ(r.rank(), 10u);
  EXPECT_TRUE(r.stats.in_kernel);
}

TEST(Relators, Errors) {
  EXPECT_THROW(one_loop_relators(2), Error);
  EXPECT_THROW(one_loop_relators(9), Error);
}

TEST(Relators, CacheRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "sl2ws-relator-cache-test";
  std::filesystem::remove_all(dir);
  setenv("PAPERLAB_CACHE_DIR", dir.c_str(), 1);
  RelatorSet a = one_loop_relators(5);
  RelatorSet b = one_loop_relators(5);
  unsetenv("PAPERLAB_CACHE_DIR");
  EXPECT_FALSE(a.stats.from_cache);
  EXPECT_TRUE(b.stats.from_cache);
  EXPECT_EQ(a.vectors, b.vectors);
  // a corrupted cache is ignored
  {
    std::ofstream f(dir / "relators-5.txt");
    f << "24 1 0 0\n";
  }
  setenv("PAPERLAB_CACHE_DIR", dir.c_str(), 1);
  RelatorSet c = one_loop_relators(5);
  unsetenv("PAPERLAB_CACHE_DIR");
  EXPECT_FALSE(c.stats.from_cache);
  EXPECT_EQ(c.rank(), 10u);
  std::filesystem::remove_all(dir);
}

TEST(Parallel, ThreadCountDoesNotChangeResults) {
  set_thread_count(1);
  RelatorSet a = one_loop_relators(5);
  set_thread_count(4);
  RelatorSet b = one_loop_relators(5);
  set_thread_count(0);
  EXPECT_EQ(a.vectors, b.vectors);
}
