#include <gtest/gtest.h>

#include <set>

#include "sl2ws/fk.hpp"

using namespace sl2ws;

namespace {

QFrac qm(int e, long c = 1) { return QFrac(LaurentPoly::monomial(e, c)); }

QTensor v2_tensor(const std::vector<std::pair<std::vector<unsigned>, QFrac>>& rows) {
  QTensor t(std::vector<SlotBasis>(rows.front().first.size(), SlotBasis::V2));
  for (const auto& [idx, v] : rows) t.add(pack(idx), v);
  return t;
}

QTensor basis_v1(std::initializer_list<unsigned> idx) {
  QTensor t(std::vector<SlotBasis>(idx.size(), SlotBasis::V1));
  t.add(pack(idx), 1);
  return t;
}

constexpr unsigned P = kV1Plus, M = kV1Minus, T = kV2Top, Z = kV2Zero, B = kV2Bottom;

}  // namespace

TEST(FkMaps, PiKillsDelta) {
  const QTensor t = apply_map(apply_map(QTensor::scalar(1), 0, delta1()), 0, pi2());
  EXPECT_TRUE(t.entries().empty());
}

TEST(FkMaps, ProjectorIsIdempotent) {
  for (unsigned a : {P, M})
    for (unsigned b : {P, M}) {
      const QTensor once = apply_map(basis_v1({a, b}), 0, p2());
      EXPECT_EQ(apply_map(once, 0, p2()), once) << a << b;
    }
}

TEST(FkMaps, ProjectorKillsCap) {
  // p2 o delta1 = 0 and eps1 o p2 = 0
  EXPECT_TRUE(apply_map(apply_map(QTensor::scalar(1), 0, delta1()), 0, p2()).entries().empty());
  for (unsigned a : {P, M})
    for (unsigned b : {P, M})
      EXPECT_TRUE(apply_map(apply_map(basis_v1({a, b}), 0, p2()), 0, eps1()).entries().empty());
}

TEST(FkMaps, Tables) {
  EXPECT_EQ(apply_map(basis_v1({P, M}), 0, pi2()), v2_tensor({{{Z}, qm(-1)}}));
  EXPECT_EQ(apply_map(basis_v1({P, M}), 0, p2()),
            QTensor(basis_v1({P, M}) * QFrac(LaurentPoly::q(-1), 1) + basis_v1({M, P}) * QFrac(1, 1)));
  EXPECT_EQ(apply_map(basis_v1({P, M}), 0, eps1()), QTensor::scalar(qm(1, -1)));
  QTensor top(std::vector<SlotBasis>(2, SlotBasis::V2));
  top.add(pack({T, B}), 1);
  EXPECT_EQ(apply_map(top, 0, eps2()), QTensor::scalar(qm(2)));
  // -1/(q^-1 + q^-3)
  QTensor zz(std::vector<SlotBasis>(2, SlotBasis::V2));
  zz.add(pack({Z, Z}), 1);
  const QFrac v = apply_map(zz, 0, eps2()).at(0);
  EXPECT_EQ(v * QFrac(LaurentPoly::q(-1) + LaurentPoly::q(-3)), QFrac(-1));
  EXPECT_EQ(builtin_maps().size(), 5u);
}

TEST(FkMaps, Loop) {
  // closed loop
  const QTensor loop = apply_map(apply_map(QTensor::scalar(1), 0, delta1()), 0, eps1());
  EXPECT_EQ(loop, QTensor::scalar(QFrac(-qint(2))));
}

TEST(FkMaps, Eps2Factorization) {
  EXPECT_TRUE(eps2_factorization_check());
  // like signs are killed on both sides
  const QTensor v = basis_v1({P, P, P, P});
  QTensor lhs = apply_map(apply_map(apply_map(v, 0, pi2()), 1, pi2()), 0, eps2());
  EXPECT_TRUE(lhs.entries().empty());
}

TEST(FkBasis, CTildeListing) {
  const QTensor want = v2_tensor({{{T, B}, 1}, {{Z, Z}, QFrac(-LaurentPoly::q(-1) - LaurentPoly::q(-3))}, {{B, T}, qm(-2)}});
  EXPECT_EQ(c_tilde(), want);
}

TEST(FkBasis, BTildeListing) {
  const QTensor want = v2_tensor({{{T, Z, B}, 1},
                                  {{Z, B, T}, qm(-2)},
                                  {{B, T, Z}, qm(-2)},
                                  {{Z, Z, Z}, QFrac(LaurentPoly::q(-5) - LaurentPoly::q(-1))},
                                  {{T, B, Z}, qm(-2, -1)},
                                  {{Z, T, B}, qm(-2, -1)},
                                  // three swapped arcs and a v1 (x) v-1 box: -q^-3 * q^-1
                                  {{B, Z, T}, qm(-4, -1)}});
  EXPECT_EQ(b_tilde(), want);
}

TEST(FkBasis, InsertionRouteAgrees) {
  for (int n = 2; n <= 6; ++n)
    for (const auto& p : riordan_partitions(n)) {
      const ArcSystem a = arcs_of(p);
      EXPECT_EQ(fk_tensor_by_insertion(n, a, true), f0(p)) << to_string(p);
      EXPECT_EQ(fk_tensor_by_insertion(n, a, false), f0(p)) << to_string(p);
    }
}

TEST(FkBasis, ArcSystemsMatchRiordanPartitions) {
  for (int n = 2; n <= 10; ++n) {
    const auto systems = fk_arc_systems(n);
    EXPECT_EQ(Integer(static_cast<unsigned long>(systems.size())), riordan_number(n)) << n;
    if (n <= 8) {
      std::set<ArcSystem> from_trees;
      for (const auto& p : riordan_partitions(n)) from_trees.insert(arcs_of(p));
      EXPECT_EQ(from_trees, std::set<ArcSystem>(systems.begin(), systems.end())) << n;
    }
  }
}

TEST(FkBasis, FullRank) {
  for (int n = 2; n <= 6; ++n) {
    std::vector<QTensor> dual, jw;
    for (const auto& p : riordan_partitions(n)) {
      dual.push_back(f0(p));
      jw.push_back(f_jw(p));
    }
    const std::size_t r = riordan_number(n).get_ui();
    EXPECT_EQ(rank_at(dual, Rational(2)), r) << n;
    EXPECT_EQ(rank_at(jw, Rational(2)), r) << n;
  }
  EXPECT_EQ(riordan_partitions(4).size(), 3u);
}

TEST(FkJw, TrivialCases) {
  EXPECT_EQ(f_jw(normalized({{1, 2}, {3, 4}})), f0(normalized({{1, 2}, {3, 4}})));
  EXPECT_EQ(f_jw(normalized({{1, 2, 3}})), b_tilde());
  const QTensor want = f0(normalized({{1, 2, 3, 4}})) + f0(normalized({{1, 2}, {3, 4}})) * QFrac(1, 1);
  EXPECT_EQ(f_jw(normalized({{1, 2, 3, 4}})), want);
}

TEST(FkJw, RoutesAgree) {
  for (int n = 2; n <= 6; ++n)
    for (const auto& p : riordan_partitions(n)) EXPECT_EQ(f_jw_contracted(p), f_jw(p)) << to_string(p);
}

TEST(FkRho, CasimirAndBracket) {
  EXPECT_EQ(rho(c_tilde()), -casimir());
  EXPECT_EQ(rho(b_tilde()), bracket_tensor() * Rational(1, 2));
}

TEST(FkRho, Eps2IsMinusKillingForm) {
  const PairingTable<Rational> k = kappa();
  for (unsigned a = 0; a < 3; ++a)
    for (unsigned b = 0; b < 3; ++b) {
      QTensor x(std::vector<SlotBasis>(2, SlotBasis::V2));
      x.add(pack({a, b}), 1);
      const Rational lhs = apply_map(x, 0, eps2()).at(0).eval_at_one();
      const Tensor<Rational> r = rho(x);
      Rational rhs = 0;
      for (const auto& [key, v] : r.entries()) rhs -= v * k(digit(key, 0), digit(key, 1));
      EXPECT_EQ(lhs, rhs) << a << b;
    }
}

TEST(FkRho, MatchesWeightForAllTreesUpToSeven) {
  for (int n = 2; n <= 7; ++n)
    for (const auto& p : riordan_partitions(n)) EXPECT_TRUE(check_prop_rho(p)) << to_string(p);
}

TEST(FkRho, ImagesAreInvariant) {
  for (const auto& p : riordan_partitions(5)) EXPECT_TRUE(is_invariant(rho(f0(p))));
}

TEST(FkTransition, Unitriangular) {
  for (int n = 2; n <= 6; ++n) {
    const TransitionMatrix tm = transition_matrix(n);
    ASSERT_EQ(tm.a.size(), riordan_number(n).get_ui());
    for (std::size_t i = 0; i < tm.a.size(); ++i) {
      EXPECT_EQ(tm.a[i][i], QFrac(1));
      for (std::size_t j = i + 1; j < tm.a.size(); ++j) EXPECT_TRUE(tm.a[i][j].is_zero());
      // off-diagonal entries are powers of 1/[2]
      for (std::size_t j = 0; j < i; ++j)
        if (!tm.a[i][j].is_zero()) {
          EXPECT_EQ(tm.a[i][j], QFrac(1, tm.a[i][j].two_power()));
        }
    }
  }
  EXPECT_EQ(transition_matrix(2).a, std::vector<std::vector<QFrac>>{{QFrac(1)}});
  EXPECT_THROW(transition_matrix(1), Error);
  EXPECT_THROW(transition_matrix(8), Error);
}

TEST(FkTransition, SolvedCoefficientsMatchAtSpecialisations) {
  // independent of the p2 expansion: solve f_jw = sum a_j f0 exactly at q = 2, 3
  const int n = 5;
  const TransitionMatrix tm = transition_matrix(n);
  for (const Rational& q : {Rational(2), Rational(3)}) {
    std::map<PackedIndex, std::size_t> pos;
    // every f0 and f_jw entry position occurs in the first pass over the f0
    for (const auto& p : tm.order) {
      const QTensor t = f0(p);
      for (const auto& [k, v] : t.entries()) pos.emplace(k, pos.size());
    }
    auto vec = [&](const QTensor& t) {
      RationalVector r(pos.size());
      for (const auto& [k, v] : t.entries()) r.at(pos.at(k)) = eval_at(v, q);
      return r;
    };
    std::vector<RationalVector> basis;
    for (const auto& p : tm.order) basis.push_back(vec(f0(p)));
    for (std::size_t i = 0; i < tm.order.size(); ++i) {
      auto sol = solve_in_span(basis, vec(f_jw_contracted(tm.order[i])));
      ASSERT_TRUE(sol.has_value());
      for (std::size_t j = 0; j < tm.order.size(); ++j) EXPECT_EQ((*sol)[j], eval_at(tm.a[i][j], q)) << i << " " << j;
    }
  }
}

TEST(FkTransition, AtOneMatchesTreeCoordinates) {
  // rho(f(T)) = s_T W(T) and rho(f0(T')) expanded in the tree basis must agree with A(1)
  for (int n = 4; n <= 6; ++n) {
    const TransitionMatrix tm = transition_matrix(n);
    const TreeBasis& tb = tree_basis(n);
    std::vector<RationalVector> f0_coords;
    for (const auto& p : tm.order) f0_coords.push_back(tb.coordinates(rho(f0(p))));
    for (std::size_t i = 0; i < tm.order.size(); ++i) {
      RationalVector lhs = tb.coordinates(weight_direct(riordan_tree(tm.order[i]).diagram, n).tensor * rho_scalar(tm.order[i]));
      RationalVector rhs(lhs.size());
      for (std::size_t j = 0; j < tm.order.size(); ++j)
        for (std::size_t c = 0; c < rhs.size(); ++c) rhs[c] += tm.a[i][j].eval_at_one() * f0_coords[j][c];
      EXPECT_EQ(lhs, rhs) << n << " " << i;
    }
  }
}

TEST(FkUq, Action) {
  EXPECT_TRUE(uq_action(QGenerator::E, 2, 2).coeff.is_zero());
  EXPECT_TRUE(uq_action(QGenerator::F, 2, -2).coeff.is_zero());
  EXPECT_EQ(uq_action(QGenerator::E, 2, 0).coeff, qint(2));
  EXPECT_EQ(uq_action(QGenerator::E, 2, 0).index, 2);
  EXPECT_EQ(uq_action(QGenerator::F, 2, 0).coeff, qint(2));
  EXPECT_EQ(uq_action(QGenerator::F, 2, 0).index, -2);
  EXPECT_THROW(uq_action(QGenerator::E, 2, 1), Error);
  EXPECT_THROW(uq_action(QGenerator::K, 2, 4), Error);
}

TEST(FkUq, DefiningRelations) {
  // K E K^-1 = q^2 E and EF - FE = (K - K^-1)/(q - q^-1) on every V_n, n <= 6
  for (int n = 0; n <= 6; ++n)
    for (int i = -n; i <= n; i += 2) {
      const auto e = uq_action(QGenerator::E, n, i);
      if (!e.coeff.is_zero()) {
        const auto k = uq_action(QGenerator::K, n, e.index);
        EXPECT_EQ(k.coeff, LaurentPoly::q(2) * uq_action(QGenerator::K, n, i).coeff);
      }
      LaurentPoly ef, fe;
      const auto f = uq_action(QGenerator::F, n, i);
      if (!f.coeff.is_zero()) ef = f.coeff * uq_action(QGenerator::E, n, f.index).coeff;
      if (!e.coeff.is_zero()) fe = e.coeff * uq_action(QGenerator::F, n, e.index).coeff;
      // (q^i - q^-i)/(q - q^-1) = [i] for i > 0, -[-i] for i < 0
      const LaurentPoly want = i == 0 ? LaurentPoly{} : (i > 0 ? qint(i) : -qint(-i));
      EXPECT_EQ(ef - fe, want) << n << " " << i;
    }
}

TEST(FkUq, Pairing) {
  EXPECT_EQ(pairing_vn(1, 0, 0), LaurentPoly(1));
  EXPECT_EQ(pairing_vn(2, 1, 1), qint(2));
  EXPECT_TRUE(pairing_vn(2, 0, 1).is_zero());
  EXPECT_EQ(pairing_vn(4, 2, 2), divide_or_throw(qint(4) * qint(3), qint(2)));
  EXPECT_THROW(pairing_vn(2, 3, 0), Error);
}
