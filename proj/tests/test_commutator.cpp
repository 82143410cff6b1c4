#include "besselhardy/commutator.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bh;

namespace {

const HalfLineGrid& grid() {
  static const HalfLineGrid g = HalfLineGrid::uniform(0.25, 8.0, 32);
  return g;
}

double beta1(double x) { return std::sin(x) + 0.5 * x; }
double beta2(double y) { return std::exp(-(y - 3) * (y - 3)); }
double phi1(double x) { return x * std::exp(-(x - 2) * (x - 2)); }
double phi2(double y) { return std::exp(-(y - 4) * (y - 4) / 2); }

}  // namespace

TEST(Commutator, ConstantSymbolAnnihilates) {
  const CommutatorOperators ops(BesselParams(2.0), grid(), grid());
  const Eigen::MatrixXd b = Eigen::MatrixXd::Constant(32, 32, 3.0);
  for (const auto& t : dashboard_family()) {
    const Eigen::MatrixXd f = t.sample(grid(), grid()).values;
    EXPECT_LT(iterated_commutator_values(ops, b, f).norm(), 1e-10 * f.norm()) << t.name;
  }
}

TEST(Commutator, SymbolOfOneVariableAnnihilates) {
  // b(x1, x2) = beta(x2) commutes with R1, so [[b, R1], R2] = 0
  const CommutatorOperators ops(BesselParams(1.5), grid(), grid());
  const auto b = SampledFunction2D::sample(grid(), grid(), [](double, double y) { return beta1(y); });
  const auto f = SampledFunction2D::sample(grid(), grid(), [](double x, double y) { return phi1(x) * phi2(y); });
  EXPECT_LT(iterated_commutator_values(ops, b.values, f.values).norm(), 1e-10 * f.values.norm());
  const auto b1 = SampledFunction2D::sample(grid(), grid(), [](double x, double) { return beta2(x); });
  EXPECT_LT(iterated_commutator_values(ops, b1.values, f.values).norm(), 1e-10 * f.values.norm());
}

TEST(Commutator, SeparableFactorizes) {
  // [[b1 b2, R1], R2](phi1 phi2) = [b1, R1] phi1 (x) [b2, R2] phi2
  const CommutatorOperators ops(BesselParams(2.0), grid(), grid());
  const auto s1 = [](const std::function<double(double)>& fn) {
    Eigen::VectorXd v(32);
    for (int i = 0; i < 32; ++i) v[i] = fn(grid()[static_cast<std::size_t>(i)]);
    return v;
  };
  const Eigen::VectorXd B1 = s1(beta1), B2 = s1(beta2), F1 = s1(phi1), F2 = s1(phi2);
  const Eigen::VectorXd c1 = B1.cwiseProduct(ops.R1() * F1) - ops.R1() * B1.cwiseProduct(F1);
  const Eigen::VectorXd c2 = B2.cwiseProduct(ops.R2() * F2) - ops.R2() * B2.cwiseProduct(F2);
  const Eigen::MatrixXd out = iterated_commutator_values(ops, B1 * B2.transpose(), F1 * F2.transpose());
  EXPECT_LT((out - c1 * c2.transpose()).norm(), 1e-12 * out.norm());
}

TEST(Commutator, NestingOrderIsIrrelevant) {
  const CommutatorOperators ops(BesselParams(2.0), grid(), grid());
  const Eigen::MatrixXd b = symbol_family().back().sample(grid(), grid()).values;
  const Eigen::MatrixXd f = dashboard_family()[3].sample(grid(), grid()).values;
  const Eigen::MatrixXd a = iterated_commutator_values(ops, b, f);
  EXPECT_LT((a - iterated_commutator_swapped(ops, b, f)).norm(), 1e-12 * std::max(1.0, a.norm()));
}

TEST(Commutator, ZeroInputAndScaling) {
  const CommutatorOperators ops(BesselParams(2.0), grid(), grid());
  BmoOptions bo;
  bo.depth = 4;
  const auto b = symbol_family()[1].sample(grid(), grid());
  const auto zero = SampledFunction2D::sample(grid(), grid(), [](double, double) { return 0.0; });
  const CommutatorResult z = iterated_commutator(ops, b, zero, -1.0, bo);
  EXPECT_EQ(z.output.values.norm(), 0.0);
  EXPECT_EQ(z.operator_ratio, 0.0);
  // the ratio is homogeneous of degree 0 in b
  const auto f = dashboard_family()[0].sample(grid(), grid());
  const CommutatorResult r1 = iterated_commutator(ops, b, f, -1.0, bo);
  const CommutatorResult r3 = iterated_commutator(ops, b.with_values(3.0 * b.values), f, -1.0, bo);
  EXPECT_GT(r1.operator_ratio, 0.0);
  EXPECT_NEAR(r3.bmo / r1.bmo, 3.0, 1e-9);
  EXPECT_NEAR(r3.operator_ratio / r1.operator_ratio, 1.0, 1e-9);
}

TEST(CommutatorSweep, EmptyFamiliesAndConstantRows) {
  BmoOptions bo;
  bo.depth = 4;
  EXPECT_EQ(commutator_max_ratio(BesselParams(2.0), {}, dashboard_family(), grid(), bo), 0.0);
  EXPECT_TRUE(commutator_sweep(BesselParams(2.0), {}, {}, grid(), bo).all_pass());
  const std::vector<TestFunction2D> bs = {symbol_family()[0]};
  const std::vector<TestFunction2D> fs = {dashboard_family()[0], dashboard_family()[5]};
  const VerificationReport r = commutator_sweep(BesselParams(2.0), bs, fs, grid(), bo);
  EXPECT_EQ(r.rows().size(), 3u);
  EXPECT_TRUE(r.all_pass());
  for (const auto& row : r.rows()) EXPECT_EQ(row.value, 0.0) << row.check << ' ' << row.parameter;
}
