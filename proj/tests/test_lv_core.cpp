#include <alvec/lv_core.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace alvec;

namespace {

const LVParams kCase1{30.0, 1.0, 50.0, 1.0};
const LVParams kCase2{150.0, 1.0, 80.0, 1.0};
const LVParams kCase3{120.0, 1.0, 30.0, 1.0};

}  // namespace

TEST(LvParams, ValidityRequiresPositiveFiniteCoefficients) {
  EXPECT_TRUE(kCase1.valid());
  EXPECT_FALSE((LVParams{0.0, 1.0, 1.0, 1.0}.valid()));
  EXPECT_FALSE((LVParams{1.0, -1.0, 1.0, 1.0}.valid()));
  EXPECT_FALSE((LVParams{1.0, 1.0, std::numeric_limits<double>::infinity(), 1.0}.valid()));
  EXPECT_THROW((LVParams{1.0, 1.0, 1.0, std::nan("")}.validate()), InvalidParams);
}

TEST(Derivative, HandComputedCase1) {
  // dP = 30*30 - 30*50, dQ = 30*50 - 50*50
  const Rates r = derivative({30.0, 50.0, 0.0}, kCase1);
  EXPECT_DOUBLE_EQ(r.dp, -600.0);
  EXPECT_DOUBLE_EQ(r.dq, -1000.0);
}

TEST(Derivative, VanishesAtBothEquilibria) {
  for (const auto& k : {kCase1, kCase2, kCase3}) {
    for (const auto& e : equilibria(k)) {
      const Rates r = derivative(e, k);
      EXPECT_NEAR(r.dp, 0.0, 1e-9);
      EXPECT_NEAR(r.dq, 0.0, 1e-9);
    }
  }
}

TEST(Derivative, RejectsNonFiniteState) {
  EXPECT_THROW(derivative({std::nan(""), 1.0, 0.0}, kCase1), InvalidState);
  EXPECT_THROW(derivative({1.0, std::numeric_limits<double>::infinity(), 0.0}, kCase1),
               InvalidState);
}

TEST(Equilibria, InteriorPointIsGammaOverDeltaAlphaOverBeta) {
  const auto e = equilibria({2.0, 4.0, 6.0, 3.0});
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0].p, 0.0);
  EXPECT_EQ(e[0].q, 0.0);
  EXPECT_DOUBLE_EQ(e[1].p, 2.0);
  EXPECT_DOUBLE_EQ(e[1].q, 0.5);
  EXPECT_THROW(equilibria({0.0, 1.0, 1.0, 1.0}), InvalidParams);
}

TEST(ClassifyRegion, Quadrants) {
  // Case 1: P* = 50, Q* = 30
  EXPECT_EQ(classify_region({10, 10, 0}, kCase1), Region::A);
  EXPECT_EQ(classify_region({30, 50, 0}, kCase1), Region::B);
  EXPECT_EQ(classify_region({60, 10, 0}, kCase1), Region::C);
  EXPECT_EQ(classify_region({60, 40, 0}, kCase1), Region::D);
  EXPECT_EQ(classify_region({0, 0, 0}, kCase1), Region::EquilibriumOrigin);
  EXPECT_EQ(classify_region({50, 30, 0}, kCase1), Region::EquilibriumInterior);
  EXPECT_EQ(classify_region({20, 30, 0}, kCase1), Region::OnPNullcline);
  EXPECT_EQ(classify_region({50, 20, 0}, kCase1), Region::OnQNullcline);
  EXPECT_THROW(classify_region({-1, 2, 0}, kCase1), InvalidState);
}

TEST(ClassifyRegion, DerivativeSignsMatchQuadrant) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.1, 120.0);
  for (int i = 0; i < 2000; ++i) {
    const PopulationState s{u(gen), u(gen), 0.0};
    const Rates r = derivative(s, kCase1);
    switch (classify_region(s, kCase1)) {
      case Region::A: EXPECT_TRUE(r.dp > 0 && r.dq < 0); break;
      case Region::B: EXPECT_TRUE(r.dp < 0 && r.dq < 0); break;
      case Region::C: EXPECT_TRUE(r.dp > 0 && r.dq > 0); break;
      case Region::D: EXPECT_TRUE(r.dp < 0 && r.dq > 0); break;
      default: break;
    }
  }
}

TEST(ScenarioCondition, ThreeCases) {
  EXPECT_EQ(scenario_condition({30, 50, 0}, kCase1), Scenario::PreyIncreasing);
  EXPECT_EQ(scenario_condition({80, 150, 0}, kCase2), Scenario::Stable);
  EXPECT_EQ(scenario_condition({60, 80, 0}, kCase3), Scenario::PreyDecreasing);
}

TEST(ScenarioCondition, StableBandIsRelative) {
  const LVParams k{1.0, 1.0, 1.0, 1.0};
  EXPECT_EQ(scenario_condition({1e6, 1e6 * (1 + 1e-12), 0}, k), Scenario::Stable);
  EXPECT_EQ(scenario_condition({1e6, 1e6 * (1 + 1e-6), 0}, k), Scenario::PreyIncreasing);
}

TEST(FirstIntegral, MatchesDirectFormula) {
  const double p = 30.0, q = 50.0;
  const double expected = 1.0 * p - 50.0 * std::log(p) + 1.0 * q - 30.0 * std::log(q);
  EXPECT_NEAR(first_integral({p, q, 0}, kCase1), expected, 1e-12);
  EXPECT_THROW(first_integral({0.0, 1.0, 0}, kCase1), DomainError);
  EXPECT_THROW(first_integral({1.0, -1.0, 0}, kCase1), DomainError);
}

// The gradient of H is orthogonal to the vector field (central differences).
TEST(FirstIntegral, ConservedAlongFlowDirection) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(1.0, 150.0);
  for (const auto& k : {kCase1, kCase2, kCase3}) {
    for (int i = 0; i < 200; ++i) {
      const double p = u(gen), q = u(gen), h = 1e-5;
      const double hp = (first_integral({p + h, q, 0}, k) - first_integral({p - h, q, 0}, k)) / (2 * h);
      const double hq = (first_integral({p, q + h, 0}, k) - first_integral({p, q - h, 0}, k)) / (2 * h);
      const Rates r = vector_field(p, q, k);
      // cancellation in the differences is ~1e-9 per partial
      EXPECT_NEAR(hp * r.dp + hq * r.dq, 0.0, 1e-7 * (std::abs(r.dp) + std::abs(r.dq) + 1.0));
    }
  }
}

TEST(FirstIntegral, MinimumAtInteriorEquilibrium) {
  const double h0 = first_integral({50, 30, 0}, kCase1);
  for (double dp : {-5.0, 0.0, 5.0}) {
    for (double dq : {-5.0, 0.0, 5.0}) {
      if (dp == 0 && dq == 0) continue;
      EXPECT_GT(first_integral({50 + dp, 30 + dq, 0}, kCase1), h0);
    }
  }
}

TEST(FirstIntegralDrift, ZeroForConstantTrajectory) {
  Trajectory t;
  t.params = kCase2;
  for (int i = 0; i < 5; ++i) t.samples.push_back({80, 150, 0.1 * i});
  EXPECT_EQ(first_integral_drift(t), 0.0);
  t.samples.push_back({81, 150, 0.5});
  EXPECT_GT(first_integral_drift(t), 0.0);
}
