#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "banditlab/environment.hpp"
#include "banditlab/instances.hpp"

using namespace banditlab;

namespace {

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

ProtectedInstance remark_instance() {
  return ProtectedInstance(v3(1, 1, 1), {v3(1, 0, 0), v3(1, 0, 0)}, 2.0, 0.0, 1, ActionSpaceSpec::unit_ball());
}

ArmSet lower_bound_arms(double alpha, bool three) {
  ArmSet arms;
  arms.arms.resize(2, three ? 3 : 2);
  arms.arms.col(0) = polar_unit(std::numbers::pi - alpha);
  arms.arms.col(1) = polar_unit(2 * alpha);
  if (three) arms.arms.col(2) = polar_unit(std::numbers::pi - 3 * alpha);
  return arms;
}

}  // namespace

TEST(ProtectedInstance, Validation) {
  EXPECT_THROW(ProtectedInstance(v3(3, 0, 0), {v3(1, 0, 0)}, 1.0, 0.0, 1, ActionSpaceSpec::unit_ball()),
               InvalidInput);
  EXPECT_THROW(ProtectedInstance(v3(0, 1, 0), {v3(1, 0, 0)}, 1.0, 0.0, 2, ActionSpaceSpec::unit_ball()),
               InvalidInput);
  EXPECT_THROW(ProtectedInstance(v3(0, 1, 0), {v3(1, 0, 0)}, 1.0, -1.0, 1, ActionSpaceSpec::unit_ball()),
               InvalidInput);
  // θ₀ inside the protected span makes every unit-ball action equivalent
  EXPECT_THROW(ProtectedInstance(v3(0.5, 0, 0), {v3(1, 0, 0)}, 1.0, 0.0, 1, ActionSpaceSpec::unit_ball()),
               DegenerateInstance);
}

TEST(ProtectedInstance, ThetaIndexing) {
  const ProtectedInstance inst = remark_instance();
  EXPECT_EQ(inst.theta(0), v3(1, 1, 1));
  EXPECT_EQ(inst.theta(2), v3(1, 0, 0));
  EXPECT_THROW(inst.theta(3), InvalidInput);
  EXPECT_THROW(inst.theta(-1), InvalidInput);
}

TEST(Feedback, NoiselessIsExact) {
  const ProtectedInstance inst(v2(0, 1), {v2(2, 0)}, 2.0, 0.0, 1, ActionSpaceSpec::unit_ball());
  Rng rng = make_stream(1, 1);
  EXPECT_EQ(feedback(inst, v2(1, 0), 1, rng), 2.0);
}

TEST(Feedback, ZeroArmIsPureNoise) {
  const ProtectedInstance inst(v2(0, 1), {v2(1, 0)}, 1.0, 0.5, 1, ActionSpaceSpec::unit_ball());
  Rng a = make_stream(2, 2), b = make_stream(2, 2);
  const double x = feedback(inst, v2(0, 0), 0, a);
  EXPECT_EQ(x, std::normal_distribution<double>(0.0, 0.5)(b));
}

TEST(Feedback, EmpiricalMean) {
  const ProtectedInstance inst(v2(0.6, 0.8), {v2(1, 0)}, 1.0, 1.0, 1, ActionSpaceSpec::unit_ball());
  Rng rng = make_stream(3, 3);
  const int n = 100000;
  double sum = 0.0;
  const Vec a = v2(0.6, 0.8);
  for (int k = 0; k < n; ++k) sum += feedback(inst, a, 0, rng);
  EXPECT_NEAR(sum / n, 1.0, 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST(ThetaPerp, Examples) {
  EXPECT_LT((remark_instance().theta_perp() - v3(0, 1, 1)).norm(), 1e-12);
  const ProtectedInstance none(v3(0.1, 0.2, 0.3), {}, 1.0, 0.0, 0, ActionSpaceSpec::unit_ball());
  EXPECT_EQ(none.theta_perp(), v3(0.1, 0.2, 0.3));
  const ProtectedInstance inside(v2(0.5, 0), {v2(1, 0)}, 1.0, 0.0, 1, ActionSpaceSpec::finite_fixed({v2(1, 0)}));
  EXPECT_LT(inside.theta_perp().norm(), 1e-12);
}

TEST(ThetaPerp, OrthogonalToProtected) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ProtectedInstance inst = gen_synthetic(6, 4, 2, 1.0, 0.0, seed);
    for (const Vec& t : inst.protected_vectors()) EXPECT_LE(std::abs(inst.theta_perp().dot(t)), 1e-9);
  }
}

TEST(OptimalAction, UnitBallNormalizes) {
  ArmSet ball;
  ball.unit_ball = true;
  EXPECT_LT((optimal_action(remark_instance(), ball) - v3(0, 1, 1) / std::sqrt(2.0)).norm(), 1e-12);
}

TEST(OptimalAction, LowerBoundInstances) {
  const LowerBoundPair pair = gen_lower_bound(4096, 0);
  const double a = pair.alpha;
  EXPECT_LT((optimal_action(pair.instance1, lower_bound_arms(a, true)) - polar_unit(std::numbers::pi - 3 * a)).norm(),
            1e-15);
  for (bool three : {false, true})
    EXPECT_LT((optimal_action(pair.instance2, lower_bound_arms(a, three)) - polar_unit(2 * a)).norm(), 1e-15);
}

TEST(Suboptimality, Example1Gap) {
  const ProtectedInstance inst = gen_example1();
  ActionSampler sampler(inst.action_space(), 2, 0);
  const ArmSet arms = sampler.next();
  const Vec a1 = polar_unit(std::numbers::pi / 4), a2 = polar_unit(std::numbers::pi / 2);
  EXPECT_NEAR(suboptimality(inst, a1, arms), std::sqrt(0.5) - 0.5, 1e-12);
  EXPECT_NEAR(suboptimality(inst, a2, arms), 0.0, 1e-15);
}

TEST(Suboptimality, NonNegativeOnRealizedSets) {
  const ProtectedInstance inst = gen_synthetic(5, 3, 2, 1.0, 0.0, 4, ActionSpaceSpec::finite_resampled(20, 1));
  ActionSampler sampler(inst.action_space(), 5, 9);
  for (int t = 0; t < 50; ++t) {
    const ArmSet arms = sampler.next();
    for (Eigen::Index j = 0; j < arms.size(); ++j) EXPECT_GE(suboptimality(inst, arms.arm(j), arms), -1e-9);
  }
}

TEST(ActionSampler, ResampledArmsAreUnitAndReproducible) {
  const ActionSpaceSpec spec = ActionSpaceSpec::finite_resampled(7, 5);
  ActionSampler a(spec, 4, 11), b(spec, 4, 11);
  for (int t = 0; t < 5; ++t) {
    const ArmSet x = a.next(), y = b.next();
    EXPECT_EQ(x.arms, y.arms);
    EXPECT_EQ(x.size(), 7);
    EXPECT_EQ(x.id, t);
    for (Eigen::Index j = 0; j < x.size(); ++j) EXPECT_NEAR(x.arm(j).norm(), 1.0, 1e-12);
  }
}

TEST(ActionSampler, LowerBoundSetsAreTwoOrThreeArms) {
  const ActionSpaceSpec spec = ActionSpaceSpec::lower_bound_pair(0.125, 3);
  ActionSampler sampler(spec, 2, 0);
  int threes = 0;
  const int n = 4000;
  for (int t = 0; t < n; ++t) {
    const ArmSet arms = sampler.next();
    ASSERT_TRUE(arms.size() == 2 || arms.size() == 3);
    EXPECT_EQ(arms.id, arms.size());
    threes += arms.size() == 3;
  }
  EXPECT_NEAR(static_cast<double>(threes) / n, 0.5, 0.05);
}

TEST(ActionSpaceKind, NamesRoundTrip) {
  for (auto k : {ActionSpaceKind::UnitBall, ActionSpaceKind::FiniteFixed, ActionSpaceKind::FiniteResampled,
                 ActionSpaceKind::LowerBoundPair})
    EXPECT_EQ(action_space_kind_from_string(to_string(k)), k);
  EXPECT_THROW(action_space_kind_from_string("sphere"), InvalidInput);
}
