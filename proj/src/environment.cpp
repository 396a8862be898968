#include "banditlab/environment.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace banditlab {

namespace {

constexpr std::uint64_t kArmStreamTag = 0xA4A4'0001ull;

Vec polar(double angle) {
  Vec u(2);
  u << std::cos(angle), std::sin(angle);
  return u;
}

}  // namespace

const char* to_string(ActionSpaceKind kind) {
  switch (kind) {
    case ActionSpaceKind::UnitBall: return "unit_ball";
    case ActionSpaceKind::FiniteFixed: return "finite_fixed";
    case ActionSpaceKind::FiniteResampled: return "finite_resampled";
    case ActionSpaceKind::LowerBoundPair: return "lower_bound_pair";
  }
  return "unknown";
}

ActionSpaceKind action_space_kind_from_string(const std::string& name) {
  if (name == "unit_ball") return ActionSpaceKind::UnitBall;
  if (name == "finite_fixed") return ActionSpaceKind::FiniteFixed;
  if (name == "finite_resampled") return ActionSpaceKind::FiniteResampled;
  if (name == "lower_bound_pair") return ActionSpaceKind::LowerBoundPair;
  throw InvalidInput("unknown action space kind '" + name + "'");
}

ActionSpaceSpec ActionSpaceSpec::finite_fixed(std::vector<Vec> arms) {
  ActionSpaceSpec s;
  s.kind = ActionSpaceKind::FiniteFixed;
  s.arms = std::move(arms);
  return s;
}

ActionSpaceSpec ActionSpaceSpec::finite_resampled(int count, std::uint64_t seed) {
  ActionSpaceSpec s;
  s.kind = ActionSpaceKind::FiniteResampled;
  s.count = count;
  s.seed = seed;
  return s;
}

ActionSpaceSpec ActionSpaceSpec::lower_bound_pair(double alpha, std::uint64_t seed) {
  ActionSpaceSpec s;
  s.kind = ActionSpaceKind::LowerBoundPair;
  s.alpha = alpha;
  s.seed = seed;
  return s;
}

ActionSampler::ActionSampler(const ActionSpaceSpec& spec, int d, std::uint64_t run_seed)
    : spec_(spec), d_(d), rng_(make_stream(run_seed, kArmStreamTag ^ (spec.seed * 0x9E3779B97F4A7C15ull))) {
  if (spec_.kind == ActionSpaceKind::FiniteFixed && spec_.arms.empty())
    throw InvalidInput("finite_fixed action space has no arms");
  if (spec_.kind == ActionSpaceKind::FiniteResampled && spec_.count < 1)
    throw InvalidInput("finite_resampled action space needs count >= 1");
  if (spec_.kind == ActionSpaceKind::LowerBoundPair && d_ != 2)
    throw InvalidInput("lower_bound_pair action space requires d = 2");
}

ArmSet ActionSampler::next() {
  ArmSet set;
  const std::int64_t round = round_++;
  switch (spec_.kind) {
    case ActionSpaceKind::UnitBall:
      set.unit_ball = true;
      set.arms = Mat(d_, 0);
      break;
    case ActionSpaceKind::FiniteFixed:
      set.arms.resize(d_, static_cast<Eigen::Index>(spec_.arms.size()));
      for (std::size_t j = 0; j < spec_.arms.size(); ++j) set.arms.col(static_cast<Eigen::Index>(j)) = spec_.arms[j];
      break;
    case ActionSpaceKind::FiniteResampled:
      set.arms.resize(d_, spec_.count);
      for (int j = 0; j < spec_.count; ++j) set.arms.col(j) = random_unit_vector(d_, rng_);
      set.id = round;
      break;
    case ActionSpaceKind::LowerBoundPair: {
      const double a = spec_.alpha;
      const bool three = bernoulli(0.5, rng_);
      set.arms.resize(2, three ? 3 : 2);
      set.arms.col(0) = polar(std::numbers::pi - a);
      set.arms.col(1) = polar(2.0 * a);
      if (three) set.arms.col(2) = polar(std::numbers::pi - 3.0 * a);
      set.id = three ? 3 : 2;
      break;
    }
  }
  return set;
}

ProtectedInstance::ProtectedInstance(Vec theta0, std::vector<Vec> protected_vectors, double M, double R,
                                     int s, ActionSpaceSpec action_space)
    : theta0_(std::move(theta0)),
      protected_(std::move(protected_vectors)),
      M_(M),
      R_(R),
      s_(s),
      space_(std::move(action_space)) {
  const Eigen::Index d = theta0_.size();
  if (d < 1) throw InvalidInput("instance: dimension must be >= 1");
  if (!(M_ > 0.0)) throw InvalidInput("instance: M must be > 0");
  if (!(R_ >= 0.0)) throw InvalidInput("instance: R must be >= 0");
  if (!theta0_.allFinite()) throw InvalidInput("instance: theta0 has non-finite entries");
  if (theta0_.norm() > M_ + 1e-12) throw InvalidInput("instance: ||theta0|| exceeds M");
  for (std::size_t i = 0; i < protected_.size(); ++i) {
    const Vec& v = protected_[i];
    if (v.size() != d) throw InvalidInput("instance: protected vector " + std::to_string(i + 1) + " has wrong dimension");
    if (!v.allFinite()) throw InvalidInput("instance: protected vector has non-finite entries");
    if (v.norm() > M_ + 1e-12) throw InvalidInput("instance: ||theta_" + std::to_string(i + 1) + "|| exceeds M");
  }
  const Mat basis = orth_basis(protected_);
  const int rank = static_cast<int>(basis.cols());
  if (rank != s_)
    throw InvalidInput("instance: rank(protected) = " + std::to_string(rank) + " but s = " + std::to_string(s_));
  theta_perp_ = remove_span(basis, theta0_);

  for (const Vec& a : space_.arms) {
    if (a.size() != d) throw InvalidInput("instance: arm has wrong dimension");
    if (a.norm() > M_ + 1e-12) throw InvalidInput("instance: arm norm exceeds M");
  }
  if (space_.kind == ActionSpaceKind::FiniteFixed && space_.arms.empty())
    throw InvalidInput("instance: finite_fixed action space has no arms");
  if (space_.kind == ActionSpaceKind::LowerBoundPair && d != 2)
    throw InvalidInput("instance: lower_bound_pair action space requires d = 2");
  if (space_.is_unit_ball() && theta_perp_.norm() <= 1e-12 * std::max(1.0, M_))
    throw DegenerateInstance("instance: theta_perp is zero; every unit-ball action has equal reward");
}

const Vec& ProtectedInstance::theta(int index) const {
  if (index < 0 || index > L())
    throw InvalidInput("index " + std::to_string(index) + " outside {0..." + std::to_string(L()) + "}");
  return index == 0 ? theta0_ : protected_[static_cast<std::size_t>(index - 1)];
}

double feedback(const ProtectedInstance& instance, const Vec& a, int index, Rng& rng) {
  const Vec& theta = instance.theta(index);
  if (a.size() != theta.size()) throw InvalidInput("feedback: action dimension mismatch");
  std::normal_distribution<double> noise(0.0, 1.0);
  const double eta = noise(rng);
  return a.dot(theta) + instance.R() * eta;
}

double expected_reward(const ProtectedInstance& instance, const Vec& a) {
  if (a.size() != instance.d()) throw InvalidInput("expected_reward: action dimension mismatch");
  return a.dot(instance.theta_perp());
}

Vec optimal_action(const ProtectedInstance& instance, const ArmSet& arms) {
  const Vec& tp = instance.theta_perp();
  if (arms.unit_ball) {
    const double n = tp.norm();
    if (!(n > 0.0)) throw DegenerateInstance("optimal_action: theta_perp is zero on the unit ball");
    return tp / n;
  }
  if (arms.size() == 0) throw InvalidInput("optimal_action: empty action set");
  Eigen::Index best = 0;
  double best_value = arms.arms.col(0).dot(tp);
  for (Eigen::Index j = 1; j < arms.size(); ++j) {
    const double v = arms.arms.col(j).dot(tp);
    if (v > best_value) {
      best_value = v;
      best = j;
    }
  }
  return arms.arms.col(best);
}

double suboptimality(const ProtectedInstance& instance, const Vec& a, const ArmSet& arms) {
  const Vec best = optimal_action(instance, arms);
  return (best - a).dot(instance.theta_perp());
}

}  // namespace banditlab
