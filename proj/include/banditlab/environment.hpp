#pragma once

// The ground-truth game: hidden target θ₀ and protected vectors θ₁..θ_L,
// noisy zero-order feedback, and the genie-side regret quantities.

#include <cstdint>
#include <string>
#include <vector>

#include "banditlab/linalg.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

enum class ActionSpaceKind { UnitBall, FiniteFixed, FiniteResampled, LowerBoundPair };

const char* to_string(ActionSpaceKind kind);
ActionSpaceKind action_space_kind_from_string(const std::string& name);

struct ActionSpaceSpec {
  ActionSpaceKind kind = ActionSpaceKind::UnitBall;
  std::vector<Vec> arms;    // FiniteFixed
  int count = 0;            // FiniteResampled: arms drawn per round
  std::uint64_t seed = 0;   // FiniteResampled, LowerBoundPair
  double alpha = 0.0;       // LowerBoundPair

  static ActionSpaceSpec unit_ball() { return {}; }
  static ActionSpaceSpec finite_fixed(std::vector<Vec> arms);
  static ActionSpaceSpec finite_resampled(int count, std::uint64_t seed);
  static ActionSpaceSpec lower_bound_pair(double alpha, std::uint64_t seed);

  bool is_unit_ball() const { return kind == ActionSpaceKind::UnitBall; }
};

/// One round's realized action set. For the unit ball `arms` is empty.
struct ArmSet {
  bool unit_ball = false;
  Mat arms;  // d x n, one arm per column
  std::int64_t id = 0;

  Eigen::Index size() const { return arms.cols(); }
  Vec arm(Eigen::Index j) const { return arms.col(j); }
};

/// Realizes per-round action sets. Two samplers built from the same spec and
/// run seed produce identical sequences, which pairs runs across policies and
/// across the two lower-bound instances.
class ActionSampler {
 public:
  ActionSampler(const ActionSpaceSpec& spec, int d, std::uint64_t run_seed);
  ArmSet next();

 private:
  ActionSpaceSpec spec_;
  int d_;
  Rng rng_;
  std::int64_t round_ = 0;
};

class ProtectedInstance {
 public:
  ProtectedInstance() = default;
  /// Validates norms (≤ M), rank(protected) = s, finite arm norms and, on the
  /// unit ball, a nonzero θ⊥.
  ProtectedInstance(Vec theta0, std::vector<Vec> protected_vectors, double M, double R, int s,
                    ActionSpaceSpec action_space);

  int d() const { return static_cast<int>(theta0_.size()); }
  int L() const { return static_cast<int>(protected_.size()); }
  int s() const { return s_; }
  double M() const { return M_; }
  double R() const { return R_; }
  const Vec& theta0() const { return theta0_; }
  const std::vector<Vec>& protected_vectors() const { return protected_; }
  /// θ_index for index ∈ {0} ∪ [L].
  const Vec& theta(int index) const;
  const ActionSpaceSpec& action_space() const { return space_; }
  const Vec& theta_perp() const { return theta_perp_; }

 private:
  Vec theta0_;
  std::vector<Vec> protected_;
  double M_ = 1.0;
  double R_ = 0.0;
  int s_ = 0;
  ActionSpaceSpec space_;
  Vec theta_perp_;
};

struct ActionChoice {
  Vec arm;
  int index = 0;
};

struct RoundOutcome {
  ActionChoice action;
  double feedback = 0.0;
  double suboptimality = 0.0;
  double cumulative_regret = 0.0;
  std::int64_t action_set_id = 0;
};

/// ⟨a, θ_i⟩ + η with η ~ N(0, R²) drawn from `rng`.
double feedback(const ProtectedInstance& instance, const Vec& a, int index, Rng& rng);

/// Proj⊥ of θ₀ against span(θ₁..θ_L).
inline const Vec& theta_perp(const ProtectedInstance& instance) { return instance.theta_perp(); }

/// ⟨a, θ⊥⟩.
double expected_reward(const ProtectedInstance& instance, const Vec& a);

/// argmax over the realized set (lowest index on ties); θ⊥/‖θ⊥‖ on the ball.
Vec optimal_action(const ProtectedInstance& instance, const ArmSet& arms);

/// ⟨a* − a, θ⊥⟩.
double suboptimality(const ProtectedInstance& instance, const Vec& a, const ArmSet& arms);

}  // namespace banditlab
