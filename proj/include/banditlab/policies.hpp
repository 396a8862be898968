#pragma once

// Learning policies: Protected LinUCB with closed-form optimistic parameters,
// round-robin ε_t-LinUCB, and ε-greedy with a PCA subspace estimate.

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "banditlab/confidence.hpp"
#include "banditlab/environment.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

/// Which indices select_index may query.
enum class IndexSetMode {
  WithTarget,   // {0} ∪ S̃
  CoresetOnly,  // S̃, as the main-loop pseudocode is written
};

/// How αᵢ is chosen for the protected surrogates.
enum class AlphaRule {
  Zeroing,  // αᵢ makes ⟨a, θ̃ᵢ⟩ = 0 whenever that is reachable
  Printed,  // clip((⟨a,θ̂ᵢ⟩ + √β‖a‖/‖a‖_V) / (2√β‖a‖/‖a‖_V)), kept for comparison
};

/// Direction u (with ‖u‖_V = 1) along which surrogates leave the ellipsoid
/// center.
enum class ShiftDirection {
  Natural,    // V⁻¹a / ‖a‖_{V⁻¹}: the direction that moves ⟨a, θ⟩ the most
  Isotropic,  // a / ‖a‖_V
};

enum class OptimismMode {
  Surrogate,  // closed-form per-arm parameters
  Exact,      // surrogate refined by projected ascent over the ellipsoids
};

enum class DeltaSplit {
  PerVector,  // δ/(L+1) per ellipsoid
  Shared,     // δ per ellipsoid
};

enum class BetaCount {
  PerVector,  // √β evaluated at the vector's own query count
  Horizon,    // √β evaluated at the horizon T
};

struct OptimizerConfig {
  int restarts = 8;
  int max_iters = 200;
  double tol = 1e-9;
  OptimismMode mode = OptimismMode::Surrogate;
};

struct PolicyOptions {
  double rho = 0.1;
  double delta = 0.001;
  DeltaSplit delta_split = DeltaSplit::PerVector;
  BetaCount beta_count = BetaCount::PerVector;
  IndexSetMode index_set = IndexSetMode::WithTarget;
  AlphaRule alpha_rule = AlphaRule::Zeroing;
  ShiftDirection shift = ShiftDirection::Natural;
  OptimizerConfig optimizer;
  /// One isotropic pass per tracked estimator before optimistic play.
  bool warm_start = true;
  std::int64_t horizon = 1000;
};

struct ProtectedLinUCBState {
  std::vector<int> coreset;
  std::map<int, EstimatorState> estimators;  // keyed by {0} ∪ coreset
  ConfidenceParams params;                   // δ already split per vector
  PolicyOptions options;
  /// Set when θ₀ is known exactly: θ̃₀ is pinned and index 0 is never queried.
  std::optional<Vec> known_target;
  std::deque<ActionChoice> warm_queue;
  std::int64_t round = 0;

  int d() const { return params.d; }
  double sqrt_beta(int index) const;
  const EstimatorState& estimator(int index) const;
};

/// Fresh estimators ρI for 0 and every coreset index. `total_protected` is L
/// (used for the δ split); `R` and `M` feed the confidence radius.
ProtectedLinUCBState make_plinucb_state(int d, std::vector<int> coreset, int total_protected, double R, double M,
                                        const PolicyOptions& options);

/// The confidence state of the optimism-failure example: θ₀ known, θ̂₁ = θ₁ and
/// `prior_rounds` noiseless queries of θ₁ along the first arm.
ProtectedLinUCBState adversarial_example1_state(const ProtectedInstance& instance, const PolicyOptions& options,
                                                int prior_rounds = 10);

struct OptimisticChoice {
  Vec arm;
  Vec tilde_theta0;
  std::map<int, Vec> tilde_thetas;
  std::map<int, double> alphas;
  double value = 0.0;
};

/// ⟨a, Proj⊥_{span θ̃ᵢ} θ̃₀⟩.
double surrogate_objective(const Vec& a, const std::map<int, Vec>& tilde_thetas, const Vec& tilde_theta0);

/// Closed-form feasible parameters for a fixed arm and their objective value.
OptimisticChoice optimistic_params(const Vec& a, const ProtectedLinUCBState& state);

/// Surrogate refined by projected gradient ascent over the protected
/// ellipsoids (θ̃₀ is maximized in closed form). Never below the surrogate.
OptimisticChoice exact_optimistic_params(const Vec& a, const ProtectedLinUCBState& state, Rng& rng);

/// Optimistic arm: per-arm maximum on finite sets (lowest index on ties),
/// alternating ascent with random restarts on the unit ball.
OptimisticChoice select_action(const ProtectedLinUCBState& state, const ArmSet& arms, Rng& rng);

/// argmax_i ‖arm‖_{Vᵢ⁻¹} √βᵢ over the configured index set, lowest on ties.
int select_index(const ProtectedLinUCBState& state, const Vec& arm);

/// 2(3√s M/λ_min + 1) ‖a‖_{V_i⁻¹} √β_T with i = select_index(a).
double diagnostic_delta_bound(const ProtectedLinUCBState& state, const OptimisticChoice& choice, double lambda_min);

RoundOutcome plinucb_step(ProtectedLinUCBState& state, const ArmSet& arms, const ProtectedInstance& env,
                          Rng& noise, Rng& rng);

enum class EpsilonSchedule { InvSqrt, InvQuarter, Constant };

double epsilon_at(EpsilonSchedule schedule, double constant, std::int64_t t);

struct RoundRobinState {
  ProtectedLinUCBState core;  // coreset = all of [L]
  EpsilonSchedule schedule = EpsilonSchedule::InvSqrt;
  double epsilon = 1.0;       // used by EpsilonSchedule::Constant
  int cursor = 0;
};

RoundRobinState make_round_robin_state(int d, int L, double R, double M, const PolicyOptions& options,
                                       EpsilonSchedule schedule, double epsilon = 1.0);

/// Optimistic arm for a single vector: argmax_a max_{θ∈Θ} ⟨a, θ⟩.
Vec linucb_arm(const EstimatorState& est, double sqrt_beta, const ArmSet& arms);

RoundOutcome rr_linucb_step(RoundRobinState& state, const ArmSet& arms, const ProtectedInstance& env, Rng& noise,
                            Rng& rng);

struct EpsGreedyState {
  std::map<int, EstimatorState> estimators;  // 0..L
  int s = 0;
  double epsilon = 1.0;
  std::int64_t round = 0;
};

EpsGreedyState make_eps_greedy_state(int d, int L, int s, double rho, double epsilon);

/// I − U Uᵀ for U the top-s eigenvectors of Σᵢ vᵢvᵢᵀ.
Mat pca_complement_projector(const std::vector<Vec>& vectors, int s, int d);

RoundOutcome eps_greedy_step(EpsGreedyState& state, const ArmSet& arms, const ProtectedInstance& env, Rng& noise,
                             Rng& rng);

/// Type-erased policy for the experiment harness.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual RoundOutcome step(const ArmSet& arms, const ProtectedInstance& env, Rng& noise, Rng& rng) = 0;
};

std::unique_ptr<Policy> wrap_policy(ProtectedLinUCBState state);
std::unique_ptr<Policy> wrap_policy(RoundRobinState state);
std::unique_ptr<Policy> wrap_policy(EpsGreedyState state);

}  // namespace banditlab
