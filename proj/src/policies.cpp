#include "banditlab/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace banditlab {

namespace {

constexpr double kTiny = 1e-12;

Vec basis_vector(int d, int j) {
  Vec e = Vec::Zero(d);
  e(j) = 1.0;
  return e;
}

// Shift direction u with ‖u‖_V = 1, together with ⟨a, u⟩.
std::pair<Vec, double> shift_direction(const EstimatorState& est, const Vec& a, ShiftDirection mode) {
  if (mode == ShiftDirection::Natural) {
    const Vec vinv_a = est.design_inverse() * a;
    const double w = std::sqrt(std::max(a.dot(vinv_a), 0.0));
    if (!(w > 0.0)) throw NumericalError("optimistic_params: zero exploration width");
    return {vinv_a / w, w};
  }
  const double n = weighted_norm(a, est.design());
  if (!(n > 0.0)) throw NumericalError("optimistic_params: zero design norm");
  return {a / n, a.squaredNorm() / n};
}

double clip01(double x) { return std::clamp(x, 0.0, 1.0); }

// Coordinates θ = θ̂ + √β L⁻ᵀ z of an ellipsoid {‖θ − θ̂‖_V ≤ √β}, V = L Lᵀ.
struct EllipsoidChart {
  Vec center;
  Mat inv_upper;  // L⁻ᵀ
  Mat upper;      // Lᵀ
  double radius = 0.0;

  Vec point(const Vec& z) const { return center + radius * (inv_upper * z); }
  Vec coords(const Vec& theta) const {
    if (!(radius > 0.0)) return Vec::Zero(center.size());
    return upper * (theta - center) / radius;
  }
};

EllipsoidChart make_chart(const EstimatorState& est, double sqrt_beta) {
  Eigen::LLT<Mat> llt(est.design());
  if (llt.info() != Eigen::Success) throw NumericalError("exact_optimistic_params: design is not positive definite");
  EllipsoidChart chart;
  chart.center = mle(est);
  chart.upper = llt.matrixU();
  chart.inv_upper = llt.matrixU().solve(Mat::Identity(est.dim(), est.dim()));
  chart.radius = sqrt_beta;
  return chart;
}

void project_blocks(Vec& z, int blocks, int d) {
  for (int b = 0; b < blocks; ++b) {
    auto seg = z.segment(static_cast<Eigen::Index>(b) * d, d);
    const double n = seg.norm();
    if (n > 1.0) seg /= n;
  }
}

Vec normalized_or_first_axis(const Vec& v) {
  const double n = v.norm();
  if (n > kTiny) return v / n;
  return basis_vector(static_cast<int>(v.size()), 0);
}

}  // namespace

double ProtectedLinUCBState::sqrt_beta(int index) const {
  const EstimatorState& est = estimator(index);
  const std::int64_t count = options.beta_count == BetaCount::Horizon ? options.horizon : est.count();
  return beta_radius(count, params, est.rho());
}

const EstimatorState& ProtectedLinUCBState::estimator(int index) const {
  const auto it = estimators.find(index);
  if (it == estimators.end()) throw InvalidInput("policy: index " + std::to_string(index) + " is not tracked");
  return it->second;
}

ProtectedLinUCBState make_plinucb_state(int d, std::vector<int> coreset, int total_protected, double R, double M,
                                        const PolicyOptions& options) {
  if (d < 1) throw InvalidInput("make_plinucb_state: d must be >= 1");
  if (!(options.rho > 0.0)) throw InvalidInput("make_plinucb_state: rho must be > 0");
  if (options.horizon < 1) throw InvalidInput("make_plinucb_state: horizon must be >= 1");
  std::sort(coreset.begin(), coreset.end());
  for (int idx : coreset)
    if (idx < 1 || idx > total_protected) throw InvalidInput("make_plinucb_state: coreset index out of range");

  ProtectedLinUCBState state;
  state.coreset = std::move(coreset);
  state.options = options;
  state.params.R = R;
  state.params.M = M;
  state.params.d = d;
  state.params.delta =
      options.delta_split == DeltaSplit::PerVector ? options.delta / (total_protected + 1) : options.delta;
  state.params.validate();

  state.estimators.emplace(0, EstimatorState(d, options.rho));
  for (int idx : state.coreset) state.estimators.emplace(idx, EstimatorState(d, options.rho));
  if (options.warm_start) {
    for (const auto& [idx, est] : state.estimators) {
      (void)est;
      for (int j = 0; j < d; ++j) state.warm_queue.push_back({basis_vector(d, j), idx});
    }
  }
  return state;
}

ProtectedLinUCBState adversarial_example1_state(const ProtectedInstance& instance, const PolicyOptions& options,
                                                int prior_rounds) {
  const auto& space = instance.action_space();
  if (instance.d() != 2 || instance.L() != 1 || space.kind != ActionSpaceKind::FiniteFixed || space.arms.empty())
    throw InvalidInput("adversarial_example1_state: expects the d=2, L=1 fixed-arm example");
  if (prior_rounds < 1) throw InvalidInput("adversarial_example1_state: prior_rounds must be >= 1");

  PolicyOptions opts = options;
  opts.warm_start = false;
  ProtectedLinUCBState state = make_plinucb_state(2, {1}, 1, instance.R(), instance.M(), opts);
  state.known_target = instance.theta0();

  const Vec& a1 = space.arms.front();
  Mat design = opts.rho * Mat::Identity(2, 2) + static_cast<double>(prior_rounds) * a1 * a1.transpose();
  Vec response = design * instance.theta(1);
  state.estimators[1] = EstimatorState::from_parts(std::move(design), std::move(response), prior_rounds, opts.rho);
  return state;
}

double surrogate_objective(const Vec& a, const std::map<int, Vec>& tilde_thetas, const Vec& tilde_theta0) {
  std::vector<Vec> spanning;
  spanning.reserve(tilde_thetas.size());
  for (const auto& [idx, v] : tilde_thetas) {
    (void)idx;
    spanning.push_back(v);
  }
  return a.dot(proj_orth_complement(spanning, tilde_theta0));
}

OptimisticChoice optimistic_params(const Vec& a, const ProtectedLinUCBState& state) {
  if (a.size() != state.d()) throw InvalidInput("optimistic_params: dimension mismatch");
  if (!(a.norm() > 0.0)) throw InvalidInput("optimistic_params: arm must be nonzero");
  const PolicyOptions& opt = state.options;

  OptimisticChoice choice;
  choice.arm = a;
  for (int idx : state.coreset) {
    const EstimatorState& est = state.estimator(idx);
    const Vec center = mle(est);
    const double sb = state.sqrt_beta(idx);
    const auto [u, au] = shift_direction(est, a, opt.shift);
    const double w = sb * au;
    const double proj = a.dot(center);
    double alpha = 0.5;
    if (w > 0.0) {
      if (opt.alpha_rule == AlphaRule::Zeroing) {
        alpha = clip01((w - proj) / (2.0 * w));
      } else {
        const double wp = sb * a.norm() / weighted_norm(a, est.design());
        alpha = clip01((proj + wp) / (2.0 * wp));
      }
    }
    choice.alphas[idx] = alpha;
    choice.tilde_thetas[idx] = center + (2.0 * alpha - 1.0) * sb * u;
  }
  if (state.known_target) {
    choice.tilde_theta0 = *state.known_target;
  } else {
    const EstimatorState& est0 = state.estimator(0);
    const auto [u0, au0] = shift_direction(est0, a, opt.shift);
    (void)au0;
    choice.tilde_theta0 = mle(est0) + state.sqrt_beta(0) * u0;
  }
  choice.value = surrogate_objective(a, choice.tilde_thetas, choice.tilde_theta0);
  return choice;
}

OptimisticChoice exact_optimistic_params(const Vec& a, const ProtectedLinUCBState& state, Rng& rng) {
  OptimisticChoice best = optimistic_params(a, state);
  if (state.coreset.empty()) {
    if (!state.known_target) {
      // with nothing to project out, θ̃₀ maximizes ⟨a, θ⟩ over its ellipsoid
      const EstimatorState& est0 = state.estimator(0);
      const auto [u0, au0] = shift_direction(est0, a, ShiftDirection::Natural);
      (void)au0;
      best.tilde_theta0 = mle(est0) + state.sqrt_beta(0) * u0;
      best.value = a.dot(best.tilde_theta0);
    }
    return best;
  }

  const int d = state.d();
  const int blocks = static_cast<int>(state.coreset.size());
  std::vector<EllipsoidChart> charts;
  charts.reserve(state.coreset.size());
  for (int idx : state.coreset) charts.push_back(make_chart(state.estimator(idx), state.sqrt_beta(idx)));

  Vec center0;
  Mat vinv0;
  double sb0 = 0.0;
  if (!state.known_target) {
    center0 = mle(state.estimator(0));
    vinv0 = state.estimator(0).design_inverse();
    sb0 = state.sqrt_beta(0);
  }

  auto thetas_of = [&](const Vec& z) {
    std::map<int, Vec> out;
    for (int b = 0; b < blocks; ++b)
      out[state.coreset[static_cast<std::size_t>(b)]] =
          charts[static_cast<std::size_t>(b)].point(z.segment(static_cast<Eigen::Index>(b) * d, d));
    return out;
  };
  // Returns the objective and fills the maximizing θ̃₀.
  auto evaluate = [&](const Vec& z, Vec* theta0_out) {
    std::vector<Vec> spanning;
    spanning.reserve(static_cast<std::size_t>(blocks));
    for (int b = 0; b < blocks; ++b)
      spanning.push_back(charts[static_cast<std::size_t>(b)].point(z.segment(static_cast<Eigen::Index>(b) * d, d)));
    const Vec pa = proj_orth_complement(spanning, a);
    if (state.known_target) {
      if (theta0_out) *theta0_out = *state.known_target;
      return pa.dot(*state.known_target);
    }
    const double width = std::sqrt(std::max(pa.dot(vinv0 * pa), 0.0));
    if (theta0_out) *theta0_out = width > kTiny ? Vec(center0 + sb0 * (vinv0 * pa) / width) : center0;
    return pa.dot(center0) + sb0 * width;
  };

  const OptimizerConfig& cfg = state.options.optimizer;
  std::vector<Vec> starts;
  {
    Vec z(static_cast<Eigen::Index>(blocks) * d);
    for (int b = 0; b < blocks; ++b)
      z.segment(static_cast<Eigen::Index>(b) * d, d) =
          charts[static_cast<std::size_t>(b)].coords(best.tilde_thetas.at(state.coreset[static_cast<std::size_t>(b)]));
    project_blocks(z, blocks, d);
    starts.push_back(z);
    starts.push_back(Vec::Zero(z.size()));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int r = 0; r < cfg.restarts; ++r) {
      Vec zr(z.size());
      for (int b = 0; b < blocks; ++b)
        zr.segment(static_cast<Eigen::Index>(b) * d, d) =
            random_unit_vector(d, rng) * std::pow(unif(rng), 1.0 / d);
      starts.push_back(zr);
    }
  }

  Vec best_z;
  double best_value = -std::numeric_limits<double>::infinity();
  const double h = 1e-6;
  for (Vec z : starts) {
    double f = evaluate(z, nullptr);
    double step = 0.25;
    for (int it = 0; it < cfg.max_iters; ++it) {
      Vec grad(z.size());
      for (Eigen::Index k = 0; k < z.size(); ++k) {
        Vec zp = z, zm = z;
        zp(k) += h;
        zm(k) -= h;
        grad(k) = (evaluate(zp, nullptr) - evaluate(zm, nullptr)) / (2.0 * h);
      }
      const double gn = grad.norm();
      if (!(gn > kTiny)) break;
      bool accepted = false;
      const double previous = f;
      while (step > 1e-10) {
        Vec zn = z + step * grad / gn;
        project_blocks(zn, blocks, d);
        const double fn = evaluate(zn, nullptr);
        if (fn > f) {
          z = zn;
          f = fn;
          step = std::min(1.0, step * 1.5);
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted || f - previous < cfg.tol) break;
    }
    if (f > best_value) {
      best_value = f;
      best_z = z;
    }
  }

  if (best_value > best.value) {
    best.tilde_thetas = thetas_of(best_z);
    best.value = evaluate(best_z, &best.tilde_theta0);
    best.alphas.clear();
  }
  return best;
}

OptimisticChoice select_action(const ProtectedLinUCBState& state, const ArmSet& arms, Rng& rng) {
  const bool exact = state.options.optimizer.mode == OptimismMode::Exact;
  if (!arms.unit_ball) {
    if (arms.size() == 0) throw InvalidInput("select_action: empty action set");
    OptimisticChoice best;
    bool found = false;
    for (Eigen::Index j = 0; j < arms.size(); ++j) {
      const Vec a = arms.arm(j);
      if (!(a.norm() > 0.0)) continue;
      OptimisticChoice c = exact ? exact_optimistic_params(a, state, rng) : optimistic_params(a, state);
      if (!std::isfinite(c.value)) continue;
      if (!found || c.value > best.value) {
        best = std::move(c);
        found = true;
      }
    }
    if (!found) throw NumericalError("select_action: no arm has a finite optimistic value");
    return best;
  }

  const int d = state.d();
  const OptimizerConfig& cfg = state.options.optimizer;
  std::vector<Vec> starts;
  {
    std::vector<Vec> centers;
    for (int idx : state.coreset) centers.push_back(mle(state.estimator(idx)));
    const Vec target = state.known_target ? *state.known_target : mle(state.estimator(0));
    starts.push_back(normalized_or_first_axis(proj_orth_complement(centers, target)));
    for (int r = 0; r < cfg.restarts; ++r) starts.push_back(random_unit_vector(d, rng));
  }

  OptimisticChoice best;
  best.value = -std::numeric_limits<double>::infinity();
  for (const Vec& start : starts) {
    OptimisticChoice current = optimistic_params(start, state);
    for (int it = 0; it < cfg.max_iters; ++it) {
      const Vec next_dir = proj_orth_complement(
          [&] {
            std::vector<Vec> v;
            for (const auto& [idx, t] : current.tilde_thetas) {
              (void)idx;
              v.push_back(t);
            }
            return v;
          }(),
          current.tilde_theta0);
      const double n = next_dir.norm();
      if (!(n > kTiny)) break;
      OptimisticChoice next = optimistic_params(next_dir / n, state);
      const bool improved = next.value > current.value + cfg.tol;
      if (next.value > current.value) current = std::move(next);
      if (!improved) break;
    }
    if (std::isfinite(current.value) && current.value > best.value) best = std::move(current);
  }
  if (!std::isfinite(best.value)) throw NumericalError("select_action: optimistic search diverged");
  if (exact) {
    OptimisticChoice refined = exact_optimistic_params(best.arm, state, rng);
    if (refined.value > best.value) best = std::move(refined);
  }
  return best;
}

int select_index(const ProtectedLinUCBState& state, const Vec& arm) {
  std::vector<int> candidates;
  if (state.options.index_set == IndexSetMode::WithTarget && !state.known_target) candidates.push_back(0);
  candidates.insert(candidates.end(), state.coreset.begin(), state.coreset.end());
  if (candidates.empty()) throw InvalidInput("select_index: no index available to query");
  int best = candidates.front();
  double best_score = -1.0;
  for (int idx : candidates) {
    const double score = exploration_width(state.estimator(idx), arm) * state.sqrt_beta(idx);
    if (score > best_score) {
      best_score = score;
      best = idx;
    }
  }
  return best;
}

double diagnostic_delta_bound(const ProtectedLinUCBState& state, const OptimisticChoice& choice, double lambda_min) {
  if (!(lambda_min > 0.0)) throw InvalidInput("diagnostic_delta_bound: lambda_min must be > 0");
  const double s = static_cast<double>(state.coreset.size());
  const int idx = select_index(state, choice.arm);
  const EstimatorState& est = state.estimator(idx);
  const double sqrt_beta_T = beta_radius(state.options.horizon, state.params, est.rho());
  return 2.0 * (3.0 * std::sqrt(s) * state.params.M / lambda_min + 1.0) * exploration_width(est, choice.arm) *
         sqrt_beta_T;
}

namespace {

RoundOutcome play(std::map<int, EstimatorState>& estimators, const ActionChoice& action, const ArmSet& arms,
                  const ProtectedInstance& env, Rng& noise) {
  RoundOutcome out;
  out.action = action;
  out.feedback = feedback(env, action.arm, action.index, noise);
  auto it = estimators.find(action.index);
  if (it == estimators.end()) throw InvalidInput("policy: queried an untracked index");
  it->second.update(action.arm, out.feedback);
  out.suboptimality = suboptimality(env, action.arm, arms);
  out.action_set_id = arms.id;
  return out;
}

}  // namespace

RoundOutcome plinucb_step(ProtectedLinUCBState& state, const ArmSet& arms, const ProtectedInstance& env,
                          Rng& noise, Rng& rng) {
  ++state.round;
  if (!arms.unit_ball) state.warm_queue.clear();
  ActionChoice action;
  if (!state.warm_queue.empty()) {
    action = state.warm_queue.front();
    state.warm_queue.pop_front();
  } else {
    const OptimisticChoice choice = select_action(state, arms, rng);
    action.arm = choice.arm;
    action.index = select_index(state, choice.arm);
  }
  return play(state.estimators, action, arms, env, noise);
}

double epsilon_at(EpsilonSchedule schedule, double constant, std::int64_t t) {
  const double tt = static_cast<double>(std::max<std::int64_t>(t, 1));
  switch (schedule) {
    case EpsilonSchedule::InvSqrt:
      return 1.0 / std::sqrt(tt);
    case EpsilonSchedule::InvQuarter:
      return std::pow(tt, -0.25);
    case EpsilonSchedule::Constant:
      return std::clamp(constant, 0.0, 1.0);
  }
  return 0.0;
}

RoundRobinState make_round_robin_state(int d, int L, double R, double M, const PolicyOptions& options,
                                       EpsilonSchedule schedule, double epsilon) {
  if (L < 1) throw InvalidInput("make_round_robin_state: need L >= 1");
  std::vector<int> all(static_cast<std::size_t>(L));
  for (int i = 0; i < L; ++i) all[static_cast<std::size_t>(i)] = i + 1;
  PolicyOptions opts = options;
  opts.warm_start = false;
  RoundRobinState state;
  state.core = make_plinucb_state(d, std::move(all), L, R, M, opts);
  state.schedule = schedule;
  state.epsilon = epsilon;
  state.cursor = L - 1;  // first exploration round queries index 1
  return state;
}

Vec linucb_arm(const EstimatorState& est, double sqrt_beta, const ArmSet& arms) {
  const Vec center = mle(est);
  auto ucb = [&](const Vec& a) { return a.dot(center) + sqrt_beta * exploration_width(est, a); };
  if (!arms.unit_ball) {
    if (arms.size() == 0) throw InvalidInput("linucb_arm: empty action set");
    Eigen::Index best = 0;
    double best_value = ucb(arms.arm(0));
    for (Eigen::Index j = 1; j < arms.size(); ++j) {
      const double v = ucb(arms.arm(j));
      if (v > best_value) {
        best_value = v;
        best = j;
      }
    }
    return arms.arm(best);
  }

  const Eigen::Index d = est.dim();
  Eigen::SelfAdjointEigenSolver<Mat> eig(est.design_inverse());
  const Vec top = eig.eigenvectors().col(d - 1);
  std::vector<Vec> starts{normalized_or_first_axis(center), top, -top};
  Vec best = starts.front();
  double best_value = ucb(best);
  for (Vec a : starts) {
    for (int it = 0; it < 100; ++it) {
      const Vec vinv_a = est.design_inverse() * a;
      const double w = std::sqrt(std::max(a.dot(vinv_a), 0.0));
      const Vec theta = w > kTiny ? Vec(center + sqrt_beta * vinv_a / w) : center;
      const Vec next = normalized_or_first_axis(theta);
      const double moved = (next - a).norm();
      a = next;
      if (moved < 1e-12) break;
    }
    const double v = ucb(a);
    if (v > best_value) {
      best_value = v;
      best = a;
    }
  }
  return best;
}

RoundOutcome rr_linucb_step(RoundRobinState& state, const ArmSet& arms, const ProtectedInstance& env, Rng& noise,
                            Rng& rng) {
  ProtectedLinUCBState& core = state.core;
  const std::int64_t t = ++core.round;
  const int L = static_cast<int>(core.coreset.size());
  ActionChoice action;
  if (bernoulli(epsilon_at(state.schedule, state.epsilon, t), rng)) {
    state.cursor = (state.cursor + 1) % L;
    action.index = core.coreset[static_cast<std::size_t>(state.cursor)];
    action.arm = linucb_arm(core.estimator(action.index), core.sqrt_beta(action.index), arms);
  } else {
    action.arm = select_action(core, arms, rng).arm;
    action.index = 0;
  }
  return play(core.estimators, action, arms, env, noise);
}

EpsGreedyState make_eps_greedy_state(int d, int L, int s, double rho, double epsilon) {
  if (L < 0 || s < 0 || s > d) throw InvalidInput("make_eps_greedy_state: need L >= 0 and 0 <= s <= d");
  if (!(epsilon >= 0.0)) throw InvalidInput("make_eps_greedy_state: epsilon must be >= 0");
  EpsGreedyState state;
  for (int i = 0; i <= L; ++i) state.estimators.emplace(i, EstimatorState(d, rho));
  state.s = s;
  state.epsilon = epsilon;
  return state;
}

Mat pca_complement_projector(const std::vector<Vec>& vectors, int s, int d) {
  if (s <= 0) return Mat::Identity(d, d);
  Mat total = Mat::Zero(d, d);
  for (const Vec& v : vectors) total.noalias() += v * v.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> eig(total);
  if (eig.info() != Eigen::Success) throw NumericalError("pca_complement_projector: eigendecomposition failed");
  const Mat top = eig.eigenvectors().rightCols(std::min(s, d));
  return complement_projector(top, d);
}

RoundOutcome eps_greedy_step(EpsGreedyState& state, const ArmSet& arms, const ProtectedInstance& env, Rng& noise,
                             Rng& rng) {
  const std::int64_t t = ++state.round;
  const int d = env.d();
  const int L = static_cast<int>(state.estimators.size()) - 1;
  const double p = std::min(1.0, state.epsilon / std::sqrt(static_cast<double>(t)));
  ActionChoice action;
  if (bernoulli(p, rng)) {
    action.index = std::uniform_int_distribution<int>(0, L)(rng);
    if (arms.unit_ball) {
      action.arm = random_unit_vector(d, rng);
    } else {
      action.arm = arms.arm(std::uniform_int_distribution<Eigen::Index>(0, arms.size() - 1)(rng));
    }
  } else {
    std::vector<Vec> estimates;
    for (int i = 1; i <= L; ++i) estimates.push_back(mle(state.estimators.at(i)));
    const Vec v = pca_complement_projector(estimates, state.s, d) * mle(state.estimators.at(0));
    if (arms.unit_ball) {
      action.arm = normalized_or_first_axis(v);
    } else {
      Eigen::Index best = 0;
      double best_value = arms.arm(0).dot(v);
      for (Eigen::Index j = 1; j < arms.size(); ++j) {
        const double value = arms.arm(j).dot(v);
        if (value > best_value) {
          best_value = value;
          best = j;
        }
      }
      action.arm = arms.arm(best);
    }
    action.index = 0;
  }
  return play(state.estimators, action, arms, env, noise);
}

namespace {

template <typename State, RoundOutcome (*Step)(State&, const ArmSet&, const ProtectedInstance&, Rng&, Rng&)>
class StatePolicy final : public Policy {
 public:
  explicit StatePolicy(State state) : state_(std::move(state)) {}
  RoundOutcome step(const ArmSet& arms, const ProtectedInstance& env, Rng& noise, Rng& rng) override {
    return Step(state_, arms, env, noise, rng);
  }

 private:
  State state_;
};

}  // namespace

std::unique_ptr<Policy> wrap_policy(ProtectedLinUCBState state) {
  return std::make_unique<StatePolicy<ProtectedLinUCBState, &plinucb_step>>(std::move(state));
}

std::unique_ptr<Policy> wrap_policy(RoundRobinState state) {
  return std::make_unique<StatePolicy<RoundRobinState, &rr_linucb_step>>(std::move(state));
}

std::unique_ptr<Policy> wrap_policy(EpsGreedyState state) {
  return std::make_unique<StatePolicy<EpsGreedyState, &eps_greedy_step>>(std::move(state));
}

}  // namespace banditlab
