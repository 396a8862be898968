#include "banditlab/coreset.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace banditlab {

std::uint64_t choose(int L, int k) {
  if (k < 0 || k > L) return 0;
  k = std::min(k, L - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(L - k + i);
    // result * num / i stays integral at each step
    if (result > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

double subset_score(const std::vector<Vec>& vectors, const std::vector<int>& subset) {
  if (subset.empty()) return 0.0;
  const Eigen::Index d = vectors.front().size();
  Mat columns(d, static_cast<Eigen::Index>(subset.size()));
  for (std::size_t j = 0; j < subset.size(); ++j) {
    const int idx = subset[j];
    if (idx < 1 || idx > static_cast<int>(vectors.size())) throw InvalidInput("subset_score: index out of range");
    columns.col(static_cast<Eigen::Index>(j)) = vectors[static_cast<std::size_t>(idx - 1)];
  }
  const Mat gram = columns.transpose() * columns;
  return min_eigenvalue(gram);
}

SubsetScore best_subset(const std::vector<Vec>& estimates, int k, std::uint64_t cap) {
  const int L = static_cast<int>(estimates.size());
  if (k < 1 || k > L) throw InvalidInput("best_subset: need 1 <= k <= L");
  for (const Vec& v : estimates)
    if (v.size() != estimates.front().size()) throw InvalidInput("best_subset: dimension mismatch");
  const std::uint64_t count = choose(L, k);
  if (count > cap)
    throw CapacityError("best_subset: C(" + std::to_string(L) + "," + std::to_string(k) + ") = " +
                            std::to_string(count) + " subsets exceeds the enumeration cap " + std::to_string(cap),
                        count);

  std::vector<int> current(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) current[static_cast<std::size_t>(i)] = i + 1;
  SubsetScore best{current, -std::numeric_limits<double>::infinity()};
  for (;;) {
    const double score = subset_score(estimates, current);
    if (score > best.score) best = {current, score};
    // next combination in lexicographic order
    int pos = k - 1;
    while (pos >= 0 && current[static_cast<std::size_t>(pos)] == L - k + pos + 1) --pos;
    if (pos < 0) break;
    ++current[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < k; ++i)
      current[static_cast<std::size_t>(i)] = current[static_cast<std::size_t>(i - 1)] + 1;
  }
  return best;
}

ThresholdFn coreset_threshold(ThresholdMode mode, int L, int d, double delta, double R, double M) {
  const double complexity = d * std::log(6.0) + std::log(1.0 / delta);
  const double scale = mode == ThresholdMode::Appendix ? 2.0 * 8.0 * L * M * R * (M + R) * complexity
                                                       : 16.0 * L * R * (M + R) * complexity;
  return [scale](std::int64_t t) { return scale / std::sqrt(static_cast<double>(std::max<std::int64_t>(t, 1))); };
}

namespace {

void validate(int L, int d, const CoresetOptions& options) {
  if (L < 1) throw InvalidInput("coreset: need at least one protected vector");
  if (d < 1) throw InvalidInput("coreset: d must be >= 1");
  if (!(options.delta > 0.0 && options.delta < 1.0)) throw InvalidInput("coreset: delta must lie in (0,1)");
  if (!(options.R >= 0.0) || !(options.M > 0.0)) throw InvalidInput("coreset: need R >= 0 and M > 0");
}

// One outer round: every basis vector against every protected index.
void isotropic_pass(const QueryOracle& oracle, std::vector<EstimatorState>& estimators, int d) {
  Vec e = Vec::Zero(d);
  for (int j = 0; j < d; ++j) {
    e.setZero();
    e(j) = 1.0;
    for (std::size_t p = 0; p < estimators.size(); ++p) {
      const double x = oracle(e, static_cast<int>(p) + 1);
      estimators[p].update(e, x);
    }
  }
}

std::vector<Vec> current_estimates(const std::vector<EstimatorState>& estimators) {
  std::vector<Vec> out;
  out.reserve(estimators.size());
  for (const auto& est : estimators) out.push_back(mle(est));
  return out;
}

}  // namespace

CoresetResult run_coreset(const QueryOracle& oracle, int L, int d, int k, const CoresetOptions& options) {
  validate(L, d, options);
  if (k < 1 || k > L) throw InvalidInput("run_coreset: need 1 <= k <= L");
  const ThresholdFn threshold =
      options.threshold ? options.threshold
                        : coreset_threshold(options.threshold_mode, L, d, options.delta, options.R, options.M);

  CoresetResult result;
  result.estimators.assign(static_cast<std::size_t>(L), EstimatorState(d, options.rho));
  for (;;) {
    if (result.outer_rounds >= options.max_outer_rounds) {
      result.estimates = current_estimates(result.estimators);
      throw CoresetTimeout("run_coreset: reached the cap of " + std::to_string(options.max_outer_rounds) +
                               " outer rounds without meeting the termination test",
                           std::move(result));
    }
    isotropic_pass(oracle, result.estimators, d);
    ++result.outer_rounds;
    result.queries_spent += static_cast<std::int64_t>(d) * L;
    result.estimates = current_estimates(result.estimators);
    const SubsetScore best = best_subset(result.estimates, k, options.enumeration_cap);
    if (best.score > threshold(result.outer_rounds)) {
      result.subset = best.subset;
      result.score = best.score;
      return result;
    }
  }
}

CoresetResult run_coreset_known_lambda(const QueryOracle& oracle, int L, int d, double lambda_min_known,
                                       const CoresetOptions& options) {
  validate(L, d, options);
  if (!(lambda_min_known > 0.0)) throw InvalidInput("run_coreset_known_lambda: lambda_min must be > 0");
  const double complexity = d * std::log(6.0) + std::log(1.0 / options.delta);
  const double scale = 8.0 * L * options.R * (options.M + options.R) * complexity;

  CoresetResult result;
  result.estimators.assign(static_cast<std::size_t>(L), EstimatorState(d, options.rho));
  do {
    if (result.outer_rounds >= options.max_outer_rounds) {
      result.estimates = current_estimates(result.estimators);
      throw CoresetTimeout("run_coreset_known_lambda: reached the outer-round cap", std::move(result));
    }
    isotropic_pass(oracle, result.estimators, d);
    ++result.outer_rounds;
    result.queries_spent += static_cast<std::int64_t>(d) * L;
  } while (scale / std::sqrt(static_cast<double>(result.outer_rounds)) > lambda_min_known);

  result.estimates = current_estimates(result.estimators);
  Mat total = Mat::Zero(d, d);
  for (const Vec& v : result.estimates) total.noalias() += v * v.transpose();
  const Vec spectrum = sym_eigenvalues(total);
  int k = 0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i)
    if (spectrum(i) >= lambda_min_known) ++k;
  k = std::min(k, L);
  if (k == 0)
    throw DegenerateInstance("run_coreset_known_lambda: no eigenvalue reaches lambda_min; inferred rank is 0");
  const SubsetScore best = best_subset(result.estimates, k, options.enumeration_cap);
  result.subset = best.subset;
  result.score = best.score;
  return result;
}

}  // namespace banditlab
