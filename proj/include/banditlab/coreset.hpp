#pragma once

// CORE-SET: isotropic round-robin exploration of all protected vectors until
// some size-k subset provably spans the protected space well, then exact
// subset selection by enumeration.
//
// Protected indices are 1-based throughout (index 0 is the target vector).

#include <cstdint>
#include <functional>
#include <vector>

#include "banditlab/confidence.hpp"
#include "banditlab/errors.hpp"

namespace banditlab {

struct SubsetScore {
  std::vector<int> subset;  // 1-based, ascending
  double score = 0.0;
};

/// λ_min of the |S|x|S| Gram matrix of the chosen vectors, i.e. the |S|-th
/// largest eigenvalue of Σ_{i∈S} vᵢvᵢᵀ. Zero when the vectors are dependent.
double subset_score(const std::vector<Vec>& vectors, const std::vector<int>& subset);

/// Exact argmax of subset_score over all size-k subsets; ties go to the
/// lexicographically smallest subset. Throws CapacityError when C(L,k) > cap.
SubsetScore best_subset(const std::vector<Vec>& estimates, int k, std::uint64_t cap = 1'000'000);

/// Number of size-k subsets of L items, saturating at UINT64_MAX.
std::uint64_t choose(int L, int k);

/// Answers an isotropic query (basis vector, protected index) with noisy
/// feedback.
using QueryOracle = std::function<double(const Vec& arm, int index)>;

enum class ThresholdMode {
  /// 2·8·L·M·R·(M+R)·(d log 6 + log(1/δ)) / √t
  Appendix,
  /// 16·L·R·(M+R)·(d log 6 + log(1/δ)) / √t
  MainText,
};

/// Termination threshold as a function of completed outer rounds t.
using ThresholdFn = std::function<double(std::int64_t)>;

ThresholdFn coreset_threshold(ThresholdMode mode, int L, int d, double delta, double R, double M);

struct CoresetOptions {
  double delta = 0.05;
  double R = 1.0;
  double M = 1.0;
  double rho = 1e-12;
  std::int64_t max_outer_rounds = 1'000'000;
  std::uint64_t enumeration_cap = 1'000'000;
  ThresholdMode threshold_mode = ThresholdMode::Appendix;
  /// Overrides threshold_mode when set.
  ThresholdFn threshold;
};

struct CoresetResult {
  std::vector<int> subset;
  double score = 0.0;
  std::int64_t outer_rounds = 0;
  std::int64_t queries_spent = 0;
  std::vector<EstimatorState> estimators;  // one per protected vector, [0] is θ₁
  std::vector<Vec> estimates;
};

class CoresetTimeout : public TimeoutError {
 public:
  CoresetTimeout(const std::string& what, CoresetResult partial)
      : TimeoutError(what), partial_(std::move(partial)) {}
  const CoresetResult& partial() const { return partial_; }

 private:
  CoresetResult partial_;
};

/// Runs outer rounds of d·L basis queries until some size-k subset scores
/// above the threshold, then returns best_subset of the estimates.
CoresetResult run_coreset(const QueryOracle& oracle, int L, int d, int k, const CoresetOptions& options);

/// Variant for a known λ_min: explores until 8LR(M+R)(d log 6 + log(1/δ))/√t
/// ≤ λ_min, infers k as the number of eigenvalues of Σθ̂ᵢθ̂ᵢᵀ that reach
/// λ_min, then selects the best size-k subset.
CoresetResult run_coreset_known_lambda(const QueryOracle& oracle, int L, int d, double lambda_min_known,
                                       const CoresetOptions& options);

}  // namespace banditlab
