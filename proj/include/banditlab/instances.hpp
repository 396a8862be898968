#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "banditlab/environment.hpp"

namespace banditlab {

/// u_angle = (cos angle, sin angle).
Vec polar_unit(double angle);

/// Random instance: θ₀ and s Gaussian directions spanning the protected space,
/// L protected vectors drawn as random combinations inside that span. Every
/// vector is scaled to norm M.
ProtectedInstance gen_synthetic(int d, int L, int s, double M, double R, std::uint64_t seed,
                                ActionSpaceSpec action_space = ActionSpaceSpec::unit_ball());

/// Two d=2 instances sharing θ₀ = u_{π/2−α} with θ₁ = u₀ and θ₁ = u_{−α}
/// respectively, α = T^{−1/4}, and the same randomized 2/3-arm action stream.
struct LowerBoundPair {
  ProtectedInstance instance1;
  ProtectedInstance instance2;
  double alpha = 0.0;
  std::uint64_t seed = 0;
};

LowerBoundPair gen_lower_bound(std::int64_t horizon, std::uint64_t seed, double R = 1.0);

/// θ₀ = u_{π/4}, θ₁ = u₀ with the fixed arms {u_{π/4}, u_{π/2}}.
ProtectedInstance gen_example1(double R = 0.1);

struct DatasetConfig {
  std::vector<std::string> dose_columns;
  std::string inr_column = "INR";
  std::string stability_column = "Stability";
  double inr_target = 2.5;
  /// Ridge parameter of the INR fit; <= 0 selects 1e-3 * rows.
  double ridge = 0.0;
  double M = 1.0;
  /// Noise scale written to the instance; <= 0 uses the INR residual estimate.
  double R = 0.0;
  std::uint64_t seed = 0;
};

struct DatasetInstanceReport {
  Vec theta0;  // reward direction (stability fit)
  Vec theta1;  // protected direction (INR-deviation fit)
  double inr_residual_norm = 0.0;
  double stability_residual_norm = 0.0;
  double residual_std = 0.0;
  long rows_read = 0;
  long rows_dropped = 0;
  long rows_used = 0;
  long arms = 0;
  int logistic_iterations = 0;
};

struct DatasetInstance {
  ProtectedInstance instance;
  DatasetInstanceReport report;
};

/// Builds a fixed-arm instance from a CSV of therapy records: arms are the
/// normalized dose vectors, the protected vector is a ridge fit of INR minus
/// its target, and the reward vector is a logistic fit of stability.
DatasetInstance ingest_dataset(const std::string& csv_path, const DatasetConfig& config);

}  // namespace banditlab
