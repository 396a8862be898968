#pragma once

// Experiment orchestration: JSON configs, seeded multi-run execution, regret
// traces as CSV, and mean/std aggregation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "banditlab/coreset.hpp"
#include "banditlab/environment.hpp"
#include "banditlab/policies.hpp"

namespace banditlab {

enum class PolicyKind { PLinUCB, RRLinUCB, RRLinUCB2, EpsGreedy };

enum class InitialState {
  Fresh,
  /// Example-1 confidence state (implies no CORE-SET phase).
  Example1Adversarial,
};

struct ExperimentConfig {
  /// Instance source: {"file": path} or {"generator": name, ...}.
  nlohmann::json instance;
  std::string base_dir = ".";  // relative instance paths resolve against this

  PolicyKind policy = PolicyKind::PLinUCB;
  std::int64_t horizon = 1000;
  int runs = 1;
  std::uint64_t base_seed = 0;
  double rho = 0.1;
  double delta = 0.001;

  double epsilon = 1.0;
  std::optional<EpsilonSchedule> schedule;  // defaults per policy kind
  OptimizerConfig optimizer;
  DeltaSplit delta_split = DeltaSplit::PerVector;
  IndexSetMode index_set = IndexSetMode::WithTarget;
  AlphaRule alpha_rule = AlphaRule::Zeroing;
  ShiftDirection shift = ShiftDirection::Natural;
  BetaCount beta_count = BetaCount::PerVector;
  ThresholdMode threshold_mode = ThresholdMode::Appendix;
  bool charge_coreset = true;
  bool warm_start = true;
  InitialState initial_state = InitialState::Fresh;
  int example1_prior_rounds = 10;
  double coreset_rho = 1e-12;
  std::int64_t coreset_max_outer_rounds = 1'000'000;
  std::uint64_t enumeration_cap = 1'000'000;

  int workers = 0;  // 0 = hardware concurrency
  std::string output_dir;
};

/// Parses and validates; every problem is reported in a single InvalidInput.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
ExperimentConfig read_config(const std::string& path);

/// Builds the instance named by the config's instance source.
ProtectedInstance build_instance(const ExperimentConfig& config);

struct TraceRow {
  std::int64_t t = 0;
  int index = 0;
  double feedback = 0.0;
  double instant_regret = 0.0;
  double cum_regret = 0.0;
  Vec arm;

  bool operator==(const TraceRow& other) const;
};

struct CoresetReport {
  std::vector<int> subset;
  double score = 0.0;
  std::int64_t outer_rounds = 0;
  std::int64_t queries = 0;
};

struct RegretTrace {
  int run_id = 0;
  std::uint64_t seed = 0;
  std::vector<TraceRow> rows;
  std::optional<CoresetReport> coreset;
  double wall_seconds = 0.0;
  std::string error;  // nonempty when the run failed

  bool ok() const { return error.empty(); }
};

/// Runs one seeded repetition against a prebuilt instance.
RegretTrace run_single(const ExperimentConfig& config, const ProtectedInstance& instance, int run_id);

/// All runs, in run_id order. Failures are recorded per trace.
std::vector<RegretTrace> run_experiment(const ExperimentConfig& config);
std::vector<RegretTrace> run_experiment(const ExperimentConfig& config, const ProtectedInstance& instance);

/// Worker count after applying BANDITLAB_WORKERS.
int effective_workers(int configured);

struct RegretSummary {
  std::vector<double> mean;  // cumulative regret per round
  std::vector<double> std;   // sample standard deviation (n−1)
};

RegretSummary aggregate(const std::vector<RegretTrace>& traces);

std::string trace_to_csv(const RegretTrace& trace);
/// Inverse of trace_to_csv; run_id comes from the rows.
RegretTrace trace_from_csv(const std::string& text);

/// Writes trace_<id>.csv, runs.json and summary.csv into `dir`.
void write_outputs(const std::string& dir, const std::vector<RegretTrace>& traces);

/// Reads every trace_*.csv in `dir` and writes summary.csv next to them.
RegretSummary aggregate_directory(const std::string& dir);

/// Entry point for the command-line tool.
int run_cli(int argc, char** argv);

}  // namespace banditlab
