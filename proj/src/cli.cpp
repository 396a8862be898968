#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "banditlab/errors.hpp"
#include "banditlab/harness.hpp"
#include "banditlab/instance_io.hpp"
#include "banditlab/instances.hpp"

namespace banditlab {

namespace {

struct SynthArgs {
  int d = 5, L = 3, s = 2;
  double M = 1.0, R = 0.1;
  std::uint64_t seed = 0;
  std::string arms = "unit_ball";
  int count = 100;
  std::uint64_t arm_seed = 0;
  std::string out;
};

struct LowerBoundArgs {
  std::int64_t horizon = 4096;
  std::uint64_t seed = 0;
  double R = 1.0;
  int which = 1;
  std::string out;
};

struct DatasetArgs {
  std::string csv;
  std::vector<std::string> dose_columns;
  DatasetConfig config;
  std::string out;
};

struct Example1Args {
  double R = 0.1;
  std::string out;
};

struct RunArgs {
  std::string config;
  std::string out;
  std::int64_t seed = -1;
};

int cmd_run(const RunArgs& args) {
  ExperimentConfig config = read_config(args.config);
  if (args.seed >= 0) config.base_seed = static_cast<std::uint64_t>(args.seed);
  const std::string out = !args.out.empty() ? args.out : !config.output_dir.empty() ? config.output_dir : "out";
  const auto traces = run_experiment(config);
  write_outputs(out, traces);
  int failed = 0;
  for (const auto& tr : traces) {
    if (tr.ok()) continue;
    ++failed;
    std::cerr << "run " << tr.run_id << " failed: " << tr.error << '\n';
  }
  std::cout << "wrote " << traces.size() - static_cast<std::size_t>(failed) << " trace(s) to " << out << '\n';
  return failed == 0 ? 0 : 2;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"banditlab: protected linear bandit experiments"};
  app.require_subcommand(1);

  auto* instance = app.add_subcommand("instance", "Generate an instance file");
  instance->require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = instance->add_subcommand("synth", "Random synthetic instance");
  synth_cmd->add_option("--d", synth.d, "Dimension")->capture_default_str();
  synth_cmd->add_option("--L", synth.L, "Number of protected vectors")->capture_default_str();
  synth_cmd->add_option("--s", synth.s, "Rank of the protected span")->capture_default_str();
  synth_cmd->add_option("--M", synth.M, "Norm bound")->capture_default_str();
  synth_cmd->add_option("--R", synth.R, "Noise scale")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
  synth_cmd->add_option("--arms", synth.arms, "unit_ball or finite_resampled")
      ->check(CLI::IsMember({"unit_ball", "finite_resampled"}))
      ->capture_default_str();
  synth_cmd->add_option("--count", synth.count, "Arms per round (finite_resampled)")->capture_default_str();
  synth_cmd->add_option("--arm-seed", synth.arm_seed, "Action-set stream seed")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output instance JSON")->required();

  LowerBoundArgs lb;
  auto* lb_cmd = instance->add_subcommand("lowerbound", "One instance of the lower-bound pair");
  lb_cmd->add_option("--horizon", lb.horizon, "Horizon T (>= 256)")->capture_default_str();
  lb_cmd->add_option("--seed", lb.seed, "Action-set stream seed")->capture_default_str();
  lb_cmd->add_option("--R", lb.R, "Noise scale")->capture_default_str();
  lb_cmd->add_option("--which", lb.which, "1 or 2")->check(CLI::Range(1, 2))->capture_default_str();
  lb_cmd->add_option("--out", lb.out, "Output instance JSON")->required();

  DatasetArgs ds;
  auto* ds_cmd = instance->add_subcommand("dataset", "Fit an instance from therapy records");
  ds_cmd->add_option("--csv", ds.csv, "Input CSV")->required();
  ds_cmd->add_option("--dose-columns", ds.dose_columns, "Dose column names")->required()->delimiter(',');
  ds_cmd->add_option("--inr-column", ds.config.inr_column)->capture_default_str();
  ds_cmd->add_option("--stability-column", ds.config.stability_column)->capture_default_str();
  ds_cmd->add_option("--inr-target", ds.config.inr_target)->capture_default_str();
  ds_cmd->add_option("--ridge", ds.config.ridge, "<= 0 selects 1e-3 * rows")->capture_default_str();
  ds_cmd->add_option("--M", ds.config.M)->capture_default_str();
  ds_cmd->add_option("--R", ds.config.R, "<= 0 uses the INR residual estimate")->capture_default_str();
  ds_cmd->add_option("--out", ds.out, "Output instance JSON")->required();

  Example1Args ex;
  auto* ex_cmd = instance->add_subcommand("example1", "Optimism-failure instance");
  ex_cmd->add_option("--R", ex.R, "Noise scale")->capture_default_str();
  ex_cmd->add_option("--out", ex.out, "Output instance JSON")->required();

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment");
  run_cmd->add_option("--config", run.config, "Experiment config JSON")->required();
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--seed", run.seed, "Override base_seed");

  std::string agg_dir;
  auto* agg_cmd = app.add_subcommand("aggregate", "Mean and std of cumulative regret");
  agg_cmd->add_option("--in", agg_dir, "Directory of trace_*.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (synth_cmd->parsed()) {
      const ActionSpaceSpec space = synth.arms == "unit_ball" ? ActionSpaceSpec::unit_ball()
                                                              : ActionSpaceSpec::finite_resampled(synth.count, synth.arm_seed);
      write_instance(synth.out, gen_synthetic(synth.d, synth.L, synth.s, synth.M, synth.R, synth.seed, space));
    } else if (lb_cmd->parsed()) {
      const LowerBoundPair pair = gen_lower_bound(lb.horizon, lb.seed, lb.R);
      write_instance(lb.out, lb.which == 1 ? pair.instance1 : pair.instance2);
    } else if (ds_cmd->parsed()) {
      ds.config.dose_columns = ds.dose_columns;
      const DatasetInstance result = ingest_dataset(ds.csv, ds.config);
      write_instance(ds.out, result.instance);
      const auto& r = result.report;
      std::cout << "rows read " << r.rows_read << ", dropped " << r.rows_dropped << ", arms " << r.arms
                << ", residual std " << r.residual_std << '\n';
    } else if (ex_cmd->parsed()) {
      write_instance(ex.out, gen_example1(ex.R));
    } else if (run_cmd->parsed()) {
      return cmd_run(run);
    } else if (agg_cmd->parsed()) {
      const RegretSummary s = aggregate_directory(agg_dir);
      std::cout << "aggregated " << s.mean.size() << " rounds into " << agg_dir << "/summary.csv\n";
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << " (row " << e.row() << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace banditlab
