#include "banditlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "banditlab/errors.hpp"
#include "banditlab/instance_io.hpp"
#include "banditlab/instances.hpp"

namespace banditlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kNoiseStreamTag = 0x4E01'5E00ull;
constexpr std::uint64_t kPolicyStreamTag = 0x9011'C700ull;

// Collects every configuration problem before reporting.
class FieldReader {
 public:
  FieldReader(const json& j, std::string where, std::vector<std::string>& errors)
      : j_(j), where_(std::move(where)), errors_(errors) {}

  template <typename T>
  T get(const char* key, T fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      errors_.push_back(where_ + "." + key + ": wrong type");
      return fallback;
    }
  }

  template <typename E>
  E choice(const char* key, E fallback, const std::map<std::string, E>& names) {
    const std::string name = get<std::string>(key, "");
    if (name.empty()) return fallback;
    const auto it = names.find(name);
    if (it == names.end()) {
      std::string options;
      for (const auto& [n, v] : names) {
        (void)v;
        options += (options.empty() ? "" : ", ") + n;
      }
      errors_.push_back(where_ + "." + key + ": unknown value '" + name + "' (expected one of " + options + ")");
      return fallback;
    }
    return it->second;
  }

  void mark(const char* key) { seen_.insert(key); }

  void reject_unknown() {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) errors_.push_back(where_ + ": unknown key '" + it.key() + "'");
  }

 private:
  const json& j_;
  std::string where_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

const std::map<std::string, PolicyKind> kPolicyNames{{"plinucb", PolicyKind::PLinUCB},
                                                     {"rr_linucb", PolicyKind::RRLinUCB},
                                                     {"rr_linucb2", PolicyKind::RRLinUCB2},
                                                     {"eps_greedy", PolicyKind::EpsGreedy}};

void validate_instance_source(const json& src, std::vector<std::string>& errors) {
  if (!src.is_object()) {
    errors.push_back("instance: must be an object with 'file' or 'generator'");
    return;
  }
  if (src.contains("file") == src.contains("generator")) {
    errors.push_back("instance: give exactly one of 'file' or 'generator'");
    return;
  }
  static const std::map<std::string, std::set<std::string>> kAllowed{
      {"synthetic", {"generator", "d", "L", "s", "M", "R", "seed", "action_space"}},
      {"example1", {"generator", "R"}},
      {"lowerbound", {"generator", "horizon", "seed", "R", "which"}},
      {"dataset",
       {"generator", "csv", "dose_columns", "inr_column", "stability_column", "inr_target", "ridge", "M", "R",
        "seed"}},
  };
  std::set<std::string> allowed{"file"};
  if (src.contains("generator")) {
    if (!src["generator"].is_string()) {
      errors.push_back("instance.generator: must be a string");
      return;
    }
    const auto it = kAllowed.find(src["generator"].get<std::string>());
    if (it == kAllowed.end()) {
      errors.push_back("instance.generator: unknown generator '" + src["generator"].get<std::string>() + "'");
      return;
    }
    allowed = it->second;
  }
  for (auto it = src.begin(); it != src.end(); ++it)
    if (!allowed.count(it.key())) errors.push_back("instance: unknown key '" + it.key() + "'");
}

template <typename T>
T opt(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidInput(std::string("instance.") + key + ": wrong type");
  }
}

template <typename T>
T req(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(std::string("instance: missing '") + key + "'");
  return opt<T>(j, key, T{});
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

ExperimentConfig config_from_json(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw InvalidInput("config: top level must be a JSON object");
  std::vector<std::string> errors;
  ExperimentConfig c;
  c.base_dir = base_dir;
  FieldReader r(j, "config", errors);

  r.mark("instance");
  if (!j.contains("instance")) {
    errors.push_back("config.instance: required");
  } else {
    c.instance = j["instance"];
    validate_instance_source(c.instance, errors);
  }
  if (!j.contains("policy")) errors.push_back("config.policy: required");
  c.policy = r.choice("policy", c.policy, kPolicyNames);
  c.horizon = r.get<std::int64_t>("horizon", c.horizon);
  c.runs = r.get<int>("runs", c.runs);
  c.base_seed = r.get<std::uint64_t>("base_seed", c.base_seed);
  c.rho = r.get<double>("rho", c.rho);
  c.delta = r.get<double>("delta", c.delta);
  c.epsilon = r.get<double>("epsilon", c.epsilon);
  if (j.contains("schedule"))
    c.schedule = r.choice<EpsilonSchedule>("schedule", EpsilonSchedule::InvSqrt,
                                           {{"inv_sqrt", EpsilonSchedule::InvSqrt},
                                            {"inv_quarter", EpsilonSchedule::InvQuarter},
                                            {"constant", EpsilonSchedule::Constant}});
  r.mark("optimizer");
  if (j.contains("optimizer")) {
    if (!j["optimizer"].is_object()) {
      errors.push_back("config.optimizer: must be an object");
    } else {
      FieldReader o(j["optimizer"], "config.optimizer", errors);
      c.optimizer.restarts = o.get<int>("restarts", c.optimizer.restarts);
      c.optimizer.max_iters = o.get<int>("max_iters", c.optimizer.max_iters);
      c.optimizer.tol = o.get<double>("tol", c.optimizer.tol);
      c.optimizer.mode = o.choice<OptimismMode>(
          "mode", c.optimizer.mode, {{"surrogate", OptimismMode::Surrogate}, {"exact", OptimismMode::Exact}});
      o.reject_unknown();
      if (c.optimizer.restarts < 0) errors.push_back("config.optimizer.restarts: must be >= 0");
      if (c.optimizer.max_iters < 1) errors.push_back("config.optimizer.max_iters: must be >= 1");
      if (!(c.optimizer.tol >= 0.0)) errors.push_back("config.optimizer.tol: must be >= 0");
    }
  }
  c.delta_split = r.choice<DeltaSplit>("delta_split", c.delta_split,
                                       {{"per_vector", DeltaSplit::PerVector}, {"shared", DeltaSplit::Shared}});
  c.index_set = r.choice<IndexSetMode>(
      "index_set", c.index_set,
      {{"with_target", IndexSetMode::WithTarget}, {"coreset_only", IndexSetMode::CoresetOnly}});
  c.alpha_rule =
      r.choice<AlphaRule>("alpha_rule", c.alpha_rule, {{"zeroing", AlphaRule::Zeroing}, {"printed", AlphaRule::Printed}});
  c.shift = r.choice<ShiftDirection>(
      "shift_direction", c.shift, {{"natural", ShiftDirection::Natural}, {"isotropic", ShiftDirection::Isotropic}});
  c.beta_count = r.choice<BetaCount>("beta_count", c.beta_count,
                                     {{"per_vector", BetaCount::PerVector}, {"horizon", BetaCount::Horizon}});
  c.threshold_mode = r.choice<ThresholdMode>(
      "threshold_mode", c.threshold_mode,
      {{"appendix", ThresholdMode::Appendix}, {"main_text", ThresholdMode::MainText}});
  c.charge_coreset = r.get<bool>("charge_coreset", c.charge_coreset);
  c.warm_start = r.get<bool>("warm_start", c.warm_start);
  c.initial_state = r.choice<InitialState>(
      "initial_state", c.initial_state,
      {{"fresh", InitialState::Fresh}, {"example1_adversarial", InitialState::Example1Adversarial}});
  c.example1_prior_rounds = r.get<int>("example1_prior_rounds", c.example1_prior_rounds);
  c.coreset_rho = r.get<double>("coreset_rho", c.coreset_rho);
  c.coreset_max_outer_rounds = r.get<std::int64_t>("coreset_max_outer_rounds", c.coreset_max_outer_rounds);
  c.enumeration_cap = r.get<std::uint64_t>("enumeration_cap", c.enumeration_cap);
  c.workers = r.get<int>("workers", c.workers);
  c.output_dir = r.get<std::string>("output_dir", c.output_dir);
  r.reject_unknown();

  if (c.horizon < 1) errors.push_back("config.horizon: must be >= 1");
  if (c.runs < 1) errors.push_back("config.runs: must be >= 1");
  if (!(c.delta > 0.0 && c.delta < 1.0)) errors.push_back("config.delta: must lie in (0,1)");
  if (!(c.rho > 0.0)) errors.push_back("config.rho: must be > 0");
  if (!(c.epsilon >= 0.0)) errors.push_back("config.epsilon: must be >= 0");
  if (!(c.coreset_rho > 0.0)) errors.push_back("config.coreset_rho: must be > 0");
  if (c.coreset_max_outer_rounds < 1) errors.push_back("config.coreset_max_outer_rounds: must be >= 1");
  if (c.example1_prior_rounds < 1) errors.push_back("config.example1_prior_rounds: must be >= 1");
  if (c.workers < 0) errors.push_back("config.workers: must be >= 0");
  if (c.initial_state == InitialState::Example1Adversarial && c.policy != PolicyKind::PLinUCB)
    errors.push_back("config.initial_state: example1_adversarial requires policy plinucb");

  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw InvalidInput(msg);
  }
  return c;
}

ExperimentConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("config file '" + path + "' is not valid JSON: " + e.what());
  }
  const fs::path parent = fs::path(path).parent_path();
  return config_from_json(j, parent.empty() ? "." : parent.string());
}

ProtectedInstance build_instance(const ExperimentConfig& config) {
  const json& src = config.instance;
  if (src.contains("file")) {
    fs::path p = req<std::string>(src, "file");
    if (p.is_relative()) p = fs::path(config.base_dir) / p;
    return read_instance(p.string());
  }
  const std::string gen = req<std::string>(src, "generator");
  if (gen == "synthetic") {
    const ActionSpaceSpec space =
        src.contains("action_space") ? action_space_from_json(src["action_space"]) : ActionSpaceSpec::unit_ball();
    return gen_synthetic(req<int>(src, "d"), req<int>(src, "L"), req<int>(src, "s"), opt<double>(src, "M", 1.0),
                         opt<double>(src, "R", 0.1), opt<std::uint64_t>(src, "seed", 0), space);
  }
  if (gen == "example1") return gen_example1(opt<double>(src, "R", 0.1));
  if (gen == "lowerbound") {
    LowerBoundPair pair = gen_lower_bound(opt<std::int64_t>(src, "horizon", config.horizon),
                                          opt<std::uint64_t>(src, "seed", 0), opt<double>(src, "R", 1.0));
    const int which = opt<int>(src, "which", 1);
    if (which != 1 && which != 2) throw InvalidInput("instance.which: must be 1 or 2");
    return which == 1 ? pair.instance1 : pair.instance2;
  }
  if (gen == "dataset") {
    DatasetConfig dc;
    dc.dose_columns = req<std::vector<std::string>>(src, "dose_columns");
    dc.inr_column = opt<std::string>(src, "inr_column", dc.inr_column);
    dc.stability_column = opt<std::string>(src, "stability_column", dc.stability_column);
    dc.inr_target = opt<double>(src, "inr_target", dc.inr_target);
    dc.ridge = opt<double>(src, "ridge", dc.ridge);
    dc.M = opt<double>(src, "M", dc.M);
    dc.R = opt<double>(src, "R", dc.R);
    dc.seed = opt<std::uint64_t>(src, "seed", dc.seed);
    fs::path p = req<std::string>(src, "csv");
    if (p.is_relative()) p = fs::path(config.base_dir) / p;
    return ingest_dataset(p.string(), dc).instance;
  }
  throw InvalidInput("instance.generator: unknown generator '" + gen + "'");
}

bool TraceRow::operator==(const TraceRow& other) const {
  return t == other.t && index == other.index && feedback == other.feedback &&
         instant_regret == other.instant_regret && cum_regret == other.cum_regret && arm.size() == other.arm.size() &&
         arm == other.arm;
}

namespace {

PolicyOptions policy_options(const ExperimentConfig& c, const ProtectedInstance& instance) {
  PolicyOptions o;
  o.rho = c.rho;
  o.delta = c.delta;
  o.delta_split = c.delta_split;
  o.beta_count = c.beta_count;
  o.index_set = c.index_set;
  o.alpha_rule = c.alpha_rule;
  o.shift = c.shift;
  o.optimizer = c.optimizer;
  o.warm_start = c.warm_start && instance.action_space().is_unit_ball();
  o.horizon = c.horizon;
  return o;
}

class TraceRecorder {
 public:
  TraceRecorder(RegretTrace& trace, std::int64_t horizon) : trace_(trace), horizon_(horizon) {}

  bool full() const { return static_cast<std::int64_t>(trace_.rows.size()) >= horizon_; }

  void record(const Vec& arm, int index, double x, double instant) {
    cum_ += instant;
    TraceRow row;
    row.t = static_cast<std::int64_t>(trace_.rows.size()) + 1;
    row.index = index;
    row.feedback = x;
    row.instant_regret = instant;
    row.cum_regret = cum_;
    row.arm = arm;
    trace_.rows.push_back(std::move(row));
  }

 private:
  RegretTrace& trace_;
  std::int64_t horizon_;
  double cum_ = 0.0;
};

}  // namespace

RegretTrace run_single(const ExperimentConfig& config, const ProtectedInstance& instance, int run_id) {
  RegretTrace trace;
  trace.run_id = run_id;
  trace.seed = config.base_seed + static_cast<std::uint64_t>(run_id);
  const auto start = std::chrono::steady_clock::now();
  try {
    const int d = instance.d();
    const int L = instance.L();
    ActionSampler sampler(instance.action_space(), d, trace.seed);
    Rng noise = make_stream(trace.seed, kNoiseStreamTag);
    Rng rng = make_stream(trace.seed, kPolicyStreamTag);
    TraceRecorder recorder(trace, config.horizon);
    const PolicyOptions options = policy_options(config, instance);

    std::unique_ptr<Policy> policy;
    switch (config.policy) {
      case PolicyKind::PLinUCB: {
        if (config.initial_state == InitialState::Example1Adversarial) {
          policy = wrap_policy(adversarial_example1_state(instance, options, config.example1_prior_rounds));
          break;
        }
        std::vector<int> subset;
        if (L > 0 && instance.s() > 0) {
          CoresetOptions co;
          co.delta = options.delta_split == DeltaSplit::PerVector ? config.delta / (L + 1) : config.delta;
          co.R = instance.R();
          co.M = instance.M();
          co.rho = config.coreset_rho;
          co.max_outer_rounds = config.coreset_max_outer_rounds;
          co.enumeration_cap = config.enumeration_cap;
          co.threshold_mode = config.threshold_mode;
          const QueryOracle oracle = [&](const Vec& e, int index) {
            const double x = feedback(instance, e, index, noise);
            if (config.charge_coreset && !recorder.full()) {
              const ArmSet arms = sampler.next();
              recorder.record(e, index, x, suboptimality(instance, e, arms));
            }
            return x;
          };
          const CoresetResult result = run_coreset(oracle, L, d, instance.s(), co);
          trace.coreset = CoresetReport{result.subset, result.score, result.outer_rounds, result.queries_spent};
          subset = result.subset;
        }
        policy = wrap_policy(make_plinucb_state(d, subset, L, instance.R(), instance.M(), options));
        break;
      }
      case PolicyKind::RRLinUCB:
      case PolicyKind::RRLinUCB2: {
        const EpsilonSchedule schedule = config.schedule.value_or(
            config.policy == PolicyKind::RRLinUCB ? EpsilonSchedule::InvSqrt : EpsilonSchedule::InvQuarter);
        policy = wrap_policy(make_round_robin_state(d, L, instance.R(), instance.M(), options, schedule,
                                                    config.epsilon));
        break;
      }
      case PolicyKind::EpsGreedy:
        policy = wrap_policy(make_eps_greedy_state(d, L, instance.s(), config.rho, config.epsilon));
        break;
    }

    while (!recorder.full()) {
      const ArmSet arms = sampler.next();
      const RoundOutcome out = policy->step(arms, instance, noise, rng);
      recorder.record(out.action.arm, out.action.index, out.feedback, out.suboptimality);
    }
  } catch (const std::exception& e) {
    trace.error = e.what();
  }
  trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

int effective_workers(int configured) {
  int workers = configured;
  if (const char* env = std::getenv("BANDITLAB_WORKERS")) {
    try {
      workers = std::stoi(env);
    } catch (const std::exception&) {
      throw InvalidInput(std::string("BANDITLAB_WORKERS must be an integer, got '") + env + "'");
    }
  }
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return workers;
}

std::vector<RegretTrace> run_experiment(const ExperimentConfig& config) {
  return run_experiment(config, build_instance(config));
}

std::vector<RegretTrace> run_experiment(const ExperimentConfig& config, const ProtectedInstance& instance) {
  std::vector<RegretTrace> traces(static_cast<std::size_t>(config.runs));
  const int workers = std::min(effective_workers(config.workers), config.runs);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int id = next++; id < config.runs; id = next++)
      traces[static_cast<std::size_t>(id)] = run_single(config, instance, id);
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return traces;
}

RegretSummary aggregate(const std::vector<RegretTrace>& traces) {
  if (traces.empty()) throw InvalidInput("aggregate: need at least one trace");
  const std::size_t T = traces.front().rows.size();
  for (const auto& tr : traces)
    if (tr.rows.size() != T) throw InvalidInput("aggregate: traces have mismatched horizons");
  const double n = static_cast<double>(traces.size());
  RegretSummary s;
  s.mean.assign(T, 0.0);
  s.std.assign(T, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    double sum = 0.0;
    for (const auto& tr : traces) sum += tr.rows[t].cum_regret;
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& tr : traces) ss += (tr.rows[t].cum_regret - mean) * (tr.rows[t].cum_regret - mean);
    s.mean[t] = mean;
    s.std[t] = traces.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return s;
}

std::string trace_to_csv(const RegretTrace& trace) {
  std::ostringstream out;
  const Eigen::Index d = trace.rows.empty() ? 0 : trace.rows.front().arm.size();
  out << "run_id,t,index,feedback,instant_regret,cum_regret";
  for (Eigen::Index i = 0; i < d; ++i) out << ",arm_" << i;
  out << '\n';
  for (const auto& row : trace.rows) {
    out << trace.run_id << ',' << row.t << ',' << row.index << ',' << format_double(row.feedback) << ','
        << format_double(row.instant_regret) << ',' << format_double(row.cum_regret);
    for (Eigen::Index i = 0; i < row.arm.size(); ++i) out << ',' << format_double(row.arm(i));
    out << '\n';
  }
  return out.str();
}

RegretTrace trace_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trace csv: empty input", 0);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) header.push_back(cell);
  }
  const std::vector<std::string> fixed{"run_id", "t", "index", "feedback", "instant_regret", "cum_regret"};
  if (header.size() < fixed.size() || !std::equal(fixed.begin(), fixed.end(), header.begin()))
    throw ParseError("trace csv: unexpected header", 0);
  const std::size_t d = header.size() - fixed.size();

  RegretTrace trace;
  long row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != header.size()) throw ParseError("trace csv: wrong column count", row_no);
    try {
      std::size_t pos = 0;
      auto num = [&](const std::string& s) {
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
      };
      trace.run_id = std::stoi(cells[0]);
      TraceRow row;
      row.t = std::stoll(cells[1]);
      row.index = std::stoi(cells[2]);
      row.feedback = num(cells[3]);
      row.instant_regret = num(cells[4]);
      row.cum_regret = num(cells[5]);
      row.arm.resize(static_cast<Eigen::Index>(d));
      for (std::size_t i = 0; i < d; ++i) row.arm(static_cast<Eigen::Index>(i)) = num(cells[6 + i]);
      trace.rows.push_back(std::move(row));
    } catch (const std::logic_error&) {
      throw ParseError("trace csv: non-numeric cell", row_no);
    }
  }
  return trace;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

void write_summary(const fs::path& path, const RegretSummary& s) {
  std::ostringstream out;
  out << "t,mean_cum_regret,std_cum_regret\n";
  for (std::size_t t = 0; t < s.mean.size(); ++t)
    out << (t + 1) << ',' << format_double(s.mean[t]) << ',' << format_double(s.std[t]) << '\n';
  write_text(path, out.str());
}

}  // namespace

void write_outputs(const std::string& dir, const std::vector<RegretTrace>& traces) {
  fs::create_directories(dir);
  json runs = json::array();
  std::vector<RegretTrace> ok;
  for (const auto& tr : traces) {
    json r{{"run_id", tr.run_id}, {"seed", tr.seed}, {"rounds", tr.rows.size()}, {"wall_seconds", tr.wall_seconds}};
    if (tr.coreset)
      r["coreset"] = {{"subset", tr.coreset->subset},
                      {"score", tr.coreset->score},
                      {"outer_rounds", tr.coreset->outer_rounds},
                      {"queries", tr.coreset->queries}};
    if (!tr.ok()) r["error"] = tr.error;
    runs.push_back(std::move(r));
    if (tr.ok()) {
      write_text(fs::path(dir) / ("trace_" + std::to_string(tr.run_id) + ".csv"), trace_to_csv(tr));
      ok.push_back(tr);
    }
  }
  write_text(fs::path(dir) / "runs.json", runs.dump(2) + "\n");
  if (!ok.empty()) write_summary(fs::path(dir) / "summary.csv", aggregate(ok));
}

RegretSummary aggregate_directory(const std::string& dir) {
  if (!fs::is_directory(dir)) throw InvalidInput("aggregate: '" + dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("trace_", 0) == 0 && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  if (files.empty()) throw InvalidInput("aggregate: no trace_*.csv files in '" + dir + "'");
  std::sort(files.begin(), files.end());
  std::vector<RegretTrace> traces;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    traces.push_back(trace_from_csv(buf.str()));
  }
  const RegretSummary s = aggregate(traces);
  write_summary(fs::path(dir) / "summary.csv", s);
  return s;
}

}  // namespace banditlab
