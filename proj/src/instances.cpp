#include "banditlab/instances.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "banditlab/errors.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

Vec polar_unit(double angle) {
  Vec u(2);
  u << std::cos(angle), std::sin(angle);
  return u;
}

ProtectedInstance gen_synthetic(int d, int L, int s, double M, double R, std::uint64_t seed,
                                ActionSpaceSpec action_space) {
  constexpr int kMaxProtected = 64;
  constexpr int kMaxDraws = 100;
  if (d < 1) throw InvalidInput("gen_synthetic: d must be >= 1");
  if (L < 0 || L > kMaxProtected) throw InvalidInput("gen_synthetic: L must lie in [0, 64]");
  if (s < 0 || s > L || s > d) throw InvalidInput("gen_synthetic: need 0 <= s <= min(L, d)");
  if (L > 0 && s == 0) throw InvalidInput("gen_synthetic: s must be >= 1 when L >= 1");
  if (!(M > 0.0)) throw InvalidInput("gen_synthetic: M must be > 0");

  Rng rng = make_stream(seed, 0x5EED'0001ull);
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    Mat directions(d, s);
    for (int j = 0; j < s; ++j) directions.col(j) = gaussian_vector(d, rng);
    std::vector<Vec> protected_vectors;
    protected_vectors.reserve(static_cast<std::size_t>(L));
    bool degenerate = false;
    for (int i = 0; i < L; ++i) {
      Vec v = directions * gaussian_vector(s, rng);
      const double n = v.norm();
      if (!(n > 1e-12)) {
        degenerate = true;
        break;
      }
      protected_vectors.push_back(v * (M / n));
    }
    Vec theta0 = random_unit_vector(d, rng) * M;
    if (degenerate) continue;
    if (orth_basis(protected_vectors).cols() != s) continue;
    try {
      return ProtectedInstance(std::move(theta0), std::move(protected_vectors), M, R, s, action_space);
    } catch (const DegenerateInstance&) {
      continue;
    }
  }
  throw GenerationError("gen_synthetic: could not draw a rank-" + std::to_string(s) + " instance in " +
                        std::to_string(kMaxDraws) + " attempts");
}

LowerBoundPair gen_lower_bound(std::int64_t horizon, std::uint64_t seed, double R) {
  if (horizon < 256) throw InvalidInput("gen_lower_bound: horizon must be >= 256");
  const double alpha = std::pow(static_cast<double>(horizon), -0.25);
  const Vec theta0 = polar_unit(std::numbers::pi / 2.0 - alpha);
  const ActionSpaceSpec space = ActionSpaceSpec::lower_bound_pair(alpha, seed);
  LowerBoundPair pair;
  pair.alpha = alpha;
  pair.seed = seed;
  pair.instance1 = ProtectedInstance(theta0, {polar_unit(0.0)}, 1.0, R, 1, space);
  pair.instance2 = ProtectedInstance(theta0, {polar_unit(-alpha)}, 1.0, R, 1, space);
  return pair;
}

ProtectedInstance gen_example1(double R) {
  const double quarter = std::numbers::pi / 4.0;
  return ProtectedInstance(polar_unit(quarter), {polar_unit(0.0)}, 1.0, R, 1,
                           ActionSpaceSpec::finite_fixed({polar_unit(quarter), polar_unit(2.0 * quarter)}));
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out = s.substr(b, e - b);
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      cell.push_back(c);
    } else if (c == ',' && !quoted) {
      cells.push_back(trim(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

bool is_missing(const std::string& cell) {
  return cell.empty() || cell == "NA" || cell == "N/A" || cell == "NaN" || cell == "nan" || cell == "?";
}

double parse_number(const std::string& cell, long row, const std::string& column) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size() || !std::isfinite(v))
    throw ParseError("row " + std::to_string(row) + ": non-numeric value '" + cell + "' in column '" + column + "'", row);
  return v;
}

double parse_flag(const std::string& cell, long row, const std::string& column) {
  std::string lower = cell;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "true" || lower == "yes") return 1.0;
  if (lower == "false" || lower == "no") return 0.0;
  const double v = parse_number(cell, row, column);
  if (v != 0.0 && v != 1.0)
    throw ParseError("row " + std::to_string(row) + ": stability must be boolean, got '" + cell + "'", row);
  return v;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log_likelihood(const Mat& X, const Vec& y, const Vec& w) {
  const Vec z = X * w;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    // log σ(z) = -log(1 + e^{-z}); log(1 - σ(z)) = -log(1 + e^{z})
    const double lp = -std::log1p(std::exp(-std::abs(z(i)))) + std::min(z(i), 0.0);
    const double lq = -std::log1p(std::exp(-std::abs(z(i)))) + std::min(-z(i), 0.0);
    ll += y(i) * lp + (1.0 - y(i)) * lq;
  }
  return ll;
}

struct LogisticFit {
  Vec w;
  int iterations = 0;
};

// Damped Newton (IRLS) for the maximum-likelihood logistic coefficients.
LogisticFit fit_logistic(const Mat& X, const Vec& y) {
  constexpr int kMaxIterations = 100;
  constexpr double kTol = 1e-8;
  const Eigen::Index d = X.cols();
  Vec w = Vec::Zero(d);
  double ll = log_likelihood(X, y, w);
  for (int it = 1; it <= kMaxIterations; ++it) {
    const Vec z = X * w;
    Vec p(z.size()), weights(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      p(i) = sigmoid(z(i));
      weights(i) = p(i) * (1.0 - p(i));
    }
    const Vec grad = X.transpose() * (y - p);
    Mat hess = X.transpose() * weights.asDiagonal() * X;
    hess.diagonal().array() += 1e-10;
    Eigen::LLT<Mat> llt(hess);
    if (llt.info() != Eigen::Success) throw GenerationError("logistic fit: singular Hessian");
    const Vec step = llt.solve(grad);
    double scale = 1.0;
    Vec next = w + step;
    double next_ll = log_likelihood(X, y, next);
    while (next_ll < ll && scale > 1e-6) {
      scale *= 0.5;
      next = w + scale * step;
      next_ll = log_likelihood(X, y, next);
    }
    const double moved = (next - w).norm();
    w = next;
    ll = next_ll;
    if (moved <= kTol * (1.0 + w.norm())) return {w, it};
  }
  throw GenerationError("logistic fit did not converge in 100 iterations (separable or degenerate labels)");
}

}  // namespace

DatasetInstance ingest_dataset(const std::string& csv_path, const DatasetConfig& config) {
  if (config.dose_columns.empty()) throw InvalidInput("ingest_dataset: no dose columns configured");
  std::ifstream in(csv_path);
  if (!in) throw InvalidInput("ingest_dataset: cannot open '" + csv_path + "'");

  std::string line;
  if (!std::getline(in, line)) throw ParseError("ingest_dataset: empty file", 1);
  const std::vector<std::string> header = split_csv_line(line);
  std::unordered_map<std::string, std::size_t> column_index;
  for (std::size_t j = 0; j < header.size(); ++j) column_index.emplace(header[j], j);
  auto lookup = [&](const std::string& name) {
    auto it = column_index.find(name);
    if (it == column_index.end()) throw ParseError("ingest_dataset: missing column '" + name + "'", 1);
    return it->second;
  };
  std::vector<std::size_t> dose_idx;
  for (const auto& c : config.dose_columns) dose_idx.push_back(lookup(c));
  const std::size_t inr_idx = lookup(config.inr_column);
  const std::size_t stab_idx = lookup(config.stability_column);
  const int d = static_cast<int>(dose_idx.size());

  DatasetInstanceReport report;
  std::vector<Vec> arms_all;
  std::vector<double> inr, stability;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    ++report.rows_read;
    const std::vector<std::string> cells = split_csv_line(line);
    auto cell_at = [&](std::size_t j) -> std::string { return j < cells.size() ? cells[j] : std::string(); };
    bool missing = false;
    for (std::size_t j : dose_idx) missing = missing || is_missing(cell_at(j));
    missing = missing || is_missing(cell_at(inr_idx)) || is_missing(cell_at(stab_idx));
    if (missing) {
      ++report.rows_dropped;
      std::cerr << "ingest_dataset: dropping row " << row << " (missing values)\n";
      continue;
    }
    Vec dose(d);
    for (int j = 0; j < d; ++j) dose(j) = parse_number(cell_at(dose_idx[static_cast<std::size_t>(j)]), row, config.dose_columns[static_cast<std::size_t>(j)]);
    const double inr_value = parse_number(cell_at(inr_idx), row, config.inr_column);
    const double stab_value = parse_flag(cell_at(stab_idx), row, config.stability_column);
    const double n = dose.norm();
    if (!(n > 0.0)) {
      ++report.rows_dropped;
      std::cerr << "ingest_dataset: dropping row " << row << " (zero dose vector)\n";
      continue;
    }
    arms_all.push_back(dose / n);
    inr.push_back(inr_value);
    stability.push_back(stab_value);
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(arms_all.size());
  report.rows_used = static_cast<long>(rows);
  if (rows < 2) throw GenerationError("ingest_dataset: fewer than two usable rows");

  Mat X(rows, d);
  Vec y_inr(rows), y_stab(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    X.row(i) = arms_all[static_cast<std::size_t>(i)].transpose();
    y_inr(i) = inr[static_cast<std::size_t>(i)] - config.inr_target;
    y_stab(i) = stability[static_cast<std::size_t>(i)];
  }
  if (orth_basis(Mat(X.transpose())).cols() < 2) throw GenerationError("ingest_dataset: dose design has rank < 2");

  const double ridge = config.ridge > 0.0 ? config.ridge : 1e-3 * static_cast<double>(rows);
  Mat gram = X.transpose() * X;
  gram.diagonal().array() += ridge;
  Vec theta1 = spd_solve(gram, X.transpose() * y_inr);
  const Vec inr_residual = y_inr - X * theta1;
  report.inr_residual_norm = inr_residual.norm();
  const double mean_res = inr_residual.mean();
  report.residual_std = std::sqrt((inr_residual.array() - mean_res).square().sum() / static_cast<double>(rows - 1));

  const double positives = y_stab.sum();
  if (positives == 0.0 || positives == static_cast<double>(rows))
    throw GenerationError("ingest_dataset: stability column is constant; logistic fit is degenerate");
  LogisticFit fit = fit_logistic(X, y_stab);
  report.logistic_iterations = fit.iterations;
  {
    Vec p(rows);
    const Vec z = X * fit.w;
    for (Eigen::Index i = 0; i < rows; ++i) p(i) = sigmoid(z(i));
    report.stability_residual_norm = (y_stab - p).norm();
  }

  auto cap = [&](Vec v) {
    const double n = v.norm();
    if (n > config.M) v *= config.M / n;
    return v;
  };
  Vec theta0 = cap(fit.w);
  theta1 = cap(theta1);
  if (!(theta1.norm() > 0.0)) throw GenerationError("ingest_dataset: INR fit is identically zero");

  std::vector<Vec> arms;
  for (const Vec& a : arms_all) {
    bool duplicate = false;
    for (const Vec& kept : arms) {
      if ((kept - a).cwiseAbs().maxCoeff() <= 1e-12) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) arms.push_back(a);
  }
  report.arms = static_cast<long>(arms.size());
  report.theta0 = theta0;
  report.theta1 = theta1;

  const double R = config.R > 0.0 ? config.R : report.residual_std;
  DatasetInstance out{ProtectedInstance(theta0, {theta1}, config.M, R, 1, ActionSpaceSpec::finite_fixed(std::move(arms))),
                      report};
  return out;
}

}  // namespace banditlab
