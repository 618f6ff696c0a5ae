// Copyright 2026 The relurep Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relurep/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "relurep/errors.hpp"
#include "relurep/instance_io.hpp"
#include "relurep/text.hpp"

namespace relurep {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// ----- config parsing helpers -----

double parse_real(const std::string& key, std::string_view value) {
  const auto x = text::parse_double(value);
  if (!x || !std::isfinite(*x)) {
    throw ConfigError(key, "expected a real number, got '" +
                               std::string(value) + "'");
  }
  return *x;
}

std::int64_t parse_integer(const std::string& key, std::string_view value,
                           std::int64_t min) {
  const auto x = text::parse_int(value);
  if (!x) {
    throw ConfigError(key,
                      "expected an integer, got '" + std::string(value) + "'");
  }
  if (*x < min) {
    throw ConfigError(key, "must be >= " + std::to_string(min));
  }
  return *x;
}

std::vector<Eigen::Index> parse_index_list(const std::string& key,
                                           std::string_view value,
                                           std::int64_t min) {
  std::vector<Eigen::Index> out;
  for (auto item : text::split(value, ',')) {
    out.push_back(parse_integer(key, text::trim(item), min));
  }
  return out;
}

DimRule parse_dim_rule(const std::string& key, std::string_view value,
                       std::int64_t min) {
  DimRule rule;
  if (!value.empty() && value.back() == 'd') {
    const double f = parse_real(key, value.substr(0, value.size() - 1));
    if (!(f >= 0.0)) throw ConfigError(key, "rule factor must be >= 0");
    rule.factor_of_d = f;
  } else {
    rule.values = parse_index_list(key, value, min);
  }
  return rule;
}

// "1,2,3", "1..20" or a mix of both.
std::vector<std::uint64_t> parse_seeds(std::string_view value) {
  const std::string key = "seeds";
  std::vector<std::uint64_t> out;
  for (auto raw : text::split(value, ',')) {
    const auto item = text::trim(raw);
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      const auto x = text::parse_uint(item);
      if (!x) throw ConfigError(key, "bad seed '" + std::string(item) + "'");
      out.push_back(*x);
      continue;
    }
    const auto lo = text::parse_uint(item.substr(0, dots));
    const auto hi = text::parse_uint(item.substr(dots + 2));
    if (!lo || !hi || *hi < *lo) {
      throw ConfigError(key, "bad seed range '" + std::string(item) + "'");
    }
    if (*hi - *lo > 1000000) throw ConfigError(key, "seed range too long");
    for (std::uint64_t s = *lo; s <= *hi; ++s) out.push_back(s);
  }
  std::set<std::uint64_t> unique(out.begin(), out.end());
  if (unique.size() != out.size()) throw ConfigError(key, "seeds must be distinct");
  return out;
}

std::string format_opt(const std::optional<double>& x) {
  return x ? text::format_double(*x) : std::string();
}

template <class I>
std::string format_opt_int(const std::optional<I>& x) {
  return x ? std::to_string(*x) : std::string();
}

// Linear interpolation between order statistics.
double quantile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

Json median_iqr(const std::vector<double>& xs) {
  Json j;
  if (xs.empty()) {
    j["median"] = nullptr;
    j["iqr"] = nullptr;
    return j;
  }
  j["median"] = quantile(xs, 0.5);
  j["iqr"] = quantile(xs, 0.75) - quantile(xs, 0.25);
  return j;
}

}  // namespace

std::string to_string(Task task) {
  switch (task) {
    case Task::kRepLearning:
      return "rep_learning";
    case Task::kRobustRecovery:
      return "robust_recovery";
    case Task::kDiagnostics:
      return "diagnostics";
  }
  return "rep_learning";
}

std::vector<Eigen::Index> DimRule::resolve(Eigen::Index d) const {
  if (!factor_of_d) return values;
  const double x = *factor_of_d * static_cast<double>(d);
  return {static_cast<Eigen::Index>(std::ceil(x - 1e-9))};
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string lambda_value = "oracle";
  for (auto raw : text::split(text, '\n')) {
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), "expected 'key = value'");
    }
    const std::string key(text::trim(line.substr(0, eq)));
    const std::string_view value = text::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(key, "empty key");
    if (!seen.insert(key).second) throw ConfigError(key, "given more than once");
    if (value.empty()) throw ConfigError(key, "empty value");

    if (key == "task") {
      if (value == "rep_learning") {
        cfg.task = Task::kRepLearning;
      } else if (value == "robust_recovery") {
        cfg.task = Task::kRobustRecovery;
      } else if (value == "diagnostics") {
        cfg.task = Task::kDiagnostics;
      } else {
        throw ConfigError(key, "expected rep_learning, robust_recovery or "
                               "diagnostics, got '" + std::string(value) + "'");
      }
    } else if (key == "d") {
      cfg.d = parse_index_list(key, value, 2);
    } else if (key == "n") {
      cfg.n = parse_dim_rule(key, value, 1);
    } else if (key == "k") {
      cfg.k = parse_index_list(key, value, 1);
    } else if (key == "s") {
      cfg.s = parse_dim_rule(key, value, 0);
    } else if (key == "gamma") {
      cfg.gamma = parse_real(key, value);
      if (!(cfg.gamma > 0.0)) throw ConfigError(key, "must be > 0");
    } else if (key == "nu") {
      if (value != "auto") {
        cfg.nu = parse_real(key, value);
        if (!(*cfg.nu > 0.0)) throw ConfigError(key, "must be > 0");
      }
    } else if (key == "delta") {
      cfg.delta = parse_real(key, value);
      if (!(cfg.delta >= 0.0)) throw ConfigError(key, "must be >= 0");
    } else if (key == "bias") {
      cfg.bias = std::string(value);
    } else if (key == "lambda") {
      lambda_value = std::string(value);
    } else if (key == "seeds") {
      cfg.seeds = parse_seeds(value);
    } else if (key == "fill") {
      try {
        cfg.fill = parse_fill_strategy(value);
      } catch (const Error& e) {
        throw ConfigError(key, e.what());
      }
    } else if (key == "output_dir") {
      cfg.output_dir = std::string(value);
    } else if (key == "outlier_magnitude") {
      cfg.outlier_magnitude = parse_real(key, value);
      if (!(cfg.outlier_magnitude >= 0.0)) throw ConfigError(key, "must be >= 0");
    } else if (key == "c0") {
      cfg.c0 = parse_real(key, value);
      if (!(cfg.c0 > 0.0)) throw ConfigError(key, "must be > 0");
    } else if (key == "c_tilde") {
      cfg.c_tilde = parse_real(key, value);
      if (!(cfg.c_tilde > 0.0)) throw ConfigError(key, "must be > 0");
    } else if (key == "tol") {
      cfg.tol = parse_real(key, value);
      if (!(cfg.tol > 0.0)) throw ConfigError(key, "must be > 0");
    } else if (key == "max_iter") {
      cfg.max_iter = static_cast<int>(parse_integer(key, value, 1));
    } else if (key == "samples") {
      cfg.samples = static_cast<std::size_t>(parse_integer(key, value, 1));
    } else {
      throw ConfigError(key, "unknown key");
    }
  }

  if (!seen.contains("task")) throw ConfigError("task", "missing");
  if (cfg.d.empty()) throw ConfigError("d", "missing");
  if (cfg.k.empty()) throw ConfigError("k", "missing");
  if (cfg.seeds.empty()) throw ConfigError("seeds", "missing");
  if (!cfg.n.factor_of_d && cfg.n.values.empty()) throw ConfigError("n", "empty");
  if (!cfg.s.factor_of_d && cfg.s.values.empty()) throw ConfigError("s", "empty");
  if (cfg.nu && *cfg.nu > 2.0 * cfg.gamma) {
    throw ConfigError("nu", "must not exceed 2 gamma");
  }

  if (lambda_value == "oracle") {
    cfg.lambda_mode = LambdaMode::kOracle;
  } else if (lambda_value == "agnostic") {
    cfg.lambda_mode = LambdaMode::kAgnostic;
  } else {
    cfg.lambda_mode = LambdaMode::kExplicit;
    cfg.lambda = parse_real("lambda", lambda_value);
    if (!(cfg.lambda > 0.0)) throw ConfigError("lambda", "must be > 0");
  }

  try {
    if (cfg.task == Task::kRepLearning) {
      (void)resolve_rep_bias(cfg.bias, cfg.gamma);
    } else {
      (void)resolve_recovery_bias(cfg.bias);
    }
  } catch (const Error& e) {
    throw ConfigError("bias", e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

BiasModel resolve_rep_bias(const std::string& bias, double gamma) {
  if (bias == "default") return BiasModel::default_for_gamma(gamma);
  if (bias.rfind("const:", 0) == 0) {
    throw InvalidArgumentError(
        "representation learning needs a random bias law, not a constant");
  }
  return BiasModel::parse(bias);
}

BiasSpec resolve_recovery_bias(const std::string& bias) {
  if (bias == "default") return ConstantBias{0.0};
  return parse_bias_spec(bias);
}

RepOutcome run_rep_learning(const GenerativeInstance& instance,
                            const BiasModel& model, double gamma,
                            std::optional<double> nu, FillStrategy fill,
                            double c0, Execution exec) {
  RepOutcome out;
  out.nu = nu ? *nu : instance.realized_nu;
  out.estimate = reconstruct_matrix(instance.Y, model, gamma, out.nu, fill, exec);
  out.constants = compute_bias_constants(model, gamma, out.nu);
  const Matrix E = out.estimate.M_hat - instance.M;
  out.frob_err_sq = E.squaredNorm();
  try {
    out.rep_bound = theoretical_rep_bound(out.constants, instance.d(), c0);
  } catch (const VacuousBoundError&) {
    out.rep_bound.reset();
  }
  const Eigen::Index k = instance.k();
  out.truth = truncated_svd(instance.M, k);
  out.estimated = truncated_svd(out.estimate.M_hat, k);
  out.sin_theta = sin_theta_distance(out.truth.U, out.estimated.U);
  out.procrustes_err = procrustes_align(out.truth.U, out.estimated.U).error;
  out.yu_bound = subspace_perturbation_bound(out.truth.S(0), out.truth.S(k - 1),
                                             E.norm());
  return out;
}

RecoveryOutcome run_recovery(const RecoveryInstance& instance,
                             const NonlinearityStats& stats, LambdaMode mode,
                             double explicit_lambda, double tol, int max_iter,
                             double c_tilde) {
  RecoveryOutcome out;
  switch (mode) {
    case LambdaMode::kExplicit:
      if (!(explicit_lambda > 0.0)) {
        throw InvalidArgumentError("explicit lambda must be > 0");
      }
      out.lambda_used = explicit_lambda;
      break;
    case LambdaMode::kOracle:
      out.lambda_used = oracle_lambda(instance, stats);
      break;
    case LambdaMode::kAgnostic:
      out.lambda_used = agnostic_lambda(instance.d(), stats.sigma, instance.delta);
      break;
  }
  const LassoConfig cfg{out.lambda_used, mode, tol, max_iter};
  out.solution = solve_robust_lasso(instance.v, instance.A, cfg);
  out.error_bound =
      recovery_error_and_bound(out.solution, instance, stats, c_tilde);
  out.kkt = kkt_residuals(instance.v, instance.A, out.solution, out.lambda_used);
  return out;
}

DiagnosticsOutcome run_diagnostics(Eigen::Index d, Eigen::Index k,
                                   Eigen::Index s, double delta,
                                   const BiasSpec& bias,
                                   double outlier_magnitude,
                                   std::size_t samples, std::uint64_t seed) {
  DiagnosticsOutcome out;
  out.instance = generate_recovery_instance({d, k, s, delta, outlier_magnitude},
                                            bias, seed);
  out.stats = compute_nonlinearity_stats(bias);
  out.lambda = oracle_lambda(out.instance, out.stats);
  RestrictedSetParams params;
  params.lambda = out.lambda;
  params.sigma = out.stats.sigma;
  params.eta = out.stats.eta;
  params.support = out.instance.support;
  params.at_w_inf_norm =
      (out.instance.A.transpose() * out.instance.w).lpNorm<Eigen::Infinity>();
  out.report = check_restricted_lower_bound(out.instance.A, samples, params, seed);
  return out;
}

std::vector<ResultRecord> run_sweep(const ExperimentConfig& config,
                                    Execution exec) {
  // Expand the grid in declaration order; this fixes the CSV row order.
  std::vector<ResultRecord> jobs;
  for (Eigen::Index d : config.d) {
    std::vector<std::optional<Eigen::Index>> ns{std::nullopt};
    std::vector<std::optional<Eigen::Index>> ss{std::nullopt};
    if (config.task == Task::kRepLearning) {
      ns.clear();
      for (auto n : config.n.resolve(d)) ns.emplace_back(n);
    } else {
      ss.clear();
      for (auto s : config.s.resolve(d)) ss.emplace_back(s);
    }
    for (const auto& n : ns) {
      for (Eigen::Index k : config.k) {
        for (const auto& s : ss) {
          for (std::uint64_t seed : config.seeds) {
            ResultRecord r;
            r.task = config.task;
            r.d = d;
            r.n = n;
            r.k = k;
            r.s = s;
            r.gamma = config.gamma;
            r.nu = config.nu;
            r.delta = config.delta;
            r.bias = config.bias;
            r.lambda_mode = to_string(config.lambda_mode);
            r.fill = to_string(config.fill);
            r.seed = seed;
            jobs.push_back(std::move(r));
          }
        }
      }
    }
  }

  std::optional<BiasModel> rep_model;
  std::optional<BiasSpec> rec_bias;
  std::optional<NonlinearityStats> stats;
  if (config.task == Task::kRepLearning) {
    rep_model = resolve_rep_bias(config.bias, config.gamma);
  } else {
    rec_bias = resolve_recovery_bias(config.bias);
    stats = compute_nonlinearity_stats(*rec_bias);
  }

  auto run_cell = [&](ResultRecord& r) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if (config.task == Task::kRepLearning) {
        GenerationOptions gen;
        gen.target_nu = config.nu;
        const auto inst = generate_representation_instance(
            {r.d, *r.n, r.k, config.gamma}, *rep_model, r.seed, gen);
        // Cells already run in parallel; keep each one serial inside.
        const auto out = run_rep_learning(inst, *rep_model, config.gamma,
                                          config.nu, config.fill, config.c0,
                                          Execution::kSerial);
        r.frob_err_sq = out.frob_err_sq;
        r.rep_bound = out.rep_bound;
        r.rep_bound_vacuous = !out.rep_bound.has_value();
        r.sin_theta = out.sin_theta;
        r.procrustes_err = out.procrustes_err;
        r.yu_bound = out.yu_bound;
        r.realized_nu = inst.realized_nu;
        r.total_loglik = out.estimate.total_loglik.to_double();
      } else if (config.task == Task::kRobustRecovery) {
        const auto inst = generate_recovery_instance(
            {r.d, r.k, *r.s, config.delta, config.outlier_magnitude}, *rec_bias,
            r.seed);
        const auto out = run_recovery(inst, *stats, config.lambda_mode,
                                      config.lambda, config.tol,
                                      config.max_iter, config.c_tilde);
        r.recovery_error = out.error_bound.error;
        r.recovery_bound = out.error_bound.bound;
        r.mu = stats->mu;
        r.sigma = stats->sigma;
        r.eta = stats->eta;
        r.lambda_used = out.lambda_used;
        r.iterations = out.solution.iterations;
        r.converged = out.solution.converged;
      } else {
        const auto out =
            run_diagnostics(r.d, r.k, *r.s, config.delta, *rec_bias,
                            config.outlier_magnitude, config.samples, r.seed);
        r.mu = out.stats.mu;
        r.sigma = out.stats.sigma;
        r.eta = out.stats.eta;
        r.lambda_used = out.lambda;
        r.num_checked = out.report.num_checked;
        r.num_violations = out.report.num_violations;
        r.min_ratio = out.report.min_ratio.to_double();
      }
    } catch (const std::exception& e) {
      r.error = e.what();
    } catch (...) {
      r.error = "unknown error";
    }
    const auto stop = std::chrono::steady_clock::now();
    r.wall_time_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
  };

  const auto count = static_cast<std::int64_t>(jobs.size());
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) run_cell(jobs[i]);
  } else {
    for (std::int64_t i = 0; i < count; ++i) run_cell(jobs[i]);
  }
  return jobs;
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> columns = {
      "task",          "d",              "n",
      "k",             "s",              "gamma",
      "nu",            "delta",          "bias",
      "lambda_mode",   "fill",           "seed",
      "frob_err_sq",   "rep_bound",      "rep_bound_vacuous",
      "sin_theta",     "procrustes_err", "yu_bound",
      "realized_nu",   "total_loglik",   "recovery_error",
      "recovery_bound", "mu",            "sigma",
      "eta",           "lambda_used",    "iterations",
      "converged",     "num_checked",    "num_violations",
      "min_ratio",     "error"};
  return columns;
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(value);
  }
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string results_csv(const std::vector<ResultRecord>& records) {
  std::string out;
  const auto& cols = result_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i > 0) out += ',';
    out += cols[i];
  }
  out += '\n';
  for (const auto& r : records) {
    const std::vector<std::string> fields = {
        to_string(r.task),
        std::to_string(r.d),
        format_opt_int(r.n),
        std::to_string(r.k),
        format_opt_int(r.s),
        text::format_double(r.gamma),
        format_opt(r.nu),
        text::format_double(r.delta),
        r.bias,
        r.lambda_mode,
        r.fill,
        std::to_string(r.seed),
        format_opt(r.frob_err_sq),
        format_opt(r.rep_bound),
        r.task == Task::kRepLearning && r.error.empty()
            ? (r.rep_bound_vacuous ? "true" : "false")
            : "",
        format_opt(r.sin_theta),
        format_opt(r.procrustes_err),
        format_opt(r.yu_bound),
        format_opt(r.realized_nu),
        format_opt(r.total_loglik),
        format_opt(r.recovery_error),
        format_opt(r.recovery_bound),
        format_opt(r.mu),
        format_opt(r.sigma),
        format_opt(r.eta),
        format_opt(r.lambda_used),
        format_opt_int(r.iterations),
        r.converged ? (*r.converged ? "true" : "false") : "",
        format_opt_int(r.num_checked),
        format_opt_int(r.num_violations),
        format_opt(r.min_ratio),
        r.error};
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out += ',';
      out += csv_field(fields[i]);
    }
    out += '\n';
  }
  return out;
}

std::string timings_csv(const std::vector<ResultRecord>& records) {
  std::string out = "task,d,n,k,s,seed,wall_time_ms\n";
  for (const auto& r : records) {
    out += to_string(r.task) + ',' + std::to_string(r.d) + ',' +
           format_opt_int(r.n) + ',' + std::to_string(r.k) + ',' +
           format_opt_int(r.s) + ',' + std::to_string(r.seed) + ',' +
           text::format_double(r.wall_time_ms) + '\n';
  }
  return out;
}

std::string summary_json(const std::vector<ResultRecord>& records) {
  using Key = std::tuple<Eigen::Index, std::optional<Eigen::Index>,
                         Eigen::Index, std::optional<Eigen::Index>>;
  std::vector<Key> order;
  std::map<Key, std::vector<const ResultRecord*>> groups;
  for (const auto& r : records) {
    const Key key{r.d, r.n, r.k, r.s};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  const Task task = records.empty() ? Task::kRepLearning : records.front().task;
  Json root;
  root["task"] = to_string(task);
  const char* metric = task == Task::kRepLearning      ? "frob_err_sq"
                       : task == Task::kRobustRecovery ? "recovery_error"
                                                       : "num_violations";
  root["error_metric"] = metric;
  Json list = Json::array();
  for (const auto& key : order) {
    const auto& rs = groups.at(key);
    std::vector<double> errors;
    std::vector<double> ratios;
    std::size_t failed = 0;
    for (const auto* r : rs) {
      if (!r->error.empty()) {
        ++failed;
        continue;
      }
      std::optional<double> err;
      std::optional<double> bound;
      if (task == Task::kRepLearning) {
        err = r->frob_err_sq;
        bound = r->rep_bound;
      } else if (task == Task::kRobustRecovery) {
        err = r->recovery_error;
        bound = r->recovery_bound;
      } else if (r->num_violations) {
        err = static_cast<double>(*r->num_violations);
      }
      if (err) errors.push_back(*err);
      if (err && bound && *bound > 0.0) ratios.push_back(*err / *bound);
    }
    Json g;
    g["d"] = std::get<0>(key);
    g["n"] = std::get<1>(key) ? Json(*std::get<1>(key)) : Json();
    g["k"] = std::get<2>(key);
    g["s"] = std::get<3>(key) ? Json(*std::get<3>(key)) : Json();
    g["runs"] = rs.size();
    g["failed"] = failed;
    g["error"] = median_iqr(errors);
    g["error_over_bound"] = median_iqr(ratios);
    list.push_back(std::move(g));
  }
  root["groups"] = std::move(list);
  return root.dump(2) + "\n";
}

void emit_results(const std::vector<ResultRecord>& records,
                  const fs::path& output_dir, bool force) {
  if (records.empty()) throw InvalidArgumentError("no records to emit");
  const fs::path results = output_dir / "results.csv";
  if (!force && fs::exists(results)) {
    throw IoError(results.string() + " already exists (use --force)");
  }
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) {
    throw IoError("cannot create " + output_dir.string() + ": " + ec.message());
  }
  write_text_file(results, results_csv(records));
  write_text_file(output_dir / "summary.json", summary_json(records));
  write_text_file(output_dir / "timings.csv", timings_csv(records));
}

}  // namespace relurep
