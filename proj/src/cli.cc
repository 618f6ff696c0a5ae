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

#include "relurep/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "relurep/errors.hpp"
#include "relurep/experiment.hpp"
#include "relurep/instance_io.hpp"
#include "relurep/text.hpp"

namespace relurep {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(); }

struct GenArgs {
  std::string kind = "rep";
  Eigen::Index d = 0;
  std::string n = "2d";
  Eigen::Index k = 0;
  std::string s = "0.02d";
  double gamma = 1.0;
  std::optional<double> nu;
  double delta = 0.0;
  std::string bias = "default";
  double outlier_magnitude = 5.0;
  std::uint64_t seed = 0;
  std::string out;
};

struct LearnArgs {
  std::string input;
  std::optional<double> gamma;
  std::optional<double> nu;
  std::string fill = "mid";
  std::string bias;
  double c0 = 2.0;
  std::string out;
};

struct RecoverArgs {
  std::string input;
  std::string lambda = "oracle";
  double tol = 1e-10;
  int max_iter = 1000;
  double c_tilde = 1.0;
  std::string out;
};

struct SweepArgs {
  std::string config;
  std::string output_dir;
  bool force = false;
};

struct DiagArgs {
  Eigen::Index d = 0;
  Eigen::Index k = 0;
  Eigen::Index s = 0;
  std::size_t samples = 100;
  double delta = 0.0;
  std::string bias = "default";
  std::uint64_t seed = 0;
  std::string out;
};

// Usage errors detected after CLI11 has accepted the arguments.
class UsageError : public Error {
 public:
  using Error::Error;
};

Eigen::Index resolve_rule(const std::string& flag, const std::string& value,
                          Eigen::Index d) {
  DimRule rule;
  if (!value.empty() && value.back() == 'd') {
    const auto f = text::parse_double(std::string_view(value).substr(0, value.size() - 1));
    if (!f || *f < 0.0) throw UsageError(flag + ": bad rule '" + value + "'");
    rule.factor_of_d = *f;
  } else {
    const auto x = text::parse_int(value);
    if (!x || *x < 0) throw UsageError(flag + ": bad value '" + value + "'");
    rule.values = {*x};
  }
  return rule.resolve(d).front();
}

int run_gen(const GenArgs& a, std::ostream& out) {
  if (a.kind == "rep") {
    const Eigen::Index n = resolve_rule("--n", a.n, a.d);
    const BiasModel model = resolve_rep_bias(a.bias, a.gamma);
    GenerationOptions opts;
    opts.target_nu = a.nu;
    const auto inst =
        generate_representation_instance({a.d, n, a.k, a.gamma}, model, a.seed, opts);
    save_instance(a.out, inst);
    out << "wrote representation instance d=" << a.d << " n=" << n
        << " k=" << a.k << " nu=" << text::format_double(inst.realized_nu)
        << " to " << a.out << "\n";
  } else if (a.kind == "recovery") {
    const Eigen::Index s = resolve_rule("--s", a.s, a.d);
    const auto inst = generate_recovery_instance(
        {a.d, a.k, s, a.delta, a.outlier_magnitude},
        resolve_recovery_bias(a.bias), a.seed);
    save_instance(a.out, inst);
    out << "wrote recovery instance d=" << a.d << " k=" << a.k << " s=" << s
        << " to " << a.out << "\n";
  } else {
    throw UsageError("--kind must be rep or recovery");
  }
  return 0;
}

int run_learn(const LearnArgs& a, std::ostream& out) {
  const auto inst = load_representation_instance(a.input);
  const double gamma = a.gamma.value_or(inst.gamma);
  const std::optional<double> nu = a.nu ? a.nu : std::optional<double>(inst.realized_nu);
  const BiasModel model =
      a.bias.empty() ? inst.bias : resolve_rep_bias(a.bias, gamma);
  const FillStrategy fill = parse_fill_strategy(a.fill);
  const auto res = run_rep_learning(inst, model, gamma, nu, fill, a.c0);

  const fs::path dir = a.out;
  write_matrix_csv(dir / "m_hat.csv", res.estimate.M_hat);
  std::string beta;
  for (const auto& b : res.estimate.beta_hats) {
    beta += b ? text::format_double(*b) : std::string();
    beta += '\n';
  }
  write_text_file(dir / "beta_hat.csv", beta);
  write_matrix_csv(dir / "u_hat.csv", res.estimated.U);

  Json j;
  j["frob_err_sq"] = res.frob_err_sq;
  j["bound"] = res.rep_bound ? Json(*res.rep_bound) : Json();
  j["sin_theta"] = res.sin_theta;
  j["procrustes_err"] = res.procrustes_err;
  j["total_loglik"] = number_or_null(res.estimate.total_loglik.to_double());
  j["bound_vacuous"] = !res.rep_bound.has_value();
  j["yu_bound"] = res.yu_bound;
  j["nu"] = res.nu;
  j["beta"] = res.constants.beta;
  j["lipschitz"] = res.constants.lipschitz;
  j["omega"] = res.constants.omega;
  write_text_file(dir / "report.json", j.dump(2) + "\n");
  out << j.dump(2) << "\n";
  return 0;
}

int run_recover(const RecoverArgs& a, std::ostream& out) {
  LambdaMode mode = LambdaMode::kExplicit;
  double lambda = 0.0;
  if (a.lambda == "oracle") {
    mode = LambdaMode::kOracle;
  } else if (a.lambda == "agnostic") {
    mode = LambdaMode::kAgnostic;
  } else {
    const auto x = text::parse_double(a.lambda);
    if (!x || !(*x > 0.0) || !std::isfinite(*x)) {
      throw UsageError("--lambda must be a positive real, oracle or agnostic");
    }
    lambda = *x;
  }
  const auto inst = load_recovery_instance(a.input);
  const auto stats = compute_nonlinearity_stats(inst.bias);
  const auto res =
      run_recovery(inst, stats, mode, lambda, a.tol, a.max_iter, a.c_tilde);

  const fs::path dir = a.out;
  write_vector_csv(dir / "c_hat.csv", res.solution.c_hat);
  write_vector_csv(dir / "e_hat.csv", res.solution.e_hat);
  std::string trace = "iteration,objective\n";
  for (std::size_t i = 0; i < res.solution.objective_trace.size(); ++i) {
    trace += std::to_string(i + 1) + ',' +
             text::format_double(res.solution.objective_trace[i]) + '\n';
  }
  write_text_file(dir / "trace.csv", trace);

  Json j;
  j["error"] = res.error_bound.error;
  j["bound"] = res.error_bound.bound;
  j["mu"] = stats.mu;
  j["sigma"] = stats.sigma;
  j["eta"] = stats.eta;
  j["lambda_used"] = res.lambda_used;
  j["lambda_mode"] = to_string(mode);
  j["iterations"] = res.solution.iterations;
  j["converged"] = res.solution.converged;
  j["kkt_c"] = res.kkt.stationarity_c;
  j["kkt_e"] = res.kkt.stationarity_e;
  write_text_file(dir / "report.json", j.dump(2) + "\n");
  out << j.dump(2) << "\n";
  return 0;
}

int run_sweep_cmd(const SweepArgs& a, std::ostream& out) {
  ExperimentConfig cfg = load_config(a.config);
  if (!a.output_dir.empty()) cfg.output_dir = a.output_dir;
  const fs::path results = cfg.output_dir / "results.csv";
  if (!a.force && fs::exists(results)) {
    throw UsageError(results.string() + " already exists (use --force)");
  }
  const auto records = run_sweep(cfg);
  emit_results(records, cfg.output_dir, a.force);
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.error.empty() ? 0 : 1;
  out << "ran " << records.size() << " cells (" << failed << " failed); wrote "
      << results.string() << "\n";
  return 0;
}

int run_diag(const DiagArgs& a, std::ostream& out) {
  const auto res = run_diagnostics(a.d, a.k, a.s, a.delta,
                                   resolve_recovery_bias(a.bias), 5.0,
                                   a.samples, a.seed);
  Json j;
  j["d"] = a.d;
  j["k"] = a.k;
  j["s"] = a.s;
  j["num_checked"] = res.report.num_checked;
  j["num_violations"] = res.report.num_violations;
  j["min_ratio"] = number_or_null(res.report.min_ratio.to_double());
  j["lambda"] = res.lambda;
  j["sigma"] = res.stats.sigma;
  j["eta"] = res.stats.eta;
  if (!a.out.empty()) {
    write_text_file(fs::path(a.out) / "report.json", j.dump(2) + "\n");
  }
  out << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out,
                 std::ostream& err) {
  CLI::App app{"relurep: ReLU representation learning and robust recovery"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a synthetic instance");
  g->add_option("--kind", gen.kind, "rep or recovery")->capture_default_str();
  g->add_option("--d", gen.d, "output dimension")->required()->check(CLI::Range(2, 1 << 24));
  g->add_option("--n", gen.n, "observations (number or rule like 2d)")->capture_default_str();
  g->add_option("--k", gen.k, "latent dimension")->required()->check(CLI::PositiveNumber);
  g->add_option("--s", gen.s, "outliers (number or rule like 0.02d)")->capture_default_str();
  g->add_option("--gamma", gen.gamma)->capture_default_str()->check(CLI::PositiveNumber);
  g->add_option("--nu", gen.nu, "redraw until the margin reaches this");
  g->add_option("--delta", gen.delta)->capture_default_str()->check(CLI::NonNegativeNumber);
  g->add_option("--bias", gen.bias, "bias config string")->capture_default_str();
  g->add_option("--outlier-magnitude", gen.outlier_magnitude)->capture_default_str();
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--out", gen.out, "output directory")->required();

  LearnArgs learn;
  auto* l = app.add_subcommand("learn-rep", "estimate M and its column space from Y");
  l->add_option("--input", learn.input, "instance directory")->required();
  l->add_option("--gamma", learn.gamma, "default: manifest value");
  l->add_option("--nu", learn.nu, "default: manifest value");
  l->add_option("--fill", learn.fill, "upper, lower or mid")
      ->capture_default_str()
      ->check(CLI::IsMember({"upper", "lower", "mid"}));
  l->add_option("--bias", learn.bias, "default: manifest value");
  l->add_option("--c0", learn.c0)->capture_default_str()->check(CLI::PositiveNumber);
  l->add_option("--out", learn.out, "output directory")->required();

  RecoverArgs rec;
  auto* r = app.add_subcommand("recover", "robust LASSO recovery of c");
  r->add_option("--input", rec.input, "instance directory")->required();
  r->add_option("--lambda", rec.lambda, "real, oracle or agnostic")->capture_default_str();
  r->add_option("--tol", rec.tol)->capture_default_str()->check(CLI::PositiveNumber);
  r->add_option("--max-iter", rec.max_iter)->capture_default_str()->check(CLI::PositiveNumber);
  r->add_option("--c-tilde", rec.c_tilde)->capture_default_str()->check(CLI::PositiveNumber);
  r->add_option("--out", rec.out, "output directory")->required();

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "run a configured parameter sweep");
  sw->add_option("--config", sweep.config, "key = value config file")->required();
  sw->add_option("--output-dir", sweep.output_dir, "overrides output_dir");
  sw->add_flag("--force", sweep.force, "overwrite existing results");

  DiagArgs diag;
  auto* dg = app.add_subcommand("diag", "restricted-set lower bound check");
  dg->add_option("--d", diag.d)->required()->check(CLI::Range(2, 1 << 24));
  dg->add_option("--k", diag.k)->required()->check(CLI::PositiveNumber);
  dg->add_option("--s", diag.s)->required()->check(CLI::NonNegativeNumber);
  dg->add_option("--samples", diag.samples)->capture_default_str()->check(CLI::PositiveNumber);
  dg->add_option("--delta", diag.delta)->capture_default_str()->check(CLI::NonNegativeNumber);
  dg->add_option("--bias", diag.bias)->capture_default_str();
  dg->add_option("--seed", diag.seed)->capture_default_str();
  dg->add_option("--out", diag.out, "optional output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*g) return run_gen(gen, out);
    if (*l) return run_learn(learn, out);
    if (*r) return run_recover(rec, out);
    if (*sw) return run_sweep_cmd(sweep, out);
    if (*dg) return run_diag(diag, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidArgumentError& e) {
    err << "invalid argument: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace relurep
