// Copyright 2026 The ppegmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Batch front end for the private mixture-estimation toolkit. Exit codes
// are a stable contract: 0 success/released, 2 private failure, 1 error.
// Every command is a pure function of its flags (notably --seed); there is
// no environment-variable configuration.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <Eigen/Dense>

#include "CLI11.hpp"
#include "ppegmm/audit.hpp"
#include "ppegmm/errors.hpp"
#include "ppegmm/gmm.hpp"
#include "ppegmm/gmm_learn.hpp"
#include "ppegmm/io.hpp"
#include "ppegmm/linalg.hpp"
#include "ppegmm/masking.hpp"
#include "ppegmm/metrics.hpp"
#include "ppegmm/ppe.hpp"
#include "ppegmm/random.hpp"
#include "ppegmm/version.hpp"

namespace {

using namespace ppegmm;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBot = 2;

struct GenArgs {
  int k = 1;
  int d = 1;
  long long n = 0;
  double separation = 10.0;
  std::uint64_t seed = 0;
  std::string out_data;
  std::string out_truth;
};

int run_gen(const GenArgs& args) {
  RandomStream stream(args.seed);
  RandomStream truth_stream = stream.substream(0);
  RandomStream data_stream = stream.substream(1);
  const Gmm truth =
      make_separated_gmm(args.k, args.d, args.separation, truth_stream);
  if (args.n < 1) {
    throw InvalidArgument("gen: --n must be positive");
  }
  const Eigen::MatrixXd data =
      sample_gmm(truth, static_cast<std::size_t>(args.n), data_stream);
  save_dataset(data, args.out_data);
  save_gmm_json(truth, args.out_truth);
  return kExitOk;
}

struct FitArgs {
  std::string data_path;
  int k = 1;
  double epsilon = 1.0;
  double delta = 1e-6;
  double alpha = 0.1;
  double beta = 0.1;
  double c2 = kDefaultC2;
  std::uint64_t seed = 0;
  int t_override = 0;
  int threads = 1;
  bool unsafe_diagnostics = false;
  bool timings = false;
  double reg = 0.0;
  int restarts = 2;
  int max_iters = 100;
  double tol = 1e-7;
};

void write_gmm_fields(JsonWriter& w, const Gmm& g) {
  w.raw(serialize_gmm_json(g));
}

int run_fit(const FitArgs& args) {
  int d = 0;
  int t = args.t_override;
  std::string outcome = "error";
  std::string error_message;
  PrivateFitResult result;
  bool have_result = false;

  try {
    const Eigen::MatrixXd data = load_dataset(args.data_path);
    d = static_cast<int>(data.cols());
    PrivateFitOptions opts;
    opts.calib.alpha = args.alpha;
    opts.calib.beta = args.beta;
    opts.calib.epsilon = args.epsilon;
    opts.calib.delta = args.delta;
    opts.calib.k = args.k;
    opts.calib.d = d;
    opts.calib.c2 = args.c2;
    opts.learner.k = args.k;
    opts.learner.max_iters = args.max_iters;
    opts.learner.restarts = args.restarts;
    opts.learner.tol = args.tol;
    opts.learner.reg = args.reg;
    opts.t_override = args.t_override;
    opts.threads = args.threads;
    RandomStream stream(args.seed);
    result = fit_gmm_private(data, opts, stream);
    have_result = true;
    t = result.ppe.t;
    outcome = result.outcome.released ? "released" : "bot";
  } catch (const std::exception& e) {
    error_message = e.what();
  }

  JsonWriter w(17);
  w.begin_object();
  w.key("tool").value("ppe fit");
  w.key("version").value(kVersion);
  w.key("config").begin_object();
  w.key("data").value(args.data_path);
  w.key("k").value(args.k);
  w.key("d").value(d);
  w.key("epsilon").value(args.epsilon);
  w.key("delta").value(args.delta);
  w.key("alpha").value(args.alpha);
  w.key("beta").value(args.beta);
  w.key("c2").value(args.c2);
  w.key("t").value(t);
  w.key("seed").value(static_cast<long long>(args.seed));
  w.key("learner").begin_object();
  w.key("max_iters").value(args.max_iters);
  w.key("restarts").value(args.restarts);
  w.key("tol").value(args.tol);
  w.key("reg").value(args.reg);
  w.end_object();
  w.end_object();
  if (have_result) {
    w.key("calibration").begin_object();
    w.key("gamma").value(result.gamma);
    w.key("epsilon_mask").value(result.epsilon_mask);
    w.key("eta_w").value(result.mask.eta_w);
    w.key("eta_mean").value(result.mask.eta_mean);
    w.key("eta_cov").value(result.mask.eta_cov);
    w.key("r").value(result.ppe.r);
    w.key("z").value(result.ppe.z);
    w.key("threshold").value(result.outcome.diag.threshold);
    w.end_object();
  }
  w.key("outcome").value(outcome);
  if (have_result) {
    w.key("q_noised").value(result.outcome.diag.q_noised);
    if (result.outcome.released) {
      w.key("released");
      write_gmm_fields(w, *result.outcome.value);
    }
    if (args.unsafe_diagnostics) {
      const PpeDiagnostics& diag = result.outcome.diag;
      w.key("diagnostics").begin_object();
      w.key("q_mean").value(diag.q_mean);
      w.key("failed_chunks").value(diag.failed_chunks);
      w.key("selected_chunk").value(diag.selected_index);
      w.key("q_values").begin_array();
      for (double q : diag.q_values) {
        w.value(q);
      }
      w.end_array();
      w.end_object();
    }
    if (args.timings) {
      const PpeDiagnostics& diag = result.outcome.diag;
      w.key("timings").begin_object();
      w.key("learn_seconds").value(diag.learn_seconds);
      w.key("distance_seconds").value(diag.distance_seconds);
      w.key("mask_seconds").value(diag.mask_seconds);
      w.end_object();
    }
  }
  if (!error_message.empty()) {
    w.key("error").value(error_message);
  }
  w.end_object();
  std::cout << w.str() << "\n";

  if (outcome == "released") {
    return kExitOk;
  }
  if (outcome == "bot") {
    return kExitBot;
  }
  std::cerr << "error: " << error_message << "\n";
  return kExitError;
}

struct CalibrateArgs {
  double alpha = 0.1;
  double beta = 0.1;
  double epsilon = 0.1;
  double delta = 1e-6;
  int k = 1;
  int d = 1;
  double c2 = kDefaultC2;
};

int run_calibrate(const CalibrateArgs& args) {
  CalibrationInput inp;
  inp.alpha = args.alpha;
  inp.beta = args.beta;
  inp.epsilon = args.epsilon;
  inp.delta = args.delta;
  inp.k = args.k;
  inp.d = args.d;
  inp.c2 = args.c2;
  validate(inp);
  const int t_min = min_subsets(inp.epsilon, inp.delta);
  const double epsilon_composed =
      compose_epsilon(inp.k, inp.epsilon, inp.delta);
  try {
    const double gamma = calibrate_gamma(inp);
    const MaskConfig mask = calibrate_mask_config(inp);
    JsonWriter w(12);
    w.begin_object();
    w.key("gamma").value(gamma);
    w.key("t_min").value(t_min);
    w.key("eta_w").value(mask.eta_w);
    w.key("eta_mean").value(mask.eta_mean);
    w.key("eta_cov").value(mask.eta_cov);
    w.key("epsilon_composed").value(epsilon_composed);
    w.end_object();
    std::cout << w.str() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    // The budget-independent outputs are still well defined; print them
    // next to the verbatim calibration error.
    JsonWriter w(12);
    w.begin_object();
    w.key("t_min").value(t_min);
    w.key("epsilon_composed").value(epsilon_composed);
    w.key("error").value(std::string(e.what()));
    w.end_object();
    std::cout << w.str() << "\n";
    std::cerr << e.what() << "\n";
    return kExitError;
  }
}

struct DistArgs {
  std::string path_a;
  std::string path_b;
};

int run_dist(const DistArgs& args) {
  const Gmm a = load_gmm_json(args.path_a);
  const Gmm b = load_gmm_json(args.path_b);
  std::cout << format_double(dist_mixture(a, b), 12) << "\n";
  return kExitOk;
}

struct AuditCommonArgs {
  long long trials = 0;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct AuditConcentrationArgs {
  std::string gmm_path;
  double alpha = 0.1;
  double beta = 0.1;
  double eta_w = 0.0;
  double eta_mean = 0.0;
  double eta_cov = 0.0;
  double epsilon = 0.0;  // > 0 switches to calibrated noise scales
  double delta = 1e-6;
  double c2 = kDefaultC2;
  AuditCommonArgs common{2000, 0, 1};
};

int emit_report(const AuditReport& report) {
  std::cout << serialize_audit_report(report) << "\n";
  return report.passed ? kExitOk : kExitError;
}

int run_audit_concentration(const AuditConcentrationArgs& args) {
  const Gmm reference = load_gmm_json(args.gmm_path);
  MaskConfig mask;
  if (args.epsilon > 0.0) {
    CalibrationInput inp;
    inp.alpha = args.alpha;
    inp.beta = args.beta;
    inp.epsilon = args.epsilon;
    inp.delta = args.delta;
    inp.k = reference.k();
    inp.d = reference.d();
    inp.c2 = args.c2;
    mask = calibrate_mask_config(inp);
  } else {
    mask.eta_w = args.eta_w;
    mask.eta_mean = args.eta_mean;
    mask.eta_cov = args.eta_cov;
  }
  const GmmMasker masker = [mask](const Gmm& g, RandomStream& stream) {
    return mask_gmm(g, mask, stream);
  };
  RandomStream stream(args.common.seed);
  return emit_report(audit_concentration(masker, reference, args.alpha,
                                         args.beta, args.common.trials, stream,
                                         args.common.threads));
}

struct AuditIndistArgs {
  std::string gmm_path;
  std::string gmm_prime_path;
  double alpha = 0.1;
  double beta = 0.1;
  double epsilon = 0.1;
  double delta = 1e-6;
  double c2 = kDefaultC2;
  double gamma = 0.0;  // > 0 overrides calibrate_gamma
  AuditCommonArgs common{10000, 0, 1};
};

int run_audit_indistinguishability(const AuditIndistArgs& args) {
  const Gmm f = load_gmm_json(args.gmm_path);
  CalibrationInput inp;
  inp.alpha = args.alpha;
  inp.beta = args.beta;
  inp.epsilon = args.epsilon;
  inp.delta = args.delta;
  inp.k = f.k();
  inp.d = f.d();
  inp.c2 = args.c2;
  const double gamma =
      args.gamma > 0.0 ? args.gamma : calibrate_gamma(inp);
  const MaskConfig mask = calibrate_mask_config(inp);
  Gmm f_prime = f;
  if (!args.gmm_prime_path.empty()) {
    f_prime = load_gmm_json(args.gmm_prime_path);
  } else {
    // Default neighbor: shift the first mean by gamma/2 in standardized
    // units, the midpoint of the audited radius.
    std::vector<Component> comps = f.components();
    Eigen::VectorXd direction = Eigen::VectorXd::Zero(f.d());
    direction(0) = 1.0;
    comps[0].mu += 0.5 * gamma * psd_sqrt(comps[0].sigma) * direction;
    f_prime = Gmm::from_components(std::move(comps));
  }
  const double epsilon_target = compose_epsilon(f.k(), args.epsilon, args.delta);
  const double delta_target = f.k() * args.delta + args.delta;
  const GmmMasker masker = [mask](const Gmm& g, RandomStream& stream) {
    return mask_gmm(g, mask, stream);
  };
  RandomStream stream(args.common.seed);
  return emit_report(audit_indistinguishability(
      masker, f, f_prime, gamma, epsilon_target, delta_target,
      args.common.trials, stream, args.common.threads));
}

struct AuditTriangleArgs {
  int k = 2;
  int d = 2;
  double r = 1.0;
  double z = 1.5;
  AuditCommonArgs common{1000, 0, 1};
};

int run_audit_triangle(const AuditTriangleArgs& args) {
  SemimetricParams params;
  params.r = args.r;
  params.z = args.z;
  const TripleSampler sampler =
      make_restricted_triple_sampler(args.k, args.d, params);
  RandomStream stream(args.common.seed);
  return emit_report(audit_triangle(sampler, params, args.common.trials,
                                    stream, args.common.threads));
}

void add_common_audit_flags(CLI::App* cmd, AuditCommonArgs* common) {
  cmd->add_option("--trials", common->trials, "Trial count");
  cmd->add_option("--seed", common->seed, "Master seed");
  cmd->add_option("--threads", common->threads, "Worker thread cap");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private Gaussian-mixture estimation toolkit"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand(
      "gen", "Sample a separated mixture dataset plus ground-truth JSON");
  gen->add_option("--k", gen_args.k, "Component count")->required();
  gen->add_option("--d", gen_args.d, "Dimension")->required();
  gen->add_option("--n", gen_args.n, "Point count")->required();
  gen->add_option("--separation", gen_args.separation,
                  "Pairwise mean separation");
  gen->add_option("--seed", gen_args.seed, "Master seed");
  gen->add_option("--out-data", gen_args.out_data,
                  "Dataset path (.csv for text, else binary)")
      ->required();
  gen->add_option("--out-truth", gen_args.out_truth, "Truth mixture JSON path")
      ->required();

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand(
      "fit", "Privately fit a mixture; prints a run record to stdout");
  fit->add_option("--data", fit_args.data_path, "Dataset path")->required();
  fit->add_option("--k", fit_args.k, "Component count")->required();
  fit->add_option("--epsilon", fit_args.epsilon, "Privacy budget epsilon");
  fit->add_option("--delta", fit_args.delta, "Privacy budget delta");
  fit->add_option("--alpha", fit_args.alpha, "Target accuracy");
  fit->add_option("--beta", fit_args.beta, "Failure probability");
  fit->add_option("--c2", fit_args.c2, "Masking-radius constant");
  fit->add_option("--seed", fit_args.seed, "Master seed");
  fit->add_option("--t", fit_args.t_override,
                  "Chunk count override (0 = derive from epsilon, delta)");
  fit->add_option("--threads", fit_args.threads, "Worker thread cap");
  fit->add_flag("--unsafe-diagnostics", fit_args.unsafe_diagnostics,
                "Include non-private internals in the run record");
  fit->add_flag("--timings", fit_args.timings,
                "Include per-phase wall times in the run record");
  fit->add_option("--reg", fit_args.reg,
                  "Covariance ridge (0 = automatic scale)");
  fit->add_option("--restarts", fit_args.restarts, "Learner restarts");
  fit->add_option("--max-iters", fit_args.max_iters, "Learner iteration cap");
  fit->add_option("--tol", fit_args.tol, "Learner convergence tolerance");

  CalibrateArgs calibrate_args;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Print calibration outputs for one parameter set");
  calibrate->add_option("--alpha", calibrate_args.alpha, "Target accuracy");
  calibrate->add_option("--beta", calibrate_args.beta, "Failure probability");
  calibrate->add_option("--epsilon", calibrate_args.epsilon,
                        "Per-component privacy budget");
  calibrate->add_option("--delta", calibrate_args.delta, "Privacy delta");
  calibrate->add_option("--k", calibrate_args.k, "Component count");
  calibrate->add_option("--d", calibrate_args.d, "Dimension");
  calibrate->add_option("--c2", calibrate_args.c2, "Masking-radius constant");

  DistArgs dist_args;
  CLI::App* dist = app.add_subcommand(
      "dist", "Print the mixture distance between two mixture JSON files");
  dist->add_option("--a", dist_args.path_a, "First mixture")->required();
  dist->add_option("--b", dist_args.path_b, "Second mixture")->required();

  CLI::App* audit = app.add_subcommand("audit", "Empirical statistical audits");
  audit->require_subcommand(1);

  AuditConcentrationArgs conc_args;
  CLI::App* conc = audit->add_subcommand(
      "concentration", "Masked-output distance concentration");
  conc->add_option("--gmm", conc_args.gmm_path, "Reference mixture JSON")
      ->required();
  conc->add_option("--alpha", conc_args.alpha, "Distance threshold")
      ->required();
  conc->add_option("--beta", conc_args.beta, "Claimed exceedance bound");
  conc->add_option("--eta-w", conc_args.eta_w, "Weight noise scale");
  conc->add_option("--eta-mean", conc_args.eta_mean, "Mean noise scale");
  conc->add_option("--eta-cov", conc_args.eta_cov, "Covariance noise scale");
  conc->add_option("--epsilon", conc_args.epsilon,
                   "Calibrate noise scales at this budget instead");
  conc->add_option("--delta", conc_args.delta, "Privacy delta (calibrated)");
  conc->add_option("--c2", conc_args.c2, "Masking-radius constant");
  add_common_audit_flags(conc, &conc_args.common);

  AuditIndistArgs indist_args;
  CLI::App* indist = audit->add_subcommand(
      "indistinguishability",
      "Empirical privacy lower bound for the calibrated masker");
  indist->add_option("--gmm", indist_args.gmm_path, "Mixture JSON")->required();
  indist->add_option("--gmm-prime", indist_args.gmm_prime_path,
                     "Neighbor mixture JSON (default: auto perturbation)");
  indist->add_option("--alpha", indist_args.alpha, "Target accuracy");
  indist->add_option("--beta", indist_args.beta, "Failure probability");
  indist->add_option("--epsilon", indist_args.epsilon,
                     "Per-component privacy budget")
      ->required();
  indist->add_option("--delta", indist_args.delta, "Privacy delta");
  indist->add_option("--c2", indist_args.c2, "Masking-radius constant");
  indist->add_option("--gamma", indist_args.gamma,
                     "Neighbor radius override (default: calibrated)");
  add_common_audit_flags(indist, &indist_args.common);

  AuditTriangleArgs tri_args;
  CLI::App* tri = audit->add_subcommand(
      "triangle", "Restricted approximate triangle inequality sampling");
  tri->add_option("--k", tri_args.k, "Component count");
  tri->add_option("--d", tri_args.d, "Dimension");
  tri->add_option("--r", tri_args.r, "Restriction radius");
  tri->add_option("--z", tri_args.z, "Approximation factor");
  add_common_audit_flags(tri, &tri_args.common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(gen_args);
    if (fit->parsed()) return run_fit(fit_args);
    if (calibrate->parsed()) return run_calibrate(calibrate_args);
    if (dist->parsed()) return run_dist(dist_args);
    if (audit->parsed()) {
      if (conc->parsed()) return run_audit_concentration(conc_args);
      if (indist->parsed()) return run_audit_indistinguishability(indist_args);
      if (tri->parsed()) return run_audit_triangle(tri_args);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  std::cerr << "error: no subcommand\n";
  return kExitError;
}
