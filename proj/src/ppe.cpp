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

#include "ppegmm/ppe.hpp"

#include <algorithm>
#include <cmath>

namespace ppegmm {

namespace {

constexpr double kEpsilonCap = 0.23104906018664842;  // ln(2)/3

double ln_noise_term(double epsilon, double delta) {
  return std::log1p(std::expm1(epsilon) / (2.0 * delta));
}

}  // namespace

void validate(const PpeConfig& cfg) {
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) {
    throw InvalidArgument("PpeConfig: epsilon must be positive");
  }
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
    throw InvalidArgument("PpeConfig: delta must be in (0, 1)");
  }
  if (!(cfg.r > 0.0) || !std::isfinite(cfg.r)) {
    throw InvalidArgument("PpeConfig: r must be positive");
  }
  if (!(cfg.z >= 1.0) || !std::isfinite(cfg.z)) {
    throw InvalidArgument("PpeConfig: z must be >= 1");
  }
  if (cfg.t <= 5) {
    throw InvalidArgument("PpeConfig: t must exceed 5");
  }
}

double ppe_threshold(int t, double epsilon, double delta) {
  if (t < 1) throw InvalidArgument("ppe_threshold: t must be >= 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("ppe_threshold: epsilon must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgument("ppe_threshold: delta must be in (0, 1)");
  }
  return 0.8 + 2.0 / (t * epsilon) * ln_noise_term(epsilon, delta);
}

int min_subsets(double epsilon, double delta) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("min_subsets: epsilon must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgument("min_subsets: delta must be in (0, 1)");
  }
  const double bound = 20.0 / epsilon * ln_noise_term(epsilon, delta);
  const double t = std::ceil(bound);
  return std::max(6, static_cast<int>(t));
}

double compose_epsilon(int k, double epsilon, double delta_prime) {
  if (k < 1) throw InvalidArgument("compose_epsilon: k must be >= 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("compose_epsilon: epsilon must be positive");
  }
  if (!(delta_prime > 0.0 && delta_prime < 1.0)) {
    throw InvalidArgument("compose_epsilon: delta_prime must be in (0, 1)");
  }
  return std::sqrt(2.0 * k * std::log(1.0 / delta_prime)) * epsilon +
         k * epsilon * std::expm1(epsilon);
}

void validate(const CalibrationInput& inp) {
  if (!(inp.alpha > 0.0 && inp.alpha < 1.0)) {
    throw InvalidArgument("CalibrationInput: alpha must be in (0, 1)");
  }
  if (!(inp.beta > 0.0 && inp.beta < 1.0)) {
    throw InvalidArgument("CalibrationInput: beta must be in (0, 1)");
  }
  if (!(inp.epsilon > 0.0) || !std::isfinite(inp.epsilon)) {
    throw InvalidArgument("CalibrationInput: epsilon must be positive");
  }
  if (!(inp.delta > 0.0 && inp.delta < 1.0)) {
    throw InvalidArgument("CalibrationInput: delta must be in (0, 1)");
  }
  if (inp.k < 1) throw InvalidArgument("CalibrationInput: k must be >= 1");
  if (inp.d < 1) throw InvalidArgument("CalibrationInput: d must be >= 1");
  if (!(inp.c2 > 0.0) || !std::isfinite(inp.c2)) {
    throw InvalidArgument("CalibrationInput: c2 must be positive");
  }
}

double calibrate_gamma(const CalibrationInput& inp) {
  validate(inp);
  if (inp.epsilon >= kEpsilonCap) {
    std::ostringstream msg;
    msg << "calibrate_gamma: epsilon " << inp.epsilon
        << " must be below ln(2)/3 = " << kEpsilonCap;
    throw EpsilonTooLarge(msg.str());
  }
  const double k = inp.k;
  const double d = inp.d;
  const double denom = inp.c2 * std::sqrt(k * std::log(2.0 / inp.delta)) *
                       std::sqrt(d * d * (d + std::log(12.0 * k / inp.beta))) *
                       std::log(12.0 * k / inp.delta);
  return inp.epsilon * inp.alpha / denom;
}

MaskConfig calibrate_mask_config(const CalibrationInput& inp) {
  const double gamma = calibrate_gamma(inp);  // also validates epsilon cap
  const double per_term = inp.alpha / 3.0;
  const double l = std::sqrt(2.0 * std::log(6.0 * inp.k / inp.beta));
  const double sqrt_d = std::sqrt(static_cast<double>(inp.d));
  const double b = sqrt_d * (sqrt_d + l);
  MaskConfig cfg;
  cfg.eta_w = per_term / l;
  cfg.eta_mean = per_term / (sqrt_d + l);
  cfg.eta_cov = per_term / (2.0 * b + b * b);
  const double eps_comp =
      inp.epsilon / std::sqrt(2.0 * inp.k * std::log(2.0 / inp.delta));
  const double floor =
      gamma * std::sqrt(2.0 * std::log(1.25 * inp.k / inp.delta)) / eps_comp;
  if (floor > cfg.eta_w || floor > cfg.eta_mean || floor > cfg.eta_cov) {
    std::ostringstream msg;
    msg << "calibrate_mask_config: masking floor " << floor
        << " exceeds a concentration ceiling (eta_w " << cfg.eta_w
        << ", eta_mean " << cfg.eta_mean << ", eta_cov " << cfg.eta_cov
        << "); widen alpha or the privacy budget";
    throw Infeasible(msg.str());
  }
  return cfg;
}

std::vector<double> agreement_scores(
    int t, const std::function<double(int, int)>& pair_dist, double cutoff,
    int threads) {
  if (t < 1) throw InvalidArgument("agreement_scores: t must be >= 1");
  if (!(cutoff >= 0.0)) {
    throw InvalidArgument("agreement_scores: cutoff must be >= 0");
  }
  // Upper triangle of the match indicator, computed once per pair; entry
  // ownership keeps the parallel loop deterministic.
  std::vector<char> match(static_cast<std::size_t>(t) * t, 0);
  parallel_for(static_cast<std::size_t>(t), threads, [&](std::size_t i) {
    for (int j = static_cast<int>(i) + 1; j < t; ++j) {
      const double dist = pair_dist(static_cast<int>(i), j);
      match[i * t + j] = std::isfinite(dist) && dist <= cutoff ? 1 : 0;
    }
  });
  std::vector<int> counts(t, 1);  // self always matches
  for (int i = 0; i < t; ++i) {
    for (int j = i + 1; j < t; ++j) {
      if (match[static_cast<std::size_t>(i) * t + j]) {
        ++counts[i];
        ++counts[j];
      }
    }
  }
  std::vector<double> q(t);
  for (int i = 0; i < t; ++i) q[i] = static_cast<double>(counts[i]) / t;
  return q;
}

PrivateFitResult fit_gmm_private(const Eigen::MatrixXd& data,
                                 const PrivateFitOptions& opts,
                                 RandomStream& stream) {
  validate(opts.calib);
  validate(opts.learner);
  if (opts.learner.k != opts.calib.k) {
    throw InvalidArgument("fit_gmm_private: learner k differs from calib k");
  }
  if (data.cols() != opts.calib.d) {
    std::ostringstream msg;
    msg << "fit_gmm_private: data dimension " << data.cols()
        << " does not match configured d = " << opts.calib.d;
    throw DimensionMismatch(msg.str());
  }

  PrivateFitResult result;
  result.ppe.epsilon = opts.calib.epsilon;
  result.ppe.delta = opts.calib.delta;
  result.ppe.z = 1.5;
  result.ppe.r = std::min(2.0 * result.ppe.z * opts.calib.alpha, 1.0);
  result.ppe.t = opts.t_override > 0
                     ? opts.t_override
                     : min_subsets(opts.calib.epsilon, opts.calib.delta);

  CalibrationInput mask_calib = opts.calib;
  mask_calib.alpha = opts.calib.alpha / (2.0 * result.ppe.z);
  mask_calib.epsilon = std::min(opts.calib.epsilon, 0.99 * kEpsilonCap);
  result.epsilon_mask = mask_calib.epsilon;
  result.gamma = calibrate_gamma(mask_calib);
  result.mask = calibrate_mask_config(mask_calib);

  const Eigen::Index m = data.rows();
  const Eigen::Index min_chunk =
      static_cast<Eigen::Index>(10) * opts.calib.k * opts.calib.d;
  if (m < static_cast<Eigen::Index>(result.ppe.t) * min_chunk) {
    std::ostringstream msg;
    msg << "fit_gmm_private: need at least t * 10*k*d = "
        << static_cast<long long>(result.ppe.t) * min_chunk << " points, got "
        << m;
    throw InsufficientData(msg.str());
  }

  const LearnerOptions learner_opts = opts.learner;
  const MaskConfig mask_cfg = result.mask;
  result.outcome = ppe_run(
      data,
      [&learner_opts](const Eigen::MatrixXd& chunk, RandomStream& sub) {
        return em_fit(chunk, learner_opts, sub);
      },
      [](const Gmm& a, const Gmm& b) { return dist_mixture(a, b); },
      [&mask_cfg](const Gmm& g, RandomStream& sub) {
        return mask_gmm(g, mask_cfg, sub);
      },
      result.ppe, stream, opts.threads);
  return result;
}

}  // namespace ppegmm
