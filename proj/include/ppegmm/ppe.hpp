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
// The private populous estimator: split the data into t chunks, run a
// non-private learner per chunk, privately test that most chunk outputs
// agree within r/2z, then release a noise-masked representative that
// agrees with more than 60% of them; fail closed otherwise. Also the
// closed-form bookkeeping: failure threshold, minimum subset count,
// composed privacy budget and noise-scale calibration.

#ifndef PPEGMM_PPE_HPP_
#define PPEGMM_PPE_HPP_

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ppegmm/gmm_learn.hpp"
#include "ppegmm/masking.hpp"
#include "ppegmm/metrics.hpp"
#include "ppegmm/parallel.hpp"
#include "ppegmm/random.hpp"

namespace ppegmm {

// Parameters of one private estimation run.
struct PpeConfig {
  double epsilon = 1.0;
  double delta = 1e-6;
  double r = 1.0;  // agreement radius; the pairwise cutoff is r/(2z)
  double z = 1.5;  // triangle-inequality approximation factor
  int t = 6;       // chunk count; must exceed 5
};

void validate(const PpeConfig& cfg);

struct PpeDiagnostics {
  std::vector<double> q_values;  // per-chunk agreement fractions
  double q_mean = 0.0;
  double q_noised = 0.0;  // q_mean plus truncated-Laplace noise
  double threshold = 0.0;
  int selected_index = -1;  // 0-based chunk index; -1 unless released
  int failed_chunks = 0;    // chunks whose learner raised an Error
  double learn_seconds = 0.0;
  double distance_seconds = 0.0;
  double mask_seconds = 0.0;
};

// Released(value) or the failure symbol (released == false), plus
// diagnostics that are always populated. The failure branch is taken
// exactly when q_noised < threshold.
template <typename Y>
struct PpeOutcome {
  bool released = false;
  std::optional<Y> value;
  PpeDiagnostics diag;
};

// Failure threshold 0.8 + (2/(t*epsilon)) * ln(1 + (e^epsilon - 1)/(2*delta)).
double ppe_threshold(int t, double epsilon, double delta);

// Smallest chunk count t satisfying both the utility bound
// t >= (20/epsilon) * ln(1 + (e^epsilon - 1)/(2*delta)) and t > 5.
int min_subsets(double epsilon, double delta);

// Advanced-composition budget for k independent (epsilon, delta) maskers:
// sqrt(2k ln(1/delta_prime)) * epsilon + k * epsilon * (e^epsilon - 1); the
// composed mechanism carries delta budget k*delta + delta_prime.
double compose_epsilon(int k, double epsilon, double delta_prime);

inline constexpr double kDefaultC2 = 16.0;

// Inputs shared by the calibration formulas.
struct CalibrationInput {
  double alpha = 0.1;   // target accuracy, in (0, 1)
  double beta = 0.1;    // failure probability, in (0, 1)
  double epsilon = 0.1;
  double delta = 1e-6;
  int k = 1;
  int d = 1;
  double c2 = kDefaultC2;
};

void validate(const CalibrationInput& inp);

// Masking radius
//   gamma = epsilon*alpha / (c2 * sqrt(k ln(2/delta))
//           * sqrt(d^2 (d + ln(12k/beta))) * ln(12k/delta)).
// Requires epsilon < ln(2)/3 (throws EpsilonTooLarge).
double calibrate_gamma(const CalibrationInput& inp);

// Noise scales meeting two constraints at once: a per-sub-masker floor
// eta >= gamma * sqrt(2 ln(1.25k/delta)) / eps_comp with
// eps_comp = epsilon / sqrt(2k ln(2/delta)), so perturbing the input by up
// to gamma stays hidden at the per-component budget; and concentration
// ceilings splitting alpha in thirds across the weight/mean/covariance
// distance terms at the (6k)-way union-bounded Gaussian quantile
// L = sqrt(2 ln(6k/beta)):
//   eta_w    * L                    <= alpha/3
//   eta_mean * (sqrt(d) + L)        <= alpha/3
//   eta_cov  * (2*B + B^2)          <= alpha/3,  B = sqrt(d)*(sqrt(d) + L).
// Returns the ceiling values (the most noise concentration permits);
// throws Infeasible when the floor exceeds any ceiling.
MaskConfig calibrate_mask_config(const CalibrationInput& inp);

// q_i = (1/t) * |{j : pair_dist(i, j) <= cutoff}| with j == i always
// counted. pair_dist must be symmetric and safe to call concurrently;
// non-finite values never match.
std::vector<double> agreement_scores(
    int t, const std::function<double(int, int)>& pair_dist, double cutoff,
    int threads = 1);

// The estimator. Chunk i holds rows [i*s, (i+1)*s) with s = floor(m/t);
// trailing rows are discarded. learner(chunk, stream) -> Y runs with the
// substream keyed by 2 + chunk index and may throw Error (the chunk then
// matches nothing beyond itself and counts in failed_chunks). The single
// noise draw uses substream 0 and the masker substream 1, so outcomes are
// independent of scheduling.
template <typename Learner, typename Dist, typename Masker>
auto ppe_run(const Eigen::MatrixXd& dataset, Learner&& learner,
             Dist&& dist_fn, Masker&& masker, const PpeConfig& cfg,
             RandomStream& stream, int threads = 1)
    -> PpeOutcome<std::decay_t<decltype(learner(
        std::declval<const Eigen::MatrixXd&>(),
        std::declval<RandomStream&>()))>> {
  using Y = std::decay_t<decltype(learner(
      std::declval<const Eigen::MatrixXd&>(), std::declval<RandomStream&>()))>;
  validate(cfg);
  const Eigen::Index m = dataset.rows();
  const int t = cfg.t;
  if (m < t) {
    std::ostringstream msg;
    msg << "ppe_run: " << m << " points for " << t << " chunks";
    throw InsufficientData(msg.str());
  }
  const double threshold = ppe_threshold(t, cfg.epsilon, cfg.delta);
  if (threshold > 1.0) {
    std::ostringstream msg;
    msg << "ppe_run: failure threshold " << threshold
        << " exceeds 1, the private test can never pass";
    throw ConfigInfeasible(msg.str());
  }

  const auto seconds_since = [](std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  const Eigen::Index s = m / t;
  std::vector<std::optional<Y>> outputs(t);
  const auto learn_start = std::chrono::steady_clock::now();
  parallel_for(static_cast<std::size_t>(t), threads, [&](std::size_t i) {
    RandomStream sub = stream.substream(2 + static_cast<std::uint64_t>(i));
    const Eigen::MatrixXd chunk =
        dataset.middleRows(static_cast<Eigen::Index>(i) * s, s);
    try {
      outputs[i] = learner(chunk, sub);
    } catch (const Error&) {
      outputs[i] = std::nullopt;
    }
  });

  PpeOutcome<Y> out;
  out.diag.learn_seconds = seconds_since(learn_start);
  out.diag.threshold = threshold;
  for (const auto& y : outputs) {
    if (!y.has_value()) ++out.diag.failed_chunks;
  }

  const double cutoff = cfg.r / (2.0 * cfg.z);
  const auto pair_dist = [&](int i, int j) {
    if (!outputs[i].has_value() || !outputs[j].has_value()) {
      return std::numeric_limits<double>::infinity();
    }
    return dist_fn(*outputs[i], *outputs[j]);
  };
  const auto distance_start = std::chrono::steady_clock::now();
  out.diag.q_values = agreement_scores(t, pair_dist, cutoff, threads);
  out.diag.distance_seconds = seconds_since(distance_start);

  double q_sum = 0.0;
  for (double q : out.diag.q_values) q_sum += q;
  out.diag.q_mean = q_sum / t;

  RandomStream noise_stream = stream.substream(0);
  const TLapParams noise{2.0 / t, cfg.epsilon, cfg.delta};
  out.diag.q_noised = out.diag.q_mean + tlap_sample(noise_stream, noise);

  if (out.diag.q_noised < threshold) {
    return out;  // the failure symbol, with diagnostics
  }
  int selected = -1;
  for (int i = 0; i < t; ++i) {
    if (out.diag.q_values[i] > 0.6) {
      selected = i;
      break;
    }
  }
  if (selected < 0) {
    // Passing certifies q_mean >= threshold - A >= 0.8, so some q_i > 0.6
    // must exist; reaching this line is a bug, not a data condition.
    throw SelectionFailed("ppe_run: passed but no chunk agreement above 0.6");
  }
  RandomStream mask_stream = stream.substream(1);
  const auto mask_start = std::chrono::steady_clock::now();
  out.value = masker(*outputs[selected], mask_stream);
  out.diag.mask_seconds = seconds_since(mask_start);
  out.released = true;
  out.diag.selected_index = selected;
  return out;
}

// Options for the private mixture-fitting pipeline.
struct PrivateFitOptions {
  CalibrationInput calib;
  LearnerOptions learner;
  int t_override = 0;  // 0 selects min_subsets(epsilon, delta)
  int threads = 1;
};

// The private fit outcome plus the effective configuration it ran with.
struct PrivateFitResult {
  PpeOutcome<Gmm> outcome;
  PpeConfig ppe;
  double gamma = 0.0;         // masking radius of the calibrated masker
  double epsilon_mask = 0.0;  // per-component budget used for calibration
  MaskConfig mask;
};

// End-to-end private mixture estimation: em_fit as the per-chunk learner,
// dist_mixture as the distance, mask_gmm with calibrated noise as the
// release masker. The agreement radius is r = min(2*z*alpha, 1) with
// z = 3/2 (the widest radius the restricted triangle inequality covers at
// the requested accuracy), the masker is calibrated for concentration at
// alpha/(2z) — the deviation the utility argument allocates to masking —
// and at privacy budget min(epsilon, 0.99*ln(2)/3), since the masking
// calibration formula requires epsilon < ln(2)/3 and masking at a smaller
// epsilon only strengthens privacy.
PrivateFitResult fit_gmm_private(const Eigen::MatrixXd& data,
                                 const PrivateFitOptions& opts,
                                 RandomStream& stream);

}  // namespace ppegmm

#endif  // PPEGMM_PPE_HPP_
