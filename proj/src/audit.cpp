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

#include "ppegmm/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "ppegmm/errors.hpp"
#include "ppegmm/linalg.hpp"
#include "ppegmm/parallel.hpp"

namespace ppegmm {
namespace {

constexpr int kHistogramBins = 64;
constexpr long long kMinPooledPerBin = 50;

void require_positive_trials(long long trials, long long minimum,
                             const char* what) {
  if (trials < minimum) {
    throw InvalidArgument(std::string(what) + ": trials must be >= " +
                          std::to_string(minimum) + ", got " +
                          std::to_string(trials));
  }
}

// Largest |ln((p + delta)/(q + delta))| over merged histogram bins of two
// equal-size samples sharing one set of equal-width bin edges. Adjacent
// bins are merged left to right until each emitted bin holds at least
// kMinPooledPerBin pooled samples; a short tail is folded into the last
// emitted bin.
double histogram_epsilon(const std::vector<double>& a,
                         const std::vector<double>& b, double delta) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : a) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (double v : b) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) {
    return 0.0;
  }
  const double width = (hi - lo) / kHistogramBins;
  std::vector<long long> count_a(kHistogramBins, 0);
  std::vector<long long> count_b(kHistogramBins, 0);
  auto bin_of = [&](double v) {
    int bin = static_cast<int>((v - lo) / width);
    return std::min(std::max(bin, 0), kHistogramBins - 1);
  };
  for (double v : a) ++count_a[bin_of(v)];
  for (double v : b) ++count_b[bin_of(v)];

  std::vector<std::pair<long long, long long>> merged;
  long long acc_a = 0;
  long long acc_b = 0;
  for (int bin = 0; bin < kHistogramBins; ++bin) {
    acc_a += count_a[bin];
    acc_b += count_b[bin];
    if (acc_a + acc_b >= kMinPooledPerBin) {
      merged.emplace_back(acc_a, acc_b);
      acc_a = 0;
      acc_b = 0;
    }
  }
  if (acc_a + acc_b > 0) {
    if (merged.empty()) {
      merged.emplace_back(acc_a, acc_b);
    } else {
      merged.back().first += acc_a;
      merged.back().second += acc_b;
    }
  }

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double worst = 0.0;
  for (const auto& [ca, cb] : merged) {
    const double p = static_cast<double>(ca) / na;
    const double q = static_cast<double>(cb) / nb;
    worst = std::max(worst, std::abs(std::log((p + delta) / (q + delta))));
  }
  return worst;
}

// Writes the per-component projections of `masked`, matched to `reference`
// by bottleneck assignment, into row `row` of `out`. Layout per reference
// component j: weight, d standardized mean coordinates, covariance
// deviation, at columns j*(d+2) ... j*(d+2)+d+1.
void project_against_reference(const Gmm& masked, const Gmm& reference,
                               const std::vector<Eigen::MatrixXd>& ref_inv_root,
                               Eigen::Index row, Eigen::MatrixXd* out) {
  const int k = reference.k();
  const int d = reference.d();
  const BottleneckResult match =
      bottleneck_matching(component_cost_matrix(masked, reference));
  for (int i = 0; i < k; ++i) {
    const int j = match.perm[i];
    const Component& c = masked.component(i);
    const Component& ref = reference.component(j);
    const Eigen::MatrixXd& root_inv = ref_inv_root[j];
    const Eigen::Index base = static_cast<Eigen::Index>(j) * (d + 2);
    (*out)(row, base) = c.w;
    const Eigen::VectorXd std_mean = root_inv * (c.mu - ref.mu);
    for (int a = 0; a < d; ++a) {
      (*out)(row, base + 1 + a) = std_mean(a);
    }
    const Eigen::MatrixXd dev = root_inv * c.sigma * root_inv -
                                Eigen::MatrixXd::Identity(d, d);
    (*out)(row, base + 1 + d) = frob_norm(dev);
  }
}

Gmm random_base_gmm(int k, int d, RandomStream& stream) {
  std::vector<Component> comps(k);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    comps[i].w = 0.2 + stream.uniform01();
    total += comps[i].w;
    const std::vector<double> z = std_normal(stream, static_cast<std::size_t>(d));
    comps[i].mu = 2.0 * Eigen::Map<const Eigen::VectorXd>(z.data(), d);
    const Eigen::MatrixXd v = gaussian_matrix(stream, d);
    Eigen::MatrixXd s = 0.5 * Eigen::MatrixXd::Identity(d, d) +
                        (v * v.transpose()) / static_cast<double>(d);
    comps[i].sigma = 0.5 * (s + s.transpose());
  }
  for (int i = 0; i < k; ++i) comps[i].w /= total;
  return Gmm::from_components(std::move(comps));
}

}  // namespace

AuditReport audit_concentration(const GmmMasker& masker, const Gmm& reference,
                                double alpha, double beta, long long trials,
                                RandomStream& stream, int threads) {
  require_positive_trials(trials, 100, "audit_concentration");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("audit_concentration: alpha must be positive");
  }
  if (!(beta > 0.0) || !(beta < 1.0)) {
    throw InvalidArgument("audit_concentration: beta must be in (0, 1)");
  }

  std::vector<std::uint8_t> exceeded(static_cast<std::size_t>(trials), 0);
  std::vector<std::uint8_t> degenerate(static_cast<std::size_t>(trials), 0);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t i) {
    RandomStream sub = stream.substream(i);
    try {
      const Gmm masked = masker(reference, sub);
      if (dist_mixture(masked, reference) > alpha) {
        exceeded[i] = 1;
      }
    } catch (const DegenerateWeights&) {
      exceeded[i] = 1;
      degenerate[i] = 1;
    }
  });

  long long exceed_count = 0;
  long long degenerate_count = 0;
  for (long long i = 0; i < trials; ++i) {
    exceed_count += exceeded[static_cast<std::size_t>(i)];
    degenerate_count += degenerate[static_cast<std::size_t>(i)];
  }

  AuditReport report;
  report.name = "concentration";
  report.note = "sampled check; passing certifies no detected violation only";
  report.trials = trials;
  report.statistic =
      static_cast<double>(exceed_count) / static_cast<double>(trials);
  report.bound =
      beta + 3.0 * std::sqrt(beta * (1.0 - beta) / static_cast<double>(trials));
  report.passed = report.statistic <= report.bound;
  report.details["alpha"] = alpha;
  report.details["beta"] = beta;
  report.details["exceedances"] = static_cast<double>(exceed_count);
  report.details["degenerate_outputs"] = static_cast<double>(degenerate_count);
  return report;
}

AuditReport audit_indistinguishability(const GmmMasker& masker, const Gmm& f,
                                       const Gmm& f_prime, double gamma,
                                       double epsilon_target,
                                       double delta_target, long long trials,
                                       RandomStream& stream, int threads) {
  require_positive_trials(trials, 10000, "audit_indistinguishability");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("audit_indistinguishability: gamma must be positive");
  }
  if (!(epsilon_target > 0.0) || !(delta_target > 0.0)) {
    throw InvalidArgument(
        "audit_indistinguishability: targets must be positive");
  }
  if (f.k() != f_prime.k() || f.d() != f_prime.d()) {
    throw DimensionMismatch(
        "audit_indistinguishability: inputs must share k and d");
  }
  const double pair_distance = dist_mixture(f, f_prime);
  if (pair_distance > gamma * (1.0 + 1e-12)) {
    throw PreconditionDistance(
        "audit_indistinguishability: dist_mixture(f, f_prime) = " +
        std::to_string(pair_distance) + " exceeds gamma = " +
        std::to_string(gamma));
  }

  const int k = f.k();
  const int d = f.d();
  const Eigen::Index projections = static_cast<Eigen::Index>(k) * (d + 2);
  std::vector<Eigen::MatrixXd> ref_inv_root(k);
  for (int j = 0; j < k; ++j) {
    ref_inv_root[j] = inv_sqrt(f.component(j).sigma);
  }

  Eigen::MatrixXd proj_f(trials, projections);
  Eigen::MatrixXd proj_fp(trials, projections);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t i) {
    RandomStream sub_f = stream.substream(i);
    RandomStream sub_fp = stream.substream(i);
    const Gmm out_f = masker(f, sub_f);
    const Gmm out_fp = masker(f_prime, sub_fp);
    project_against_reference(out_f, f, ref_inv_root,
                              static_cast<Eigen::Index>(i), &proj_f);
    project_against_reference(out_fp, f, ref_inv_root,
                              static_cast<Eigen::Index>(i), &proj_fp);
  });

  double worst = 0.0;
  Eigen::Index worst_projection = 0;
  std::vector<double> column_a(static_cast<std::size_t>(trials));
  std::vector<double> column_b(static_cast<std::size_t>(trials));
  for (Eigen::Index p = 0; p < projections; ++p) {
    for (long long i = 0; i < trials; ++i) {
      column_a[static_cast<std::size_t>(i)] = proj_f(i, p);
      column_b[static_cast<std::size_t>(i)] = proj_fp(i, p);
    }
    const double eps_hat = histogram_epsilon(column_a, column_b, delta_target);
    if (eps_hat > worst) {
      worst = eps_hat;
      worst_projection = p;
    }
  }

  AuditReport report;
  report.name = "indistinguishability";
  report.note = "empirical lower bound; passing is consistent-with, not proof";
  report.trials = trials;
  report.statistic = worst;
  report.bound = epsilon_target;
  report.passed = report.statistic <= report.bound;
  report.details["gamma"] = gamma;
  report.details["delta_target"] = delta_target;
  report.details["pair_distance"] = pair_distance;
  report.details["projections"] = static_cast<double>(projections);
  report.details["worst_projection"] = static_cast<double>(worst_projection);
  return report;
}

AuditReport audit_triangle(const TripleSampler& sampler,
                           const SemimetricParams& params, long long trials,
                           RandomStream& stream, int threads) {
  require_positive_trials(trials, 1, "audit_triangle");
  validate(params);

  Eigen::MatrixXd dists(trials, 3);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t i) {
    RandomStream sub = stream.substream(i);
    const std::array<Gmm, 3> triple = sampler(sub);
    const Eigen::Index row = static_cast<Eigen::Index>(i);
    dists(row, 0) = dist_mixture(triple[0], triple[1]);
    dists(row, 1) = dist_mixture(triple[1], triple[2]);
    dists(row, 2) = dist_mixture(triple[0], triple[2]);
  });

  double worst_ratio = 0.0;
  long long applicable = 0;
  long long skipped = 0;
  long long violations = 0;
  for (long long i = 0; i < trials; ++i) {
    const double d12 = dists(i, 0);
    const double d23 = dists(i, 1);
    const double d13 = dists(i, 2);
    if (d12 > params.r || d23 > params.r) {
      continue;
    }
    if (d12 + d23 == 0.0) {
      ++skipped;
      continue;
    }
    ++applicable;
    worst_ratio = std::max(worst_ratio, d13 / (d12 + d23));
    if (!check_restricted_triangle(d12, d23, d13, params)) {
      ++violations;
    }
  }

  AuditReport report;
  report.name = "triangle";
  report.note = "sampled check; passing certifies no detected violation only";
  report.trials = trials;
  report.statistic = worst_ratio;
  report.bound = params.z;
  report.passed = violations == 0;
  report.details["applicable"] = static_cast<double>(applicable);
  report.details["skipped"] = static_cast<double>(skipped);
  report.details["violations"] = static_cast<double>(violations);
  return report;
}

TripleSampler make_restricted_triple_sampler(int k, int d,
                                             const SemimetricParams& params) {
  if (k < 1 || d < 1) {
    throw InvalidArgument(
        "make_restricted_triple_sampler: k and d must be positive");
  }
  validate(params);
  MaskConfig perturbation;
  perturbation.eta_w = 0.04 * params.r;
  perturbation.eta_mean = 0.10 * params.r;
  perturbation.eta_cov = 0.03 * params.r / std::sqrt(static_cast<double>(d));
  const double radius = params.r;

  return [k, d, perturbation, radius](RandomStream& stream) {
    constexpr int kMaxAttempts = 1000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      RandomStream sub = stream.substream(attempt);
      try {
        const Gmm base = random_base_gmm(k, d, sub);
        RandomStream s0 = sub.substream(1000);
        RandomStream s1 = sub.substream(1001);
        RandomStream s2 = sub.substream(1002);
        std::array<Gmm, 3> triple = {mask_gmm(base, perturbation, s0),
                                     mask_gmm(base, perturbation, s1),
                                     mask_gmm(base, perturbation, s2)};
        if (dist_mixture(triple[0], triple[1]) <= radius &&
            dist_mixture(triple[1], triple[2]) <= radius &&
            dist_mixture(triple[0], triple[2]) <= radius) {
          return triple;
        }
      } catch (const DegenerateWeights&) {
      }
    }
    throw SamplerStarved(
        "make_restricted_triple_sampler: no admissible triple in " +
        std::to_string(kMaxAttempts) + " attempts");
  };
}

}  // namespace ppegmm
