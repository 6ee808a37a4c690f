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
// Empirical audits of the statistical claims behind the maskers: output
// concentration, indistinguishability of nearby inputs, and sampled
// restricted triangle inequalities. Privacy auditing here is one-sided:
// a passing report certifies only that no violation was detected at the
// tested sample size, never the property itself.

#ifndef PPEGMM_AUDIT_HPP_
#define PPEGMM_AUDIT_HPP_

#include <array>
#include <functional>
#include <map>
#include <string>

#include "ppegmm/masking.hpp"
#include "ppegmm/metrics.hpp"

namespace ppegmm {

// Machine-readable audit result; for upper-bound claims passed is exactly
// statistic <= bound.
struct AuditReport {
  std::string name;
  std::string note;  // scope label, e.g. "empirical lower bound"
  long long trials = 0;
  double statistic = 0.0;
  double bound = 0.0;
  bool passed = false;
  std::map<std::string, double> details;
};

// Maskers under audit must be pure given their stream and safe to call
// concurrently; trial i always uses the substream keyed by i.
using GmmMasker = std::function<Gmm(const Gmm&, RandomStream&)>;

// Fraction of trials with dist_mixture(masker(reference), reference) above
// alpha; degenerate-weight failures count as exceedances. The bound is
// beta plus a three-sigma binomial margin. Requires trials >= 100.
AuditReport audit_concentration(const GmmMasker& masker, const Gmm& reference,
                                double alpha, double beta, long long trials,
                                RandomStream& stream, int threads = 1);

// Empirical privacy lower bound for one masker on the input pair
// (f, f_prime), which must satisfy dist_mixture(f, f_prime) <= gamma
// (PreconditionDistance otherwise). Both runs of trial i share the same
// substream, so identical inputs give identical outputs and the statistic
// collapses to zero. Masked outputs are matched to f's components and
// projected to scalars (weight, standardized mean coordinates, relative
// covariance deviation); for each projection the two output histograms
// give max over bins of |ln((p + delta)/(q + delta))|, restricted to bins
// holding at least 50 pooled samples. statistic = max over projections;
// bound = epsilon_target. Requires trials >= 10^4.
AuditReport audit_indistinguishability(const GmmMasker& masker, const Gmm& f,
                                       const Gmm& f_prime, double gamma,
                                       double epsilon_target,
                                       double delta_target, long long trials,
                                       RandomStream& stream, int threads = 1);

// Yields one mixture triple per call; must be concurrency-safe.
using TripleSampler = std::function<std::array<Gmm, 3>(RandomStream&)>;

// Samples triples and checks the restricted approximate triangle
// inequality. statistic = max over applicable triples (both legs within
// params.r, distances not all zero) of d13/(d12 + d23); bound = params.z;
// triples with d12 + d23 = 0 are skipped and counted in the details.
AuditReport audit_triangle(const TripleSampler& sampler,
                           const SemimetricParams& params, long long trials,
                           RandomStream& stream, int threads = 1);

// Default triple source: a fresh random base mixture per call plus three
// noise perturbations, rejection-sampled until all pairwise distances are
// within params.r. Throws SamplerStarved after 1000 consecutive
// rejections (acceptance below 0.1%).
TripleSampler make_restricted_triple_sampler(int k, int d,
                                             const SemimetricParams& params);

}  // namespace ppegmm

#endif  // PPEGMM_AUDIT_HPP_
