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

#include "ppegmm/gmm_learn.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

namespace ppegmm {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// k-means++ seeding: first center uniform, later centers with probability
// proportional to squared distance from the chosen set.
Eigen::MatrixXd kmeanspp_centers(const Eigen::MatrixXd& data, int k,
                                 RandomStream& stream) {
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  Eigen::MatrixXd centers(k, d);
  centers.row(0) = data.row(static_cast<Eigen::Index>(
      stream.uniform_below(static_cast<std::uint64_t>(n))));
  Eigen::VectorXd dist2 =
      (data.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int j = 1; j < k; ++j) {
    const double total = dist2.sum();
    Eigen::Index pick;
    if (total > 0.0) {
      const double target = stream.uniform01() * total;
      double cum = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        cum += dist2(i);
        if (target < cum) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(
          stream.uniform_below(static_cast<std::uint64_t>(n)));
    }
    centers.row(j) = data.row(pick);
    dist2 = dist2.cwiseMin(
        (data.rowwise() - centers.row(j)).rowwise().squaredNorm());
  }
  return centers;
}

struct EmResult {
  std::vector<Component> components;
  double loglik = -std::numeric_limits<double>::infinity();
};

EmResult em_once(const Eigen::MatrixXd& data, const LearnerOptions& opts,
                 double reg, RandomStream& stream) {
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  const int k = opts.k;

  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - mean;
  Eigen::MatrixXd global_cov =
      centered.transpose() * centered / static_cast<double>(n);
  global_cov += reg * Eigen::MatrixXd::Identity(d, d);

  std::vector<Component> comps(k);
  const Eigen::MatrixXd centers = kmeanspp_centers(data, k, stream);
  for (int j = 0; j < k; ++j) {
    comps[j].w = 1.0 / k;
    comps[j].mu = centers.row(j).transpose();
    comps[j].sigma = global_cov;
  }

  Eigen::MatrixXd log_dens(n, k);
  Eigen::MatrixXd resp(n, k);
  double loglik = -std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    // E-step: responsibilities via log-sum-exp.
    for (int j = 0; j < k; ++j) {
      Eigen::MatrixXd chol;
      try {
        chol = cholesky_lower(comps[j].sigma);
      } catch (const Singular&) {
        return {std::move(comps), std::numeric_limits<double>::quiet_NaN()};
      }
      double logdet = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) logdet += 2.0 * std::log(chol(i, i));
      const Eigen::MatrixXd diff =
          (data.rowwise() - comps[j].mu.transpose()).transpose();
      const Eigen::MatrixXd z =
          chol.triangularView<Eigen::Lower>().solve(diff);
      const double log_w =
          comps[j].w > 0.0 ? std::log(comps[j].w)
                           : -std::numeric_limits<double>::infinity();
      log_dens.col(j) =
          (-0.5 * (z.colwise().squaredNorm().array() + d * kLog2Pi + logdet) +
           log_w)
              .matrix()
              .transpose();
    }
    const Eigen::VectorXd row_max = log_dens.rowwise().maxCoeff();
    const Eigen::VectorXd lse =
        ((log_dens.colwise() - row_max).array().exp().rowwise().sum().log() +
         row_max.array())
            .matrix();
    const double loglik_new = lse.sum();
    if (!std::isfinite(loglik_new)) {
      return {std::move(comps), std::numeric_limits<double>::quiet_NaN()};
    }
    assert(iter == 0 || loglik_new >= loglik - 1e-9 * (1.0 + std::abs(loglik)));
    if (iter > 0 &&
        loglik_new - loglik <= opts.tol * std::max(1.0, std::abs(loglik))) {
      loglik = loglik_new;
      break;
    }
    loglik = loglik_new;
    resp = (log_dens.colwise() - lse).array().exp();

    // M-step with ridge regularization.
    for (int j = 0; j < k; ++j) {
      const double nj = resp.col(j).sum();
      comps[j].w = nj / static_cast<double>(n);
      if (nj < 1e-12) continue;  // dead component keeps its parameters
      const Eigen::VectorXd mu =
          (data.transpose() * resp.col(j)) / nj;
      const Eigen::MatrixXd diff = data.rowwise() - mu.transpose();
      Eigen::MatrixXd sigma =
          diff.transpose() * resp.col(j).asDiagonal() * diff / nj;
      sigma = ((sigma + sigma.transpose()) * 0.5).eval();
      sigma += reg * Eigen::MatrixXd::Identity(d, d);
      comps[j].mu = mu;
      comps[j].sigma = std::move(sigma);
    }
  }
  return {std::move(comps), loglik};
}

}  // namespace

void validate(const LearnerOptions& opts) {
  if (opts.k < 1) throw InvalidArgument("LearnerOptions: k must be >= 1");
  if (opts.max_iters < 1) {
    throw InvalidArgument("LearnerOptions: max_iters must be >= 1");
  }
  if (opts.restarts < 1) {
    throw InvalidArgument("LearnerOptions: restarts must be >= 1");
  }
  if (!(opts.tol > 0.0) || !std::isfinite(opts.tol)) {
    throw InvalidArgument("LearnerOptions: tol must be positive");
  }
  if (!std::isfinite(opts.reg)) {
    throw InvalidArgument("LearnerOptions: reg must be finite");
  }
}

Eigen::MatrixXd sample_gmm(const Gmm& g, std::size_t n, RandomStream& stream) {
  const int d = g.d();
  const int k = g.k();
  // One transform T per component with T*T^T = sigma: the Cholesky factor
  // when sigma is positive definite at working tolerance, else the PSD
  // square root.
  std::vector<Eigen::MatrixXd> transforms;
  transforms.reserve(k);
  for (const auto& c : g.components()) {
    try {
      transforms.push_back(cholesky_lower(c.sigma));
    } catch (const Singular&) {
      transforms.push_back(psd_sqrt(c.sigma));
    }
  }
  Eigen::MatrixXd points(static_cast<Eigen::Index>(n), d);
  Eigen::VectorXd z(d);
  for (std::size_t row = 0; row < n; ++row) {
    const double u = stream.uniform01();
    int pick = k - 1;
    double cum = 0.0;
    for (int i = 0; i < k; ++i) {
      cum += g.component(i).w;
      if (u < cum) {
        pick = i;
        break;
      }
    }
    for (int i = 0; i < d; ++i) z(i) = stream.normal();
    points.row(static_cast<Eigen::Index>(row)) =
        (g.component(pick).mu + transforms[pick] * z).transpose();
  }
  return points;
}

Gmm em_fit(const Eigen::MatrixXd& data, const LearnerOptions& opts,
           RandomStream& stream) {
  validate(opts);
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  if (n < 1 || d < 1) throw InvalidArgument("em_fit: empty dataset");
  if (!data.allFinite()) {
    throw InvalidArgument("em_fit: dataset has non-finite entries");
  }
  if (n < static_cast<Eigen::Index>(10) * opts.k * d) {
    std::ostringstream msg;
    msg << "em_fit: " << n << " points < 10*k*d = " << 10 * opts.k * d;
    throw InsufficientData(msg.str());
  }
  double reg = opts.reg;
  if (!(reg > 0.0)) {
    const Eigen::RowVectorXd mean = data.colwise().mean();
    const double avg_var = (data.rowwise() - mean).squaredNorm() /
                           static_cast<double>(n * d);
    reg = 1e-6 * std::max(avg_var, 1e-12);
  }

  EmResult best;
  for (int r = 0; r < opts.restarts; ++r) {
    RandomStream sub = stream.substream(static_cast<std::uint64_t>(r));
    EmResult candidate = em_once(data, opts, reg, sub);
    if (std::isfinite(candidate.loglik) && candidate.loglik > best.loglik) {
      best = std::move(candidate);
    }
  }
  if (!std::isfinite(best.loglik)) {
    throw LearnFailed("em_fit: no restart produced a finite log-likelihood");
  }
  return Gmm::normalized(std::move(best.components));
}

Gmm make_separated_gmm(int k, int d, double separation, RandomStream& stream) {
  if (k < 1 || d < 1) {
    throw InvalidArgument("make_separated_gmm: k and d must be >= 1");
  }
  if (!(separation > 0.0) || !std::isfinite(separation)) {
    throw InvalidArgument("make_separated_gmm: separation must be positive");
  }
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(k, d);
  if (k > 1) {
    if (d >= k - 1) {
      // Rows of the Helmert basis are the vertices of a centered regular
      // simplex with edge sqrt(2); rescale edges to `separation`.
      Eigen::MatrixXd helmert = Eigen::MatrixXd::Zero(k, k - 1);
      for (int j = 0; j < k - 1; ++j) {
        const double norm = std::sqrt(static_cast<double>(j + 1) *
                                      static_cast<double>(j + 2));
        for (int i = 0; i <= j; ++i) helmert(i, j) = 1.0 / norm;
        helmert(j + 1, j) = -static_cast<double>(j + 1) / norm;
      }
      means.leftCols(k - 1) = helmert * (separation / std::sqrt(2.0));
    } else {
      // Too many components for a simplex in d dimensions: a centered line
      // with spacing `separation` along the first axis.
      for (int i = 0; i < k; ++i) {
        means(i, 0) = separation * (i - 0.5 * (k - 1));
      }
    }
  }
  // Haar-ish random rotation from the QR factorization of a Gaussian
  // matrix with the R-diagonal sign fix.
  const Eigen::MatrixXd g = gaussian_matrix(stream, d);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r_mat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    if (r_mat(i, i) < 0.0) q.col(i) = -q.col(i);
  }
  means = means * q.transpose();

  std::vector<Component> comps(k);
  for (int i = 0; i < k; ++i) {
    comps[i].w = 1.0 / k;
    comps[i].mu = means.row(i).transpose();
    comps[i].sigma = Eigen::MatrixXd::Identity(d, d);
  }
  return Gmm::normalized(std::move(comps));
}

}  // namespace ppegmm
