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

#include <cstdint>
#include <utility>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ppegmm/audit.hpp"
#include "ppegmm/errors.hpp"
#include "ppegmm/gmm.hpp"
#include "ppegmm/gmm_learn.hpp"
#include "ppegmm/io.hpp"
#include "ppegmm/masking.hpp"
#include "ppegmm/metrics.hpp"
#include "ppegmm/ppe.hpp"
#include "ppegmm/random.hpp"
#include "ppegmm/version.hpp"

namespace py = pybind11;

namespace {

using namespace ppegmm;

Gmm gmm_from_parts(const Eigen::VectorXd& weights, const Eigen::MatrixXd& means,
                   const std::vector<Eigen::MatrixXd>& covs) {
  const int k = static_cast<int>(weights.size());
  if (means.rows() != k || static_cast<int>(covs.size()) != k) {
    throw DimensionMismatch(
        "from_parts: weights, means and covs must agree on k");
  }
  std::vector<Component> comps(k);
  for (int i = 0; i < k; ++i) {
    comps[i].w = weights(i);
    comps[i].mu = means.row(i).transpose();
    comps[i].sigma = covs[static_cast<std::size_t>(i)];
  }
  return Gmm::from_components(std::move(comps));
}

MaskConfig mask_config_from(double eta_w, double eta_mean, double eta_cov) {
  MaskConfig cfg;
  cfg.eta_w = eta_w;
  cfg.eta_mean = eta_mean;
  cfg.eta_cov = eta_cov;
  return cfg;
}

CalibrationInput calibration_input_from(double alpha, double beta,
                                        double epsilon, double delta, int k,
                                        int d, double c2) {
  CalibrationInput inp;
  inp.alpha = alpha;
  inp.beta = beta;
  inp.epsilon = epsilon;
  inp.delta = delta;
  inp.k = k;
  inp.d = d;
  inp.c2 = c2;
  return inp;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Differentially private Gaussian-mixture estimation toolkit";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "ToolkitError");

  py::class_<RandomStream>(m, "RandomStream",
                           "Splittable deterministic random stream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
           py::arg("stream_id") = 0)
      .def("substream", &RandomStream::substream, py::arg("index"))
      .def("uniform01", &RandomStream::uniform01)
      .def("normal", &RandomStream::normal)
      .def_property_readonly("seed", &RandomStream::seed)
      .def_property_readonly("stream_id", &RandomStream::stream_id);

  py::class_<Gmm>(m, "Gmm", "Gaussian mixture with validated parameters")
      .def_static("from_parts", &gmm_from_parts, py::arg("weights"),
                  py::arg("means"), py::arg("covs"))
      .def_static(
          "from_json",
          [](const std::string& text) { return parse_gmm_json(text); },
          py::arg("text"))
      .def("to_json", [](const Gmm& g) { return serialize_gmm_json(g); })
      .def_property_readonly("k", &Gmm::k)
      .def_property_readonly("d", &Gmm::d)
      .def_property_readonly("weights",
                             [](const Gmm& g) {
                               Eigen::VectorXd w(g.k());
                               for (int i = 0; i < g.k(); ++i) {
                                 w(i) = g.component(i).w;
                               }
                               return w;
                             })
      .def_property_readonly("means",
                             [](const Gmm& g) {
                               Eigen::MatrixXd mu(g.k(), g.d());
                               for (int i = 0; i < g.k(); ++i) {
                                 mu.row(i) = g.component(i).mu.transpose();
                               }
                               return mu;
                             })
      .def_property_readonly("covs",
                             [](const Gmm& g) {
                               std::vector<Eigen::MatrixXd> out;
                               out.reserve(g.k());
                               for (int i = 0; i < g.k(); ++i) {
                                 out.push_back(g.component(i).sigma);
                               }
                               return out;
                             })
      .def("__repr__", [](const Gmm& g) {
        return "Gmm(k=" + std::to_string(g.k()) +
               ", d=" + std::to_string(g.d()) + ")";
      });

  m.def("ppe_threshold", &ppe_threshold, py::arg("t"), py::arg("epsilon"),
        py::arg("delta"));
  m.def("min_subsets", &min_subsets, py::arg("epsilon"), py::arg("delta"));
  m.def("compose_epsilon", &compose_epsilon, py::arg("k"), py::arg("epsilon"),
        py::arg("delta_prime"));
  m.def(
      "tlap_bound",
      [](double epsilon, double delta, double sensitivity) {
        TLapParams p;
        p.delta_sens = sensitivity;
        p.epsilon = epsilon;
        p.delta = delta;
        return tlap_bound(p);
      },
      py::arg("epsilon"), py::arg("delta"), py::arg("sensitivity") = 1.0);
  m.def(
      "calibrate_gamma",
      [](double alpha, double beta, double epsilon, double delta, int k, int d,
         double c2) {
        return calibrate_gamma(
            calibration_input_from(alpha, beta, epsilon, delta, k, d, c2));
      },
      py::arg("alpha"), py::arg("beta"), py::arg("epsilon"), py::arg("delta"),
      py::arg("k"), py::arg("d"), py::arg("c2") = kDefaultC2);
  m.def(
      "calibrate_mask_config",
      [](double alpha, double beta, double epsilon, double delta, int k, int d,
         double c2) {
        const MaskConfig cfg = calibrate_mask_config(
            calibration_input_from(alpha, beta, epsilon, delta, k, d, c2));
        py::dict out;
        out["eta_w"] = cfg.eta_w;
        out["eta_mean"] = cfg.eta_mean;
        out["eta_cov"] = cfg.eta_cov;
        return out;
      },
      py::arg("alpha"), py::arg("beta"), py::arg("epsilon"), py::arg("delta"),
      py::arg("k"), py::arg("d"), py::arg("c2") = kDefaultC2);

  m.def(
      "dist_mixture",
      [](const Gmm& a, const Gmm& b) { return dist_mixture(a, b); },
      py::arg("a"), py::arg("b"),
      "Permutation-invariant bottleneck distance between two mixtures");
  m.def(
      "bottleneck_matching",
      [](const Eigen::MatrixXd& cost) {
        const BottleneckResult res = bottleneck_matching(cost);
        return py::make_tuple(res.value, res.perm);
      },
      py::arg("cost"));

  m.def(
      "mask_gmm",
      [](const Gmm& g, double eta_w, double eta_mean, double eta_cov,
         RandomStream& stream) {
        return mask_gmm(g, mask_config_from(eta_w, eta_mean, eta_cov), stream);
      },
      py::arg("gmm"), py::arg("eta_w"), py::arg("eta_mean"),
      py::arg("eta_cov"), py::arg("stream"));

  m.def(
      "sample_gmm",
      [](const Gmm& g, std::size_t n, RandomStream& stream) {
        return sample_gmm(g, n, stream);
      },
      py::arg("gmm"), py::arg("n"), py::arg("stream"));
  m.def("make_separated_gmm", &make_separated_gmm, py::arg("k"), py::arg("d"),
        py::arg("separation"), py::arg("stream"));
  m.def(
      "em_fit",
      [](const Eigen::MatrixXd& data, int k, RandomStream& stream,
         int max_iters, int restarts, double tol, double reg) {
        LearnerOptions opts;
        opts.k = k;
        opts.max_iters = max_iters;
        opts.restarts = restarts;
        opts.tol = tol;
        opts.reg = reg;
        return em_fit(data, opts, stream);
      },
      py::arg("data"), py::arg("k"), py::arg("stream"),
      py::arg("max_iters") = 100, py::arg("restarts") = 2,
      py::arg("tol") = 1e-7, py::arg("reg") = 0.0);

  m.def(
      "fit_gmm_private",
      [](const Eigen::MatrixXd& data, int k, double epsilon, double delta,
         double alpha, double beta, std::uint64_t seed, double c2, int t,
         int threads, int max_iters, int restarts, double tol, double reg) {
        PrivateFitOptions opts;
        opts.calib = calibration_input_from(alpha, beta, epsilon, delta, k,
                                            static_cast<int>(data.cols()), c2);
        opts.learner.k = k;
        opts.learner.max_iters = max_iters;
        opts.learner.restarts = restarts;
        opts.learner.tol = tol;
        opts.learner.reg = reg;
        opts.t_override = t;
        opts.threads = threads;
        RandomStream stream(seed);
        const PrivateFitResult res = fit_gmm_private(data, opts, stream);
        py::dict out;
        out["released"] = res.outcome.released;
        out["gmm"] = res.outcome.released ? py::cast(*res.outcome.value)
                                          : py::object(py::none());
        out["q_noised"] = res.outcome.diag.q_noised;
        out["threshold"] = res.outcome.diag.threshold;
        out["t"] = res.ppe.t;
        out["r"] = res.ppe.r;
        out["z"] = res.ppe.z;
        out["gamma"] = res.gamma;
        out["epsilon_mask"] = res.epsilon_mask;
        out["eta_w"] = res.mask.eta_w;
        out["eta_mean"] = res.mask.eta_mean;
        out["eta_cov"] = res.mask.eta_cov;
        return out;
      },
      py::arg("data"), py::arg("k"), py::arg("epsilon"), py::arg("delta"),
      py::arg("alpha"), py::arg("beta"), py::arg("seed"),
      py::arg("c2") = kDefaultC2, py::arg("t") = 0, py::arg("threads") = 1,
      py::arg("max_iters") = 100, py::arg("restarts") = 2,
      py::arg("tol") = 1e-7, py::arg("reg") = 0.0);
}
