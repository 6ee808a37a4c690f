# Copyright 2026 The ppegmm Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Differentially private Gaussian-mixture estimation toolkit."""

from ppegmm._core import (
    Gmm,
    RandomStream,
    ToolkitError,
    __version__,
    bottleneck_matching,
    calibrate_gamma,
    calibrate_mask_config,
    compose_epsilon,
    dist_mixture,
    em_fit,
    fit_gmm_private,
    make_separated_gmm,
    mask_gmm,
    min_subsets,
    ppe_threshold,
    sample_gmm,
    tlap_bound,
)

__all__ = [
    "Gmm",
    "RandomStream",
    "ToolkitError",
    "__version__",
    "bottleneck_matching",
    "calibrate_gamma",
    "calibrate_mask_config",
    "compose_epsilon",
    "dist_mixture",
    "em_fit",
    "fit_gmm_private",
    "make_separated_gmm",
    "mask_gmm",
    "min_subsets",
    "ppe_threshold",
    "sample_gmm",
    "tlap_bound",
]
