# Copyright 2026 AQEC Contributors
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

"""Repetition-code syndrome statistics, adaptive matching weights and
blossom decoding."""

from ._core import (
    CorrectionResult,
    DetectorErrorModel,
    DetectorId,
    EdgeEstimate,
    EstimateSet,
    ExperimentConfig,
    FidelityCurve,
    FluctuationResult,
    ConvergenceResult,
    Matching,
    MomentAccumulator,
    NoiseSchedule,
    RateFunction,
    SyndromeRecord,
    WeightTable,
    boundary_probability,
    decode,
    estimate_all,
    exp_convergence,
    exp_fluctuation,
    fit_fidelity,
    logical_error_rate,
    n_min,
    n_opt,
    omega_c,
    pair_probability,
    relative_error,
    sample_trial,
    true_probabilities,
    uncertainty,
    weights_exact,
    weights_shortest_path,
)

__all__ = [
    "CorrectionResult",
    "DetectorErrorModel",
    "DetectorId",
    "EdgeEstimate",
    "EstimateSet",
    "ExperimentConfig",
    "FidelityCurve",
    "FluctuationResult",
    "ConvergenceResult",
    "Matching",
    "MomentAccumulator",
    "NoiseSchedule",
    "RateFunction",
    "SyndromeRecord",
    "WeightTable",
    "boundary_probability",
    "decode",
    "estimate_all",
    "exp_convergence",
    "exp_fluctuation",
    "fit_fidelity",
    "logical_error_rate",
    "n_min",
    "n_opt",
    "omega_c",
    "pair_probability",
    "relative_error",
    "sample_trial",
    "true_probabilities",
    "uncertainty",
    "weights_exact",
    "weights_shortest_path",
]

__version__ = "0.1.0"
