"""Scalar linear-Gaussian smoothing, filtering and prediction.

Forward moment-form recursion plus backward root-form messages give the
posterior of any state given a whole observation series. A grid-quadrature
implementation of the same conditioning is provided as an independent check.
"""

from .estimator import Mode, bayes_kalman, classify_mode, estimate_series, run_backward, run_forward
from .exceptions import MassLeakError, ModelError, ObservationError, ParameterError, ZeroEvidenceError
from .gaussian_kernels import (
    AffineNoise,
    MomentGaussian,
    ObsChannel,
    RootMessage,
    combine_moment_root,
    convolve_affine,
    posterior_product,
    root_absorb_observation,
    root_back_propagate,
    root_from_observation,
)
from .state_model import ModelSpec, ObservationSeries, StepParams, load_model, load_observations, unit_model

__version__ = "0.1.0"

__all__ = [
    "AffineNoise",
    "MassLeakError",
    "Mode",
    "ModelError",
    "ModelSpec",
    "MomentGaussian",
    "ObsChannel",
    "ObservationError",
    "ObservationSeries",
    "ParameterError",
    "RootMessage",
    "StepParams",
    "ZeroEvidenceError",
    "bayes_kalman",
    "classify_mode",
    "combine_moment_root",
    "convolve_affine",
    "estimate_series",
    "load_model",
    "load_observations",
    "posterior_product",
    "root_absorb_observation",
    "root_back_propagate",
    "root_from_observation",
    "run_backward",
    "run_forward",
    "unit_model",
]
