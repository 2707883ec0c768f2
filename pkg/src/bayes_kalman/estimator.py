"""Forward/backward Gaussian message passing on the scalar chain.

The posterior of ``w_s`` given every observation factors as

    p(w_s | x_0..x_n)  ∝  rho_s(w_s) * f_s(w_s)

where ``rho_s`` is the prediction of ``w_s`` from ``x_0..x_{s-1}`` (forward
pass, moment form) and ``f_s`` is the likelihood of ``x_s..x_n`` as a function
of ``w_s`` (backward pass, root form). ``x_s`` itself enters through the
backward message.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .gaussian_kernels import (
    MomentGaussian,
    RootMessage,
    combine_moment_root,
    convolve_affine,
    posterior_product,
    root_absorb_observation,
    root_back_propagate,
)
from .state_model import ModelSpec, ObservationSeries

__all__ = [
    "Mode",
    "QueryMode",
    "ForwardState",
    "BackwardState",
    "Estimate",
    "EstimateSeries",
    "forward_states",
    "backward_states",
    "run_forward",
    "run_backward",
    "bayes_kalman",
    "classify_mode",
    "estimate_series",
]

CONSTANT = RootMessage(0.0, 0.0)


class Mode(str, Enum):
    SMOOTHING = "smoothing"
    FILTER = "filter"
    PREDICTION = "prediction"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class QueryMode:
    tag: Mode
    s: int


@dataclass(frozen=True)
class ForwardState:
    t: int
    predicted: MomentGaussian
    updated: MomentGaussian | None = None

    @property
    def filtered(self) -> MomentGaussian:
        """Posterior of ``w_t`` given ``x_0..x_t``."""
        return self.predicted if self.updated is None else self.updated


@dataclass(frozen=True)
class BackwardState:
    t: int
    incoming: RootMessage
    absorbed: RootMessage


@dataclass(frozen=True)
class Estimate:
    t: int
    mean: float
    variance: float
    mode: Mode


class EstimateSeries(tuple):
    """Tuple of :class:`Estimate` rows ordered by ``t``."""

    @property
    def means(self):
        return [e.mean for e in self]

    @property
    def variances(self):
        return [e.variance for e in self]


def _check_s(spec: ModelSpec, s: int):
    if not 0 <= s <= spec.n:
        raise IndexError(f"s={s} outside 0..{spec.n}")


def forward_states(spec: ModelSpec, obs: ObservationSeries, upto: int | None = None) -> list[ForwardState]:
    """Forward recursion from the prior, for ``t = 0..upto`` (default ``n``)."""
    x = obs.check(spec)
    upto = spec.n if upto is None else upto
    states = []
    predicted = spec.prior
    for t in range(upto + 1):
        if t > 0:
            predicted = convolve_affine(states[-1].filtered, spec.transition(t))
        updated = posterior_product(predicted, spec.channel(t), x[t]) if t in x else None
        states.append(ForwardState(t, predicted, updated))
    return states


def backward_states(spec: ModelSpec, obs: ObservationSeries, downto: int = 0) -> list[BackwardState]:
    """Backward recursion from ``t = n`` down to ``downto``; returned in increasing ``t``."""
    x = obs.check(spec)
    states = []
    incoming = CONSTANT
    for t in range(spec.n, downto - 1, -1):
        if t < spec.n:
            incoming = root_back_propagate(states[-1].absorbed, spec.transition(t + 1))
        absorbed = root_absorb_observation(incoming, spec.channel(t), x[t]) if t in x else incoming
        states.append(BackwardState(t, incoming, absorbed))
    states.reverse()
    return states


def run_forward(spec: ModelSpec, obs: ObservationSeries, s: int) -> MomentGaussian:
    """Prediction of ``w_s`` from ``x_0..x_{s-1}``."""
    _check_s(spec, s)
    return forward_states(spec, obs, s)[-1].predicted


def run_backward(spec: ModelSpec, obs: ObservationSeries, s: int) -> RootMessage:
    """Likelihood of ``x_s..x_n`` as a message on ``w_s``."""
    _check_s(spec, s)
    return backward_states(spec, obs, s)[0].absorbed


def bayes_kalman(spec: ModelSpec, obs: ObservationSeries, s: int) -> MomentGaussian:
    """Posterior of ``w_s`` given all observations."""
    return combine_moment_root(run_forward(spec, obs, s), run_backward(spec, obs, s))


def classify_mode(spec: ModelSpec, s: int) -> QueryMode:
    _check_s(spec, s)
    if s < spec.n:
        return QueryMode(Mode.SMOOTHING, s)
    if all(spec.is_observed(t) for t in range(spec.n + 1)):
        return QueryMode(Mode.FILTER, s)
    return QueryMode(Mode.PREDICTION, s)


def estimate_series(spec: ModelSpec, obs: ObservationSeries, mode: str = "smooth") -> EstimateSeries:
    """Posterior summaries for every ``t``.

    ``mode="filter"`` conditions ``w_t`` on ``x_0..x_t``; ``mode="smooth"``
    conditions on the whole series. Either way the cost is linear in ``n``.
    """
    fwd = forward_states(spec, obs)
    if mode == "filter":
        rows = []
        for st in fwd:
            tag = Mode.FILTER if spec.is_observed(st.t) else Mode.PREDICTION
            g = st.filtered
            rows.append(Estimate(st.t, g.mean, g.variance, tag))
        return EstimateSeries(rows)
    if mode != "smooth":
        raise ValueError(f"unknown mode {mode!r}; expected 'filter' or 'smooth'")
    bwd = backward_states(spec, obs)
    rows = []
    for f, b in zip(fwd, bwd):
        g = combine_moment_root(f.predicted, b.absorbed)
        rows.append(Estimate(f.t, g.mean, g.variance, classify_mode(spec, f.t).tag))
    return EstimateSeries(rows)

