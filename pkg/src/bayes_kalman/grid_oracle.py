"""Brute-force Bayesian conditioning on a uniform grid.

Densities are stored as point values on a uniform grid and integrated with
the trapezoid rule. Transitions are applied by quadrature against the
Gaussian kernel, observations by pointwise multiplication and
renormalization. Nothing here uses the closed-form Gaussian algebra, so the
results serve as an independent check of :mod:`bayes_kalman.estimator`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import ndtr

from .exceptions import MassLeakError, ParameterError, ZeroEvidenceError
from .gaussian_kernels import AffineNoise, MomentGaussian, ObsChannel
from .state_model import ModelSpec, ObservationSeries

__all__ = [
    "Grid",
    "GridDensity",
    "GridConfig",
    "trapezoid_weights",
    "grid_probability",
    "grid_bayes",
    "grid_causal",
    "grid_posterior",
    "grid_posterior_all",
    "moments",
    "gaussian_likelihood",
    "interval_likelihood",
]

MASS_LEAK_TOL = 1e-6


@dataclass(frozen=True)
class Grid:
    lo: float
    hi: float
    n_points: int = 4097

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.lo >= self.hi:
            raise ParameterError(f"grid bounds must satisfy lo < hi, got [{self.lo}, {self.hi}]")
        if self.n_points < 16:
            raise ParameterError(f"grid needs at least 16 points, got {self.n_points}")

    @classmethod
    def around(cls, mean: float, std: float, n_sigma: float = 8.0, pad: float = 0.2, n_points: int = 4097):
        half = n_sigma * std * (1.0 + pad)
        return cls(mean - half, mean + half, n_points)

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n_points)


def trapezoid_weights(grid: Grid) -> np.ndarray:
    w = np.full(grid.n_points, grid.spacing)
    w[0] = w[-1] = 0.5 * grid.spacing
    return w


@dataclass(frozen=True, eq=False)
class GridDensity:
    """Nonnegative point values on ``grid`` with unit trapezoid integral."""

    grid: Grid
    weights: np.ndarray

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float)
        if weights.shape != (self.grid.n_points,):
            raise ParameterError("weights must have one value per grid point")
        if not np.all(np.isfinite(weights)) or np.any(weights < 0.0):
            raise ParameterError("density weights must be finite and nonnegative")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_function(cls, grid: Grid, fn: Callable[[np.ndarray], np.ndarray]) -> "GridDensity":
        return _normalized(grid, np.asarray(fn(grid.points), dtype=float))

    @classmethod
    def gaussian(cls, g: MomentGaussian, grid: Grid | None = None, **grid_kw) -> "GridDensity":
        grid = grid or Grid.around(g.mean, g.std, **grid_kw)
        # written out here rather than borrowed from gaussian_kernels
        return cls.from_function(grid, lambda w: np.exp(-0.5 * ((w - g.mean) / g.std) ** 2))

    def integral(self) -> float:
        return float(trapezoid_weights(self.grid) @ self.weights)


def _normalized(grid: Grid, values: np.ndarray) -> GridDensity:
    total = float(trapezoid_weights(grid) @ values)
    if not math.isfinite(total) or total <= 0.0:
        raise ZeroEvidenceError("evidence integral is zero or non-finite")
    return GridDensity(grid, values / total)


def _eval_likelihood(likelihood, points):
    vals = np.broadcast_to(np.asarray(likelihood(points), dtype=float), points.shape)
    if not np.all(np.isfinite(vals)):
        raise ParameterError("likelihood values must be finite")
    return vals


def gaussian_likelihood(ch: ObsChannel, x: float) -> Callable[[np.ndarray], np.ndarray]:
    """Point likelihood of ``x`` through ``ch``, scaled to peak 1."""
    return lambda w: np.exp(-0.5 * ((x - ch.c * w - ch.d) / ch.q) ** 2)


def interval_likelihood(ch: ObsChannel, x: float, eps: float) -> Callable[[np.ndarray], np.ndarray]:
    """Probability that the observation lands in ``[x - eps, x + eps]``."""
    def fn(w):
        mu = ch.c * w + ch.d
        return ndtr((x + eps - mu) / ch.q) - ndtr((x - eps - mu) / ch.q)
    return fn


def grid_probability(rho: GridDensity, likelihood) -> float:
    """``∫ likelihood(w) rho(w) dw`` for a likelihood with values in ``[0, 1]``."""
    vals = _eval_likelihood(likelihood, rho.grid.points)
    if np.any(vals < 0.0) or np.any(vals > 1.0):
        raise ParameterError("likelihood values must lie in [0, 1]")
    return float(trapezoid_weights(rho.grid) @ (vals * rho.weights))


def grid_bayes(rho: GridDensity, likelihood) -> GridDensity:
    """Multiply by the likelihood and renormalize."""
    vals = _eval_likelihood(likelihood, rho.grid.points)
    if np.any(vals < 0.0):
        raise ParameterError("likelihood values must be nonnegative")
    return _normalized(rho.grid, vals * rho.weights)


def _kernel(t: AffineNoise, src: Grid, dst: Grid) -> np.ndarray:
    """``K[i, j] = N(dst_i; a*src_j + b, r**2)``."""
    z = (dst.points[:, None] - (t.a * src.points[None, :] + t.b)) / t.r
    z *= z
    z *= -0.5
    np.exp(z, out=z)
    z *= 1.0 / (math.sqrt(2.0 * math.pi) * t.r)
    return z


def _leaked_mass(rho: GridDensity, t: AffineNoise, out_grid: Grid) -> float:
    centers = t.a * rho.grid.points + t.b
    inside = ndtr((out_grid.hi - centers) / t.r) - ndtr((out_grid.lo - centers) / t.r)
    return float(trapezoid_weights(rho.grid) @ (rho.weights * (1.0 - inside)))


def grid_causal(rho: GridDensity, t: AffineNoise, out_grid: Grid, *, kernel: np.ndarray | None = None) -> GridDensity:
    """Density of ``a*w + b + r*noise`` for ``w ~ rho``, on ``out_grid``.

    Raises :class:`MassLeakError` if more than ``1e-6`` of the mass lands
    outside ``out_grid``.
    """
    leak = _leaked_mass(rho, t, out_grid)
    if leak > MASS_LEAK_TOL:
        raise MassLeakError(f"{leak:.3g} of the transported mass falls outside [{out_grid.lo}, {out_grid.hi}]")
    if kernel is None:
        kernel = _kernel(t, rho.grid, out_grid)
    out = kernel @ (trapezoid_weights(rho.grid) * rho.weights)
    return _normalized(out_grid, out)


def moments(rho: GridDensity) -> tuple[float, float]:
    """Trapezoid mean and central second moment."""
    w = trapezoid_weights(rho.grid) * rho.weights
    pts = rho.grid.points
    total = w.sum()
    mean = float(w @ pts / total)
    var = float(w @ (pts - mean) ** 2 / total)
    return mean, var


@dataclass(frozen=True)
class GridConfig:
    """Discretization settings for :func:`grid_posterior`.

    Each time gets its own grid centred on the grid-filtered prediction,
    spanning ``n_sigma * (1 + pad)`` standard deviations either side, unless
    ``bounds`` fixes one ``(lo, hi)`` for every time.
    """

    n_points: int = 4097
    n_sigma: float = 8.0
    pad: float = 0.2
    bounds: tuple[float, float] | None = None

    def grid_for(self, mean: float, var: float) -> Grid:
        if self.bounds is not None:
            return Grid(self.bounds[0], self.bounds[1], self.n_points)
        return Grid.around(mean, math.sqrt(var), self.n_sigma, self.pad, self.n_points)


def _forward_pass(spec: ModelSpec, x: dict, cfg: GridConfig):
    """Grid-filter forward; returns predicted densities and the kernels used."""
    prior = spec.prior
    grid = cfg.grid_for(prior.mean, prior.variance)
    rho = GridDensity.from_function(grid, lambda w: np.exp(-0.5 * (w - prior.mean) ** 2 / prior.variance))
    predicted = [rho]
    kernels = []
    for t in range(spec.n + 1):
        filt = grid_bayes(rho, gaussian_likelihood(spec.channel(t), x[t])) if t in x else rho
        if t == spec.n:
            break
        tr = spec.transition(t + 1)
        m, v = moments(filt)
        out_grid = cfg.grid_for(tr.a * m + tr.b, tr.a * tr.a * v + tr.r * tr.r)
        kernel = _kernel(tr, filt.grid, out_grid)
        rho = grid_causal(filt, tr, out_grid, kernel=kernel)
        predicted.append(rho)
        kernels.append(kernel)
    return predicted, kernels


def grid_posterior_all(spec: ModelSpec, obs: ObservationSeries, grid_cfg: GridConfig | None = None) -> list[GridDensity]:
    """Posterior of every ``w_s`` given all observations, ``s = 0..n``.

    Forward: filter on the grid, keeping each prediction. Backward: carry the
    likelihood of the future observations as a function on each grid,
    integrating it against the transition kernel one step at a time and
    rescaling to unit maximum to stay clear of underflow.
    """
    cfg = grid_cfg or GridConfig()
    x = obs.check(spec)
    predicted, kernels = _forward_pass(spec, x, cfg)
    posteriors = [None] * (spec.n + 1)
    suffix = np.ones(predicted[-1].grid.n_points)
    for t in range(spec.n, -1, -1):
        pts = predicted[t].grid.points
        if t < spec.n:
            nxt = predicted[t + 1].grid
            suffix = kernels[t].T @ (trapezoid_weights(nxt) * suffix)
        if t in x:
            suffix = suffix * gaussian_likelihood(spec.channel(t), x[t])(pts)
        peak = suffix.max()
        if not peak > 0.0:
            raise ZeroEvidenceError(f"future-observation likelihood vanished on the grid at t={t}")
        suffix = suffix / peak
        posteriors[t] = _normalized(predicted[t].grid, suffix * predicted[t].weights)
    return posteriors


def grid_posterior(spec: ModelSpec, obs: ObservationSeries, s: int, grid_cfg: GridConfig | None = None) -> GridDensity:
    """Posterior of ``w_s`` given all observations, by quadrature."""
    if not 0 <= s <= spec.n:
        raise IndexError(f"s={s} outside 0..{spec.n}")
    return grid_posterior_all(spec, obs, grid_cfg)[s]
