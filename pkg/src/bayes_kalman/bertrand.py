"""Chords of the unit circle under two "uniform" parameterizations.

``first``: a chord is a point ``(alpha, beta)`` of the rectangle
``(0, 2*pi] x (0, pi/2]`` with normalized area measure; ``beta`` is the angle
between the chord and the radius at one of its endpoints, so the length is
``2*cos(beta)``.

``second``: a chord is identified with its midpoint ``(x, y)`` in the open
unit disk with normalized area measure; the length is ``2*sqrt(1 - x² - y²)``.

The probability that a chord is shorter than ``sqrt(3)`` is ``2/3`` under the
first and ``3/4`` under the second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import ParameterError

__all__ = [
    "ChordParamFirst",
    "ChordParamSecond",
    "PARAMETERIZATIONS",
    "chord_length",
    "exact_probability",
    "mc_probability",
]

PARAMETERIZATIONS = ("first", "second")
CHUNK = 1 << 16


@dataclass(frozen=True)
class ChordParamFirst:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0 * math.pi and 0.0 < self.beta <= 0.5 * math.pi):
            raise ParameterError(f"(alpha, beta) = ({self.alpha}, {self.beta}) outside (0, 2pi] x (0, pi/2]")


@dataclass(frozen=True)
class ChordParamSecond:
    x: float
    y: float

    def __post_init__(self):
        if not self.x * self.x + self.y * self.y < 1.0:
            raise ParameterError(f"({self.x}, {self.y}) is not inside the open unit disk")


def chord_length(p: Union[ChordParamFirst, ChordParamSecond]) -> float:
    if isinstance(p, ChordParamFirst):
        return 2.0 * math.cos(p.beta)
    if isinstance(p, ChordParamSecond):
        return 2.0 * math.sqrt(1.0 - p.x * p.x - p.y * p.y)
    raise TypeError(f"not a chord parameterization: {p!r}")


def _check(param, length):
    if param not in PARAMETERIZATIONS:
        raise ValueError(f"parameterization must be one of {PARAMETERIZATIONS}, got {param!r}")
    if not 0.0 < length <= 2.0:
        raise ParameterError(f"chord length threshold must lie in (0, 2], got {length!r}")


def exact_probability(param: str, length: float = math.sqrt(3.0)) -> float:
    """Measure of the chords shorter than ``length``."""
    _check(param, length)
    if param == "first":
        # 2cos(beta) < l  <=>  beta > arccos(l/2)
        return 1.0 - math.acos(0.5 * length) / (0.5 * math.pi)
    # 2sqrt(1 - rho²) < l  <=>  rho² > 1 - l²/4
    return 0.25 * length * length


def _sample_lengths(param, rng, size):
    if param == "first":
        # alpha does not affect the length but is drawn to keep the sampled
        # measure the full rectangle
        rng.uniform(0.0, 2.0 * math.pi, size)
        beta = 0.5 * math.pi * (1.0 - rng.random(size))
        return 2.0 * np.cos(beta)
    radius = np.sqrt(rng.random(size))
    theta = rng.uniform(0.0, 2.0 * math.pi, size)
    x, y = radius * np.cos(theta), radius * np.sin(theta)
    return 2.0 * np.sqrt(np.maximum(1.0 - x * x - y * y, 0.0))


def mc_probability(param: str, length: float = math.sqrt(3.0), n_samples: int = 1_000_000, seed: int = 0):
    """Monte Carlo frequency of chords shorter than ``length``.

    Returns ``(estimate, stderr)`` with the binomial standard error. The
    budget is split into fixed-size chunks with independent child seeds, so
    the answer does not depend on how chunks are scheduled.
    """
    _check(param, length)
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    n_chunks = -(-n_samples // CHUNK)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    hits = 0
    for k, child in enumerate(children):
        size = min(CHUNK, n_samples - k * CHUNK)
        lengths = _sample_lengths(param, np.random.default_rng(child), size)
        hits += int(np.count_nonzero(lengths < length))
    p = hits / n_samples
    return p, math.sqrt(p * (1.0 - p) / n_samples)
