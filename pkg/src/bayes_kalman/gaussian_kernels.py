"""Closed-form scalar Gaussian algebra.

Two representations are used:

* :class:`MomentGaussian` is a normalized density ``N(mean, variance)`` and
  carries the forward (predicted / updated) states.
* :class:`RootMessage` is the unnormalized function ``exp(-0.5 * (u*w - v)**2)``
  known only up to a positive constant. It carries the backward likelihood
  messages. ``(u, v)`` and ``(-u, -v)`` describe the same function; the
  canonical form has ``u >= 0`` (and ``v >= 0`` when ``u == 0``).

Two identities close both families under the operations of a linear-Gaussian
chain:

* pushing a Gaussian through ``w' = a*w + b + r*noise`` gives another Gaussian
  with mean ``a*mean + b`` and variance ``a**2 * variance + r**2``;
* a product of two Gaussian-shaped exponentials in ``w`` is again
  Gaussian-shaped after completing the square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError

__all__ = [
    "MomentGaussian",
    "RootMessage",
    "AffineNoise",
    "ObsChannel",
    "canonical_root",
    "convolve_affine",
    "posterior_product",
    "root_from_observation",
    "root_back_propagate",
    "root_absorb_observation",
    "combine_moment_root",
    "eval_density",
    "eval_root",
]


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value!r}")
    return value


def _positive(name, value):
    value = _finite(name, value)
    if value <= 0.0:
        raise ParameterError(f"{name} must be strictly positive, got {value!r}")
    return value


@dataclass(frozen=True)
class MomentGaussian:
    """Normalized Gaussian density in mean/variance form."""

    mean: float
    variance: float

    def __post_init__(self):
        object.__setattr__(self, "mean", _finite("mean", self.mean))
        object.__setattr__(self, "variance", _positive("variance", self.variance))

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    @property
    def precision(self) -> float:
        return 1.0 / self.variance


@dataclass(frozen=True)
class RootMessage:
    """Unnormalized message ``exp(-0.5 * (u*w - v)**2)``, stored canonically.

    ``u = 0`` is the constant (uninformative) message.
    """

    u: float = 0.0
    v: float = 0.0

    def __post_init__(self):
        u, v = canonical_root(_finite("u", self.u), _finite("v", self.v))
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def is_constant(self) -> bool:
        return self.u == 0.0


@dataclass(frozen=True)
class AffineNoise:
    """Transition kernel ``w' ~ N(a*w + b, r**2)``.

    ``a = 0`` is allowed: the next state then forgets the previous one.
    """

    a: float
    b: float
    r: float

    def __post_init__(self):
        object.__setattr__(self, "a", _finite("a", self.a))
        object.__setattr__(self, "b", _finite("b", self.b))
        object.__setattr__(self, "r", _positive("r", self.r))


@dataclass(frozen=True)
class ObsChannel:
    """Observation channel ``x ~ N(c*w + d, q**2)``; ``c = 0`` carries no information."""

    c: float
    d: float
    q: float

    def __post_init__(self):
        object.__setattr__(self, "c", _finite("c", self.c))
        object.__setattr__(self, "d", _finite("d", self.d))
        object.__setattr__(self, "q", _positive("q", self.q))


def canonical_root(u, v):
    """Return the representative of ``(u, v)`` with ``u >= 0``.

    For ``u == 0`` the sign of ``v`` is also fixed (``v >= 0``), since the
    function only depends on ``v**2`` there. Signed zeros are cleared.
    """
    if u < 0.0 or (u == 0.0 and v < 0.0):
        u, v = -u, -v
    return u + 0.0, v + 0.0


def convolve_affine(g: MomentGaussian, t: AffineNoise) -> MomentGaussian:
    """Push the density ``g`` through the transition ``t``."""
    return MomentGaussian(t.a * g.mean + t.b, t.a * t.a * g.variance + t.r * t.r)


def posterior_product(g: MomentGaussian, ch: ObsChannel, x: float) -> MomentGaussian:
    """Bayes update of ``g`` with one observation ``x`` through channel ``ch``.

    Variance ``q²σ²/(q² + c²σ²)``, mean ``μ + σ̃²·(c/q²)·(x - d - cμ)``.
    """
    x = _finite("x", x)
    q2 = ch.q * ch.q
    var = q2 * g.variance / (q2 + ch.c * ch.c * g.variance)
    mean = g.mean + var * (ch.c / q2) * (x - ch.d - ch.c * g.mean)
    return MomentGaussian(mean, var)


def root_from_observation(ch: ObsChannel, x: float) -> RootMessage:
    """Likelihood of ``x`` as a function of the state, in root form."""
    x = _finite("x", x)
    return RootMessage(ch.c / ch.q, (x - ch.d) / ch.q)


def root_back_propagate(m: RootMessage, t: AffineNoise) -> RootMessage:
    """Pull a message on the next state back through the transition ``t``.

    Computes ``∫ N(w'; a*w + b, r²) m(w') dw'`` as a function of ``w``.
    """
    if m.is_constant:
        return m
    scale = math.sqrt(1.0 + t.r * t.r * m.u * m.u)
    return RootMessage(t.a * m.u / scale, (m.v - t.b * m.u) / scale)


def root_absorb_observation(m: RootMessage, ch: ObsChannel, x: float) -> RootMessage:
    """Multiply a message by the likelihood of ``x`` and complete the square."""
    x = _finite("x", x)
    resid = (x - ch.d) / ch.q
    lik_u = ch.c / ch.q
    u2 = lik_u * lik_u + m.u * m.u
    if u2 == 0.0:
        # both factors constant; keep the exact value of the product
        return RootMessage(0.0, math.hypot(m.v, resid))
    u = math.sqrt(u2)
    return RootMessage(u, (lik_u * resid + m.u * m.v) / u)


def combine_moment_root(g: MomentGaussian, m: RootMessage) -> MomentGaussian:
    """Normalized product of a density with a message."""
    if m.is_constant:
        return g
    prec = 1.0 / g.variance + m.u * m.u
    return MomentGaussian((g.mean / g.variance + m.u * m.v) / prec, 1.0 / prec)


def eval_density(g: MomentGaussian, w):
    """Density of ``g`` at ``w`` (scalar or array)."""
    z = (np.asarray(w, dtype=float) - g.mean) / g.std
    out = np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi * g.variance)
    return float(out) if out.ndim == 0 else out


def eval_root(m: RootMessage, w):
    """Value of ``exp(-0.5 * (u*w - v)**2)`` at ``w``; always in ``(0, 1]``."""
    z = m.u * np.asarray(w, dtype=float) - m.v
    out = np.exp(-0.5 * z * z)
    return float(out) if out.ndim == 0 else out
