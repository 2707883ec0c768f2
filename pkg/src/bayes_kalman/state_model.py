"""Scalar linear-Gaussian state-space model on the chain ``t = 0, 1, ..., n``.

::

    w_0 ~ N(mu0, sigma0**2)
    w_t ~ N(a_t * w_{t-1} + b_t, r_t**2)        t = 1..n
    x_t ~ N(c_t * w_t + d_t, q_t**2)            for every observed t

Step ``t`` (``t >= 1``) bundles the transition into ``w_t`` with the
observation channel of ``w_t``. Time 0 has an observation channel but no
transition. A step flagged ``observed = False`` contributes no likelihood.

Model files are TOML::

    mu0 = 0.0
    sigma0 = 1.0
    n = 2

    [defaults]            # optional, fills any key missing below
    a = 1.0
    b = 0.0
    r = 1.0
    c = 1.0
    d = 0.0
    q = 1.0

    [channel0]            # observation of w_0
    observed = true

    [[step]]              # t = 1
    a = 0.9
    [[step]]              # t = 2
    observed = false

If ``[[step]]`` is absent, ``n`` steps are expanded from ``[defaults]``.
Observation files are CSV with header ``t,x``.
"""

from __future__ import annotations

import csv
import io
import math
import sys
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exceptions import ModelError, ObservationError
from .gaussian_kernels import AffineNoise, MomentGaussian, ObsChannel

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = [
    "StepParams",
    "ModelSpec",
    "ObservationSeries",
    "validate",
    "parse_model",
    "load_model",
    "dump_model",
    "parse_observations",
    "load_observations",
    "dump_observations",
    "sample_trajectory",
    "unit_model",
    "random_model",
    "model_from_mapping",
]

_TRANSITION_KEYS = ("a", "b", "r")
_CHANNEL_KEYS = ("c", "d", "q")


@dataclass(frozen=True)
class StepParams:
    transition: AffineNoise
    channel: ObsChannel
    observed: bool = True


@dataclass(frozen=True)
class ModelSpec:
    """Prior, time-0 channel and the ``n`` transition/observation steps."""

    prior: MomentGaussian
    channel0: ObsChannel
    steps: tuple[StepParams, ...] = ()
    observed0: bool = True
    n: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if self.n is None:
            object.__setattr__(self, "n", len(self.steps))
        errors = validate(self)
        if errors:
            raise ModelError(errors)

    def channel(self, t: int) -> ObsChannel:
        return self.channel0 if t == 0 else self.steps[t - 1].channel

    def transition(self, t: int) -> AffineNoise:
        """Transition from ``w_{t-1}`` into ``w_t``; ``t >= 1``."""
        if t < 1:
            raise IndexError("time 0 has no incoming transition")
        return self.steps[t - 1].transition

    def is_observed(self, t: int) -> bool:
        return self.observed0 if t == 0 else self.steps[t - 1].observed

    @property
    def observed_times(self) -> list[int]:
        return [t for t in range(self.n + 1) if self.is_observed(t)]


@dataclass(frozen=True)
class ObservationSeries:
    """Observed values ``(t, x_t)``, strictly increasing in ``t``."""

    values: tuple[tuple[int, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        vals = tuple((int(t), float(x)) for t, x in self.values)
        for (t0, _), (t1, _) in zip(vals, vals[1:]):
            if t1 <= t0:
                raise ObservationError(f"observation times must be strictly increasing ({t0} then {t1})")
        for t, x in vals:
            if t < 0:
                raise ObservationError(f"negative observation time {t}")
            if not math.isfinite(x):
                raise ObservationError(f"non-finite observation at t={t}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_array(cls, xs: Sequence[float], times: Iterable[int] | None = None):
        times = range(len(xs)) if times is None else times
        return cls(tuple(zip(times, xs)))

    def as_dict(self) -> dict[int, float]:
        return dict(self.values)

    def check(self, spec: ModelSpec) -> dict[int, float]:
        """Return ``{t: x_t}`` after checking it matches the observed steps of ``spec``."""
        obs = self.as_dict()
        for t in obs:
            if t > spec.n:
                raise ObservationError(f"observation at t={t} beyond horizon n={spec.n}")
            if not spec.is_observed(t):
                raise ObservationError(f"observation given for unobserved step t={t}")
        missing = [t for t in spec.observed_times if t not in obs]
        if missing:
            raise ObservationError(f"missing observations for t={missing}")
        return obs

    def __len__(self):
        return len(self.values)


# -- validation ---------------------------------------------------------------

def _check_number(errors, where, key, value, positive=False):
    try:
        value = float(value)
    except (TypeError, ValueError):
        errors.append(f"{where}: {key} is not a number ({value!r})")
        return
    if not math.isfinite(value):
        errors.append(f"{where}: non-finite {key}")
    elif positive and value <= 0.0:
        label = {
            "q": "nonpositive observation noise",
            "r": "nonpositive transition noise",
            "sigma0": "nonpositive prior std",
        }[key]
        errors.append(f"{where}: {label} ({key}={value!r})")


def validate(spec) -> list[str]:
    """Collect every invariant violation of a model.

    ``spec`` is a :class:`ModelSpec` or a raw mapping as read from a model
    file. Violations are returned, not raised; an empty list means valid.
    """
    if isinstance(spec, ModelSpec):
        errors = []
        if spec.n is None or spec.n < 0:
            errors.append(f"structure: horizon n must be a nonnegative integer, got {spec.n!r}")
        elif len(spec.steps) != spec.n:
            errors.append(f"structure: {len(spec.steps)} steps given for horizon n={spec.n}")
        return errors
    return _validate_mapping(spec)


def _validate_mapping(cfg: Mapping) -> list[str]:
    errors = []
    if not isinstance(cfg, Mapping):
        return [f"structure: expected a table, got {type(cfg).__name__}"]
    for key, positive in (("mu0", False), ("sigma0", True)):
        if key not in cfg:
            errors.append(f"prior: missing {key}")
        else:
            _check_number(errors, "prior", key, cfg[key], positive)
    defaults = cfg.get("defaults", {})
    steps = cfg.get("step")
    n = cfg.get("n")
    if n is None and steps is None:
        errors.append("structure: need n or [[step]] tables")
        n = 0
    elif n is not None and (isinstance(n, bool) or not isinstance(n, int) or n < 0):
        errors.append(f"structure: horizon n must be a nonnegative integer, got {n!r}")
        n = None
    if steps is not None and n is not None and len(steps) != n:
        errors.append(f"structure: {len(steps)} steps given for horizon n={n}")

    tables = [("t=0", cfg.get("channel0", {}), _CHANNEL_KEYS)]
    if steps is None:
        steps = [{}] * (n or 0)
    for t, step in enumerate(steps, start=1):
        tables.append((f"t={t}", step, _TRANSITION_KEYS + _CHANNEL_KEYS))
    for where, table, keys in tables:
        for key in keys:
            value = table.get(key, defaults.get(key))
            if value is None:
                errors.append(f"{where}: missing {key}")
            else:
                _check_number(errors, where, key, value, key in ("q", "r"))
        observed = table.get("observed", defaults.get("observed", True))
        if not isinstance(observed, bool):
            errors.append(f"{where}: observed must be true or false")
    return errors


# -- model file io ------------------------------------------------------------

def parse_model(text: str) -> ModelSpec:
    """Parse TOML model text; raises :class:`ModelError` listing all violations."""
    try:
        cfg = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ModelError([f"syntax: {exc}"]) from exc
    return model_from_mapping(cfg)


def model_from_mapping(cfg: Mapping) -> ModelSpec:
    errors = validate(cfg)
    if errors:
        raise ModelError(errors)
    defaults = cfg.get("defaults", {})

    def get(table, key):
        return float(table.get(key, defaults.get(key)))

    def observed(table):
        return table.get("observed", defaults.get("observed", True))

    raw_steps = cfg.get("step")
    if raw_steps is None:
        raw_steps = [{}] * cfg["n"]
    ch0 = cfg.get("channel0", {})
    steps = tuple(
        StepParams(
            AffineNoise(get(s, "a"), get(s, "b"), get(s, "r")),
            ObsChannel(get(s, "c"), get(s, "d"), get(s, "q")),
            observed(s),
        )
        for s in raw_steps
    )
    return ModelSpec(
        prior=MomentGaussian(float(cfg["mu0"]), float(cfg["sigma0"]) ** 2),
        channel0=ObsChannel(get(ch0, "c"), get(ch0, "d"), get(ch0, "q")),
        steps=steps,
        observed0=observed(ch0),
    )


def load_model(path) -> ModelSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def _num(value: float) -> str:
    # repr is the shortest string that round-trips; TOML wants a float literal
    text = repr(float(value))
    return text if any(ch in text for ch in ".en") else text + ".0"


def dump_model(spec: ModelSpec) -> str:
    """Serialize ``spec`` as TOML, one explicit ``[[step]]`` table per step."""
    lines = [
        f"mu0 = {_num(spec.prior.mean)}",
        f"sigma0 = {_num(spec.prior.std)}",
        f"n = {spec.n}",
        "",
        "[channel0]",
        f"c = {_num(spec.channel0.c)}",
        f"d = {_num(spec.channel0.d)}",
        f"q = {_num(spec.channel0.q)}",
        f"observed = {'true' if spec.observed0 else 'false'}",
    ]
    for step in spec.steps:
        tr, ch = step.transition, step.channel
        lines += ["", "[[step]]"]
        lines += [f"{k} = {_num(getattr(tr, k))}" for k in _TRANSITION_KEYS]
        lines += [f"{k} = {_num(getattr(ch, k))}" for k in _CHANNEL_KEYS]
        lines.append(f"observed = {'true' if step.observed else 'false'}")
    return "\n".join(lines) + "\n"


def unit_model(n: int, *, mu0=0.0, sigma0=1.0, a=1.0, b=0.0, r=1.0, c=1.0, d=0.0, q=1.0,
               unobserved: Iterable[int] = ()) -> ModelSpec:
    """Time-invariant model; ``unobserved`` lists times without an observation."""
    unobserved = set(unobserved)
    step = (AffineNoise(a, b, r), ObsChannel(c, d, q))
    return ModelSpec(
        prior=MomentGaussian(mu0, sigma0 ** 2),
        channel0=step[1],
        steps=tuple(StepParams(*step, t not in unobserved) for t in range(1, n + 1)),
        observed0=0 not in unobserved,
    )


# -- observation csv ------------------------------------------------------------

def parse_observations(text: str) -> ObservationSeries:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["t", "x"]:
        raise ObservationError("observation file must start with header 't,x'")
    values = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise ObservationError(f"line {lineno}: expected 2 fields, got {len(row)}")
        try:
            values.append((int(row[0]), float(row[1])))
        except ValueError as exc:
            raise ObservationError(f"line {lineno}: {exc}") from exc
    return ObservationSeries(tuple(values))


def load_observations(path) -> ObservationSeries:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_observations(fh.read())


def dump_observations(obs: ObservationSeries) -> str:
    return "t,x\n" + "".join(f"{t},{x!r}\n" for t, x in obs.values)


# -- simulation -----------------------------------------------------------------

def sample_trajectory(spec: ModelSpec, seed: int) -> tuple[np.ndarray, ObservationSeries]:
    """Draw states ``w_0..w_n`` and observations from the generative model.

    The draw order is fixed (state, then its observation if any, per time), so
    the output is a pure function of ``(spec, seed)``.
    """
    rng = np.random.default_rng(seed)
    states = np.empty(spec.n + 1)
    values = []
    w = spec.prior.mean + spec.prior.std * rng.standard_normal()
    for t in range(spec.n + 1):
        if t > 0:
            tr = spec.transition(t)
            w = tr.a * w + tr.b + tr.r * rng.standard_normal()
        states[t] = w
        if spec.is_observed(t):
            ch = spec.channel(t)
            values.append((t, ch.c * w + ch.d + ch.q * rng.standard_normal()))
    return states, ObservationSeries(tuple(values))


def random_model(seed, max_n: int = 6, *, gain=(0.2, 3.0), offset=(-2.0, 2.0)) -> ModelSpec:
    """Random fully observed model with horizon ``0..max_n``.

    Gains, noise scales and the prior std are uniform on ``gain``; offsets and
    the prior mean are uniform on ``offset``.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(0, max_n + 1))

    def g():
        return float(rng.uniform(*gain))

    def o():
        return float(rng.uniform(*offset))

    prior = MomentGaussian(o(), g() ** 2)
    channel0 = ObsChannel(g(), o(), g())
    steps = tuple(StepParams(AffineNoise(g(), o(), g()), ObsChannel(g(), o(), g())) for _ in range(n))
    return ModelSpec(prior, channel0, steps)
