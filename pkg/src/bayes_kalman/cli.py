"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 numeric
failure. Every failure prints one ``error: ...`` line on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import bertrand, estimator, grid_oracle, state_model
from .exceptions import ModelError, NumericError, ObservationError, ParameterError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_NUMERIC = 3

DEFAULT_SEED = 0
VALIDATE_TOL = 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render(columns, rows, fmt, extra=None) -> str:
    if fmt == "json":
        doc = {"columns": list(columns), "rows": [dict(zip(columns, r)) for r in rows]}
        doc.update(extra or {})
        return json.dumps(doc, default=str) + "\n"
    lines = [",".join(columns)] + [",".join(_fmt(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def _emit(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} requires {', '.join(missing)}")


def _grid_cfg(args) -> grid_oracle.GridConfig:
    return grid_oracle.GridConfig(n_points=args.grid_points, pad=args.grid_pad)


def _series_rows(series, with_mode=False):
    if with_mode:
        return [(e.t, e.mean, e.variance, e.mode.value) for e in series]
    return [(e.t, e.mean, e.variance) for e in series]


def _cmd_filter(args):
    _require(args, "model", "obs")
    spec = state_model.load_model(args.model)
    obs = state_model.load_observations(args.obs)
    series = estimator.estimate_series(spec, obs, "filter")
    _emit(_render(("t", "mean", "variance"), _series_rows(series), args.format), args.out)


def _cmd_smooth(args):
    _require(args, "model", "obs")
    spec = state_model.load_model(args.model)
    obs = state_model.load_observations(args.obs)
    if args.s is not None:
        if not 0 <= args.s <= spec.n:
            raise UsageError(f"--s {args.s} outside 0..{spec.n}")
        g = estimator.bayes_kalman(spec, obs, args.s)
        rows = [(args.s, g.mean, g.variance)]
    else:
        rows = _series_rows(estimator.estimate_series(spec, obs, "smooth"))
    _emit(_render(("t", "mean", "variance"), rows, args.format), args.out)


def _cmd_predict(args):
    _require(args, "model", "obs")
    spec = state_model.load_model(args.model)
    if len(spec.observed_times) == spec.n + 1:
        raise UsageError("predict needs a model with at least one step flagged observed = false")
    obs = state_model.load_observations(args.obs)
    series = estimator.estimate_series(spec, obs, "smooth")
    _emit(_render(("t", "mean", "variance", "mode"), _series_rows(series, True), args.format), args.out)


def _cmd_simulate(args):
    _require(args, "model")
    spec = state_model.load_model(args.model)
    seed = DEFAULT_SEED if args.seed is None else args.seed
    states, obs = state_model.sample_trajectory(spec, seed)
    if args.format == "json":
        text = json.dumps({"observations": [{"t": t, "x": x} for t, x in obs.values]}) + "\n"
    else:
        text = state_model.dump_observations(obs)
    _emit(text, args.out)
    if args.states_out is not None:
        _emit(_render(("t", "w"), [(t, float(w)) for t, w in enumerate(states)], args.format), args.states_out)


def _validation_cases(args):
    seed = DEFAULT_SEED if args.seed is None else args.seed
    if args.model is not None:
        spec = state_model.load_model(args.model)
        if args.obs is not None:
            obs = state_model.load_observations(args.obs)
        else:
            obs = state_model.sample_trajectory(spec, seed)[1]
        yield 0, spec, obs
        return
    n_models = 20 if args.samples is None else args.samples
    for k in range(n_models):
        spec = state_model.random_model([seed, k])
        yield k, spec, state_model.sample_trajectory(spec, [seed, k])[1]


def _cmd_validate(args):
    cfg = _grid_cfg(args)
    rows = []
    worst = 0.0
    for k, spec, obs in _validation_cases(args):
        est = estimator.estimate_series(spec, obs, "smooth")
        orc = grid_oracle.grid_posterior_all(spec, obs, cfg)
        for e, dens in zip(est, orc):
            m, v = grid_oracle.moments(dens)
            diff = max(abs(m - e.mean), abs(v - e.variance))
            worst = max(worst, diff)
            rows.append((k, e.t, e.mean, e.variance, m, v, diff))
    columns = ("model", "t", "mean", "variance", "grid_mean", "grid_variance", "abs_diff")
    _emit(_render(columns, rows, args.format, {"max_abs_diff": worst}), args.out)
    print(f"max_abs_diff={worst!r}", file=sys.stderr)
    if not worst <= VALIDATE_TOL:
        print(f"error: estimator and grid oracle differ by {worst!r} > {VALIDATE_TOL!r}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def _cmd_bertrand(args):
    if not 0.0 < args.length <= 2.0:
        raise UsageError(f"--length must lie in (0, 2], got {args.length!r}")
    if args.samples is not None and args.samples < 1:
        raise UsageError("--samples must be at least 1")
    params = bertrand.PARAMETERIZATIONS if args.param == "both" else (args.param,)
    n = 1_000_000 if args.samples is None else args.samples
    seed = DEFAULT_SEED if args.seed is None else args.seed
    rows = []
    for p in params:
        exact = bertrand.exact_probability(p, args.length)
        est, err = bertrand.mc_probability(p, args.length, n, seed)
        rows.append((p, args.length, exact, est, err))
    _emit(_render(("param", "length", "exact", "estimate", "stderr"), rows, args.format), args.out)


COMMANDS = {
    "filter": (_cmd_filter, "posterior of each w_t given x_0..x_t"),
    "smooth": (_cmd_smooth, "posterior of w_s given every observation (all s, or --s)"),
    "predict": (_cmd_predict, "smoothing run on a model with unobserved steps, rows tagged by mode"),
    "simulate": (_cmd_simulate, "sample a state trajectory and observations from the model"),
    "validate": (_cmd_validate, "compare estimator moments with the grid-quadrature oracle"),
    "bertrand": (_cmd_bertrand, "chord-length probabilities under two parameterizations"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bayes-kalman", description="Scalar linear-Gaussian filtering and smoothing.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, help=f"random seed (default {DEFAULT_SEED})")
        if name == "bertrand":
            p.add_argument("--param", choices=("first", "second", "both"), default="both")
            p.add_argument("--length", type=float, default=math.sqrt(3.0))
            p.add_argument("--samples", type=int, help="Monte Carlo sample count (default 1000000)")
            continue
        p.add_argument("--model", help="model file (TOML)")
        if name != "simulate":
            p.add_argument("--obs", help="observation CSV with header t,x")
        if name == "smooth":
            p.add_argument("--s", type=int, help="single time index to smooth")
        if name == "simulate":
            p.add_argument("--states-out", help="also write the sampled states (t,w)")
        if name == "validate":
            p.add_argument("--samples", type=int, help="number of random models when --model is absent (default 20)")
            p.add_argument("--grid-points", type=int, default=grid_oracle.GridConfig.n_points)
            p.add_argument("--grid-pad", type=float, default=grid_oracle.GridConfig.pad)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        return COMMANDS[args.command][0](args) or EXIT_OK
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ModelError, ObservationError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
