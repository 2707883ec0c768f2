import math

import pytest

from bayes_kalman.estimator import (
    Mode,
    backward_states,
    bayes_kalman,
    classify_mode,
    estimate_series,
    forward_states,
    run_backward,
    run_forward,
)
from bayes_kalman.exceptions import ObservationError
from bayes_kalman.gaussian_kernels import AffineNoise, MomentGaussian, ObsChannel, RootMessage, convolve_affine
from bayes_kalman.grid_oracle import GridConfig, grid_posterior, grid_posterior_all, moments
from bayes_kalman.state_model import ModelSpec, ObservationSeries, StepParams, random_model, sample_trajectory, unit_model

obs_of = ObservationSeries.from_array


def moments_of(g):
    return g.mean, g.variance


class TestForward:
    def test_one_step(self):
        g = run_forward(unit_model(1), obs_of([1.0, 1.0]), 1)
        assert moments_of(g) == pytest.approx((0.5, 1.5), abs=1e-12)

    def test_two_steps(self):
        g = run_forward(unit_model(2), obs_of([1.0, 1.0, 0.0]), 2)
        assert moments_of(g) == pytest.approx((0.8, 1.6), abs=1e-12)

    def test_s0_is_prior(self):
        spec = unit_model(2, mu0=3.0, sigma0=2.0)
        assert run_forward(spec, obs_of([9.0, 9.0, 9.0]), 0) == spec.prior

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            run_forward(unit_model(1), obs_of([1.0, 1.0]), 2)

    def test_rejects_value_for_unobserved(self):
        with pytest.raises(ObservationError):
            run_forward(unit_model(1, unobserved=[1]), obs_of([1.0, 1.0]), 1)

    def test_states_record_updates(self):
        states = forward_states(unit_model(2, unobserved=[1]), ObservationSeries(((0, 1.0), (2, 0.0))))
        assert [s.updated is None for s in states] == [False, True, False]
        assert states[1].filtered == states[1].predicted


class TestBackward:
    def test_terminal(self):
        m = run_backward(unit_model(3), obs_of([0.0, 0.0, 0.0, 2.0]), 3)
        assert (m.u, m.v) == (1.0, 2.0)

    def test_one_step_back(self):
        m = run_backward(unit_model(1), obs_of([0.0, 2.0]), 0)
        assert (m.u, m.v) == pytest.approx((math.sqrt(1.5), 1 / math.sqrt(1.5)), abs=1e-12)

    def test_unobserved_suffix_is_constant(self):
        spec = unit_model(4, unobserved=[2, 3, 4])
        obs = ObservationSeries(((0, 1.0), (1, 0.5)))
        for s in (2, 3, 4):
            assert run_backward(spec, obs, s) == RootMessage(0.0, 0.0)

    def test_states_consistent(self):
        spec = unit_model(3, unobserved=[2])
        obs = ObservationSeries(((0, 1.0), (1, 0.5), (3, -1.0)))
        states = backward_states(spec, obs)
        assert [b.t for b in states] == [0, 1, 2, 3]
        assert states[2].absorbed == states[2].incoming
        assert states[3].incoming == RootMessage(0.0, 0.0)


class TestBayesKalman:
    def test_single_update(self):
        g = bayes_kalman(unit_model(0), obs_of([1.0]), 0)
        assert moments_of(g) == pytest.approx((0.5, 0.5), abs=1e-12)

    def test_filter_endpoint(self):
        g = bayes_kalman(unit_model(1), obs_of([1.0, 1.0]), 1)
        assert moments_of(g) == pytest.approx((0.8, 0.6), abs=1e-12)

    def test_smoothed_start_matches_oracle(self):
        spec, obs = unit_model(1), obs_of([1.0, 1.0])
        g = bayes_kalman(spec, obs, 0)
        # precision 1 + 1 + 1/2 with information 1 + 1/2: mean 0.6, variance 0.4
        assert moments_of(g) == pytest.approx((0.6, 0.4), abs=1e-12)
        assert moments(grid_posterior(spec, obs, 0)) == pytest.approx((0.6, 0.4), abs=1e-6)

    def test_no_observations_is_pure_propagation(self):
        spec = unit_model(3, a=0.7, b=1.0, r=0.5, unobserved=[0, 1, 2, 3])
        g = spec.prior
        for s in range(4):
            if s:
                g = convolve_affine(g, spec.transition(s))
            assert bayes_kalman(spec, ObservationSeries(), s) == g


class TestModes:
    def test_classify(self):
        full = unit_model(5)
        assert classify_mode(full, 2).tag is Mode.SMOOTHING
        assert classify_mode(full, 5).tag is Mode.FILTER
        assert classify_mode(unit_model(5, unobserved=[3, 4, 5]), 5).tag is Mode.PREDICTION
        with pytest.raises(IndexError):
            classify_mode(full, 6)

    @pytest.mark.parametrize("seed", range(20))
    def test_smoother_endpoint_equals_filter(self, seed):
        spec = random_model(seed)
        _, obs = sample_trajectory(spec, seed)
        f = estimate_series(spec, obs, "filter")[-1]
        s = estimate_series(spec, obs, "smooth")[-1]
        g = bayes_kalman(spec, obs, spec.n)
        for e in (s, g):
            assert abs(e.mean - f.mean) < 1e-12 and abs(e.variance - f.variance) < 1e-12

    @pytest.mark.parametrize("seed", range(20))
    def test_smoothing_tightens(self, seed):
        spec = random_model(seed)
        _, obs = sample_trajectory(spec, seed)
        f = estimate_series(spec, obs, "filter")
        s = estimate_series(spec, obs, "smooth")
        assert all(si.variance <= fi.variance * (1 + 1e-12) for si, fi in zip(s, f))

    def test_filter_series(self):
        rows = estimate_series(unit_model(1), obs_of([1.0, 1.0]), "filter")
        assert [(r.mean, r.variance) for r in rows] == pytest.approx([(0.5, 0.5), (0.8, 0.6)], abs=1e-12)

    def test_smooth_series_matches_single_queries(self):
        spec = random_model(4, max_n=6)
        _, obs = sample_trajectory(spec, 4)
        rows = estimate_series(spec, obs)
        for r in rows:
            g = bayes_kalman(spec, obs, r.t)
            assert (r.mean, r.variance) == (g.mean, g.variance)

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            estimate_series(unit_model(0), obs_of([1.0]), "bogus")


def _model_with_horizon(min_n):
    return next(m for m in map(random_model, range(100)) if m.n >= min_n)


def _with_step(spec, t, step):
    """Copy of ``spec`` with ``step`` inserted to become step ``t``."""
    steps = list(spec.steps)
    steps.insert(t - 1, step)
    return ModelSpec(spec.prior, spec.channel0, steps, spec.observed0)


class TestProperties:
    def test_unobserved_equals_blind_channel(self):
        spec = _model_with_horizon(3)
        _, obs = sample_trajectory(spec, 1)
        m = 2
        steps = list(spec.steps)
        tr = steps[m - 1].transition
        hidden = ModelSpec(spec.prior, spec.channel0,
                           steps[:m - 1] + [StepParams(tr, steps[m - 1].channel, False)] + steps[m:])
        blind = ModelSpec(spec.prior, spec.channel0,
                          steps[:m - 1] + [StepParams(tr, ObsChannel(0.0, 3.0, 1.0))] + steps[m:])
        obs_hidden = ObservationSeries(tuple((t, x) for t, x in obs.values if t != m))
        ref = estimate_series(hidden, obs_hidden)
        for placeholder in (-50.0, 0.0, 123.0):
            obs_blind = ObservationSeries(tuple((t, placeholder if t == m else x) for t, x in obs.values))
            got = estimate_series(blind, obs_blind)
            assert got.means == pytest.approx(ref.means, abs=1e-12)
            assert got.variances == pytest.approx(ref.variances, abs=1e-12)

    def test_near_identity_step_is_harmless(self):
        spec = _model_with_horizon(2)
        _, obs = sample_trajectory(spec, 2)
        k = 1  # new step sits between the original t=1 and t=2
        longer = _with_step(spec, k + 1, StepParams(AffineNoise(1.0, 0.0, 1e-9), ObsChannel(1.0, 0.0, 1.0), False))
        shifted = ObservationSeries(tuple((t if t <= k else t + 1, x) for t, x in obs.values))
        a = estimate_series(spec, obs)
        b = estimate_series(longer, shifted)
        b = [e for e in b if e.t != k + 1]
        for ea, eb in zip(a, b):
            assert abs(ea.mean - eb.mean) < 1e-6 and abs(ea.variance - eb.variance) < 1e-6

    def test_smoothing_uses_all_data(self):
        spec = unit_model(4, a=0.9, b=0.3, r=0.7, c=1.2, q=0.8)
        _, obs = sample_trajectory(spec, 6)
        s = 2
        base = bayes_kalman(spec, obs, s).mean
        for t in range(5):
            if t == s:
                continue
            bumped = ObservationSeries(tuple((k, x + 1.0 if k == t else x) for k, x in obs.values))
            assert abs(bayes_kalman(spec, bumped, s).mean - base) > 1e-6

    def test_blind_channel_data_is_ignored(self):
        steps = list(unit_model(4).steps)
        steps[3] = StepParams(steps[3].transition, ObsChannel(0.0, 0.0, 1.0))  # t = 4
        spec = ModelSpec(MomentGaussian(0.0, 1.0), ObsChannel(1.0, 0.0, 1.0), steps)
        obs = obs_of([0.3, -0.2, 0.5, 1.0, 2.0])
        bumped = obs_of([0.3, -0.2, 0.5, 1.0, 3.0])
        assert bayes_kalman(spec, obs, 2) == bayes_kalman(spec, bumped, 2)

    @pytest.mark.parametrize("seed", range(10))
    def test_prediction_is_forward_propagation(self, seed):
        spec = random_model(seed)
        n0 = spec.n // 2
        steps = [StepParams(st.transition, st.channel, t + 1 <= n0) for t, st in enumerate(spec.steps)]
        spec = ModelSpec(spec.prior, spec.channel0, steps)
        _, obs = sample_trajectory(spec, seed)
        g = estimate_series(spec, obs, "filter")[n0]
        g = MomentGaussian(g.mean, g.variance)
        for t in range(n0 + 1, spec.n + 1):
            g = convolve_affine(g, spec.transition(t))
        p = bayes_kalman(spec, obs, spec.n)
        assert abs(p.mean - g.mean) < 1e-12 and abs(p.variance - g.variance) < 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_matches_grid_oracle(seed):
    spec = random_model(1000 + seed)
    _, obs = sample_trajectory(spec, seed)
    est = estimate_series(spec, obs)
    orc = grid_posterior_all(spec, obs, GridConfig(n_points=2049))
    for e, dens in zip(est, orc):
        assert moments(dens) == pytest.approx((e.mean, e.variance), abs=1e-6)


def test_matches_grid_oracle_with_negative_gains():
    steps = (
        StepParams(AffineNoise(-1.3, 0.4, 0.6), ObsChannel(-0.9, 1.0, 0.5)),
        StepParams(AffineNoise(0.8, -1.0, 1.1), ObsChannel(2.0, -0.5, 0.7), False),
        StepParams(AffineNoise(-0.5, 0.0, 0.3), ObsChannel(-1.5, 0.2, 0.4)),
    )
    spec = ModelSpec(MomentGaussian(0.5, 2.0), ObsChannel(-1.0, 0.3, 0.9), steps)
    _, obs = sample_trajectory(spec, 42)
    for e, dens in zip(estimate_series(spec, obs), grid_posterior_all(spec, obs, GridConfig(n_points=2049))):
        assert moments(dens) == pytest.approx((e.mean, e.variance), abs=1e-6)
