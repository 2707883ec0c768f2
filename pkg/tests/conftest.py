import math
import sys

import numpy as np
from hypothesis import settings

settings.register_profile("ci", deadline=None, max_examples=200)
settings.load_profile("ci")


def trapz(y, x):
    h = x[1] - x[0]
    return h * (y.sum() - 0.5 * (y[0] + y[-1]))


def normal_pdf(x, mean, var):
    return np.exp(-0.5 * (x - mean) ** 2 / var) / math.sqrt(2 * math.pi * var)


def quad_moments(x, y):
    """Mean and variance of an unnormalized density sampled on a uniform grid."""
    z = trapz(y, x)
    m = trapz(x * y, x) / z
    return m, trapz((x - m) ** 2 * y, x) / z


def fit_root(x, y):
    """Fit ``y ≈ K exp(-0.5 (u x - v)^2)`` by a quadratic in log y; returns canonical (u, v)."""
    c2, c1, _ = np.polyfit(x, np.log(y), 2)
    u = math.sqrt(max(-2.0 * c2, 0.0))
    return u, (c1 / u if u > 0 else 0.0)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
