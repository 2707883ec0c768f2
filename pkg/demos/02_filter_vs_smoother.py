# %% [markdown]
# # Filtering and smoothing a simulated series

# %%
import numpy as np

from bayes_kalman import unit_model
from bayes_kalman.estimator import estimate_series
from bayes_kalman.state_model import sample_trajectory

spec = unit_model(60, a=0.95, b=0.1, r=0.4, c=1.0, d=0.0, q=1.2)
states, obs = sample_trajectory(spec, seed=2)

filt = estimate_series(spec, obs, "filter")
smooth = estimate_series(spec, obs, "smooth")

# %% [markdown]
# The smoother sees the whole series, so its variance is never above the
# filter's and its error against the true states is smaller on average.

# %%
f_mean, s_mean = np.array(filt.means), np.array(smooth.means)
print("rmse filter  ", np.sqrt(np.mean((f_mean - states) ** 2)))
print("rmse smoother", np.sqrt(np.mean((s_mean - states) ** 2)))
print("variance ratio smoother/filter (min, max)",
      min(np.array(smooth.variances) / filt.variances), max(np.array(smooth.variances) / filt.variances))

# %%
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    t = np.arange(spec.n + 1)
    x = np.array([x for _, x in obs.values])
    fig, ax = plt.subplots(figsize=(9, 4))
    ax.plot(t, states, "k", lw=1, label="state")
    ax.plot(t, x, ".", color="0.6", label="observation")
    ax.plot(t, f_mean, label="filter")
    ax.plot(t, s_mean, label="smoother")
    band = 2 * np.sqrt(smooth.variances)
    ax.fill_between(t, s_mean - band, s_mean + band, alpha=0.2)
    ax.legend()
    fig.savefig("filter_vs_smoother.png", dpi=120)
