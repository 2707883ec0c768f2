# %% [markdown]
# # A two-step chain by hand
#
# Unit model: prior N(0, 1), random-walk transition with unit noise, direct
# observation with unit noise. Observe x0 = 1 and x1 = 1.

# %%
from bayes_kalman import ObservationSeries, unit_model
from bayes_kalman.estimator import backward_states, estimate_series, forward_states
from bayes_kalman.grid_oracle import grid_posterior_all, moments

spec = unit_model(1)
obs = ObservationSeries.from_array([1.0, 1.0])

# %% [markdown]
# Forward pass: each state is predicted from the past, then updated with its
# own observation.

# %%
for st in forward_states(spec, obs):
    print(f"t={st.t}  predicted={st.predicted}  updated={st.updated}")

# %% [markdown]
# Backward pass: the likelihood of the present and future observations as a
# function of each state, stored as exp(-0.5 (u w - v)^2).

# %%
for b in backward_states(spec, obs):
    print(f"t={b.t}  incoming={b.incoming}  absorbed={b.absorbed}")

# %% [markdown]
# Combining the two gives the smoothed posteriors. The grid oracle computes
# the same thing by brute-force quadrature.

# %%
for e, dens in zip(estimate_series(spec, obs), grid_posterior_all(spec, obs)):
    m, v = moments(dens)
    print(f"t={e.t}  closed form ({e.mean:.12f}, {e.variance:.12f})  grid ({m:.12f}, {v:.12f})")
