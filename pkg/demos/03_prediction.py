# %% [markdown]
# # Prediction: unobserved tail steps
#
# Steps flagged `observed = false` contribute no likelihood. With the last
# few steps unobserved, the posterior of the final state is the last filtered
# state pushed forward through the remaining transitions.

# %%
from bayes_kalman import unit_model
from bayes_kalman.estimator import estimate_series
from bayes_kalman.state_model import dump_model, sample_trajectory

spec = unit_model(8, a=0.8, b=1.0, r=0.5, q=0.3, unobserved=[6, 7, 8])
_, obs = sample_trajectory(spec, seed=1)

for e in estimate_series(spec, obs):
    print(f"t={e.t}  mean={e.mean:+.4f}  variance={e.variance:.4f}  {e.mode}")

# %% [markdown]
# The same model as a config file, usable with
# `bayes-kalman predict --model model.toml --obs obs.csv`.

# %%
print(dump_model(spec))
