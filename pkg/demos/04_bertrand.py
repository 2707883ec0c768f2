# %% [markdown]
# # Two answers to "a random chord"
#
# The probability that a random chord of the unit circle is shorter than
# sqrt(3) depends on which coordinates are declared uniform.

# %%
import math

from bayes_kalman.bertrand import exact_probability, mc_probability

for param in ("first", "second"):
    exact = exact_probability(param, math.sqrt(3))
    est, se = mc_probability(param, math.sqrt(3), 1_000_000, seed=0)
    print(f"{param:6s}  exact={exact:.6f}  monte carlo={est:.6f} ± {se:.1e}")

# %% [markdown]
# Angle coordinates give 2/3, midpoint coordinates give 3/4. Across the whole
# range of thresholds:

# %%
for ell in (0.5, 1.0, 1.5, math.sqrt(3), 2.0):
    print(f"l={ell:.3f}  first={exact_probability('first', ell):.4f}  second={exact_probability('second', ell):.4f}")
