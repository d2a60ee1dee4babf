# %% [markdown]
# # Discrete zero biasing
#
# `Y*` is the law for which `E[(Y - mu) f(Y)] = sigma2 E[f(Y* + 1) - f(Y*)]`
# for every bounded `f`. Indicators collapse to zero, binomials lose one
# trial, and translated Poisson laws are left alone.

# %%
import numpy as np

from discrete_clt import (
    ComponentSet,
    bernoulli,
    self_convolve,
    sum_zero_bias,
    translated_poisson_pmf,
    tv_distance,
    uniform,
    verify_characterization,
    zero_bias,
)

print("Bernoulli(0.3)* :", zero_bias(bernoulli(0.3)).to_dict())

b = self_convolve(bernoulli(0.4), 6)
print("Binomial(6,0.4)* weights:", np.round(zero_bias(b).weights, 6))
print("Binomial(5,0.4)  weights:", np.round(self_convolve(bernoulli(0.4), 5).weights, 6))

tp = translated_poisson_pmf(5.0, 2.0)
print("translated Poisson moved by", tv_distance(zero_bias(tp), tp))

# %% [markdown]
# The defining identity, checked against a random test function.

# %%
rng = np.random.default_rng(0)
y = uniform([-2, 0, 1, 5])
ys = zero_bias(y)
lo, hi = min(y.lo, ys.lo), max(y.hi, ys.hi + 1)
f = rng.normal(size=hi - lo + 1)
print("identity residual:", verify_characterization(y, f, lo))

# %% [markdown]
# For a sum of independent pieces, zero biasing only needs to touch one
# summand, picked with probability proportional to its variance.

# %%
cs = ComponentSet((bernoulli(0.5), uniform([0, 1, 2]), uniform([-1, 3])))
replaced = sum_zero_bias(cs)
direct = zero_bias(cs.total())
print("replace-one-summand vs direct transform:", tv_distance(replaced, direct))
