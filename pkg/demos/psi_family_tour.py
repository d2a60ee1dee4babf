# %% [markdown]
# # The approximating family
#
# A two-parameter law on the integers, pinned by a mean `mu` and a
# "variance-like" parameter `sigma2`. Its pmf is built from one-step ratios
# around an anchor `kappa`; nothing is renormalized after truncation, the
# dropped tail is carried along instead.

# %%
import math

import numpy as np

from discrete_clt import PsiParams, discrete_normal_pmf, psi_moments, psi_pmf, tv_distance
from discrete_clt.psi_family import metadata

p = PsiParams(mu=0.0, sigma2=1.0)
d = psi_pmf(p)
print("support", d.lo, "..", d.hi, " tail mass", d.tail_mass)
for j in range(-3, 4):
    print(f"  P(S={j:+d}) = {d.pmf(j):.12f}")

# %% [markdown]
# At `mu = 0, sigma2 = 1` the centre mass has a closed form, `1 / (2e - 3)`.

# %%
print("closed form  ", 1 / (2 * math.e - 3))
print("constructed  ", d.pmf(0))

# %% [markdown]
# The mean is exactly `mu`, but the variance overshoots `sigma2` by a term
# proportional to the mass at `kappa`.

# %%
print(f"{'mu':>6} {'sigma2':>7} {'mean':>10} {'variance':>10} {'excess':>10}")
for mu, s2 in [(0.0, 1.0), (0.3, 2.0), (-2.5, 4.0), (1.7, 15.0)]:
    m, v, pk = psi_moments(PsiParams(mu, s2))
    print(f"{mu:6.2f} {s2:7.2f} {m:10.6f} {v:10.6f} {v - s2:10.6f}")

# %% [markdown]
# Distance to the rounded normal with the same `mu, sigma2` shrinks as
# `sigma2` grows.

# %%
for s2 in (0.5, 2.0, 8.0, 32.0):
    gap = tv_distance(psi_pmf(PsiParams(0.4, s2)), discrete_normal_pmf(0.4, s2))
    print(f"sigma2={s2:5.1f}  tv to rounded normal = {gap:.4f}")

# %% [markdown]
# Moving `kappa` away from its default keeps the law valid as long as it
# stays in the admissible range, and the metadata block says so.

# %%
print(metadata(PsiParams(1.5, 3.0, kappa=0)))
boundary = psi_pmf(PsiParams(2.0, 2.0, kappa=0))
print("boundary case is Poisson(2):", np.round(boundary.weights[:5], 6))
