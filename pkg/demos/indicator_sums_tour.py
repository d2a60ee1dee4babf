# %% [markdown]
# # Sums of independent indicators
#
# The exact distance from a sum of Bernoulli variables to the matched family
# member, against the guarantees. Everything here is exact convolution, no
# sampling.

# %%
import math

from discrete_clt import ComponentSet, bound_report, cor43_bound

print(f"{'n':>4} {'p':>4} {'exact tv':>10} {'indicator':>10} {'zero-bias':>10} {'coupling':>10} {'normal':>10}")
for n in (5, 20, 80):
    for p in (0.1, 0.5, 0.8):
        r = bound_report(ComponentSet.bernoulli([p] * n))
        print(
            f"{n:4d} {p:4.1f} {r.actual_tv:10.5f} {r.cor43_bound:10.5f} {r.thm41_bound:10.5f}"
            f" {r.thm42_bound:10.5f} {r.baselines['discrete_normal']:10.5f}"
        )

# %% [markdown]
# The indicator bound decays like `1/sqrt(n)`; multiplying by `sqrt(n)`
# settles on `1/sqrt(p(1-p))`.

# %%
p = 0.3
for n in (10, 100, 1000, 4000):
    print(f"n={n:5d}  sqrt(n) * bound = {cor43_bound([p] * n)[0] * math.sqrt(n):.5f}")
print("limit", 1 / math.sqrt(p * (1 - p)))

# %% [markdown]
# Heterogeneous probabilities work the same way.

# %%
ps = [0.05 * k for k in range(1, 19)]
r = bound_report(ComponentSet.bernoulli(ps))
print(f"exact {r.actual_tv:.5f}  indicator bound {r.cor43_bound:.5f}  coupling bound {r.thm42_bound:.5f}")
