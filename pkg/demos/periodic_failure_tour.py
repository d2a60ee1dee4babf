# %% [markdown]
# # When the approximation cannot work
#
# Summands living on `{0, 3}` produce a sum on multiples of 3. Any law that
# spreads mass over every integer sits far away in total variation, however
# many summands are added.

# %%
from discrete_clt import ComponentSet, bound_report, uniform

for n in (5, 10, 20, 40):
    r = bound_report(ComponentSet.iid(uniform([0, 3]), n))
    print(f"n={n:3d}  exact tv {r.actual_tv:.4f}  lattice span {r.lattice_span}  u_i {set(r.u)}")
print(r.flags)

# %% [markdown]
# Breaking the lattice with a little mass at 1 is enough for the distance to
# start shrinking.

# %%
import numpy as np

from discrete_clt.dist_core import IntDist

for eps in (0.0, 0.02, 0.1):
    xi = IntDist(0, np.array([0.5 - eps, eps, 0.0, 0.5]))
    r = bound_report(ComponentSet.iid(xi, 20))
    print(f"mass at 1 = {eps:4.2f}  exact tv {r.actual_tv:.4f}  flags {len(r.flags)}")
