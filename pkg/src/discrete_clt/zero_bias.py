"""Discrete zero-bias and size-bias transformations.

For an integer ``Y`` with mean ``mu`` and variance ``sigma2 > 0``, the
zero-biased ``Y*`` is the unique law with

    E[(Y - mu) f(Y)] = sigma2 * E[f(Y* + 1) - f(Y*)]

for every bounded ``f``; explicitly ``P(Y* = j - 1) = E[(Y - mu) 1(Y >= j)] / sigma2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .dist_core import (
    IntDist,
    cdf_array,
    convolve,
    kahan_cumsum,
    mean,
    mixture,
    point_mass,
    variance,
)

_NEG_TOL = 1e-14


def zero_bias(d: IntDist) -> IntDist:
    """Discrete zero-biased law of ``d``.

    Each partial expectation ``E[(Y - mu) 1(Y >= j)]`` is accumulated from
    whichever end makes every summand the same sign: from the top for
    ``j > mu`` and, via ``-E[(Y - mu) 1(Y < j)]``, from the bottom otherwise.
    """
    s2 = variance(d)
    if not s2 > 0:
        raise ValueError("zero bias is undefined for a point mass")
    mu = mean(d)
    y = d.support
    terms = (y - mu) * d.weights
    # j runs over y[1:]; Y* = j - 1 runs over y[:-1]
    from_top = kahan_cumsum(terms[::-1])[::-1][1:]
    from_bottom = -kahan_cumsum(terms)[:-1]
    j = y[1:]
    partial = np.where(j > mu, from_top, from_bottom)
    if np.any(partial < -_NEG_TOL):
        raise ArithmeticError("zero-bias partial expectation is negative beyond rounding")
    w = np.maximum(partial, 0.0) / s2
    return IntDist(d.lo, w, d.tail_mass)


def verify_characterization(d: IntDist, f_values: Sequence[float], start: int) -> float:
    """|E[(Y - mu) f(Y)] - sigma2 E[Delta f(Y*)]| for a tabulated ``f``.

    The table ``f_values[k] = f(start + k)`` must cover the support of ``d``
    and one point beyond the top of the support of ``Y*``.
    """
    f_values = np.asarray(f_values, dtype=np.float64)
    ds = zero_bias(d)
    end = start + f_values.size - 1
    if start > min(d.lo, ds.lo) or end < max(d.hi, ds.hi + 1):
        raise ValueError(
            f"f table [{start}, {end}] does not cover [{min(d.lo, ds.lo)}, {max(d.hi, ds.hi + 1)}]"
        )

    def f(j):
        return f_values[j - start]

    mu, s2 = mean(d), variance(d)
    lhs = math.fsum((d.support - mu) * f(d.support) * d.weights)
    js = ds.support
    rhs = s2 * math.fsum((f(js + 1) - f(js)) * ds.weights)
    return abs(lhs - rhs)


def size_bias(d: IntDist) -> IntDist:
    """Law with pmf proportional to ``k P(X = k)`` for nonnegative ``X``."""
    if d.lo < 0:
        raise ValueError("size bias needs a nonnegative support")
    m = mean(d)
    if not m > 0:
        raise ValueError("size bias needs a positive mean")
    return IntDist(d.lo, d.support * d.weights / (m * d.mass), 0.0)


@dataclass(frozen=True, eq=False)
class ComponentSet:
    """Independent summands ``xi_1, ..., xi_n`` of ``W``."""

    components: tuple[IntDist, ...]
    means: tuple[float, ...] = field(init=False)
    variances: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("need at least one component")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "means", tuple(mean(c) for c in comps))
        object.__setattr__(self, "variances", tuple(variance(c) for c in comps))
        if not any(v > 0 for v in self.variances):
            raise ValueError("all components are degenerate")

    @classmethod
    def iid(cls, d: IntDist, n: int) -> "ComponentSet":
        return cls((d,) * n)

    @classmethod
    def bernoulli(cls, ps: Sequence[float]) -> "ComponentSet":
        return cls(tuple(IntDist(0, [1.0 - p, p]) for p in ps))

    def __len__(self):
        return len(self.components)

    @property
    def total_mean(self) -> float:
        return math.fsum(self.means)

    @property
    def total_variance(self) -> float:
        return math.fsum(self.variances)

    @cached_property
    def _prefix(self) -> list[IntDist]:
        out = [point_mass(0)]
        for c in self.components:
            out.append(convolve(out[-1], c))
        return out

    @cached_property
    def _suffix(self) -> list[IntDist]:
        out = [point_mass(0)]
        for c in reversed(self.components):
            out.append(convolve(out[-1], c))
        return out[::-1]

    def total(self) -> IntDist:
        """Law of W."""
        return self._prefix[-1]

    def leave_one_out(self, i: int) -> IntDist:
        """Law of ``W_i = W - xi_i``."""
        if not 0 <= i < len(self):
            raise IndexError(f"component index {i} out of range")
        return convolve(self._prefix[i], self._suffix[i + 1])

    def permuted(self, order: Sequence[int]) -> "ComponentSet":
        return ComponentSet(tuple(self.components[k] for k in order))


def sum_zero_bias(cs: ComponentSet) -> IntDist:
    """Zero-biased law of ``W`` by replacing one summand.

    Mixture over ``i`` with weights ``sigma_i^2 / sigma^2`` of the law of
    ``W_i + xi_i*``.
    """
    s2 = cs.total_variance
    terms, probs = [], []
    for i, (c, v) in enumerate(zip(cs.components, cs.variances)):
        if v > 0:
            terms.append(convolve(cs.leave_one_out(i), zero_bias(c)))
            probs.append(v / s2)
    return mixture(terms, probs)


@dataclass(frozen=True, eq=False)
class Coupling:
    """Joint law of two integer variables given as ``{(x, y): prob}``."""

    joint: dict
    marginal_x: IntDist
    marginal_y: IntDist

    def expect(self, fn: Callable[[int, int], float]) -> float:
        return math.fsum(p * fn(x, y) for (x, y), p in self.joint.items())

    def prob(self, pred: Callable[[int, int], bool]) -> float:
        return math.fsum(p for (x, y), p in self.joint.items() if pred(x, y))

    def row_sums(self) -> dict:
        out: dict = {}
        for (x, _), p in self.joint.items():
            out.setdefault(x, []).append(p)
        return {k: math.fsum(v) for k, v in out.items()}

    def col_sums(self) -> dict:
        out: dict = {}
        for (_, y), p in self.joint.items():
            out.setdefault(y, []).append(p)
        return {k: math.fsum(v) for k, v in out.items()}


def optimal_coupling(a: IntDist, b: IntDist) -> Coupling:
    """Quantile (comonotone) coupling of ``a`` and ``b``.

    Minimizes ``E c(X - Y)`` for every convex ``c``; in particular
    ``E|X - Y|`` equals the Wasserstein-1 distance.
    """
    fa = cdf_array(a, a.lo, a.hi)
    fb = cdf_array(b, b.lo, b.hi)
    top = min(fa[-1], fb[-1])
    fa[-1] = fb[-1] = top
    fa = np.minimum(fa, top)
    fb = np.minimum(fb, top)
    cuts = np.union1d(fa, fb)
    cuts = cuts[cuts > 0]
    lengths = np.diff(cuts, prepend=0.0)
    xs = a.lo + np.searchsorted(fa, cuts, side="left")
    ys = b.lo + np.searchsorted(fb, cuts, side="left")
    joint: dict = {}
    for x, y, m in zip(xs, ys, lengths):
        if m > 0:
            key = (int(x), int(y))
            joint[key] = joint.get(key, 0.0) + float(m)
    return Coupling(joint, a, b)
