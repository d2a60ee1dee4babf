"""Finite-support probability mass functions on the integers.

Every law in the package is an :class:`IntDist`: a dense weight array over a
contiguous window ``offset, offset+1, ...`` plus the mass ``tail_mass`` that
was discarded when an infinite-support law was truncated.  All operations are
exact up to double-precision rounding and never renormalize truncated mass.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_SUPPORT_CAP = 10_000_000
SUPPORT_CAP_ENV = "DISCRETE_CLT_SUPPORT_CAP"

MASS_TOL = 1e-12
INPUT_TOL = 1e-9


class SupportCapExceeded(RuntimeError):
    """A convolution would produce more support points than allowed."""


def support_cap() -> int:
    value = os.environ.get(SUPPORT_CAP_ENV)
    if value is None:
        return DEFAULT_SUPPORT_CAP
    return int(value)


def kahan_cumsum(values: np.ndarray) -> np.ndarray:
    """Compensated running sum along the first axis."""
    values = np.asarray(values, dtype=np.float64)
    out = np.empty_like(values)
    total = np.zeros(values.shape[1:])
    comp = np.zeros(values.shape[1:])
    for k in range(values.shape[0]):
        y = values[k] - comp
        t = total + y
        comp = (t - total) - y
        total = t
        out[k] = total
    return out


@dataclass(frozen=True, eq=False)
class IntDist:
    """Law of an integer random variable with finite represented support.

    Attributes
    ----------
    offset : int
        Smallest represented support point.
    weights : ndarray
        Probabilities of ``offset, offset + 1, ...``; first and last are > 0.
    tail_mass : float
        Mass dropped by truncation (0 for exactly represented laws).
    """

    offset: int
    weights: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        nz = np.flatnonzero(w)
        if nz.size == 0:
            raise ValueError("distribution has zero total mass")
        if self.tail_mass < 0 or not math.isfinite(self.tail_mass):
            raise ValueError("tail_mass must be finite and nonnegative")
        lo, hi = nz[0], nz[-1]
        w = w[lo:hi + 1]
        w.setflags(write=False)
        total = math.fsum(w) + self.tail_mass
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"total mass {total!r} differs from 1 by more than {MASS_TOL}")
        object.__setattr__(self, "offset", int(self.offset) + int(lo))
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "tail_mass", float(self.tail_mass))

    @property
    def lo(self) -> int:
        return self.offset

    @property
    def hi(self) -> int:
        return self.offset + self.weights.size - 1

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    @property
    def mass(self) -> float:
        """Represented mass (one minus the tail)."""
        return math.fsum(self.weights)

    def pmf(self, j):
        """P(X = j) for an integer or integer array ``j``."""
        j = np.asarray(j)
        idx = j - self.offset
        inside = (idx >= 0) & (idx < self.weights.size)
        out = np.where(inside, self.weights[np.clip(idx, 0, self.weights.size - 1)], 0.0)
        return float(out) if out.ndim == 0 else out

    def on_window(self, lo: int, hi: int) -> np.ndarray:
        """Weights realigned to the window ``[lo, hi]``, zero-padded."""
        return self.pmf(np.arange(lo, hi + 1))

    def to_dict(self) -> dict:
        return {
            "offset": self.offset,
            "weights": [float(x) for x in self.weights],
            "tail_mass": self.tail_mass,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IntDist":
        return cls(int(data["offset"]), data["weights"], float(data.get("tail_mass", 0.0)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "IntDist":
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        return f"IntDist(offset={self.offset}, n={self.weights.size}, tail_mass={self.tail_mass:.3g})"


def from_pmf(offset: int, weights: Sequence[float]) -> IntDist:
    """Build an exactly represented law, renormalizing away rounding noise."""
    w = np.array(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a nonempty 1-D sequence")
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    total = math.fsum(w)
    if total <= 0:
        raise ValueError("distribution has zero total mass")
    if abs(total - 1.0) > INPUT_TOL:
        raise ValueError(f"weights sum to {total!r}, not 1")
    return IntDist(offset, w / total, 0.0)


def point_mass(c: int) -> IntDist:
    return IntDist(c, [1.0])


def bernoulli(p: float) -> IntDist:
    return from_pmf(0, [1.0 - p, p])


def uniform(values: Iterable[int]) -> IntDist:
    """Uniform law on a finite set of integers."""
    values = sorted(set(int(v) for v in values))
    w = np.zeros(values[-1] - values[0] + 1)
    w[np.array(values) - values[0]] = 1.0 / len(values)
    return from_pmf(values[0], w)


def convolve(a: IntDist, b: IntDist, cap: int | None = None) -> IntDist:
    """Law of the sum of independent variables with laws ``a`` and ``b``."""
    cap = support_cap() if cap is None else cap
    size = a.weights.size + b.weights.size - 1
    if size > cap:
        raise SupportCapExceeded(f"convolution support {size} exceeds cap {cap}")
    w = np.convolve(a.weights, b.weights)
    tail = a.tail_mass + b.tail_mass - a.tail_mass * b.tail_mass
    return IntDist(a.offset + b.offset, w, tail)


def convolve_all(dists: Iterable[IntDist], cap: int | None = None) -> IntDist:
    out = point_mass(0)
    for d in dists:
        out = convolve(out, d, cap)
    return out


def self_convolve(d: IntDist, n: int, cap: int | None = None) -> IntDist:
    """n-fold convolution power by repeated squaring."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out, base = point_mass(0), d
    while n:
        if n & 1:
            out = convolve(out, base, cap)
        n >>= 1
        if n:
            base = convolve(base, base, cap)
    return out


def shift(d: IntDist, c: int) -> IntDist:
    """Law of ``X + c``."""
    return IntDist(d.offset + int(c), d.weights, d.tail_mass)


def mixture(dists: Sequence[IntDist], probs: Sequence[float]) -> IntDist:
    """Finite mixture, combined in the given order with compensated sums."""
    if len(dists) != len(probs) or not dists:
        raise ValueError("need one probability per component")
    lo = min(d.lo for d in dists)
    hi = max(d.hi for d in dists)
    rows = np.array([p * d.on_window(lo, hi) for d, p in zip(dists, probs)])
    w = kahan_cumsum(rows)[-1]
    tail = math.fsum(p * d.tail_mass for d, p in zip(dists, probs))
    return IntDist(lo, w, tail)


def mean(d: IntDist) -> float:
    """Mean of the represented mass (the tail is ignored)."""
    return math.fsum(d.support * d.weights) / d.mass


def variance(d: IntDist) -> float:
    m = mean(d)
    return math.fsum((d.support - m) ** 2 * d.weights) / d.mass


def max_pmf(d: IntDist) -> float:
    return float(d.weights.max())


def cdf(d: IntDist, j: int) -> float:
    """P(X <= j) over the represented mass."""
    if j < d.lo:
        return 0.0
    return math.fsum(d.weights[: min(j, d.hi) - d.lo + 1])


def cdf_array(d: IntDist, lo: int, hi: int) -> np.ndarray:
    """P(X <= j) for j in ``[lo, hi]``."""
    return kahan_cumsum(d.on_window(lo, hi)) + cdf(d, lo - 1)


def tv_distance(a: IntDist, b: IntDist) -> float:
    """Half the L1 distance between represented masses.

    Truncated tails are not included; see :func:`tail_slack` for the
    conservative allowance to add when comparing against bounds.
    """
    lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
    return min(1.0, 0.5 * math.fsum(np.abs(a.on_window(lo, hi) - b.on_window(lo, hi))))


def tail_slack(*dists: IntDist) -> float:
    return 0.5 * math.fsum(d.tail_mass for d in dists)


def wasserstein1(a: IntDist, b: IntDist) -> float:
    """Sum over j of |F_a(j) - F_b(j)|."""
    lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
    return math.fsum(np.abs(cdf_array(a, lo, hi) - cdf_array(b, lo, hi)))
