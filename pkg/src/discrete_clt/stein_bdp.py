"""Bilateral birth-death chain behind the family: rates, Stein solutions, passage times.

The chain jumps ``i -> i + 1`` at rate ``alpha_i`` and ``i -> i - 1`` at rate
``beta_i``; its generator is

    A g(i) = alpha_i (g(i+1) - g(i)) + beta_i (g(i-1) - g(i)).

For a target set ``A`` the solution of ``A g_A = 1_A - P(S in A)`` has
first differences ``f_A(i) = g_A(i) - g_A(i-1)`` given in closed form by mean
up- and down-crossing times of the chain.  Those passage times are computed
here through the stable ratio recursions

    R(i) / pi_i = 1 + (pi_{i+1} / pi_i) * R(i+1) / pi_{i+1},    R(i) = P(S >= i)
    L(i) / pi_i = 1 + (pi_{i-1} / pi_i) * L(i-1) / pi_{i-1},    L(i) = P(S <= i)

which never divide by a vanishing probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .dist_core import IntDist
from .psi_family import PsiParams, log_ratio, psi_pmf

# Ratio recursions start this far (in log-probability) below the window edge.
_LOG_PAD = 50.0
BOUND_TOL = 1e-10


class StateCapExceeded(RuntimeError):
    """A simulated path wandered further from kappa than the configured cap."""


@dataclass(frozen=True)
class BDRates:
    """Birth rates ``alpha`` and death rates ``beta`` of the chain for ``params``."""

    params: PsiParams

    def alpha(self, i):
        return self.params.alpha(i)

    def beta(self, i):
        return self.params.beta(i)

    @property
    def ergodic(self) -> bool:
        return self.params.ergodic

    @property
    def flags(self) -> list[str]:
        return self.params.flags


def rates(p: PsiParams) -> BDRates:
    return BDRates(p)


def check_balance(p: PsiParams, pmf: IntDist | None = None) -> float:
    """Largest relative violation of ``alpha_i pi_i = beta_{i+1} pi_{i+1}``.

    Taken over consecutive represented points of ``pmf`` (by default the
    constructed law of ``p``).
    """
    d = psi_pmf(p) if pmf is None else pmf
    i = d.support[:-1]
    left = p.alpha(i) * d.weights[:-1]
    right = p.beta(i + 1) * d.weights[1:]
    return float(np.max(np.abs(left - right) / (left + np.finfo(float).tiny), initial=0.0))


def _log_pi(p: PsiParams, lo: int, hi: int) -> np.ndarray:
    """Normalized log pi_j on ``[lo, hi]``."""
    d = psi_pmf(p)
    return log_ratio(p, lo, hi) + math.log(d.pmf(p.kappa))


def _padded_window(p: PsiParams, lo: int, hi: int) -> tuple[int, int]:
    """Widen ``[lo, hi]`` until pi has fallen by ``_LOG_PAD`` on both sides
    and the ratios there are below one half."""
    left, right = lo, hi
    step = 16
    while True:
        lr = log_ratio(p, left, right)
        ok_right = lr[-1] < lr[hi - left] - _LOG_PAD and lr[-1] - lr[-2] < -math.log(2)
        inner = lr[lo - left]
        ok_left = (lr[0] == -np.inf) or (lr[0] < inner - _LOG_PAD and lr[0] - lr[1] < -math.log(2))
        if ok_left and ok_right:
            return left, right
        if not ok_right:
            right += step
        if not ok_left:
            left -= step
        step *= 2
        if step > 1 << 26:
            raise RuntimeError("could not find a window where the tails are negligible")


@dataclass(frozen=True)
class _TailRatios:
    lo: int
    upper: np.ndarray  # P(S >= i) / pi_i
    lower: np.ndarray  # P(S <= i) / pi_i

    def up(self, i):
        return self.upper[np.asarray(i) - self.lo]

    def down(self, i):
        return self.lower[np.asarray(i) - self.lo]


def _tail_ratios(p: PsiParams, lo: int, hi: int) -> _TailRatios:
    if not p.ergodic:
        raise ValueError("passage times need the ergodic regime (mu - sigma2 < kappa)")
    left, right = _padded_window(p, lo, hi)
    js = np.arange(left, right + 1)
    step_up = p.alpha(js[:-1]) / p.beta(js[1:])  # pi_{j+1} / pi_j
    upper = np.empty(js.size)
    lower = np.empty(js.size)
    upper[-1] = 1.0
    for k in range(js.size - 2, -1, -1):
        upper[k] = 1.0 + step_up[k] * upper[k + 1]
    lower[0] = 1.0
    for k in range(1, js.size):
        lower[k] = 1.0 + lower[k - 1] / step_up[k - 1]
    s = slice(lo - left, hi - left + 1)
    upper, lower = upper[s], lower[s]
    if not (np.all(np.isfinite(upper)) and np.all(np.isfinite(lower))):
        raise OverflowError("window reaches states where passage times overflow")
    return _TailRatios(lo, upper, lower)


def mean_down_time(p: PsiParams, i: int) -> float:
    """E tau_i^-: expected time for the chain started at ``i`` to reach ``i - 1``."""
    t = _tail_ratios(p, i, i)
    return float(t.up(i) / p.beta(i))


def mean_up_time(p: PsiParams, i: int) -> float:
    """E tau_i^+: expected time for the chain started at ``i`` to reach ``i + 1``."""
    t = _tail_ratios(p, i, i)
    return float(t.down(i) / p.alpha(i))


def occupation_time(
    p: PsiParams,
    i: int,
    direction: str,
    k1: int | None = None,
    k2: int | None = None,
) -> float:
    """Expected time spent in ``[k1, k2]`` before the chain from ``i`` hits ``i -/+ 1``.

    ``direction`` is ``"down"`` (stop at ``i - 1``) or ``"up"`` (stop at
    ``i + 1``); ``None`` for ``k1``/``k2`` means an unbounded end.
    """
    if k1 is not None and k2 is not None and k1 > k2:
        raise ValueError("need k1 <= k2")
    if not p.ergodic:
        raise ValueError("occupation times need the ergodic regime (mu - sigma2 < kappa)")
    if direction == "down":
        if k2 is not None and i > k2:
            return 0.0
        a = i if k1 is None else max(i, k1)
        if k2 is None:
            t = _tail_ratios(p, a, a)
            lr = log_ratio(p, min(i, a), max(i, a))
            rel = math.exp(lr[a - min(i, a)] - lr[i - min(i, a)])
            return float(rel * t.up(a) / p.beta(i))
        lr = log_ratio(p, min(i, a), k2)
        base = lr[i - min(i, a)]
        total = math.fsum(np.exp(lr[a - min(i, a):] - base))
        return float(total / p.beta(i))
    if direction == "up":
        if k1 is not None and i < k1:
            return 0.0
        b = i if k2 is None else min(i, k2)
        if k1 is None:
            t = _tail_ratios(p, b, b)
            lr = log_ratio(p, min(i, b), max(i, b))
            rel = math.exp(lr[b - min(i, b)] - lr[i - min(i, b)])
            return float(rel * t.down(b) / p.alpha(i))
        lr = log_ratio(p, k1, max(i, b))
        base = lr[i - k1]
        total = math.fsum(np.exp(lr[: b - k1 + 1] - base))
        return float(total / p.alpha(i))
    raise ValueError(f"direction must be 'up' or 'down', not {direction!r}")


@dataclass(frozen=True)
class TargetSet:
    """A finite set of integers, or the complement of one."""

    members: frozenset
    complement: bool = False

    @classmethod
    def of(cls, values: Iterable[int]) -> "TargetSet":
        return cls(frozenset(int(v) for v in values))

    @classmethod
    def everything_but(cls, values: Iterable[int]) -> "TargetSet":
        return cls(frozenset(int(v) for v in values), complement=True)

    @classmethod
    def whole_line(cls) -> "TargetSet":
        return cls(frozenset(), complement=True)

    def contains(self, i) -> np.ndarray:
        i = np.asarray(i)
        hit = np.isin(i, np.fromiter(self.members, dtype=np.int64, count=len(self.members)))
        return ~hit if self.complement else hit

    def to_dict(self) -> dict:
        return {"members": sorted(self.members), "complement": self.complement}


@dataclass(frozen=True, eq=False)
class SteinTable:
    """Tabulated Stein solution for one ``(params, target)`` pair.

    ``f[k]`` is ``f_A(i_min + k)`` for ``k`` in ``0 .. n-1``; ``delta_f[k]`` is
    ``f[k+1] - f[k]``; ``g`` is the running sum of ``f`` with ``g(i_min) = 0``;
    ``h`` is ``1_A - P(S in A)`` on the same window.
    """

    params: PsiParams
    target: TargetSet
    window: tuple[int, int]
    f: np.ndarray
    delta_f: np.ndarray
    g: np.ndarray
    h: np.ndarray
    prob_target: float

    @property
    def points(self) -> np.ndarray:
        return np.arange(self.window[0], self.window[1] + 1)

    def generator_residual(self) -> np.ndarray:
        """``A g(i) - h(i)`` on the interior ``[i_min, i_max - 1]``."""
        i = self.points[:-1]
        p = self.params
        return p.alpha(i) * self.f[1:] - p.beta(i) * self.f[:-1] - self.h[:-1]

    def max_residual(self) -> float:
        return float(np.max(np.abs(self.generator_residual()), initial=0.0))


def _finite_target_f(p: PsiParams, members: frozenset, i_min: int, i_max: int):
    """f_A and P(A) for a finite A on ``[i_min, i_max]``."""
    pts = np.arange(i_min, i_max + 1)
    if not members:
        return np.zeros(pts.size), 0.0
    js = np.array(sorted(members))
    lo = min(js[0], i_min - 1)
    hi = max(js[-1], i_max)
    pi_js = np.exp(_log_pi(p, lo, hi)[js - lo])
    # mass of A strictly below i and at or above i, each summed without cancellation
    below_idx = np.searchsorted(js, pts, side="left")
    cum = np.concatenate(([0.0], np.cumsum(pi_js)))
    rcum = np.concatenate((np.cumsum(pi_js[::-1])[::-1], [0.0]))
    mass_below = cum[below_idx]
    mass_above = rcum[below_idx]
    t = _tail_ratios(p, i_min - 1, i_max)
    down_time = t.up(pts) / p.beta(pts)  # E tau_i^-
    up_time_prev = t.down(pts - 1) / p.alpha(pts - 1)  # E tau_{i-1}^+
    f = mass_below * down_time - mass_above * up_time_prev
    return f, math.fsum(pi_js)


def stein_solution(p: PsiParams, target: TargetSet, window: tuple[int, int] | None = None) -> SteinTable:
    """Closed-form Stein solution ``f_A`` tabulated over ``window``.

    ``f_A = sum_{j in A} f_j`` with
    ``f_j(i) = -pi_j E tau_{i-1}^+`` for ``i <= j`` and ``pi_j E tau_i^-`` for
    ``i > j``.  Complements use ``f_{Z \\ A} = -f_A``.  The window defaults to
    the represented support of the law.
    """
    if not p.ergodic:
        raise ValueError("Stein solution needs the ergodic regime (mu - sigma2 < kappa)")
    if window is None:
        d = psi_pmf(p)
        window = (d.lo, d.hi)
    i_min, i_max = int(window[0]), int(window[1])
    if i_max - i_min < 1:
        raise ValueError("window must contain at least two points")
    f, prob = _finite_target_f(p, target.members, i_min, i_max)
    pts = np.arange(i_min, i_max + 1)
    h = np.isin(pts, list(target.members)).astype(float) - prob
    if target.complement:
        f, h, prob = -f, -h, 1.0 - prob
    delta_f = np.diff(f)
    g = np.concatenate(([0.0], np.cumsum(f[1:])))
    return SteinTable(p, target, (i_min, i_max), f, delta_f, g, h, prob)


def stein_factor_bound(p: PsiParams, i) -> np.ndarray:
    """``(1 - pi_i)/(alpha_i ^ beta_i) ^ 1/alpha_i ^ 1/beta_i`` pointwise."""
    i = np.asarray(i)
    pi_i = np.exp(_log_pi(p, int(i.min()), int(i.max()))[i - i.min()])
    a, b = p.alpha(i), p.beta(i)
    return np.minimum.reduce([(1.0 - pi_i) / np.minimum(a, b), 1.0 / a, 1.0 / b])


@dataclass(frozen=True)
class SteinFactorCheck:
    max_ratio: float
    holds: bool
    max_ratio_weak: float
    holds_weak: bool
    max_abs_delta_f: float
    worst_point: int
    bound_at_worst: float

    def to_dict(self) -> dict:
        return {
            "max_ratio": self.max_ratio,
            "worst_point": self.worst_point,
            "bound_at_worst": self.bound_at_worst,
            "holds": self.holds,
            "max_ratio_weak": self.max_ratio_weak,
            "holds_weak": self.holds_weak,
            "max_delta_f": self.max_abs_delta_f,
        }


def stein_factor_check(
    p: PsiParams, target: TargetSet, window: tuple[int, int] | None = None
) -> SteinFactorCheck:
    """Compare ``|Delta f_A|`` with the Stein factor bounds over the window.

    Only defined for the default ``kappa = ceil(mu)``, where the bounds are
    known to hold.
    """
    if not p.is_default:
        raise ValueError("Stein factor bounds are only established for kappa = ceil(mu)")
    table = stein_solution(p, target, window)
    i = table.points[:-1]
    mag = np.abs(table.delta_f)
    strong = stein_factor_bound(p, i)
    pi_i = np.exp(_log_pi(p, int(i[0]), int(i[-1])))
    weak = (1.0 - pi_i) / p.sigma2
    ratio = mag / strong
    k = int(np.argmax(ratio))
    r_strong = float(ratio[k])
    r_weak = float(np.max(mag / weak))
    return SteinFactorCheck(
        r_strong,
        r_strong <= 1 + BOUND_TOL,
        r_weak,
        r_weak <= 1 + BOUND_TOL,
        float(mag.max()),
        int(i[k]),
        float(strong[k]),
    )


@dataclass(frozen=True)
class BDPSimConfig:
    """Monte Carlo settings for the chain.

    ``stop`` is ``"down"`` (run until ``start_state - 1``), ``"up"`` (until
    ``start_state + 1``) or ``"horizon"`` (run for ``horizon`` time units and
    report the fraction of time spent in ``window``).  ``start_state=None``
    draws the start from the stationary law.  ``window=None`` counts all time,
    so ``"down"``/``"up"`` then estimate mean passage times.
    """

    seed: int
    replicas: int
    start_state: int | None = None
    stop: str = "down"
    horizon: float | None = None
    window: tuple[int | None, int | None] | None = None
    state_cap: int = 10_000
    block_size: int = 8192

    def __post_init__(self):
        if self.replicas < 1:
            raise ValueError("replicas must be at least 1")
        if self.stop not in ("down", "up", "horizon"):
            raise ValueError(f"unknown stop rule {self.stop!r}")
        if self.stop == "horizon" and not (self.horizon and self.horizon > 0):
            raise ValueError("horizon stop rule needs a positive horizon")
        if self.stop != "horizon" and self.start_state is None:
            raise ValueError("hitting-time runs need an explicit start_state")


@dataclass(frozen=True)
class SimResult:
    estimate: float
    std_error: float
    replicas: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "std_error": self.std_error,
            "replicas": self.replicas,
            "seed": self.seed,
        }


def _run_block(p: PsiParams, cfg: BDPSimConfig, n: int, rng: np.random.Generator, start_pmf) -> np.ndarray:
    if cfg.start_state is None:
        u = rng.random(n)
        cum = np.cumsum(start_pmf.weights)
        state = start_pmf.lo + np.minimum(np.searchsorted(cum, u * cum[-1], side="right"), cum.size - 1)
    else:
        state = np.full(n, int(cfg.start_state))
    state = state.astype(np.int64)
    origin = state.copy()
    k1, k2 = cfg.window if cfg.window is not None else (None, None)
    lo = -np.inf if k1 is None else k1
    hi = np.inf if k2 is None else k2
    occupied = np.zeros(n)
    clock = np.zeros(n)
    active = np.arange(n)
    while active.size:
        s = state[active]
        a = p.alpha(s)
        b = p.beta(s)
        rate = a + b
        hold = rng.exponential(1.0, active.size) / rate
        jump_up = rng.random(active.size) * rate < a
        if cfg.stop == "horizon":
            hold = np.minimum(hold, cfg.horizon - clock[active])
        inside = (s >= lo) & (s <= hi)
        occupied[active] += np.where(inside, hold, 0.0)
        clock[active] += hold
        s = s + np.where(jump_up, 1, -1)
        state[active] = s
        if np.any(np.abs(s - p.kappa) > cfg.state_cap):
            raise StateCapExceeded(f"path left |i - kappa| <= {cfg.state_cap}")
        if cfg.stop == "down":
            done = s == origin[active] - 1
        elif cfg.stop == "up":
            done = s == origin[active] + 1
        else:
            done = clock[active] >= cfg.horizon
        active = active[~done]
    if cfg.stop == "horizon":
        return occupied / cfg.horizon
    return occupied


def bdp_simulate(p: PsiParams, cfg: BDPSimConfig) -> SimResult:
    """Monte Carlo estimate of a passage or occupation time, with its standard error.

    Replicas are split into blocks of ``cfg.block_size``; block ``b`` draws
    from its own stream seeded by ``SeedSequence(cfg.seed, spawn_key=(b,))``,
    so results are reproducible and independent of evaluation order.
    """
    if not p.ergodic:
        raise ValueError("simulation needs the ergodic regime (mu - sigma2 < kappa)")
    start_pmf = psi_pmf(p) if cfg.start_state is None else None
    samples = []
    for block, first in enumerate(range(0, cfg.replicas, cfg.block_size)):
        n = min(cfg.block_size, cfg.replicas - first)
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(block,)))
        samples.append(_run_block(p, cfg, n, rng, start_pmf))
    x = np.concatenate(samples)
    est = math.fsum(x) / x.size
    se = float(np.std(x, ddof=1) / math.sqrt(x.size)) if x.size > 1 else math.inf
    return SimResult(est, se, cfg.replicas, cfg.seed)
