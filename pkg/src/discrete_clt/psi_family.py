"""The two-parameter approximating family on the integers and its baselines.

A member ``Psi_kappa(mu, sigma2)`` is the stationary law of the bilateral
birth-death chain with birth rates

    alpha_i = sigma2            (i >= kappa),   sigma2 + mu - i   (i <= kappa - 1)

and death rates

    beta_i  = sigma2 + i - mu   (i >= kappa),   sigma2            (i <= kappa - 1).

It is built here by detailed balance, ``pi_{i+1} / pi_i = alpha_i / beta_{i+1}``,
walking outward from ``kappa`` until the terms are negligible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .dist_core import IntDist, mean, variance

DEFAULT_EPS = 1e-15

# Outward walk stops only once successive ratios fall below this, so the
# geometric tail bound below is valid and tight.
_TAIL_RATIO = 0.5


def default_kappa(mu: float) -> int:
    """min{i : i >= mu}."""
    return math.ceil(mu)


@dataclass(frozen=True)
class PsiParams:
    """Parameters ``(mu, sigma2, kappa)`` of one member of the family.

    ``kappa`` defaults to ``ceil(mu)``.  Any integer with
    ``mu - sigma2 <= kappa < mu + sigma2 + 1`` is accepted; values other than
    the default are flagged through :attr:`is_default`, and the boundary
    ``kappa == mu - sigma2`` through :attr:`ergodic`.
    """

    mu: float
    sigma2: float
    kappa: int | None = None
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be strictly positive")
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma2)):
            raise ValueError("mu and sigma2 must be finite")
        if self.kappa is None:
            object.__setattr__(self, "kappa", default_kappa(self.mu))
        if int(self.kappa) != self.kappa:
            raise ValueError("kappa must be an integer")
        object.__setattr__(self, "kappa", int(self.kappa))
        if not (self.mu - self.sigma2 <= self.kappa < self.mu + self.sigma2 + 1):
            raise ValueError(
                f"kappa={self.kappa} outside [mu - sigma2, mu + sigma2 + 1) "
                f"= [{self.mu - self.sigma2}, {self.mu + self.sigma2 + 1})"
            )
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")

    @property
    def is_default(self) -> bool:
        return self.kappa == default_kappa(self.mu)

    @property
    def ergodic(self) -> bool:
        return self.mu - self.sigma2 < self.kappa

    @property
    def flags(self) -> list[str]:
        out = []
        if not self.is_default:
            out.append("non-default kappa: Stein factor bounds not guaranteed")
        if not self.ergodic:
            out.append("non-ergodic: beta_kappa = 0 (translated Poisson boundary)")
        return out

    def alpha(self, i):
        i = np.asarray(i, dtype=np.float64)
        return np.where(i >= self.kappa, self.sigma2, self.sigma2 + self.mu - i)

    def beta(self, i):
        i = np.asarray(i, dtype=np.float64)
        return np.where(i >= self.kappa, self.sigma2 + i - self.mu, self.sigma2)


def _walk(ratio, start_term: float, eps: float, limit: int = 10_000_000):
    """Multiply out successive ratios until the terms are negligible.

    Returns the list of terms and a rigorous bound on the sum of the
    terms not produced.  ``ratio(k)`` is the factor taking term ``k-1`` to
    term ``k`` and must be nonincreasing once it drops below one.
    """
    terms = []
    term = peak = start_term
    k = 1
    while k < limit:
        q = ratio(k)
        nxt = term * q
        if nxt == 0.0:
            return terms, 0.0
        if nxt < eps * peak and q <= _TAIL_RATIO:
            q_next = ratio(k + 1)
            return terms, nxt / (1.0 - q_next)
        terms.append(nxt)
        term = nxt
        peak = max(peak, nxt)
        k += 1
    raise RuntimeError("support walk did not terminate")


@dataclass(frozen=True)
class _Unnormalized:
    lo: int
    ratios: np.ndarray  # pi_j / pi_kappa on [lo, lo + len)
    tail_upper: float  # bound on sum of omitted ratios above the window
    tail_lower: float


def _ratios(p: PsiParams) -> _Unnormalized:
    s2, mu, kappa = p.sigma2, p.mu, p.kappa

    def up(k):
        i = kappa + k  # pi_i / pi_{i-1} = alpha_{i-1} / beta_i, i >= kappa + 1
        return s2 / (s2 + i - mu)

    def down(k):
        i = kappa - k  # pi_i / pi_{i+1} = beta_{i+1} / alpha_i, i <= kappa - 1
        if i == kappa - 1:
            return (s2 + kappa - mu) / (s2 + mu - kappa + 1)
        return s2 / (s2 + mu - i)

    upper, t_up = _walk(up, 1.0, p.eps)
    lower, t_lo = _walk(down, 1.0, p.eps)
    ratios = np.array(lower[::-1] + [1.0] + upper)
    return _Unnormalized(kappa - len(lower), ratios, t_up, t_lo)


def psi_pmf(p: PsiParams) -> IntDist:
    """The pmf of ``Psi_kappa(mu, sigma2)``.

    The represented weights are scaled so that represented mass plus the
    rigorous tail bound equals one; nothing is renormalized afterwards.
    """
    u = _ratios(p)
    total = math.fsum(u.ratios) + u.tail_upper + u.tail_lower
    pi_kappa = 1.0 / total
    tail = (u.tail_upper + u.tail_lower) * pi_kappa
    return IntDist(u.lo, u.ratios * pi_kappa, tail)


def log_ratio(p: PsiParams, lo: int, hi: int) -> np.ndarray:
    """log(pi_j / pi_kappa) for j in ``[lo, hi]``, ``-inf`` where pi_j = 0."""
    js = np.arange(min(lo, p.kappa), max(hi, p.kappa) + 1)
    # log of pi_{j+1}/pi_j = alpha_j / beta_{j+1}
    with np.errstate(divide="ignore"):
        steps = np.log(p.alpha(js[:-1])) - np.log(p.beta(js[1:]))
    k = p.kappa - js[0]
    out = np.empty(js.size)
    out[k] = 0.0
    out[k + 1:] = np.cumsum(steps[k:])
    out[:k] = -np.cumsum(steps[:k][::-1])[::-1]
    if not p.ergodic:
        out[js < p.kappa] = -np.inf
    return out[lo - js[0]: hi - js[0] + 1]


def psi_moments(p: PsiParams) -> tuple[float, float, float]:
    """(mean, variance, pi_kappa) of the constructed pmf."""
    d = psi_pmf(p)
    return mean(d), variance(d), float(d.pmf(p.kappa))


def psi_variance_formula(p: PsiParams) -> float:
    """sigma2 + (sigma2 + kappa - mu) * pi_kappa."""
    pi_kappa = float(psi_pmf(p).pmf(p.kappa))
    return p.sigma2 + (p.sigma2 + p.kappa - p.mu) * pi_kappa


def psi_zero_bias(p: PsiParams) -> IntDist:
    """Zero-biased law of ``S ~ Psi``, from its closed form.

    Mass ``sigma2 * pi_j / Var(S)`` at ``j >= kappa``,
    ``1 - sigma2 / Var(S)`` at ``kappa - 1``, and
    ``sigma2 * pi_{j+1} / Var(S)`` at ``j <= kappa - 2``.
    """
    d = psi_pmf(p)
    var_s = variance(d)
    scale = p.sigma2 / var_s
    lo = min(d.lo - 1, p.kappa - 1)
    hi = max(d.hi, p.kappa - 1)
    js = np.arange(lo, hi + 1)
    w = np.where(js >= p.kappa, scale * d.pmf(js), scale * d.pmf(js + 1))
    w[js == p.kappa - 1] = max(0.0, 1.0 - scale)
    return IntDist(lo, w, d.tail_mass)


def operator_b(p: PsiParams, f_values: np.ndarray, start: int, i: np.ndarray) -> np.ndarray:
    """Apply the characterizing operator to a tabulated ``f`` at points ``i``.

    ``f`` is taken as zero outside ``[start, start + len(f_values))``.
    """
    f_values = np.asarray(f_values, dtype=np.float64)

    def f(j):
        idx = j - start
        ok = (idx >= 0) & (idx < f_values.size)
        return np.where(ok, f_values[np.clip(idx, 0, f_values.size - 1)], 0.0)

    i = np.asarray(i)
    s2, mu = p.sigma2, p.mu
    upper = s2 * f(i + 1) - (s2 + i - mu) * f(i)
    lower = (s2 + mu - i) * f(i + 1) - s2 * f(i)
    return np.where(i >= p.kappa, upper, lower)


def characterization_residual(p: PsiParams, f_values: np.ndarray, start: int) -> float:
    """|E Bf(S)| for ``S ~ Psi`` and a tabulated bounded ``f``."""
    d = psi_pmf(p)
    return abs(math.fsum(d.weights * operator_b(p, f_values, start, d.support)))


@dataclass(frozen=True)
class TruncatedFixedPoint:
    """Near fixed point of discrete zero biasing, truncated below ``kappa_tilde``."""

    mu: float
    sigma2: float
    kappa_tilde: int = field(init=False)

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be strictly positive")
        object.__setattr__(self, "kappa_tilde", math.ceil(self.mu - self.sigma2))


def truncated_fixed_point_pmf(t: TruncatedFixedPoint, eps: float = DEFAULT_EPS) -> IntDist:
    """Law on ``[kappa_tilde, inf)`` with ratios ``sigma2 / (sigma2 + i - mu)``.

    When ``mu - sigma2`` is an integer this is ``mu - sigma2 + Poisson(sigma2)``.
    """
    s2, mu, k0 = t.sigma2, t.mu, t.kappa_tilde
    upper, tail = _walk(lambda k: s2 / (s2 + k0 + k - mu), 1.0, eps)
    ratios = np.array([1.0] + upper)
    total = math.fsum(ratios) + tail
    return IntDist(k0, ratios / total, tail / total)


def translated_poisson_pmf(mu: float, sigma2: float, eps: float = DEFAULT_EPS) -> IntDist:
    return truncated_fixed_point_pmf(TruncatedFixedPoint(mu, sigma2), eps)


def discrete_normal_pmf(mu: float, sigma2: float, eps: float = DEFAULT_EPS) -> IntDist:
    """P(Y = j) = P(j - 1/2 < Z <= j + 1/2) for ``Z ~ N(mu, sigma2)``, truncated."""
    if not sigma2 > 0:
        raise ValueError("sigma2 must be strictly positive")
    sd = math.sqrt(sigma2)
    z = 1.0
    while ndtr(-z) > eps / 2:
        z += 0.5
    lo = math.floor(mu - z * sd)
    hi = math.ceil(mu + z * sd)
    edges = (np.arange(lo, hi + 2) - 0.5 - mu) / sd
    # upper half via survival differences to keep relative accuracy in the tail
    lower_cdf = ndtr(edges)
    upper_sf = ndtr(-edges)
    w = np.where(edges[:-1] < 0, lower_cdf[1:] - lower_cdf[:-1], upper_sf[:-1] - upper_sf[1:])
    w = np.maximum(w, 0.0)
    tail = float(ndtr(edges[0]) + ndtr(-edges[-1]))
    return IntDist(lo, w, tail)


def metadata(p: PsiParams) -> dict:
    """Summary block emitted alongside a serialized pmf."""
    d = psi_pmf(p)
    return {
        "mu": p.mu,
        "sigma2": p.sigma2,
        "kappa": p.kappa,
        "var_S": variance(d),
        "pi_kappa": float(d.pmf(p.kappa)),
        "tail_bound": d.tail_mass,
        "flags": p.flags,
    }


__all__ = [
    "PsiParams",
    "TruncatedFixedPoint",
    "characterization_residual",
    "default_kappa",
    "discrete_normal_pmf",
    "log_ratio",
    "metadata",
    "operator_b",
    "psi_moments",
    "psi_pmf",
    "psi_variance_formula",
    "psi_zero_bias",
    "translated_poisson_pmf",
    "truncated_fixed_point_pmf",
]
