import math

import numpy as np
import pytest

from conftest import random_dist
from discrete_clt.bounds import (
    CSV_COLUMNS,
    approximant,
    bound_report,
    cor43_bound,
    dplus_exact,
    dplus_prop44,
    lattice_span,
    shift_distance,
    thm41_bound,
    thm42_bound,
    wasserstein_route_bound,
)
from discrete_clt.dist_core import (
    IntDist,
    bernoulli,
    max_pmf,
    self_convolve,
    shift,
    tail_slack,
    tv_distance,
    uniform,
)
from discrete_clt.psi_family import translated_poisson_pmf
from discrete_clt.zero_bias import ComponentSet, optimal_coupling, zero_bias


def aperiodic_sets(rng, count):
    out = []
    while len(out) < count:
        comps = tuple(random_dist(rng, 5) for _ in range(int(rng.integers(2, 7))))
        cs = ComponentSet(comps)
        if lattice_span(cs.total()) == 1:
            out.append(cs)
    return out


def joint_table_bound(cs, K):
    """Direct double sum over the coupling table, one component at a time."""
    total = 0.0
    for i, (c, v) in enumerate(zip(cs.components, cs.variances)):
        if v <= 0:
            continue
        cpl = optimal_coupling(c, zero_bias(c))
        dp = dplus_exact(cs, i)
        for (x, y), m in cpl.joint.items():
            a, b = abs(x - y), abs(x - y - 1)
            total += v * m * (dp * (min(a, K) + min(b, K)) + (a > K) + (b > K))
    return 2.0 / cs.total_variance * total


def test_cor43_examples():
    bound, v2 = cor43_bound([0.3] * 30)
    assert v2 == pytest.approx(6.09, abs=1e-12)
    assert bound == pytest.approx(1 / math.sqrt(6.09), abs=1e-12)
    assert cor43_bound([0.5, 0.5]) == (2.0, 0.25)
    with pytest.raises(ValueError):
        cor43_bound([0.5])
    with pytest.raises(ValueError):
        cor43_bound([0.5, 1.0])


def test_cor43_scaling_stabilizes():
    p = 0.37
    scaled = [cor43_bound([p] * n)[0] * math.sqrt(n) for n in (1000, 4000)]
    assert abs(scaled[1] / scaled[0] - 1) < 0.01
    assert scaled[1] == pytest.approx(1 / math.sqrt(p * (1 - p)), rel=1e-3)


@pytest.mark.parametrize("n", [5, 10, 20, 50])
@pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.9])
def test_cor43_dominates_exact_distance(n, p):
    cs = ComponentSet.bernoulli([p] * n)
    w = cs.total()
    psi = approximant(w)
    assert tv_distance(w, psi) <= cor43_bound([p] * n)[0] + tail_slack(w, psi)


def test_thm41_on_translated_poisson():
    y = translated_poisson_pmf(5.0, 2.0)
    assert thm41_bound(y) >= tv_distance(y, approximant(y))
    # Y* = Y, so only the shift mismatch below kappa contributes
    kappa = math.ceil(5.0)
    i = np.arange(y.lo, kappa)
    expected = math.fsum(np.abs(y.pmf(i) - y.pmf(i - 1)))
    assert thm41_bound(y) == pytest.approx(expected, abs=1e-12)


def test_thm41_on_binomial():
    y = self_convolve(bernoulli(0.5), 20)
    psi = approximant(y)
    assert tv_distance(y, psi) <= thm41_bound(y) + tail_slack(y, psi)


def test_thm41_dominance_random():
    rng = np.random.default_rng(31)
    for _ in range(20):
        y = random_dist(rng, 12)
        psi = approximant(y)
        assert tv_distance(y, psi) <= thm41_bound(y) + tail_slack(y, psi)


def test_dplus_examples():
    assert dplus_exact(ComponentSet((bernoulli(0.4),)), 0) == 1.0
    cs = ComponentSet.bernoulli([0.5] * 20)
    v2 = cs.total_variance - 0.25
    for i in (0, 7):
        assert dplus_exact(cs, i) <= max_pmf(cs.leave_one_out(i)) + 1e-15
        assert dplus_exact(cs, i) <= 0.5 / math.sqrt(v2)
    periodic = ComponentSet.iid(uniform([0, 3]), 5)
    assert dplus_exact(periodic, 2) == 1.0
    with pytest.raises(IndexError):
        dplus_exact(cs, 20)


def test_smoothness_estimate():
    for n in (4, 10, 33):
        s = dplus_prop44(ComponentSet.bernoulli([0.5] * n))
        assert s.U == pytest.approx(n / 2, abs=1e-12)
        assert s.bound_W == pytest.approx(math.sqrt(2 / n), abs=1e-12)
    s = dplus_prop44(ComponentSet.iid(uniform([0, 3]), 4))
    assert s.U == 0 and s.vacuous and s.bound_W == math.inf


def test_smoothness_dominates_exact_shift_distance():
    rng = np.random.default_rng(12)
    for cs in aperiodic_sets(rng, 10):
        s = dplus_prop44(cs)
        assert shift_distance(cs.total()) <= s.bound_W + 1e-15
        if math.isfinite(s.bound_Wi):
            assert max(dplus_exact(cs, i) for i in range(len(cs))) <= s.bound_Wi + 1e-15


def test_bernoulli_thm42_reduces_to_indicator_form():
    p, n = 0.3, 12
    cs = ComponentSet.bernoulli([p] * n)
    cpl = optimal_coupling(bernoulli(p), zero_bias(bernoulli(p)))
    assert cpl.expect(lambda x, y: abs(x - y)) == pytest.approx(p)
    assert cpl.expect(lambda x, y: abs(x - y - 1)) == pytest.approx(1 - p)
    expected = 2 / cs.total_variance * math.fsum(v * dplus_exact(cs, i) for i, v in enumerate(cs.variances))
    assert thm42_bound(cs) == pytest.approx(expected, abs=1e-12)


def test_thm42_self_fixed_component_keeps_only_shift_term():
    d = translated_poisson_pmf(4.0, 2.0)
    cs = ComponentSet((d,))
    # xi* = xi, so the first expectation vanishes and the second is exactly 1
    assert thm42_bound(cs) == pytest.approx(2.0 * 1.0 * dplus_exact(cs, 0), abs=1e-12)


def test_thm42_finite_K_matches_joint_table():
    rng = np.random.default_rng(77)
    for cs in aperiodic_sets(rng, 5):
        for K in (0.5, 1, 2, 3.5, math.inf):
            assert thm42_bound(cs, K) == pytest.approx(joint_table_bound(cs, K), abs=1e-12)
        gap = max(c.hi - c.lo for c in cs.components) + 1
        assert thm42_bound(cs, gap) == pytest.approx(thm42_bound(cs), abs=1e-12)
    with pytest.raises(ValueError):
        thm42_bound(cs, 0)


def test_thm42_dominance_and_cdf_route_agree():
    rng = np.random.default_rng(5)
    for cs in aperiodic_sets(rng, 10):
        w = cs.total()
        psi = approximant(w)
        bound = thm42_bound(cs)
        assert tv_distance(w, psi) <= bound + tail_slack(w, psi)
        assert bound == pytest.approx(wasserstein_route_bound(cs), abs=1e-12)


def test_thm42_permutation_invariance():
    rng = np.random.default_rng(6)
    cs = aperiodic_sets(rng, 1)[0]
    base = thm42_bound(cs)
    for _ in range(5):
        assert thm42_bound(cs.permuted(rng.permutation(len(cs)))) == pytest.approx(base, abs=1e-12)


def test_degenerate_components_carry_no_weight():
    cs = ComponentSet((bernoulli(0.3), bernoulli(0.6), IntDist(4, [1.0])))
    shifted = ComponentSet((bernoulli(0.3), bernoulli(0.6)))
    assert thm42_bound(cs) == pytest.approx(thm42_bound(shifted), abs=1e-14)


def test_lattice_span():
    assert lattice_span(uniform([0, 3, 9])) == 3
    assert lattice_span(uniform([0, 1, 3])) == 1
    assert lattice_span(IntDist(2, [1.0])) == 0
    assert lattice_span(shift(uniform([0, 2]), 7)) == 2


def test_report_for_indicator_sum():
    r = bound_report(ComponentSet.bernoulli([0.3] * 30))
    assert r.actual_tv <= r.cor43_bound <= 1
    assert r.actual_tv <= r.thm42_bound
    assert r.actual_tv <= r.thm41_bound + r.tail_slack
    assert not r.flags and not r.periodic
    row = r.csv_row(0.3)
    assert tuple(row) == CSV_COLUMNS
    assert all(math.isfinite(v) for k, v in row.items() if k != "p")


def test_report_flags_periodic_sums():
    r = bound_report(ComponentSet.iid(uniform([0, 3]), 20))
    assert r.actual_tv >= 0.3
    assert r.periodic and all(u == 0 for u in r.u)
    assert any("periodic" in f for f in r.flags)
    assert r.csv_row()["prop44"] == 1.0


def test_report_for_mixed_components():
    cs = ComponentSet((bernoulli(0.2), uniform([0, 1, 2]), uniform([-1, 0, 1, 2]), bernoulli(0.7)))
    r = bound_report(cs)
    assert r.actual_tv < r.thm42_bound
    assert r.to_dict()["periodic"] is False
