import math

import numpy as np
import pytest
from hypothesis import given, settings
from scipy import stats

from conftest import int_dists, random_dist
from discrete_clt.dist_core import (
    IntDist,
    bernoulli,
    convolve,
    mean,
    mixture,
    point_mass,
    self_convolve,
    shift,
    tv_distance,
    uniform,
    variance,
    wasserstein1,
)
from discrete_clt.psi_family import translated_poisson_pmf
from discrete_clt.zero_bias import (
    ComponentSet,
    optimal_coupling,
    size_bias,
    sum_zero_bias,
    verify_characterization,
    zero_bias,
)


def f_table(d: IntDist, rng=None):
    zb = zero_bias(d)
    lo, hi = min(d.lo, zb.lo), max(d.hi, zb.hi + 1)
    n = hi - lo + 1
    values = np.zeros(n) if rng is None else rng.uniform(-1, 1, n)
    return lo, values


@pytest.mark.parametrize("p", [0.01, 0.3, 0.5, 0.99])
def test_bernoulli_goes_to_zero(p):
    zb = zero_bias(bernoulli(p))
    assert zb.lo == zb.hi == 0
    assert zb.pmf(0) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("n, p", [(5, 0.2), (20, 0.5), (40, 0.85)])
def test_binomial_goes_to_smaller_binomial(n, p):
    zb = zero_bias(self_convolve(bernoulli(p), n))
    k = np.arange(n)
    np.testing.assert_allclose(zb.on_window(0, n - 1), stats.binom.pmf(k, n - 1, p), atol=1e-13)


@pytest.mark.parametrize("mu, s2", [(5, 2), (-1, 3), (0.5, 1.5), (10, 10)])
def test_translated_poisson_is_fixed(mu, s2):
    d = translated_poisson_pmf(mu, s2)
    assert tv_distance(zero_bias(d), d) < 1e-12


def test_point_mass_rejected():
    with pytest.raises(ValueError):
        zero_bias(point_mass(3))


@settings(max_examples=80)
@given(int_dists(min_points=2))
def test_output_is_a_probability_law(d):
    if variance(d) < 1e-6:
        return
    zb = zero_bias(d)
    assert np.all(zb.weights >= 0)
    assert abs(math.fsum(zb.weights) - 1.0) < 1e-12
    assert d.lo <= zb.lo and zb.hi <= d.hi - 1


def test_characterization_simple_functions():
    d = bernoulli(0.3)
    lo, zeros = f_table(d)
    assert verify_characterization(d, zeros + 2.5, lo) < 1e-15
    identity = np.arange(lo, lo + zeros.size, dtype=float)
    assert verify_characterization(d, identity, lo) < 1e-16


def test_characterization_random():
    rng = np.random.default_rng(5)
    for _ in range(20):
        d = random_dist(rng, 10)
        for _ in range(10):
            lo, f = f_table(d, rng)
            assert verify_characterization(d, f, lo) < 1e-10 * np.abs(f).max()


def test_characterization_needs_full_table():
    d = uniform([0, 1, 2])
    with pytest.raises(ValueError):
        verify_characterization(d, np.zeros(2), 0)


@settings(max_examples=60)
@given(int_dists(min_points=2))
def test_third_moment_bridge(d):
    if variance(d) < 1e-3:
        return
    mu, s2 = mean(d), variance(d)
    y, w = d.support.astype(float), d.weights
    lhs = math.fsum(w * (y**3 - mu * y**2))
    zb = zero_bias(d)
    rhs = s2 * math.fsum(zb.weights * (2 * zb.support + 1))
    assert lhs == pytest.approx(rhs, abs=1e-9 * max(1.0, abs(lhs)))


def test_size_bias_examples():
    assert size_bias(bernoulli(0.4)).pmf(1) == pytest.approx(1.0)
    assert size_bias(point_mass(4)).pmf(4) == pytest.approx(1.0)
    pois = translated_poisson_pmf(3.0, 3.0)
    assert tv_distance(size_bias(pois), shift(pois, 1)) < 1e-13
    with pytest.raises(ValueError):
        size_bias(uniform([-1, 1]))
    with pytest.raises(ValueError):
        size_bias(point_mass(0))


def test_size_bias_replacement():
    rng = np.random.default_rng(8)
    for _ in range(10):
        comps = tuple(random_dist(rng, 5, lo_range=(0, 3)) for _ in range(int(rng.integers(1, 5))))
        cs = ComponentSet(comps)
        mu = cs.total_mean
        terms = [convolve(cs.leave_one_out(i), size_bias(c)) for i, c in enumerate(comps)]
        replaced = mixture(terms, [m / mu for m in cs.means])
        direct = size_bias(cs.total())
        lo, hi = min(direct.lo, replaced.lo), max(direct.hi, replaced.hi)
        np.testing.assert_allclose(replaced.on_window(lo, hi), direct.on_window(lo, hi), atol=1e-11, rtol=0)


def test_component_set_totals_and_validation():
    cs = ComponentSet((bernoulli(0.2), uniform([0, 1, 2]), point_mass(5)))
    assert cs.total_mean == pytest.approx(0.2 + 1 + 5)
    assert cs.total_variance == pytest.approx(0.16 + 2 / 3)
    with pytest.raises(ValueError):
        ComponentSet((point_mass(1), point_mass(2)))
    with pytest.raises(IndexError):
        cs.leave_one_out(3)
    assert tv_distance(cs.leave_one_out(1), convolve(bernoulli(0.2), point_mass(5))) < 1e-15


def test_sum_replacement_examples():
    n, p = 12, 0.35
    cs = ComponentSet.bernoulli([p] * n)
    k = np.arange(n)
    np.testing.assert_allclose(sum_zero_bias(cs).on_window(0, n - 1), stats.binom.pmf(k, n - 1, p), atol=1e-13)
    single = ComponentSet((uniform([0, 2, 3]),))
    assert tv_distance(sum_zero_bias(single), zero_bias(uniform([0, 2, 3]))) < 1e-15
    mixed = ComponentSet((bernoulli(0.5), uniform([0, 1, 2])))
    assert tv_distance(sum_zero_bias(mixed), zero_bias(mixed.total())) < 1e-11


def test_sum_replacement_random_sets():
    rng = np.random.default_rng(21)
    for _ in range(10):
        cs = ComponentSet(tuple(random_dist(rng, 8) for _ in range(int(rng.integers(1, 7)))))
        assert tv_distance(sum_zero_bias(cs), zero_bias(cs.total())) < 1e-11


def test_coupling_examples():
    d = uniform([0, 1, 5])
    diag = optimal_coupling(d, d)
    assert diag.expect(lambda x, y: abs(x - y)) == 0.0
    c = optimal_coupling(point_mass(0), point_mass(3))
    assert c.joint == {(0, 3): 1.0}
    c = optimal_coupling(bernoulli(0.5), point_mass(0))
    assert c.expect(lambda x, y: abs(x - y)) == pytest.approx(0.5)


@settings(max_examples=80)
@given(int_dists(), int_dists())
def test_coupling_marginals_and_transport_cost(a, b):
    c = optimal_coupling(a, b)
    assert all(v >= 0 for v in c.joint.values())
    for x, v in c.row_sums().items():
        assert v == pytest.approx(a.pmf(x), abs=1e-12)
    for y, v in c.col_sums().items():
        assert v == pytest.approx(b.pmf(y), abs=1e-12)
    assert c.expect(lambda x, y: abs(x - y)) == pytest.approx(wasserstein1(a, b), abs=1e-12)


def test_coupling_is_comonotone():
    rng = np.random.default_rng(2)
    a, b = random_dist(rng, 7), random_dist(rng, 7)
    pairs = sorted(optimal_coupling(a, b).joint)
    ys = [y for _, y in pairs]
    assert ys == sorted(ys)
