import math

import numpy as np
import pytest

from conftest import random_walks
from trilattice.errors import DomainError
from trilattice.fixtures import one_sided_walk, simple_walk, skew_walk
from trilattice.realization import energy, minimize_energy, standard_basis
from trilattice.walk import covariance


def test_simple_closed_form():
    s = standard_basis(simple_walk())
    assert math.isclose(s.A_G, 1 / math.sqrt(3), rel_tol=1e-15)
    assert math.isclose(s.l, math.sqrt(2 / 3), rel_tol=1e-15)
    assert s.h1 == pytest.approx((math.sqrt(2 / 3), 0.0), abs=1e-15)
    assert s.h2 == pytest.approx((1 / math.sqrt(6), 1 / math.sqrt(2)), abs=1e-15)


def test_skew_closed_form():
    s = standard_basis(skew_walk())
    assert math.isclose(s.A_G, 2 / math.sqrt(11), rel_tol=1e-15)
    assert math.isclose(s.l, 2 * math.sqrt(2) / math.sqrt(11), rel_tol=1e-15)
    assert s.h2 == pytest.approx((1 / math.sqrt(22), 1 / math.sqrt(2)), abs=1e-15)


def test_one_sided_area():
    assert math.isclose(standard_basis(one_sided_walk()).A_G, 1 / math.sqrt(3), rel_tol=1e-15)


def test_area_and_isotropy_random():
    for p in random_walks(50, seed=21):
        s = standard_basis(p)
        assert abs(s.area - s.A_G) <= 1e-14 * s.A_G
        Q = covariance(p, s.realization).Q
        assert np.abs(Q - np.eye(2) / 3).max() < 1e-13


def test_q_inverse_is_three_times_euclidean():
    rng = np.random.default_rng(4)
    p = skew_walk()
    s = standard_basis(p)
    cov = covariance(p, s.realization)
    for x, y in rng.integers(-9, 10, size=(20, 2, 2)):
        xv, yv = s.embed(*x), s.embed(*y)
        assert math.isclose(xv @ cov.Q_inv @ yv, 3 * xv @ yv, rel_tol=1e-12, abs_tol=1e-12)


def test_energy_domain():
    with pytest.raises(DomainError):
        energy(simple_walk(), 0.0, 0.1, 1.0)
    with pytest.raises(DomainError):
        energy(simple_walk(), 1.0, 0.1, -1.0)


def test_energy_grid_search():
    # no grid point on the constraint surface beats the closed form
    p = simple_walk()
    s = standard_basis(p)
    best = energy(p, s.h1[0], *s.h2)
    us = np.linspace(0.3, 1.6, 50)
    v1s = np.linspace(-1.0, 1.5, 50)
    for u in us:
        for v1 in v1s:
            assert energy(p, u, v1, s.A_G / u) >= best - 1e-15


def test_energy_convex():
    rng = np.random.default_rng(8)
    p = skew_walk()
    for _ in range(100):
        a = rng.uniform([0.1, -2, 0.1], [3, 2, 3])
        b = rng.uniform([0.1, -2, 0.1], [3, 2, 3])
        mid = (a + b) / 2
        assert energy(p, *mid) <= (energy(p, *a) + energy(p, *b)) / 2 + 1e-15


@pytest.mark.parametrize("make", [simple_walk, skew_walk, one_sided_walk])
def test_optimizer_matches_closed_form(make):
    p = make()
    s = standard_basis(p)
    u, v1, v2 = minimize_energy(p, s.A_G)
    assert np.abs(np.array([u, v1, v2]) - np.array([s.h1[0], *s.h2])).max() < 1e-8


def test_optimizer_skew_v1_uses_gamma_hat():
    p = skew_walk()
    s = standard_basis(p)
    _, v1, _ = minimize_energy(p, s.A_G)
    b, c = float(p.beta_hat), float(p.gamma_hat)
    assert abs(v1 - c * s.l / (b + c)) < 1e-8


def test_doubling_area():
    p = skew_walk()
    s = standard_basis(p)
    one = np.array(minimize_energy(p, s.A_G))
    two = np.array(minimize_energy(p, 2 * s.A_G))
    assert np.abs(two - math.sqrt(2) * one).max() < 1e-8


def test_optimizer_random():
    for p in random_walks(50, seed=31):
        s = standard_basis(p)
        got = np.array(minimize_energy(p, s.A_G))
        assert np.abs(got - np.array([s.h1[0], *s.h2])).max() < 1e-8


def test_bad_area():
    with pytest.raises(DomainError):
        minimize_energy(simple_walk(), 0.0)
