from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import walks
from trilattice.errors import CapacityExceeded, NotPeriodic
from trilattice.fixtures import FIXTURES, one_sided_walk, simple_walk, skew_walk
from trilattice.kernel import (
    EXACT,
    FLOAT,
    KernelTable,
    LatticePoint,
    chapman_kolmogorov,
    evolve,
    fourier_kernel,
    fourier_p_n,
    kernel,
    kernels,
    p_n,
    period_check,
    step_support,
    sublattice_of,
)
from trilattice.realization import standard_basis

F = Fraction


def test_lattice_point():
    assert LatticePoint(2, 5).x3 == 3


def test_step_support_simple():
    pairs = step_support(simple_walk())
    assert len(pairs) == 6 and all(w == F(1, 6) for _, w in pairs)


def test_step_support_one_sided():
    support = {s for s, w in step_support(one_sided_walk()) if w}
    assert support == {(1, 0), (0, -1), (-1, 1)}


def test_step_support_plane_drift():
    p = skew_walk()
    r = standard_basis(p).realization
    drift = sum(float(w) * np.asarray(v) for v, w in step_support(p, r))
    assert np.abs(drift).max() < 1e-16


def test_evolve_zero_steps():
    t = KernelTable.delta(EXACT)
    assert evolve(t, simple_walk(), 0).mass[0, 0] == 1


def test_two_step_return():
    assert p_n(simple_walk(), 2, (0, 0)) == F(1, 6)


def test_one_sided_first_step():
    assert p_n(one_sided_walk(), 1, (0, 1)) == 0
    assert p_n(one_sided_walk(), 1, (1, 0)) == F(1, 3)


def test_trivial_values():
    assert p_n(skew_walk(), 0, (0, 0)) == 1
    assert p_n(one_sided_walk(), 3, (0, 0)) == F(2, 9)


def test_capacity():
    with pytest.raises(CapacityExceeded):
        kernel(simple_walk(), 10, capacity=5)


def test_exact_denominators():
    p = skew_walk()
    t = kernel(p, 7, EXACT)
    assert t.denominator == 12**7
    for _, v in t.items():
        assert (12**7 % v.denominator) == 0


def test_support_bound():
    t = kernel(simple_walk(), 9, EXACT)
    assert all(abs(a) <= 9 and abs(b) <= 9 for (a, b), _ in t.items())


def test_mass_exact_up_to_60():
    for name, make in FIXTURES.items():
        tables = kernels(make(), range(1, 61), EXACT)
        for n, t in tables.items():
            assert t.total_mass() == 1, (name, n)


def test_float_mass():
    assert abs(kernel(skew_walk(), 300).total_mass() - 1) < 1e-13


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_dp_vs_fourier(name):
    p = FIXTURES[name]()
    tables = kernels(p, range(1, 51), FLOAT)
    worst = 0.0
    for n, t in tables.items():
        ft = fourier_kernel(p, n)
        R = min(n, 10)
        a = t.mass[n - R : n + R + 1, n - R : n + R + 1]
        b = ft.mass[n - R : n + R + 1, n - R : n + R + 1]
        worst = max(worst, np.abs(a - b).max())
    assert worst < 1e-12


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_trapezoid_points(name):
    p = FIXTURES[name]()
    t = kernel(p, 30, EXACT)
    for y in [(0, 0), (3, -2), (-7, 4), (10, 10), (1, 0)]:
        assert abs(fourier_p_n(p, 30, y) - float(t[y])) < 1e-12


def test_fourier_one_step():
    p = skew_walk()
    assert abs(fourier_p_n(p, 1, (1, 0)) - float(p.alpha)) < 1e-15
    assert abs(fourier_p_n(one_sided_walk(), 2, (0, 0))) < 1e-15


def test_symmetric_reflection():
    tables = kernels(simple_walk(), range(1, 31), EXACT)
    for t in tables.values():
        assert (t.mass == t.mass[::-1, ::-1]).all()


@pytest.mark.parametrize("m,n", [(1, 1), (2, 3), (5, 5)])
def test_chapman_kolmogorov(m, n):
    p = skew_walk()
    tm, tn, tmn = kernel(p, m, EXACT), kernel(p, n, EXACT), kernel(p, m + n, EXACT)
    for y in [(0, 0), (1, -1), (2, 3), (-4, 1), (m + n, 0)]:
        assert chapman_kolmogorov(tm, tn, y) == tmn[y]


@given(walks(max_k=20), st.integers(1, 4), st.integers(1, 4),
       st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
@settings(max_examples=25, deadline=None)
def test_chapman_kolmogorov_property(p, m, n, y):
    assert chapman_kolmogorov(kernel(p, m, EXACT), kernel(p, n, EXACT), y) == p_n(p, m + n, y)


def test_sublattice_convention():
    assert sublattice_of((0, 0)) == 0
    assert sublattice_of((1, 0)) == 1
    assert sublattice_of((2, 0)) == 2
    assert sublattice_of((2, -1)) == 0
    assert sublattice_of((1, 1)) == 0


def test_period_check_examples():
    p = one_sided_walk()
    assert period_check(p, 3, (0, 0), (0, 0))
    assert not period_check(p, 4, (0, 0), (0, 0))
    assert period_check(p, 1, (0, 0), (1, 0))
    with pytest.raises(NotPeriodic):
        period_check(simple_walk(), 3, (0, 0), (0, 0))


def test_period_support_exhaustive():
    p = one_sided_walk()
    for n, t in kernels(p, range(1, 13), EXACT).items():
        for y1 in range(-12, 13):
            for y2 in range(-12, 13):
                if t[(y1, y2)] > 0:
                    assert period_check(p, n, (0, 0), (y1, y2))
