"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run under pytest (lines are printed in the terminal summary) or directly
with ``python tests/test_acceptance.py``.
"""

import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from conftest import random_walks  # noqa: E402
from trilattice.expansion import (  # noqa: E402
    GRAM,
    STANDARD,
    a1_closed_form,
    canonical_theta,
    correction_components,
    correction_polynomials,
    edgeworth_b,
    extract_a1_numeric,
    gaussian_fourier_check,
    gram_identity,
    p1_reference,
    p2_constant_references,
    theta_multisets,
)
from trilattice.fixtures import FIXTURES, one_sided_walk, simple_walk, skew_walk, tilted_walk  # noqa: E402
from trilattice.heat import CompactBump, GaussianBump, PlateauLinear, generator_gap, semigroup_gaps  # noqa: E402
from trilattice.kernel import (  # noqa: E402
    EXACT,
    FLOAT,
    chapman_kolmogorov,
    fourier_kernel,
    kernel,
    kernels,
    p_n,
    period_check,
)
from trilattice.realization import minimize_energy, standard_basis  # noqa: E402
from trilattice.walk import Realization, covariance, gram_numeric, gram_table, moment_poly  # noqa: E402

F = Fraction
RESULTS = {}
DEFAULT_GRID = [64, 128, 256, 512]


def report(k, ok, detail):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[k] = line
    print(line)
    assert ok, line


def test_criterion_1_simple_walk():
    t0 = time.perf_counter()
    p = simple_walk()
    closed = a1_closed_form(p, 0, 0)
    est = extract_a1_numeric(p, (0, 0), DEFAULT_GRID)
    dt = time.perf_counter() - t0
    ok = closed == F(-1, 2) and abs(est + 0.5) <= 0.02 and dt < 30
    report(1, ok, f"closed={closed} numeric={est:.6f} time={dt:.1f}s")


def test_criterion_2_tilted_walk():
    t0 = time.perf_counter()
    p = tilted_walk(F(1, 10))
    closed = a1_closed_form(p, 0, 0)
    est = extract_a1_numeric(p, (0, 0), DEFAULT_GRID)
    dt = time.perf_counter() - t0
    ok = closed == F(-14, 25) and abs(est + 0.56) <= 0.02 and dt < 30
    report(2, ok, f"closed={closed} numeric={est:.6f} time={dt:.1f}s")


def test_criterion_3_skew_walk():
    p = skew_walk()
    mismatches = []
    worst = 0.0
    for y1 in range(-3, 4):
        for y2 in range(-3, 4):
            target = F(-719, 1331) + F(6, 121) * (2 * y1 - 5 * y2)
            hat = a1_closed_form(p, y1, y2, STANDARD)
            gram = a1_closed_form(p, y1, y2, GRAM)
            worst = max(worst, abs(float(hat - gram)))
            if hat != target or gram != target:
                mismatches.append((y1, y2, hat, target))
    est = extract_a1_numeric(p, (0, 0), DEFAULT_GRID)
    numeric_ok = abs(est - (-719 / 1331)) <= 0.02
    ok = not mismatches and worst <= 1e-13 and numeric_ok
    detail = f"forms agree to {worst:.1e}; numeric(y=0)={est:.6f}; off-target points={len(mismatches)}/49"
    if mismatches:
        y1, y2, got, want = mismatches[0]
        detail += f" e.g. y=({y1},{y2}) got {got} want {want}"
    report(3, ok, detail)


def test_criterion_4_periodic():
    p = one_sided_walk()
    first = p_n(p, 3, (0, 0), EXACT) == F(2, 9)
    off_class = 0
    for n, t in kernels(p, range(0, 13), EXACT).items():
        for y1 in range(-12, 13):
            for y2 in range(-12, 13):
                if n and not period_check(p, n, (0, 0), (y1, y2)) and t[(y1, y2)] != 0:
                    off_class += 1
    ms = [32, 64, 128]
    ns = [3 * m for m in ms]
    tabs = kernels(p, ns, FLOAT)
    ratios = [2 * math.pi * n * tabs[n][(0, 0)] * math.sqrt(3) / 9 for n in ns]
    est = extract_a1_numeric(p, (0, 0), ns)
    conv = abs(ratios[-1] - 1) < abs(ratios[0] - 1) and abs(ratios[-1] - 1) < 0.01
    ok = first and off_class == 0 and conv and abs(est + 2 / 3) <= 0.03
    report(4, ok, f"p(3,0,0)=2/9:{first} off-class nonzeros={off_class} "
                  f"ratio(384)={ratios[-1]:.6f} a1={est:.6f}")


def test_criterion_5_symbolic():
    bad = []
    fixtures = [f() for f in FIXTURES.values()]
    for p in fixtures + random_walks(10, seed=50):
        b = edgeworth_b(p, 2)
        m2, m3, m4 = (moment_poly(p, q) for q in (2, 3, 4))
        if canonical_theta(b[1]) != canonical_theta(m3 / 6):
            bad.append("b1")
        if canonical_theta(b[2]) != canonical_theta(m3 * m3 / 72 + m4 / 24 - m2 * m2 / 8):
            bad.append("b2")
        if correction_polynomials(p, 1)[0] != p1_reference(p):
            bad.append("P1")
        a0, high = p2_constant_references(p)
        parts = correction_components(p, 2)
        low = sum(parts[k].coefficient((0, 0)) for k in parts if k <= 4)
        if low != a0 or (parts[6].coefficient((0, 0)) if 6 in parts else 0) != high:
            bad.append("P2")
    ident = max(abs(float(gram_identity(p)) - 8) for p in random_walks(50, seed=51))
    ok = not bad and ident <= 1e-12
    report(5, ok, f"mismatches={sorted(set(bad))} identity max dev={ident:.1e}")


def test_criterion_6_oracles():
    worst = 0.0
    for make in FIXTURES.values():
        p = make()
        for n, t in kernels(p, range(1, 51), FLOAT).items():
            ft = fourier_kernel(p, n)
            R = min(n, 10)
            sl = slice(n - R, n + R + 1)
            worst = max(worst, float(np.abs(t.mass[sl, sl] - ft.mass[sl, sl]).max()))
    mass_ok = all(
        t.total_mass() == 1
        for make in FIXTURES.values()
        for t in kernels(make(), range(1, 61), EXACT).values()
    )
    ok = worst <= 1e-12 and mass_ok
    report(6, ok, f"DP vs Fourier max diff={worst:.1e}; exact masses all 1: {mass_ok}")


def test_criterion_7_realization():
    s = standard_basis(simple_walk())
    k = standard_basis(skew_walk())
    o = standard_basis(one_sided_walk())
    fixtures_ok = (
        abs(s.A_G - 1 / math.sqrt(3)) < 1e-15
        and abs(s.l - math.sqrt(2 / 3)) < 1e-15
        and np.allclose(s.h2, (1 / math.sqrt(6), 1 / math.sqrt(2)), atol=1e-15, rtol=0)
        and abs(k.A_G - 2 / math.sqrt(11)) < 1e-15
        and np.allclose(k.h2, (1 / math.sqrt(22), 1 / math.sqrt(2)), atol=1e-15, rtol=0)
        and abs(o.A_G - 1 / math.sqrt(3)) < 1e-15
    )
    opt = 0.0
    for make in (simple_walk, skew_walk, one_sided_walk):
        p = make()
        b = standard_basis(p)
        got = np.array(minimize_energy(p, b.A_G))
        opt = max(opt, float(np.abs(got - np.array([b.h1[0], *b.h2])).max()))
    iso = max(
        float(np.abs(covariance(p, standard_basis(p).realization).Q - np.eye(2) / 3).max())
        for p in random_walks(50, seed=70)
    )
    ok = fixtures_ok and opt <= 1e-8 and iso <= 1e-13
    report(7, ok, f"fixtures ok: {fixtures_ok}; optimizer err={opt:.1e}; max |Q - I/3|={iso:.1e}")


def test_criterion_8_heat_limit():
    t0 = time.perf_counter()
    deltas = [0.2, 0.1, 0.05, 0.025]
    funcs = {"gauss": GaussianBump(), "bump": CompactBump(2.0), "plateau-linear": PlateauLinear()}
    slopes = {}
    for wname in ("simple", "tilted", "skew"):
        p = FIXTURES[wname]()
        r = standard_basis(p)
        for fname, f in funcs.items():
            gaps = [generator_gap(p, r, f, d) for d in deltas]
            slopes[wname, fname] = float(np.polyfit(np.log(deltas), np.log(gaps), 1)[0])
    f = GaussianBump()
    semi = {}
    for wname, make in FIXTURES.items():
        p = make()
        semi[wname] = semigroup_gaps(p, standard_basis(p), f, 1.0, [400])[400]
    dt = time.perf_counter() - t0
    out_of_window = {k: round(v, 3) for k, v in slopes.items() if not 0.8 <= v <= 1.3}
    semi_ok = all(v < 0.01 * f.sup_norm() for v in semi.values())
    ok = not out_of_window and semi_ok and dt < 120
    report(8, ok, f"slopes outside [0.8,1.3]: {out_of_window}; "
                  f"max semigroup gap={max(semi.values()):.2e}; time={dt:.1f}s")


def test_criterion_9_properties():
    failures = []
    for p in random_walks(8, seed=90) + [simple_walk(), one_sided_walk()]:
        for j, Pj in enumerate(correction_polynomials(p, 4), 1):
            if any(d % 2 != j % 2 for d in Pj.degrees()) or Pj.degree() > 3 * j:
                failures.append("parity")
            if p.kappa == 0 and j % 2 and not Pj.is_zero():
                failures.append("odd-vanish")
    p = skew_walk()
    for m, n in [(1, 1), (2, 3), (5, 5)]:
        tm, tn, tmn = kernel(p, m, EXACT), kernel(p, n, EXACT), kernel(p, m + n, EXACT)
        for y in [(0, 0), (1, -1), (2, 3), (-3, 2)]:
            if chapman_kolmogorov(tm, tn, y) != tmn[y]:
                failures.append("chapman-kolmogorov")
    rng = np.random.default_rng(91)
    for q in random_walks(10, seed=91):
        g = gram_table(q)
        for _ in range(2):
            e1, e2 = rng.normal(size=2), rng.normal(size=2)
            if abs(e1[0] * e2[1] - e1[1] * e2[0]) < 0.2:
                continue
            r = Realization(tuple(e1), tuple(e2))
            num = gram_numeric(covariance(q, r), r)
            if any(abs(v - float(g[k])) > 1e-12 * max(1, abs(float(g[k]))) for k, v in num.items()):
                failures.append("gram-independence")
    r = standard_basis(p).realization
    worst = 0.0
    for idx in theta_multisets(6):
        num, sym = gaussian_fourier_check(idx, p, r, (1, -1))
        worst = max(worst, abs(num - sym) / max(abs(sym), 1.0))
    if worst > 1e-8:
        failures.append("hermite-quadrature")
    ok = not failures
    report(9, ok, f"failures={sorted(set(failures))}; hermite_g vs quadrature rel err={worst:.1e}")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
