"""Edgeworth expansion of the n-step kernel and its leading correction.

Polynomials in the angular variable use ``u_i = <e_i, theta>`` (i = 1, 2, 3)
and are kept in multiset form, one exponent per ``u_i``, until they are
pushed through the Gaussian integral by :func:`hermite_g`.  Only the real
parts are stored: a monomial of degree ``k`` in ``b_j`` carries an implicit
factor ``i**k``.

Spatial polynomials (``G`` and ``P_j``) are in lattice coordinates
``x = x1 e1 + x2 e2``; with the exact Gram table they have rational
coefficients and do not depend on the realization.
"""

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np
from scipy import integrate

from .errors import InsufficientGrid, PeriodicityViolated, QuadratureFailure
from .kernel import DEFAULT_CAPACITY, FLOAT, kernels, period_check
from .polynomial import Poly
from .realization import standard_basis
from .walk import THETA_NAMES, CovarianceData, cumulant_polys, gram_table

X_NAMES = ("x1", "x2")
_PAIRS = ((1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (3, 3))


def _gram_of(source):
    if isinstance(source, CovarianceData):
        return source.gram
    if isinstance(source, dict):
        return source
    return gram_table(source)


def _gram_key(gram):
    return tuple(gram[pair] for pair in _PAIRS)


def _unkey(key):
    gram = dict(zip(_PAIRS, key))
    for (i, j), v in list(gram.items()):
        gram[(j, i)] = v
    return gram


def q_inv_form(gram, i):
    """``<Q^{-1} e_i, x>`` as a linear polynomial in (x1, x2)."""
    return Poly.linear((gram[(i, 1)], gram[(i, 2)]), X_NAMES)


def _partial(poly, i):
    if i == 1:
        return poly.diff(0)
    if i == 2:
        return poly.diff(1)
    return poly.diff(1) - poly.diff(0)


@lru_cache(maxsize=4096)
def _hermite_cached(indices, key):
    gram = _unkey(key)
    if len(indices) == 1:
        return -q_inv_form(gram, indices[0])
    prev = _hermite_cached(indices[:-1], key)
    last = indices[-1]
    return -q_inv_form(gram, last) * prev + _partial(prev, last)


def hermite_g(indices, cov):
    """Polynomial ``G(i_1, ..., i_N)(x)`` from the Gaussian-Fourier recursion.

    ``cov`` may be a :class:`CovarianceData`, a Gram dict or a step
    distribution (exact Gram table).  ``G`` is symmetric in its indices, so
    results are cached on the sorted index tuple.
    """
    indices = tuple(sorted(int(i) for i in indices))
    if not indices:
        return Poly.constant(2, 1, X_NAMES)
    if any(i not in (1, 2, 3) for i in indices):
        raise ValueError("indices must be drawn from {1, 2, 3}")
    return _hermite_cached(indices, _gram_key(_gram_of(cov)))


def _multiset(exps):
    """Exponent triple (a, b, c) -> index tuple (1,)*a + (2,)*b + (3,)*c."""
    return (1,) * exps[0] + (2,) * exps[1] + (3,) * exps[2]


def gaussian_fourier_check(indices, p, r, x, tol=1e-8):
    """Numerically integrate ``F(i_1..i_N)(x)`` and return ``(numeric, symbolic)``.

    ``x`` is a lattice-coordinate pair; the integral runs over the plane
    after whitening ``theta = C w`` with ``C^t Q C = I``.
    """
    from .walk import covariance

    cov = covariance(p, r)
    Q = cov.Q
    L = np.linalg.cholesky(Q)
    C = np.linalg.inv(L).T
    det_c = abs(np.linalg.det(C))
    xv = r.embed(*x)
    vecs = [np.asarray(e, dtype=float) for e in r.basis]
    N = len(indices)
    rows = np.array([C.T @ vecs[i - 1] for i in indices]).reshape(N, 2)
    xw = C.T @ xv
    # exp(-i s) = cos s - i sin s: F / i^N is real and equals
    # (-1)^(N//2) * int(poly cos)  for even N, (-1)^(N//2) * int(-poly sin) for odd N
    part = math.cos if N % 2 == 0 else (lambda s: -math.sin(s))

    def integrand(w2, w1):
        prod = 1.0
        for a, b in rows:
            prod *= a * w1 + b * w2
        return prod * math.exp(-0.5 * (w1 * w1 + w2 * w2)) * part(xw[0] * w1 + xw[1] * w2)

    W = 13.0
    with warnings.catch_warnings():
        # the error estimate is checked below
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.dblquad(integrand, -W, W, -W, W, epsabs=1e-13, epsrel=1e-12)
    numeric = (-1) ** (N // 2) * det_c * val
    err *= det_c
    g = hermite_g(indices, cov).to_float()
    xq = float(xv @ cov.Q_inv @ xv)
    base = 2 * math.pi * cov.det_Q**-0.5 * math.exp(-0.5 * xq)
    symbolic = base * float(g(*x)) if indices else base
    scale = max(abs(symbolic), base)
    if err > tol * scale:
        raise QuadratureFailure(f"dblquad error estimate {err:.3g} too large")
    return numeric, symbolic


def edgeworth_b(p, N, r=None):
    """Edgeworth coefficients ``[b_0, ..., b_N]`` (real parts, multiset form).

    ``b_j`` is the coefficient of ``s**j`` in
    ``exp(sum_{q=3}^{N+2} chi_q s**(q-2) / q!)`` with each degree-k monomial
    standing for ``i**k`` times itself.  ``r`` is accepted for signature
    symmetry; the u-variable form does not depend on it.
    """
    if N < 0:
        raise ValueError("order must be non-negative")
    one = Poly.constant(3, Fraction(1), THETA_NAMES)
    if N == 0:
        return [one]
    chi = cumulant_polys(p, N + 2)
    # exponent series a_1 s + a_2 s^2 + ... with a_m = chi_{m+2}/(m+2)!
    a = [None] + [chi[m + 1] / math.factorial(m + 2) for m in range(1, N + 1)]
    # power series exp(A) = sum_k A^k / k!, truncated at s^N
    zero = Poly(3, {}, THETA_NAMES)
    result = [one] + [zero] * N
    power = [one] + [zero] * N  # coefficients of A^k
    for k in range(1, N + 1):
        new = [zero] * (N + 1)
        for i, c in enumerate(power):
            if not c.terms:
                continue
            for m in range(1, N + 1 - i):
                new[i + m] = new[i + m] + c * a[m]
        power = new
        fact = math.factorial(k)
        for j in range(N + 1):
            if power[j].terms:
                result[j] = result[j] + power[j] / fact
    return result


def canonical_theta(poly):
    """Eliminate ``u3 = u2 - u1``: returns a polynomial in (u1, u2)."""
    u1 = Poly.variable(2, 0, THETA_NAMES[:2])
    u2 = Poly.variable(2, 1, THETA_NAMES[:2])
    return poly.compose([u1, u2, u2 - u1])


def eval_b(poly, r, theta):
    """Complex value of a stored ``b_j`` at ``theta`` under realization ``r``."""
    u = [float(np.dot(e, theta)) for e in r.basis]
    total = 0j
    for exps, c in poly.terms.items():
        k = sum(exps)
        total += (1j**k) * float(c) * u[0] ** exps[0] * u[1] ** exps[1] * u[2] ** exps[2]
    return total


def correction_components(p, j, b=None, gram=None):
    """``{k: P_j^{(k)}}``: contribution of the degree-k part of ``b_j``.

    A monomial ``c u^m`` of degree k in ``b_j`` contributes
    ``i^k * i^k * c * G(m) = (-1)^k c G(m)``.
    """
    if b is None:
        b = edgeworth_b(p, j)[j]
    gram = gram if gram is not None else gram_table(p)
    parts = {}
    for exps, c in b.terms.items():
        k = sum(exps)
        term = hermite_g(_multiset(exps), gram) * ((-1) ** k * c)
        parts[k] = parts[k] + term if k in parts else term
    return parts


def correction_polynomials(p, N, r=None):
    """``[P_1, ..., P_N]`` as exact polynomials in lattice coordinates."""
    if N < 1:
        raise ValueError("order must be at least 1")
    b = edgeworth_b(p, N)
    gram = gram_table(p)
    out = []
    for j in range(1, N + 1):
        parts = correction_components(p, j, b[j], gram)
        total = Poly(2, {}, X_NAMES)
        for k in sorted(parts):
            total = total + parts[k]
        out.append(total)
    return out


@dataclass(frozen=True)
class ExpansionSeries:
    N: int
    b: list
    P: list

    def b_canonical(self, j):
        return canonical_theta(self.b[j])


def expand(p, N):
    return ExpansionSeries(N=N, b=edgeworth_b(p, N), P=correction_polynomials(p, N))


# -- leading coefficient ---------------------------------------------------

STANDARD = "standard"
GRAM = "gram"


def a1_coefficients(p, basis=STANDARD):
    """``(a1_0, (c1, c2), a1_2)`` with ``a1(y) = a1_0 + kappa (c1 y1 + c2 y2) + kappa^2 a1_2``."""
    if basis == STANDARD:
        a, b, c = p.hats
        g = p.gamma_fun
        a0 = -1 + (a * (b + c) ** 2 + b * (c + a) ** 2 + c * (a + b) ** 2) / (8 * g**2)
        c1 = (a * b - 2 * b * c + c * a) / (2 * g**2)
        c2 = (-a * b - b * c + 2 * c * a) / (2 * g**2)
        a2 = Fraction(3) / (8 * g**2) * (-1 + 5 * a * b * c / g)
        return a0, (c1, c2), a2
    if basis == GRAM:
        g = gram_table(p)
        ah, bh, ch = p.hats
        a0 = -1 + Fraction(1, 8) * (ah * g[1, 1] ** 2 + bh * g[2, 2] ** 2 + ch * g[3, 3] ** 2)
        # a1^(1)(y) = 1/2 (g12 L3 + g23 L1 + g31 L2), L_i = g_i1 y1 + g_i2 y2
        lin = [
            Fraction(1, 2) * (g[1, 2] * g[3, k] + g[2, 3] * g[1, k] + g[3, 1] * g[2, k])
            for k in (1, 2)
        ]
        a2 = (
            -Fraction(5, 24) * (g[1, 1] ** 3 + g[2, 2] ** 3 + g[3, 3] ** 3)
            + Fraction(1, 6) * (g[1, 2] ** 3 + g[2, 3] ** 3 - g[3, 1] ** 3)
            + Fraction(1, 4)
            * (
                g[1, 1] * g[1, 2] * g[2, 2]
                + g[2, 2] * g[2, 3] * g[3, 3]
                - g[3, 3] * g[3, 1] * g[1, 1]
            )
        )
        return a0, tuple(lin), a2
    raise ValueError(f"basis must be {STANDARD!r} or {GRAM!r}")


def a1_closed_form(p, y1, y2, basis=STANDARD):
    """Leading ``1/n`` coefficient ``a1(y; kappa)``; exact for rational input."""
    a0, (c1, c2), a2 = a1_coefficients(p, basis)
    k = p.kappa
    return a0 + k * (c1 * y1 + c2 * y2) + k * k * a2


def a1_from_polynomials(P, y1, y2):
    """``1/n`` coefficient of ``sum_j n^{-j/2} P_j(y / sqrt(n))`` at fixed y."""
    lin = P[0].homogeneous(1)
    return lin(y1, y2) + P[1].coefficient((0, 0))


def gram_identity(p):
    """Weighted Gram combination that the P_2 constant term reduces through; equals 8."""
    g = gram_table(p)
    a, b, c = p.hats
    return (
        3 * (a**2 * g[1, 1] ** 2 + b**2 * g[2, 2] ** 2 + c**2 * g[3, 3] ** 2)
        + 2 * a * b * (g[1, 1] * g[2, 2] + 2 * g[1, 2] ** 2)
        + 2 * c * a * (g[1, 1] * g[3, 3] + 2 * g[1, 3] ** 2)
        + 2 * b * c * (g[2, 2] * g[3, 3] + 2 * g[2, 3] ** 2)
    )


def p1_reference(p):
    """First correction written out from the Gram table (cubic + linear part)."""
    g = gram_table(p)
    L = {i: q_inv_form(g, i) for i in (1, 2, 3)}
    k = p.kappa
    cubic = (L[1] ** 3 - L[2] ** 3 + L[3] ** 3) * (k / 6)
    linear = (L[3] * g[1, 2] + L[1] * g[2, 3] + L[2] * g[3, 1]) * (k / 2)
    return cubic + linear


def p2_constant_references(p):
    """Constant terms of the degree-4 and degree-6 parts of ``P_2``."""
    a0, _, a2 = a1_coefficients(p, GRAM)
    return a0, p.kappa**2 * a2


# -- asymptotic kernel and numeric extraction --------------------------------


def lattice_prefactor(p):
    """``c * A(G)`` with c = 3 (aperiodic) or 9 (kappa = 1/3)."""
    return (9 if p.is_periodic else 3) * standard_basis(p).A_G


def quad_form(p, d1, d2):
    """``<Q^{-1} d, d>``; equals ``3 |d|^2`` in the standard realization."""
    g = gram_table(p)
    return float(g[1, 1]) * d1 * d1 + 2 * float(g[1, 2]) * d1 * d2 + float(g[2, 2]) * d2 * d2


def asymptotic_p(p, n, x, y, N, r_std=None, P=None):
    """Truncated expansion of ``p(n, x, y)`` with ``N`` correction terms."""
    if n < 1:
        raise ValueError("n must be positive")
    if p.is_periodic and not period_check(p, n, x, y):
        raise PeriodicityViolated(f"p({n}, {x}, {y}) vanishes identically")
    r_std = r_std or standard_basis(p)
    d1 = y[0] - x[0]
    d2 = y[1] - x[1]
    dv = r_std.embed(d1, d2)
    dist2 = float(dv @ dv)
    if P is None and N > 0:
        P = correction_polynomials(p, N)
    series = 1.0
    s = n**-0.5
    for j in range(1, N + 1):
        series += s**j * float(P[j - 1].to_float()(d1 * s, d2 * s))
    c = 9 if p.is_periodic else 3
    return c * r_std.A_G / (2 * math.pi * n) * math.exp(-1.5 * dist2 / n) * series


def a1_residuals(p, y, n_grid, x=(0, 0), mode=FLOAT, capacity=DEFAULT_CAPACITY):
    """``r(n) = n (2 pi n p_n / (c A(G) exp(-3 |y-x|^2 / 2n)) - 1)`` from the DP kernel."""
    d = (y[0] - x[0], y[1] - x[1])
    if p.is_periodic:
        bad = [n for n in n_grid if not period_check(p, n, x, y)]
        if bad:
            raise PeriodicityViolated(f"grid points {bad} are off the congruence class")
    pref = lattice_prefactor(p)
    r_std = standard_basis(p)
    dv = r_std.embed(*d)
    dist2 = float(dv @ dv)
    tables = kernels(p, n_grid, mode, capacity)
    out = []
    for n in n_grid:
        ratio = 2 * math.pi * n * float(tables[n][d]) / (pref * math.exp(-1.5 * dist2 / n))
        out.append(n * (ratio - 1.0))
    return out


def richardson_limit(h, values):
    """Value at ``h = 0`` of the interpolating polynomial (Neville)."""
    h = [float(v) for v in h]
    t = [float(v) for v in values]
    m = len(t)
    for level in range(1, m):
        t = [
            (h[i + level] * t[i] - h[i] * t[i + 1]) / (h[i + level] - h[i])
            for i in range(m - level)
        ]
    return t[0]


def extract_a1_numeric(p, y, n_grid, x=(0, 0), power=1.0, mode=FLOAT):
    """Estimate ``a1(y - x)`` from the exact kernel by Richardson extrapolation.

    Extrapolates in ``h = n**-power``.  At fixed y every half-integer power
    of ``1/n`` cancels by the parity of ``P_j``, so ``power=1`` is the
    natural choice; ``power=0.5`` is the conservative variant.
    """
    n_grid = sorted(n_grid)
    if len(n_grid) < 3:
        raise InsufficientGrid("need at least three step counts")
    res = a1_residuals(p, y, n_grid, x, mode)
    return richardson_limit([n**-power for n in n_grid], res)


def theta_multisets(max_len):
    """All index multisets over {1, 2, 3} of length 1..max_len."""
    for n in range(1, max_len + 1):
        yield from combinations_with_replacement((1, 2, 3), n)
