"""n-step transition probabilities: dynamic programming and Fourier inversion.

Tables are dense square arrays in lattice coordinates centred on the
origin; ``table.mass[R + x1, R + x2]`` holds the probability of ``(x1, x2)``.
Exact tables store integer numerators over a common denominator ``D**n``.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import NamedTuple

import numpy as np

from .errors import CapacityExceeded, NotPeriodic
from .walk import STEPS, char_fn_integer

EXACT = "exact"
FLOAT = "float"
DEFAULT_CAPACITY = 4096


class LatticePoint(NamedTuple):
    x1: int
    x2: int

    @property
    def x3(self):
        return self.x2 - self.x1


def step_support(p, r=None):
    """The six ``(step, probability)`` pairs, zero-probability steps included.

    Steps are plane vectors when a realization is given, lattice
    coordinates otherwise.
    """
    vectors = r.steps() if r is not None else STEPS
    return list(zip(vectors, p.probabilities))


def _common_denominator(p):
    return reduce(math.lcm, (w.denominator for w in p.probabilities), 1)


@dataclass(frozen=True)
class KernelTable:
    n: int
    mode: str
    radius: int
    mass: np.ndarray
    denominator: int = 1

    @classmethod
    def delta(cls, mode=FLOAT):
        """Point mass at the origin (n = 0)."""
        if mode == EXACT:
            arr = np.empty((1, 1), dtype=object)
            arr[0, 0] = 1
            return cls(0, EXACT, 0, arr, 1)
        if mode != FLOAT:
            raise ValueError(f"mode must be {EXACT!r} or {FLOAT!r}")
        return cls(0, FLOAT, 0, np.ones((1, 1)))

    def __getitem__(self, y):
        x1, x2 = y
        R = self.radius
        if abs(x1) > R or abs(x2) > R:
            return Fraction(0) if self.mode == EXACT else 0.0
        v = self.mass[R + x1, R + x2]
        if self.mode == EXACT:
            return Fraction(v, self.denominator)
        return float(v)

    def total_mass(self):
        if self.mode == EXACT:
            return Fraction(sum(self.mass.flat), self.denominator)
        return math.fsum(self.mass.flat)

    def as_float(self):
        """Probabilities as a float array (exact tables are divided out)."""
        if self.mode == EXACT:
            return np.array(
                [[Fraction(v, self.denominator) for v in row] for row in self.mass],
                dtype=float,
            )
        return self.mass

    def coords(self):
        """Lattice coordinate grids matching ``mass``."""
        r = np.arange(-self.radius, self.radius + 1)
        return np.meshgrid(r, r, indexing="ij")

    def items(self, nonzero=True):
        """Yield ``((x1, x2), probability)`` in lexicographic order."""
        R = self.radius
        for i in range(2 * R + 1):
            for j in range(2 * R + 1):
                v = self.mass[i, j]
                if nonzero and v == 0:
                    continue
                yield (i - R, j - R), (
                    Fraction(v, self.denominator) if self.mode == EXACT else float(v)
                )


def evolve(table, p, steps, capacity=DEFAULT_CAPACITY):
    """Convolve ``table`` with the one-step law ``steps`` times."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if table.radius + steps > capacity:
        raise CapacityExceeded(
            f"support radius {table.radius + steps} exceeds capacity {capacity}"
        )
    mass = table.mass
    R = table.radius
    denom = table.denominator
    if table.mode == EXACT:
        D = _common_denominator(p)
        weights = [int(w * D) for w in p.probabilities]
    else:
        D = 1
        weights = [float(w) for w in p.probabilities]
    moves = [(s, w) for s, w in zip(STEPS, weights) if w]
    for _ in range(steps):
        size = 2 * R + 3
        if table.mode == EXACT:
            new = np.zeros((size, size), dtype=object)
        else:
            new = np.zeros((size, size))
        for (d1, d2), w in moves:
            new[1 + d1 : size - 1 + d1, 1 + d2 : size - 1 + d2] += w * mass
        mass = new
        R += 1
        denom *= D
    return KernelTable(table.n + steps, table.mode, R, mass, denom)


def kernel(p, n, mode=FLOAT, capacity=DEFAULT_CAPACITY):
    """n-step law from the origin."""
    return evolve(KernelTable.delta(mode), p, n, capacity)


def kernels(p, ns, mode=FLOAT, capacity=DEFAULT_CAPACITY):
    """Tables for increasing step counts, reusing each one for the next."""
    out = {}
    table = KernelTable.delta(mode)
    for n in sorted(set(ns)):
        table = evolve(table, p, n - table.n, capacity)
        out[n] = table
    return out


def p_n(p, n, y, mode=EXACT, capacity=DEFAULT_CAPACITY):
    """``p(n, 0, y)``; by translation invariance ``p(n, x, y) = p_n(y - x)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return kernel(p, n, mode, capacity)[tuple(y)]


def _nodes(M):
    return -np.pi + 2.0 * np.pi * np.arange(M) / M


def fourier_p_n(p, n, y):
    """``p(n, 0, y)`` by the tensor trapezoid rule on [-pi, pi]^2.

    The integrand is a trigonometric polynomial of degree at most
    ``n + |y1| + |y2|`` per axis, so ``M = 2(n + |y|_1) + 4`` nodes per axis
    integrate it exactly up to rounding.
    """
    if n < 1:
        raise ValueError("n must be positive")
    y1, y2 = y
    M = 2 * (n + abs(y1) + abs(y2)) + 4
    t = _nodes(M)
    th1, th2 = np.meshgrid(t, t, indexing="ij")
    phi = char_fn_integer(p, np.stack([th1, th2], axis=-1))
    integrand = phi**n * np.exp(-1j * (y1 * th1 + y2 * th2))
    return float(integrand.real.sum() / M**2)


def fourier_kernel(p, n):
    """Whole n-step table by FFT of ``phi**n`` sampled on ``M >= 2n + 1`` nodes."""
    M = 2 * n + 2
    t = 2.0 * np.pi * np.arange(M) / M
    th1, th2 = np.meshgrid(t, t, indexing="ij")
    phi_n = char_fn_integer(p, np.stack([th1, th2], axis=-1)) ** n
    # fft2 carries exp(-2 pi i k y / M), matching exp(-i <y, theta>)
    full = np.fft.fft2(phi_n).real / M**2
    idx = np.arange(-n, n + 1) % M
    mass = full[np.ix_(idx, idx)]
    return KernelTable(n, FLOAT, n, mass)


def sublattice_of(y):
    """Index k in {0, 1, 2} of the coset ``V_k`` containing ``y``.

    ``V_0`` is spanned by ``2e1 - e2`` and ``e1 + e2``, and ``V_k = V_0 + k e1``,
    which gives ``k = (y1 - y2) mod 3``.
    """
    y1, y2 = y
    return (y1 - y2) % 3


def period_check(p, n, x, y):
    """True iff ``n = l - k (mod 3)`` for ``x`` in ``V_k``, ``y`` in ``V_l``."""
    if not p.is_periodic:
        raise NotPeriodic("the congruence only applies to the kappa = 1/3 walk")
    k = sublattice_of(x)
    l = sublattice_of(y)
    return (n - (l - k)) % 3 == 0


def chapman_kolmogorov(tm, tn, y):
    """``sum_z p_m(z) p_n(y - z)`` evaluated from two tables."""
    total = 0
    for z, pz in tm.items():
        total += pz * tn[(y[0] - z[0], y[1] - z[1])]
    return total
