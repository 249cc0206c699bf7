"""Discrete heat equation on the lattice and its Brownian scaling limit."""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.signal import fftconvolve

from .errors import CapacityExceeded, QuadratureFailure
from .kernel import DEFAULT_CAPACITY, EXACT, FLOAT, kernel, kernels, sublattice_of
from .walk import STEPS


@dataclass(frozen=True)
class GridFunction:
    """Function on the lattice ball ``max(|x1|, |x2|) <= radius``, zero outside."""

    values: np.ndarray
    radius: int

    def __post_init__(self):
        size = 2 * self.radius + 1
        if self.values.shape != (size, size):
            raise ValueError(f"values must have shape {(size, size)}")

    @classmethod
    def from_callable(cls, fn, radius, dtype=float):
        r = np.arange(-radius, radius + 1)
        if dtype is object:
            vals = np.empty((r.size, r.size), dtype=object)
            for i, a in enumerate(r):
                for j, b in enumerate(r):
                    vals[i, j] = fn(int(a), int(b))
            return cls(vals, radius)
        x1, x2 = np.meshgrid(r, r, indexing="ij")
        return cls(np.asarray(fn(x1, x2), dtype=float), radius)

    @classmethod
    def delta(cls, radius):
        vals = np.zeros((2 * radius + 1, 2 * radius + 1))
        vals[radius, radius] = 1.0
        return cls(vals, radius)

    def __getitem__(self, x):
        R = self.radius
        if abs(x[0]) > R or abs(x[1]) > R:
            return 0
        return self.values[R + x[0], R + x[1]]

    def support_radius(self):
        """Smallest ball radius containing every nonzero value (-1 if f == 0)."""
        nz = np.argwhere(self.values != 0)
        if nz.size == 0:
            return -1
        return int(np.abs(nz - self.radius).max())


def _padded(values, pad):
    if values.dtype == object:
        out = np.zeros((values.shape[0] + 2 * pad, values.shape[1] + 2 * pad), dtype=object)
    else:
        out = np.zeros((values.shape[0] + 2 * pad, values.shape[1] + 2 * pad))
    out[pad : pad + values.shape[0], pad : pad + values.shape[1]] = values
    return out


def discrete_laplacian(p, f, x):
    """``sum_e p(e) (f(x) - f(x + e))`` at one lattice point."""
    fx = f[x]
    return sum(w * (fx - f[(x[0] + d1, x[1] + d2)]) for (d1, d2), w in zip(STEPS, p.probabilities))


def _weights(p, values):
    if values.dtype == object:
        return list(p.probabilities)
    return [float(w) for w in p.probabilities]


def transition_once(p, f):
    """``L f = f - Delta_d f``; the ball grows by one so nothing is truncated."""
    R = f.radius
    pad = _padded(f.values, 2)
    size = 2 * R + 3
    out = np.zeros((size, size), dtype=f.values.dtype)
    for (d1, d2), w in zip(STEPS, _weights(p, f.values)):
        if w:
            out = out + w * pad[1 + d1 : 1 + d1 + size, 1 + d2 : 1 + d2 + size]
    return GridFunction(out, R + 1)


def transition_iterate(p, f, n):
    """``n`` successive applications of ``I - Delta_d``."""
    for _ in range(n):
        f = transition_once(p, f)
    return f


def transition_apply(p, f, n, capacity=DEFAULT_CAPACITY):
    """``L^n f(x) = sum_y p(n, x, y) f(y)`` through the n-step kernel.

    ``f`` is zero outside its ball, so ``L^n f`` vanishes outside the ball of
    radius ``f.radius + n``; the result is returned on that larger ball and
    carries no truncation error.  Object-dtype (rational) grids use the
    exact kernel.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if f.radius + n > capacity:
        raise CapacityExceeded(f"output radius {f.radius + n} exceeds capacity {capacity}")
    if n == 0:
        return f
    R = f.radius + n
    size = 2 * R + 1
    exact = f.values.dtype == object
    K = kernel(p, n, EXACT if exact else FLOAT, capacity)
    pad = _padded(f.values, 2 * n)
    if not exact:
        # correlation: out[x] = sum_z K[z] f[x + z]
        out = fftconvolve(pad, K.mass[::-1, ::-1], mode="valid")
        return GridFunction(out, R)
    out = np.zeros((size, size), dtype=object)
    for (z1, z2), w in K.items():
        out = out + w * pad[n + z1 : n + z1 + size, n + z2 : n + z2 + size]
    return GridFunction(out, R)


# -- smooth test functions ---------------------------------------------------


class TestFunction:
    """Smooth, (numerically) compactly supported field with analytic Laplacian.

    Subclasses provide ``__call__(z1, z2)``, ``laplacian(z1, z2)``, a
    ``center`` and a ``support_radius`` outside of which the function is
    zero (or below 1e-17 of its sup norm, for the Gaussian).
    """

    __test__ = False  # keep pytest from collecting the class
    center = (0.0, 0.0)
    support_radius = 1.0

    def sup_norm(self):
        c1, c2 = self.center
        s = np.linspace(-self.support_radius, self.support_radius, 801)
        z1, z2 = np.meshgrid(c1 + s, c2 + s, indexing="ij")
        return float(np.abs(self(z1, z2)).max())

    def __add__(self, other):
        return LinearCombination([(1.0, self), (1.0, other)])

    def __mul__(self, scalar):
        return LinearCombination([(float(scalar), self)])

    __rmul__ = __mul__


class GaussianBump(TestFunction):
    def __init__(self, sigma=1.0, center=(0.0, 0.0), amplitude=1.0):
        self.sigma = float(sigma)
        self.center = tuple(map(float, center))
        self.amplitude = float(amplitude)
        # exp(-r^2 / 2 sigma^2) < 1e-18 beyond this radius
        self.support_radius = self.sigma * math.sqrt(2 * 18 * math.log(10))

    def _r2(self, z1, z2):
        return (z1 - self.center[0]) ** 2 + (z2 - self.center[1]) ** 2

    def __call__(self, z1, z2):
        return self.amplitude * np.exp(-self._r2(z1, z2) / (2 * self.sigma**2))

    def laplacian(self, z1, z2):
        s2 = self.sigma**2
        r2 = self._r2(z1, z2)
        return self(z1, z2) * (r2 / s2**2 - 2.0 / s2)

    def sup_norm(self):
        return abs(self.amplitude)


class CompactBump(TestFunction):
    """``exp(1 - 1/(1 - |z - c|^2 / R^2))`` inside the disk, 0 outside."""

    def __init__(self, radius=2.0, center=(0.0, 0.0), amplitude=1.0):
        self.radius = float(radius)
        self.center = tuple(map(float, center))
        self.amplitude = float(amplitude)
        self.support_radius = self.radius

    def _s(self, z1, z2):
        return ((z1 - self.center[0]) ** 2 + (z2 - self.center[1]) ** 2) / self.radius**2

    def _profile(self, s):
        s = np.asarray(s, dtype=float)
        inside = s < 1
        q = np.where(inside, 1.0 / (1.0 - np.where(inside, s, 0.0)), 0.0)
        g = np.where(inside, np.exp(1.0 - q), 0.0)
        return g, q

    def __call__(self, z1, z2):
        g, _ = self._profile(self._s(z1, z2))
        return self.amplitude * g

    def laplacian(self, z1, z2):
        s = self._s(z1, z2)
        g, q = self._profile(s)
        # G(s) = exp(1 - q), q = 1/(1-s):  G' = -q^2 G, G'' = (q^4 - 2 q^3) G
        g1 = -(q**2) * g
        g2 = (q**4 - 2 * q**3) * g
        return self.amplitude * 4.0 / self.radius**2 * (s * g2 + g1)

    def sup_norm(self):
        return abs(self.amplitude)


def _smooth_step(s):
    """h(s)/(h(s)+h(1-s)) with h(s) = exp(-1/s): 0 for s<=0, 1 for s>=1.

    Returns the value and its first two derivatives.
    """
    s = np.asarray(s, dtype=float)

    def h(v):
        pos = v > 0
        safe = np.where(pos, v, 1.0)
        val = np.where(pos, np.exp(-1.0 / safe), 0.0)
        d1 = np.where(pos, val / safe**2, 0.0)
        d2 = np.where(pos, val * (1.0 / safe**4 - 2.0 / safe**3), 0.0)
        return val, d1, d2

    a, a1, a2 = h(s)
    b, b1, b2 = h(1.0 - s)
    b1 = -b1
    d = a + b
    d1 = a1 + b1
    d2 = a2 + b2
    psi = a / d
    num1 = a1 * d - a * d1
    psi1 = num1 / d**2
    psi2 = (a2 * d - a * d2) / d**2 - 2.0 * d1 * num1 / d**3
    return psi, psi1, psi2


class PlateauLinear(TestFunction):
    """``(c0 + g . (z - c)) * chi(|z - c|)``, chi = 1 for r <= inner, 0 for r >= outer.

    Exactly affine on the inner disk, so both the scaled discrete Laplacian
    and the Laplacian vanish there.
    """

    def __init__(self, gradient=(1.0, -0.5), offset=0.3, inner=2.0, outer=4.0, center=(0.0, 0.0)):
        self.gradient = tuple(map(float, gradient))
        self.offset = float(offset)
        self.inner = float(inner)
        self.outer = float(outer)
        self.center = tuple(map(float, center))
        self.support_radius = self.outer

    def _parts(self, z1, z2):
        w1 = np.asarray(z1, dtype=float) - self.center[0]
        w2 = np.asarray(z2, dtype=float) - self.center[1]
        rho = np.hypot(w1, w2)
        width = self.outer - self.inner
        psi, psi1, psi2 = _smooth_step((self.outer - rho) / width)
        chi = psi
        chi1 = -psi1 / width
        chi2 = psi2 / width**2
        lin = self.offset + self.gradient[0] * w1 + self.gradient[1] * w2
        return w1, w2, rho, chi, chi1, chi2, lin

    def __call__(self, z1, z2):
        *_, chi, _, _, lin = self._parts(z1, z2)
        return lin * chi

    def laplacian(self, z1, z2):
        w1, w2, rho, chi, chi1, chi2, lin = self._parts(z1, z2)
        safe = np.where(rho > 0, rho, 1.0)
        lap_chi = np.where(rho > 0, chi2 + chi1 / safe, 0.0)
        grad_dot = np.where(rho > 0, chi1 * (self.gradient[0] * w1 + self.gradient[1] * w2) / safe, 0.0)
        return lin * lap_chi + 2.0 * grad_dot


class LinearCombination(TestFunction):
    def __init__(self, terms):
        self.terms = [(float(a), f) for a, f in terms]
        centers = np.array([f.center for _, f in self.terms])
        self.center = tuple(centers.mean(axis=0))
        self.support_radius = max(
            math.dist(self.center, f.center) + f.support_radius for _, f in self.terms
        )

    def __call__(self, z1, z2):
        return sum(a * f(z1, z2) for a, f in self.terms)

    def laplacian(self, z1, z2):
        return sum(a * f.laplacian(z1, z2) for a, f in self.terms)


# -- heat semigroup ------------------------------------------------------------


def heat_apply(t, f, x, epsabs=1e-11):
    """``H_t f(x) = (2 pi t)^{-1} int exp(-|x - z|^2 / 2t) f(z) dz``.

    Integrates in polar coordinates over the smaller of f's support disk and
    the disk of radius ``9 sqrt(t)`` around x, outside of which the heat
    kernel is below 1e-17 of its peak.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    x = (float(x[0]), float(x[1]))
    kernel_radius = 9.0 * math.sqrt(t)
    if math.dist(x, f.center) > kernel_radius + f.support_radius:
        return 0.0
    if kernel_radius < f.support_radius:
        center, radius = x, kernel_radius
    else:
        center, radius = f.center, f.support_radius
    norm = 1.0 / (2.0 * math.pi * t)

    def integrand(rho, phi):
        z1 = center[0] + rho * math.cos(phi)
        z2 = center[1] + rho * math.sin(phi)
        d2 = (z1 - x[0]) ** 2 + (z2 - x[1]) ** 2
        return norm * math.exp(-d2 / (2.0 * t)) * float(f(z1, z2)) * rho

    val, err = integrate.dblquad(
        integrand, 0.0, 2.0 * math.pi, 0.0, radius, epsabs=epsabs * 1e-2, epsrel=1e-11
    )
    if not np.isfinite(val) or err > epsabs:
        raise QuadratureFailure(f"heat quadrature error estimate {err:.3g}")
    return val


def _lattice_box(r_std, center, radius, delta, margin=2):
    """Lattice coordinate ranges covering the plane disk (center, radius) / delta."""
    Tinv = np.linalg.inv(r_std.realization.T)
    c = Tinv @ np.asarray(center, dtype=float) / delta
    spread = np.linalg.norm(Tinv, axis=1) * radius / delta
    lo = np.floor(c - spread).astype(int) - margin
    hi = np.ceil(c + spread).astype(int) + margin
    return lo, hi


def generator_gap(p, r_std, f, delta, inner=None):
    """``sup_x |(3/delta^2) Delta_d (f o delta)(x) + (1/2) (Laplacian f)(delta x)|``.

    ``f o delta`` is the lattice function ``x -> f(delta * x_hat)`` with
    ``x_hat`` the standard-realization position.  With ``inner`` given the
    supremum is restricted to points with ``|delta x_hat - center| <= inner``.
    """
    lo, hi = _lattice_box(r_std, f.center, f.support_radius, delta)
    a = np.arange(lo[0] - 1, hi[0] + 2)
    b = np.arange(lo[1] - 1, hi[1] + 2)
    x1, x2 = np.meshgrid(a, b, indexing="ij")
    z = delta * r_std.embed(x1, x2)
    F = f(z[..., 0], z[..., 1])
    core = F[1:-1, 1:-1]
    n1, n2 = core.shape
    lap_d = np.zeros_like(core)
    for (d1, d2), w in zip(STEPS, p.probabilities):
        if w:
            lap_d += float(w) * (core - F[1 + d1 : 1 + d1 + n1, 1 + d2 : 1 + d2 + n2])
    zc = z[1:-1, 1:-1]
    gap = np.abs(3.0 / delta**2 * lap_d + 0.5 * f.laplacian(zc[..., 0], zc[..., 1]))
    if inner is not None:
        mask = np.hypot(zc[..., 0] - f.center[0], zc[..., 1] - f.center[1]) <= inner
        gap = gap[mask]
    return float(gap.max())


def nearest_lattice_point(r_std, point, sublattice=None):
    """Lattice coordinates of the realised vertex closest to a plane point.

    With ``sublattice`` in {0, 1, 2} the search is restricted to that coset.
    """
    Tinv = np.linalg.inv(r_std.realization.T)
    target = np.asarray(point, dtype=float)
    base = np.floor(Tinv @ target).astype(int)
    reach = 1 if sublattice is None else 3
    best, best_d = None, np.inf
    for d1 in range(-reach + 1, reach + 1):
        for d2 in range(-reach + 1, reach + 1):
            cand = (int(base[0] + d1), int(base[1] + d2))
            if sublattice is not None and sublattice_of(cand) != sublattice:
                continue
            d = np.linalg.norm(r_std.embed(*cand) - target)
            if d < best_d:
                best, best_d = cand, d
    return best


def _semigroup_value(table, r_std, f, delta, xn):
    x1, x2 = table.coords()
    z = delta * r_std.embed(x1 + xn[0], x2 + xn[1])
    return float(np.sum(table.mass * f(z[..., 0], z[..., 1])))


def semigroup_gaps(p, r_std, f, t, ns, x=(0.0, 0.0)):
    """``{n: |L^n (f o delta_n)(x_n) - H_t f(delta_n x_n)|}`` with ``delta_n = sqrt(3t/n)``.

    ``x_n`` is the lattice point nearest the plane point ``x / delta_n``.  The
    full kernel sum is used, so the one-sided walk needs no sublattice
    bookkeeping.
    """
    tables = kernels(p, ns, FLOAT)
    out = {}
    for n in ns:
        delta = math.sqrt(3.0 * t / n)
        xn = nearest_lattice_point(r_std, np.asarray(x, dtype=float) / delta)
        out[n] = _gap(tables[n], r_std, f, t, delta, xn)
    return out


def _gap(table, r_std, f, t, delta, xn):
    lhs = _semigroup_value(table, r_std, f, delta, xn)
    return abs(lhs - heat_apply(t, f, delta * r_std.embed(*xn)))


def semigroup_gap(p, r_std, f, t, n, x_n=(0, 0)):
    """``|L^n (f o delta_n)(x_n) - H_t f(delta_n x_n)|`` at a lattice point ``x_n``."""
    delta = math.sqrt(3.0 * t / n)
    return _gap(kernel(p, n, FLOAT), r_std, f, t, delta, tuple(x_n))


def semigroup_value(p, r_std, f, t, n, x_n=(0, 0)):
    """``L^n (f o delta_n)(x_n)`` on its own."""
    delta = math.sqrt(3.0 * t / n)
    return _semigroup_value(kernel(p, n, FLOAT), r_std, f, delta, tuple(x_n))
