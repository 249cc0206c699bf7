"""Step distributions on the triangular lattice and their moment data.

The lattice is ``Z^2`` with the six steps ``±e1, ±e2, ±e3`` where
``e3 = e2 - e1``.  Step probabilities are attached as

    +e1 -> alpha,  -e1 -> alpha',
    +e2 -> beta',  -e2 -> beta,
    +e3 -> gamma,  -e3 -> gamma'

Note the primes on the ``e2`` pair: with this assignment the zero-drift
condition reads ``alpha - alpha' = beta - beta' = gamma - gamma' = kappa``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .errors import (
    DegenerateCovariance,
    DriftNotZero,
    MassNotOne,
    NegativeProbability,
    TrilatticeError,
)
from .polynomial import Poly

# lattice-coordinate steps, in the order of StepDistribution.probabilities
STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1))
PARAM_NAMES = ("alpha", "alpha_p", "beta", "beta_p", "gamma", "gamma_p")


def as_fraction(value):
    """Parse ``"p/q"`` strings, ints, Fractions or decimal floats exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


@dataclass(frozen=True)
class StepDistribution:
    """Validated one-step law; construct through :func:`validate`."""

    alpha: Fraction
    alpha_p: Fraction
    beta: Fraction
    beta_p: Fraction
    gamma: Fraction
    gamma_p: Fraction

    def __post_init__(self):
        for name in PARAM_NAMES:
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        for name in PARAM_NAMES:
            if getattr(self, name) < 0:
                raise NegativeProbability(f"{name} = {getattr(self, name)} < 0")
        total = sum(getattr(self, name) for name in PARAM_NAMES)
        if total != 1:
            raise MassNotOne(f"probabilities sum to {total}, not 1")
        da = self.alpha - self.alpha_p
        db = self.beta - self.beta_p
        dg = self.gamma - self.gamma_p
        if not da == db == dg:
            raise DriftNotZero(
                f"alpha-alpha'={da}, beta-beta'={db}, gamma-gamma'={dg} differ"
            )
        # kappa <= 1/3 follows from mass one, kappa >= 0 must be checked
        if da < 0:
            raise DriftNotZero(f"kappa = {da} is negative")
        if self.gamma_fun <= 0:
            raise DegenerateCovariance("Gamma(p) = 0: the walk lives on a line")

    @property
    def kappa(self):
        return self.alpha - self.alpha_p

    @property
    def alpha_hat(self):
        return self.alpha + self.alpha_p

    @property
    def beta_hat(self):
        return self.beta + self.beta_p

    @property
    def gamma_hat(self):
        return self.gamma + self.gamma_p

    @property
    def hats(self):
        return self.alpha_hat, self.beta_hat, self.gamma_hat

    @property
    def gamma_fun(self):
        a, b, c = self.hats
        return a * b + b * c + c * a

    @property
    def probabilities(self):
        """Probabilities in :data:`STEPS` order."""
        return (self.alpha, self.alpha_p, self.beta_p, self.beta, self.gamma, self.gamma_p)

    @property
    def is_symmetric(self):
        return self.kappa == 0

    @property
    def is_periodic(self):
        return self.kappa == Fraction(1, 3)

    def as_strings(self):
        return {name: str(getattr(self, name)) for name in PARAM_NAMES}


def validate(alpha, alpha_p, beta, beta_p, gamma, gamma_p):
    """Check the walk conditions and return a :class:`StepDistribution`.

    Raises NegativeProbability, MassNotOne, DriftNotZero or
    DegenerateCovariance.
    """
    return StepDistribution(alpha, alpha_p, beta, beta_p, gamma, gamma_p)


@dataclass(frozen=True)
class Realization:
    """Embedding of the lattice in the plane through basis vectors e1, e2."""

    e1: tuple
    e2: tuple

    def __post_init__(self):
        e1 = tuple(self.e1)
        e2 = tuple(self.e2)
        if len(e1) != 2 or len(e2) != 2:
            raise ValueError("basis vectors must be planar")
        object.__setattr__(self, "e1", e1)
        object.__setattr__(self, "e2", e2)
        if e1[0] * e2[1] - e1[1] * e2[0] == 0:
            raise ValueError("e1 and e2 are linearly dependent")

    @classmethod
    def integer(cls):
        return cls((1, 0), (0, 1))

    @property
    def e3(self):
        return (self.e2[0] - self.e1[0], self.e2[1] - self.e1[1])

    @property
    def basis(self):
        return self.e1, self.e2, self.e3

    @property
    def T(self):
        return np.array([[self.e1[0], self.e2[0]], [self.e1[1], self.e2[1]]], dtype=float)

    @property
    def det(self):
        return self.e1[0] * self.e2[1] - self.e1[1] * self.e2[0]

    @property
    def K(self):
        return float(np.hypot(*map(float, self.e1)) + np.hypot(*map(float, self.e2)))

    def embed(self, x1, x2):
        """Plane position of the lattice point ``x1*e1 + x2*e2`` (vectorised)."""
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        e1 = np.asarray(self.e1, dtype=float)
        e2 = np.asarray(self.e2, dtype=float)
        return x1[..., None] * e1 + x2[..., None] * e2

    def steps(self):
        """The six step vectors in :data:`STEPS` order."""
        e1, e2, e3 = self.basis
        neg = lambda v: (-v[0], -v[1])  # noqa: E731
        return (e1, neg(e1), e2, neg(e2), e3, neg(e3))


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def projections(r, theta):
    """``(<e1,theta>, <e2,theta>, <e3,theta>)``."""
    return tuple(_dot(e, theta) for e in r.basis)


def moment(p, r, q, theta):
    """q-th moment ``M_q(theta)`` from the closed form (odd: kappa, even: hats)."""
    if q < 1:
        raise ValueError("q must be a positive integer")
    u1, u2, u3 = projections(r, theta)
    if q % 2:
        return p.kappa * (u1**q - u2**q + u3**q)
    return p.alpha_hat * u1**q + p.beta_hat * u2**q + p.gamma_hat * u3**q


def moment_edge_sum(p, r, q, theta):
    """Brute-force ``sum_e p(e) <e, theta>^q`` over the six edges."""
    return sum(w * _dot(e, theta) ** q for e, w in zip(r.steps(), p.probabilities))


def cumulant(p, r, q, theta):
    """q-th cumulant ``chi_q(theta)`` by the moment-cumulant recursion."""
    if q < 1:
        raise ValueError("q must be a positive integer")
    m = [None] + [moment(p, r, k, theta) for k in range(1, q + 1)]
    chi = [None]
    for k in range(1, q + 1):
        chi.append(m[k] - sum(comb(k - 1, j - 1) * chi[j] * m[k - j] for j in range(1, k)))
    return chi[q]


THETA_NAMES = ("u1", "u2", "u3")


def moment_poly(p, q):
    """``M_q`` as a polynomial in ``u_i = <e_i, theta>`` (u3 kept separate)."""
    u = [Poly.variable(3, i, THETA_NAMES) for i in range(3)]
    if q % 2:
        return p.kappa * (u[0] ** q - u[1] ** q + u[2] ** q)
    return p.alpha_hat * u[0] ** q + p.beta_hat * u[1] ** q + p.gamma_hat * u[2] ** q


def cumulant_polys(p, qmax):
    """``[chi_1, ..., chi_qmax]`` as exact polynomials in (u1, u2, u3)."""
    m = [None] + [moment_poly(p, k) for k in range(1, qmax + 1)]
    chi = [None]
    for k in range(1, qmax + 1):
        acc = m[k]
        for j in range(1, k):
            acc = acc - comb(k - 1, j - 1) * chi[j] * m[k - j]
        chi.append(acc)
    return chi[1:]


def char_fn(p, r, theta):
    """``phi(theta) = sum_e p(e) exp(i <e, theta>)``; theta may be (..., 2)."""
    theta = np.asarray(theta, dtype=float)
    out = np.zeros(theta.shape[:-1], dtype=complex)
    for e, w in zip(r.steps(), p.probabilities):
        if w:
            out += float(w) * np.exp(1j * (theta @ np.asarray(e, dtype=float)))
    return out


def char_fn_integer(p, theta):
    """Three-term sin-cos form of phi in the integer basis."""
    theta = np.asarray(theta, dtype=float)
    t1 = theta[..., 0]
    t2 = theta[..., 1]
    k = float(p.kappa)
    a, b, c = (float(h) for h in p.hats)
    return (
        a * np.cos(t1) + 1j * k * np.sin(t1)
        + b * np.cos(-t2) + 1j * k * np.sin(-t2)
        + c * np.cos(t2 - t1) + 1j * k * np.sin(t2 - t1)
    )


def char_fn_pullback(p, r, theta):
    """``phi_int(T^t theta)``; equals :func:`char_fn` for every realization."""
    theta = np.asarray(theta, dtype=float)
    return char_fn_integer(p, theta @ r.T)


def max_modulus_off_origin(p, grid=401):
    """Largest ``|phi|`` on a grid of [-pi, pi]^2 with the origin removed."""
    t = np.linspace(-np.pi, np.pi, grid)
    th = np.stack(np.meshgrid(t, t, indexing="ij"), axis=-1)
    mod = np.abs(char_fn_integer(p, th))
    mask = np.hypot(th[..., 0], th[..., 1]) > 1e-12
    return float(mod[mask].max())


def unimodular_points(p, grid=361, tol=1e-12):
    """Grid points of [-pi, pi)^2 where ``|phi| = 1`` up to ``tol``."""
    t = -np.pi + 2 * np.pi * np.arange(grid) / grid
    th = np.stack(np.meshgrid(t, t, indexing="ij"), axis=-1)
    mod = np.abs(char_fn_integer(p, th))
    return th[np.abs(mod - 1) <= tol]


def period(p):
    """Period d(p): 1 for kappa < 1/3, 3 for the one-sided walk."""
    return 3 if p.is_periodic else 1


def gram_table(p):
    """Exact ``<Q^{-1} e_i, e_j>`` for i, j in {1, 2, 3}.

    These inner products do not depend on the realization.
    """
    a, b, c = p.hats
    g = p.gamma_fun
    table = {
        (1, 1): (b + c) / g,
        (2, 2): (c + a) / g,
        (3, 3): (a + b) / g,
        (1, 2): c / g,
        (2, 3): a / g,
        (3, 1): -b / g,
    }
    for (i, j), v in list(table.items()):
        table[(j, i)] = v
    return table


@dataclass(frozen=True)
class CovarianceData:
    Q: np.ndarray
    Q_hat: tuple
    Q_inv: np.ndarray
    gram: dict = field(repr=False)

    @property
    def Q_hat_array(self):
        return np.array(self.Q_hat, dtype=float)

    @property
    def det_Q(self):
        return float(np.linalg.det(self.Q))

    def gram_matrix(self):
        return [[self.gram[(i, j)] for j in (1, 2, 3)] for i in (1, 2, 3)]


def q_hat(p):
    a, b, c = p.hats
    return ((a + c, -c), (-c, b + c))


def covariance(p, r):
    """Covariance data of ``p`` realised through ``r``."""
    m2 = lambda th: float(moment(p, r, 2, th))  # noqa: E731
    q11 = m2((1.0, 0.0))
    q22 = m2((0.0, 1.0))
    q12 = 0.5 * (m2((1.0, 1.0)) - q11 - q22)
    Q = np.array([[q11, q12], [q12, q22]])
    if np.any(np.linalg.eigvalsh(Q) <= 0):
        raise DegenerateCovariance("covariance matrix is not positive definite")
    qh = q_hat(p)
    T = r.T
    decomposed = T @ np.array(qh, dtype=float) @ T.T
    scale = np.abs(Q).max()
    if np.abs(decomposed - Q).max() > 1e-14 * scale * 8:
        raise TrilatticeError("Q != T Q_hat T^t beyond rounding")
    return CovarianceData(Q=Q, Q_hat=qh, Q_inv=np.linalg.inv(Q), gram=gram_table(p))


def gram_numeric(cov, r):
    """``<Q^{-1} e_i, e_j>`` evaluated from the realised covariance."""
    vecs = [np.asarray(e, dtype=float) for e in r.basis]
    return {
        (i + 1, j + 1): float(vecs[i] @ cov.Q_inv @ vecs[j])
        for i in range(3)
        for j in range(3)
    }
