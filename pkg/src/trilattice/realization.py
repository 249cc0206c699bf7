"""Standard realization: the embedding that makes the covariance isotropic."""

from dataclasses import dataclass
from math import sqrt

import numpy as np
from scipy.optimize import minimize, root

from .errors import DomainError, NonConvergence
from .walk import Realization


@dataclass(frozen=True)
class StandardBasis:
    A_G: float
    l: float
    h1: tuple
    h2: tuple

    @property
    def h3(self):
        return (self.h2[0] - self.h1[0], self.h2[1] - self.h1[1])

    @property
    def area(self):
        return abs(self.h1[0] * self.h2[1] - self.h1[1] * self.h2[0])

    @property
    def realization(self):
        return Realization(self.h1, self.h2)

    def embed(self, x1, x2):
        return self.realization.embed(x1, x2)

    def to_dict(self):
        return {
            "A_G": self.A_G,
            "l": self.l,
            "h1": list(self.h1),
            "h2": list(self.h2),
            "h3": list(self.h3),
        }


def standard_basis(p):
    """Closed-form h1, h2 with area A(G) = 1/(3 sqrt(Gamma))."""
    a, b, c = (float(h) for h in p.hats)
    g = float(p.gamma_fun)
    A_G = 1.0 / (3.0 * sqrt(g))
    l = sqrt((b + c) / (3.0 * g))
    h1 = (l, 0.0)
    h2 = (c * l / (b + c), sqrt(g) * l / (b + c))
    return StandardBasis(A_G=A_G, l=l, h1=h1, h2=h2)


def energy(p, u, v1, v2):
    """Edge energy of the realization e1 = (u, 0), e2 = (v1, v2)."""
    if u <= 0 or v2 <= 0:
        raise DomainError("energy needs u > 0 and v2 > 0")
    a, b, c = (float(h) for h in p.hats)
    return 0.5 * (a * u**2 + b * (v1**2 + v2**2) + c * ((v1 - u) ** 2 + v2**2))


def _reduced_gradient(p, area, u, v1):
    a, b, c = (float(h) for h in p.hats)
    v2 = area / u
    du = a * u - c * (v1 - u) - (b + c) * v2 * area / u**2
    dv1 = b * v1 + c * (v1 - u)
    return np.array([du, dv1])


def minimize_energy(p, area, max_iter=10_000, tol=1e-10):
    """Minimise the energy subject to ``u * v2 = area``.

    The constraint is eliminated (v2 = area / u).  Nelder-Mead is restarted
    from its own answer until the objective moves by less than ``tol``; a
    short gradient polish then removes the ~sqrt(machine eps) floor that
    objective-only search leaves on the minimiser.  Returns ``(u, v1, v2)``.
    """
    if area <= 0:
        raise DomainError("area must be positive")

    def objective(z):
        u, v1 = z
        if u <= 0:
            return np.inf
        return energy(p, u, v1, area / u)

    def gradient(z):
        u, v1 = z
        if u <= 0:
            return np.array([-1.0, 0.0])
        return _reduced_gradient(p, area, u, v1)

    x = np.array([sqrt(area), 0.0])
    f_prev = objective(x)
    used = 0
    while True:
        if used >= max_iter:
            raise NonConvergence(
                f"energy minimisation did not settle in {max_iter} iterations"
            )
        step = 0.05 * x[0]
        res = minimize(
            objective,
            x,
            method="Nelder-Mead",
            options={
                "xatol": 1e-12,
                "fatol": tol * 1e-3,
                "maxiter": max_iter - used,
                "initial_simplex": [x, x + [step, 0.0], x + [0.0, step]],
            },
        )
        used += max(res.nit, 1)
        x = res.x
        if res.success and abs(f_prev - res.fun) <= tol:
            break
        f_prev = res.fun

    # stationarity solve from the Nelder-Mead point; the problem is convex
    polish = root(gradient, x, tol=1e-15)
    if polish.x[0] > 0 and np.abs(gradient(polish.x)).max() < np.abs(gradient(x)).max():
        x = polish.x
    if np.abs(gradient(x)).max() > 1e-9:
        raise NonConvergence("energy minimiser has a non-vanishing gradient")
    u, v1 = x
    return float(u), float(v1), float(area / u)
