"""Reference walks used throughout the tests, the CLI and the docs."""

from fractions import Fraction

from .walk import validate


def simple_walk():
    """All six steps with probability 1/6."""
    s = Fraction(1, 6)
    return validate(s, s, s, s, s, s)


def tilted_walk(eps=Fraction(1, 10)):
    """alpha = beta = gamma = 1/6 + eps, primed = 1/6 - eps, so kappa = 2 eps."""
    eps = Fraction(eps)
    hi = Fraction(1, 6) + eps
    lo = Fraction(1, 6) - eps
    return validate(hi, lo, hi, lo, hi, lo)


def skew_walk():
    """kappa = 1/6 with unequal hats and a zero-probability step."""
    return validate(
        Fraction(1, 4), Fraction(1, 12), Fraction(1, 3), Fraction(1, 6), Fraction(1, 6), 0
    )


def one_sided_walk():
    """kappa = 1/3: only +e1, -e2, +e3, each with probability 1/3."""
    t = Fraction(1, 3)
    return validate(t, 0, t, 0, t, 0)


FIXTURES = {
    "simple": simple_walk,
    "tilted": tilted_walk,
    "skew": skew_walk,
    "one-sided": one_sided_walk,
}


def get_fixture(name):
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
