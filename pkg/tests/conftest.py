from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from trilattice.fixtures import FIXTURES
from trilattice.walk import validate


def walk_from_weights(k, w1, w2, w3):
    """Valid walk with kappa = k/60 and the free mass split as w1 : w2 : w3."""
    kappa = Fraction(k, 60)
    free = (1 - 3 * kappa) / 2
    total = w1 + w2 + w3
    a, b, c = (kappa + free * Fraction(w, total) for w in (w1, w2, w3))
    return validate(a, a - kappa, b, b - kappa, c, c - kappa)


def _usable(k, w):
    # kappa = 0 needs two positive hats for a non-degenerate covariance
    return sum(w) > 0 and (k > 0 or sum(1 for v in w if v) >= 2)


@st.composite
def walks(draw, max_k=19):
    k = draw(st.integers(0, max_k))
    w = draw(
        st.tuples(st.integers(0, 12), st.integers(0, 12), st.integers(0, 12)).filter(
            lambda w: _usable(k, w)
        )
    )
    return walk_from_weights(k, *w)


def random_walks(count, seed=0, max_k=20):
    """Deterministic list of random valid walks (kappa = 1/3 allowed at max_k=20)."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        k = int(rng.integers(0, max_k + 1))
        w = tuple(int(v) for v in rng.integers(0, 13, size=3))
        if _usable(k, w):
            out.append(walk_from_weights(k, *w))
    return out


@pytest.fixture(params=sorted(FIXTURES))
def fixture_walk(request):
    return FIXTURES[request.param]()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
