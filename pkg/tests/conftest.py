import cmath
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from torus_ends.characters import Character
from torus_ends.farey import Slope

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def reducible_char(xi, eta):
    xi, eta = complex(xi), complex(eta)
    return Character(xi + 1 / xi, eta + 1 / eta, xi * eta + 1 / (xi * eta))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_char(rng, box=3.0):
    v = rng.uniform(-box, box, 3) + 1j * rng.uniform(-box, box, 3)
    return Character(*v)


def random_slope(rng, max_depth=12):
    """Random slope reached by a Stern-Brocot walk of bounded length (either sign)."""
    lo, hi = (0, 1), (1, 0)
    p, q = 1, 1
    for _ in range(int(rng.integers(0, max_depth))):
        if rng.random() < 0.5:
            hi = (p, q)
        else:
            lo = (p, q)
        p, q = lo[0] + hi[0], lo[1] + hi[1]
    if rng.random() < 0.5:
        p = -p
    return Slope.make(p, q)


small = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, small, small)
characters = st.builds(Character, complexes, complexes, complexes)
real_characters = st.builds(Character, small, small, small)
@st.composite
def coprime_slopes(draw, bound=60):
    p = draw(st.integers(-bound, bound))
    q = draw(st.integers(0, bound))
    if math.gcd(p, q) != 1:
        p, q = 1, 1
    return Slope.make(p, q)


unit = st.floats(0.05, 3.1).map(lambda t: cmath.exp(1j * t))


def pytest_terminal_summary(terminalreporter):
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid:
                continue
            name = nodeid.split("::")[-1].split("[")[0][len("test_criterion_"):]
            ok = outcome == "passed" and rows.get(name, (True, 0.0))[0]
            rows[name] = (ok, rows.get(name, (True, 0.0))[1] + rep.duration)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(rows):
        ok, took = rows[name]
        num, _, label = name.partition("_")
        terminalreporter.write_line(f"criterion {int(num):2d} {label:24s} {'PASS' if ok else 'FAIL'}  {took:6.2f} s")
