import numpy as np
import pytest
from mpmath import mp, mpf, log, sech, sqrt

from qdeficit import states

ACCEPTANCE_LINES: list[str] = []


# High-precision scalar evaluation of the family's closed forms. Shares no
# code with the package, so values frozen from it are an independent oracle.
def _plog(v):
    return v * log(v, 2) if v > 0 else mpf(0)


def mp_state(r, t, d=3):
    r, t = mpf(r), mpf(t)
    return r, (1 - 2 * (d - 2) * r - t) / 3, t


def mp_entropy(r, t, d=3):
    r, s, t = mp_state(r, t, d)
    return -(3 * _plog(s) + _plog(t) + 2 * (d - 2) * _plog(r))


def mp_deficit(r, t, d=3, k=1):
    r, s, t = mp_state(r, t, d)
    lam = [(s + t + sign * (s - t) * k) / 2 for sign in (1, -1)]
    return sum(_plog(v) for v in lam) - 2 * _plog((s + t) / 2)


def mp_weak_deficit(r, t, x, d=3, k=1):
    r, s, t = mp_state(r, t, d)
    eta = [(s + t + sign * (s - t) * k) / 2 for sign in (1, -1)]
    xi = [(s + t + sign * (s - t) * k * sech(mpf(x))) / 2 for sign in (1, -1)]
    return sum(_plog(e) - _plog(c) for e, c in zip(eta, xi))


mp.dps = 40


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def rho_ref():
    """r=0.05, t=0.45, d=3 (s=0.15), the running example."""
    return states.build_two_param_state(0.05, 0.45, 3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
