import mpmath
from mpmath import mp
import pytest

from lfunction.numerics import ParameterPoint, PrecisionConfig


@pytest.fixture(scope="session")
def cfg40():
    """Lower precision for unit tests; acceptance tests use the 60-digit default."""
    return PrecisionConfig(working_digits=40)


@pytest.fixture(scope="session")
def x0():
    """A generic point inside the default sampling box (Re e < 5/4, so all three L forms apply)."""
    return ParameterPoint.from_free(
        mpmath.mpc("0.41", "0.12"), mpmath.mpc("0.57", "-0.21"), mpmath.mpc("0.66", "0.08"),
        mpmath.mpc("0.73", "0.17"), mpmath.mpc("1.23", "0.07"), mpmath.mpc("1.38", "-0.26"),
    )


def rel_diff(u, v):
    return abs(u - v) / max(abs(u), abs(v))


@pytest.fixture(autouse=True)
def oracle_precision():
    """Oracle arithmetic inside tests runs at 50 digits; the package sets its own precision."""
    with mp.workdps(50):
        yield


def cx(text):
    """Exact binary value of a literal such as "0.3+0.2j"; oracle and package see the same input."""
    return mpmath.mpmathify(complex(text)) if "j" in str(text) else mpmath.mpmathify(text)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
