import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_acceptance = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance[report.nodeid] = (report.outcome, report.duration)
    elif report.when == "setup" and report.outcome != "passed" and "test_acceptance.py" in report.nodeid:
        _acceptance[report.nodeid] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (outcome, duration) in sorted(_acceptance.items()):
        name = nodeid.split("::")[-1]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}  ({duration:.2f} s)")


@pytest.fixture(scope="session")
def lemniscatic():
    from fractions import Fraction
    from laurentdata import HyperellipticCurve
    return HyperellipticCurve([Fraction(0), Fraction(-4), Fraction(0), Fraction(4)])


@pytest.fixture(scope="session")
def hexagonal():
    from fractions import Fraction
    from laurentdata import HyperellipticCurve
    return HyperellipticCurve([Fraction(-4), Fraction(0), Fraction(0), Fraction(4)])


@pytest.fixture(scope="session")
def x3p1():
    from fractions import Fraction
    from laurentdata import HyperellipticCurve
    return HyperellipticCurve([Fraction(1), Fraction(0), Fraction(0), Fraction(1)])
