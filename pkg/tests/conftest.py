import json
import pathlib

import pytest

from skewlab.fieldext import FieldExtension, catalog

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def load_fixture(name):
    with open(FIXTURES / name) as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def gauss():
    return catalog("gauss_Q_i")


@pytest.fixture(scope="session")
def klein():
    return catalog("Q_sqrt2_sqrt3")


@pytest.fixture(scope="session")
def zeta5():
    return catalog("Q_zeta5")


@pytest.fixture(scope="session")
def f9():
    return catalog("Fp2(3)")


@pytest.fixture(scope="session")
def s3_field():
    return FieldExtension.from_json(load_fixture("s3_splitting.json"))


# one line per acceptance criterion in the terminal summary
ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for crit in getattr(report, "user_properties", []):
        if crit[0] == "criterion":
            ACCEPTANCE[crit[1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        status = "PASS" if ACCEPTANCE[k] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {k:>2}: {status}")
