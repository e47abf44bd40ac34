from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import load, load_group  # noqa: E402


@pytest.fixture(scope="session")
def s3_phi():
    return load("s3_phi4.sp")


@pytest.fixture(scope="session")
def d8_phi():
    return load("d8_phi4.sp")


@pytest.fixture(scope="session")
def phi3():
    return load("phi3.sp")


@pytest.fixture(scope="session")
def z2_phi():
    return load("preprojective_z2.sp")


@pytest.fixture(scope="session")
def s3_group():
    return load_group("s3.grp")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
