import sys
from pathlib import Path

import hypothesis
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cvssi.netpbm import read_gray  # noqa: E402

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")

DATA = Path(__file__).parent / "data"

# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def natural_images():
    return {p.stem: read_gray(p) for p in sorted(DATA.glob("*.p?m"))}


@pytest.fixture(scope="session")
def camera():
    return read_gray(DATA / "camera.pgm")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        status, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{status}] {key}: {detail}")
