from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from catecom.builder import fixture_dir, load_fixture, load_fixture_bytes

GOLDEN_DIR = Path(__file__).resolve().parent / "golden"
DATA_DIR = Path(__file__).resolve().parent / "data"


def fixture_doc(name: str) -> dict:
    """Decoded JSON of one shipped fixture."""
    return json.loads(load_fixture_bytes(name).decode("utf-8"))


@pytest.fixture
def ksdft_pbe():
    return load_fixture("um_ksdft-pbe.json")


@pytest.fixture
def ksdft_hse06():
    return load_fixture("um_ksdft-hse06.json")


@pytest.fixture
def ccsd():
    return load_fixture("um_ccsd.json")


@pytest.fixture
def ols():
    return load_fixture("um_ols.json")


@pytest.fixture
def dft_gw_bse():
    return load_fixture("cm_dft-gw-bse.json")


@pytest.fixture
def pw_us_method():
    return load_fixture("method_pw-us.json")


@pytest.fixture
def corpus_dir() -> Path:
    return fixture_dir()
