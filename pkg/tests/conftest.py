from pathlib import Path

import pytest

import coptree as ct

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def housing():
    return ct.load_dataset(DATA_DIR / "housing.csv")


@pytest.fixture(scope="session")
def abalone():
    path = DATA_DIR / "abalone.csv"
    if not path.exists():
        pytest.skip(
            "data/abalone.csv not present (this environment has no route to "
            "archive.ics.uci.edu); run scripts/fetch_uci.py on a networked "
            "machine, then re-run"
        )
    return ct.load_dataset(path)


@pytest.fixture(scope="session")
def synthetic_spec():
    return ct.load_synthetic_spec(DATA_DIR / "synthetic_spec.json")
