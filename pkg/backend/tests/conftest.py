import random
from pathlib import Path

import pytest

from app.config import CATALOG_DIR
from app.services import gallery
from app.services.fields import CoefficientField, PolyRing
from app.services.matroid import Matroid


@pytest.fixture(scope="session")
def q_sing() -> Matroid:
    return gallery.q_sing()


@pytest.fixture(scope="session")
def ex_3_9() -> Matroid:
    return gallery.ex_3_9()


@pytest.fixture(scope="session")
def ex_3_10() -> Matroid:
    return gallery.ex_3_10()


@pytest.fixture(scope="session")
def f2_eight() -> Matroid:
    return gallery.f2_eight_points()


@pytest.fixture(scope="session")
def not_smooth() -> Matroid:
    return gallery.not_smooth_4_10()


@pytest.fixture
def ring_xy() -> PolyRing:
    return PolyRing(CoefficientField.rationals(), ("x", "y"))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240517)


def catalog_file(d: int, n: int) -> Path:
    """The public database file for (d, n) under CATALOG_DIR, or skip."""
    root = Path(CATALOG_DIR)
    if root.is_dir():
        for pattern in (f"*r{d}n{n:02d}*", f"*r{d}n{n}*"):
            found = sorted(p for p in root.glob(pattern) if p.suffix == ".txt")
            if found:
                return found[0]
    pytest.skip(f"catalog file for ({d},{n}) not found in {root}; see README")
