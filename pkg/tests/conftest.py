import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from pickmult import BoundaryGrid, Holomap, MonomialMap

settings.register_profile(
    "suite", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def mono23() -> MonomialMap:
    return MonomialMap(2, 3, 0.5)


@pytest.fixture(scope="session")
def mono25() -> MonomialMap:
    return MonomialMap(2, 5, 0.5)


@pytest.fixture(scope="session")
def holo23(mono23) -> Holomap:
    return mono23.to_holomap()


@pytest.fixture(scope="session")
def grid256() -> BoundaryGrid:
    return BoundaryGrid.uniform(256)


@pytest.fixture
def write_config(tmp_path: Path):
    def _write(cfg: dict, name: str = "config.json") -> str:
        p = tmp_path / name
        p.write_text(json.dumps(cfg))
        return str(p)

    return _write
