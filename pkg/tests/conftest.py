"""
Общие фикстуры тестов
"""

from pathlib import Path

import pytest

from analyzers.transfer import annotate, ingest_transfers
from config.settings import reset_settings
from simulator.settings import FlapProfile, SimConfig
from wing.feasibility import FeasibleBounds
from wing.models import BladeSpec, MaterialConfig, WingPhenotype

ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = ROOT / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def designs_dir() -> Path:
    return DATA_DIR / "designs"


@pytest.fixture
def table1_path() -> Path:
    return DATA_DIR / "table1.csv"


@pytest.fixture
def table1(table1_path):
    return ingest_transfers(table1_path)


@pytest.fixture
def table1_annotated(table1):
    return annotate(table1)


@pytest.fixture
def material() -> MaterialConfig:
    return MaterialConfig()


@pytest.fixture
def bounds(material) -> FeasibleBounds:
    return FeasibleBounds.from_material(material)


@pytest.fixture
def profile() -> FlapProfile:
    return FlapProfile()


@pytest.fixture
def fast_sim() -> SimConfig:
    """Грубый шаг (200 шагов на цикл при 5 Гц) и три цикла"""
    return SimConfig(dt=1e-3, duration=0.6, settle_cycles=1, average_cycles=2)


@pytest.fixture
def min_wing() -> WingPhenotype:
    blade = BladeSpec(span_offset=50.0, chord=24.4, k_twist=1.5e-4, k_bend=1.95e-4)
    return WingPhenotype(blades=(blade,), label="MIN")


@pytest.fixture
def three_blade_wing() -> WingPhenotype:
    blades = tuple(
        BladeSpec(span_offset=offset, chord=chord, k_twist=2e-4, k_bend=3e-4)
        for offset, chord in ((60.0, 40.0), (60.0, 35.0), (50.0, 25.0))
    )
    return WingPhenotype(blades=blades, label="W3")


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Настройки не должны протекать между тестами через переменные окружения"""
    for name in ("WINGSCOUT_OUTPUT_ROOT", "WINGSCOUT_WORKERS", "WINGSCOUT_COEFF_TABLE", "DEBUG", "LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()
