"""
Целевые функции эволюции

У каждого генотипа четыре цели:
1. подъёмная сила (максимизируется, прижата к [0.01, 0.2] Н)
2. стоимость привода - средняя мощность или RMS момента (минимизируется)
3. расстояние до технологичного крыла (минимизируется)
4. возраст генотипа (минимизируется, AFPO)

Недопустимое крыло всё равно симулируется - после прижатия параметров к границам.
"""

import logging
import math
from typing import TYPE_CHECKING, Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from genotype.genome import Genotype, express
from simulator.coefficients import CoefficientTable, load_coefficients
from simulator.runner import simulate
from utils.errors import SimulationAbort
from utils.helpers import clamp
from wing.feasibility import clamp_to_bounds, validate_phenotype

if TYPE_CHECKING:
    from evolution.engine import EvolutionConfig

logger = logging.getLogger(__name__)

LIFT_BOUNDS = (0.01, 0.2)          # Н, 1 г и 20 г
SENTINEL_COST = 1.0e6
SENTINEL_FEASIBILITY = 1.0e6

_tables: Dict[str, CoefficientTable] = {}


class ObjectiveVector(BaseModel):
    """Значения целей одного генотипа"""
    model_config = ConfigDict(frozen=True)

    lift: float
    drive_cost: float
    feasibility: float = Field(ge=0.0)
    age: int = Field(ge=0)

    @field_validator("lift", "drive_cost", "feasibility")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("цели должны быть конечными")
        return value

    def minimization_key(self) -> Tuple[float, float, float, float]:
        """Все цели как минимизируемые (подъёмная сила со знаком минус)"""
        return (-self.lift, self.drive_cost, self.feasibility, float(self.age))

    def with_age(self, age: int) -> "ObjectiveVector":
        return ObjectiveVector(lift=self.lift, drive_cost=self.drive_cost,
                               feasibility=self.feasibility, age=age)


class Evaluation(BaseModel):
    """
    Полный результат оценки генотипа

    raw_lift - подъёмная сила до прижатия (Н); power / torque - обе стоимости привода;
    sentinel - симуляция прервалась и цели заменены худшими значениями.
    """
    model_config = ConfigDict(frozen=True)

    objectives: ObjectiveVector
    raw_lift: float
    power: float
    torque: float
    sentinel: bool = False
    detail: str = ""

    def with_age(self, age: int) -> "Evaluation":
        return self.model_copy(update={"objectives": self.objectives.with_age(age)})


def _coefficient_table(path: Optional[str]) -> Optional[CoefficientTable]:
    if path is None:
        return None
    if path not in _tables:
        _tables[path] = load_coefficients(path)
    return _tables[path]


def evaluate_detailed(genotype: Genotype, config: "EvolutionConfig") -> Evaluation:
    """
    Оценить генотип: экспрессия, проверка технологичности, симуляция.

    Args:
        genotype: Генотип
        config: Конфигурация эксперимента

    Returns:
        Evaluation: Цели и сырые метрики
    """
    bounds = config.feasible_bounds()
    phenotype = express(genotype, config.ranges)
    report = validate_phenotype(phenotype, bounds)
    target = phenotype if report.feasible else clamp_to_bounds(phenotype, bounds)

    try:
        result = simulate(target, config.material, config.flap, config.sim,
                          table=_coefficient_table(config.coeff_table))
    except SimulationAbort as e:
        logger.warning(f"Симуляция прервана, цели заменены худшими значениями: {e}")
        return Evaluation(
            objectives=ObjectiveVector(lift=config.lift_bounds[0], drive_cost=SENTINEL_COST,
                                       feasibility=SENTINEL_FEASIBILITY, age=genotype.age),
            raw_lift=0.0,
            power=SENTINEL_COST,
            torque=SENTINEL_COST,
            sentinel=True,
            detail=str(e),
        )

    cost = result.drive_power_mean if config.drive_cost_mode == "power" else result.drive_torque_rms
    return Evaluation(
        objectives=ObjectiveVector(
            lift=clamp(result.lift_mean, config.lift_bounds),
            drive_cost=cost,
            feasibility=report.distance,
            age=genotype.age,
        ),
        raw_lift=result.lift_mean,
        power=result.drive_power_mean,
        torque=result.drive_torque_rms,
    )


def evaluate(genotype: Genotype, config: "EvolutionConfig") -> ObjectiveVector:
    """Вектор целей генотипа (см. evaluate_detailed)"""
    return evaluate_detailed(genotype, config).objectives
