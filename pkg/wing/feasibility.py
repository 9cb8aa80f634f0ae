"""
Проверка технологичности и подбор проволоки

Крыло можно изготовить, если каждый параметр каждой лопасти лежит
в допустимом диапазоне. Для недопустимых крыльев считаем нормированное
расстояние до ближайшего допустимого крыла (Objective 3).

Жёсткость пружины из проволоки диаметра d на участке длины L:
- кручение: k = G·(πd⁴/32)/L
- изгиб:    k = E·(πd⁴/64)/L
"""

import math
from typing import Literal, Tuple

from pydantic import BaseModel, ConfigDict, field_validator

from wing.models import BladeSpec, FeasibilityReport, MaterialConfig, Violation, WingPhenotype

StiffnessMode = Literal["twist", "bend"]

BLADE_PARAMETERS = ("span_offset", "chord", "k_twist", "k_bend")


class FeasibleBounds(BaseModel):
    """
    Допустимые диапазоны параметров лопасти

    Шаг по размаху 30-150 мм; хорда 10-200 мм; жёсткости -
    от половины жёсткости самой тонкой проволоки до удвоенной
    жёсткости самой толстой (см. from_material).
    """
    model_config = ConfigDict(frozen=True)

    span_offset: Tuple[float, float] = (30.0, 150.0)
    chord: Tuple[float, float] = (10.0, 200.0)
    k_twist: Tuple[float, float]
    k_bend: Tuple[float, float]

    @field_validator("span_offset", "chord", "k_twist", "k_bend")
    @classmethod
    def _ordered(cls, bounds: Tuple[float, float]) -> Tuple[float, float]:
        lo, hi = bounds
        if not 0 < lo < hi:
            raise ValueError(f"диапазон должен быть 0 < min < max, получено {bounds}")
        return bounds

    @classmethod
    def from_material(cls, material: MaterialConfig, **overrides) -> "FeasibleBounds":
        """Построить диапазоны жёсткости по доступным диаметрам проволоки"""
        thinnest, thickest = material.wire_gauges[0], material.wire_gauges[-1]
        values = {
            "k_twist": (wire_stiffness(thinnest, material, "twist") / 2.0,
                        2.0 * wire_stiffness(thickest, material, "twist")),
            "k_bend": (wire_stiffness(thinnest, material, "bend") / 2.0,
                       2.0 * wire_stiffness(thickest, material, "bend")),
        }
        values.update(overrides)
        return cls(**values)


def wire_stiffness(diameter_mm: float, material: MaterialConfig, mode: StiffnessMode) -> float:
    """
    Жёсткость пружины из проволоки.

    Args:
        diameter_mm: Диаметр проволоки (мм)
        material: Материалы (модули, длина пружинного участка)
        mode: "twist" (кручение) или "bend" (изгиб)

    Returns:
        float: Жёсткость в Н·м/рад
    """
    d = diameter_mm * 1e-3
    length = material.wire_section_length * 1e-3
    if mode == "twist":
        return material.shear_modulus * (math.pi * d ** 4 / 32.0) / length
    if mode == "bend":
        return material.elastic_modulus * (math.pi * d ** 4 / 64.0) / length
    raise ValueError(f"неизвестный режим жёсткости: {mode}")


def nearest_wire_gauge(k_required: float, material: MaterialConfig, mode: StiffnessMode) -> float:
    """
    Выбрать диаметр проволоки, ближайший к нужной жёсткости.

    Сравнение в логарифмическом масштабе: жёсткость растёт как d⁴.

    Args:
        k_required: Требуемая жёсткость (Н·м/рад), > 0
        material: Материалы
        mode: "twist" или "bend"

    Returns:
        float: Диаметр в мм из material.wire_gauges
    """
    if k_required <= 0:
        raise ValueError(f"жёсткость должна быть положительной: {k_required}")
    target = math.log(k_required)
    return min(material.wire_gauges,
               key=lambda d: abs(math.log(wire_stiffness(d, material, mode)) - target))


def validate_phenotype(wing: WingPhenotype, bounds: FeasibleBounds) -> FeasibilityReport:
    """
    Проверить, можно ли изготовить крыло.

    Расстояние - евклидова норма по всем параметрам всех лопастей
    величин (clamp(v, lo, hi) - v) / (hi - lo).

    Args:
        wing: Фенотип крыла
        bounds: Допустимые диапазоны

    Returns:
        FeasibilityReport: Нарушения и расстояние
    """
    violations = []
    gaps = []
    for index, blade in enumerate(wing.blades):
        for name in BLADE_PARAMETERS:
            value = getattr(blade, name)
            lo, hi = getattr(bounds, name)
            nearest = min(max(value, lo), hi)
            if nearest != value:
                violations.append(Violation(parameter=f"blade[{index}].{name}",
                                            actual=value, nearest=nearest))
                gaps.append((nearest - value) / (hi - lo))
    distance = math.sqrt(math.fsum(g * g for g in gaps)) if gaps else 0.0
    return FeasibilityReport(violations=tuple(violations), distance=distance)


def clamp_to_bounds(wing: WingPhenotype, bounds: FeasibleBounds) -> WingPhenotype:
    """Ближайшее допустимое крыло: каждый параметр прижат к своему диапазону"""
    blades = []
    for blade in wing.blades:
        values = {}
        for name in BLADE_PARAMETERS:
            lo, hi = getattr(bounds, name)
            values[name] = min(max(getattr(blade, name), lo), hi)
        blades.append(BladeSpec(**values))
    return WingPhenotype(blades=tuple(blades), label=wing.label)
