"""
Модели данных крыла

Фенотип крыла - это упорядоченный список лопастей (blade elements)
от корня к законцовке. Каждая лопасть - плоская пластина, соединённая
с внутренним соседом упругим шарниром (кручение + изгиб).

У нас 4 основные модели:
1. BladeSpec - одна лопасть (шаг по размаху, хорда, жёсткости)
2. WingPhenotype - крыло целиком
3. MaterialConfig - материалы (плёнка, лонжерон, проволока)
4. FeasibilityReport - результат проверки технологичности

Длины в миллиметрах, жёсткости в Н·м/рад, плотности и модули в СИ.
"""

import math
from typing import Literal, Tuple

from pydantic import (BaseModel, ConfigDict, Field, PositiveFloat, ValidationError,
                      field_validator, model_validator)

from utils.errors import format_error_from_validation


class BladeSpec(BaseModel):
    """
    Одна лопасть крыла

    span_offset - расстояние от внутреннего соседа (мм),
    chord - хорда от передней до задней кромки (мм),
    k_twist / k_bend - жёсткости шарнира на кручение и изгиб (Н·м/рад).
    """
    model_config = ConfigDict(frozen=True)

    span_offset: PositiveFloat
    chord: PositiveFloat
    k_twist: PositiveFloat
    k_bend: PositiveFloat


class WingPhenotype(BaseModel):
    """
    Фенотип крыла

    Хранит лопасти от корня к законцовке и текстовую метку.
    """
    model_config = ConfigDict(frozen=True)

    blades: Tuple[BladeSpec, ...] = Field(min_length=1)
    label: str = ""

    @property
    def span(self) -> float:
        """Размах S(m) в мм"""
        return math.fsum(blade.span_offset for blade in self.blades)

    @property
    def blade_count(self) -> int:
        """Число лопастей B(m)"""
        return len(self.blades)

    @property
    def stations(self) -> Tuple[float, ...]:
        """Накопленные станции по размаху (мм) - внешняя кромка каждой лопасти"""
        total = 0.0
        result = []
        for blade in self.blades:
            total += blade.span_offset
            result.append(total)
        return tuple(result)

    def __repr__(self):
        return f"<WingPhenotype(label='{self.label}', B={self.blade_count}, S={self.span:.1f}mm)>"


class MaterialConfig(BaseModel):
    """
    Материалы крыла

    Значения по умолчанию посчитаны по таблице материалов:
    - плёнка: майлар 5 мкм при 1.39 г/см³ -> 6.95 г/м²
    - лонжерон: углепластиковый пруток 0.8 мм -> ~0.8 г/м
    - пружины: стальная проволока 0.1 / 0.13 / 0.17 мм на участке 15 мм
    """
    model_config = ConfigDict(frozen=True)

    skin_areal_density: PositiveFloat = 6.95e-3    # кг/м²
    spar_linear_density: PositiveFloat = 8.0e-4    # кг/м
    wire_gauges: Tuple[PositiveFloat, ...] = (0.1, 0.13, 0.17)   # мм
    wire_section_length: PositiveFloat = 15.0      # мм
    shear_modulus: PositiveFloat = 79.3e9          # Па
    elastic_modulus: PositiveFloat = 206.0e9       # Па

    @field_validator("wire_gauges")
    @classmethod
    def _gauges_sorted(cls, gauges: Tuple[float, ...]) -> Tuple[float, ...]:
        if not gauges:
            raise ValueError("нужен хотя бы один диаметр проволоки")
        if any(b <= a for a, b in zip(gauges, gauges[1:])):
            raise ValueError("диаметры проволоки должны строго возрастать")
        return gauges


class Violation(BaseModel):
    """Одно нарушение: параметр, фактическое значение, ближайшее допустимое"""
    model_config = ConfigDict(frozen=True)

    parameter: str
    actual: float
    nearest: float


class FeasibilityReport(BaseModel):
    """
    Результат проверки технологичности

    distance - нормированное расстояние до ближайшего допустимого крыла
    (Objective 3 в эволюции). distance = 0 тогда и только тогда,
    когда нарушений нет.
    """
    model_config = ConfigDict(frozen=True)

    violations: Tuple[Violation, ...] = ()
    distance: float = Field(0.0, ge=0.0)

    @model_validator(mode="after")
    def _distance_matches(self) -> "FeasibilityReport":
        if (self.distance == 0.0) != (len(self.violations) == 0):
            raise ValueError("distance = 0 допустимо только без нарушений")
        return self

    @property
    def feasible(self) -> bool:
        return not self.violations


PHENOTYPE_FORMAT_VERSION = 1


class PhenotypeDocument(WingPhenotype):
    """Файл фенотипа: те же поля плюс версия схемы"""

    format_version: Literal[1] = PHENOTYPE_FORMAT_VERSION


def dump_phenotype(wing: WingPhenotype) -> str:
    """Сериализовать фенотип в JSON"""
    document = PhenotypeDocument(blades=wing.blades, label=wing.label)
    return document.model_dump_json(indent=2)


def load_phenotype(text: str, source: str = "phenotype") -> WingPhenotype:
    """
    Разобрать JSON фенотипа.

    Raises:
        FormatError: Битый документ (с указанием поля)
    """
    try:
        document = PhenotypeDocument.model_validate_json(text)
    except ValidationError as e:
        raise format_error_from_validation(e, source) from None
    return WingPhenotype(blades=document.blades, label=document.label)
