"""
Генотип крыла и его экспрессия в фенотип

Генотип = CPPN + массив экспрессии морфологии + возраст (AFPO).
Каждая запись массива - одна лопасть: шаг по размаху и значение similarity.
При экспрессии CPPN опрашивается для каждой записи и задаёт
хорду и жёсткости лопасти.

Сериализация - JSON с полем format_version.
"""

import math
from typing import Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from genotype.cppn import Cppn
from utils.errors import format_error_from_validation
from wing.feasibility import FeasibleBounds
from wing.models import BladeSpec, MaterialConfig, WingPhenotype

GENOTYPE_FORMAT_VERSION = 1


class ExpressionEntry(BaseModel):
    """
    Запись массива экспрессии

    position - шаг от внутреннего соседа (мм), хранится без прижатия к 30-150:
    нарушения видит проверка технологичности. similarity - в [0, 1].
    """
    model_config = ConfigDict(frozen=True)

    position: float = Field(gt=0)
    similarity: float = Field(ge=0.0, le=1.0)

    @field_validator("position")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("position должна быть конечной")
        return value


class Genotype(BaseModel):
    """Генотип: CPPN, массив экспрессии (≥ 1 запись), возраст и id линии"""
    model_config = ConfigDict(frozen=True)

    cppn: Cppn
    entries: Tuple[ExpressionEntry, ...] = Field(min_length=1)
    age: int = Field(0, ge=0)
    lineage: int = Field(0, ge=0)

    @property
    def total_position(self) -> float:
        return math.fsum(entry.position for entry in self.entries)


def _default_bounds() -> FeasibleBounds:
    return FeasibleBounds.from_material(MaterialConfig())


class ExpressionRanges(BaseModel):
    """
    Диапазоны, в которые отображаются выходы CPPN

    Хорда - линейно, жёсткости - логарифмически.
    По умолчанию совпадают с допустимыми диапазонами технологичности.
    """
    model_config = ConfigDict(frozen=True)

    chord: Tuple[float, float] = Field(default_factory=lambda: _default_bounds().chord)
    k_twist: Tuple[float, float] = Field(default_factory=lambda: _default_bounds().k_twist)
    k_bend: Tuple[float, float] = Field(default_factory=lambda: _default_bounds().k_bend)

    @field_validator("chord", "k_twist", "k_bend")
    @classmethod
    def _ordered(cls, bounds: Tuple[float, float]) -> Tuple[float, float]:
        lo, hi = bounds
        if not 0 < lo < hi:
            raise ValueError(f"диапазон должен быть 0 < min < max, получено {bounds}")
        return bounds

    @classmethod
    def from_bounds(cls, bounds: FeasibleBounds) -> "ExpressionRanges":
        return cls(chord=bounds.chord, k_twist=bounds.k_twist, k_bend=bounds.k_bend)


def lerp(bounds: Tuple[float, float], t: np.ndarray) -> np.ndarray:
    lo, hi = bounds
    return lo + (hi - lo) * t


def log_lerp(bounds: Tuple[float, float], t: np.ndarray) -> np.ndarray:
    lo, hi = bounds
    return lo * (hi / lo) ** t


def express(genotype: Genotype, ranges: ExpressionRanges, label: str = "") -> WingPhenotype:
    """
    Построить фенотип крыла из генотипа.

    Для записи i: x_norm = (сумма позиций до i включительно) / (сумма всех позиций),
    CPPN получает (x_norm, similarity_i, 1.0).

    Args:
        genotype: Генотип
        ranges: Диапазоны для выходов CPPN
        label: Метка крыла

    Returns:
        WingPhenotype: Крыло с числом лопастей = числу записей
    """
    positions = np.array([entry.position for entry in genotype.entries])
    similarity = np.array([entry.similarity for entry in genotype.entries])
    x_norm = np.cumsum(positions) / genotype.total_position
    o_chord, o_twist, o_bend = genotype.cppn.evaluate((x_norm, similarity, np.ones_like(x_norm)))

    chords = lerp(ranges.chord, o_chord)
    twists = log_lerp(ranges.k_twist, o_twist)
    bends = log_lerp(ranges.k_bend, o_bend)

    blades = tuple(
        BladeSpec(span_offset=float(position), chord=float(chord),
                  k_twist=float(k_twist), k_bend=float(k_bend))
        for position, chord, k_twist, k_bend in zip(positions, chords, twists, bends)
    )
    return WingPhenotype(blades=blades, label=label)


class GenotypeDocument(Genotype):
    """Файл генотипа"""

    format_version: Literal[1] = GENOTYPE_FORMAT_VERSION


def serialize(genotype: Genotype) -> str:
    """Сериализовать генотип в JSON-текст"""
    document = GenotypeDocument(cppn=genotype.cppn, entries=genotype.entries,
                                age=genotype.age, lineage=genotype.lineage)
    return document.model_dump_json(indent=2)


def deserialize(text: str, source: str = "genotype") -> Genotype:
    """
    Разобрать JSON-текст генотипа.

    Args:
        text: Документ
        source: Имя источника для сообщения об ошибке

    Returns:
        Genotype: Генотип

    Raises:
        FormatError: Битый документ; сообщение содержит путь до поля и значение
    """
    try:
        document = GenotypeDocument.model_validate_json(text)
    except ValidationError as e:
        raise format_error_from_validation(e, source) from None
    return Genotype(cppn=document.cppn, entries=document.entries,
                    age=document.age, lineage=document.lineage)
