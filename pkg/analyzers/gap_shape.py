"""
Форма разрыва между симуляцией и реальностью

По аннотированному набору переносов (C_MS, STR):
- polyfit_str - полином наилучшего приближения, степень выбирается по AICc
- gap_envelope - полоса между верхней и нижней границей STR соседних крыльев
- threshold_estimate - сложность, на которой приближение выходит из полосы |STR| ≤ 0.2
- decay_line - иллюстративная линия монотонного спада от минимального крыла
"""

import math
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from analyzers.transfer import TransferDataset, TransferRecord, annotate
from utils.errors import DomainError

MAX_DEGREE = 4
SMALL_GAP_BAND = 0.2
# Относительный уровень шума для точных данных (RSS = 0 даёт ln 0)
RSS_FLOOR_SCALE = 1e-10


class PolyFit(BaseModel):
    """Полином STR(C_MS); коэффициенты по возрастанию степени"""
    model_config = ConfigDict(frozen=True)

    degree: int = Field(ge=0)
    coefficients: Tuple[float, ...]
    rss: float = Field(default=0.0, ge=0)
    scores: Dict[int, float] = Field(default_factory=dict)

    @field_validator("coefficients")
    @classmethod
    def _finite(cls, value: Tuple[float, ...]) -> Tuple[float, ...]:
        if not all(math.isfinite(c) for c in value):
            raise ValueError("коэффициенты должны быть конечными")
        return value

    @model_validator(mode="after")
    def _length_matches_degree(self) -> "PolyFit":
        if len(self.coefficients) != self.degree + 1:
            raise ValueError(f"степень {self.degree} требует {self.degree + 1} коэффициентов")
        return self

    def __call__(self, cms):
        return P.polyval(cms, np.asarray(self.coefficients))


class GapEnvelope(BaseModel):
    """Полоса STR: узлы по возрастанию C_MS, верхняя и нижняя ломаные"""
    model_config = ConfigDict(frozen=True)

    points: Tuple[Tuple[float, float], ...]
    knots: Tuple[float, ...] = Field(min_length=1)
    upper: Tuple[float, ...]
    lower: Tuple[float, ...]

    @model_validator(mode="after")
    def _consistent(self) -> "GapEnvelope":
        if not len(self.knots) == len(self.upper) == len(self.lower):
            raise ValueError("узлы и границы должны быть одной длины")
        if any(b <= a for a, b in zip(self.knots, self.knots[1:])):
            raise ValueError("узлы должны строго возрастать")
        if any(lo > hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("нижняя граница выше верхней")
        return self

    def upper_at(self, cms):
        return np.interp(cms, self.knots, self.upper)

    def lower_at(self, cms):
        return np.interp(cms, self.knots, self.lower)


class DecayLine(BaseModel):
    """Прямая STR = intercept + slope·C_MS через минимальное крыло (иллюстрация)"""
    model_config = ConfigDict(frozen=True)

    anchor_label: str
    anchor: Tuple[float, float]
    slope: float = Field(le=0)

    @property
    def intercept(self) -> float:
        return self.anchor[1] - self.slope * self.anchor[0]

    def __call__(self, cms):
        return self.intercept + self.slope * np.asarray(cms)


def _annotated(dataset: TransferDataset) -> Sequence[TransferRecord]:
    if any(r.cms is None or r.str_value is None for r in dataset.records):
        dataset = annotate(dataset)
    return dataset.records


def aicc(rss: float, n: int, k: int) -> float:
    """
    Скорректированный информационный критерий Акаике.

    +inf, если n - k - 1 ≤ 0 (поправка не определена).
    """
    if n - k - 1 <= 0:
        return math.inf
    return n * math.log(rss / n) + 2 * k + 2 * k * (k + 1) / (n - k - 1)


def select_polynomial(cms: Sequence[float], values: Sequence[float],
                      max_degree: int = MAX_DEGREE) -> PolyFit:
    """
    МНК-полиномы степеней 1..max_degree и выбор по минимуму AICc.

    При равных оценках побеждает меньшая степень.

    Raises:
        DomainError: Мало точек (нужно max_degree + 2) или вырожденная система
    """
    x = np.asarray(cms, dtype=float)
    y = np.asarray(values, dtype=float)
    n = len(x)
    if max_degree < 1:
        raise DomainError(f"max_degree должен быть ≥ 1, получено {max_degree}")
    if n < max_degree + 2:
        raise DomainError(f"нужно минимум {max_degree + 2} точек, получено {n}")

    floor = n * (RSS_FLOOR_SCALE * max(1.0, float(np.max(np.abs(y))))) ** 2
    scores: Dict[int, float] = {}
    fits: Dict[int, Tuple[np.ndarray, float]] = {}
    for degree in range(1, max_degree + 1):
        design = np.vander(x, degree + 1, increasing=True)
        coefficients, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
        if rank < degree + 1:
            raise DomainError(
                f"вырожденная система для степени {degree}: различных значений C_MS меньше {degree + 1}"
            )
        residuals = y - design @ coefficients
        rss = max(float(residuals @ residuals), floor)
        scores[degree] = aicc(rss, n, degree + 1)
        fits[degree] = (coefficients, float(residuals @ residuals))

    best = min(scores, key=lambda d: (scores[d], d))
    coefficients, rss = fits[best]
    return PolyFit(degree=best, coefficients=tuple(float(c) for c in coefficients),
                   rss=rss, scores=scores)


def polyfit_str(dataset: TransferDataset, max_degree: int = MAX_DEGREE) -> PolyFit:
    """
    Полином наилучшего приближения STR(C_MS) по набору переносов.

    Args:
        dataset: Набор (аннотируется, если STR/C_MS не заполнены)
        max_degree: Наибольшая рассматриваемая степень

    Returns:
        PolyFit: Выбранный полином и оценки AICc всех степеней
    """
    records = _annotated(dataset)
    return select_polynomial([r.cms for r in records], [r.str_value for r in records], max_degree)


def gap_envelope(dataset: TransferDataset) -> GapEnvelope:
    """
    Полоса разрыва: в каждом узле C_MS максимум и минимум STR совпадающих крыльев.

    Raises:
        DomainError: Меньше двух записей
    """
    records = _annotated(dataset)
    if len(records) < 2:
        raise DomainError("для полосы нужно минимум 2 записи")
    points = sorted((r.cms, r.str_value) for r in records)
    knots = sorted({cms for cms, _ in points})
    upper = [max(s for c, s in points if c == knot) for knot in knots]
    lower = [min(s for c, s in points if c == knot) for knot in knots]
    return GapEnvelope(points=tuple(points), knots=tuple(knots), upper=tuple(upper), lower=tuple(lower))


def threshold_estimate(fit: PolyFit, band: float = SMALL_GAP_BAND) -> Optional[float]:
    """
    Порог сложности: наибольший корень fit(C_MS) = -band на отрезке [0, 1].

    Для постоянного полинома, равного -band, возвращается 0.
    None, если корня на отрезке нет.
    """
    shifted = np.array(fit.coefficients, dtype=float)
    shifted[0] += band
    shifted = P.polytrim(shifted, tol=0.0)
    if len(shifted) == 1:
        return 0.0 if shifted[0] == 0.0 else None

    roots = P.polyroots(shifted)
    real = [float(r.real) for r in roots if abs(r.imag) <= 1e-9 * max(1.0, abs(r.real))]
    inside = [min(max(r, 0.0), 1.0) for r in real if -1e-12 <= r <= 1.0 + 1e-12]
    return max(inside) if inside else None


def decay_line(dataset: TransferDataset) -> DecayLine:
    """
    Иллюстративная линия монотонного спада от минимального крыла.

    Прямая проходит через крыло с наименьшей C_MS; наклон - МНК по остальным
    точкам, ограниченный сверху нулём (линия не растёт).
    """
    records = _annotated(dataset)
    anchor = min(records, key=lambda r: r.cms)
    dx = np.array([r.cms - anchor.cms for r in records])
    dy = np.array([r.str_value - anchor.str_value for r in records])
    denominator = float(dx @ dx)
    slope = float(dx @ dy) / denominator if denominator > 0 else 0.0
    return DecayLine(anchor_label=anchor.label, anchor=(anchor.cms, anchor.str_value), slope=min(slope, 0.0))
