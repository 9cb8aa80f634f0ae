"""
Геометрия и масса крыла

- wing_span - размах S(m)
- compute_cms - сложность морфологии C_MS = ½(B/B_max + S/S_max)
- wing_mass_model - масса и тензор инерции каждой лопасти
"""

import math
from dataclasses import dataclass
from typing import List

import numpy as np

from utils.errors import DomainError
from wing.models import MaterialConfig, WingPhenotype

MM = 1e-3


def wing_span(wing: WingPhenotype) -> float:
    """
    Размах крыла - сумма шагов всех лопастей.

    Args:
        wing: Фенотип крыла

    Returns:
        float: Размах в мм
    """
    return wing.span


def compute_cms(blade_count: int, span: float, blade_max: int, span_max: float) -> float:
    """
    Морфологическая сложность симуляции C_MS.

    Args:
        blade_count: Число лопастей B
        span: Размах S (мм)
        blade_max: Нормирующий максимум B_max
        span_max: Нормирующий максимум S_max (мм)

    Returns:
        float: Значение в (0, 1]

    Raises:
        DomainError: Если B или S вне [1, B_max] / (0, S_max]
    """
    if blade_max < 1 or span_max <= 0:
        raise DomainError(f"максимумы должны быть положительными: B_max={blade_max}, S_max={span_max}")
    if not 1 <= blade_count <= blade_max:
        raise DomainError(f"B={blade_count} вне диапазона [1, {blade_max}]")
    if not 0 < span <= span_max:
        raise DomainError(f"S={span} вне диапазона (0, {span_max}]")
    return 0.5 * (blade_count / blade_max + span / span_max)


@dataclass(frozen=True)
class BladeMass:
    """
    Масса лопасти и тензор инерции пластины относительно её центра.

    Оси тензора - локальные оси лопасти: x - нормаль, y - размах, z - вверх
    (хорда свисает вдоль -z). Единицы СИ.
    """
    mass: float
    inertia: np.ndarray
    skin_mass: float
    spar_mass: float


def wing_mass_model(wing: WingPhenotype, material: MaterialConfig) -> List[BladeMass]:
    """
    Масса и инерция каждой лопасти.

    Масса = плёнка (плотность × хорда × шаг) + лонжерон (погонная плотность × шаг).
    Инерция - формулы тонкой прямоугольной пластины шириной dr и высотой c.

    Args:
        wing: Фенотип крыла
        material: Материалы

    Returns:
        List[BladeMass]: По одной записи на лопасть, от корня к законцовке
    """
    result = []
    for blade in wing.blades:
        width = blade.span_offset * MM
        chord = blade.chord * MM
        skin = material.skin_areal_density * chord * width
        spar = material.spar_linear_density * width
        mass = skin + spar
        inertia = np.diag([
            mass * (width ** 2 + chord ** 2) / 12.0,
            mass * chord ** 2 / 12.0,
            mass * width ** 2 / 12.0,
        ])
        result.append(BladeMass(mass=mass, inertia=inertia, skin_mass=skin, spar_mass=spar))
    return result


def total_mass(wing: WingPhenotype, material: MaterialConfig) -> float:
    """Полная масса крыла (кг)"""
    return math.fsum(part.mass for part in wing_mass_model(wing, material))
