"""
Квазистатические аэродинамические силы на лопасти

Для каждой лопасти (плоская пластина, хорда c, ширина dr):
- U - скорость центра в плоскости, перпендикулярной размаху
- α = atan2(u·n̂, -u·ĉ), где ĉ - от передней кромки к задней, n̂ = ĉ × ŝ
- поступательная сила: ½ρ(c·dr)U²·(C_L·e_L - C_D·û), e_L = û × ŝ
- вращательная сила: C_R·ρ·U·c²·dr·ω_pitch вдоль n̂, C_R = π(0.75 - x̂₀),
  ω_pitch - скорость вращения вокруг размаха (ось на передней кромке, x̂₀ = 0)

Все функции работают сразу со всеми лопастями (массивы формы (B, 3)).
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from simulator.coefficients import CoefficientTable, lookup_many

# Положение оси вращения в долях хорды от передней кромки
PITCH_AXIS = 0.0
ROTATIONAL_COEFFICIENT = math.pi * (0.75 - PITCH_AXIS)


@dataclass(frozen=True)
class BladeWrench:
    """Сила и момент (относительно центра лопасти) плюс нормальная и осевая составляющие"""
    force: np.ndarray
    torque: np.ndarray
    normal: Union[np.ndarray, float]
    axial: Union[np.ndarray, float]


def quasistatic_wrenches(velocity: np.ndarray, rotation: np.ndarray, omega: np.ndarray,
                         chord: np.ndarray, width: np.ndarray, table: CoefficientTable,
                         rho: float, pressure_offset: Optional[np.ndarray] = None) -> BladeWrench:
    """
    Аэродинамика для всех лопастей сразу.

    Args:
        velocity: Скорости центров лопастей (B, 3), м/с
        rotation: Матрицы ориентации лопастей (B, 3, 3); столбцы - оси x (нормаль), y (размах), z
        omega: Угловые скорости лопастей (B, 3), рад/с
        chord: Хорды (B,), м
        width: Ширины по размаху (B,), м
        table: Таблица коэффициентов
        rho: Плотность воздуха, кг/м³
        pressure_offset: Точка приложения силы относительно центра в локальных осях (B, 3);
            None - сила в центре, момента нет

    Returns:
        BladeWrench: Массивы (B, 3) и (B,)
    """
    normal_axis = rotation[:, :, 0]
    span_axis = rotation[:, :, 1]
    chord_axis = -rotation[:, :, 2]

    u = velocity - np.sum(velocity * span_axis, axis=1)[:, None] * span_axis
    speed = np.sqrt(np.sum(u * u, axis=1))
    moving = speed > 0.0
    u_hat = np.zeros_like(u)
    u_hat[moving] = u[moving] / speed[moving, None]

    alpha = np.arctan2(np.sum(u * normal_axis, axis=1), -np.sum(u * chord_axis, axis=1))
    cl, cd = lookup_many(table, alpha)
    lift_dir = np.cross(u_hat, span_axis)

    area = chord * width
    dynamic = 0.5 * rho * area * speed ** 2
    translational = dynamic[:, None] * (cl[:, None] * lift_dir - cd[:, None] * u_hat)

    pitch_rate = np.sum(omega * span_axis, axis=1)
    rotational = (ROTATIONAL_COEFFICIENT * rho * speed * chord ** 2 * width * pitch_rate)[:, None] * normal_axis

    force = translational + rotational
    if pressure_offset is None:
        torque = np.zeros_like(force)
    else:
        arm = np.einsum("bij,bj->bi", rotation, pressure_offset)
        torque = np.cross(arm, force)

    return BladeWrench(
        force=force,
        torque=torque,
        normal=np.sum(force * normal_axis, axis=1),
        axial=np.sum(force * chord_axis, axis=1),
    )


def blade_quasistatic_wrench(velocity, rotation, omega, chord: float, width: float,
                             table: CoefficientTable, rho: float,
                             pressure_offset=None) -> BladeWrench:
    """
    Аэродинамика одной лопасти.

    Args:
        velocity: Скорость центра (3,), м/с
        rotation: Ориентация лопасти (3, 3)
        omega: Угловая скорость (3,), рад/с
        chord: Хорда c, м
        width: Ширина dr, м
        table: Таблица коэффициентов
        rho: Плотность воздуха
        pressure_offset: Точка приложения силы относительно центра (локальные оси) или None

    Returns:
        BladeWrench: сила (3,), момент относительно центра (3,), нормальная и осевая составляющие
    """
    if chord <= 0 or width <= 0:
        raise ValueError(f"хорда и ширина должны быть положительными: c={chord}, dr={width}")
    offset = None if pressure_offset is None else np.asarray(pressure_offset, dtype=float)[None, :]
    wrench = quasistatic_wrenches(
        np.asarray(velocity, dtype=float)[None, :],
        np.asarray(rotation, dtype=float)[None, :, :],
        np.asarray(omega, dtype=float)[None, :],
        np.array([chord], dtype=float),
        np.array([width], dtype=float),
        table,
        rho,
        offset,
    )
    return BladeWrench(force=wrench.force[0], torque=wrench.torque[0],
                       normal=float(wrench.normal[0]), axial=float(wrench.axial[0]))
