"""
Запуск симуляции крыла и сбор метрик

simulate() интегрирует движение крыла в течение duration, отбрасывает
первые settle_cycles взмахов и усредняет по последним average_cycles:
- подъёмная сила - вертикальная реакция основания минус статический вес (тарировка)
- мощность привода - среднее max(0, τ·θ̇)
- момент привода - среднеквадратичное τ
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd

from simulator.coefficients import CoefficientTable
from simulator.dynamics import WingChain, WingState
from simulator.settings import FlapProfile, SimConfig, steps_per_cycle, validate_timing
from wing.geometry import wing_mass_model
from wing.models import MaterialConfig, WingPhenotype

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.9g"


@dataclass(frozen=True)
class SimDiagnostics:
    steps: int
    max_joint_angle: float
    hard_stop_hits: int


@dataclass(frozen=True, eq=False)
class SimResult:
    """
    Результат симуляции

    lift_mean - L_S (Н), среднее из средних по циклам;
    cycle_lifts - по одному значению на цикл окна усреднения;
    tare - статическая вертикальная реакция (вес крыла со знаком минус);
    timeseries / blade_forces - полные ряды, если симуляцию запускали с record=True.
    """
    lift_mean: float
    drive_power_mean: float
    drive_torque_rms: float
    cycle_lifts: Tuple[float, ...]
    tare: float
    diagnostics: SimDiagnostics
    timeseries: Optional[pd.DataFrame] = None
    blade_forces: Optional[pd.DataFrame] = None


def simulate(wing: WingPhenotype, material: MaterialConfig, profile: FlapProfile, config: SimConfig,
             table: Optional[CoefficientTable] = None, record: bool = False) -> SimResult:
    """
    Просимулировать взмахи крыла.

    Args:
        wing: Фенотип крыла
        material: Материалы (для масс и инерций)
        profile: Движение корня
        config: Настройки симуляции
        table: Таблица коэффициентов (по умолчанию встроенная)
        record: Сохранить полные временные ряды в результат

    Returns:
        SimResult: Средние метрики и диагностика

    Raises:
        ConfigError: Шаг или длительность не подходят к частоте
        SimulationAbort: Состояние перестало быть конечным
    """
    validate_timing(config, profile)
    chain = WingChain(wing, wing_mass_model(wing, material), profile, config, table)

    count = config.step_count()
    dt = config.dt
    blades = wing.blade_count

    times = np.arange(count) * dt
    force = np.empty((count, 3))
    torque = np.empty((count, 3))
    drive = np.empty(count)
    root_rate = np.empty(count)
    root_angle = np.empty(count)
    joints = np.empty((count, 2 * blades)) if record else None
    normal = np.empty((count, blades)) if record else None
    axial = np.empty((count, blades)) if record else None

    # Тарировка: крыло висит неподвижно в начальной позе
    still = WingState(time=0.0, q=np.zeros(1 + 2 * blades), qd=np.zeros(1 + 2 * blades))
    tare = float(chain.dynamics(still).base_force[2])

    state = WingState.initial(blades, profile)
    hits = 0
    max_angle = 0.0
    for k in range(count):
        # строка k - состояние и реакция на начало шага, t_k = k·dt
        root_angle[k] = state.q[0]
        root_rate[k] = state.qd[0]
        if record:
            joints[k] = state.q[1:]
        state, dyn, stop_hits = chain.advance(state, next_time=(k + 1) * dt)
        hits += stop_hits
        force[k] = dyn.base_force
        torque[k] = dyn.base_torque
        drive[k] = dyn.drive_torque
        if record:
            normal[k] = dyn.aero.normal
            axial[k] = dyn.aero.axial
        max_angle = max(max_angle, float(np.max(np.abs(state.q[1:]))))

    if hits:
        logger.info(f"{wing.label or 'крыло'}: упор шарниров срабатывал {hits} раз")

    spc = steps_per_cycle(config, profile)
    window = slice(count - config.average_cycles * spc, count)
    lift = force[window, 2] - tare
    cycle_lifts = tuple(float(chunk.mean()) for chunk in np.split(lift, config.average_cycles))
    power = np.maximum(0.0, drive[window] * root_rate[window])

    timeseries = None
    blade_forces = None
    if record:
        columns = {"t": times, "root_angle": root_angle,
                   "Fx": force[:, 0], "Fy": force[:, 1], "Fz": force[:, 2],
                   "Tx": torque[:, 0], "Ty": torque[:, 1], "Tz": torque[:, 2]}
        for i in range(blades):
            columns[f"twist_{i}"] = joints[:, 2 * i + 1]
            columns[f"bend_{i}"] = joints[:, 2 * i]
        timeseries = pd.DataFrame(columns)

        forces = {"t": times}
        for i in range(blades):
            forces[f"normal_{i}"] = normal[:, i]
            forces[f"axial_{i}"] = axial[:, i]
        blade_forces = pd.DataFrame(forces)

    return SimResult(
        lift_mean=float(np.mean(cycle_lifts)),
        drive_power_mean=float(power.mean()),
        drive_torque_rms=float(np.sqrt(np.mean(drive[window] ** 2))),
        cycle_lifts=cycle_lifts,
        tare=tare,
        diagnostics=SimDiagnostics(steps=count, max_joint_angle=max_angle, hard_stop_hits=hits),
        timeseries=timeseries,
        blade_forces=blade_forces,
    )


def _write_frame(frame: Optional[pd.DataFrame], path: Union[str, Path], what: str) -> Path:
    if frame is None:
        raise ValueError(f"в результате нет {what}: запустите simulate(..., record=True)")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def export_timeseries(result: SimResult, path: Union[str, Path]) -> Path:
    """
    Записать ряд реакций основания в CSV.

    Колонки: t, root_angle, Fx, Fy, Fz, Tx, Ty, Tz, twist_i, bend_i для каждого шарнира.
    Одна строка на шаг интегрирования, 9 значащих цифр.
    """
    return _write_frame(result.timeseries, path, "временного ряда")


def export_blade_forces(result: SimResult, path: Union[str, Path]) -> Path:
    """Записать нормальную и осевую аэродинамическую силу каждой лопасти (t, normal_i, axial_i)"""
    return _write_frame(result.blade_forces, path, "сил на лопастях")
