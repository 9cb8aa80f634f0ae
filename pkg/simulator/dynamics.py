"""
Динамика шарнирной цепочки лопастей

Крыло - цепочка жёстких пластин. Корень вращается вокруг вертикали z
по заданному закону, каждая лопасть соединена с внутренним соседом
двухосным упругим шарниром:
- изгиб - поворот вокруг локальной оси z родителя,
- кручение - поворот вокруг изогнутой оси размаха (локальная y).

Локальные оси лопасти: x - нормаль пластины, y - размах (лонжерон по передней
кромке), хорда свисает вдоль -z. Ориентация лопасти i: R_i = R_p·Rz(β_i)·Ry(φ_i).

Обобщённые координаты q = [θ, β0, φ0, β1, φ1, ...]. Уравнения движения
собираются через якобианы центров лопастей (M·q̈ + h = Q), силы упругости и
демпфирования шарниров входят в шаг неявно, угол корня задаётся аналитически.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from simulator.aerodynamics import BladeWrench, quasistatic_wrenches
from simulator.coefficients import CoefficientTable, default_table
from simulator.settings import FlapProfile, SimConfig
from utils.errors import SimulationAbort
from wing.geometry import MM, BladeMass
from wing.models import WingPhenotype

logger = logging.getLogger(__name__)

E_Z = np.array([0.0, 0.0, 1.0])


def rot_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rot_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


@dataclass(frozen=True)
class WingState:
    """
    Состояние крыла

    q, qd - обобщённые координаты и скорости [θ, β0, φ0, β1, φ1, ...]:
    θ - угол корня, β - изгиб, φ - кручение шарнира i.
    """
    time: float
    q: np.ndarray
    qd: np.ndarray

    @classmethod
    def initial(cls, blade_count: int, profile: FlapProfile, time: float = 0.0) -> "WingState":
        """Шарниры не отклонены, корень на заданном законе движения"""
        q = np.zeros(1 + 2 * blade_count)
        qd = np.zeros(1 + 2 * blade_count)
        q[0] = profile.angle(time)
        qd[0] = profile.rate(time)
        return cls(time=time, q=q, qd=qd)

    @property
    def blade_count(self) -> int:
        return (len(self.q) - 1) // 2

    @property
    def root_angle(self) -> float:
        return float(self.q[0])

    @property
    def root_rate(self) -> float:
        return float(self.qd[0])

    @property
    def bend(self) -> np.ndarray:
        return self.q[1::2]

    @property
    def twist(self) -> np.ndarray:
        return self.q[2::2]

    @property
    def bend_rate(self) -> np.ndarray:
        return self.qd[1::2]

    @property
    def twist_rate(self) -> np.ndarray:
        return self.qd[2::2]


@dataclass(frozen=True)
class ChainKinematics:
    """Положения, ориентации, якобианы и скорости всех лопастей"""
    rotation: np.ndarray       # (B, 3, 3)
    origin: np.ndarray         # (B, 3) положение шарнира лопасти
    centroid: np.ndarray       # (B, 3)
    bend_axis: np.ndarray      # (B, 3)
    twist_axis: np.ndarray     # (B, 3)
    jv: np.ndarray             # (B, 3, n) якобиан скорости центра
    jw: np.ndarray             # (B, 3, n) якобиан угловой скорости
    velocity: np.ndarray       # (B, 3)
    omega: np.ndarray          # (B, 3)
    omega_parent: np.ndarray   # (B, 3)
    omega_mid: np.ndarray      # (B, 3) после изгиба, до кручения


@dataclass(frozen=True)
class ChainDynamics:
    """Результат решения уравнений движения на начало шага"""
    accel: np.ndarray          # q̈ (n,)
    drive_torque: float        # момент привода вокруг z, Н·м
    base_force: np.ndarray     # сила крыла на основание (3,), Н
    base_torque: np.ndarray    # момент крыла на основание относительно корня (3,), Н·м
    aero: BladeWrench
    kinematics: ChainKinematics
    mass_matrix: np.ndarray


@dataclass(frozen=True)
class EnergyBreakdown:
    kinetic: float
    spring: float
    gravity: float

    @property
    def total(self) -> float:
        return self.kinetic + self.spring + self.gravity


@dataclass(frozen=True)
class PowerFlow:
    """Мощности, меняющие механическую энергию крыла, Вт"""
    drive: float       # привод корня
    aero: float        # работа аэродинамических сил и моментов
    damping: float     # потери в шарнирах, ≤ 0

    @property
    def total(self) -> float:
        return self.drive + self.aero + self.damping


class WingChain:
    """
    Модель крыла для интегратора

    Создаётся один раз на симуляцию: переводит фенотип в СИ,
    хранит массы, инерции и жёсткости.

    Args:
        wing: Фенотип крыла
        masses: Массы и инерции лопастей (wing_mass_model)
        profile: Движение корня
        config: Настройки симуляции
        table: Таблица коэффициентов (по умолчанию встроенная)
    """

    def __init__(self, wing: WingPhenotype, masses: List[BladeMass], profile: FlapProfile,
                 config: SimConfig, table: Optional[CoefficientTable] = None):
        if len(masses) != wing.blade_count:
            raise ValueError(f"масс {len(masses)}, а лопастей {wing.blade_count}")
        self.wing = wing
        self.profile = profile
        self.config = config
        self.table = table or default_table()

        self.blade_count = wing.blade_count
        self.size = 1 + 2 * self.blade_count
        self.mass = np.array([part.mass for part in masses])
        self.inertia = np.stack([part.inertia for part in masses])
        self.chord = np.array([blade.chord for blade in wing.blades]) * MM
        self.width = np.array([blade.span_offset for blade in wing.blades]) * MM

        zeros = np.zeros(self.blade_count)
        self.centroid_local = np.column_stack([zeros, self.width / 2.0, -self.chord / 2.0])
        if config.pressure_point == "quarter_chord":
            self.pressure_offset = np.column_stack([zeros, zeros, self.chord / 4.0])
        else:
            self.pressure_offset = None

        self.stiffness = np.empty(2 * self.blade_count)
        self.stiffness[0::2] = [blade.k_bend for blade in wing.blades]
        self.stiffness[1::2] = [blade.k_twist for blade in wing.blades]
        self.gravity = np.array([0.0, 0.0, -config.gravity])

        # Лопасть b зависит от угла корня и шарниров 0..b
        self.mask = np.zeros((self.blade_count, self.size))
        self.mask[:, 0] = 1.0
        for b in range(self.blade_count):
            self.mask[b, 1:3 + 2 * b] = 1.0

    @property
    def weight(self) -> float:
        """Вес крыла, Н"""
        return float(np.sum(self.mass) * self.config.gravity)

    def kinematics(self, state: WingState) -> ChainKinematics:
        q, qd = state.q, state.qd
        count = self.blade_count
        rotation = np.empty((count, 3, 3))
        origin = np.empty((count, 3))
        bend_axis = np.empty((count, 3))
        twist_axis = np.empty((count, 3))

        parent = rot_z(q[0])
        point = np.zeros(3)
        for i in range(count):
            mid = parent @ rot_z(q[1 + 2 * i])
            rot = mid @ rot_y(q[2 + 2 * i])
            bend_axis[i] = parent[:, 2]
            twist_axis[i] = mid[:, 1]
            origin[i] = point
            rotation[i] = rot
            point = point + self.width[i] * rot[:, 1]
            parent = rot

        centroid = origin + np.einsum("bij,bj->bi", rotation, self.centroid_local)

        axes = np.empty((self.size, 3))
        axes[0] = E_Z
        axes[1::2] = bend_axis
        axes[2::2] = twist_axis
        pivots = np.zeros((self.size, 3))
        pivots[1::2] = origin
        pivots[2::2] = origin

        jv = np.cross(axes[None, :, :], centroid[:, None, :] - pivots[None, :, :])
        jv = (jv * self.mask[:, :, None]).transpose(0, 2, 1)
        jw = (axes[None, :, :] * self.mask[:, :, None]).transpose(0, 2, 1)

        omega_root = qd[0] * E_Z
        bend_terms = qd[1::2, None] * bend_axis
        twist_terms = qd[2::2, None] * twist_axis
        omega = omega_root + np.cumsum(bend_terms + twist_terms, axis=0)
        omega_parent = np.vstack([omega_root[None, :], omega[:-1]])

        return ChainKinematics(
            rotation=rotation,
            origin=origin,
            centroid=centroid,
            bend_axis=bend_axis,
            twist_axis=twist_axis,
            jv=jv,
            jw=jw,
            velocity=jv @ qd,
            omega=omega,
            omega_parent=omega_parent,
            omega_mid=omega_parent + bend_terms,
        )

    def world_inertia(self, kin: ChainKinematics) -> np.ndarray:
        return kin.rotation @ self.inertia @ kin.rotation.transpose(0, 2, 1)

    def mass_matrix(self, kin: ChainKinematics, inertia_world: np.ndarray) -> np.ndarray:
        linear = np.einsum("bkn,bkm->nm", kin.jv * self.mass[:, None, None], kin.jv)
        angular = np.einsum("bkn,bkm->nm", kin.jw, inertia_world @ kin.jw)
        return linear + angular

    def _bias_accelerations(self, kin: ChainKinematics, qd: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Ускорения центров и угловые ускорения лопастей при q̈ = 0"""
        alpha_terms = (qd[1::2, None] * np.cross(kin.omega_parent, kin.bend_axis)
                       + qd[2::2, None] * np.cross(kin.omega_mid, kin.twist_axis))
        alpha0 = np.cumsum(alpha_terms, axis=0)

        origin_acc = np.zeros((self.blade_count, 3))
        if self.blade_count > 1:
            link = kin.origin[1:] - kin.origin[:-1]
            w = kin.omega[:-1]
            link_acc = np.cross(alpha0[:-1], link) + np.cross(w, np.cross(w, link))
            origin_acc[1:] = np.cumsum(link_acc, axis=0)

        arm = kin.centroid - kin.origin
        acc0 = origin_acc + np.cross(alpha0, arm) + np.cross(kin.omega, np.cross(kin.omega, arm))
        return acc0, alpha0

    def dynamics(self, state: WingState) -> ChainDynamics:
        """
        Решить уравнения движения на начало шага.

        Аэродинамика, гравитация и пружины берутся в текущем состоянии,
        упругость и демпфирование шарниров - неявно по шагу dt.
        """
        kin = self.kinematics(state)
        qd = state.qd
        config = self.config

        aero = quasistatic_wrenches(kin.velocity, kin.rotation, kin.omega, self.chord, self.width,
                                    self.table, config.rho_air, self.pressure_offset)
        inertia_world = self.world_inertia(kin)
        mass_matrix = self.mass_matrix(kin, inertia_world)
        acc0, alpha0 = self._bias_accelerations(kin, qd)

        ext_force = self.mass[:, None] * self.gravity + aero.force
        spin = np.cross(kin.omega, np.einsum("bij,bj->bi", inertia_world, kin.omega))
        bias = (np.einsum("bkn,bk->n", kin.jv, self.mass[:, None] * acc0 - ext_force)
                + np.einsum("bkn,bk->n", kin.jw,
                            np.einsum("bij,bj->bi", inertia_world, alpha0) + spin - aero.torque))

        dt = config.dt
        damping = config.joint_damping
        theta_acc = self.profile.acceleration(state.time)
        joints, rates = state.q[1:], qd[1:]

        lhs = mass_matrix[1:, 1:] + np.diag(dt * damping + dt * dt * self.stiffness)
        rhs = (-self.stiffness * (joints + dt * rates) - damping * rates
               - bias[1:] - mass_matrix[1:, 0] * theta_acc)
        try:
            joint_acc = np.linalg.solve(lhs, rhs)
        except np.linalg.LinAlgError as e:
            raise SimulationAbort(state.time, None, f"вырожденная матрица масс: {e}") from None

        accel = np.concatenate(([theta_acc], joint_acc))
        drive_torque = float(mass_matrix[0] @ accel + bias[0])

        acc = acc0 + kin.jv @ accel
        ang_acc = alpha0 + kin.jw @ accel
        reaction = ext_force - self.mass[:, None] * acc
        moment = (np.cross(kin.centroid, reaction) + aero.torque
                  - np.einsum("bij,bj->bi", inertia_world, ang_acc) - spin)

        return ChainDynamics(
            accel=accel,
            drive_torque=drive_torque,
            base_force=reaction.sum(axis=0),
            base_torque=moment.sum(axis=0),
            aero=aero,
            kinematics=kin,
            mass_matrix=mass_matrix,
        )

    def advance(self, state: WingState, next_time: Optional[float] = None) -> Tuple[WingState, ChainDynamics, int]:
        """
        Один шаг полунеявного Эйлера: сначала скорости, потом углы.

        Args:
            state: Состояние на начало шага
            next_time: Время конца шага (по умолчанию state.time + dt)

        Returns:
            Tuple: (новое состояние, динамика на начало шага, число срабатываний упора)

        Raises:
            SimulationAbort: Состояние перестало быть конечным
        """
        dyn = self.dynamics(state)
        dt = self.config.dt
        t_next = state.time + dt if next_time is None else next_time

        qd = state.qd.copy()
        q = state.q.copy()
        qd[1:] += dt * dyn.accel[1:]
        q[1:] += dt * qd[1:]
        q[0] = self.profile.angle(t_next)
        qd[0] = self.profile.rate(t_next)

        joints, rates = q[1:], qd[1:]
        hit = np.abs(joints) > self.config.hard_stop
        hits = int(np.count_nonzero(hit))
        if hits:
            joints[hit] = np.sign(joints[hit]) * self.config.hard_stop
            rates[hit] = 0.0
            logger.debug(f"t={t_next:.5f}: упор сработал на {hits} осях")

        bad = ~(np.isfinite(joints) & np.isfinite(rates))
        if bad.any() or not np.all(np.isfinite(dyn.base_force)):
            blade = int(np.argmax(bad)) // 2 if bad.any() else None
            raise SimulationAbort(t_next, blade, "нечисловое состояние")

        return WingState(time=t_next, q=q, qd=qd), dyn, hits

    def energy(self, state: WingState) -> EnergyBreakdown:
        kin = self.kinematics(state)
        mass_matrix = self.mass_matrix(kin, self.world_inertia(kin))
        return EnergyBreakdown(
            kinetic=0.5 * float(state.qd @ mass_matrix @ state.qd),
            spring=0.5 * float(np.sum(self.stiffness * state.q[1:] ** 2)),
            gravity=float(-np.sum(self.mass * (kin.centroid @ self.gravity))),
        )

    def power_flow(self, state: WingState, dyn: ChainDynamics) -> PowerFlow:
        """
        Баланс мощности в состоянии state: dE/dt = drive + aero + damping.

        Гравитация и пружины уже входят в EnergyBreakdown, поэтому здесь их нет.

        Args:
            state: Состояние
            dyn: Динамика того же состояния (WingChain.dynamics или advance)
        """
        kin = dyn.kinematics
        rates = state.qd[1:]
        return PowerFlow(
            drive=dyn.drive_torque * float(state.qd[0]),
            aero=float(np.sum(dyn.aero.force * kin.velocity) + np.sum(dyn.aero.torque * kin.omega)),
            damping=-self.config.joint_damping * float(rates @ rates),
        )


def step(state: WingState, wing: WingPhenotype, masses: List[BladeMass], profile: FlapProfile,
         config: SimConfig, table: Optional[CoefficientTable] = None) -> WingState:
    """
    Продвинуть состояние крыла на один шаг dt.

    Удобная обёртка для одиночных шагов; в цикле симуляции используется
    WingChain.advance, чтобы не пересобирать модель на каждом шаге.

    Raises:
        SimulationAbort: Состояние перестало быть конечным
    """
    chain = WingChain(wing, masses, profile, config, table)
    new_state, _, _ = chain.advance(state)
    return new_state


def mechanical_energy(state: WingState, wing: WingPhenotype, masses: List[BladeMass],
                      profile: FlapProfile, config: SimConfig) -> EnergyBreakdown:
    """Кинетическая, упругая и потенциальная энергия крыла в состоянии state"""
    return WingChain(wing, masses, profile, config).energy(state)
