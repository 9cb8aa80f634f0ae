"""
Параметры симуляции

FlapProfile - закон движения корня крыла (синус вокруг вертикали),
SimConfig - шаг, длительность, воздух, гравитация, демпфирование шарниров,
окна усреднения.
"""

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, field_validator

from utils.errors import ConfigError

# Не меньше 200 шагов на взмах
MIN_STEPS_PER_CYCLE = 200
# Допуск на "целое" число шагов в цикле (ошибки округления 1/(f·dt))
STEP_TOLERANCE = 1e-9
MAX_AMPLITUDE = math.radians(70.0)


class FlapProfile(BaseModel):
    """
    Движение корня: θ(t) = A·sin(2πft) вокруг оси z

    Отрицательная амплитуда - зеркальный взмах.
    """
    model_config = ConfigDict(frozen=True)

    frequency: PositiveFloat = 5.0                      # Гц
    amplitude: float = math.radians(40.0)               # рад

    @field_validator("amplitude")
    @classmethod
    def _amplitude_range(cls, value: float) -> float:
        if not math.isfinite(value) or abs(value) > MAX_AMPLITUDE:
            raise ValueError(f"|амплитуда| должна быть ≤ 70° ({MAX_AMPLITUDE:.4f} рад), получено {value}")
        return value

    @property
    def omega(self) -> float:
        return 2.0 * math.pi * self.frequency

    def angle(self, t: float) -> float:
        return self.amplitude * math.sin(self.omega * t)

    def rate(self, t: float) -> float:
        return self.amplitude * self.omega * math.cos(self.omega * t)

    def acceleration(self, t: float) -> float:
        return -self.amplitude * self.omega ** 2 * math.sin(self.omega * t)


class SimConfig(BaseModel):
    """Настройки интегратора и среды"""
    model_config = ConfigDict(frozen=True)

    dt: PositiveFloat = 1e-4                  # с
    duration: PositiveFloat = 2.0             # с
    rho_air: PositiveFloat = 1.225            # кг/м³
    gravity: float = Field(9.81, ge=0.0)      # м/с², направлена по -z
    joint_damping: float = Field(1e-5, ge=0.0)    # Н·м·с/рад на каждую ось шарнира
    settle_cycles: int = Field(5, ge=0)
    average_cycles: PositiveInt = 5
    pressure_point: Literal["centroid", "quarter_chord"] = "centroid"
    hard_stop: PositiveFloat = math.pi / 2.0  # рад

    def step_count(self) -> int:
        return int(round(self.duration / self.dt))


def steps_per_cycle(config: SimConfig, profile: FlapProfile) -> int:
    return int(round(1.0 / (profile.frequency * config.dt)))


def validate_timing(config: SimConfig, profile: FlapProfile) -> None:
    """
    Проверить, что шаг и длительность подходят к частоте взмахов.

    Raises:
        ConfigError: Меньше 200 шагов на цикл, нецелое число шагов на цикл
            или длительность короче settle+average циклов
    """
    if config.dt * profile.frequency > 1.0 / MIN_STEPS_PER_CYCLE * (1.0 + 1e-9):
        raise ConfigError(
            f"sim.dt={config.dt} слишком велик: нужно не меньше {MIN_STEPS_PER_CYCLE} шагов "
            f"на цикл при {profile.frequency} Гц"
        )
    # окна усреднения режутся по целым циклам
    exact = 1.0 / (profile.frequency * config.dt)
    if abs(exact - round(exact)) > STEP_TOLERANCE * exact:
        raise ConfigError(
            f"sim.dt={config.dt}: на цикл {profile.frequency} Гц приходится {exact:.4f} шагов, "
            f"нужно целое число"
        )
    cycles = config.settle_cycles + config.average_cycles
    if config.step_count() < cycles * steps_per_cycle(config, profile):
        raise ConfigError(
            f"sim.duration={config.duration} с короче {cycles} циклов "
            f"({cycles / profile.frequency:.3f} с при {profile.frequency} Гц)"
        )
