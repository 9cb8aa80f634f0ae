"""
Настройки приложения WingScout

Этот файл загружает переменные окружения из .env файла
(pydantic-settings читает его через python-dotenv)
и собирает их в одном объекте Settings.

Здесь только настройки процесса (куда писать результаты, сколько
процессов, уровень логов). Параметры эксперимента живут в
config/experiment.py.
"""

from typing import Optional
from pydantic_settings import BaseSettings
from pydantic import Field


class Settings(BaseSettings):
    """
    Настройки процесса WingScout.

    Значения берутся из переменных окружения или .env,
    pydantic проверяет типы и границы (workers ≥ 1).
    """

    # Куда складывать каталоги запусков по умолчанию
    output_root: str = Field("runs", alias="WINGSCOUT_OUTPUT_ROOT")

    # Сколько процессов считают симуляции (1 = в текущем процессе)
    workers: int = Field(1, ge=1, alias="WINGSCOUT_WORKERS")

    # Своя таблица аэродинамических коэффициентов (CSV: alpha_deg, cl, cd)
    coeff_table: Optional[str] = Field(None, alias="WINGSCOUT_COEFF_TABLE")

    # Общие
    debug: bool = Field(False, alias="DEBUG")
    log_level: str = Field("INFO", alias="LOG_LEVEL")

    class Config:
        env_file = ".env"  # Читать из .env файла
        env_file_encoding = "utf-8"
        case_sensitive = False
        extra = "ignore"


# Кэш настроек (см. reset_settings)
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Общий экземпляр настроек, создаётся при первом вызове.

    Returns:
        Settings: Экземпляр настроек
    """
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Сбросить кэш настроек (нужно тестам, которые меняют окружение)"""
    global _settings
    _settings = None
