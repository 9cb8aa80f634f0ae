"""
Исключения WingScout

Одна небольшая иерархия, чтобы CLI мог превратить любую ошибку
в правильный код выхода (см. main.py).
"""

from typing import Any, Optional


class WingScoutError(Exception):
    """Базовое исключение проекта"""


class DomainError(WingScoutError, ValueError):
    """Аргументы вне области определения метрики (C_MS, STR, полиномиальная подгонка)"""


class InfeasibleDesignError(DomainError):
    """
    Крыло нельзя изготовить.

    Хранит FeasibilityReport, чтобы вызывающий код мог показать список нарушений.
    """

    def __init__(self, report: Any, message: Optional[str] = None):
        self.report = report
        if message is None:
            lines = [f"{v.parameter}={v.actual:.6g} (ближайшее допустимое {v.nearest:.6g})"
                     for v in report.violations]
            message = "Крыло не проходит проверку технологичности: " + "; ".join(lines)
        super().__init__(message)


class FormatError(WingScoutError, ValueError):
    """Битый документ (JSON генотипа, CSV переносов и т.д.), сообщение содержит место ошибки"""


class ConfigError(WingScoutError, ValueError):
    """Ошибка конфигурации"""


class SimulationAbort(WingScoutError, RuntimeError):
    """
    Симуляция остановлена: состояние перестало быть конечным.

    Args:
        time: Момент времени (с), на котором обнаружена проблема
        blade_index: Индекс лопасти (None, если проблема не привязана к лопасти)
    """

    def __init__(self, time: float, blade_index: Optional[int], detail: str = ""):
        self.time = time
        self.blade_index = blade_index
        where = f"лопасть {blade_index}" if blade_index is not None else "корень"
        text = f"Симуляция прервана на t={time:.6f} с ({where})"
        if detail:
            text += f": {detail}"
        super().__init__(text)


def format_error_from_validation(exc: Any, source: str) -> FormatError:
    """
    Превратить pydantic.ValidationError в FormatError.

    В сообщение попадает путь до поля (loc) и значение, на котором споткнулся разбор.

    Args:
        exc: pydantic.ValidationError
        source: Что разбирали (имя файла или типа документа)

    Returns:
        FormatError: Готовое исключение (его нужно поднять)
    """
    parts = []
    for error in exc.errors():
        location = ".".join(str(item) for item in error.get("loc", ())) or "<document>"
        text = f"{location}: {error.get('msg', 'invalid')}"
        if "input" in error and not isinstance(error["input"], (dict, list)):
            text += f" (получено {error['input']!r})"
        parts.append(text)
    return FormatError(f"{source}: " + "; ".join(parts))
