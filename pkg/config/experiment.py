"""
Загрузка конфигурации эксперимента

Конфигурация - JSON-файл (необязательный) плюс плоские переопределения
вида "sim.dt=5e-4" или "population=20". Значения переопределений
разбираются как JSON, а если не получилось - берутся строкой.
"""

import json
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Union, get_args

from pydantic import BaseModel, ValidationError

from evolution.engine import EvolutionConfig
from utils.errors import ConfigError


def parse_override(item: str) -> tuple:
    """
    Разобрать одно переопределение "ключ=значение".

    Raises:
        ConfigError: Нет знака '=' или пустой ключ
    """
    key, sep, raw = item.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigError(f"переопределение '{item}': ожидалось ключ=значение")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw.strip()
    return key, value


def _section_model(annotation: Any) -> Optional[type]:
    """Модель раздела конфигурации (в том числе внутри Optional[...])"""
    for candidate in (annotation, *get_args(annotation)):
        if isinstance(candidate, type) and issubclass(candidate, BaseModel):
            return candidate
    return None


def apply_overrides(data: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """
    Применить переопределения с точечными ключами к словарю конфигурации.

    Raises:
        ConfigError: Ключ не существует в EvolutionConfig
    """
    result = json.loads(json.dumps(data))
    for dotted, value in overrides.items():
        parts = dotted.split(".")
        model = EvolutionConfig
        node = result
        for depth, part in enumerate(parts):
            fields = model.model_fields if model is not None else {}
            if part not in fields:
                raise ConfigError(f"неизвестный ключ конфигурации '{dotted}'")
            if depth == len(parts) - 1:
                node[part] = value
                break
            model = _section_model(fields[part].annotation)
            if model is None:
                raise ConfigError(f"ключ '{dotted}': поле '{part}' не является разделом")
            if not isinstance(node.get(part), dict):
                node[part] = {}
            node = node[part]
    return result


def load_experiment(path: Optional[Union[str, Path]] = None,
                    overrides: Optional[Union[Dict[str, Any], Iterable[str]]] = None) -> EvolutionConfig:
    """
    Загрузить конфигурацию эксперимента.

    Args:
        path: JSON-файл конфигурации (None - значения по умолчанию)
        overrides: Словарь {ключ: значение} или строки "ключ=значение"

    Returns:
        EvolutionConfig: Проверенная конфигурация

    Raises:
        ConfigError: Нет файла, битый JSON, неизвестный ключ или неверное значение
    """
    data: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"файл конфигурации не найден: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: некорректный JSON (строка {e.lineno}, столбец {e.colno}): {e.msg}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: ожидался JSON-объект")

    if overrides:
        if not isinstance(overrides, dict):
            overrides = dict(parse_override(item) for item in overrides)
        data = apply_overrides(data, overrides)

    try:
        return EvolutionConfig.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        source = str(path) if path is not None else "конфигурация"
        raise ConfigError(f"{source}: {problems}") from None
