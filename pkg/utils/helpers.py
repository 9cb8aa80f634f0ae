"""
Вспомогательные функции для WingScout

Здесь собраны небольшие функции, которые используются
в разных частях приложения (разбор чисел, единицы измерения).
"""

import math
from typing import Any, Iterable, List, Tuple

# 1 грамм-сила в миллиньютонах (округление, принятое в отчётах)
GRAM_FORCE_MN = 9.81


def grams_to_newtons(grams: float) -> float:
    """Перевести граммы-силы в ньютоны"""
    return grams * GRAM_FORCE_MN / 1000.0


def newtons_to_grams(newtons: float) -> float:
    """Перевести ньютоны в граммы-силы"""
    return newtons * 1000.0 / GRAM_FORCE_MN


def parse_float(value: Any, field: str) -> float:
    """
    Строго преобразовать значение в конечный float.

    Args:
        value: Значение из файла (строка или число)
        field: Имя поля для сообщения об ошибке

    Returns:
        float: Преобразованное значение

    Raises:
        ValueError: Если значение пустое, не число или не конечное
    """
    try:
        result = float(value)
    except (ValueError, TypeError):
        raise ValueError(f"поле '{field}': ожидалось число, получено {value!r}")
    if not math.isfinite(result):
        raise ValueError(f"поле '{field}': значение должно быть конечным, получено {value!r}")
    return result


def parse_int(value: Any, field: str) -> int:
    """Строго преобразовать значение в целое (допускается запись вида '3.0')"""
    number = parse_float(value, field)
    if number != int(number):
        raise ValueError(f"поле '{field}': ожидалось целое, получено {value!r}")
    return int(number)


def data_line_numbers(lines: Iterable[str]) -> List[int]:
    """
    Номера строк файла (с 1), которые содержат данные.

    Пропускаются пустые строки и комментарии '#'. Первая строка данных - заголовок,
    поэтому запись i таблицы лежит в строке result[i + 1].
    """
    numbers = []
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        numbers.append(number)
    return numbers


def clamp(value: float, bounds: Tuple[float, float]) -> float:
    """Ограничить значение диапазоном [lo, hi]"""
    lo, hi = bounds
    return min(max(value, lo), hi)
