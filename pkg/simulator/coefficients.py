"""
Таблица аэродинамических коэффициентов плоской пластины

CSV с колонками alpha_deg, cl, cd для α от 0° до 180°.
Отрицательные углы получаются по симметрии: C_L нечётная, C_D чётная.
Между точками - линейная интерполяция.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd

from utils.errors import FormatError

logger = logging.getLogger(__name__)

DEFAULT_TABLE_PATH = Path(__file__).resolve().parent.parent / "data" / "flat_plate_coeffs.csv"

_default_table: Optional["CoefficientTable"] = None


@dataclass(frozen=True)
class CoefficientTable:
    """Точки таблицы (α в градусах, строго возрастает от 0 до 180)"""
    alpha_deg: np.ndarray
    cl: np.ndarray
    cd: np.ndarray
    source: str = ""

    def __post_init__(self):
        alpha = self.alpha_deg
        if alpha.ndim != 1 or len(alpha) < 2 or not (len(alpha) == len(self.cl) == len(self.cd)):
            raise ValueError("таблица коэффициентов: колонки разной длины или меньше двух точек")
        if not np.all(np.isfinite(alpha)) or not np.all(np.isfinite(self.cl)) or not np.all(np.isfinite(self.cd)):
            raise ValueError("таблица коэффициентов: нечисловые значения")
        if np.any(np.diff(alpha) <= 0):
            raise ValueError("таблица коэффициентов: alpha_deg должен строго возрастать")
        if alpha[0] != 0.0 or alpha[-1] != 180.0:
            raise ValueError("таблица коэффициентов должна покрывать α от 0° до 180°")
        if np.any(self.cd < 0):
            raise ValueError("таблица коэффициентов: C_D не может быть отрицательным")
        if self.cl[0] != 0.0 or self.cl[-1] != 0.0:
            raise ValueError("таблица коэффициентов: C_L(0°) и C_L(180°) должны быть 0")


def load_coefficients(path: Union[str, Path]) -> CoefficientTable:
    """
    Прочитать таблицу коэффициентов из CSV (строки '#' - комментарии).

    Raises:
        FormatError: Нет нужных колонок или таблица нарушает правила
    """
    path = Path(path)
    frame = pd.read_csv(path, comment="#")
    missing = {"alpha_deg", "cl", "cd"} - set(frame.columns)
    if missing:
        raise FormatError(f"{path}: нет колонок {sorted(missing)}")
    try:
        return CoefficientTable(
            alpha_deg=frame["alpha_deg"].to_numpy(dtype=float),
            cl=frame["cl"].to_numpy(dtype=float),
            cd=frame["cd"].to_numpy(dtype=float),
            source=str(path),
        )
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from None


def default_table() -> CoefficientTable:
    """Таблица из data/flat_plate_coeffs.csv (читается один раз)"""
    global _default_table
    if _default_table is None:
        _default_table = load_coefficients(DEFAULT_TABLE_PATH)
        logger.debug(f"Загружена таблица коэффициентов: {DEFAULT_TABLE_PATH}")
    return _default_table


def lookup_many(table: CoefficientTable, alpha: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Коэффициенты для массива углов (рад).

    Угол сворачивается в [-π, π], далее |α| ищется в таблице,
    знак C_L восстанавливается по знаку α.
    """
    alpha = np.asarray(alpha, dtype=float)
    folded = alpha - 2.0 * np.pi * np.round(alpha / (2.0 * np.pi))
    degrees = np.degrees(np.abs(folded))
    cl = np.sign(folded) * np.interp(degrees, table.alpha_deg, table.cl)
    cd = np.interp(degrees, table.alpha_deg, table.cd)
    return cl, cd


def coeff_lookup(table: CoefficientTable, alpha: float) -> Tuple[float, float]:
    """
    C_L и C_D для угла атаки.

    Args:
        table: Таблица коэффициентов
        alpha: Угол атаки (рад), любой конечный

    Returns:
        Tuple[float, float]: (C_L, C_D)
    """
    if not np.isfinite(alpha):
        raise ValueError(f"угол атаки должен быть конечным: {alpha}")
    cl, cd = lookup_many(table, np.array([alpha]))
    return float(cl[0]), float(cd[0])
