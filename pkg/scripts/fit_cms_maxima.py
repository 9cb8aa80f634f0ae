#!/usr/bin/env python3
"""
Независимая проверка метрик таблицы переносов

Не импортирует пакеты проекта: читает data/table1.csv и data/table1_metrics.csv
напрямую и
1. подбирает нормирующие максимумы B_max, S_max методом наименьших квадратов
   по опубликованной колонке C_MS (scipy.optimize.least_squares);
2. сравнивает STR и C_MS при L_max = 13.9, B_max = 5, S_max = 626;
3. выбирает степень полинома STR(C_MS) по AICc (numpy.polyfit) и ищет порог,
   где полином опускается до -0.2.

Запуск: python scripts/fit_cms_maxima.py [--data data]
Код выхода 0, если все проверки прошли.
"""

import argparse
import math
import sys
from pathlib import Path

import numpy as np
import pandas as pd
from scipy.optimize import least_squares

LIFT_MAX = 13.9
BLADE_MAX = 5
SPAN_MAX = 626.0
STR_TOLERANCE = 0.015
CMS_TOLERANCE = 0.03


def load(data_dir: Path) -> pd.DataFrame:
    transfers = pd.read_csv(data_dir / "table1.csv", comment="#")
    transfers = transfers[~transfers["label"].str.startswith("@")].astype({"B": int, "S_mm": float})
    metrics = pd.read_csv(data_dir / "table1_metrics.csv", comment="#")
    return transfers.merge(metrics, on="label", validate="one_to_one")


def fit_maxima(table: pd.DataFrame):
    def residuals(p):
        b_max, s_max = p
        return 0.5 * (table["B"] / b_max + table["S_mm"] / s_max) - table["C_MS"]

    result = least_squares(residuals, x0=[5.0, 600.0], bounds=([1.0, 1.0], [np.inf, np.inf]))
    return result.x


def aicc(rss: float, n: int, k: int) -> float:
    if n - k - 1 <= 0:
        return math.inf
    return n * math.log(rss / n) + 2 * k + 2 * k * (k + 1) / (n - k - 1)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--data", default=str(Path(__file__).resolve().parent.parent / "data"))
    args = parser.parse_args()

    table = load(Path(args.data))
    ok = True

    print("=" * 60)
    print("📐 Подбор нормирующих максимумов по опубликованной C_MS")
    print("=" * 60)
    b_fit, s_fit = fit_maxima(table)
    print(f"   МНК: B_max = {b_fit:.3f}, S_max = {s_fit:.2f} мм")
    print(f"   Используются: B_max = {BLADE_MAX}, S_max = {SPAN_MAX:g} мм")

    table["cms"] = 0.5 * (table["B"] / BLADE_MAX + table["S_mm"] / SPAN_MAX)
    table["str"] = (table["L_R_g"] - table["L_S_g"]) / LIFT_MAX
    table["cms_err"] = (table["cms"] - table["C_MS"]).abs()
    table["str_err"] = (table["str"] - table["STR"]).abs()

    worst = table.sort_values("cms_err", ascending=False).head(2)
    print("\n🔎 Наибольшие расхождения C_MS:")
    for row in worst.itertuples():
        print(f"   {row.label}: {row.cms:.3f} против {row.C_MS:.2f} (|Δ| = {row.cms_err:.3f})")
    if table["cms_err"].max() > CMS_TOLERANCE:
        print(f"   ❌ C_MS расходится больше чем на {CMS_TOLERANCE}")
        ok = False
    if table["str_err"].max() > STR_TOLERANCE:
        print(f"   ❌ STR расходится больше чем на {STR_TOLERANCE}")
        ok = False
    else:
        print(f"   ✅ STR совпадает (макс. |Δ| = {table['str_err'].max():.4f})")

    print("\n📈 Полином STR(C_MS):")
    x, y = table["cms"].to_numpy(), table["str"].to_numpy()
    scores = {}
    fits = {}
    for degree in range(1, 5):
        coefficients = np.polyfit(x, y, degree)
        rss = float(np.sum((np.polyval(coefficients, x) - y) ** 2))
        scores[degree] = aicc(rss, len(x), degree + 1)
        fits[degree] = coefficients
        print(f"   степень {degree}: RSS = {rss:.5f}, AICc = {scores[degree]:.3f}")
    best = min(scores, key=lambda d: (scores[d], d))
    coefficients = fits[best]
    print(f"   выбрана степень {best}: {np.array2string(coefficients[::-1], precision=5)}")

    shifted = coefficients.copy()
    shifted[-1] += 0.2
    roots = [r.real for r in np.roots(shifted) if abs(r.imag) < 1e-9 and 0.0 <= r.real <= 1.0]
    threshold = max(roots) if roots else None
    print(f"   порог C_MS: {threshold if threshold is None else round(threshold, 4)}")

    if best != 2 or coefficients[0] >= 0:
        print("   ❌ ожидалась вогнутая парабола")
        ok = False
    if threshold is None or not 0.55 <= threshold <= 0.75:
        print("   ❌ порог вне [0.55, 0.75]")
        ok = False
    if not np.polyval(coefficients, 0.5) > np.polyval(coefficients, 0.9):
        print("   ❌ разрыв при C_MS = 0.5 не больше, чем при 0.9")
        ok = False

    print("\n" + ("✅ Все проверки пройдены" if ok else "❌ Есть расхождения"))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
