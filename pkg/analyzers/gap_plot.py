"""
Графики разрыва STR(C_MS)

Файлы в каталоге вывода:
- gap_points.csv - точки переносов (label, cms, str, str_err)
- gap_fit.csv - 100 отсчётов выбранного полинома на [min C_MS, max C_MS]
- gap_envelope.csv - узлы полосы (cms, lower, upper)
- gap_decay.csv - иллюстративная линия спада
- gap_plot.svg - статичный график (matplotlib), без скриптов
- gap_plot.html - интерактивный график (plotly)
"""

import logging
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np
import pandas as pd
import plotly.graph_objects as go
import matplotlib
from matplotlib.figure import Figure
from matplotlib.lines import Line2D
from matplotlib.patches import Patch

from analyzers.gap_shape import DecayLine, GapEnvelope, PolyFit, decay_line
from analyzers.transfer import TransferDataset, annotate

logger = logging.getLogger(__name__)

FIT_SAMPLES = 100
CSV_FLOAT_FORMAT = "%.17g"
POINTS_GID = "transfer-points"


class GapPlotter:
    """
    Построение файлов графика разрыва

    Все методы статические - вызываем напрямую: GapPlotter.export(...)
    """

    @staticmethod
    def export(dataset: TransferDataset, fit: PolyFit, envelope: GapEnvelope,
               out_dir: Union[str, Path], decay: Optional[DecayLine] = None,
               html: bool = True) -> Dict[str, Path]:
        """
        Записать CSV, SVG и (опционально) HTML.

        Args:
            dataset: Набор переносов (аннотируется при необходимости)
            fit: Выбранный полином
            envelope: Полоса STR
            out_dir: Каталог вывода (создаётся)
            decay: Линия спада; по умолчанию строится по набору
            html: Писать ли интерактивный HTML

        Returns:
            Dict[str, Path]: Имя файла -> путь
        """
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        if any(r.cms is None or r.str_value is None for r in dataset.records):
            dataset = annotate(dataset)
        decay = decay or decay_line(dataset)

        frames = GapPlotter.frames(dataset, fit, envelope, decay)
        paths: Dict[str, Path] = {}
        for name, frame in frames.items():
            path = out_dir / f"{name}.csv"
            frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
            paths[path.name] = path

        svg_path = out_dir / "gap_plot.svg"
        GapPlotter._write_svg(frames, svg_path)
        paths[svg_path.name] = svg_path

        if html:
            html_path = out_dir / "gap_plot.html"
            GapPlotter._write_html(frames, html_path)
            paths[html_path.name] = html_path

        logger.info("график разрыва записан в %s (%d файлов)", out_dir, len(paths))
        return paths

    @staticmethod
    def frames(dataset: TransferDataset, fit: PolyFit, envelope: GapEnvelope,
               decay: DecayLine) -> Dict[str, pd.DataFrame]:
        """Табличные данные графика"""
        lift_max = dataset.resolved_lift_max
        points = pd.DataFrame({
            "label": [r.label for r in dataset.records],
            "cms": [r.cms for r in dataset.records],
            "str": [r.str_value for r in dataset.records],
            "str_err": [r.lift_real_std / lift_max for r in dataset.records],
        })
        grid = np.linspace(points["cms"].min(), points["cms"].max(), FIT_SAMPLES)
        return {
            "gap_points": points,
            "gap_fit": pd.DataFrame({"cms": grid, "str": fit(grid)}),
            "gap_envelope": pd.DataFrame({
                "cms": envelope.knots, "lower": envelope.lower, "upper": envelope.upper,
            }),
            "gap_decay": pd.DataFrame({"cms": grid, "str": decay(grid)}),
        }

    @staticmethod
    def _write_svg(frames: Dict[str, pd.DataFrame], path: Path) -> None:
        points, fitted = frames["gap_points"], frames["gap_fit"]
        envelope, decay = frames["gap_envelope"], frames["gap_decay"]

        figure = Figure(figsize=(7, 5))
        ax = figure.add_subplot()
        ax.fill_between(envelope["cms"], envelope["lower"], envelope["upper"],
                        color="tab:blue", alpha=0.2, linewidth=0)
        ax.axhspan(-0.2, 0.2, color="0.85", zorder=0)
        ax.plot(fitted["cms"], fitted["str"], color="black", linewidth=1.5)
        ax.plot(decay["cms"], decay["str"], color="tab:red", linestyle="--", linewidth=1.0)
        ax.errorbar(points["cms"], points["str"], yerr=points["str_err"],
                    fmt="none", ecolor="0.4", elinewidth=0.8, capsize=0)
        ax.plot(points["cms"], points["str"], linestyle="none", marker="o",
                markersize=5, color="tab:blue", gid=POINTS_GID)
        for label, x, y in zip(points["label"], points["cms"], points["str"]):
            ax.annotate(label, (x, y), xytext=(4, 4), textcoords="offset points", fontsize=7)

        # Легенда на отдельных артистах, чтобы маркеры точек были только в группе POINTS_GID
        ax.legend(handles=[
            Line2D([], [], linestyle="none", marker="o", color="tab:blue", label="перенос"),
            Line2D([], [], color="black", label="полином"),
            Line2D([], [], color="tab:red", linestyle="--", label="монотонный спад (иллюстрация)"),
            Patch(color="tab:blue", alpha=0.2, label="полоса STR"),
        ], fontsize=8, loc="lower left")
        ax.set_xlabel("C_MS")
        ax.set_ylabel("STR")
        ax.grid(True, alpha=0.3)
        figure.tight_layout()
        with matplotlib.rc_context({"svg.hashsalt": "wingscout"}):
            figure.savefig(path, format="svg", metadata={"Date": None})

    @staticmethod
    def _write_html(frames: Dict[str, pd.DataFrame], path: Path) -> None:
        points, fitted = frames["gap_points"], frames["gap_fit"]
        envelope, decay = frames["gap_envelope"], frames["gap_decay"]

        fig = go.Figure()
        fig.add_trace(go.Scatter(x=envelope["cms"], y=envelope["upper"], mode="lines",
                                 line=dict(width=0), showlegend=False, hoverinfo="skip"))
        fig.add_trace(go.Scatter(x=envelope["cms"], y=envelope["lower"], mode="lines",
                                 line=dict(width=0), fill="tonexty", fillcolor="rgba(31,119,180,0.2)",
                                 name="полоса STR"))
        fig.add_trace(go.Scatter(x=fitted["cms"], y=fitted["str"], mode="lines",
                                 line=dict(color="black"), name="полином"))
        fig.add_trace(go.Scatter(x=decay["cms"], y=decay["str"], mode="lines",
                                 line=dict(color="red", dash="dash"), name="монотонный спад (иллюстрация)"))
        fig.add_trace(go.Scatter(x=points["cms"], y=points["str"], mode="markers+text",
                                 text=points["label"], textposition="top right",
                                 error_y=dict(type="data", array=points["str_err"], visible=True),
                                 name="перенос"))
        fig.update_layout(xaxis_title="C_MS", yaxis_title="STR", height=500, template="plotly_white")
        fig.write_html(path, include_plotlyjs=True, full_html=True)


def export_gap_plot(dataset: TransferDataset, fit: PolyFit, envelope: GapEnvelope,
                    out_dir: Union[str, Path], decay: Optional[DecayLine] = None,
                    html: bool = True) -> Dict[str, Path]:
    """Записать файлы графика разрыва (см. GapPlotter.export)"""
    return GapPlotter.export(dataset, fit, envelope, out_dir, decay=decay, html=html)
