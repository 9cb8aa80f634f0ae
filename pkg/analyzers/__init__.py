"""
Анализ переносов из симуляции в реальность

Содержит:
- transfer.py - записи переносов, STR и C_MS, чтение/запись CSV
- gap_shape.py - полином разрыва (AICc), полоса STR, порог сложности
- gap_plot.py - CSV, SVG и HTML графика разрыва
"""

from .transfer import (
    TransferDataset,
    TransferRecord,
    annotate,
    compute_str,
    export_transfers,
    ingest_transfers,
    transfers_table,
)
from .gap_shape import (
    DecayLine,
    GapEnvelope,
    PolyFit,
    decay_line,
    gap_envelope,
    polyfit_str,
    select_polynomial,
    threshold_estimate,
)
from .gap_plot import GapPlotter, export_gap_plot

__all__ = [
    'TransferDataset', 'TransferRecord', 'annotate', 'compute_str', 'export_transfers',
    'ingest_transfers', 'transfers_table',
    'DecayLine', 'GapEnvelope', 'PolyFit', 'decay_line', 'gap_envelope', 'polyfit_str',
    'select_polynomial', 'threshold_estimate',
    'GapPlotter', 'export_gap_plot',
]
