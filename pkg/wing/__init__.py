"""
Модель крыла

Содержит:
- models.py - фенотип крыла, материалы, отчёт о технологичности
- geometry.py - размах, C_MS, масса и инерция
- feasibility.py - допустимые диапазоны, проверка, подбор проволоки
- manufacture.py - производственный документ
"""

from .models import BladeSpec, WingPhenotype, MaterialConfig, FeasibilityReport, Violation
from .geometry import wing_span, compute_cms, wing_mass_model, total_mass, BladeMass
from .feasibility import (FeasibleBounds, validate_phenotype, clamp_to_bounds,
                          nearest_wire_gauge, wire_stiffness)

__all__ = [
    'BladeSpec', 'WingPhenotype', 'MaterialConfig', 'FeasibilityReport', 'Violation',
    'wing_span', 'compute_cms', 'wing_mass_model', 'total_mass', 'BladeMass',
    'FeasibleBounds', 'validate_phenotype', 'clamp_to_bounds', 'nearest_wire_gauge', 'wire_stiffness',
]
