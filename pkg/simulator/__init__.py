"""
Симулятор машущего крыла

Содержит:
- settings.py - движение корня и настройки интегратора
- coefficients.py - таблица C_L / C_D плоской пластины
- aerodynamics.py - квазистатические силы на лопастях
- dynamics.py - шарнирная цепочка и шаг интегрирования
- runner.py - полная симуляция и экспорт рядов
"""

from .settings import FlapProfile, SimConfig, validate_timing
from .coefficients import CoefficientTable, coeff_lookup, default_table, load_coefficients
from .aerodynamics import BladeWrench, blade_quasistatic_wrench
from .dynamics import WingChain, WingState, step, mechanical_energy
from .runner import SimResult, simulate, export_timeseries, export_blade_forces

__all__ = [
    'FlapProfile', 'SimConfig', 'validate_timing',
    'CoefficientTable', 'coeff_lookup', 'default_table', 'load_coefficients',
    'BladeWrench', 'blade_quasistatic_wrench',
    'WingChain', 'WingState', 'step', 'mechanical_energy',
    'SimResult', 'simulate', 'export_timeseries', 'export_blade_forces',
]
