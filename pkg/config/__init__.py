"""
Конфигурационный модуль WingScout

Этот модуль содержит все настройки приложения:
- настройки процесса из окружения / .env (settings.py)
- загрузку конфигурации эксперимента (experiment.py)
- таблицу материалов для изготовления крыла (materials.py)
"""

from .settings import Settings, get_settings, reset_settings
from .materials import MATERIALS_TABLE, get_material

__all__ = ['Settings', 'get_settings', 'reset_settings', 'MATERIALS_TABLE', 'get_material']
