"""
Эволюционный дизайн крыльев

Содержит:
- objectives.py - четыре цели и оценка генотипа
- nsga.py - сортировка NSGA-II, crowding distance, турнир
- engine.py - поколения, AFPO, полный запуск, финальный фронт
- run_store.py - файлы каталога запуска
"""

from .objectives import ObjectiveVector, Evaluation, evaluate, evaluate_detailed
from .nsga import dominates, nondominated_sort, crowding_distance
from .engine import (EvolutionConfig, Individual, RunRecord, evaluate_batch, next_generation,
                     run_evolution, final_ndf, ndf_trend)

__all__ = [
    'ObjectiveVector', 'Evaluation', 'evaluate', 'evaluate_detailed',
    'dominates', 'nondominated_sort', 'crowding_distance',
    'EvolutionConfig', 'Individual', 'RunRecord', 'evaluate_batch', 'next_generation',
    'run_evolution', 'final_ndf', 'ndf_trend',
]
