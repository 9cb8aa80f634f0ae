"""
Генотип крыла

Содержит:
- cppn.py - сеть CPPN и её вычисление
- genome.py - генотип, экспрессия в фенотип, JSON
- operators.py - мутация, скрещивание, случайные генотипы
"""

from .cppn import ActivationKind, Cppn, CppnEdge, CppnNode, cppn_eval, minimal_cppn
from .genome import ExpressionEntry, ExpressionRanges, Genotype, express, serialize, deserialize
from .operators import MutationParams, InitParams, mutate, crossover, random_genotype, splice_entries

__all__ = [
    'ActivationKind', 'Cppn', 'CppnEdge', 'CppnNode', 'cppn_eval', 'minimal_cppn',
    'ExpressionEntry', 'ExpressionRanges', 'Genotype', 'express', 'serialize', 'deserialize',
    'MutationParams', 'InitParams', 'mutate', 'crossover', 'random_genotype', 'splice_entries',
]
