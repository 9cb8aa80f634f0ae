"""
Операторы изменчивости генотипа

- mutate - ровно одна мутация, выбранная рулеткой по весам
- crossover - одноточечная склейка массивов экспрессии + CPPN одного из родителей
- random_genotype - случайный генотип для начальной популяции и AFPO-инъекций

Все операторы получают явный numpy Generator и возвращают новые значения.
"""

from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, model_validator

from genotype.cppn import (HIDDEN_ACTIVATIONS, INPUT_IDS, OUTPUT_IDS, Cppn, CppnEdge, CppnNode,
                           creates_cycle, minimal_cppn)
from genotype.genome import ExpressionEntry, Genotype

LINEAGE_LIMIT = 2 ** 62


class MutationParams(BaseModel):
    """Веса рулетки мутаций и размеры шагов"""
    model_config = ConfigDict(frozen=True)

    insert_entry: float = Field(0.1, ge=0)
    remove_entry: float = Field(0.1, ge=0)
    perturb_entry: float = Field(0.3, ge=0)
    perturb_weight: float = Field(0.3, ge=0)
    add_edge: float = Field(0.1, ge=0)
    add_node: float = Field(0.05, ge=0)
    change_activation: float = Field(0.05, ge=0)

    sigma_position: PositiveFloat = 10.0      # мм
    sigma_similarity: PositiveFloat = 0.1
    sigma_weight: PositiveFloat = 0.5
    position_range: Tuple[float, float] = (30.0, 150.0)
    min_position: PositiveFloat = 1.0         # мм, ниже - отражение

    @model_validator(mode="after")
    def _some_weight(self) -> "MutationParams":
        if self.insert_entry + self.perturb_entry <= 0:
            raise ValueError("insert_entry или perturb_entry должны иметь ненулевой вес")
        return self

    def weights(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in MUTATION_PRIMITIVES}


class InitParams(BaseModel):
    """Параметры случайного генотипа"""
    model_config = ConfigDict(frozen=True)

    min_entries: int = Field(1, ge=1)
    max_entries: int = Field(6, ge=1)
    position_range: Tuple[float, float] = (30.0, 150.0)
    weight_range: Tuple[float, float] = (-1.0, 1.0)

    @model_validator(mode="after")
    def _ordered(self) -> "InitParams":
        if self.min_entries > self.max_entries:
            raise ValueError("min_entries больше max_entries")
        if not 0 < self.position_range[0] <= self.position_range[1]:
            raise ValueError(f"некорректный position_range: {self.position_range}")
        return self


def _draw_lineage(rng: np.random.Generator) -> int:
    return int(rng.integers(0, LINEAGE_LIMIT))


def _draw_entry(rng: np.random.Generator, position_range: Tuple[float, float]) -> ExpressionEntry:
    lo, hi = position_range
    return ExpressionEntry(position=float(rng.uniform(lo, hi)), similarity=float(rng.uniform(0.0, 1.0)))


def _with_entries(genotype: Genotype, entries: Sequence[ExpressionEntry]) -> Genotype:
    return Genotype(cppn=genotype.cppn, entries=tuple(entries), age=genotype.age, lineage=genotype.lineage)


def _with_cppn(genotype: Genotype, nodes: Sequence[CppnNode], edges: Sequence[CppnEdge]) -> Genotype:
    cppn = Cppn(nodes=tuple(nodes), edges=tuple(edges))
    return Genotype(cppn=cppn, entries=genotype.entries, age=genotype.age, lineage=genotype.lineage)


# ---------- Примитивы мутации ----------
# Каждый возвращает новый генотип или None, если к этому генотипу неприменим

def _insert_entry(g: Genotype, rng: np.random.Generator, p: MutationParams) -> Optional[Genotype]:
    index = int(rng.integers(0, len(g.entries) + 1))
    entries = list(g.entries)
    entries.insert(index, _draw_entry(rng, p.position_range))
    return _with_entries(g, entries)


def _remove_entry(g: Genotype, rng: np.random.Generator, p: MutationParams) -> Optional[Genotype]:
    if len(g.entries) <= 1:
        return None
    index = int(rng.integers(0, len(g.entries)))
    entries = list(g.entries)
    del entries[index]
    return _with_entries(g, entries)


def _perturb_entry(g: Genotype, rng: np.random.Generator, p: MutationParams) -> Optional[Genotype]:
    index = int(rng.integers(0, len(g.entries)))
    entry = g.entries[index]
    position = entry.position + float(rng.normal(0.0, p.sigma_position))
    if position < p.min_position:
        position = 2.0 * p.min_position - position
    similarity = min(max(entry.similarity + float(rng.normal(0.0, p.sigma_similarity)), 0.0), 1.0)
    entries = list(g.entries)
    entries[index] = ExpressionEntry(position=position, similarity=similarity)
    return _with_entries(g, entries)


def _perturb_weight(g: Genotype, rng: np.random.Generator, p: MutationParams) -> Optional[Genotype]:
    edges = list(g.cppn.edges)
    if not edges:
        return None
    index = int(rng.integers(0, len(edges)))
    edge = edges[index]
    edges[index] = CppnEdge(source=edge.source, target=edge.target,
                            weight=edge.weight + float(rng.normal(0.0, p.sigma_weight)))
    return _with_cppn(g, g.cppn.nodes, edges)


def _add_edge(g: Genotype, rng: np.random.Generator, p: MutationParams) -> Optional[Genotype]:
    pairs = g.cppn.edge_pairs
    existing = set(pairs)
    sources = sorted(node.id for node in g.cppn.nodes if node.role != "output")
    targets = sorted(node.id for node in g.cppn.nodes if node.role != "input")
    candidates = [(s, t) for s in sources for t in targets
                  if (s, t) not in existing and not creates_cycle(pairs, s, t)]
    if not candidates:
        return None
    source, target = candidates[int(rng.integers(0, len(candidates)))]
    edge = CppnEdge(source=source, target=target, weight=float(rng.uniform(-1.0, 1.0)))
    return _with_cppn(g, g.cppn.nodes, list(g.cppn.edges) + [edge])


def _add_node(g: Genotype, rng: np.random.Generator, p: MutationParams) -> Optional[Genotype]:
    edges = list(g.cppn.edges)
    if not edges:
        return None
    index = int(rng.integers(0, len(edges)))
    split = edges.pop(index)
    new_id = max(node.id for node in g.cppn.nodes) + 1
    activation = HIDDEN_ACTIVATIONS[int(rng.integers(0, len(HIDDEN_ACTIVATIONS)))]
    node = CppnNode(id=new_id, role="hidden", activation=activation)
    # a -> h с весом 1.0, h -> b с прежним весом
    edges += [
        CppnEdge(source=split.source, target=new_id, weight=1.0),
        CppnEdge(source=new_id, target=split.target, weight=split.weight),
    ]
    return _with_cppn(g, list(g.cppn.nodes) + [node], edges)


def _change_activation(g: Genotype, rng: np.random.Generator, p: MutationParams) -> Optional[Genotype]:
    hidden = g.cppn.hidden_nodes
    if not hidden:
        return None
    target = hidden[int(rng.integers(0, len(hidden)))]
    choices = [kind for kind in HIDDEN_ACTIVATIONS if kind != target.activation]
    activation = choices[int(rng.integers(0, len(choices)))]
    nodes = [CppnNode(id=node.id, role=node.role, activation=activation) if node.id == target.id else node
             for node in g.cppn.nodes]
    return _with_cppn(g, nodes, g.cppn.edges)


MUTATION_PRIMITIVES: Dict[str, Callable[[Genotype, np.random.Generator, MutationParams], Optional[Genotype]]] = {
    "insert_entry": _insert_entry,
    "remove_entry": _remove_entry,
    "perturb_entry": _perturb_entry,
    "perturb_weight": _perturb_weight,
    "add_edge": _add_edge,
    "add_node": _add_node,
    "change_activation": _change_activation,
}


def mutate(genotype: Genotype, rng: np.random.Generator, params: MutationParams) -> Genotype:
    """
    Применить ровно одну мутацию.

    Примитив выбирается рулеткой по весам из params; если он неприменим
    (например, удаление единственной записи), рулетка крутится заново.
    Возраст и линия наследуются от родителя.

    Args:
        genotype: Родитель
        rng: Генератор случайных чисел
        params: Веса и размеры шагов

    Returns:
        Genotype: Потомок
    """
    weights = params.weights()
    names = list(weights)
    probabilities = np.array([weights[name] for name in names], dtype=float)
    probabilities /= probabilities.sum()
    while True:
        name = names[int(rng.choice(len(names), p=probabilities))]
        child = MUTATION_PRIMITIVES[name](genotype, rng, params)
        if child is not None:
            return child


def splice_entries(a: Sequence[ExpressionEntry], b: Sequence[ExpressionEntry],
                   cut_a: int, cut_b: int) -> Tuple[ExpressionEntry, ...]:
    """
    Склейка a[:cut_a] + b[cut_b:].

    Raises:
        ValueError: Если точки разреза вне массивов или результат пуст
    """
    if not 0 <= cut_a <= len(a) or not 0 <= cut_b <= len(b):
        raise ValueError(f"точки разреза вне массивов: {cut_a}/{len(a)}, {cut_b}/{len(b)}")
    child = tuple(a[:cut_a]) + tuple(b[cut_b:])
    if not child:
        raise ValueError("склейка дала пустой массив экспрессии")
    return child


def crossover(a: Genotype, b: Genotype, rng: np.random.Generator,
              lift_a: Optional[float] = None, lift_b: Optional[float] = None) -> Genotype:
    """
    Скрестить двух родителей.

    Массив экспрессии: префикс a + суффикс b. Точка разреза в a равномерна,
    точка в b берётся на той же относительной позиции, поэтому a = b даёт копию.
    CPPN берётся целиком у родителя с большей подъёмной силой (без данных или при
    равенстве - монетка). Возраст = max возрастов, линия новая.

    Args:
        a: Первый родитель
        b: Второй родитель
        rng: Генератор случайных чисел
        lift_a: Подъёмная сила a (если известна)
        lift_b: Подъёмная сила b (если известна)

    Returns:
        Genotype: Потомок
    """
    cut_a = int(rng.integers(0, len(a.entries) + 1))
    cut_b = int(round(cut_a * len(b.entries) / len(a.entries)))
    entries = splice_entries(a.entries, b.entries, cut_a, cut_b)

    if lift_a is not None and lift_b is not None and lift_a != lift_b:
        donor = a if lift_a > lift_b else b
    else:
        donor = a if rng.random() < 0.5 else b

    return Genotype(cppn=donor.cppn, entries=entries, age=max(a.age, b.age), lineage=_draw_lineage(rng))


def random_genotype(rng: np.random.Generator, init: InitParams) -> Genotype:
    """
    Случайный генотип с минимальной CPPN (входы полностью связаны с выходами).

    Args:
        rng: Генератор случайных чисел
        init: Параметры (число записей, диапазоны)

    Returns:
        Genotype: Генотип с возрастом 0
    """
    count = int(rng.integers(init.min_entries, init.max_entries + 1))
    entries = tuple(_draw_entry(rng, init.position_range) for _ in range(count))
    lo, hi = init.weight_range
    weights = rng.uniform(lo, hi, size=(len(INPUT_IDS), len(OUTPUT_IDS)))
    return Genotype(cppn=minimal_cppn(weights), entries=entries, age=0, lineage=_draw_lineage(rng))
