"""
NSGA-II: недоминируемая сортировка, crowding distance, турнир, усечение

Все функции работают с векторами целей для минимизации
(ObjectiveVector.minimization_key), поэтому подходят и для четырёх
целей эволюции, и для двух целей финального фронта.
"""

import math
from typing import Callable, List, Sequence, Tuple

import numpy as np

from evolution.objectives import ObjectiveVector

Key = Tuple[float, ...]


def dominates_key(a: Key, b: Key) -> bool:
    """a не хуже b по всем целям и строго лучше хотя бы по одной (минимизация)"""
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def dominates(a: ObjectiveVector, b: ObjectiveVector) -> bool:
    """
    Доминирование по Парето: подъёмная сила максимизируется, остальное минимизируется.

    Args:
        a: Первый вектор целей
        b: Второй вектор целей

    Returns:
        bool: True, если a доминирует b
    """
    return dominates_key(a.minimization_key(), b.minimization_key())


def nondominated_sort_keys(keys: Sequence[Key]) -> List[List[int]]:
    """Быстрая недоминируемая сортировка (Deb) по ключам минимизации"""
    count = len(keys)
    dominated: List[List[int]] = [[] for _ in range(count)]
    counter = [0] * count
    fronts: List[List[int]] = [[]]

    for p in range(count):
        for q in range(count):
            if p == q:
                continue
            if dominates_key(keys[p], keys[q]):
                dominated[p].append(q)
            elif dominates_key(keys[q], keys[p]):
                counter[p] += 1
        if counter[p] == 0:
            fronts[0].append(p)

    i = 0
    while fronts[i]:
        following = []
        for p in fronts[i]:
            for q in dominated[p]:
                counter[q] -= 1
                if counter[q] == 0:
                    following.append(q)
        i += 1
        fronts.append(sorted(following))
    fronts.pop()
    return fronts


def nondominated_sort(population: Sequence[ObjectiveVector]) -> List[List[int]]:
    """
    Разбить популяцию на фронты.

    Returns:
        List[List[int]]: Индексы по фронтам, фронт 0 - недоминируемые
    """
    return nondominated_sort_keys([vector.minimization_key() for vector in population])


def crowding_distance_keys(keys: Sequence[Key]) -> List[float]:
    """Crowding distance для одного фронта по ключам минимизации"""
    size = len(keys)
    if size <= 2:
        return [math.inf] * size
    distance = [0.0] * size
    for m in range(len(keys[0])):
        order = sorted(range(size), key=lambda i: keys[i][m])
        low, high = keys[order[0]][m], keys[order[-1]][m]
        if high == low:
            continue
        distance[order[0]] = math.inf
        distance[order[-1]] = math.inf
        span = high - low
        for k in range(1, size - 1):
            distance[order[k]] += (keys[order[k + 1]][m] - keys[order[k - 1]][m]) / span
    return distance


def crowding_distance(front: Sequence[ObjectiveVector]) -> List[float]:
    """
    Crowding distance членов фронта.

    Граничные по каждой цели получают +∞, внутренние - сумму нормированных
    промежутков между соседями. Цели с нулевым разбросом не учитываются.
    """
    return crowding_distance_keys([vector.minimization_key() for vector in front])


def rank_and_crowd(keys: Sequence[Key]) -> Tuple[List[int], List[float], List[List[int]]]:
    """Ранг (номер фронта) и crowding distance каждого члена популяции"""
    fronts = nondominated_sort_keys(keys)
    ranks = [0] * len(keys)
    crowding = [0.0] * len(keys)
    for rank, front in enumerate(fronts):
        for index, value in zip(front, crowding_distance_keys([keys[i] for i in front])):
            ranks[index] = rank
            crowding[index] = value
    return ranks, crowding, fronts


def tournament(ranks: Sequence[int], crowding: Sequence[float], rng: np.random.Generator) -> int:
    """
    Бинарный турнир: меньший ранг, затем больший crowding, затем монетка.

    Returns:
        int: Индекс победителя
    """
    a, b = (int(i) for i in rng.integers(0, len(ranks), size=2))
    if ranks[a] != ranks[b]:
        return a if ranks[a] < ranks[b] else b
    if crowding[a] != crowding[b]:
        return a if crowding[a] > crowding[b] else b
    return a if rng.random() < 0.5 else b


def truncate(keys: Sequence[Key], size: int) -> List[int]:
    """
    Отбор NSGA-II: целые фронты по порядку, последний - по убыванию crowding.

    Returns:
        List[int]: Индексы выживших (size штук)
    """
    selected: List[int] = []
    for front in nondominated_sort_keys(keys):
        if len(selected) + len(front) <= size:
            selected.extend(front)
            continue
        crowd = crowding_distance_keys([keys[i] for i in front])
        ordered = sorted(range(len(front)), key=lambda k: (-crowd[k], front[k]))
        selected.extend(front[k] for k in ordered[:size - len(selected)])
        break
    return selected


def worst_crowded(front: Sequence[int], crowding: Sequence[float],
                  lift: Callable[[int], float]) -> int:
    """Член фронта с наименьшим crowding; при равенстве - с наименьшей подъёмной силой"""
    return min(front, key=lambda i: (crowding[i], lift(i), -i))
