"""
CPPN - сеть, которая "раскрашивает" крыло

Прямонаправленный граф: 3 входа (нормированная станция по размаху,
similarity, смещение), 3 выхода (хорда, жёсткость кручения,
жёсткость изгиба) и любое число скрытых узлов с разными функциями
активации. Выходы всегда сигмоидные, поэтому лежат в (0, 1).

Узлы 0, 1, 2 - входы, 3, 4, 5 - выходы, скрытые получают id от 6.
"""

import math
from enum import Enum
from typing import Callable, Dict, List, Literal, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, PrivateAttr, field_validator, model_validator

INPUT_IDS = (0, 1, 2)
OUTPUT_IDS = (3, 4, 5)

# Ограничение пре-активации сигмоиды: выход строго внутри (0, 1)
SIGMOID_CLIP = 30.0


class ActivationKind(str, Enum):
    """Функции активации узлов"""
    SINUSOID = "sinusoid"
    ABSOLUTE = "absolute"
    NEGATIVE = "negative"
    SQUARE = "square"
    SQRT_ABS = "sqrt_abs"
    SIGMOID = "sigmoid"
    IDENTITY = "identity"


HIDDEN_ACTIVATIONS = (
    ActivationKind.SINUSOID,
    ActivationKind.ABSOLUTE,
    ActivationKind.NEGATIVE,
    ActivationKind.SQUARE,
    ActivationKind.SQRT_ABS,
)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(x, -SIGMOID_CLIP, SIGMOID_CLIP)))


ACTIVATIONS: Dict[ActivationKind, Callable[[np.ndarray], np.ndarray]] = {
    ActivationKind.SINUSOID: np.sin,
    ActivationKind.ABSOLUTE: np.abs,
    ActivationKind.NEGATIVE: np.negative,
    ActivationKind.SQUARE: np.square,
    ActivationKind.SQRT_ABS: lambda x: np.sqrt(np.abs(x)),
    ActivationKind.SIGMOID: _sigmoid,
    ActivationKind.IDENTITY: lambda x: x,
}


class CppnNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int
    role: Literal["input", "hidden", "output"]
    activation: ActivationKind


class CppnEdge(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: int
    target: int
    weight: float

    @field_validator("weight")
    @classmethod
    def _finite(cls, weight: float) -> float:
        if not math.isfinite(weight):
            raise ValueError("вес ребра должен быть конечным")
        return weight


def topological_order(node_ids: Sequence[int], edges: Sequence[Tuple[int, int]]) -> List[int]:
    """
    Порядок вычисления узлов (алгоритм Кана, при равенстве - по возрастанию id).

    Raises:
        ValueError: Если в графе есть цикл
    """
    incoming = {node: 0 for node in node_ids}
    children: Dict[int, List[int]] = {node: [] for node in node_ids}
    for source, target in edges:
        incoming[target] += 1
        children[source].append(target)

    ready = sorted(node for node, count in incoming.items() if count == 0)
    order = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        for child in children[node]:
            incoming[child] -= 1
            if incoming[child] == 0:
                ready.append(child)
        ready.sort()

    if len(order) != len(incoming):
        raise ValueError("граф CPPN содержит цикл")
    return order


def creates_cycle(edges: Sequence[Tuple[int, int]], source: int, target: int) -> bool:
    """Появится ли цикл, если добавить ребро source -> target"""
    if source == target:
        return True
    children: Dict[int, List[int]] = {}
    for a, b in edges:
        children.setdefault(a, []).append(b)
    stack = [target]
    seen = set()
    while stack:
        node = stack.pop()
        if node == source:
            return True
        if node in seen:
            continue
        seen.add(node)
        stack.extend(children.get(node, []))
    return False


class Cppn(BaseModel):
    """
    Граф CPPN

    Неизменяемый. Проверки при создании: роли и активации узлов,
    ссылки рёбер, отсутствие рёбер в входы и из выходов, ацикличность.
    """
    model_config = ConfigDict(frozen=True)

    nodes: Tuple[CppnNode, ...]
    edges: Tuple[CppnEdge, ...] = ()

    _order: List[int] = PrivateAttr(default_factory=list)

    @model_validator(mode="after")
    def _check_graph(self) -> "Cppn":
        ids = [node.id for node in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("id узлов должны быть уникальными")
        roles = {node.id: node for node in self.nodes}

        for node_id in INPUT_IDS:
            node = roles.get(node_id)
            if node is None or node.role != "input" or node.activation != ActivationKind.IDENTITY:
                raise ValueError(f"узел {node_id} должен быть входом с identity")
        for node_id in OUTPUT_IDS:
            node = roles.get(node_id)
            if node is None or node.role != "output" or node.activation != ActivationKind.SIGMOID:
                raise ValueError(f"узел {node_id} должен быть выходом с sigmoid")
        for node in self.nodes:
            if node.id in INPUT_IDS or node.id in OUTPUT_IDS:
                continue
            if node.role != "hidden":
                raise ValueError(f"узел {node.id}: лишний {node.role}, у CPPN ровно 3 входа и 3 выхода")
            if node.activation not in HIDDEN_ACTIVATIONS:
                raise ValueError(f"узел {node.id}: активация {node.activation.value} недоступна скрытому узлу")

        pairs = set()
        for edge in self.edges:
            if edge.source not in roles or edge.target not in roles:
                raise ValueError(f"ребро {edge.source}->{edge.target} ссылается на несуществующий узел")
            if roles[edge.target].role == "input":
                raise ValueError(f"ребро {edge.source}->{edge.target} входит во входной узел")
            if roles[edge.source].role == "output":
                raise ValueError(f"ребро {edge.source}->{edge.target} выходит из выходного узла")
            if (edge.source, edge.target) in pairs:
                raise ValueError(f"ребро {edge.source}->{edge.target} задано дважды")
            pairs.add((edge.source, edge.target))

        topological_order(ids, list(pairs))
        return self

    def model_post_init(self, __context) -> None:
        self._order = topological_order([node.id for node in self.nodes],
                                        [(edge.source, edge.target) for edge in self.edges])

    @property
    def hidden_nodes(self) -> Tuple[CppnNode, ...]:
        return tuple(node for node in self.nodes if node.role == "hidden")

    @property
    def edge_pairs(self) -> List[Tuple[int, int]]:
        return [(edge.source, edge.target) for edge in self.edges]

    def evaluate(self, inputs: Sequence) -> np.ndarray:
        """
        Прогнать сеть.

        Args:
            inputs: Три входа (скаляры или массивы одной длины)

        Returns:
            np.ndarray: Форма (3,) для скаляров или (3, n) для массивов
        """
        if len(inputs) != len(INPUT_IDS):
            raise ValueError(f"CPPN ждёт {len(INPUT_IDS)} входа, получено {len(inputs)}")
        columns = [np.asarray(value, dtype=float) for value in inputs]
        shape = np.broadcast_shapes(*(column.shape for column in columns))

        activation = {node.id: node.activation for node in self.nodes}
        incoming: Dict[int, List[CppnEdge]] = {}
        for edge in self.edges:
            incoming.setdefault(edge.target, []).append(edge)

        values: Dict[int, np.ndarray] = {}
        with np.errstate(all="ignore"):
            for node_id in self._order:
                if node_id in INPUT_IDS:
                    values[node_id] = np.broadcast_to(columns[node_id], shape)
                    continue
                total = np.zeros(shape)
                for edge in incoming.get(node_id, ()):
                    total = total + edge.weight * values[edge.source]
                total = np.nan_to_num(total, nan=0.0)
                result = ACTIVATIONS[activation[node_id]](total)
                if node_id not in OUTPUT_IDS:
                    # Переполнение в скрытом узле считаем нулевым сигналом
                    result = np.where(np.isfinite(result), result, 0.0)
                values[node_id] = result

        return np.stack([values[node_id] for node_id in OUTPUT_IDS])


def cppn_eval(cppn: Cppn, inputs: Sequence[float]) -> Tuple[float, float, float]:
    """
    Значения трёх выходов CPPN для одного набора входов.

    Args:
        cppn: Сеть
        inputs: (x_norm, similarity, bias)

    Returns:
        Tuple[float, float, float]: (o_chord, o_ktwist, o_kbend), каждый в (0, 1)
    """
    if any(not math.isfinite(value) for value in inputs):
        raise ValueError(f"входы CPPN должны быть конечными: {inputs}")
    chord, twist, bend = cppn.evaluate(inputs)
    return float(chord), float(twist), float(bend)


def io_nodes() -> List[CppnNode]:
    """Входные и выходные узлы, общие для всех сетей"""
    nodes = [CppnNode(id=i, role="input", activation=ActivationKind.IDENTITY) for i in INPUT_IDS]
    nodes += [CppnNode(id=i, role="output", activation=ActivationKind.SIGMOID) for i in OUTPUT_IDS]
    return nodes


def minimal_cppn(weights: np.ndarray) -> Cppn:
    """
    Минимальная сеть: каждый вход соединён с каждым выходом.

    Args:
        weights: Матрица 3x3, weights[i, j] - вес ребра вход i -> выход j
    """
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(INPUT_IDS), len(OUTPUT_IDS)):
        raise ValueError(f"нужна матрица весов 3x3, получено {weights.shape}")
    edges = [CppnEdge(source=src, target=dst, weight=float(weights[i, j]))
             for i, src in enumerate(INPUT_IDS) for j, dst in enumerate(OUTPUT_IDS)]
    return Cppn(nodes=tuple(io_nodes()), edges=tuple(edges))
