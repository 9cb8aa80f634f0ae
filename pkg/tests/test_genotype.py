"""
Тесты генотипа: CPPN, экспрессия, операторы изменчивости, сериализация
"""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

from genotype.cppn import (ActivationKind, Cppn, CppnEdge, CppnNode, cppn_eval, creates_cycle, io_nodes,
                           minimal_cppn, topological_order)
from genotype.genome import ExpressionEntry, ExpressionRanges, Genotype, deserialize, express, serialize
from genotype.operators import (InitParams, MutationParams, crossover, mutate, random_genotype,
                                splice_entries)
from utils.errors import FormatError
from wing.geometry import wing_span


def _sigmoid(x):
    return 1.0 / (1.0 + math.exp(-x))


def _cppn(edges, hidden=()):
    nodes = io_nodes() + [CppnNode(id=i, role="hidden", activation=kind) for i, kind in hidden]
    return Cppn(nodes=tuple(nodes), edges=tuple(CppnEdge(source=s, target=t, weight=w) for s, t, w in edges))


def _genotype(positions, cppn=None, similarity=0.0, age=0, lineage=0):
    entries = tuple(ExpressionEntry(position=p, similarity=similarity) for p in positions)
    return Genotype(cppn=cppn or minimal_cppn(np.zeros((3, 3))), entries=entries, age=age, lineage=lineage)


class TestCppn:

    def test_unconnected_outputs_are_half(self):
        assert cppn_eval(_cppn([]), (0.3, 0.7, 1.0)) == pytest.approx((0.5, 0.5, 0.5))

    def test_minimal_network(self):
        weights = np.array([[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, -1.0]])
        chord, twist, bend = cppn_eval(minimal_cppn(weights), (0.5, 0.25, 1.0))
        assert chord == pytest.approx(_sigmoid(0.5))
        assert twist == pytest.approx(_sigmoid(0.5))
        assert bend == pytest.approx(_sigmoid(-1.0))

    def test_hidden_node(self):
        cppn = _cppn([(0, 6, 1.0), (6, 3, 2.0)], hidden=[(6, ActivationKind.SINUSOID)])
        chord, _, _ = cppn_eval(cppn, (0.4, 0.0, 1.0))
        assert chord == pytest.approx(_sigmoid(2.0 * math.sin(0.4)))

    def test_vectorized_evaluation_matches_scalar(self):
        cppn = _cppn([(0, 6, 1.5), (6, 4, -1.0), (1, 3, 0.7), (2, 5, 0.2)],
                     hidden=[(6, ActivationKind.SQUARE)])
        x = np.array([0.1, 0.5, 0.9])
        out = cppn.evaluate((x, np.full(3, 0.3), np.ones(3)))
        assert out.shape == (3, 3)
        for j in range(3):
            assert out[:, j] == pytest.approx(cppn_eval(cppn, (x[j], 0.3, 1.0)))

    def test_saturated_outputs_stay_inside_unit_interval(self):
        cppn = minimal_cppn(np.full((3, 3), 1e6))
        outputs = cppn_eval(cppn, (1.0, 1.0, 1.0))
        assert all(0.0 < value < 1.0 for value in outputs)

    def test_hidden_overflow_treated_as_zero(self):
        cppn = _cppn([(2, 6, 1e200), (6, 7, 1.0), (7, 3, 1.0)],
                     hidden=[(6, ActivationKind.SQUARE), (7, ActivationKind.SQUARE)])
        chord, _, _ = cppn_eval(cppn, (0.0, 0.0, 1.0))
        assert math.isfinite(chord)
        assert 0.0 < chord < 1.0

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_random_topology_outputs_inside_unit_interval(self, seed):
        rng = np.random.default_rng(seed)
        params = MutationParams(perturb_weight=0.4, add_edge=0.4, add_node=0.4, change_activation=0.4,
                                sigma_weight=5.0)
        genotype = random_genotype(rng, InitParams())
        for _ in range(40):
            genotype = mutate(genotype, rng, params)
        x = np.concatenate(([0.0, 1.0], rng.random(30)))
        out = genotype.cppn.evaluate((x, rng.random(x.size), np.ones(x.size)))
        assert np.all(np.isfinite(out))
        assert np.all((out > 0.0) & (out < 1.0))

    def test_non_finite_input_rejected(self):
        with pytest.raises(ValueError):
            cppn_eval(_cppn([]), (float("nan"), 0.0, 1.0))

    def test_cycle_rejected(self):
        with pytest.raises(ValidationError):
            _cppn([(6, 7, 1.0), (7, 6, 1.0)],
                  hidden=[(6, ActivationKind.ABSOLUTE), (7, ActivationKind.ABSOLUTE)])

    def test_edge_into_input_rejected(self):
        with pytest.raises(ValidationError):
            _cppn([(3, 0, 1.0)])

    def test_output_activation_fixed(self):
        nodes = io_nodes()
        nodes[3] = CppnNode(id=3, role="output", activation=ActivationKind.SINUSOID)
        with pytest.raises(ValidationError):
            Cppn(nodes=tuple(nodes))

    def test_creates_cycle(self):
        edges = [(0, 6), (6, 7), (7, 3)]
        assert creates_cycle(edges, 7, 6)
        assert creates_cycle(edges, 6, 6)
        assert not creates_cycle(edges, 0, 7)

    def test_topological_order_prefers_lower_ids(self):
        assert topological_order([0, 1, 6, 3], [(6, 3), (0, 6)]) == [0, 1, 6, 3]


class TestExpression:

    def test_minimal_genotype_file(self, designs_dir):
        genotype = deserialize((designs_dir / "min_genotype.json").read_text(encoding="utf-8"))
        wing = express(genotype, ExpressionRanges())
        assert wing.blade_count == 1
        assert wing.span == pytest.approx(50.0)
        assert wing.blades[0].chord == pytest.approx(10.0 + 190.0 * _sigmoid(-2.5))

    def test_square_plate_genotype(self, designs_dir):
        genotype = deserialize((designs_dir / "square_plate_genotype.json").read_text(encoding="utf-8"))
        wing = express(genotype, ExpressionRanges())
        assert wing.blade_count == 2
        assert wing.span == pytest.approx(250.0)
        for blade in wing.blades:
            assert blade.chord == pytest.approx(125.0, abs=0.5)

    def test_blade_count_and_span_follow_entries(self):
        wing = express(_genotype([40.0, 60.0, 25.0]), ExpressionRanges())
        assert wing.blade_count == 3
        assert wing.span == pytest.approx(125.0)
        assert [b.span_offset for b in wing.blades] == [40.0, 60.0, 25.0]

    def test_position_input_is_cumulative_fraction(self):
        cppn = _cppn([(0, 3, 1.0)])
        wing = express(_genotype([10.0, 30.0], cppn=cppn), ExpressionRanges(chord=(10.0, 110.0)))
        assert wing.blades[0].chord == pytest.approx(10.0 + 100.0 * _sigmoid(0.25))
        assert wing.blades[1].chord == pytest.approx(10.0 + 100.0 * _sigmoid(1.0))

    def test_stiffness_mapped_logarithmically(self):
        ranges = ExpressionRanges(k_twist=(1e-5, 1e-3), k_bend=(1e-5, 1e-3))
        wing = express(_genotype([50.0]), ranges)
        # выход 0.5 -> среднее геометрическое границ
        assert wing.blades[0].k_twist == pytest.approx(1e-4)
        assert wing.blades[0].k_bend == pytest.approx(1e-4)

    def test_expression_is_deterministic(self, designs_dir):
        text = (designs_dir / "ribbed_genotype.json").read_text(encoding="utf-8")
        first = express(deserialize(text), ExpressionRanges())
        second = express(deserialize(text), ExpressionRanges())
        assert first == second
        assert first.blade_count == 3

    def test_entry_domain(self):
        with pytest.raises(ValidationError):
            ExpressionEntry(position=0.0, similarity=0.5)
        with pytest.raises(ValidationError):
            ExpressionEntry(position=10.0, similarity=1.5)

    def test_genotype_needs_entries(self):
        with pytest.raises(ValidationError):
            Genotype(cppn=minimal_cppn(np.zeros((3, 3))), entries=())

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_span_of_random_genotype_is_sum_of_positions(self, seed):
        rng = np.random.default_rng(seed)
        genotype = random_genotype(rng, InitParams(max_entries=6))
        genotype = mutate(genotype, rng, MutationParams())
        wing = express(genotype, ExpressionRanges())
        assert wing_span(wing) == pytest.approx(math.fsum(e.position for e in genotype.entries), rel=1e-12)
        assert wing.blade_count == len(genotype.entries)


class TestSerialization:

    def test_round_trip(self, designs_dir):
        text = (designs_dir / "ribbed_genotype.json").read_text(encoding="utf-8")
        genotype = deserialize(text)
        assert deserialize(serialize(genotype)) == genotype

    def test_document_has_version(self):
        assert json.loads(serialize(_genotype([50.0])))["format_version"] == 1

    def test_bad_field_reported(self):
        document = json.loads(serialize(_genotype([50.0])))
        document["entries"][0]["similarity"] = 3.0
        with pytest.raises(FormatError, match="similarity"):
            deserialize(json.dumps(document), source="g.json")

    def test_not_json(self):
        with pytest.raises(FormatError):
            deserialize("{broken", source="g.json")


class TestMutation:

    def test_insert_only_adds_one_entry(self):
        params = MutationParams(insert_entry=1.0, remove_entry=0.0, perturb_entry=0.0, perturb_weight=0.0,
                                add_edge=0.0, add_node=0.0, change_activation=0.0)
        parent = _genotype([40.0, 60.0], age=3, lineage=17)
        child = mutate(parent, np.random.default_rng(1), params)
        assert len(child.entries) == 3
        assert child.cppn == parent.cppn
        assert (child.age, child.lineage) == (3, 17)

    def test_perturb_keeps_similarity_in_range(self):
        params = MutationParams(insert_entry=0.0, remove_entry=0.0, perturb_entry=1.0, perturb_weight=0.0,
                                add_edge=0.0, add_node=0.0, change_activation=0.0, sigma_similarity=5.0)
        genotype = _genotype([40.0], similarity=0.9)
        rng = np.random.default_rng(3)
        for _ in range(50):
            genotype = mutate(genotype, rng, params)
            assert 0.0 <= genotype.entries[0].similarity <= 1.0
            assert genotype.entries[0].position > 0

    def test_add_node_splits_edge(self):
        params = MutationParams(insert_entry=0.0, remove_entry=0.0, perturb_entry=1e-9, perturb_weight=0.0,
                                add_edge=0.0, add_node=1.0, change_activation=0.0)
        parent = _genotype([50.0], cppn=_cppn([(2, 3, 0.8)]))
        child = mutate(parent, np.random.default_rng(5), params)
        if len(child.cppn.nodes) == len(parent.cppn.nodes):
            pytest.skip("рулетка выбрала возмущение записи")
        (hidden,) = child.cppn.hidden_nodes
        assert hidden.id == 6
        assert set(child.cppn.edge_pairs) == {(2, 6), (6, 3)}
        weights = {(e.source, e.target): e.weight for e in child.cppn.edges}
        assert weights[(2, 6)] == 1.0
        assert weights[(6, 3)] == 0.8

    def test_same_seed_same_child(self):
        parent = _genotype([40.0, 60.0, 80.0])
        params = MutationParams()
        first = mutate(parent, np.random.default_rng(42), params)
        second = mutate(parent, np.random.default_rng(42), params)
        assert first == second

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_mutation_keeps_genotype_valid(self, seed):
        rng = np.random.default_rng(seed)
        genotype = random_genotype(rng, InitParams(min_entries=1, max_entries=2))
        for _ in range(10):
            genotype = mutate(genotype, rng, MutationParams())
            assert len(genotype.entries) >= 1
            topological_order([n.id for n in genotype.cppn.nodes], genotype.cppn.edge_pairs)

    def test_params_need_entry_mutation(self):
        with pytest.raises(ValidationError):
            MutationParams(insert_entry=0.0, perturb_entry=0.0)


class TestCrossover:

    def test_identical_parents_give_same_entries(self):
        parent = _genotype([30.0, 40.0, 50.0])
        for seed in range(20):
            child = crossover(parent, parent, np.random.default_rng(seed))
            assert child.entries == parent.entries

    def test_cppn_from_stronger_parent(self):
        a = _genotype([30.0, 40.0], cppn=minimal_cppn(np.ones((3, 3))), age=2)
        b = _genotype([50.0], cppn=minimal_cppn(-np.ones((3, 3))), age=5)
        child = crossover(a, b, np.random.default_rng(0), lift_a=0.02, lift_b=0.05)
        assert child.cppn == b.cppn
        assert child.age == 5

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1),
           size_a=st.integers(min_value=1, max_value=6), size_b=st.integers(min_value=1, max_value=6))
    def test_child_never_empty(self, seed, size_a, size_b):
        a = _genotype([10.0 + i for i in range(size_a)])
        b = _genotype([100.0 + i for i in range(size_b)])
        child = crossover(a, b, np.random.default_rng(seed))
        assert len(child.entries) >= 1
        # префикс a, затем суффикс b
        from_a = [e for e in child.entries if e.position < 100.0]
        assert list(child.entries[:len(from_a)]) == list(a.entries[:len(from_a)])

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1),
           size_a=st.integers(min_value=1, max_value=8), size_b=st.integers(min_value=1, max_value=8))
    def test_child_length_between_parents(self, seed, size_a, size_b):
        a = _genotype([10.0 + i for i in range(size_a)])
        b = _genotype([100.0 + i for i in range(size_b)])
        child = crossover(a, b, np.random.default_rng(seed))
        assert min(size_a, size_b) <= len(child.entries) <= max(size_a, size_b)

    def test_boundary_cuts_reproduce_parents(self):
        a = _genotype([10.0, 11.0])
        b = _genotype([100.0, 101.0, 102.0, 103.0, 104.0])
        children = [crossover(a, b, np.random.default_rng(seed)).entries for seed in range(60)]
        # разрез в 0 даёт массив b, разрез в конце - массив a
        assert b.entries in children
        assert a.entries in children
        assert {len(entries) for entries in children} <= {2, 3, 4, 5}

    def test_splice(self):
        a = _genotype([1.0, 2.0, 3.0]).entries
        b = _genotype([7.0, 8.0]).entries
        assert [e.position for e in splice_entries(a, b, 2, 1)] == [1.0, 2.0, 8.0]

    def test_empty_splice_rejected(self):
        a = _genotype([1.0]).entries
        with pytest.raises(ValueError):
            splice_entries(a, a, 0, 1)
        with pytest.raises(ValueError):
            splice_entries(a, a, 3, 0)


class TestRandomGenotype:

    def test_fresh_genotype(self):
        init = InitParams(min_entries=2, max_entries=4, position_range=(30.0, 150.0))
        genotype = random_genotype(np.random.default_rng(9), init)
        assert genotype.age == 0
        assert 2 <= len(genotype.entries) <= 4
        assert all(30.0 <= e.position <= 150.0 for e in genotype.entries)
        assert len(genotype.cppn.edges) == 9

    def test_init_params_ordered(self):
        with pytest.raises(ValidationError):
            InitParams(min_entries=5, max_entries=2)
