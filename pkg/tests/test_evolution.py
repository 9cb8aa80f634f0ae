"""
Тесты эволюции: NSGA-II, цели, поколение, полный запуск и файлы запуска
"""

import asyncio
import json
import math

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

import evolution.objectives as objectives_module
from evolution.engine import (EvolutionConfig, child_rng, evaluate_batch, final_ndf, initial_population,
                              next_generation, run_evolution)
from evolution.nsga import (crowding_distance, crowding_distance_keys, dominates, nondominated_sort,
                            nondominated_sort_keys, rank_and_crowd, tournament,
                            truncate, worst_crowded)
from evolution.objectives import SENTINEL_COST, ObjectiveVector, evaluate, evaluate_detailed
from evolution.run_store import GENERATION_COLUMNS, NDF_COLUMNS
from genotype.cppn import minimal_cppn
from genotype.genome import ExpressionEntry, Genotype
from utils.errors import SimulationAbort

FAST_SIM = {"dt": 1e-3, "duration": 0.6, "settle_cycles": 1, "average_cycles": 2}


def _vector(lift, cost, feasibility=0.0, age=0):
    return ObjectiveVector(lift=lift, drive_cost=cost, feasibility=feasibility, age=age)


def _config(**overrides):
    values = {"population": 4, "generations": 2, "seed": 7, "sim": FAST_SIM,
              "init": {"min_entries": 1, "max_entries": 3}}
    values.update(overrides)
    return EvolutionConfig(**values)


def _genotype(positions, chord_bias=-1.0):
    weights = np.zeros((3, 3))
    weights[2, 0] = chord_bias
    entries = tuple(ExpressionEntry(position=p, similarity=0.5) for p in positions)
    return Genotype(cppn=minimal_cppn(weights), entries=entries)


def _dominance_matrix(values):
    """[i, j] = True, если i доминирует j (минимизация)"""
    no_worse = np.all(values[:, None, :] <= values[None, :, :], axis=2)
    better = np.any(values[:, None, :] < values[None, :, :], axis=2)
    return no_worse & better


def _peel_fronts(values):
    """Фронты полным перебором: снимаем недоминируемых по одному слою"""
    dominated_by = _dominance_matrix(values)
    remaining = np.ones(len(values), dtype=bool)
    fronts = []
    while remaining.any():
        dominated = dominated_by[remaining].any(axis=0)
        front = np.flatnonzero(remaining & ~dominated)
        fronts.append(front.tolist())
        remaining[front] = False
    return fronts


class TestDominance:

    def test_more_lift_dominates(self):
        assert dominates(_vector(0.05, 1.0), _vector(0.04, 1.0))
        assert not dominates(_vector(0.04, 1.0), _vector(0.05, 1.0))

    def test_equal_vectors_do_not_dominate(self):
        assert not dominates(_vector(0.05, 1.0), _vector(0.05, 1.0))

    def test_trade_off_is_mutual_non_dominance(self):
        a, b = _vector(0.05, 2.0), _vector(0.03, 1.0)
        assert not dominates(a, b) and not dominates(b, a)

    def test_age_counts(self):
        assert dominates(_vector(0.05, 1.0, age=1), _vector(0.05, 1.0, age=4))

    def test_fronts(self):
        population = [_vector(0.05, 1.0), _vector(0.03, 2.0), _vector(0.04, 0.5), _vector(0.02, 3.0)]
        assert nondominated_sort(population) == [[0, 2], [1], [3]]

    def test_crowding_boundaries_infinite(self):
        front = [_vector(0.05, 3.0), _vector(0.04, 2.0), _vector(0.03, 1.0)]
        distance = crowding_distance(front)
        assert distance[0] == math.inf and distance[2] == math.inf
        assert distance[1] == pytest.approx(2.0)

    def test_small_fronts_all_infinite(self):
        assert crowding_distance([_vector(0.05, 1.0), _vector(0.04, 0.5)]) == [math.inf, math.inf]

    def test_truncate_keeps_fronts_in_order(self):
        keys = [v.minimization_key() for v in
                [_vector(0.02, 3.0), _vector(0.05, 1.0), _vector(0.03, 2.0), _vector(0.04, 0.5)]]
        survivors = truncate(keys, 2)
        assert sorted(survivors) == [1, 3]

    def test_tournament_prefers_lower_rank(self):
        rng = np.random.default_rng(0)
        wins = [tournament([0, 1], [0.0, 0.0], rng) for _ in range(200)]
        # проигрывает 1 только если оба раза выбран он сам
        assert wins.count(0) > wins.count(1)

    def test_worst_crowded_breaks_ties_by_lift(self):
        lifts = {0: 0.05, 1: 0.01, 2: 0.03}
        assert worst_crowded([0, 1, 2], [math.inf] * 3, lambda i: lifts[i]) == 1

    def test_rank_and_crowd(self):
        keys = [(-0.05, 1.0), (-0.04, 2.0), (-0.03, 0.5)]
        ranks, crowding, fronts = rank_and_crowd(keys)
        assert ranks == [0, 1, 0]
        assert fronts == [[0, 2], [1]]
        assert crowding[0] == math.inf

    def test_sort_matches_brute_force_peeling(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            size = int(rng.integers(1, 201))
            # мелкая целочисленная сетка даёт много совпадений по целям
            values = rng.integers(0, 5, size=(size, 4)).astype(float)
            keys = [tuple(row) for row in values]
            fronts = nondominated_sort_keys(keys)
            assert [sorted(front) for front in fronts] == _peel_fronts(values)

    def test_later_fronts_never_dominate_earlier(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            values = rng.integers(0, 6, size=(int(rng.integers(2, 120)), 4)).astype(float)
            dominated_by = _dominance_matrix(values)
            fronts = nondominated_sort_keys([tuple(row) for row in values])
            for k, front in enumerate(fronts):
                later = [i for tail in fronts[k + 1:] for i in tail]
                assert not dominated_by[np.ix_(later, front)].any()
                # каждый член фронта k > 0 доминируется кем-то из фронта k - 1
                if k:
                    assert dominated_by[np.ix_(fronts[k - 1], front)].any(axis=0).all()

    def test_crowding_properties(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            size = int(rng.integers(1, 40))
            values = rng.random((size, 4))
            keys = [tuple(row) for row in values]
            distance = np.array(crowding_distance_keys(keys))
            if size <= 2:
                assert np.isinf(distance).all()
                continue
            assert (distance >= 0.0).all()
            finite = distance[np.isfinite(distance)]
            assert (finite <= values.shape[1]).all()
            for m in range(values.shape[1]):
                assert math.isinf(distance[values[:, m].argmin()])
                assert math.isinf(distance[values[:, m].argmax()])
            order = rng.permutation(size)
            shuffled = crowding_distance_keys([keys[i] for i in order])
            assert shuffled == pytest.approx(list(distance[order]))

    def test_crowding_skips_flat_objective(self):
        keys = [(0.0, 1.0), (0.0, 2.0), (0.0, 4.0)]
        assert crowding_distance_keys(keys) == [math.inf, pytest.approx(1.0), math.inf]


class TestConfig:

    def test_defaults(self):
        config = EvolutionConfig()
        assert config.population == 100
        assert config.generations == 200
        assert config.p_crossover == 0.2
        assert config.p_mutation == 0.8
        assert config.flap.frequency == 5.0
        assert config.flap.amplitude == pytest.approx(math.radians(40.0))
        assert config.sim.duration == 2.0

    @pytest.mark.parametrize("population", [3, 5, 2])
    def test_population_even_and_large_enough(self, population):
        with pytest.raises(ValidationError):
            EvolutionConfig(population=population)

    def test_unknown_key(self):
        with pytest.raises(ValidationError):
            EvolutionConfig(populaton=10)

    def test_child_streams_independent_of_order(self):
        config = _config()
        first = child_rng(config, 3, 1).random()
        child_rng(config, 3, 0).random()
        assert child_rng(config, 3, 1).random() == first
        assert child_rng(config, 3, 2).random() != first


class TestObjectives:

    def test_feasible_genotype(self):
        config = _config()
        evaluation = evaluate_detailed(_genotype([60.0, 60.0]), config)
        lo, hi = config.lift_bounds
        assert evaluation.objectives.feasibility == 0.0
        assert lo <= evaluation.objectives.lift <= hi
        assert evaluation.objectives.drive_cost == evaluation.power
        assert not evaluation.sentinel

    def test_torque_cost_mode(self):
        config = _config(drive_cost_mode="torque")
        evaluation = evaluate_detailed(_genotype([60.0]), config)
        assert evaluation.objectives.drive_cost == evaluation.torque

    def test_infeasible_genotype_still_simulated(self):
        evaluation = evaluate_detailed(_genotype([10.0, 60.0]), _config())
        assert evaluation.objectives.feasibility == pytest.approx(20.0 / 120.0)
        assert math.isfinite(evaluation.raw_lift)
        assert not evaluation.sentinel

    def test_evaluate_returns_objectives(self):
        genotype = _genotype([60.0])
        config = _config()
        assert evaluate(genotype, config) == evaluate_detailed(genotype, config).objectives

    def test_abort_gives_worst_objectives(self, monkeypatch):
        def explode(*args, **kwargs):
            raise SimulationAbort(0.123, 1, "тест")

        monkeypatch.setattr(objectives_module, "simulate", explode)
        config = _config()
        evaluation = evaluate_detailed(_genotype([60.0]), config)
        assert evaluation.sentinel
        assert evaluation.objectives.lift == config.lift_bounds[0]
        assert evaluation.objectives.drive_cost == SENTINEL_COST
        assert "0.123" in evaluation.detail


class TestGeneration:

    @pytest.mark.asyncio
    async def test_batch_keeps_order(self):
        config = _config()
        genotypes = [_genotype([60.0]), _genotype([40.0, 40.0, 40.0])]
        evaluations = await evaluate_batch(genotypes, config)
        assert [e.raw_lift for e in evaluations] == [evaluate_detailed(g, config).raw_lift for g in genotypes]

    @pytest.mark.asyncio
    async def test_initial_population(self):
        config = _config()
        population = await initial_population(config)
        assert len(population) == config.population
        assert all(member.genotype.age == 0 for member in population)
        assert any(member.rank == 0 for member in population)

    @pytest.mark.asyncio
    async def test_next_generation_size_and_ages(self):
        config = _config()
        population = await initial_population(config)
        # next_generation запускает свой цикл событий, поэтому вызываем его вне текущего
        loop = asyncio.get_running_loop()
        after = await loop.run_in_executor(
            None, next_generation, population, np.random.default_rng([config.seed, 1]), config, 1)
        assert len(after) == config.population
        assert sum(1 for member in after if member.genotype.age == 0) >= 1
        assert max(member.genotype.age for member in after) <= 1


class TestRun:

    def test_run_files_and_elitism(self, tmp_path):
        config = _config(generations=3)
        record = run_evolution(config, tmp_path / "run", verbose=False)

        assert len(record.summaries) == 3
        best = [record.initial.best_lift] + [s.best_lift for s in record.summaries]
        assert all(b >= a for a, b in zip(best, best[1:]))

        root = tmp_path / "run"
        generations = pd.read_csv(root / "generations.csv")
        assert list(generations.columns) == GENERATION_COLUMNS
        assert list(generations["gen"]) == [1, 2, 3]
        assert json.loads((root / "config.json").read_text(encoding="utf-8"))["seed"] == 7
        assert (root / "population_gen3.jsonl").exists()

        ndf = json.loads((root / "ndf.json").read_text(encoding="utf-8"))
        assert len(ndf["members"]) == len(record.ndf)
        assert list(pd.read_csv(root / "ndf.csv").columns) == NDF_COLUMNS

    def test_final_front_is_feasible_and_sorted(self):
        record = run_evolution(_config(), verbose=False)
        assert record.out_dir is None
        lifts = [m.objectives.lift for m in record.ndf]
        assert lifts == sorted(lifts, reverse=True)
        assert all(m.objectives.feasibility == 0.0 and m.genotype.age == 0 for m in record.ndf)
        assert final_ndf(record.population) == record.ndf

    def test_same_seed_same_files(self, tmp_path):
        config = _config(generations=2)
        run_evolution(config, tmp_path / "a", verbose=False)
        run_evolution(config, tmp_path / "b", verbose=False)
        for name in ("generations.csv", "ndf.json", "ndf.csv", "population_gen2.jsonl"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.fixture(scope="module")
def smoke_runs():
    """Три коротких запуска μ=20 на 10 поколений с разными seed"""
    return {seed: run_evolution(_config(population=20, generations=10, seed=seed), verbose=False)
            for seed in (0, 1, 2)}


@pytest.mark.slow
class TestSmokeRun:

    def test_feasibility_reaches_zero(self, smoke_runs):
        record = smoke_runs[0]
        assert len(record.summaries) == 10
        feasible = sum(1 for m in record.population if m.objectives.feasibility == 0.0)
        assert feasible >= 0.9 * len(record.population)
        assert record.summaries[-1].feasible_count == feasible

    def test_best_lift_never_drops(self, smoke_runs):
        for record in smoke_runs.values():
            best = [record.initial.best_lift] + [s.best_lift for s in record.summaries]
            assert all(b >= a for a, b in zip(best, best[1:]))

    def test_ndf_trend_positive_on_average(self, smoke_runs):
        trends = [record.trend for record in smoke_runs.values() if record.trend is not None]
        assert trends, "ни в одном запуске не набралось трёх крыльев с разбросом на фронте"
        assert float(np.mean(trends)) > 0.0
