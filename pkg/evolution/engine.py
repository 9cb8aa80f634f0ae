"""
Эволюционный цикл (NSGA-II + AFPO)

Поколение:
1. бинарным турниром выбираются родители, потомки получают скрещивание
   (p_crossover) и мутацию (p_mutation)
2. потомки оцениваются параллельно
3. родители ∪ потомки усекаются до μ по NSGA-II
4. возраст выживших растёт на 1
5. один случайный генотип возраста 0 заменяет худшего по crowding
   члена последнего фронта (AFPO)

Случайные потоки потомков выводятся из (seed, поколение, номер потомка),
поэтому порядок параллельных вычислений не влияет на результат.
"""

import asyncio
import logging
import statistics
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.stats import spearmanr

from config.settings import get_settings
from evolution.nsga import nondominated_sort_keys, rank_and_crowd, tournament, truncate, worst_crowded
from evolution.objectives import LIFT_BOUNDS, Evaluation, ObjectiveVector, evaluate_detailed
from evolution.run_store import GenerationSummary, RunStore
from genotype.genome import ExpressionRanges, Genotype, express
from genotype.operators import InitParams, MutationParams, crossover, mutate, random_genotype
from simulator.settings import FlapProfile, SimConfig
from utils.console import Console
from wing.feasibility import FeasibleBounds
from wing.geometry import compute_cms
from wing.models import MaterialConfig, WingPhenotype

logger = logging.getLogger(__name__)


class EvolutionConfig(BaseModel):
    """
    Конфигурация эксперимента

    Значения по умолчанию - настройки эволюционного дизайна:
    μ = 100, 200 поколений, скрещивание 0.2, мутация 0.8, 5 Гц, ±40°, 2 с на оценку.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    population: int = 100
    generations: int = Field(200, ge=1)
    p_crossover: float = Field(0.2, ge=0.0, le=1.0)
    p_mutation: float = Field(0.8, ge=0.0, le=1.0)
    drive_cost_mode: Literal["power", "torque"] = "power"
    seed: int = Field(0, ge=0, lt=2 ** 64)
    snapshot_every: int = Field(10, ge=1)
    workers: Optional[int] = Field(None, ge=1)
    lift_bounds: Tuple[float, float] = LIFT_BOUNDS
    coeff_table: Optional[str] = None

    sim: SimConfig = Field(default_factory=SimConfig)
    flap: FlapProfile = Field(default_factory=FlapProfile)
    material: MaterialConfig = Field(default_factory=MaterialConfig)
    ranges: ExpressionRanges = Field(default_factory=ExpressionRanges)
    bounds: Optional[FeasibleBounds] = None
    mutation: MutationParams = Field(default_factory=MutationParams)
    init: InitParams = Field(default_factory=InitParams)

    @model_validator(mode="after")
    def _check(self) -> "EvolutionConfig":
        if self.population < 4 or self.population % 2:
            raise ValueError(f"population должна быть чётной и ≥ 4, получено {self.population}")
        lo, hi = self.lift_bounds
        if not 0 < lo < hi:
            raise ValueError(f"lift_bounds должны быть 0 < min < max, получено {self.lift_bounds}")
        return self

    def feasible_bounds(self) -> FeasibleBounds:
        return self.bounds or FeasibleBounds.from_material(self.material)


@dataclass(frozen=True)
class Individual:
    """Генотип, его фенотип, оценка и положение в сортировке"""
    genotype: Genotype
    phenotype: WingPhenotype
    evaluation: Evaluation
    rank: int = 0
    crowding: float = 0.0

    @property
    def objectives(self) -> ObjectiveVector:
        return self.evaluation.objectives

    def aged(self, age: int) -> "Individual":
        genotype = Genotype(cppn=self.genotype.cppn, entries=self.genotype.entries,
                            age=age, lineage=self.genotype.lineage)
        return replace(self, genotype=genotype, evaluation=self.evaluation.with_age(age))


@dataclass
class RunRecord:
    """Итог запуска: конфигурация, сводки поколений, популяция и финальный фронт"""
    config: EvolutionConfig
    initial: GenerationSummary
    summaries: List[GenerationSummary]
    population: List[Individual]
    ndf: List[Individual]
    trend: Optional[float]
    out_dir: Optional[Path]


def child_rng(config: EvolutionConfig, generation: int, index: int) -> np.random.Generator:
    """Отдельный поток случайных чисел для потомка index поколения generation"""
    return np.random.default_rng([config.seed, generation, index])


def _make_executor(config: EvolutionConfig) -> Optional[Executor]:
    workers = config.workers or get_settings().workers
    return ProcessPoolExecutor(max_workers=workers) if workers > 1 else None


async def evaluate_batch(genotypes: Sequence[Genotype], config: EvolutionConfig,
                         executor: Optional[Executor] = None) -> List[Evaluation]:
    """
    Оценить генотипы параллельно.

    Симуляция синхронная, поэтому используем run_in_executor;
    результаты возвращаются в порядке входа.

    Args:
        genotypes: Генотипы
        config: Конфигурация
        executor: Пул процессов (None - пул потоков по умолчанию)

    Returns:
        List[Evaluation]: Оценки в том же порядке
    """
    loop = asyncio.get_running_loop()
    tasks = [loop.run_in_executor(executor, evaluate_detailed, genotype, config) for genotype in genotypes]
    return list(await asyncio.gather(*tasks))


def _individuals(genotypes: Sequence[Genotype], evaluations: Sequence[Evaluation],
                 config: EvolutionConfig) -> List[Individual]:
    return [Individual(genotype=g, phenotype=express(g, config.ranges), evaluation=e)
            for g, e in zip(genotypes, evaluations)]


def sort_population(population: Sequence[Individual]) -> List[Individual]:
    """Проставить ранги и crowding distance"""
    keys = [member.objectives.minimization_key() for member in population]
    ranks, crowding, _ = rank_and_crowd(keys)
    return [replace(member, rank=rank, crowding=crowd)
            for member, rank, crowd in zip(population, ranks, crowding)]


async def initial_population(config: EvolutionConfig, executor: Optional[Executor] = None) -> List[Individual]:
    genotypes = [random_genotype(child_rng(config, 0, i), config.init) for i in range(config.population)]
    evaluations = await evaluate_batch(genotypes, config, executor)
    return sort_population(_individuals(genotypes, evaluations, config))


async def advance_generation(population: Sequence[Individual], rng: np.random.Generator,
                             config: EvolutionConfig, generation: int,
                             executor: Optional[Executor] = None) -> List[Individual]:
    """Одно поколение NSGA-II с AFPO (см. описание модуля)"""
    size = config.population
    ranks = [member.rank for member in population]
    crowding = [member.crowding for member in population]

    children: List[Genotype] = []
    reused: List[Optional[Evaluation]] = []
    for index in range(size):
        first = population[tournament(ranks, crowding, rng)]
        second = population[tournament(ranks, crowding, rng)]
        stream = child_rng(config, generation, index)
        child = first.genotype
        if stream.random() < config.p_crossover:
            child = crossover(first.genotype, second.genotype, stream,
                              first.evaluation.raw_lift, second.evaluation.raw_lift)
        if stream.random() < config.p_mutation:
            child = mutate(child, stream, config.mutation)
        children.append(child)
        # клон родителя не пересчитываем: оценка - чистая функция генотипа
        reused.append(first.evaluation if child is first.genotype else None)

    pending = [child for child, known in zip(children, reused) if known is None]
    fresh = iter(await evaluate_batch(pending, config, executor))
    evaluations = [known if known is not None else next(fresh) for known in reused]
    offspring = _individuals(children, evaluations, config)

    merged = list(population) + offspring
    keys = [member.objectives.minimization_key() for member in merged]
    survivors = [merged[i].aged(merged[i].genotype.age + 1) for i in truncate(keys, size)]

    # AFPO: новичок возраста 0 вместо худшего по crowding в последнем фронте
    newcomer = random_genotype(child_rng(config, generation, size), config.init)
    newcomer_eval = (await evaluate_batch([newcomer], config, executor))[0]
    keys = [member.objectives.minimization_key() for member in survivors]
    _, survivor_crowding, fronts = rank_and_crowd(keys)
    victim = worst_crowded(fronts[-1], survivor_crowding, lambda i: survivors[i].objectives.lift)
    survivors[victim] = _individuals([newcomer], [newcomer_eval], config)[0]

    return sort_population(survivors)


def next_generation(population: Sequence[Individual], rng: np.random.Generator,
                    config: EvolutionConfig, generation: int = 1) -> List[Individual]:
    """Синхронная обёртка над advance_generation"""
    return asyncio.run(advance_generation(population, rng, config, generation))


def summarize(generation: int, population: Sequence[Individual]) -> GenerationSummary:
    lifts = [member.objectives.lift for member in population]
    feasible = [member for member in population if member.objectives.feasibility == 0.0]
    return GenerationSummary(
        gen=generation,
        best_lift=max(lifts),
        median_lift=statistics.median(lifts),
        front0_size=sum(1 for member in population if member.rank == 0),
        feasible_count=len(feasible),
        best_feasible_raw_lift=max((m.evaluation.raw_lift for m in feasible), default=float("nan")),
    )


def final_ndf(population: Sequence[Individual]) -> List[Individual]:
    """
    Финальный недоминируемый фронт.

    Только технологичные крылья, возраст обнуляется, сортировка
    по (подъёмная сила, стоимость привода). Результат упорядочен
    по убыванию подъёмной силы.
    """
    feasible = [member.aged(0) for member in population if member.objectives.feasibility == 0.0]
    if not feasible:
        logger.warning("В финальной популяции нет технологичных крыльев: фронт пуст")
        return []
    keys = [(-m.objectives.lift, m.objectives.drive_cost) for m in feasible]
    front = nondominated_sort_keys(keys)[0]
    members = [replace(feasible[i], rank=0) for i in front]
    return sorted(members, key=lambda m: (-m.objectives.lift, m.objectives.drive_cost))


def ndf_maxima(ndf: Sequence[Individual]) -> Tuple[int, float]:
    """Нормирующие максимумы B_max, S_max по фронту"""
    return (max(m.phenotype.blade_count for m in ndf), max(m.phenotype.span for m in ndf))


def ndf_trend(ndf: Sequence[Individual]) -> Optional[float]:
    """
    Корреляция Спирмена между C_MS и сырой подъёмной силой на фронте.

    Returns:
        Optional[float]: Коэффициент или None (меньше 3 членов или нет разброса)
    """
    if len(ndf) < 3:
        return None
    blade_max, span_max = ndf_maxima(ndf)
    cms = [compute_cms(m.phenotype.blade_count, m.phenotype.span, blade_max, span_max) for m in ndf]
    lifts = [m.evaluation.raw_lift for m in ndf]
    if len(set(cms)) < 2 or len(set(lifts)) < 2:
        return None
    rho, _ = spearmanr(cms, lifts)
    return None if np.isnan(rho) else float(rho)


async def run_evolution_async(config: EvolutionConfig, out_dir: Optional[Union[str, Path]] = None,
                              verbose: bool = True) -> RunRecord:
    """
    Полный эволюционный запуск.

    Args:
        config: Конфигурация
        out_dir: Каталог запуска (None - ничего не записывается)
        verbose: Печатать прогресс

    Returns:
        RunRecord: Итоги запуска
    """
    console = Console(verbose)
    store = RunStore(Path(out_dir)) if out_dir is not None else None
    if store:
        store.write_config(config)

    console.rule()
    console.say(f"🧬 Эволюция: μ={config.population}, поколений {config.generations}, seed={config.seed}")
    console.rule()

    executor = _make_executor(config)
    try:
        population = await initial_population(config, executor)
        initial = summarize(0, population)
        console.say(f"   Поколение 0: лучшая подъёмная сила {initial.best_lift * 1000:.1f} мН, "
                    f"технологичных {initial.feasible_count}/{config.population}")

        summaries = []
        for generation in range(1, config.generations + 1):
            rng = np.random.default_rng([config.seed, generation])
            population = await advance_generation(population, rng, config, generation, executor)
            summary = summarize(generation, population)
            summaries.append(summary)
            if store:
                store.append_generation(summary)
                if generation % config.snapshot_every == 0 or generation == config.generations:
                    store.write_population(generation, population)
            console.say(f"   Поколение {generation}: лучшая {summary.best_lift * 1000:.1f} мН, "
                        f"медиана {summary.median_lift * 1000:.1f} мН, фронт {summary.front0_size}, "
                        f"технологичных {summary.feasible_count}")
    finally:
        if executor is not None:
            executor.shutdown()

    ndf = final_ndf(population)
    trend = ndf_trend(ndf)
    if store:
        store.write_ndf(ndf, trend)

    console.say(f"\n✅ Эволюция завершена: в финальном фронте {len(ndf)} крыльев")
    return RunRecord(config=config, initial=initial, summaries=summaries, population=list(population),
                     ndf=ndf, trend=trend, out_dir=store.root if store else None)


def run_evolution(config: EvolutionConfig, out_dir: Optional[Union[str, Path]] = None,
                  verbose: bool = True) -> RunRecord:
    """Синхронная обёртка над run_evolution_async"""
    return asyncio.run(run_evolution_async(config, out_dir, verbose))
