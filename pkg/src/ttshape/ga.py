"""Evolutionary search over tensor shapes.

Roulette selection with one elite copy, single-point crossover, uniform
redraw mutation, and gene-doubling repair for offspring whose element count
drops below the data's. All randomness is drawn from one sequential stream
before fitness evaluation, so evaluations may run in parallel worker
threads without changing any result.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import tensor
from .errors import BadCrossoverPoint, NoFeasibleShape, OrderMismatch
from .tt import FitnessRecord, evaluate_shape

# Added to shifted fitness values so every individual keeps a nonzero
# selection probability when compression ratios are nonpositive.
PROBABILITY_SHIFT = 1e-6

THREADS_ENV_VAR = "TTSHAPE_THREADS"


@dataclass(frozen=True)
class GAConfig:
    """Search settings. `upper` defaults suit small inputs; for large data
    pass an explicit bound (see default_upper)."""

    generations: int = 50
    population_size: int = 100
    parent_size: int = 30
    order: int = 3
    lower: int = 2
    upper: int = 4096
    error_bound: float = 0.1
    mutation_rate: float | None = None  # None resolves to 1 / order
    seed: int = 0
    max_repair_attempts: int = 10_000

    def __post_init__(self):
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if not 1 <= self.parent_size < self.population_size:
            raise ValueError("parent size must satisfy 1 <= p < population size")
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if self.lower < 1:
            raise ValueError("lower bound must be >= 1")
        if self.upper < self.lower:
            raise ValueError("upper bound must be >= lower bound")
        if self.upper**self.order > tensor.MAX_CARDINALITY:
            raise ValueError(
                "upper**order exceeds the representable element count; "
                "lower the bound or the order"
            )
        if self.mutation_rate is None:
            object.__setattr__(self, "mutation_rate", 1.0 / self.order)
        if not 0.0 < self.mutation_rate <= 1.0:
            raise ValueError("mutation rate must be in (0, 1]")
        if self.error_bound < 0:
            raise ValueError("error bound must be nonnegative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.max_repair_attempts < 1:
            raise ValueError("max repair attempts must be >= 1")

    def require_feasible(self, data_cardinality: int) -> None:
        """The box [lower, upper]^order must contain a shape big enough."""
        if self.upper**self.order < data_cardinality:
            raise NoFeasibleShape(
                f"{self.upper}**{self.order} < {data_cardinality}: "
                "no candidate shape can hold the data"
            )


def default_upper(data_cardinality: int) -> int:
    """Default per-dimension upper bound: the element count, capped at 4096."""
    return min(int(data_cardinality), 4096)


@dataclass(frozen=True)
class Individual:
    genome: tuple[int, ...]
    fitness: FitnessRecord


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    best_compression: float
    mean_compression: float
    best_error: float
    best_genome: tuple[int, ...]


@dataclass
class SearchHistory:
    records: list[GenerationRecord] = field(default_factory=list)
    evaluations: int = 0
    cache_hits: int = 0


def selection_probabilities(ratios: Sequence[float]) -> np.ndarray:
    """Roulette weights proportional to compression ratio.

    When any ratio is nonpositive, all are shifted by the minimum plus a
    small constant so weights stay positive and still sum to one.
    """
    values = np.asarray(ratios, dtype=np.float64)
    if values.size == 0:
        raise ValueError("need at least one fitness value")
    if np.all(values > 0):
        return values / values.sum()
    shifted = values - values.min() + PROBABILITY_SHIFT
    return shifted / shifted.sum()


def select_parents(
    population: Sequence[Individual],
    probabilities: Sequence[float],
    parent_size: int,
    rng: np.random.Generator,
) -> list[Individual]:
    """parent_size - 1 roulette draws with replacement, plus one copy of the
    best individual (ties broken by lowest index)."""
    if not 1 <= parent_size <= len(population):
        raise ValueError("parent size must be between 1 and the population size")
    cumulative = np.cumsum(np.asarray(probabilities, dtype=np.float64))
    parents = []
    for _ in range(parent_size - 1):
        i = int(np.searchsorted(cumulative, rng.random(), side="right"))
        parents.append(population[min(i, len(population) - 1)])
    best = population[
        int(np.argmax([ind.fitness.compression for ind in population]))
    ]
    parents.append(best)
    return parents


def crossover(a: Sequence[int], b: Sequence[int], point: int) -> tuple[int, ...]:
    """Single-point crossover: genes up to `point` from a, the rest from b."""
    left = tuple(int(n) for n in a)
    right = tuple(int(n) for n in b)
    if len(left) != len(right):
        raise OrderMismatch(f"genome lengths differ: {len(left)} vs {len(right)}")
    if not 1 <= point <= len(left) - 1:
        raise BadCrossoverPoint(
            f"crossover point {point} outside 1..{len(left) - 1}"
        )
    return left[:point] + right[point:]


def mutate(
    genome: Sequence[int], cfg: GAConfig, rng: np.random.Generator
) -> tuple[int, ...]:
    """Redraw each gene uniformly from [lower, upper] with probability
    mutation_rate; when no gene fires, one uniformly chosen gene is redrawn
    (the redraw may coincide with the old value)."""
    genes = [int(n) for n in genome]
    hits = rng.random(len(genes)) < cfg.mutation_rate
    if not hits.any():
        hits[int(rng.integers(0, len(genes)))] = True
    for i in np.nonzero(hits)[0]:
        genes[i] = int(rng.integers(cfg.lower, cfg.upper + 1))
    return tuple(genes)


def repair_feasibility(
    genome: Sequence[int],
    data_cardinality: int,
    cfg: GAConfig,
    rng: np.random.Generator,
) -> tuple[int, ...]:
    """Grow uniformly chosen genes by doubling (capped at the upper bound)
    until the genome holds at least data_cardinality elements."""
    genes = [int(n) for n in genome]
    attempts = 0
    while tensor.cardinality(genes) < data_cardinality:
        growable = [i for i, n in enumerate(genes) if n < cfg.upper]
        if not growable:
            raise NoFeasibleShape(
                f"every gene sits at the upper bound {cfg.upper} yet "
                f"{tuple(genes)} cannot hold {data_cardinality} elements"
            )
        if attempts >= cfg.max_repair_attempts:
            raise NoFeasibleShape(
                f"gave up repairing {tuple(genome)} after {attempts} attempts"
            )
        i = growable[int(rng.integers(0, len(growable)))]
        genes[i] = min(cfg.upper, 2 * genes[i])
        attempts += 1
    return tuple(genes)


Evaluator = Callable[[Sequence[tuple[int, ...]]], list[FitnessRecord]]


def init_population(
    cfg: GAConfig,
    data_cardinality: int,
    rng: np.random.Generator,
    evaluate: Evaluator,
) -> list[Individual]:
    """Draw population_size genomes uniformly from the box, repair the ones
    that are too small, and score them with the supplied batch evaluator."""
    cfg.require_feasible(data_cardinality)
    genomes = []
    for _ in range(cfg.population_size):
        draw = tuple(
            int(v) for v in rng.integers(cfg.lower, cfg.upper + 1, size=cfg.order)
        )
        genomes.append(repair_feasibility(draw, data_cardinality, cfg, rng))
    records = evaluate(genomes)
    return [Individual(g, r) for g, r in zip(genomes, records)]


class _MemoizedEvaluator:
    """Scores genomes against a fixed tensor, memoizing by genome.

    Evaluation is pure, so cache misses may be computed by worker threads;
    insertion order stays deterministic either way.
    """

    def __init__(self, data, error_bound, workers=1, use_cache=True):
        self._data = data
        self._error_bound = error_bound
        self._workers = max(1, int(workers))
        self._use_cache = use_cache
        self._cache: dict[tuple[int, ...], FitnessRecord] = {}
        self.evaluations = 0
        self.cache_hits = 0

    def _compute(self, genome):
        return evaluate_shape(self._data, genome, self._error_bound)

    def _run(self, genomes):
        if self._workers > 1 and len(genomes) > 1:
            with ThreadPoolExecutor(max_workers=self._workers) as pool:
                return list(pool.map(self._compute, genomes))
        return [self._compute(g) for g in genomes]

    def __call__(self, genomes):
        genomes = [tuple(int(n) for n in g) for g in genomes]
        if not self._use_cache:
            self.evaluations += len(genomes)
            return self._run(genomes)
        pending = []
        seen = set()
        for g in genomes:
            if g in self._cache or g in seen:
                self.cache_hits += 1
            else:
                seen.add(g)
                pending.append(g)
        self.evaluations += len(pending)
        for g, record in zip(pending, self._run(pending)):
            self._cache[g] = record
        return [self._cache[g] for g in genomes]


def _workers_from_env() -> int:
    raw = os.environ.get(THREADS_ENV_VAR)
    if not raw:
        return 1
    return max(1, int(raw))


def run_search(
    x,
    cfg: GAConfig,
    use_cache: bool = True,
    workers: int | None = None,
) -> tuple[Individual, SearchHistory]:
    """Run the full elitist search and return the best individual found
    along with the per-generation history.

    The result is fully determined by (seed, data, cfg); worker count and
    caching change speed only. `workers` defaults to the TTSHAPE_THREADS
    environment variable, or 1.
    """
    arr = tensor.as_tensor(x)
    cfg.require_feasible(arr.size)
    if workers is None:
        workers = _workers_from_env()
    rng = np.random.default_rng(cfg.seed)
    evaluator = _MemoizedEvaluator(arr, cfg.error_bound, workers, use_cache)
    population = init_population(cfg, arr.size, rng, evaluator)
    best = population[
        int(np.argmax([ind.fitness.compression for ind in population]))
    ]
    history = SearchHistory()
    for generation in range(1, cfg.generations + 1):
        ratios = [ind.fitness.compression for ind in population]
        probs = selection_probabilities(ratios)
        parents = select_parents(population, probs, cfg.parent_size, rng)
        offspring_genomes = []
        for _ in range(cfg.population_size - cfg.parent_size):
            first = parents[int(rng.integers(0, cfg.parent_size))]
            second = parents[int(rng.integers(0, cfg.parent_size))]
            if cfg.order > 1:
                point = int(rng.integers(1, cfg.order))
                child = crossover(first.genome, second.genome, point)
            else:
                child = first.genome  # single-gene genomes cannot cross
            child = mutate(child, cfg, rng)
            child = repair_feasibility(child, arr.size, cfg, rng)
            offspring_genomes.append(child)
        records = evaluator(offspring_genomes)
        offspring = [Individual(g, r) for g, r in zip(offspring_genomes, records)]
        population = parents + offspring
        assert len(population) == cfg.population_size
        idx = int(np.argmax([ind.fitness.compression for ind in population]))
        if population[idx].fitness.compression > best.fitness.compression:
            best = population[idx]
        history.records.append(
            GenerationRecord(
                generation=generation,
                best_compression=float(best.fitness.compression),
                mean_compression=float(
                    np.mean([ind.fitness.compression for ind in population])
                ),
                best_error=float(best.fitness.error),
                best_genome=best.genome,
            )
        )
    history.evaluations = evaluator.evaluations
    history.cache_hits = evaluator.cache_hits
    return best, history
