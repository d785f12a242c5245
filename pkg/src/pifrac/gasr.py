"""Genetic algorithm with sibling rivalry, driven entirely by table fractions.

Every decision reads fraction ``k + index_offset`` for a fixed index
scheme ``k``:

=====================  ==========================
initial gene (c, i)    ``c * i``
crossover gate         ``c + g``  (pair leader c)
parents s, t           ``k``, ``k + 2`` from ``k = c``, +1 per collision
mutation gate          ``c + g``  (same draw as the crossover gate)
mutated gene of c      ``c + g``
elitism slot           ``g``
=====================  ==========================

so a run is a pure function of its configuration and table.  A
generation is computed pairwise-independently from the previous one,
which lets the loop over pairs run as array operations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from pifrac.benchmarks import BenchmarkSpec, evaluate_batch
from pifrac.sampling import integer_from_unit
from pifrac.table import PiFractionTable

__all__ = [
    "DegenerateTableError",
    "GasrConfig",
    "GasrRunResult",
    "Population",
    "best_of",
    "crossover_children",
    "early_termination_check",
    "elitism_slot",
    "evaluation_budget",
    "init_population",
    "mutate_chromosome",
    "mutation_radius",
    "place_best_children",
    "run",
    "select_parents",
    "write_report",
]

Objective = Callable[[np.ndarray], np.ndarray]


class DegenerateTableError(RuntimeError):
    """No pair of distinct parents could be drawn from the table."""


@dataclass(frozen=True)
class GasrConfig:
    spec: BenchmarkSpec
    table: PiFractionTable
    population: int = 2500
    generations: int = 100
    crossover_probability: float = 0.8
    mutation_probability: float = 0.02
    w: float = 0.5
    alpha: float = 2.0
    tol: float = 1e-5
    early_termination: bool = True
    index_offset: int = 0
    objective: Objective | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.population < 2 or self.population % 2:
            raise ValueError("population must be even and >= 2")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        for name in ("crossover_probability", "mutation_probability"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.alpha <= 0:
            raise ValueError("alpha must be > 0")
        if self.tol < 0:
            raise ValueError("tol must be >= 0")
        if self.index_offset < 0:
            raise ValueError("index_offset must be >= 0")

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        if self.objective is not None:
            return np.asarray(self.objective(x), dtype=np.float64)
        return evaluate_batch(self.spec, x)


@dataclass
class Population:
    chromosomes: np.ndarray
    fitness: np.ndarray
    generation_number: int = 0


@dataclass(frozen=True)
class GasrRunResult:
    best_fitness: float
    best_chromosome: tuple[float, ...]
    best_generation: int
    evaluations: int
    trace: tuple[float, ...]
    terminated_early: bool
    last_generation: int


# -- table access ---------------------------------------------------------------


def _fractions(table: PiFractionTable, k) -> np.ndarray:
    k = np.asarray(k, dtype=np.int64)
    return table.fractions[(k - 1) % table.count]


def _integers(table: PiFractionTable, k, n: int, m: int) -> np.ndarray:
    u = _fractions(table, k)
    return np.minimum(n + np.floor((m - n + 1) * u).astype(np.int64), m)


# -- operators ------------------------------------------------------------------


def init_population(config: GasrConfig) -> tuple[Population, int]:
    """Generation 0 and the number of objective evaluations it cost."""
    n, d = config.population, config.spec.dims
    lo, hi = config.spec.bounds
    c = np.arange(1, n + 1)[:, None]
    i = np.arange(1, d + 1)[None, :]
    u = _fractions(config.table, c * i + config.index_offset)
    chromos = lo + (hi - lo) * u
    return Population(chromos, config.evaluate(chromos), 0), n


def select_parents(table: PiFractionTable, leader: int, population: int, index_offset: int = 0) -> tuple[int, int]:
    """Distinct 1-based parent numbers for the pair led by chromosome ``leader``."""
    if population < 2:
        raise ValueError("population must be >= 2")
    k = leader + index_offset
    for _ in range(table.count):
        s = integer_from_unit(table[(k - 1) % table.count + 1], 1, population)
        t = integer_from_unit(table[(k + 1) % table.count + 1], 1, population)
        if s != t:
            return s, t
        k += 1
    raise DegenerateTableError(f"no distinct parents after {table.count} attempts")


def crossover_children(parent_s, parent_t, lower, upper, w: float) -> np.ndarray:
    """The four children b1..b4 as rows of a ``(4, dims)`` array (broadcasts over leading axes)."""
    s = np.asarray(parent_s, dtype=np.float64)
    t = np.asarray(parent_t, dtype=np.float64)
    lower = np.asarray(lower, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    hi = np.maximum(s, t)
    lo = np.minimum(s, t)
    mid = (s + t) / 2.0
    b1 = (1.0 - w) * hi + w * mid
    b2 = (1.0 - w) * lo + w * mid
    b3 = (1.0 - w) * upper + w * hi
    b4 = (1.0 - w) * lower + w * lo
    b1, b2, b3, b4 = np.broadcast_arrays(b1, b2, b3, b4)
    return np.stack([b1, b2, b3, b4], axis=-2)


def place_best_children(children_fitness: Sequence[float]) -> tuple[int, int]:
    """0-based child numbers of the best and second-best child; ties keep b1..b4 order."""
    order = np.argsort(-np.asarray(children_fitness, dtype=np.float64), kind="stable")
    return int(order[0]), int(order[1])


def mutation_radius(g: int, generations: int, alpha: float) -> float:
    r = g / generations
    return 1.0 - r ** ((1.0 - r) ** alpha)


def mutate_chromosome(
    chromosome,
    lower,
    upper,
    g: int,
    generations: int,
    alpha: float,
    w: float,
    table: PiFractionTable,
    index_base: int,
) -> np.ndarray:
    """Copy of ``chromosome`` with one gene pulled inside a shrinking window."""
    x = np.array(chromosome, dtype=np.float64)
    lower = np.broadcast_to(np.asarray(lower, dtype=np.float64), x.shape)
    upper = np.broadcast_to(np.asarray(upper, dtype=np.float64), x.shape)
    k = integer_from_unit(table[(index_base - 1) % table.count + 1], 1, x.size) - 1
    mu = mutation_radius(g, generations, alpha)
    half = mu * (upper[k] - lower[k]) / 2.0
    xu = min(x[k] + half, upper[k])
    xl = max(x[k] - half, lower[k])
    x[k] = xl + w * (xu - xl)
    return x


def elitism_slot(table: PiFractionTable, g: int, population: int, index_offset: int = 0) -> int:
    """1-based slot receiving the best previous chromosome in generation ``g``."""
    return integer_from_unit(table[(g + index_offset - 1) % table.count + 1], 1, population)


def early_termination_check(trace: Sequence[float], g: int, tol: float) -> bool:
    """Stop when g > 20, g is a multiple of 5 and the best improved by <= tol over 19 generations."""
    return g > 20 and g % 5 == 0 and trace[g] - trace[g - 19] <= tol


# -- driver ---------------------------------------------------------------------


def _parent_table(config: GasrConfig) -> np.ndarray:
    leaders = range(1, config.population, 2)
    return np.array(
        [select_parents(config.table, c, config.population, config.index_offset) for c in leaders],
        dtype=np.int64,
    )


def run(config: GasrConfig) -> GasrRunResult:
    """Execute one GASR run.  Deterministic: equal configs give equal results."""
    table = config.table
    n, d = config.population, config.spec.dims
    gens = config.generations
    off = config.index_offset
    w = config.w
    lo, hi = config.spec.bounds

    pop, evals = init_population(config)
    fit = pop.fitness
    best_i = int(n - 1 - np.argmax(fit[::-1]))
    best_fit = float(fit[best_i])
    best_chromo = pop.chromosomes[best_i].copy()
    best_gen = 0
    trace = [best_fit]

    leaders = np.arange(1, n, 2)  # 1-based pair leaders
    parents = _parent_table(config) - 1  # 0-based (s, t) per pair; depends on leader only
    prev = pop.chromosomes
    last = gens
    stopped = False

    for g in range(1, gens + 1):
        gate = _fractions(table, leaders + g + off)
        cur = prev.copy()

        crossed = np.nonzero(gate <= config.crossover_probability)[0]
        if crossed.size:
            s = prev[parents[crossed, 0]]
            t = prev[parents[crossed, 1]]
            kids = crossover_children(s, t, lo, hi, w)  # (P, 4, d)
            kid_fit = config.evaluate(kids.reshape(-1, d)).reshape(-1, 4)
            evals += kids.shape[0] * 4
            order = np.argsort(-kid_fit, axis=1, kind="stable")
            rows = np.arange(crossed.size)
            slot = leaders[crossed] - 1
            cur[slot] = kids[rows, order[:, 0]]
            cur[slot + 1] = kids[rows, order[:, 1]]

        mutated = np.nonzero(gate <= config.mutation_probability)[0]
        if mutated.size:
            members = np.concatenate([leaders[mutated], leaders[mutated] + 1])  # 1-based
            genes = _integers(table, members + g + off, 1, d) - 1
            mu = mutation_radius(g, gens, config.alpha)
            rows = members - 1
            xk = cur[rows, genes]
            half = mu * (hi[genes] - lo[genes]) / 2.0
            xu = np.minimum(xk + half, hi[genes])
            xl = np.maximum(xk - half, lo[genes])
            cur[rows, genes] = xl + w * (xu - xl)

        cur[elitism_slot(table, g, n, off) - 1] = best_chromo

        fit = config.evaluate(cur)
        evals += n
        top = float(fit.max())
        if top >= best_fit:
            best_i = int(n - 1 - np.argmax(fit[::-1]))
            best_fit = top
            best_chromo = cur[best_i].copy()
            best_gen = g
        trace.append(best_fit)
        prev = cur

        if config.early_termination and early_termination_check(trace, g, config.tol):
            last = g
            stopped = True
            break

    return GasrRunResult(
        best_fitness=best_fit,
        best_chromosome=tuple(float(v) for v in best_chromo),
        best_generation=best_gen,
        evaluations=int(evals),
        trace=tuple(trace),
        terminated_early=stopped,
        last_generation=last,
    )


def evaluation_budget(population: int, generations: int) -> int:
    """Upper bound on objective calls: every pair crossing in every generation."""
    return population + generations * (4 * (population // 2) + population)


def write_report(
    result: GasrRunResult,
    config: GasrConfig,
    destination: str | Path,
    *,
    run_id: str,
    function_name: str | None = None,
) -> Path:
    """Per-run report: header block, then ``Gen #`` / best-fitness rows."""
    name = function_name or config.spec.id
    title = f"{config.spec.dims}D {name}"
    lines = [
        title,
        "-" * len(title),
        f"Run ID: {run_id}",
        f"# Generations: {config.generations}",
        f"# Chromos: {config.population}",
        f"# Eval this run: {result.evaluations}",
        f"# Gen req'd: {result.last_generation + 1}",
        f"Index offset: {config.index_offset}",
        f"Best fitness: {result.best_fitness!r}",
        f"Best generation: {result.best_generation}",
        "Best chromosome: " + " ".join(repr(v) for v in result.best_chromosome),
        "Gen #  Best Fitness",
        "-----",
    ]
    lines.extend(f"{g:5d} {v:.16e}" for g, v in enumerate(result.trace))
    path = Path(destination)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def best_of(results: Sequence[GasrRunResult]) -> int:
    """Index of the best run; later runs win ties."""
    best = 0
    for i, r in enumerate(results):
        if r.best_fitness >= results[best].best_fitness:
            best = i
    return best
