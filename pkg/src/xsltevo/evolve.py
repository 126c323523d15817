"""Generational evolution with k-tournament selection and elitism."""

from __future__ import annotations

import logging
import random
import time
from collections import Counter
from dataclasses import dataclass, field

from .dom import Document, build_catalog, canonical_lines
from .exceptions import ConfigError, TransformOverflow
from .fitness import WORST, FitnessVector, LineTarget
from .genome import TYPE1, Genome, InitParams, check_structure_type, genome_size, random_genome
from .variation import Op, OperatorTable, default_operator_table, select_operator, vary
from .xslt import LINE_TAG, WRAPPER_TAG, TransformLimits, transform_lines

log = logging.getLogger(__name__)


@dataclass
class EvolveConfig:
    structure_type: str = TYPE1
    population_size: int = 128
    max_generations: int = 200
    tournament_size: int = 5
    elitism: int = 1
    seed: int = 0
    operator_table: OperatorTable | None = None
    init_params: InitParams = field(default_factory=InitParams)
    limits: TransformLimits | None = None
    applications_per_offspring: int = 1
    wrapper_tag: str = WRAPPER_TAG
    line_tag: str = LINE_TAG

    def __post_init__(self):
        self.structure_type = check_structure_type(self.structure_type)
        if self.operator_table is None:
            self.operator_table = default_operator_table(self.structure_type)

    def check(self) -> EvolveConfig:
        if not self.population_size >= self.tournament_size >= 2:
            raise ConfigError("need population_size >= tournament_size >= 2")
        if not 0 <= self.elitism < self.population_size:
            raise ConfigError("need 0 <= elitism < population_size")
        if self.max_generations < 0:
            raise ConfigError("max_generations must be >= 0")
        if self.applications_per_offspring < 1:
            raise ConfigError("applications_per_offspring must be >= 1")
        if self.operator_table.stype != self.structure_type:
            raise ConfigError(
                f"operator table is for {self.operator_table.stype}, run is {self.structure_type}"
            )
        try:
            self.operator_table.check()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return self


@dataclass
class RunResult:
    best: Genome
    fitness: FitnessVector
    success: bool
    evaluations: int
    generations: int
    wall_time: float
    history: list = field(default_factory=list)
    op_counts: Counter = field(default_factory=Counter)
    op_noops: Counter = field(default_factory=Counter)
    discarded_offspring: int = 0
    seed: int = 0


class Evaluator:
    """Memoized fitness of genomes on one input/target pair."""

    def __init__(self, doc: Document, target_lines, limits: TransformLimits):
        self.doc = doc
        self.target = LineTarget(target_lines)
        self.limits = limits
        self.count = 0
        self._memo: dict = {}

    def __call__(self, g: Genome) -> FitnessVector:
        self.count += 1
        hit = self._memo.get(g.sheet)
        if hit is None:
            try:
                obtained = transform_lines(g.sheet, self.doc, self.limits)
            except TransformOverflow:
                hit = WORST
            else:
                d, a = self.target.diff(obtained)
                hit = FitnessVector(d, a, genome_size(g))
            if len(self._memo) > 200_000:
                self._memo.clear()
            self._memo[g.sheet] = hit
        g.fitness = hit
        return hit


def tournament_select(pop, k: int, rng):
    """Best of ``k`` distinct uniformly drawn individuals; ties go to the lower index."""
    if not 1 <= k <= len(pop):
        raise ValueError(f"tournament size {k} invalid for population of {len(pop)}")
    picks = rng.sample(range(len(pop)), k)
    best = min(picks, key=lambda i: (pop[i].fitness, i))
    return pop[best]


def _ranked(pop):
    return sorted(range(len(pop)), key=lambda i: (pop[i].fitness, i))


def _history_row(gen, pop, evaluations):
    real = [g.fitness for g in pop if g.fitness != WORST]
    n = len(real) or 1
    best = min(g.fitness for g in pop)
    return {
        "generation": gen,
        "evaluations": evaluations,
        "best": tuple(best),
        "mean_deletions": sum(f.deletions for f in real) / n,
        "mean_additions": sum(f.additions for f in real) / n,
        "mean_length": sum(f.length for f in real) / n,
        "overflows": len(pop) - len(real),
    }


def run_evolution(config: EvolveConfig, input_doc: Document, target, initial=None) -> RunResult:
    """Evolve a stylesheet mapping ``input_doc`` to ``target``.

    ``target`` is a :class:`Document` or its list of canonical lines.
    ``initial`` optionally seeds the first individuals of the population.
    """
    config.check()
    start = time.perf_counter()
    target_lines = canonical_lines(target, config.line_tag) if isinstance(target, Document) else list(target)
    limits = config.limits or TransformLimits.for_documents(input_doc, len(target_lines))
    catalog = build_catalog(input_doc)
    rng = random.Random(config.seed)
    evaluate = Evaluator(input_doc, target_lines, limits)
    stype = config.structure_type
    table = config.operator_table

    pop = []
    for g in initial or ():
        if g.stype != stype:
            raise ConfigError(f"seeded genome is {g.stype}, run is {stype}")
        pop.append(Genome(stype, g.sheet, catalog))
    pop = pop[: config.population_size]
    while len(pop) < config.population_size:
        pop.append(random_genome(stype, catalog, config.init_params, rng, config.wrapper_tag, config.line_tag))
    for g in pop:
        evaluate(g)

    history = [_history_row(0, pop, evaluate.count)]
    op_counts: Counter = Counter()
    op_noops: Counter = Counter()
    discarded = 0
    gen = 0
    best = pop[_ranked(pop)[0]]
    while not best.fitness.is_solution and gen < config.max_generations:
        gen += 1
        order = _ranked(pop)
        new_pop = [pop[i].copy() for i in order[: config.elitism]]
        while len(new_pop) < config.population_size:
            parent = tournament_select(pop, config.tournament_size, rng)
            kind = select_operator(table, stype, rng)
            op_counts[kind.value] += 1
            if kind is Op.CROSSOVER_TEMPLATE:
                mate = tournament_select(pop, config.tournament_size, rng)
                children = vary(kind, parent, rng, mate, config.init_params)
                if children is None:
                    op_noops[kind.value] += 1
                    children = [parent.copy(), mate.copy()]
            else:
                child = parent
                for _ in range(config.applications_per_offspring):
                    out = vary(kind, child, rng, params=config.init_params)
                    if out is None:
                        op_noops[kind.value] += 1
                    else:
                        child = out[0]
                children = [child if child is not parent else parent.copy()]
            for c in children:
                if len(new_pop) >= config.population_size:
                    discarded += 1
                    continue
                evaluate(c)
                new_pop.append(c)
        pop = new_pop
        best = pop[_ranked(pop)[0]]
        history.append(_history_row(gen, pop, evaluate.count))
    log.debug("seed %s: %s after %d generations", config.seed, best.fitness, gen)
    return RunResult(
        best=best,
        fitness=best.fitness,
        success=best.fitness.is_solution,
        evaluations=evaluate.count,
        generations=gen,
        wall_time=time.perf_counter() - start,
        history=history,
        op_counts=op_counts,
        op_noops=op_noops,
        discarded_offspring=discarded,
        seed=config.seed,
    )
