"""End-to-end reduction: DDT -> hull -> pool -> reducer -> certified model."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .exceptions import CertificationError, ValidationError
from .greedy import DEFAULT_RESTARTS, GreedyRun, greedy_random_tiebreaker, greedy_reduce
from .hull import DEFAULT_FACET_BUDGET, HRep, hrep_of
from .inequality import Inequality
from .pool import (
    DEFAULT_MAX_INCIDENT,
    DEFAULT_MAX_SUMS,
    TYPE1,
    CandidatePool,
    conditional_pool,
    hull_pool,
    random_sum_pool,
    subset_addition_pool,
)
from .sbox import SBox, Transitions, transitions_of
from .setcover import DEFAULT_NODE_LIMIT, DEFAULT_TIME_LIMIT, CoverSolution, solve_exact
from .verify import CertificationReport, certify_model

METHODS = ("greedy", "greedy-random", "exact", "subset-addition", "random-sum", "conditional")
_USES_K = ("subset-addition", "random-sum")


@dataclass
class Budget:
    time_limit: float = DEFAULT_TIME_LIMIT
    node_limit: int = DEFAULT_NODE_LIMIT
    max_sums: int = DEFAULT_MAX_SUMS
    max_incident: int = DEFAULT_MAX_INCIDENT
    facet_budget: int = DEFAULT_FACET_BUDGET

    @classmethod
    def parse(cls, text: str, base: "Budget | None" = None) -> "Budget":
        """Override fields from ``"time=600,nodes=1e8,sums=5e7"``."""
        aliases = {
            "time": "time_limit", "nodes": "node_limit", "sums": "max_sums",
            "incident": "max_incident", "facets": "facet_budget",
        }
        budget = cls(**vars(base)) if base else cls()
        for item in filter(None, (s.strip() for s in text.split(","))):
            key, _, value = item.partition("=")
            attr = aliases.get(key.strip(), key.strip())
            if attr not in vars(budget) or not value:
                raise ValidationError(f"bad budget item {item!r}")
            kind = float if attr == "time_limit" else int
            try:
                setattr(budget, attr, kind(float(value)))
            except ValueError:
                raise ValidationError(f"bad budget value {item!r}") from None
        return budget


@dataclass
class ReductionResult:
    method: str
    inequalities: list[Inequality]
    pool_size: int
    optimal: bool
    wall_time: float
    report: CertificationReport
    seed: int | None = None
    cover: CoverSolution | None = None
    greedy: GreedyRun | None = None
    params: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.inequalities)

    def summary(self) -> dict:
        out = {
            "method": self.method,
            "pool_size": self.pool_size,
            "final_size": self.size,
            "optimal": self.optimal,
            "wall_time": round(self.wall_time, 4),
            "seed": self.seed,
            "certified": self.report.passed,
        }
        out.update(self.params)
        if self.cover is not None:
            out["lower_bound"] = self.cover.lower_bound
            out["upper_bound"] = self.cover.upper_bound
            out["nodes"] = self.cover.nodes
        if self.greedy is not None and self.greedy.restarts > 1:
            out["histogram"] = {str(k): v for k, v in self.greedy.histogram().items()}
        return out

    def dumps(self) -> str:
        return json.dumps(self.summary(), indent=2)


def build_pool(
    transitions: Transitions,
    method: str,
    hrep: HRep | None = None,
    *,
    k: int = 2,
    filter: str = TYPE1,
    seed: int = 0,
    trials: int = 10_000,
    threads: int | None = None,
    exclude_origin: bool = True,
    budget: Budget | None = None,
) -> CandidatePool:
    budget = budget or Budget()
    if method == "conditional":
        return conditional_pool(transitions)
    hrep = hrep if hrep is not None else hrep_of(transitions, facet_budget=budget.facet_budget)
    if method == "subset-addition":
        return subset_addition_pool(
            transitions, hrep, k, filter,
            exclude_origin=exclude_origin, threads=threads,
            max_incident=budget.max_incident, max_sums=budget.max_sums,
        )
    if method == "random-sum":
        return random_sum_pool(transitions, hrep, k, trials, seed)
    return hull_pool(hrep, transitions)


def reduce_sbox(
    sbox: SBox | Transitions,
    method: str = "subset-addition",
    *,
    k: int = 2,
    filter: str = TYPE1,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    trials: int = 10_000,
    threads: int | None = None,
    exclude_origin: bool = True,
    budget: Budget | None = None,
    hrep: HRep | None = None,
) -> ReductionResult:
    """Run one reduction method and certify its output.

    ``greedy`` and ``greedy-random`` reduce the raw hull heuristically; the
    other methods build a pool and solve the exact cover over it.  Raises
    ``CertificationError`` if the model is not a sound and complete
    description of the DDT.
    """
    if method not in METHODS:
        raise ValidationError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if k < 2:
        raise ValidationError("k must be at least 2")
    budget = budget or Budget()
    tr = sbox if isinstance(sbox, Transitions) else transitions_of(sbox)
    start = time.perf_counter()
    pool = build_pool(
        tr, method, hrep, k=k, filter=filter, seed=seed, trials=trials,
        threads=threads, exclude_origin=exclude_origin, budget=budget,
    )
    cover = run = None
    if method == "greedy":
        run = greedy_reduce(pool)
        chosen, optimal = run.selected, False
    elif method == "greedy-random":
        run = greedy_random_tiebreaker(pool, seed=seed, restarts=restarts, threads=threads)
        chosen, optimal = run.selected, False
    else:
        cover = solve_exact(
            pool.instance(), time_limit=budget.time_limit, node_limit=budget.node_limit, seed=seed
        )
        chosen, optimal = cover.chosen, cover.optimal
    inequalities = sorted(pool.inequalities(chosen))
    elapsed = time.perf_counter() - start
    report = certify_model(tr, inequalities)
    if not report.passed:
        raise CertificationError(f"{method} produced an uncertified model:\n{report.to_text()}")
    params = {}
    if method in _USES_K:
        params["k"] = k
    if method == "subset-addition":
        params["filter"] = filter
    if method == "greedy-random":
        params["restarts"] = restarts
    if method == "random-sum":
        params["trials"] = trials
    return ReductionResult(
        method=method,
        inequalities=inequalities,
        pool_size=len(pool),
        optimal=optimal,
        wall_time=elapsed,
        report=report,
        seed=seed if method in ("greedy-random", "random-sum") else None,
        cover=cover,
        greedy=run,
        params=params,
    )
