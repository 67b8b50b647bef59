"""Derivative-free optimizers and their brute-force grid oracles.

* :func:`rosenbrock_minimize`: the one-dimensional Rosenbrock search
  (expand the step after a success, reverse and shrink it after a failure).
* :func:`ga_maximize`: a real-coded genetic algorithm over a box with
  constraint handling by death penalty or adaptive penalty.
* :func:`exhaustive_min` and :func:`exhaustive_grid_max`: grid oracles.
"""

from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np


class MaxIterationsError(RuntimeError):
    """Iteration budget exhausted; carries the best point found so far."""

    def __init__(self, x, fx, iters):
        super().__init__(f"no convergence after {iters} iterations (best x={x:.6g})")
        self.x, self.fx, self.iters = x, fx, iters


class InfeasibleProblemError(RuntimeError):
    """No feasible point was found."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class RosenbrockSpec:
    search_interval: tuple[float, float]
    initial_step: float | None = None   # default 10% of the interval
    expand: float = 3.0
    contract: float = 0.5
    tol: float | None = None            # default 1e-6 of the interval
    max_iters: int = 10_000
    x0: float | None = None             # default midpoint

    def __post_init__(self):
        lo, hi = self.search_interval
        if not lo < hi:
            raise ValueError("search interval needs lo < hi")
        if not self.expand > 1:
            raise ValueError("expand must exceed 1")
        if not 0 < self.contract < 1:
            raise ValueError("contract must lie in (0, 1)")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be positive")

    @property
    def width(self):
        return self.search_interval[1] - self.search_interval[0]

    @property
    def resolved_tol(self):
        return self.tol if self.tol is not None else 1e-6 * self.width


def rosenbrock_minimize(f: Callable[[float], float], spec: RosenbrockSpec):
    """Minimize a unimodal ``f`` on the search interval; returns ``(x, f(x), iters)``.

    A success (strictly lower value) moves to the trial point and multiplies
    the step by ``expand``; a failure multiplies it by ``-contract``. Two
    consecutive failures in opposite directions bracket the minimizer within
    a few steps of the current point, so the loop runs until the step falls
    to a quarter of ``tol``, which leaves the minimizer within ``tol``.
    """
    lo, hi = spec.search_interval
    tol = spec.resolved_tol
    x = spec.x0 if spec.x0 is not None else 0.5 * (lo + hi)
    x = min(hi, max(lo, x))
    step = spec.initial_step if spec.initial_step is not None else 0.1 * spec.width
    fx = f(x)
    iters = 0
    while abs(step) >= 0.25 * tol:
        if iters >= spec.max_iters:
            raise MaxIterationsError(x, fx, iters)
        iters += 1
        trial = x + step
        if lo <= trial <= hi:
            ft = f(trial)
            if ft < fx:
                x, fx = trial, ft
                step *= spec.expand
                continue
        step *= -spec.contract
    # the endpoints are legitimate minimizers of a monotone f
    for end in (lo, hi):
        fe = f(end)
        if fe < fx:
            x, fx = end, fe
    return x, fx, iters


def exhaustive_min(f: Callable[[float], float], interval, n_points: int):
    """Grid argmin over ``n_points`` equispaced points; ties go to the smaller x."""
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    xs = np.linspace(interval[0], interval[1], n_points)
    vals = np.array([f(x) for x in xs])
    i = int(np.argmin(vals))
    return float(xs[i]), float(vals[i])


# ---------------------------------------------------------------------------
# genetic algorithm

class ConstraintMode(str, enum.Enum):
    DEATH_PENALTY = "DeathPenalty"
    ADAPTIVE_PENALTY = "AdaptivePenalty"


@dataclass(frozen=True)
class GaSpec:
    population: int = 60
    generations: int = 120
    crossover_rate: float = 0.9
    mutation_rate: float = 0.2
    elitism_count: int = 2
    seed: int = 0
    constraint_mode: ConstraintMode = ConstraintMode.DEATH_PENALTY
    sbx_eta: float = 15.0
    mutation_sigma: float = 0.1
    tournament: int = 2
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "constraint_mode", ConstraintMode(self.constraint_mode))
        if self.population < 4:
            raise ValueError("population must be >= 4")
        if not 0 <= self.elitism_count < self.population:
            raise ValueError("elitism_count must be below the population size")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        for name in ("crossover_rate", "mutation_rate"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")


@dataclass(frozen=True)
class Bound:
    """One decision variable; ``log`` scales the gene logarithmically."""

    lo: float
    hi: float
    log: bool = False

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("bound needs lo < hi")
        if self.log and not self.lo > 0:
            raise ValueError("log-scaled bound needs lo > 0")

    def decode(self, u):
        if self.log:
            return self.lo * (self.hi / self.lo) ** u
        return self.lo + (self.hi - self.lo) * u

    def encode(self, x):
        if self.log:
            return math.log(x / self.lo) / math.log(self.hi / self.lo)
        return (x - self.lo) / (self.hi - self.lo)


def _as_bounds(bounds) -> list[Bound]:
    return [b if isinstance(b, Bound) else Bound(*b) for b in bounds]


def _violation(status) -> float:
    """Total constraint violation from a bool or a sequence of slacks."""
    if isinstance(status, (bool, np.bool_)):
        return 0.0 if status else 1.0
    return float(sum(max(0.0, -s) for s in status))


class GaResult(NamedTuple):
    best: tuple
    value: float
    history: list


def ga_maximize(objective: Callable, feasible: Callable, bounds: Sequence, spec: GaSpec = GaSpec()):
    """Maximize ``objective(x)`` over a box subject to ``feasible(x)``.

    ``feasible`` returns a bool or a sequence of slacks (feasible iff all are
    nonnegative); it is evaluated before ``objective``, which is skipped for
    infeasible points under the death penalty. ``history`` holds the best
    feasible value after each generation (-inf until one is found).
    """
    bounds = _as_bounds(bounds)
    dim = len(bounds)
    rng = np.random.default_rng(spec.seed)
    cache: dict[tuple, tuple[float, float]] = {}
    death = spec.constraint_mode is ConstraintMode.DEATH_PENALTY

    def decode(u):
        return tuple(float(b.decode(ui)) for b, ui in zip(bounds, u))

    def evaluate(u):
        key = tuple(u.tolist())
        if key not in cache:
            x = decode(u)
            viol = _violation(feasible(x))
            value = objective(x) if (viol == 0.0 or not death) else -math.inf
            cache[key] = (value, viol)
        return cache[key]

    def evaluate_all(pop):
        if spec.workers > 1:
            with ThreadPoolExecutor(spec.workers) as ex:
                return list(ex.map(evaluate, pop))
        return [evaluate(u) for u in pop]

    penalty = 1.0
    best_u, best_val = None, -math.inf
    history = []
    pop = rng.random((spec.population, dim))
    sigma = spec.mutation_sigma
    quarter = max(1, spec.generations // 4)
    for gen in range(spec.generations):
        if gen and gen % quarter == 0:
            sigma *= 0.5
        scores = evaluate_all(pop)
        values = np.array([v for v, _ in scores])
        viols = np.array([c for _, c in scores])
        ok = viols == 0.0
        if np.any(ok):
            i = int(np.flatnonzero(ok)[np.argmax(values[ok])])
            if values[i] > best_val:
                best_val, best_u = float(values[i]), pop[i].copy()
        history.append(best_val)
        if death:
            # infeasible individuals all rank below feasible ones; among
            # themselves the smaller violation wins (only ties are broken)
            order = np.lexsort((np.where(ok, values, -viols), ok))
            fitness = np.empty(len(pop))
            fitness[order] = np.arange(len(pop), dtype=float)
        else:
            # raise the penalty while the elite is infeasible, relax it otherwise
            fitness = values - penalty * viols
            penalty = penalty * 2.0 if not ok[int(np.argmax(fitness))] else max(1.0, penalty / 1.5)
        if gen == spec.generations - 1:
            break
        pop = _next_generation(pop, fitness, spec, sigma, rng)
    if best_u is None:
        raise InfeasibleProblemError("no feasible individual found in any generation",
                                     {"evaluations": len(cache)})
    return GaResult(decode(best_u), best_val, history)


def _next_generation(pop, fitness, spec, sigma, rng):
    n, dim = pop.shape
    order = np.argsort(-fitness, kind="stable")
    children = [pop[i].copy() for i in order[:spec.elitism_count]]

    def pick():
        idx = rng.integers(0, n, spec.tournament)
        return pop[idx[np.argmax(fitness[idx])]]

    while len(children) < n:
        a, b = pick().copy(), pick().copy()
        if rng.random() < spec.crossover_rate:
            a, b = _sbx(a, b, spec.sbx_eta, rng)
        for child in (a, b):
            mask = rng.random(dim) < spec.mutation_rate
            child[mask] += sigma * rng.standard_normal(int(mask.sum()))
            np.clip(child, 0.0, 1.0, out=child)
            if len(children) < n:
                children.append(child)
    return np.array(children)


def _sbx(a, b, eta, rng):
    """Simulated binary crossover on [0, 1] genes (children clipped later)."""
    u = rng.random(len(a))
    beta = np.where(u <= 0.5, (2 * u) ** (1 / (eta + 1)), (1 / (2 * (1 - u))) ** (1 / (eta + 1)))
    c1 = 0.5 * ((1 + beta) * a + (1 - beta) * b)
    c2 = 0.5 * ((1 - beta) * a + (1 + beta) * b)
    return c1, c2


def exhaustive_grid_max(objective: Callable, feasible: Callable, bounds: Sequence, n: int):
    """Best feasible point of an n^d tensor grid (uniform in each gene's scale)."""
    bounds = _as_bounds(bounds)
    axes = [[float(b.decode(u)) for u in np.linspace(0.0, 1.0, n)] for b in bounds]
    best, best_val = None, -math.inf
    for x in itertools.product(*axes):
        if _violation(feasible(x)) == 0.0:
            v = objective(x)
            if v > best_val:
                best, best_val = x, v
    if best is None:
        raise InfeasibleProblemError("no feasible grid point")
    return best, best_val

