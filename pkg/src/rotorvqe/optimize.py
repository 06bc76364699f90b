"""Derivative-free minimizers for the variational loop.

Both optimizers charge every objective call against a shared evaluation
budget, so runs with different algorithms are directly comparable.  An
SPSA iteration costs two evaluations (the +/- probe pair) plus one final
evaluation at the terminal point; Nelder-Mead pays per simplex move.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ObjectiveSpec:
    """A stochastic objective: params -> (value, std_error)."""

    evaluator: Callable
    dimension: int
    budget: int
    seed: int = 0

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("objective dimension must be at least 1")
        if self.budget < 1:
            raise ValueError("evaluation budget must be at least 1")


@dataclass(frozen=True)
class SpsaConfig:
    """Gain schedule a_k = a/(A+k+1)^alpha, c_k = c/(k+1)^gamma."""

    a: float = TWO_PI / 10.0
    c: float = 0.1
    A: float = 0.0
    alpha: float = 0.602
    gamma: float = 0.101

    def __post_init__(self):
        if self.a <= 0 or self.c <= 0:
            raise ValueError("SPSA gains a and c must be positive")


@dataclass(frozen=True)
class NelderMeadConfig:
    step: float = 0.1
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    diameter_tol: float = 1e-6


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    params: tuple
    value: float


@dataclass(frozen=True)
class OptTrace:
    records: tuple
    eval_values: tuple
    best_params: tuple
    best_value: float
    n_evaluations: int
    termination: str


def trace_to_csv(trace: OptTrace) -> str:
    dim = len(trace.best_params)
    header = "iteration,value," + ",".join(f"p{i}" for i in range(dim))
    lines = [header]
    for rec in trace.records:
        fields = [str(rec.iteration), f"{rec.value:.17g}"]
        fields.extend(f"{p:.17g}" for p in rec.params)
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def _finish(records, eval_values, termination):
    best = min(records, key=lambda r: r.value)
    return OptTrace(
        records=tuple(records),
        eval_values=tuple(eval_values),
        best_params=best.params,
        best_value=best.value,
        n_evaluations=len(eval_values),
        termination=termination,
    )


def _initial_point(obj: ObjectiveSpec, x0) -> np.ndarray:
    if x0 is None:
        return np.random.default_rng(obj.seed).uniform(0.0, TWO_PI, obj.dimension)
    start = np.asarray(x0, dtype=float).ravel()
    if start.size != obj.dimension:
        raise ValueError("starting point does not match the objective dimension")
    return start


def spsa_minimize(obj: ObjectiveSpec, config: SpsaConfig = None, x0=None) -> OptTrace:
    """Simultaneous-perturbation stochastic approximation descent.

    Each iteration draws a Rademacher direction, probes x +/- c_k*delta,
    and steps along the two-point gradient estimate.  The trace records
    the better probe of every iteration and a final evaluation at the
    terminal iterate.
    """
    config = config or SpsaConfig()
    rng = np.random.default_rng(obj.seed)
    x = _initial_point(obj, x0)
    eval_values = []
    records = []

    def call(point):
        value, _ = obj.evaluator(point)
        eval_values.append(float(value))
        return float(value)

    iterations = (obj.budget - 1) // 2
    for k in range(iterations):
        c_k = config.c / (k + 1) ** config.gamma
        delta = rng.integers(0, 2, size=obj.dimension) * 2.0 - 1.0
        up = x + c_k * delta
        down = x - c_k * delta
        f_up = call(up)
        f_down = call(down)
        gradient = (f_up - f_down) / (2.0 * c_k) * delta
        a_k = config.a / (config.A + k + 1) ** config.alpha
        x = x - a_k * gradient
        if f_up <= f_down:
            records.append(TraceRecord(k, tuple(up), f_up))
        else:
            records.append(TraceRecord(k, tuple(down), f_down))
    records.append(TraceRecord(iterations, tuple(x), call(x)))
    return _finish(records, eval_values, "budget")


class _BudgetExhausted(Exception):
    pass


def nelder_mead_minimize(
    obj: ObjectiveSpec, config: NelderMeadConfig = None, x0=None
) -> OptTrace:
    """Downhill simplex with standard reflect/expand/contract/shrink moves."""
    config = config or NelderMeadConfig()
    start = _initial_point(obj, x0)
    dim = obj.dimension
    eval_values = []
    records = []
    best_seen = [None, math.inf]

    def call(point):
        if len(eval_values) >= obj.budget:
            raise _BudgetExhausted
        value, _ = obj.evaluator(point)
        value = float(value)
        eval_values.append(value)
        if value < best_seen[1]:
            best_seen[0], best_seen[1] = tuple(point), value
        return value

    simplex = [start.copy()]
    for i in range(dim):
        vertex = start.copy()
        vertex[i] += config.step
        simplex.append(vertex)
    values = []
    termination = "budget"
    try:
        for vertex in simplex:
            values.append(call(vertex))
        iteration = 0
        while True:
            order = np.argsort(values, kind="stable")
            simplex = [simplex[i] for i in order]
            values = [values[i] for i in order]
            records.append(TraceRecord(iteration, tuple(simplex[0]), values[0]))
            diameter = max(
                float(np.linalg.norm(v - simplex[0])) for v in simplex[1:]
            )
            if diameter < config.diameter_tol:
                termination = "converged"
                break

            centroid = np.mean(simplex[:-1], axis=0)
            worst = simplex[-1]
            reflected = centroid + config.reflection * (centroid - worst)
            f_reflected = call(reflected)
            if f_reflected < values[0]:
                expanded = centroid + config.expansion * (centroid - worst)
                f_expanded = call(expanded)
                if f_expanded < f_reflected:
                    simplex[-1], values[-1] = expanded, f_expanded
                else:
                    simplex[-1], values[-1] = reflected, f_reflected
            elif f_reflected < values[-2]:
                simplex[-1], values[-1] = reflected, f_reflected
            else:
                if f_reflected < values[-1]:
                    contracted = centroid + config.contraction * (centroid - worst)
                else:
                    contracted = centroid - config.contraction * (centroid - worst)
                f_contracted = call(contracted)
                if f_contracted < min(f_reflected, values[-1]):
                    simplex[-1], values[-1] = contracted, f_contracted
                else:
                    for i in range(1, dim + 1):
                        simplex[i] = simplex[0] + config.shrink * (
                            simplex[i] - simplex[0]
                        )
                        values[i] = call(simplex[i])
            iteration += 1
    except _BudgetExhausted:
        pass

    if best_seen[0] is None:
        raise ValueError("budget too small to evaluate the starting point")
    records.append(TraceRecord(len(records), best_seen[0], best_seen[1]))
    return _finish(records, eval_values, termination)


def calibrate_spsa_gains(
    obj: ObjectiveSpec,
    trials: int = 10,
    x0=None,
    config: SpsaConfig = None,
    target_step: float = 0.1,
) -> SpsaConfig:
    """Pick (a, c) so the first SPSA step is about `target_step` radians.

    c becomes the objective's standard-error estimate at the start point
    (floored at 0.01); a is scaled from the mean two-point gradient
    magnitude over `trials` Rademacher probes.  Costs 1 + 2*trials
    evaluations outside the optimizer's own budget.
    """
    if trials < 1:
        raise ValueError("need at least one calibration trial")
    config = config or SpsaConfig()
    start = _initial_point(obj, x0)
    rng = np.random.default_rng([obj.seed, 0xCA1])
    _, std_error = obj.evaluator(start)
    c = max(float(std_error), 0.01)
    magnitudes = []
    for _ in range(trials):
        delta = rng.integers(0, 2, size=obj.dimension) * 2.0 - 1.0
        f_up, _ = obj.evaluator(start + c * delta)
        f_down, _ = obj.evaluator(start - c * delta)
        magnitudes.append(abs(f_up - f_down) / (2.0 * c))
    mean_gradient = float(np.mean(magnitudes))
    if mean_gradient <= 0.0:
        return replace(config, c=c)
    a = target_step * (config.A + 1.0) ** config.alpha / mean_gradient
    return replace(config, a=a, c=c)
