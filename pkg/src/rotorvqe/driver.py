"""Experiment orchestration: single runs, restart ensembles, scans, warm-start ladders.

Ensembles derive per-run seeds from a master seed with a splitmix64 stream, so
every experiment is a pure function of (config, seed) regardless of worker
count.  Cold-start SPSA runs calibrate the step gain per run by probing the
objective at the initial point; warm-started runs keep the configured gains,
because a gradient probe at an already-converged point is degenerate.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from .chain import (
    CompositeBasis,
    build_chain_matrix,
    build_composite_basis,
    pad_matrix,
    rate_constant,
    reference_spectrum,
)
from .optimize import (
    NelderMeadConfig,
    ObjectiveSpec,
    OptTrace,
    SpsaConfig,
    nelder_mead_minimize,
    spsa_minimize,
)
from .paulimap import PauliOperator, map_operator
from .potential import ChainSpec, DihedralSpec
from .qsim import (
    EXACT,
    LINEAR,
    NOISY,
    SAMPLED,
    AnsatzSpec,
    NoiseSpec,
    embed_params,
    noisy_expectation,
    prepare_state,
    sampled_expectation,
)

SPSA = "spsa"
NELDER_MEAD = "nelder-mead"
FIXED = "fixed"
CALIBRATED = "calibrated"

_CALIBRATION_TRIALS = 25
_CALIBRATION_STEP = 2.0 * math.pi / 10.0

_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def seed_stream(master_seed: int, count: int) -> tuple:
    """Expand a master seed into `count` independent 63-bit seeds (splitmix64)."""
    state = master_seed & _MASK64
    out = []
    for _ in range(count):
        state = (state + _SPLITMIX_GAMMA) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z ^= z >> 31
        out.append(z >> 1)
    return tuple(out)


@dataclass(frozen=True)
class Problem:
    """A chain eigenproblem bound to a register: matrix, operator, ansatz."""

    basis: CompositeBasis
    matrix: np.ndarray = field(repr=False)
    operator: PauliOperator = field(repr=False)
    ansatz: AnsatzSpec
    reference: float

    @property
    def qubits(self) -> int:
        return self.ansatz.qubits


def build_problem(
    chain: ChainSpec,
    kept_counts,
    harmonics: int = 16,
    ladder=None,
    depth: int = 1,
    entangler: str = LINEAR,
) -> Problem:
    """Assemble the padded generator matrix, its Pauli expansion, and the ansatz."""
    basis = build_composite_basis(chain, kept_counts, harmonics=harmonics, ladder=ladder)
    matrix = pad_matrix(build_chain_matrix(basis), basis.qubits)
    operator = map_operator(matrix)
    ansatz = AnsatzSpec(qubits=basis.qubits, depth=depth, entangler=entangler)
    reference = float(reference_spectrum(matrix)[0][0])
    return Problem(basis=basis, matrix=matrix, operator=operator, ansatz=ansatz, reference=reference)


@dataclass(frozen=True)
class VqeConfig:
    """Everything one variational run (or ensemble of runs) depends on."""

    chain: ChainSpec
    kept_counts: tuple
    ladder: tuple = None
    harmonics: int = 16
    depth: int = 1
    entangler: str = LINEAR
    mode: str = EXACT
    shots: int = 20000
    noise: NoiseSpec = None
    mitigate: bool = True
    grouping: bool = True
    optimizer: str = SPSA
    iterations: int = 600
    gain_policy: str = CALIBRATED
    spsa: SpsaConfig = field(default_factory=SpsaConfig)
    nelder_mead: NelderMeadConfig = field(default_factory=NelderMeadConfig)
    restarts: int = 60
    seed: int = 2021
    workers: int = 1

    def __post_init__(self):
        if self.mode not in (EXACT, SAMPLED, NOISY):
            raise ValueError(f"unknown evaluation mode {self.mode!r}")
        if self.optimizer not in (SPSA, NELDER_MEAD):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")
        if self.gain_policy not in (FIXED, CALIBRATED):
            raise ValueError(f"unknown gain policy {self.gain_policy!r}")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.restarts < 1:
            raise ValueError("need at least one restart")
        if self.workers < 1:
            raise ValueError("need at least one worker")
        if self.shots < 1:
            raise ValueError("need at least one shot")
        if self.mode == NOISY and self.noise is None:
            object.__setattr__(self, "noise", NoiseSpec())
        kept = tuple(int(c) for c in self.kept_counts)
        object.__setattr__(self, "kept_counts", kept)
        if self.ladder is not None:
            object.__setattr__(
                self, "ladder", tuple(tuple(int(c) for c in rung) for rung in self.ladder)
            )

    @property
    def budget(self) -> int:
        """Objective evaluations per run: SPSA spends two per iteration plus a final one."""
        return 2 * self.iterations + 1


def _build(config: VqeConfig) -> Problem:
    return build_problem(
        config.chain,
        config.kept_counts,
        harmonics=config.harmonics,
        ladder=config.ladder,
        depth=config.depth,
        entangler=config.entangler,
    )


def _evaluator(problem: Problem, config: VqeConfig, run_seed: int):
    """Objective closure for one run; statistical modes reseed per evaluation."""
    if config.mode == EXACT:
        matrix = problem.matrix

        def evaluate(params):
            state = prepare_state(problem.ansatz, params)
            return float(np.real(np.conj(state) @ matrix @ state)), 0.0

        return evaluate

    counter = [0]

    def evaluate(params):
        eval_seed = [run_seed & _MASK64, counter[0]]
        counter[0] += 1
        if config.mode == SAMPLED:
            est = sampled_expectation(
                problem.ansatz,
                params,
                problem.operator,
                config.shots,
                grouping=config.grouping,
                seed=eval_seed,
            )
        else:
            noise = dataclasses.replace(config.noise, seed=tuple(eval_seed))
            est = noisy_expectation(
                problem.ansatz,
                params,
                problem.operator,
                config.shots,
                noise,
                mitigate=config.mitigate,
                grouping=config.grouping,
            )
        return est.value, est.std_error

    return evaluate


def _calibrated_gain(evaluate, x0: np.ndarray, config: VqeConfig, run_seed: int) -> SpsaConfig:
    """Scale the SPSA step gain so the first update moves ~2pi/10 per angle.

    Mirrors the self-calibration of era-typical SPSA drivers: probe the
    objective along random Rademacher directions at the start point and set
    `a` from the mean finite-difference magnitude.  The probe budget is
    bookkept separately from the optimization budget.
    """
    cfg = config.spsa
    rng = np.random.default_rng([run_seed & _MASK64, 0xCA11])
    dim = len(x0)
    acc = 0.0
    for _ in range(_CALIBRATION_TRIALS):
        delta = rng.integers(0, 2, size=dim) * 2.0 - 1.0
        up, _ = evaluate(x0 + cfg.c * delta)
        down, _ = evaluate(x0 - cfg.c * delta)
        acc += abs(up - down) / _CALIBRATION_TRIALS
    gradient_scale = acc / (2.0 * cfg.c)
    if gradient_scale <= 0.0:
        return cfg
    a = _CALIBRATION_STEP * (cfg.A + 1.0) ** cfg.alpha / gradient_scale
    return dataclasses.replace(cfg, a=a)


@dataclass(frozen=True)
class VqeRun:
    """Outcome of a single variational optimization."""

    value: float
    params: tuple
    reference: float
    trace: OptTrace = field(repr=False)
    seed: int
    mode: str
    optimizer: str

    @property
    def rate(self) -> float:
        return rate_constant(self.value)

    @property
    def error_percent(self) -> float:
        return 100.0 * (self.value - self.reference) / self.reference


def _single_run(problem: Problem, config: VqeConfig, run_seed: int, x0=None, calibrate=None) -> VqeRun:
    evaluate = _evaluator(problem, config, run_seed)
    dim = problem.ansatz.parameter_count
    if x0 is None:
        x0 = np.random.default_rng(run_seed).uniform(0.0, 2.0 * math.pi, dim)
    else:
        x0 = np.asarray(x0, dtype=float)
    obj = ObjectiveSpec(evaluate, dim, config.budget, seed=run_seed)
    if config.optimizer == NELDER_MEAD:
        trace = nelder_mead_minimize(obj, config.nelder_mead, x0=x0)
    else:
        if calibrate is None:
            calibrate = config.gain_policy == CALIBRATED
        gains = _calibrated_gain(evaluate, x0, config, run_seed) if calibrate else config.spsa
        trace = spsa_minimize(obj, gains, x0=x0)
    return VqeRun(
        value=trace.best_value,
        params=trace.best_params,
        reference=problem.reference,
        trace=trace,
        seed=run_seed,
        mode=config.mode,
        optimizer=config.optimizer,
    )


def run_vqe(config: VqeConfig, problem: Problem = None) -> VqeRun:
    """One optimization from a random start drawn from the master seed."""
    if problem is None:
        problem = _build(config)
    (run_seed,) = seed_stream(config.seed, 1)
    return _single_run(problem, config, run_seed)


@dataclass(frozen=True)
class EnsembleStats:
    """Restart-ensemble summary against the classical reference."""

    values: tuple
    reference: float
    best_params: tuple = field(repr=False)

    def __post_init__(self):
        if not self.values:
            raise ValueError("ensemble needs at least one run")

    @property
    def minimum(self) -> float:
        return min(self.values)

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    @property
    def eps_min(self) -> float:
        return 100.0 * (self.minimum - self.reference) / self.reference

    @property
    def eps_avg(self) -> float:
        return 100.0 * (self.mean - self.reference) / self.reference


def _run_indexed(args):
    problem, config, run_seed, x0, calibrate = args
    run = _single_run(problem, config, run_seed, x0=x0, calibrate=calibrate)
    return run.value, run.params


def _run_batch(problem: Problem, config: VqeConfig, run_seeds, x0=None, calibrate=None):
    """Execute one run per seed; reduction is ordered by run index regardless of workers."""
    jobs = [(problem, config, seed, x0, calibrate) for seed in run_seeds]
    if config.workers == 1 or len(jobs) == 1:
        return [_run_indexed(job) for job in jobs]
    with concurrent.futures.ProcessPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(_run_indexed, jobs))


def run_ensemble(config: VqeConfig, problem: Problem = None) -> EnsembleStats:
    """Independent restarts from random initial angles; aggregate best values."""
    if problem is None:
        problem = _build(config)
    results = _run_batch(problem, config, seed_stream(config.seed, config.restarts))
    values = tuple(value for value, _ in results)
    best_params = min(results, key=lambda pair: pair[0])[1]
    return EnsembleStats(values=values, reference=problem.reference, best_params=best_params)


def run_barrier_scan(config: VqeConfig, barriers) -> tuple:
    """One ensemble per bistable barrier height; returns (barrier, stats) pairs."""
    barriers = tuple(float(b) for b in barriers)
    if not barriers:
        raise ValueError("need at least one barrier height")
    out = []
    for barrier in barriers:
        first = dataclasses.replace(config.chain.dihedrals[0], barrier=barrier)
        chain = dataclasses.replace(
            config.chain, dihedrals=(first,) + config.chain.dihedrals[1:]
        )
        scan_config = dataclasses.replace(config, chain=chain)
        out.append((barrier, run_ensemble(scan_config)))
    return tuple(out)


def run_qubit_scan(config: VqeConfig, ladder) -> tuple:
    """Ensembles along a nested basis ladder; returns (kept_counts, stats) pairs."""
    ladder = tuple(tuple(int(c) for c in rung) for rung in ladder)
    out = []
    for i, rung in enumerate(ladder):
        rung_config = dataclasses.replace(config, kept_counts=rung, ladder=ladder[: i + 1])
        out.append((rung, run_ensemble(rung_config)))
    return tuple(out)


@dataclass(frozen=True)
class RungResult:
    kept_counts: tuple
    qubits: int
    start_value: float
    best_value: float
    best_params: tuple = field(repr=False)
    reference: float


def run_hierarchical(ladder, config: VqeConfig) -> tuple:
    """Warm-start ladder: optimize the smallest register, embed, re-optimize.

    The first rung is a cold restart ensemble.  Each later rung embeds the
    previous best parameters (new most-significant qubit at zero rotation, so
    the previous state is reproduced exactly) and runs a restart ensemble from
    that point with the configured fixed gains; the embedded value itself
    participates in the minimum, which makes rung minima non-increasing by
    construction.
    """
    ladder = tuple(tuple(int(c) for c in rung) for rung in ladder)
    if len(ladder) < 2:
        raise ValueError("a warm-start ladder needs at least two rungs")
    for small, large in zip(ladder, ladder[1:]):
        if len(small) != len(large) or any(a > b for a, b in zip(small, large)):
            raise ValueError(f"ladder rungs must be nested: {small} then {large}")
        if small == large:
            raise ValueError("consecutive ladder rungs must strictly grow")

    rungs = []
    params = None
    best = math.inf
    for i, rung in enumerate(ladder):
        rung_config = dataclasses.replace(config, kept_counts=rung, ladder=ladder[: i + 1])
        problem = _build(rung_config)
        seeds = seed_stream(config.seed + i, config.restarts)
        if i == 0:
            results = _run_batch(problem, rung_config, seeds)
            start_value = math.nan
        else:
            if problem.ansatz.parameter_count != len(params) + 2 * config.depth + 2:
                raise ValueError("ladder rungs must grow by one qubit at a time")
            smaller = AnsatzSpec(
                qubits=problem.qubits - 1, depth=config.depth, entangler=config.entangler
            )
            x0 = embed_params(smaller, np.asarray(params, dtype=float))
            evaluate = _evaluator(problem, rung_config, seeds[0])
            start_value = evaluate(x0)[0]
            results = _run_batch(problem, rung_config, seeds, x0=x0, calibrate=False)
            results.append((start_value, tuple(float(v) for v in x0)))
        value, best_params = min(results, key=lambda pair: pair[0])
        best = min(best, value)
        params = best_params
        rungs.append(
            RungResult(
                kept_counts=rung,
                qubits=problem.qubits,
                start_value=start_value,
                best_value=value,
                best_params=best_params,
                reference=problem.reference,
            )
        )
    return tuple(rungs)


@dataclass(frozen=True)
class DistributionStudy:
    """Repeated re-estimation of one converged state under statistical modes."""

    mode: str
    values: tuple
    exact_value: float

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    @property
    def std(self) -> float:
        return float(np.std(self.values, ddof=1))

    @property
    def minimum(self) -> float:
        return min(self.values)


def run_distribution_study(
    config: VqeConfig,
    params,
    modes=(SAMPLED, NOISY),
    repetitions: int = 200,
    problem: Problem = None,
) -> tuple:
    """Re-measure a fixed parameter set many times per mode (histogram data)."""
    if repetitions < 2:
        raise ValueError("need at least two repetitions for spread statistics")
    if problem is None:
        problem = _build(config)
    params = np.asarray(params, dtype=float)
    if len(params) != problem.ansatz.parameter_count:
        raise ValueError(
            f"expected {problem.ansatz.parameter_count} parameters, got {len(params)}"
        )
    state = prepare_state(problem.ansatz, params)
    exact_value = float(np.real(np.conj(state) @ problem.matrix @ state))
    noise = config.noise if config.noise is not None else NoiseSpec()
    studies = []
    for m, mode in enumerate(modes):
        if mode not in (SAMPLED, NOISY):
            raise ValueError(f"distribution study mode must be statistical, got {mode!r}")
        seeds = seed_stream(config.seed + 7919 * (m + 1), repetitions)
        values = []
        for rep_seed in seeds:
            if mode == SAMPLED:
                est = sampled_expectation(
                    problem.ansatz,
                    params,
                    problem.operator,
                    config.shots,
                    grouping=config.grouping,
                    seed=rep_seed,
                )
            else:
                est = noisy_expectation(
                    problem.ansatz,
                    params,
                    problem.operator,
                    config.shots,
                    dataclasses.replace(noise, seed=rep_seed),
                    mitigate=config.mitigate,
                    grouping=config.grouping,
                )
            values.append(est.value)
        studies.append(DistributionStudy(mode=mode, values=tuple(values), exact_value=exact_value))
    return tuple(studies)
