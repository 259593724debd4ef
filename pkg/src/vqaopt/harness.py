"""Experiment orchestration: seeded trajectory fan-out, aggregation, and CSV emission.

Seeds are plain integers 0..n_seeds-1 feeding a Philox counter-based
generator, so every optimizer compared under one config consumes identical
starting parameter vectors.  Trajectories that break down (filter breakdown,
singular solves, non-finite parameters) are recorded as failed and excluded
from means; they surface in the failures count instead of being dropped
silently.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .gradients import EvalCounter, _cost_value
from .optimizers import (
    FilterBreakdownError,
    MetricError,
    OptimizerSettings,
    make_runner,
)
from .problems import (
    ProblemInstance,
    build_barren_plateau,
    build_hardware_efficient,
    build_qaoa,
    initial_params,
    load_problem,
    read_graph,
)

__all__ = [
    "ProblemSettings",
    "ExperimentConfig",
    "TrajectoryRecord",
    "ExperimentAggregate",
    "ConfigError",
    "ExperimentError",
    "build_instance",
    "run_trajectory",
    "run_experiment",
    "approximation_ratio",
    "evals_to_ratio",
    "sweep_step_size",
    "emit_csv",
    "parse_config",
    "load_config",
]

TRAJECTORY_COLUMNS = ("seed", "step", "evals", "energy", "grad_norm", "update_norm")
AGGREGATE_COLUMNS = ("step", "evals_mean", "energy_mean", "energy_var", "n_seeds")


class ConfigError(ValueError):
    """Invalid experiment configuration (unknown key, bad value, missing field)."""


class ExperimentError(RuntimeError):
    """Experiment could not produce any usable trajectory."""


@dataclass(frozen=True)
class ProblemSettings:
    kind: str  # barren_plateau | qaoa | chemistry
    n_qubits: int = 9
    n_layers: int = 4
    axis_seed: int = 0
    graph_path: str | None = None
    hamiltonian_path: str | None = None
    observable_paths: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("barren_plateau", "qaoa", "chemistry"):
            raise ConfigError(f"unknown problem kind {self.kind!r}")
        if self.kind == "qaoa" and not self.graph_path:
            raise ConfigError("qaoa problem needs graph = <path>")
        if self.kind == "chemistry" and not self.hamiltonian_path:
            raise ConfigError("chemistry problem needs hamiltonian = <path>")


@dataclass(frozen=True)
class ExperimentConfig:
    problem: ProblemSettings
    optimizer: OptimizerSettings
    n_seeds: int = 25
    max_steps: int = 1100
    init_mode: str | None = None  # None: use the instance default
    init_sigma: float = 0.01
    fixed_params: tuple[float, ...] | None = None
    out_dir: str = "."
    n_workers: int = 1

    def __post_init__(self):
        if self.n_seeds < 1:
            raise ConfigError("n_seeds must be positive")
        if self.max_steps < 0:
            raise ConfigError("max_steps must be non-negative")
        if self.init_mode is not None and self.init_mode not in (
            "random_uniform",
            "hartree_fock_perturbed",
            "fixed",
        ):
            raise ConfigError(f"unknown init_mode {self.init_mode!r}")
        if self.n_workers < 1:
            raise ConfigError("n_workers must be positive")


@dataclass
class TrajectoryRecord:
    """Per-step rows plus terminal summary for one seeded optimization run."""

    seed: int
    steps: list[int]
    evals: list[int]
    energies: list[float]
    grad_norms: list[float]
    update_norms: list[float]
    best_energy: float
    best_params: np.ndarray | None
    converged: bool
    failed: bool
    failure_reason: str | None
    total_evals: int
    exact_bounds: tuple[float, float] | None

    @property
    def n_rows(self) -> int:
        return len(self.steps)


def build_instance(problem: ProblemSettings) -> ProblemInstance:
    """Construct the immutable problem instance a config describes."""
    if problem.kind == "barren_plateau":
        return build_barren_plateau(problem.n_qubits, problem.n_layers, problem.axis_seed)
    if problem.kind == "qaoa":
        return build_qaoa(read_graph(problem.graph_path), problem.n_layers)
    # chemistry: hardware-efficient ansatz over operators loaded from files
    text_n = _peek_qubits(problem.hamiltonian_path)
    circuit = build_hardware_efficient(text_n, problem.n_layers)
    return load_problem(problem.hamiltonian_path, problem.observable_paths, circuit)


def _peek_qubits(path) -> int:
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            return len(line.split()[1])
    raise ValueError(f"{path}: no operator terms found")


def run_trajectory(
    config: ExperimentConfig, seed: int, instance: ProblemInstance | None = None
) -> TrajectoryRecord:
    """Run one seeded trajectory to convergence, step budget, or breakdown.

    Every committed step appends a row (step index, cumulative evaluations,
    energy at the entry parameters, gradient norm, update norm).  With
    max_steps=0 only the initial energy is recorded, free of charge, so the
    evaluation accounting matches the per-step closed form exactly.
    """
    if instance is None:
        instance = build_instance(config.problem)
    circuit, hamiltonian = instance.circuit, instance.hamiltonian
    mode = config.init_mode or instance.init_mode
    params = initial_params(
        instance, mode, seed, sigma=config.init_sigma, fixed=config.fixed_params
    )
    counter = EvalCounter()
    record = TrajectoryRecord(
        seed=seed,
        steps=[],
        evals=[],
        energies=[],
        grad_norms=[],
        update_norms=[],
        best_energy=math.inf,
        best_params=None,
        converged=False,
        failed=False,
        failure_reason=None,
        total_evals=0,
        exact_bounds=instance.exact_bounds,
    )
    runner = make_runner(config.optimizer)
    try:
        runner.initialize(circuit, params, counter)
    except (MetricError, np.linalg.LinAlgError) as exc:
        record.failed = True
        record.failure_reason = f"initialization: {exc}"
        record.total_evals = counter.total
        return record

    if config.max_steps == 0:
        energy = _cost_value(circuit, hamiltonian, params)
        _append_row(record, 0, counter.total, energy, math.nan, math.nan, params)
        record.total_evals = counter.total
        return record

    for k in range(config.max_steps):
        try:
            result = runner.step(circuit, hamiltonian, params, counter)
        except (FilterBreakdownError, MetricError, np.linalg.LinAlgError, ValueError) as exc:
            record.failed = True
            record.failure_reason = f"step {k}: {exc}"
            break
        if result.converged:
            record.converged = True
            break
        _append_row(
            record, k, counter.total, result.energy, result.grad_norm, result.update_norm, params
        )
        params = result.new_params
        if not (np.isfinite(params).all() and math.isfinite(result.energy)):
            record.failed = True
            record.failure_reason = f"step {k}: non-finite parameters or energy"
            break
    record.total_evals = counter.total
    return record


def _append_row(record, step, evals, energy, grad_norm, update_norm, params) -> None:
    if record.evals and evals <= record.evals[-1]:
        raise ExperimentError("cumulative evaluations must be strictly increasing")
    record.steps.append(step)
    record.evals.append(evals)
    record.energies.append(energy)
    record.grad_norms.append(grad_norm)
    record.update_norms.append(update_norm)
    if energy < record.best_energy:
        record.best_energy = energy
        record.best_params = np.array(params, copy=True)


@dataclass
class ExperimentAggregate:
    """Seed-averaged trajectory data with per-optimizer summary statistics."""

    records: list[TrajectoryRecord]
    steps: np.ndarray
    evals_mean: np.ndarray
    energy_mean: np.ndarray
    energy_var: np.ndarray
    n_seeds_per_step: np.ndarray
    exact_bounds: tuple[float, float] | None
    n_failures: int

    @property
    def ok_records(self) -> list[TrajectoryRecord]:
        return [r for r in self.records if not r.failed]

    def mean_best_energy(self) -> float:
        return float(np.mean([r.best_energy for r in self.ok_records]))

    def mean_best_ratio(self) -> float:
        if self.exact_bounds is None:
            raise ExperimentError("mean_best_ratio needs exact bounds")
        e_min, e_max = self.exact_bounds
        return float(
            np.mean([approximation_ratio(r.best_energy, e_min, e_max) for r in self.ok_records])
        )

    def summary(self, threshold: float = 0.99) -> dict:
        out = {
            "n_seeds": len(self.records),
            "n_failures": self.n_failures,
            "mean_best_energy": self.mean_best_energy(),
        }
        if self.exact_bounds is not None:
            mean_evals, fraction = evals_to_ratio(self, threshold)
            out["mean_best_ratio"] = self.mean_best_ratio()
            out["threshold"] = threshold
            out["mean_evals_to_threshold"] = mean_evals
            out["reach_fraction"] = fraction
        return out


def run_experiment(config: ExperimentConfig) -> ExperimentAggregate:
    """Run seeds 0..n_seeds-1 over a shared instance and aggregate by step index.

    The per-step mean/variance covers the trajectories that reached that step;
    failed trajectories are excluded from means but kept in the record list.
    """
    instance = build_instance(config.problem)
    seeds = list(range(config.n_seeds))
    if config.n_workers > 1:
        with ThreadPoolExecutor(max_workers=config.n_workers) as pool:
            records = list(pool.map(lambda s: run_trajectory(config, s, instance), seeds))
    else:
        records = [run_trajectory(config, s, instance) for s in seeds]
    ok = [r for r in records if not r.failed]
    if not ok:
        raise ExperimentError("all seeds failed; see per-record failure reasons")
    max_rows = max(r.n_rows for r in ok)
    steps = np.arange(max_rows, dtype=np.int64)
    evals_mean = np.empty(max_rows)
    energy_mean = np.empty(max_rows)
    energy_var = np.empty(max_rows)
    n_at = np.empty(max_rows, dtype=np.int64)
    for k in range(max_rows):
        at_k = [r for r in ok if r.n_rows > k]
        energies = np.array([r.energies[k] for r in at_k])
        evals_mean[k] = np.mean([r.evals[k] for r in at_k])
        energy_mean[k] = energies.mean()
        energy_var[k] = energies.var()
        n_at[k] = len(at_k)
    return ExperimentAggregate(
        records=records,
        steps=steps,
        evals_mean=evals_mean,
        energy_mean=energy_mean,
        energy_var=energy_var,
        n_seeds_per_step=n_at,
        exact_bounds=instance.exact_bounds,
        n_failures=len(records) - len(ok),
    )


def approximation_ratio(e_opt: float, e_min: float, e_max: float) -> float:
    """r = (E_opt - E_max) / (E_min - E_max): 1 at the optimum, 0 at the worst case."""
    if not e_min < e_max:
        raise ValueError(f"degenerate bounds: E_min={e_min}, E_max={e_max}")
    return (e_opt - e_max) / (e_min - e_max)


def evals_to_ratio(record_or_aggregate, threshold: float):
    """First cumulative evaluation count at which the running best reaches the ratio.

    For a single record: the count, or None if never reached.  For an
    aggregate: (mean count over the seeds that reached it or None, fraction of
    non-failed seeds that reached it).
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must lie in (0, 1]")
    if isinstance(record_or_aggregate, ExperimentAggregate):
        agg = record_or_aggregate
        counts = [evals_to_ratio(r, threshold) for r in agg.ok_records]
        reached = [c for c in counts if c is not None]
        fraction = len(reached) / len(counts) if counts else 0.0
        return (float(np.mean(reached)) if reached else None, fraction)
    record = record_or_aggregate
    if record.exact_bounds is None:
        raise ValueError("evals_to_ratio needs exact bounds on the record")
    e_min, e_max = record.exact_bounds
    best = math.inf
    for energy, evals in zip(record.energies, record.evals):
        best = min(best, energy)
        if approximation_ratio(best, e_min, e_max) >= threshold:
            return evals
    return None


def ratio_curve(aggregate: ExperimentAggregate) -> tuple[np.ndarray, np.ndarray]:
    """Per-step mean of the instantaneous approximation ratio over seeds.

    Instantaneous, not running-best, so oscillating or diverging runs show up
    as dips in the curve.  Returns (steps, mean_ratio); needs exact bounds.
    """
    if aggregate.exact_bounds is None:
        raise ExperimentError("ratio_curve needs exact bounds")
    e_min, e_max = aggregate.exact_bounds
    ratios = np.array(
        [approximation_ratio(energy, e_min, e_max) for energy in aggregate.energy_mean]
    )
    return aggregate.steps, ratios


def sweep_step_size(config: ExperimentConfig, etas) -> dict[float, ExperimentAggregate]:
    """One run_experiment per step size, sharing seeds and every other setting."""
    etas = [float(e) for e in etas]
    if not etas:
        raise ValueError("eta list must be non-empty")
    out = {}
    for eta in etas:
        cfg = replace(config, optimizer=replace(config.optimizer, eta=eta))
        out[eta] = run_experiment(cfg)
    return out


def emit_csv(obj, path) -> None:
    """Write a trajectory record (or list of records) or an aggregate as CSV.

    Column sets are fixed: trajectories carry
    seed,step,evals,energy,grad_norm,update_norm and aggregates carry
    step,evals_mean,energy_mean,energy_var,n_seeds.  Row order is
    deterministic (sorted by seed, then step).
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        if isinstance(obj, ExperimentAggregate):
            writer.writerow(AGGREGATE_COLUMNS)
            for k in range(len(obj.steps)):
                writer.writerow(
                    [
                        int(obj.steps[k]),
                        repr(float(obj.evals_mean[k])),
                        repr(float(obj.energy_mean[k])),
                        repr(float(obj.energy_var[k])),
                        int(obj.n_seeds_per_step[k]),
                    ]
                )
            return
        records = obj if isinstance(obj, (list, tuple)) else [obj]
        writer.writerow(TRAJECTORY_COLUMNS)
        for record in sorted(records, key=lambda r: r.seed):
            for k in range(record.n_rows):
                writer.writerow(
                    [
                        record.seed,
                        record.steps[k],
                        record.evals[k],
                        repr(float(record.energies[k])),
                        repr(float(record.grad_norms[k])),
                        repr(float(record.update_norms[k])),
                    ]
                )


# ---------------------------------------------------------------------------
# config file format: flat `key = value` lines, '#' comments, unknown keys error
# ---------------------------------------------------------------------------

_PROBLEM_KEYS = {
    "problem": str,
    "n_qubits": int,
    "n_layers": int,
    "axis_seed": int,
    "graph": str,
    "hamiltonian": str,
    "observables": str,  # name:path[,name:path...]
}
_OPTIMIZER_KEYS = {
    "optimizer": str,
    "eta": float,
    "eps0": float,
    "beta1": float,
    "beta2": float,
    "kappa": float,
    "gamma": float,
    "metric_init": str,
    "qng_mode": str,
    "step_scaling": "bool",
}
_RUN_KEYS = {
    "n_seeds": int,
    "max_steps": int,
    "init_mode": str,
    "init_sigma": float,
    "fixed_params": "floats",
    "out_dir": str,
    "n_workers": int,
}
_ALL_KEYS = {**_PROBLEM_KEYS, **_OPTIMIZER_KEYS, **_RUN_KEYS}


def _convert(key: str, raw: str):
    caster = _ALL_KEYS[key]
    try:
        if caster == "bool":
            lowered = raw.lower()
            if lowered not in ("true", "false", "on", "off"):
                raise ValueError("expected true/false")
            return lowered in ("true", "on")
        if caster == "floats":
            return tuple(float(x) for x in raw.split(","))
        return caster(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r} ({exc})") from exc


def parse_config(text: str) -> ExperimentConfig:
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _convert(key, value)
    for required in ("problem", "optimizer"):
        if required not in values:
            raise ConfigError(f"missing required key {required!r}")

    observables = {}
    if "observables" in values:
        for chunk in str(values["observables"]).split(","):
            name, sep, obs_path = chunk.partition(":")
            if not sep or not name.strip() or not obs_path.strip():
                raise ConfigError(f"bad observables entry {chunk!r}; use name:path")
            observables[name.strip()] = obs_path.strip()

    try:
        problem = ProblemSettings(
            kind=str(values["problem"]),
            n_qubits=int(values.get("n_qubits", 9)),
            n_layers=int(values.get("n_layers", 4)),
            axis_seed=int(values.get("axis_seed", 0)),
            graph_path=values.get("graph"),
            hamiltonian_path=values.get("hamiltonian"),
            observable_paths=observables,
        )
        optimizer_kwargs = {
            "name": str(values["optimizer"]),
            **{
                key: values[key]
                for key in ("eta", "eps0", "beta1", "beta2", "kappa", "gamma", "step_scaling")
                if key in values
            },
        }
        if "metric_init" in values:
            optimizer_kwargs["metric_init"] = values["metric_init"]
        if "qng_mode" in values:
            optimizer_kwargs["qng_mode"] = values["qng_mode"]
        optimizer = OptimizerSettings(**optimizer_kwargs)
        return ExperimentConfig(
            problem=problem,
            optimizer=optimizer,
            n_seeds=int(values.get("n_seeds", 25)),
            max_steps=int(values.get("max_steps", 1100)),
            init_mode=values.get("init_mode"),
            init_sigma=float(values.get("init_sigma", 0.01)),
            fixed_params=values.get("fixed_params"),
            out_dir=str(values.get("out_dir", ".")),
            n_workers=int(values.get("n_workers", 1)),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)
