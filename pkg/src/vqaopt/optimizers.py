"""Optimizer kernels: Adam, QNG/VarQITE, qBroyden, qBang, Momentum-QNG.

qBroyden and qBang never invert a matrix during iteration: the inverse metric
is maintained directly through a rank-1 low-pass filter

    F_{k+1} = (1 - eps_k) F_k + eps_k g g^T,      eps_k = eps0 / (k + 1),

applied in inverse form via the Sherman-Morrison identity.  QNG (and its
VarQITE labeling, which takes the identical update) recomputes the metric
each step and solves against the gradient instead.

Kernels are pure: they return fresh state objects and never mutate their
inputs.  When the preconditioned update norm is already within the
convergence threshold, nothing is mutated at all, the evaluation counter
included.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .gradients import (
    EvalCounter,
    MetricMatrix,
    _energy_and_gradient,
    _energy_gradient_qfim,
    qfim_block_diagonal,
    qfim_full,
    regularize,
)
from .pauli import PauliSum
from .simulator import CircuitIR

__all__ = [
    "AdamState",
    "MetricState",
    "StepResult",
    "OptimizerSettings",
    "FilterBreakdownError",
    "MetricError",
    "adam_direction",
    "filter_update",
    "initialize_metric",
    "adam_step",
    "qbang_step",
    "qbroyden_step",
    "qng_step",
    "momentum_qng_step",
    "make_runner",
    "OPTIMIZER_NAMES",
]

FILTER_DENOM_TOL = 1e-12

OPTIMIZER_NAMES = ("adam", "qng", "varqite", "qbroyden", "qbang", "momentum_qng")
METRIC_INIT_MODES = ("full", "block_diagonal", "identity")
QNG_MODES = ("full", "block_diagonal")


class FilterBreakdownError(RuntimeError):
    """Inverse-metric filter update hit a near-zero denominator or overflowed.

    The metric memory is no longer trustworthy; callers may reinitialize the
    metric from a fresh Fisher information estimate and continue.
    """


class MetricError(RuntimeError):
    """Metric construction or linear solve failed even after regularization."""


@dataclass(frozen=True)
class AdamState:
    """First/second moment memory with bias-correction step index."""

    m: np.ndarray
    v: np.ndarray
    k: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    kappa: float = 1e-8

    def __post_init__(self):
        object.__setattr__(self, "m", np.asarray(self.m, dtype=np.float64))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=np.float64))
        if self.m.shape != self.v.shape or self.m.ndim != 1:
            raise ValueError("moment vectors must be 1-D and share a length")
        if not (0.0 < self.beta1 < 1.0 and 0.0 < self.beta2 < 1.0):
            raise ValueError("decay rates must lie in (0, 1)")
        if self.kappa <= 0.0:
            raise ValueError("kappa must be positive")
        if (self.v < 0).any():
            raise ValueError("second moments must be non-negative")

    @classmethod
    def fresh(cls, n_params: int, beta1=0.9, beta2=0.999, kappa=1e-8) -> "AdamState":
        return cls(np.zeros(n_params), np.zeros(n_params), 0, beta1, beta2, kappa)


@dataclass(frozen=True)
class MetricState:
    """Inverse metric plus the filter's step index and step-size settings."""

    f_inv: np.ndarray
    k: int = 0
    eps0: float = 0.2
    eta: float = 0.01
    step_scaling: bool = True

    def __post_init__(self):
        object.__setattr__(self, "f_inv", np.asarray(self.f_inv, dtype=np.float64))
        if self.f_inv.ndim != 2 or self.f_inv.shape[0] != self.f_inv.shape[1]:
            raise ValueError("inverse metric must be square")
        if not 0.0 <= self.eps0 < 1.0:
            raise ValueError("eps0 must lie in [0, 1)")
        if self.eta <= 0.0:
            raise ValueError("eta must be positive")


@dataclass(frozen=True)
class StepResult:
    """Outcome of one optimizer step.

    ``energy`` and ``grad_norm`` are the values at the entry parameters; a
    converged result leaves the parameters (and every optimizer state)
    untouched.
    """

    new_params: np.ndarray
    update_norm: float
    converged: bool
    energy: float
    grad_norm: float


def adam_direction(grad, state: AdamState) -> tuple[np.ndarray, AdamState]:
    """Bias-corrected moment direction p = m_hat / (sqrt(v_hat) + kappa)."""
    grad = np.asarray(grad, dtype=np.float64)
    if not np.isfinite(grad).all():
        raise ValueError("gradient must be finite")
    m = state.beta1 * state.m + (1.0 - state.beta1) * grad
    v = state.beta2 * state.v + (1.0 - state.beta2) * grad * grad
    m_hat = m / (1.0 - state.beta1 ** (state.k + 1))
    v_hat = v / (1.0 - state.beta2 ** (state.k + 1))
    p = m_hat / (np.sqrt(v_hat) + state.kappa)
    return p, replace(state, m=m, v=v, k=state.k + 1)


def filter_update(metric: MetricState, grad) -> MetricState:
    """One inverse-form low-pass filter step with eps_k = eps0 / (k + 1).

    F_inv <- [I - eps F_inv g g^T / (1 - eps (1 - g^T F_inv g))] F_inv / (1 - eps),
    symmetrized afterwards.  Raises FilterBreakdownError when the denominator
    is within 1e-12 of zero or the update overflows.
    """
    grad = np.asarray(grad, dtype=np.float64)
    eps = metric.eps0 / (metric.k + 1)
    if eps == 0.0:
        return replace(metric, k=metric.k + 1)
    f_inv = metric.f_inv
    fg = f_inv @ grad
    quad = float(grad @ fg)
    denom = 1.0 - eps * (1.0 - quad)
    if abs(denom) < FILTER_DENOM_TOL:
        raise FilterBreakdownError(f"filter denominator {denom} within {FILTER_DENOM_TOL} of zero")
    updated = (f_inv - (eps / denom) * np.outer(fg, fg)) / (1.0 - eps)
    updated = 0.5 * (updated + updated.T)
    if not np.isfinite(updated).all():
        raise FilterBreakdownError("inverse metric overflowed during filter update")
    return replace(metric, f_inv=updated, k=metric.k + 1)


def initialize_metric(
    circuit: CircuitIR,
    params,
    mode: str,
    counter: EvalCounter | None,
    eps0: float = 0.2,
    eta: float = 0.01,
    step_scaling: bool = True,
) -> MetricState:
    """Build F_0^{-1} from the full metric, its block approximation, or the identity.

    Full/block modes charge the counter their metric price; identity is free.
    """
    if mode not in METRIC_INIT_MODES:
        raise ValueError(f"metric init mode must be one of {METRIC_INIT_MODES}, got {mode!r}")
    n = circuit.n_params
    if mode == "identity":
        f_inv = np.eye(n)
    else:
        if mode == "full":
            metric = qfim_full(circuit, params, counter)
        else:
            metric = qfim_block_diagonal(circuit, params, counter)
        metric = regularize(metric)
        try:
            cho = scipy.linalg.cho_factor(metric.entries)
            f_inv = scipy.linalg.cho_solve(cho, np.eye(n))
        except scipy.linalg.LinAlgError as exc:
            raise MetricError(f"metric inversion failed after regularization: {exc}") from exc
        f_inv = 0.5 * (f_inv + f_inv.T)
    return MetricState(f_inv, 0, eps0, eta, step_scaling)


def _solve_metric(metric: MetricMatrix, rhs: np.ndarray) -> np.ndarray:
    metric = regularize(metric)
    try:
        cho = scipy.linalg.cho_factor(metric.entries)
        return scipy.linalg.cho_solve(cho, rhs)
    except scipy.linalg.LinAlgError as exc:
        raise MetricError(f"metric solve failed after regularization: {exc}") from exc


def adam_step(
    circuit: CircuitIR,
    hamiltonian: PauliSum,
    params,
    adam: AdamState,
    gamma: float,
    counter: EvalCounter | None,
    eta: float,
) -> tuple[StepResult, AdamState]:
    """Plain Adam update theta' = theta - eta * p; converges on |p| <= gamma."""
    params = np.asarray(params, dtype=np.float64)
    energy, grad = _energy_and_gradient(circuit, hamiltonian, params)
    p, adam_next = adam_direction(grad, adam)
    update_norm = float(np.linalg.norm(p))
    grad_norm = float(np.linalg.norm(grad))
    if update_norm <= gamma:
        return StepResult(params, update_norm, True, energy, grad_norm), adam
    _charge_step(counter, circuit)
    new_params = params - eta * p
    return StepResult(new_params, update_norm, False, energy, grad_norm), adam_next


def qbang_step(
    circuit: CircuitIR,
    hamiltonian: PauliSum,
    params,
    adam: AdamState,
    metric: MetricState,
    gamma: float,
    counter: EvalCounter | None,
) -> tuple[StepResult, AdamState, MetricState]:
    """Adam direction preconditioned by the filtered inverse metric.

    theta' = theta - eta F^{-1} p / (k + 1)**eps0 with the divisor active only
    when step_scaling is on; the filter then absorbs the raw gradient.
    """
    params = np.asarray(params, dtype=np.float64)
    energy, grad = _energy_and_gradient(circuit, hamiltonian, params)
    p, adam_next = adam_direction(grad, adam)
    direction = metric.f_inv @ p
    update_norm = float(np.linalg.norm(direction))
    grad_norm = float(np.linalg.norm(grad))
    if update_norm <= gamma:
        return StepResult(params, update_norm, True, energy, grad_norm), adam, metric
    _charge_step(counter, circuit)
    divisor = (metric.k + 1) ** metric.eps0 if metric.step_scaling else 1.0
    new_params = params - metric.eta * direction / divisor
    metric_next = filter_update(metric, grad)
    return StepResult(new_params, update_norm, False, energy, grad_norm), adam_next, metric_next


def qbroyden_step(
    circuit: CircuitIR,
    hamiltonian: PauliSum,
    params,
    metric: MetricState,
    gamma: float,
    counter: EvalCounter | None,
) -> tuple[StepResult, MetricState]:
    """qBang without the moment direction: theta' = theta - eta F^{-1} grad."""
    params = np.asarray(params, dtype=np.float64)
    energy, grad = _energy_and_gradient(circuit, hamiltonian, params)
    direction = metric.f_inv @ grad
    update_norm = float(np.linalg.norm(direction))
    grad_norm = float(np.linalg.norm(grad))
    if update_norm <= gamma:
        return StepResult(params, update_norm, True, energy, grad_norm), metric
    _charge_step(counter, circuit)
    new_params = params - metric.eta * direction
    metric_next = filter_update(metric, grad)
    return StepResult(new_params, update_norm, False, energy, grad_norm), metric_next


def qng_step(
    circuit: CircuitIR,
    hamiltonian: PauliSum,
    params,
    gamma: float,
    counter: EvalCounter | None,
    mode: str,
    eta: float,
) -> StepResult:
    """Natural-gradient step with the metric recomputed every iteration.

    ``mode='full'`` is the imaginary-time (VarQITE) update; the metric is
    regularized when singular and solved against the gradient.
    """
    if mode not in QNG_MODES:
        raise ValueError(f"qng mode must be one of {QNG_MODES}, got {mode!r}")
    params = np.asarray(params, dtype=np.float64)
    energy, grad, entries = _energy_gradient_qfim(
        circuit, hamiltonian, params, block_diagonal=(mode == "block_diagonal")
    )
    kind = "block_diagonal" if mode == "block_diagonal" else "full"
    direction = _solve_metric(MetricMatrix(entries, kind), grad)
    update_norm = float(np.linalg.norm(direction))
    grad_norm = float(np.linalg.norm(grad))
    if update_norm <= gamma:
        return StepResult(params, update_norm, True, energy, grad_norm)
    _charge_step(counter, circuit)
    _charge_metric(counter, circuit, mode)
    return StepResult(params - eta * direction, update_norm, False, energy, grad_norm)


def momentum_qng_step(
    circuit: CircuitIR,
    hamiltonian: PauliSum,
    params,
    adam: AdamState,
    gamma: float,
    counter: EvalCounter | None,
    eta: float,
) -> tuple[StepResult, AdamState]:
    """Fresh full metric each step applied to the Adam direction."""
    params = np.asarray(params, dtype=np.float64)
    energy, grad, entries = _energy_gradient_qfim(circuit, hamiltonian, params, block_diagonal=False)
    p, adam_next = adam_direction(grad, adam)
    direction = _solve_metric(MetricMatrix(entries, "full"), p)
    update_norm = float(np.linalg.norm(direction))
    grad_norm = float(np.linalg.norm(grad))
    if update_norm <= gamma:
        return StepResult(params, update_norm, True, energy, grad_norm), adam
    _charge_step(counter, circuit)
    _charge_metric(counter, circuit, "full")
    return StepResult(params - eta * direction, update_norm, False, energy, grad_norm), adam_next


def _charge_step(counter: EvalCounter | None, circuit: CircuitIR) -> None:
    if counter is not None:
        counter.charge("cost", 1)
        counter.charge("gradient", 2 * circuit.n_params)


def _charge_metric(counter: EvalCounter | None, circuit: CircuitIR, mode: str) -> None:
    if counter is None:
        return
    if mode == "full":
        counter.charge("qfim_full", circuit.n_params**2)
    else:
        counter.charge("qfim_block", circuit.n_params + circuit.n_layers)


# ---------------------------------------------------------------------------
# harness-facing runners
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OptimizerSettings:
    """Kernel name plus every hyperparameter the harness can configure."""

    name: str
    eta: float = 0.01
    eps0: float = 0.2
    beta1: float = 0.9
    beta2: float = 0.999
    kappa: float = 1e-8
    gamma: float = 0.0
    metric_init: str = "full"
    qng_mode: str = "block_diagonal"
    step_scaling: bool = True

    def __post_init__(self):
        if self.name not in OPTIMIZER_NAMES:
            raise ValueError(f"unknown optimizer {self.name!r}; choose from {OPTIMIZER_NAMES}")
        if self.eta <= 0.0:
            raise ValueError("eta must be positive")
        if not 0.0 <= self.eps0 < 1.0:
            raise ValueError("eps0 must lie in [0, 1)")
        if self.gamma < 0.0:
            raise ValueError("gamma must be non-negative")
        if self.metric_init not in METRIC_INIT_MODES:
            raise ValueError(f"metric_init must be one of {METRIC_INIT_MODES}")
        if self.qng_mode not in QNG_MODES:
            raise ValueError(f"qng_mode must be one of {QNG_MODES}")


class _Runner:
    """Owns per-trajectory optimizer state; one instance per trajectory."""

    def __init__(self, settings: OptimizerSettings):
        self.settings = settings

    def initialize(self, circuit: CircuitIR, params, counter: EvalCounter) -> None:
        pass

    def step(self, circuit, hamiltonian, params, counter) -> StepResult:
        raise NotImplementedError


class _AdamRunner(_Runner):
    def initialize(self, circuit, params, counter):
        s = self.settings
        self._adam = AdamState.fresh(circuit.n_params, s.beta1, s.beta2, s.kappa)

    def step(self, circuit, hamiltonian, params, counter):
        s = self.settings
        result, self._adam = adam_step(
            circuit, hamiltonian, params, self._adam, s.gamma, counter, s.eta
        )
        return result


class _QngRunner(_Runner):
    def __init__(self, settings, mode):
        super().__init__(settings)
        self._mode = mode

    def step(self, circuit, hamiltonian, params, counter):
        s = self.settings
        return qng_step(circuit, hamiltonian, params, s.gamma, counter, self._mode, s.eta)


class _QBroydenRunner(_Runner):
    def initialize(self, circuit, params, counter):
        s = self.settings
        self._metric = initialize_metric(
            circuit, params, s.metric_init, counter, s.eps0, s.eta, s.step_scaling
        )

    def step(self, circuit, hamiltonian, params, counter):
        result, self._metric = qbroyden_step(
            circuit, hamiltonian, params, self._metric, self.settings.gamma, counter
        )
        return result


class _QBangRunner(_Runner):
    def initialize(self, circuit, params, counter):
        s = self.settings
        self._adam = AdamState.fresh(circuit.n_params, s.beta1, s.beta2, s.kappa)
        self._metric = initialize_metric(
            circuit, params, s.metric_init, counter, s.eps0, s.eta, s.step_scaling
        )

    def step(self, circuit, hamiltonian, params, counter):
        result, self._adam, self._metric = qbang_step(
            circuit, hamiltonian, params, self._adam, self._metric, self.settings.gamma, counter
        )
        return result


class _MomentumQngRunner(_Runner):
    def initialize(self, circuit, params, counter):
        s = self.settings
        self._adam = AdamState.fresh(circuit.n_params, s.beta1, s.beta2, s.kappa)

    def step(self, circuit, hamiltonian, params, counter):
        s = self.settings
        result, self._adam = momentum_qng_step(
            circuit, hamiltonian, params, self._adam, s.gamma, counter, s.eta
        )
        return result


def make_runner(settings: OptimizerSettings) -> _Runner:
    """Instantiate the per-trajectory runner for a settings bundle.

    ``varqite`` is the full-metric QNG update under its imaginary-time name
    and shares that code path exactly.
    """
    name = settings.name
    if name == "adam":
        return _AdamRunner(settings)
    if name == "qng":
        return _QngRunner(settings, settings.qng_mode)
    if name == "varqite":
        return _QngRunner(settings, "full")
    if name == "qbroyden":
        return _QBroydenRunner(settings)
    if name == "qbang":
        return _QBangRunner(settings)
    if name == "momentum_qng":
        return _MomentumQngRunner(settings)
    raise ValueError(f"unknown optimizer {name!r}")  # pragma: no cover
