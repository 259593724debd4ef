"""Cost, gradient, quantum Fisher information, regularization, and evaluation accounting.

The counter models hardware cost, not simulator cost: gradients charge the
two-point parameter-shift price (2 per parameter), the full metric charges
n_params**2 evaluations, and the block-diagonal metric charges
n_params + n_layers, independent of how cheaply the statevector backend
produces the same numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliSum, _apply_sum_array
from .simulator import CircuitIR, derivative_states, expectation_gradient, run_circuit

__all__ = [
    "EvalCounter",
    "MetricMatrix",
    "cost",
    "gradient",
    "qfim_full",
    "qfim_block_diagonal",
    "regularize",
    "SINGULARITY_EIG_TOL",
    "TIKHONOV_SHIFT",
]

SINGULARITY_EIG_TOL = 1e-10
TIKHONOV_SHIFT = 1e-7
SYMMETRY_TOL = 1e-12


class EvalCounter:
    """Monotone circuit-evaluation ledger split by evaluation kind."""

    KINDS = ("cost", "gradient", "qfim_full", "qfim_block")

    def __init__(self):
        self._counts = dict.fromkeys(self.KINDS, 0)

    def charge(self, kind: str, amount: int) -> None:
        if kind not in self._counts:
            raise ValueError(f"unknown evaluation kind {kind!r}")
        amount = int(amount)
        if amount < 0:
            raise ValueError("evaluation counts cannot decrease")
        self._counts[kind] += amount

    @property
    def breakdown(self) -> dict[str, int]:
        return dict(self._counts)

    @property
    def total(self) -> int:
        return sum(self._counts.values())

    def __repr__(self):
        parts = ", ".join(f"{k}={v}" for k, v in self._counts.items())
        return f"EvalCounter(total={self.total}, {parts})"


@dataclass(frozen=True)
class MetricMatrix:
    """Symmetric PSD parameter-space metric; kind in {full, block_diagonal, identity}."""

    entries: np.ndarray
    kind: str

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.float64)
        object.__setattr__(self, "entries", entries)
        if self.kind not in ("full", "block_diagonal", "identity"):
            raise ValueError(f"unknown metric kind {self.kind!r}")
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("metric must be a square matrix")
        if entries.size and np.abs(entries - entries.T).max() > SYMMETRY_TOL:
            raise ValueError("metric must be symmetric")

    @property
    def n_params(self) -> int:
        return self.entries.shape[0]


def _cost_value(circuit: CircuitIR, hamiltonian: PauliSum, params) -> float:
    state = run_circuit(circuit, params)
    value = complex(
        np.vdot(state.amplitudes, _apply_sum_array(state.amplitudes, hamiltonian))
    )
    return value.real


def _energy_and_gradient(circuit, hamiltonian, params) -> tuple[float, np.ndarray]:
    """One forward run plus one reverse sweep; cost independent of n_params."""
    psi = run_circuit(circuit, params).amplitudes
    lam = _apply_sum_array(psi, hamiltonian)
    energy = complex(np.vdot(psi, lam)).real
    grad = expectation_gradient(circuit, params, psi, lam)
    return energy, grad


def _gradient_vector(circuit: CircuitIR, hamiltonian: PauliSum, params) -> np.ndarray:
    return _energy_and_gradient(circuit, hamiltonian, params)[1]


def _qfim_from_sweep(circuit, psi, deriv, block_diagonal: bool) -> np.ndarray:
    overlaps = deriv.conj() @ deriv.T
    phase = deriv @ psi.conj()  # phase[i] = <d_i psi | psi>
    entries = np.real(overlaps) - np.real(np.outer(phase, phase.conj()))
    entries = 0.5 * (entries + entries.T)
    if block_diagonal:
        layers = np.asarray(circuit.layer_of)
        entries = np.where(layers[:, None] == layers[None, :], entries, 0.0)
    return entries


def _qfim_entries(circuit: CircuitIR, params, block_diagonal: bool) -> np.ndarray:
    psi, deriv = derivative_states(circuit, params)
    return _qfim_from_sweep(circuit, psi, deriv, block_diagonal)


def _energy_gradient_qfim(circuit, hamiltonian, params, block_diagonal: bool):
    """Share one derivative sweep between the gradient and the metric."""
    psi, deriv = derivative_states(circuit, params)
    h_psi = _apply_sum_array(psi, hamiltonian)
    energy = complex(np.vdot(psi, h_psi)).real
    grad = 2.0 * np.real(deriv.conj() @ h_psi)
    entries = _qfim_from_sweep(circuit, psi, deriv, block_diagonal)
    return energy, grad, entries


def cost(circuit: CircuitIR, hamiltonian: PauliSum, params, counter: EvalCounter | None) -> float:
    """Energy <psi(theta)|H|psi(theta)>; charges one circuit evaluation."""
    value = _cost_value(circuit, hamiltonian, params)
    if counter is not None:
        counter.charge("cost", 1)
    return value


def gradient(
    circuit: CircuitIR, hamiltonian: PauliSum, params, counter: EvalCounter | None
) -> np.ndarray:
    """Gradient dE/dtheta_i = 2 Re <d_i psi|H|psi>; charges 2 * n_params evaluations."""
    grad = _gradient_vector(circuit, hamiltonian, params)
    if counter is not None:
        counter.charge("gradient", 2 * circuit.n_params)
    return grad


def qfim_full(circuit: CircuitIR, params, counter: EvalCounter | None) -> MetricMatrix:
    """Full quantum Fisher information matrix.

    F_ij = Re<d_i psi|d_j psi> - Re[<d_i psi|psi><psi|d_j psi>], without the
    conventional factor 4 (absorbed into the step size).  Charges
    n_params**2 evaluations.
    """
    entries = _qfim_entries(circuit, params, block_diagonal=False)
    if counter is not None:
        counter.charge("qfim_full", circuit.n_params**2)
    return MetricMatrix(entries, "full")


def qfim_block_diagonal(circuit: CircuitIR, params, counter: EvalCounter | None) -> MetricMatrix:
    """Layer-block approximation: entries with differing layer tags are zeroed.

    Charges n_params + n_layers evaluations.
    """
    entries = _qfim_entries(circuit, params, block_diagonal=True)
    if counter is not None:
        counter.charge("qfim_block", circuit.n_params + circuit.n_layers)
    return MetricMatrix(entries, "block_diagonal")


def regularize(metric: MetricMatrix) -> MetricMatrix:
    """Add 1e-7 to the diagonal when the smallest eigenvalue is below 1e-10."""
    if metric.n_params == 0:
        return metric
    smallest = float(np.linalg.eigvalsh(metric.entries)[0])
    if smallest >= SINGULARITY_EIG_TOL:
        return metric
    shifted = metric.entries + TIKHONOV_SHIFT * np.eye(metric.n_params)
    return MetricMatrix(shifted, metric.kind)
