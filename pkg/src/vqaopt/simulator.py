"""Statevector engine: gates, circuit execution, and analytic derivative states.

Conventions
-----------
* Qubit 0 is the leftmost position in operator strings and the most
  significant bit of the computational-basis index.
* Parametrized rotations follow ``gate = exp(-i * angle * P / 2)`` where the
  effective angle is ``angle_scale * theta[param_slot]``.  With unit scale this
  makes the parameter-shift rule exact at shifts of +-pi/2.
* Circuits always start from |0...0>; state-preparation walls (fixed Ry
  layers, Hadamard walls) are fixed gates inside the circuit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

try:  # compiled kernels; the numpy path below is the reference fallback
    from . import _fastpath
except ImportError:  # pragma: no cover - numba not installed
    _fastpath = None

__all__ = [
    "Statevector",
    "GateOp",
    "CircuitIR",
    "run_circuit",
    "derivative_state",
    "derivative_states",
    "expectation_gradient",
]

NORM_TOL = 1e-10

_GATE_CODES = {"RX": 0, "RY": 1, "RZ": 2, "H": 3, "CZ": 4, "CNOT": 5, "FIXED_RY": 6}
_AXIS_CODES = {"X": 0, "Y": 1, "Z": 2}

# gate kind -> (number of targets, parametrized?, generator Pauli)
_GATE_KINDS = {
    "RX": (1, True, "X"),
    "RY": (1, True, "Y"),
    "RZ": (1, True, "Z"),
    "H": (1, False, None),
    "CZ": (2, False, None),
    "CNOT": (2, False, None),
    "FIXED_RY": (1, False, None),
}


@dataclass(frozen=True)
class Statevector:
    """Amplitudes of an n-qubit pure state, basis index ordered qubit-0-first."""

    amplitudes: np.ndarray
    n_qubits: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        object.__setattr__(self, "amplitudes", amps)
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if amps.shape != (1 << self.n_qubits,):
            raise ValueError(
                f"amplitude vector has shape {amps.shape}, expected (2**{self.n_qubits},)"
            )

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "Statevector":
        return Statevector(self.amplitudes.copy(), self.n_qubits)


@dataclass(frozen=True)
class GateOp:
    """One gate: fixed (H, CZ, CNOT, FIXED_RY) or parametrized (RX, RY, RZ).

    Parametrized gates reference one entry of the parameter vector through
    ``param_slot``; several gates may share a slot (cost layers of QAOA-style
    circuits), in which case gradients sum over all occurrences.  The applied
    rotation angle is ``angle_scale * theta[param_slot]``.
    """

    kind: str
    targets: tuple[int, ...]
    param_slot: int | None = None
    fixed_angle: float | None = None
    angle_scale: float = 1.0

    def __post_init__(self):
        if self.kind not in _GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        n_targets, parametrized, _ = _GATE_KINDS[self.kind]
        if len(self.targets) != n_targets:
            raise ValueError(f"{self.kind} takes {n_targets} target(s), got {self.targets}")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"{self.kind} targets must be distinct, got {self.targets}")
        if parametrized:
            if self.param_slot is None:
                raise ValueError(f"{self.kind} requires a param_slot")
            if self.fixed_angle is not None:
                raise ValueError(f"{self.kind} cannot carry a fixed_angle")
        else:
            if self.param_slot is not None:
                raise ValueError(f"{self.kind} cannot carry a param_slot")
            if self.kind == "FIXED_RY":
                if self.fixed_angle is None or not math.isfinite(self.fixed_angle):
                    raise ValueError("FIXED_RY requires a finite fixed_angle")
            elif self.fixed_angle is not None:
                raise ValueError(f"{self.kind} cannot carry a fixed_angle")
        if not math.isfinite(self.angle_scale) or self.angle_scale == 0.0:
            raise ValueError("angle_scale must be finite and nonzero")

    @property
    def generator(self) -> str | None:
        """Single-qubit Pauli P with gate = exp(-i angle P / 2); None for fixed gates."""
        return _GATE_KINDS[self.kind][2]


@dataclass(frozen=True)
class CircuitIR:
    """Ordered gate list with parameter slots and per-slot layer tags."""

    n_qubits: int
    gates: tuple[GateOp, ...]
    n_params: int
    layer_of: tuple[int, ...]
    n_layers: int

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "layer_of", tuple(int(x) for x in self.layer_of))
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if self.n_layers < 1:
            raise ValueError("n_layers must be positive")
        used: set[int] = set()
        for gate in self.gates:
            if max(gate.targets) >= self.n_qubits:
                raise ValueError(f"gate {gate} targets qubit >= n_qubits={self.n_qubits}")
            if gate.param_slot is not None:
                if not 0 <= gate.param_slot < self.n_params:
                    raise ValueError(f"param_slot {gate.param_slot} out of range")
                used.add(gate.param_slot)
        if used != set(range(self.n_params)):
            missing = sorted(set(range(self.n_params)) - used)
            raise ValueError(f"param slots {missing} are not used by any gate")
        if len(self.layer_of) != self.n_params:
            raise ValueError("layer_of must assign a layer to every param slot")
        if self.n_params:
            if set(self.layer_of) != set(range(self.n_layers)):
                raise ValueError("layer indices must be contiguous from 0 to n_layers-1")

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    @cached_property
    def _compiled(self):
        """Gate table as flat arrays for the compiled kernels."""
        n_gates = len(self.gates)
        codes = np.empty(n_gates, dtype=np.int64)
        q1 = np.zeros(n_gates, dtype=np.int64)
        q2 = np.zeros(n_gates, dtype=np.int64)
        slots = np.full(n_gates, -1, dtype=np.int64)
        scales = np.zeros(n_gates)
        fixed = np.zeros(n_gates)
        axes = np.zeros(n_gates, dtype=np.int64)
        for g, gate in enumerate(self.gates):
            codes[g] = _GATE_CODES[gate.kind]
            q1[g] = gate.targets[0]
            if len(gate.targets) == 2:
                q2[g] = gate.targets[1]
            if gate.param_slot is not None:
                slots[g] = gate.param_slot
                scales[g] = gate.angle_scale
                axes[g] = _AXIS_CODES[gate.generator]
            elif gate.fixed_angle is not None:
                fixed[g] = gate.fixed_angle
        return codes, q1, q2, slots, scales, fixed, axes

    def _angles(self, params: np.ndarray) -> np.ndarray:
        codes, q1, q2, slots, scales, fixed, axes = self._compiled
        angles = fixed.copy()
        held = slots >= 0
        angles[held] = scales[held] * params[slots[held]]
        return angles


# ---------------------------------------------------------------------------
# gate kernels
#
# All kernels mutate `arr` in place and act on the last axis, so the same code
# serves single states (dim,) and batches of derivative states (m, dim).
# ---------------------------------------------------------------------------


def _apply_1q_matrix(arr: np.ndarray, n: int, q: int, u00, u01, u10, u11) -> None:
    block = 1 << (n - 1 - q)
    v = arr.reshape(-1, 2, block)
    a, b = v[:, 0, :], v[:, 1, :]
    na = u00 * a + u01 * b
    nb = u10 * a + u11 * b
    v[:, 0, :] = na
    v[:, 1, :] = nb


def _apply_rz(arr: np.ndarray, n: int, q: int, angle: float) -> None:
    block = 1 << (n - 1 - q)
    v = arr.reshape(-1, 2, block)
    half = 0.5 * angle
    v[:, 0, :] *= complex(math.cos(half), -math.sin(half))
    v[:, 1, :] *= complex(math.cos(half), math.sin(half))


def _apply_pauli_1q(arr: np.ndarray, n: int, q: int, axis: str) -> None:
    block = 1 << (n - 1 - q)
    v = arr.reshape(-1, 2, block)
    if axis == "Z":
        v[:, 1, :] *= -1.0
    elif axis == "X":
        tmp = v[:, 0, :].copy()
        v[:, 0, :] = v[:, 1, :]
        v[:, 1, :] = tmp
    elif axis == "Y":
        tmp = v[:, 0, :].copy()
        v[:, 0, :] = -1j * v[:, 1, :]
        v[:, 1, :] = 1j * tmp
    else:  # pragma: no cover - internal misuse
        raise ValueError(f"unknown Pauli axis {axis!r}")


def _2q_view(arr: np.ndarray, n: int, q1: int, q2: int):
    lo, hi = (q1, q2) if q1 < q2 else (q2, q1)
    post = 1 << (n - 1 - hi)
    mid = 1 << (hi - lo - 1)
    return arr.reshape(-1, 2, mid, 2, post), lo


def _apply_cz(arr: np.ndarray, n: int, q1: int, q2: int) -> None:
    v, _ = _2q_view(arr, n, q1, q2)
    v[:, 1, :, 1, :] *= -1.0


def _apply_cnot(arr: np.ndarray, n: int, control: int, target: int) -> None:
    v, lo = _2q_view(arr, n, control, target)
    if control == lo:
        src = (slice(None), 1, slice(None), 0, slice(None))
        dst = (slice(None), 1, slice(None), 1, slice(None))
    else:
        src = (slice(None), 0, slice(None), 1, slice(None))
        dst = (slice(None), 1, slice(None), 1, slice(None))
    tmp = v[src].copy()
    v[src] = v[dst]
    v[dst] = tmp


_SQRT_HALF = 1.0 / math.sqrt(2.0)


def _gate_angle(gate: GateOp, params: np.ndarray) -> float:
    if gate.param_slot is not None:
        return gate.angle_scale * float(params[gate.param_slot])
    return float(gate.fixed_angle)


def _apply_gate(arr: np.ndarray, n: int, gate: GateOp, params: np.ndarray) -> None:
    kind = gate.kind
    if kind in ("RY", "FIXED_RY"):
        half = 0.5 * _gate_angle(gate, params)
        c, s = math.cos(half), math.sin(half)
        _apply_1q_matrix(arr, n, gate.targets[0], c, -s, s, c)
    elif kind == "RX":
        half = 0.5 * _gate_angle(gate, params)
        c, s = math.cos(half), math.sin(half)
        _apply_1q_matrix(arr, n, gate.targets[0], c, -1j * s, -1j * s, c)
    elif kind == "RZ":
        _apply_rz(arr, n, gate.targets[0], _gate_angle(gate, params))
    elif kind == "H":
        _apply_1q_matrix(arr, n, gate.targets[0], _SQRT_HALF, _SQRT_HALF, _SQRT_HALF, -_SQRT_HALF)
    elif kind == "CZ":
        _apply_cz(arr, n, gate.targets[0], gate.targets[1])
    elif kind == "CNOT":
        _apply_cnot(arr, n, gate.targets[0], gate.targets[1])
    else:  # pragma: no cover - guarded in GateOp
        raise ValueError(f"unknown gate kind {kind!r}")


def _check_params(circuit: CircuitIR, params) -> np.ndarray:
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (circuit.n_params,):
        raise ValueError(
            f"parameter vector has shape {params.shape}, expected ({circuit.n_params},)"
        )
    if circuit.n_params and not np.isfinite(params).all():
        raise ValueError("parameters must be finite")
    return params


def _zero_state(circuit: CircuitIR) -> np.ndarray:
    arr = np.zeros(circuit.dim, dtype=np.complex128)
    arr[0] = 1.0
    return arr


def run_circuit(circuit: CircuitIR, params) -> Statevector:
    """Apply the circuit to |0...0> and return the resulting state.

    Raises ``ValueError`` on a parameter-length mismatch or non-finite angles,
    and if the output norm drifts from 1 beyond 1e-10 (unitarity check).
    """
    params = _check_params(circuit, params)
    arr = _zero_state(circuit)
    if _fastpath is not None:
        codes, q1, q2, *_ = circuit._compiled
        _fastpath.apply_circuit(arr.reshape(1, -1), circuit.n_qubits, codes, q1, q2, circuit._angles(params))
    else:
        for gate in circuit.gates:
            _apply_gate(arr, circuit.n_qubits, gate, params)
    norm = np.linalg.norm(arr)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"state norm {norm} deviates from 1 beyond {NORM_TOL}")
    return Statevector(arr, circuit.n_qubits)


def derivative_state(circuit: CircuitIR, params, i: int) -> np.ndarray:
    """Return d|psi(theta)>/d(theta_i) as an unnormalized complex vector.

    Computed by inserting the generator factor ``-i * angle_scale * P / 2``
    after every gate referencing slot ``i`` (product rule for shared slots).
    For a slot used once with unit scale, the squared norm is exactly 1/4.
    """
    params = _check_params(circuit, params)
    if not 0 <= i < circuit.n_params:
        raise IndexError(f"parameter index {i} out of range for {circuit.n_params} slots")
    n = circuit.n_qubits
    psi = _zero_state(circuit)
    deriv = np.zeros_like(psi)
    active = False
    for gate in circuit.gates:
        _apply_gate(psi, n, gate, params)
        if active:
            _apply_gate(deriv, n, gate, params)
        if gate.param_slot == i:
            contrib = psi.copy()
            _apply_pauli_1q(contrib, n, gate.targets[0], gate.generator)
            deriv += (-0.5j * gate.angle_scale) * contrib
            active = True
    return deriv


def derivative_states(circuit: CircuitIR, params) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(psi, D)`` with ``D[i] = d psi / d theta_i`` for every slot.

    One forward sweep: the running state and the accumulated derivative rows
    are advanced through each gate together, and the generator insertion for a
    gate's slot is added as it is passed.
    """
    params = _check_params(circuit, params)
    n = circuit.n_qubits
    psi = _zero_state(circuit)
    deriv = np.zeros((circuit.n_params, circuit.dim), dtype=np.complex128)
    if _fastpath is not None:
        codes, q1, q2, slots, scales, fixed, axes = circuit._compiled
        _fastpath.forward_sweep(
            psi, deriv, n, codes, q1, q2, circuit._angles(params), slots, scales, axes
        )
        return psi, deriv
    for gate in circuit.gates:
        _apply_gate(psi, n, gate, params)
        if circuit.n_params:
            _apply_gate(deriv, n, gate, params)
        if gate.param_slot is not None:
            contrib = psi.copy()
            _apply_pauli_1q(contrib, n, gate.targets[0], gate.generator)
            deriv[gate.param_slot] += (-0.5j * gate.angle_scale) * contrib
    return psi, deriv


def expectation_gradient(circuit: CircuitIR, params, psi: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Gradient of Re<lam'|psi'> through the circuit by reverse propagation.

    ``psi`` must be the circuit output and ``lam`` the observable applied to
    it (lam = O psi); for Hermitian O this yields d<psi|O|psi>/d(theta_i) =
    2 Re <d_i psi|O|psi>.  Inputs are not modified.  Cost is a constant
    multiple of one circuit execution, independent of the parameter count.
    """
    params = _check_params(circuit, params)
    n = circuit.n_qubits
    grad = np.zeros(circuit.n_params)
    psi = psi.copy()
    lam = lam.copy()
    if _fastpath is not None:
        codes, q1, q2, slots, scales, fixed, axes = circuit._compiled
        _fastpath.backward_gradient(
            psi, lam, n, codes, q1, q2, circuit._angles(params), slots, scales, axes, grad
        )
        return grad
    for gate in reversed(circuit.gates):
        if gate.param_slot is not None:
            contrib = psi.copy()
            _apply_pauli_1q(contrib, n, gate.targets[0], gate.generator)
            acc = complex(np.vdot(lam, contrib))
            grad[gate.param_slot] += gate.angle_scale * acc.imag
        inverse = gate
        if gate.kind in ("RX", "RY", "RZ"):
            inverse = GateOp(gate.kind, gate.targets, gate.param_slot, None, -gate.angle_scale)
        elif gate.kind == "FIXED_RY":
            inverse = GateOp(gate.kind, gate.targets, None, -gate.fixed_angle)
        _apply_gate(psi, n, inverse, params)
        _apply_gate(lam, n, inverse, params)
    return grad
