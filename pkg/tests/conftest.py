"""Shared oracles: dense kron-based operators and matrix-product circuit simulation.

Everything here is an independent code path from the package kernels: states
and operators are built as explicit 2^n matrices/vectors, so agreement is a
real cross-check rather than a tautology.
"""

import math

import numpy as np
import pytest

from vqaopt.simulator import CircuitIR, GateOp

I2 = np.eye(2, dtype=complex)
PAULI = {
    "I": I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_all(mats):
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def pauli_string_matrix(ops: str) -> np.ndarray:
    return kron_all([PAULI[c] for c in ops])


def pauli_sum_matrix(obs) -> np.ndarray:
    dim = 1 << obs.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for term in obs.terms:
        out += term.coefficient * pauli_string_matrix(term.ops)
    return out


def _rotation(axis: str, angle: float) -> np.ndarray:
    return math.cos(angle / 2) * I2 - 1j * math.sin(angle / 2) * PAULI[axis]


def gate_matrix(gate: GateOp, params, n: int) -> np.ndarray:
    """Dense 2^n x 2^n unitary of one gate (qubit 0 = first kron factor)."""
    dim = 1 << n
    if gate.kind in ("RX", "RY", "RZ", "FIXED_RY", "H"):
        q = gate.targets[0]
        if gate.kind == "H":
            u = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
        else:
            axis = "Y" if gate.kind == "FIXED_RY" else gate.kind[-1]
            if gate.param_slot is not None:
                angle = gate.angle_scale * params[gate.param_slot]
            else:
                angle = gate.fixed_angle
            u = _rotation(axis, angle)
        return kron_all([u if k == q else I2 for k in range(n)])
    if gate.kind == "CZ":
        i, j = gate.targets
        diag = np.ones(dim, dtype=complex)
        for b in range(dim):
            if (b >> (n - 1 - i)) & 1 and (b >> (n - 1 - j)) & 1:
                diag[b] = -1.0
        return np.diag(diag)
    if gate.kind == "CNOT":
        c, t = gate.targets
        mat = np.zeros((dim, dim), dtype=complex)
        for b in range(dim):
            out = b ^ (1 << (n - 1 - t)) if (b >> (n - 1 - c)) & 1 else b
            mat[out, b] = 1.0
        return mat
    raise ValueError(gate.kind)


def circuit_matrix(circuit: CircuitIR, params) -> np.ndarray:
    u = np.eye(1 << circuit.n_qubits, dtype=complex)
    for gate in circuit.gates:
        u = gate_matrix(gate, params, circuit.n_qubits) @ u
    return u


def dense_run(circuit: CircuitIR, params) -> np.ndarray:
    e0 = np.zeros(1 << circuit.n_qubits, dtype=complex)
    e0[0] = 1.0
    return circuit_matrix(circuit, params) @ e0


def random_state(rng, n: int) -> np.ndarray:
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return amps / np.linalg.norm(amps)


def random_circuit(rng, max_qubits=4, shared_slots=False) -> CircuitIR:
    """Random layered circuit: per-layer rotations, then CZ/CNOT entanglers.

    With shared_slots, some layers append a two-qubit ZZ evolution block
    (CNOT, RZ with angle scale 2 on a shared slot, CNOT) exercising the
    product-rule derivative path.
    """
    n = int(rng.integers(2, max_qubits + 1))
    n_layers = int(rng.integers(1, 4))
    gates = []
    layer_of = []
    slot = 0
    if rng.random() < 0.3:
        gates.extend(GateOp("FIXED_RY", (q,), fixed_angle=math.pi / 4) for q in range(n))
    if rng.random() < 0.3:
        gates.extend(GateOp("H", (q,)) for q in range(n))
    kinds = ("RX", "RY", "RZ")
    for layer in range(n_layers):
        for q in range(n):
            gates.append(GateOp(kinds[rng.integers(0, 3)], (q,), param_slot=slot))
            layer_of.append(layer)
            slot += 1
        if shared_slots and rng.random() < 0.6:
            shared = slot
            slot += 1
            layer_of.append(layer)
            for _ in range(int(rng.integers(1, 3))):
                i, j = rng.choice(n, size=2, replace=False)
                i, j = int(i), int(j)
                gates.append(GateOp("CNOT", (i, j)))
                gates.append(GateOp("RZ", (j,), param_slot=shared, angle_scale=2.0))
                gates.append(GateOp("CNOT", (i, j)))
        for q in range(n - 1):
            if rng.random() < 0.7:
                kind = "CZ" if rng.random() < 0.5 else "CNOT"
                gates.append(GateOp(kind, (q, q + 1)))
    return CircuitIR(n, tuple(gates), slot, tuple(layer_of), n_layers)


def random_params(rng, circuit: CircuitIR) -> np.ndarray:
    return rng.uniform(0, 2 * math.pi, circuit.n_params)


def fd_gradient(circuit, hamiltonian, params, h=1e-5) -> np.ndarray:
    from vqaopt.gradients import cost

    params = np.asarray(params, dtype=float)
    grad = np.zeros_like(params)
    for i in range(len(params)):
        shift = np.zeros_like(params)
        shift[i] = h
        grad[i] = (
            cost(circuit, hamiltonian, params + shift, None)
            - cost(circuit, hamiltonian, params - shift, None)
        ) / (2 * h)
    return grad


def fd_derivative_states(circuit, params, h=1e-5) -> np.ndarray:
    from vqaopt.simulator import run_circuit

    params = np.asarray(params, dtype=float)
    rows = []
    for i in range(len(params)):
        shift = np.zeros_like(params)
        shift[i] = h
        plus = run_circuit(circuit, params + shift).amplitudes
        minus = run_circuit(circuit, params - shift).amplitudes
        rows.append((plus - minus) / (2 * h))
    return np.array(rows) if rows else np.zeros((0, 1 << circuit.n_qubits), dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
