"""Benchmark builders: flat-landscape circuits, max-cut instances, chemistry ansatz.

Three families:

* a flat-landscape ("barren plateau") circuit of randomly oriented Pauli
  rotations behind a fixed Ry(pi/4) wall, measured with Z on qubits 0 and 1,
* max-cut instances in minimization form driven by an alternating
  cost/mixer ansatz over a Hadamard wall,
* hardware-efficient Ry + CNOT-ring circuits for molecular operators loaded
  from Pauli-sum text files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import itertools
import math
import re
from pathlib import Path

import numpy as np

from .pauli import PauliSum, PauliTerm, exact_bounds as pauli_exact_bounds, parse_pauli_sum
from .simulator import CircuitIR, GateOp

__all__ = [
    "Graph",
    "ProblemInstance",
    "build_barren_plateau",
    "maxcut_hamiltonian",
    "build_qaoa",
    "build_hardware_efficient",
    "number_operator",
    "sz_operator",
    "load_problem",
    "initial_params",
    "read_graph",
    "write_graph",
    "random_graph",
    "HF_PERTURBATION_SIGMA",
]

INIT_MODES = ("random_uniform", "hartree_fock_perturbed", "fixed")
HF_PERTURBATION_SIGMA = 0.01
MAX_ENUM_QUBITS = 14


def _rng(seed: int) -> np.random.Generator:
    # Philox: 64-bit counter-based generator, part of the reproducibility contract.
    return np.random.Generator(np.random.Philox(key=int(seed)))


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n_vertices-1."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        normalized = []
        seen = set()
        for i, j in self.edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n_vertices and 0 <= j < self.n_vertices):
                raise ValueError(f"edge ({i},{j}) outside vertex range")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            normalized.append(key)
        object.__setattr__(self, "edges", tuple(normalized))


@dataclass(frozen=True)
class ProblemInstance:
    """Circuit, cost operator, audit observables, and initialization metadata."""

    circuit: CircuitIR
    hamiltonian: PauliSum
    observables: dict[str, PauliSum] = field(default_factory=dict)
    exact_bounds: tuple[float, float] | None = None
    init_mode: str = "random_uniform"
    n_electrons: int | None = None
    occupation: str | None = None

    def __post_init__(self):
        if self.hamiltonian.n_qubits != self.circuit.n_qubits:
            raise ValueError("hamiltonian and circuit disagree on qubit count")
        for name, obs in self.observables.items():
            if obs.n_qubits != self.circuit.n_qubits:
                raise ValueError(f"observable {name!r} disagrees on qubit count")
        if self.init_mode not in INIT_MODES:
            raise ValueError(f"init_mode must be one of {INIT_MODES}")
        if self.occupation is not None and len(self.occupation) != self.circuit.n_qubits:
            raise ValueError("occupation bitmask length must equal the qubit count")


def build_barren_plateau(n_qubits: int, n_layers: int, axis_seed: int) -> ProblemInstance:
    """Fixed Ry(pi/4) wall, then per layer one random-axis rotation per qubit
    and a nearest-neighbor CZ chain; cost operator Z on qubits 0 and 1."""
    if n_qubits < 2:
        raise ValueError("barren plateau circuit needs at least 2 qubits")
    if n_layers < 1:
        raise ValueError("n_layers must be positive")
    axes = _rng(axis_seed).integers(0, 3, size=(n_layers, n_qubits))
    kinds = ("RX", "RY", "RZ")
    gates = [GateOp("FIXED_RY", (q,), fixed_angle=math.pi / 4) for q in range(n_qubits)]
    layer_of = []
    for layer in range(n_layers):
        for q in range(n_qubits):
            slot = layer * n_qubits + q
            gates.append(GateOp(kinds[axes[layer, q]], (q,), param_slot=slot))
            layer_of.append(layer)
        gates.extend(GateOp("CZ", (q, q + 1)) for q in range(n_qubits - 1))
    circuit = CircuitIR(n_qubits, tuple(gates), n_qubits * n_layers, tuple(layer_of), n_layers)
    ops = "ZZ" + "I" * (n_qubits - 2)
    hamiltonian = PauliSum((PauliTerm(1.0, ops),), n_qubits)
    return ProblemInstance(circuit, hamiltonian, {}, (-1.0, 1.0), "random_uniform")


def maxcut_hamiltonian(graph: Graph) -> PauliSum:
    """Minimization form of the cut cost: -|E|/2 * I + 1/2 * sum_e Z_i Z_j.

    The ground energy is minus the maximum cut value.
    """
    if not graph.edges:
        raise ValueError("max-cut needs a non-empty edge set")
    n = graph.n_vertices
    terms = [PauliTerm(-0.5 * len(graph.edges), "I" * n)]
    for i, j in graph.edges:
        ops = "".join("Z" if q in (i, j) else "I" for q in range(n))
        terms.append(PauliTerm(0.5, ops))
    return PauliSum(tuple(terms), n)


def build_qaoa(graph: Graph, n_layers: int) -> ProblemInstance:
    """Hadamard wall, then per layer a cost block (CNOT - RZ(2 gamma) - CNOT per
    edge, one shared slot) and a mixer block (RX(2 beta) per qubit, one shared
    slot); 2 parameters per layer."""
    n = graph.n_vertices
    if n > MAX_ENUM_QUBITS:
        raise ValueError(f"instance size exceeds the {MAX_ENUM_QUBITS}-qubit enumeration budget")
    if n_layers < 1:
        raise ValueError("n_layers must be positive")
    hamiltonian = maxcut_hamiltonian(graph)
    gates = [GateOp("H", (q,)) for q in range(n)]
    layer_of = []
    for layer in range(n_layers):
        gamma_slot = 2 * layer
        beta_slot = 2 * layer + 1
        layer_of.extend([layer, layer])
        for i, j in graph.edges:
            gates.append(GateOp("CNOT", (i, j)))
            gates.append(GateOp("RZ", (j,), param_slot=gamma_slot, angle_scale=2.0))
            gates.append(GateOp("CNOT", (i, j)))
        gates.extend(
            GateOp("RX", (q,), param_slot=beta_slot, angle_scale=2.0) for q in range(n)
        )
    circuit = CircuitIR(n, tuple(gates), 2 * n_layers, tuple(layer_of), n_layers)
    bounds = pauli_exact_bounds(hamiltonian)
    return ProblemInstance(circuit, hamiltonian, {}, bounds, "random_uniform")


def build_hardware_efficient(n_qubits: int, n_layers: int) -> CircuitIR:
    """Per layer, a tunable Ry on each qubit followed by a closed CNOT ring."""
    if n_qubits < 2:
        raise ValueError("hardware-efficient ansatz needs at least 2 qubits")
    if n_layers < 1:
        raise ValueError("n_layers must be positive")
    gates = []
    layer_of = []
    for layer in range(n_layers):
        for q in range(n_qubits):
            gates.append(GateOp("RY", (q,), param_slot=layer * n_qubits + q))
            layer_of.append(layer)
        gates.extend(GateOp("CNOT", (q, (q + 1) % n_qubits)) for q in range(n_qubits))
    return CircuitIR(n_qubits, tuple(gates), n_qubits * n_layers, tuple(layer_of), n_layers)


def number_operator(n_qubits: int) -> PauliSum:
    """Occupation count N = sum_q (I - Z_q) / 2."""
    terms = [PauliTerm(0.5 * n_qubits, "I" * n_qubits)]
    for q in range(n_qubits):
        ops = "".join("Z" if p == q else "I" for p in range(n_qubits))
        terms.append(PauliTerm(-0.5, ops))
    return PauliSum(tuple(terms), n_qubits)


def sz_operator(n_qubits: int) -> PauliSum:
    """Total spin projection under the interleaved ordering (even = alpha, odd = beta).

    The identity contributions of the two spin channels cancel, leaving
    -Z_q/4 on even qubits and +Z_q/4 on odd qubits.
    """
    if n_qubits % 2:
        raise ValueError("sz operator needs an even qubit count (alpha/beta interleaving)")
    terms = []
    for q in range(n_qubits):
        ops = "".join("Z" if p == q else "I" for p in range(n_qubits))
        terms.append(PauliTerm(0.25 if q % 2 else -0.25, ops))
    return PauliSum(tuple(terms), n_qubits)


_HEADER_RE = re.compile(r"^#\s*(n_electrons|occupation)\s*=\s*(\S+)\s*$")


def _read_operator_file(path) -> tuple[str, dict[str, str]]:
    text = Path(path).read_text()
    headers = {}
    for line in text.splitlines():
        match = _HEADER_RE.match(line.strip())
        if match:
            headers[match.group(1)] = match.group(2)
    return text, headers


def _infer_n_qubits(text: str, path) -> int:
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            parts = line.split()
            if len(parts) == 2:
                return len(parts[1])
    raise ValueError(f"{path}: no operator terms found")


def load_problem(hamiltonian_path, observables_paths=None, circuit_spec: CircuitIR | None = None):
    """Assemble a ProblemInstance from Pauli-sum text files and an ansatz circuit.

    Exact spectral bounds are computed when the system fits the dense budget
    (n <= 14).  Header comments ``# n_electrons=K`` and ``# occupation=<bits>``
    enable the perturbed Hartree-Fock initialization.
    """
    if circuit_spec is None:
        raise ValueError("load_problem requires an ansatz circuit")
    text, headers = _read_operator_file(hamiltonian_path)
    n = _infer_n_qubits(text, hamiltonian_path)
    if n != circuit_spec.n_qubits:
        raise ValueError(
            f"{hamiltonian_path}: operator acts on {n} qubits, circuit has {circuit_spec.n_qubits}"
        )
    try:
        hamiltonian = parse_pauli_sum(text, n)
    except ValueError as exc:
        raise ValueError(f"{hamiltonian_path}: {exc}") from exc
    observables = {}
    for name, obs_path in (observables_paths or {}).items():
        obs_text, _ = _read_operator_file(obs_path)
        try:
            observables[name] = parse_pauli_sum(obs_text, n)
        except ValueError as exc:
            raise ValueError(f"{obs_path}: {exc}") from exc
    bounds = pauli_exact_bounds(hamiltonian) if n <= MAX_ENUM_QUBITS else None
    n_electrons = int(headers["n_electrons"]) if "n_electrons" in headers else None
    occupation = headers.get("occupation")
    if occupation is not None and (
        len(occupation) != n or set(occupation) - {"0", "1"}
    ):
        raise ValueError(f"{hamiltonian_path}: malformed occupation bitmask {occupation!r}")
    init_mode = "hartree_fock_perturbed" if occupation is not None else "random_uniform"
    return ProblemInstance(
        circuit_spec, hamiltonian, observables, bounds, init_mode, n_electrons, occupation
    )


def _first_layer_ry_slots(circuit: CircuitIR) -> dict[int, int]:
    slots: dict[int, int] = {}
    for gate in circuit.gates:
        if gate.kind == "RY" and gate.param_slot is not None:
            if circuit.layer_of[gate.param_slot] == 0 and gate.targets[0] not in slots:
                slots[gate.targets[0]] = gate.param_slot
    return slots


def initial_params(
    instance: ProblemInstance,
    mode: str,
    seed: int,
    sigma: float = HF_PERTURBATION_SIGMA,
    fixed=None,
) -> np.ndarray:
    """Draw the starting parameter vector for one trajectory.

    random_uniform: i.i.d. uniform on [0, 2*pi).  hartree_fock_perturbed:
    first-layer Ry angles pi on occupied qubits and 0 elsewhere, zero in all
    later layers, plus Gaussian noise of width ``sigma``.  fixed: passthrough.
    """
    n_params = instance.circuit.n_params
    if mode == "random_uniform":
        return _rng(seed).uniform(0.0, 2.0 * math.pi, n_params)
    if mode == "hartree_fock_perturbed":
        if instance.occupation is None:
            raise ValueError("hartree_fock_perturbed needs occupation metadata")
        qubit_slots = _first_layer_ry_slots(instance.circuit)
        missing = [q for q in range(instance.circuit.n_qubits) if q not in qubit_slots]
        if missing:
            raise ValueError(
                f"circuit lacks first-layer Ry rotations on qubits {missing}; "
                "Hartree-Fock initialization needs one per qubit"
            )
        base = np.zeros(n_params)
        for q, bit in enumerate(instance.occupation):
            if bit == "1":
                base[qubit_slots[q]] = math.pi
        if sigma:
            base = base + _rng(seed).normal(0.0, sigma, n_params)
        return base
    if mode == "fixed":
        if fixed is None:
            raise ValueError("fixed initialization needs an explicit parameter vector")
        fixed = np.asarray(fixed, dtype=np.float64)
        if fixed.shape != (n_params,):
            raise ValueError(f"fixed vector has shape {fixed.shape}, expected ({n_params},)")
        return fixed.copy()
    raise ValueError(f"init mode must be one of {INIT_MODES}, got {mode!r}")


def read_graph(path) -> Graph:
    """Read the graph file format: first line n_vertices, then one `i j` per line."""
    lines = Path(path).read_text().splitlines()
    rows = [ln.split("#", 1)[0].strip() for ln in lines]
    rows = [ln for ln in rows if ln]
    if not rows:
        raise ValueError(f"{path}: empty graph file")
    try:
        n_vertices = int(rows[0])
        edges = tuple(tuple(int(x) for x in row.split()) for row in rows[1:])
    except ValueError as exc:
        raise ValueError(f"{path}: malformed graph file: {exc}") from exc
    if any(len(e) != 2 for e in edges):
        raise ValueError(f"{path}: each edge line must hold two vertex indices")
    return Graph(n_vertices, edges)  # type: ignore[arg-type]


def write_graph(graph: Graph, path) -> None:
    lines = [str(graph.n_vertices)] + [f"{i} {j}" for i, j in graph.edges]
    Path(path).write_text("\n".join(lines) + "\n")


def random_graph(n_vertices: int, edge_prob: float, seed: int) -> Graph:
    """Seeded G(n, p) sample, redrawn until the edge set is non-empty."""
    if not 0.0 < edge_prob <= 1.0:
        raise ValueError("edge_prob must lie in (0, 1]")
    rng = _rng(seed)
    pairs = list(itertools.combinations(range(n_vertices), 2))
    while True:
        mask = rng.random(len(pairs)) < edge_prob
        edges = tuple(pair for pair, keep in zip(pairs, mask) if keep)
        if edges:
            return Graph(n_vertices, edges)
