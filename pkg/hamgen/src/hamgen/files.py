"""Pauli-sum text emission and parsing, plus matrix-free spectral helpers.

The file format is the interchange contract with the consuming simulator:
one `<coefficient> <pauli string>` per line, `#` comments, qubit 0 leftmost.
Metadata rides along as `# key=value` comments.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np
import scipy.sparse.linalg

DROP_THRESHOLD = 1e-12
_HEADER_RE = re.compile(r"^#\s*([A-Za-z_]+)\s*=\s*(\S+)\s*$")


def write_operator(path, terms: dict[str, float], headers: dict[str, str], title: str) -> None:
    dropped = sum(1 for c in terms.values() if abs(c) <= DROP_THRESHOLD)
    lines = [f"# {title}"]
    for key, value in headers.items():
        lines.append(f"# {key}={value}")
    if dropped:
        lines.append(f"# dropped_terms={dropped} with |coefficient| <= {DROP_THRESHOLD}")
    identity = None
    body = []
    for string in sorted(terms):
        coeff = terms[string]
        if abs(coeff) <= DROP_THRESHOLD:
            continue
        line = f"{coeff!r} {string}"
        if set(string) == {"I"}:
            identity = line
        else:
            body.append(line)
    if identity is not None:
        body.insert(0, identity)
    Path(path).write_text("\n".join(lines + body) + "\n")


def read_operator(path) -> tuple[dict[str, float], dict[str, str], int]:
    """Returns (terms, headers, n_qubits)."""
    terms: dict[str, float] = {}
    headers: dict[str, str] = {}
    n_qubits = None
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = raw.strip()
        match = _HEADER_RE.match(stripped)
        if match:
            headers[match.group(1)] = match.group(2)
            continue
        line = stripped.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected '<coefficient> <string>'")
        coeff = float(parts[0])
        string = parts[1]
        if set(string) - set("IXYZ"):
            raise ValueError(f"{path}:{lineno}: bad Pauli string {string!r}")
        if n_qubits is None:
            n_qubits = len(string)
        elif len(string) != n_qubits:
            raise ValueError(f"{path}:{lineno}: inconsistent string length")
        terms[string] = terms.get(string, 0.0) + coeff
    if n_qubits is None:
        raise ValueError(f"{path}: no terms found")
    return terms, headers, n_qubits


def _compile_terms(terms: dict[str, float], n_qubits: int):
    """Group strings by flip mask into (flip, weight-vector) pairs."""
    dim = 1 << n_qubits
    idx = np.arange(dim, dtype=np.int64)
    groups: dict[int, np.ndarray] = {}
    for string, coeff in terms.items():
        flip = 0
        phase_mask = 0
        n_y = 0
        for q, letter in enumerate(string):
            bit = 1 << (n_qubits - 1 - q)
            if letter == "X":
                flip |= bit
            elif letter == "Y":
                flip |= bit
                phase_mask |= bit
                n_y += 1
            elif letter == "Z":
                phase_mask |= bit
        sign = np.ones(dim)
        bit = 1
        while bit <= phase_mask:
            if phase_mask & bit:
                sign[(idx & bit) != 0] *= -1.0
            bit <<= 1
        weight = coeff * (1j**n_y) * sign
        groups[flip] = groups.get(flip, 0) + weight
    return [(flip, w, idx ^ flip) for flip, w in sorted(groups.items())]


def matvec_factory(terms: dict[str, float], n_qubits: int):
    compiled = _compile_terms(terms, n_qubits)

    def matvec(vec: np.ndarray) -> np.ndarray:
        out = np.zeros(1 << n_qubits, dtype=complex)
        for flip, weight, src in compiled:
            scaled = weight * vec
            out += scaled[src] if flip else scaled
        return out

    return matvec


def ground_energy(terms: dict[str, float], n_qubits: int) -> float:
    """Lowest eigenvalue, via Lanczos above 8 qubits and densely below."""
    dim = 1 << n_qubits
    matvec = matvec_factory(terms, n_qubits)
    if n_qubits <= 8:
        dense = np.zeros((dim, dim), dtype=complex)
        basis = np.zeros(dim, dtype=complex)
        for j in range(dim):
            basis[:] = 0.0
            basis[j] = 1.0
            dense[:, j] = matvec(basis)
        return float(np.linalg.eigvalsh(dense)[0])
    operator = scipy.sparse.linalg.LinearOperator((dim, dim), matvec=matvec, dtype=complex)
    values = scipy.sparse.linalg.eigsh(operator, k=1, which="SA", return_eigenvectors=False, tol=1e-10)
    return float(values[0])


def basis_expectation(terms: dict[str, float], n_qubits: int, bitstring: str) -> float:
    vec = np.zeros(1 << n_qubits, dtype=complex)
    vec[int(bitstring, 2)] = 1.0
    value = np.vdot(vec, matvec_factory(terms, n_qubits)(vec))
    return float(value.real)
