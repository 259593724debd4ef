"""Pauli-string observables: parsing, matrix-free application, expectations, bounds.

Operators are weighted sums of Pauli strings over {I, X, Y, Z}, one letter per
qubit with qubit 0 leftmost.  A string acts on a statevector as a signed,
phased bit-flip permutation, so application never materializes a 2^n x 2^n
matrix.  Strings sharing the same flip mask are fused into a single weighted
phase vector when a sum is applied repeatedly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from .simulator import Statevector

__all__ = [
    "PauliTerm",
    "PauliSum",
    "PauliFormatError",
    "HermiticityError",
    "parse_pauli_sum",
    "apply_pauli_term",
    "apply_pauli_sum",
    "expectation",
    "exact_bounds",
]

PAULI_CHARS = frozenset("IXYZ")
IMAG_TOL = 1e-10
MAX_DENSE_QUBITS = 14


class PauliFormatError(ValueError):
    """Malformed Pauli-sum text (bad coefficient, length, or character)."""


class HermiticityError(ValueError):
    """Expectation value carries an imaginary residue above tolerance."""


@dataclass(frozen=True)
class PauliTerm:
    """One weighted Pauli string, e.g. ``0.5 * ZZI``."""

    coefficient: float
    ops: str

    def __post_init__(self):
        object.__setattr__(self, "coefficient", float(self.coefficient))
        object.__setattr__(self, "ops", str(self.ops))
        if not math.isfinite(self.coefficient):
            raise ValueError("coefficient must be finite")
        if not self.ops:
            raise ValueError("ops string must be non-empty")
        bad = set(self.ops) - PAULI_CHARS
        if bad:
            raise ValueError(f"invalid Pauli characters {sorted(bad)} in {self.ops!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.ops)

    @property
    def is_diagonal(self) -> bool:
        return all(c in "IZ" for c in self.ops)

    @cached_property
    def _masks(self) -> tuple[int, int, int]:
        """(flip_mask, phase_mask, n_y): X/Y flip bits, Y/Z sign bits, Y count."""
        n = self.n_qubits
        flip = phase = n_y = 0
        for q, c in enumerate(self.ops):
            bit = 1 << (n - 1 - q)
            if c == "X":
                flip |= bit
            elif c == "Y":
                flip |= bit
                phase |= bit
                n_y += 1
            elif c == "Z":
                phase |= bit
        return flip, phase, n_y


def _sign_vector(n: int, mask: int) -> np.ndarray:
    """(-1)**popcount(index & mask) for every basis index."""
    sign = np.ones(1 << n, dtype=np.float64)
    idx = np.arange(1 << n, dtype=np.int64)
    bit = 1
    while bit <= mask:
        if mask & bit:
            sign[(idx & bit) != 0] *= -1.0
        bit <<= 1
    return sign


@dataclass(frozen=True)
class PauliSum:
    """Sum of Pauli terms over a fixed qubit count; duplicates merge on construction."""

    terms: tuple[PauliTerm, ...]
    n_qubits: int

    def __post_init__(self):
        merged: dict[str, float] = {}
        for term in self.terms:
            if not isinstance(term, PauliTerm):
                term = PauliTerm(*term)
            if term.n_qubits != self.n_qubits:
                raise ValueError(
                    f"term {term.ops!r} has {term.n_qubits} qubits, expected {self.n_qubits}"
                )
            merged[term.ops] = merged.get(term.ops, 0.0) + term.coefficient
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        object.__setattr__(
            self, "terms", tuple(PauliTerm(c, ops) for ops, c in merged.items())
        )

    @property
    def is_diagonal(self) -> bool:
        return all(t.is_diagonal for t in self.terms)

    @cached_property
    def _flip_groups(self) -> list[tuple[int, np.ndarray]]:
        """Terms fused by flip mask: list of (flip, weighted phase vector over source index)."""
        groups: dict[int, np.ndarray] = {}
        for term in self.terms:
            flip, phase_mask, n_y = term._masks
            weight = term.coefficient * (1j**n_y) * _sign_vector(self.n_qubits, phase_mask)
            if flip in groups:
                groups[flip] = groups[flip] + weight
            else:
                groups[flip] = weight.astype(np.complex128)
        return sorted(groups.items())

    @cached_property
    def _source_indices(self) -> dict[int, np.ndarray]:
        idx = np.arange(1 << self.n_qubits, dtype=np.intp)
        return {flip: idx ^ flip for flip, _ in self._flip_groups if flip}


def parse_pauli_sum(text: str, n_qubits: int) -> PauliSum:
    """Parse ``<coefficient> <pauli string>`` lines into a merged PauliSum.

    ``#`` starts a comment, blank lines are allowed, and parsing is
    locale-independent (decimal point only).  Errors name the offending line.
    """
    terms: list[PauliTerm] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise PauliFormatError(
                f"line {lineno}: expected '<coefficient> <pauli string>', got {raw!r}"
            )
        try:
            coeff = float(parts[0])
        except ValueError:
            raise PauliFormatError(f"line {lineno}: malformed coefficient {parts[0]!r}") from None
        if not math.isfinite(coeff):
            raise PauliFormatError(f"line {lineno}: coefficient {parts[0]!r} is not finite")
        ops = parts[1].upper()
        if len(ops) != n_qubits:
            raise PauliFormatError(
                f"line {lineno}: Pauli string length {len(ops)} != n_qubits {n_qubits}"
            )
        if set(ops) - PAULI_CHARS:
            raise PauliFormatError(f"line {lineno}: invalid Pauli string {parts[1]!r}")
        terms.append(PauliTerm(coeff, ops))
    return PauliSum(tuple(terms), n_qubits)


def _check_dims(state: Statevector, n_qubits: int) -> None:
    if state.n_qubits != n_qubits:
        raise ValueError(f"state has {state.n_qubits} qubits, operator has {n_qubits}")


def _apply_term_array(arr: np.ndarray, term: PauliTerm) -> np.ndarray:
    flip, phase_mask, n_y = term._masks
    n = term.n_qubits
    weight = term.coefficient * (1j**n_y) * _sign_vector(n, phase_mask)
    out = weight * arr
    if flip:
        out = out[np.arange(1 << n, dtype=np.intp) ^ flip]
    return out


def _apply_sum_array(arr: np.ndarray, obs: PauliSum) -> np.ndarray:
    out = np.zeros_like(arr)
    for flip, weight in obs._flip_groups:
        scaled = weight * arr
        if flip:
            out += scaled[obs._source_indices[flip]]
        else:
            out += scaled
    return out


def apply_pauli_term(state: Statevector, term: PauliTerm) -> Statevector:
    """Return ``coefficient * (P |psi>)`` without modifying the input state."""
    _check_dims(state, term.n_qubits)
    return Statevector(_apply_term_array(state.amplitudes, term), state.n_qubits)


def apply_pauli_sum(state: Statevector, obs: PauliSum) -> Statevector:
    """Return ``O |psi>`` for a Pauli-sum operator; input state unmodified."""
    _check_dims(state, obs.n_qubits)
    return Statevector(_apply_sum_array(state.amplitudes, obs), state.n_qubits)


def expectation(state: Statevector, obs: PauliSum) -> float:
    """Return Re <psi|O|psi>; rejects imaginary residue above 1e-10.

    A residue beyond tolerance signals a corrupted state or a non-Hermitian
    operator, so it raises rather than silently truncating.
    """
    _check_dims(state, obs.n_qubits)
    value = complex(np.vdot(state.amplitudes, _apply_sum_array(state.amplitudes, obs)))
    if abs(value.imag) > IMAG_TOL:
        raise HermiticityError(f"imaginary residue {value.imag} exceeds {IMAG_TOL}")
    return value.real


def _dense_matrix(obs: PauliSum) -> np.ndarray:
    dim = 1 << obs.n_qubits
    mat = np.zeros((dim, dim), dtype=np.complex128)
    src = np.arange(dim, dtype=np.intp)
    for flip, weight in obs._flip_groups:
        mat[src ^ flip, src] += weight
    return mat


def exact_bounds(obs: PauliSum) -> tuple[float, float]:
    """Exact extremal eigenvalues (E_min, E_max) of the operator.

    Diagonal operators (all letters in {I, Z}) are enumerated over the 2^n
    basis energies; anything else goes through a dense Hermitian eigensolve,
    budgeted at n <= 14 qubits.
    """
    if obs.n_qubits > MAX_DENSE_QUBITS:
        raise ValueError(
            f"exact bounds need n_qubits <= {MAX_DENSE_QUBITS}, got {obs.n_qubits}"
        )
    if obs.is_diagonal:
        groups = obs._flip_groups
        if not groups:
            return (0.0, 0.0)
        energies = groups[0][1].real
        return (float(energies.min()), float(energies.max()))
    mat = _dense_matrix(obs)
    if np.abs(mat.imag).max() < 1e-14:
        eigenvalues = np.linalg.eigvalsh(mat.real)
    else:
        eigenvalues = np.linalg.eigvalsh(mat)
    return (float(eigenvalues[0]), float(eigenvalues[-1]))
