"""Pauli-string algebra with products, and the Jordan-Wigner ladder operators.

Operators are dicts mapping a Pauli string (one letter per qubit, qubit 0
leftmost) to a complex coefficient.  Mode p maps to qubit p; occupied modes
read |1>.  Spin orbitals interleave as (0 alpha, 0 beta, 1 alpha, ...), so
even qubits carry alpha spin.
"""

from __future__ import annotations

import numpy as np

PauliOp = dict[str, complex]

_SINGLE_PRODUCTS = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("Y", "I"): (1, "Y"), ("Z", "I"): (1, "Z"),
    ("X", "X"): (1, "I"), ("Y", "Y"): (1, "I"), ("Z", "Z"): (1, "I"),
    ("X", "Y"): (1j, "Z"), ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"), ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"), ("X", "Z"): (-1j, "Y"),
}


def multiply_strings(left: str, right: str) -> tuple[complex, str]:
    phase = 1.0 + 0.0j
    letters = []
    for a, b in zip(left, right):
        factor, letter = _SINGLE_PRODUCTS[(a, b)]
        phase *= factor
        letters.append(letter)
    return phase, "".join(letters)


def op_add(target: PauliOp, other: PauliOp, scale: complex = 1.0) -> None:
    for string, coeff in other.items():
        target[string] = target.get(string, 0.0) + scale * coeff


def op_multiply(left: PauliOp, right: PauliOp) -> PauliOp:
    out: PauliOp = {}
    for ls, lc in left.items():
        for rs, rc in right.items():
            phase, string = multiply_strings(ls, rs)
            out[string] = out.get(string, 0.0) + lc * rc * phase
    return out


def op_clean(op: PauliOp, threshold: float = 1e-12) -> PauliOp:
    return {s: c for s, c in op.items() if abs(c) > threshold}


def identity_op(n_qubits: int, coeff: complex = 1.0) -> PauliOp:
    return {"I" * n_qubits: coeff}


def _string_with(n_qubits: int, letters: dict[int, str]) -> str:
    return "".join(letters.get(q, "I") for q in range(n_qubits))


def lowering(p: int, n_qubits: int) -> PauliOp:
    """Jordan-Wigner annihilation operator a_p = Z^{(<p)} (X_p + i Y_p) / 2."""
    z_part = {q: "Z" for q in range(p)}
    x_string = _string_with(n_qubits, {**z_part, p: "X"})
    y_string = _string_with(n_qubits, {**z_part, p: "Y"})
    return {x_string: 0.5, y_string: 0.5j}


def raising(p: int, n_qubits: int) -> PauliOp:
    z_part = {q: "Z" for q in range(p)}
    x_string = _string_with(n_qubits, {**z_part, p: "X"})
    y_string = _string_with(n_qubits, {**z_part, p: "Y"})
    return {x_string: 0.5, y_string: -0.5j}


def number_mode(p: int, n_qubits: int) -> PauliOp:
    """n_p = a+_p a_p = (I - Z_p) / 2."""
    return {
        "I" * n_qubits: 0.5,
        _string_with(n_qubits, {p: "Z"}): -0.5,
    }


def number_operator(n_qubits: int) -> PauliOp:
    out: PauliOp = {}
    for p in range(n_qubits):
        op_add(out, number_mode(p, n_qubits))
    return op_clean(out)


def sz_operator(n_qubits: int) -> PauliOp:
    out: PauliOp = {}
    for p in range(n_qubits):
        sign = 0.5 if p % 2 == 0 else -0.5
        op_add(out, number_mode(p, n_qubits), scale=sign)
    return op_clean(out)


def s2_operator(n_qubits: int) -> PauliOp:
    """Total spin S^2 = S-S+ + Sz^2 + Sz over the interleaved spin orbitals."""
    if n_qubits % 2:
        raise ValueError("spin operators need an even qubit count")
    s_plus: PauliOp = {}
    for i in range(n_qubits // 2):
        op_add(s_plus, op_multiply(raising(2 * i, n_qubits), lowering(2 * i + 1, n_qubits)))
    s_minus: PauliOp = {}
    for i in range(n_qubits // 2):
        op_add(s_minus, op_multiply(raising(2 * i + 1, n_qubits), lowering(2 * i, n_qubits)))
    sz = sz_operator(n_qubits)
    out = op_multiply(s_minus, s_plus)
    op_add(out, op_multiply(sz, sz))
    op_add(out, sz)
    return op_clean(out)


def hamiltonian_operator(constant: float, h1: np.ndarray, eri: np.ndarray) -> PauliOp:
    """Qubit Hamiltonian of spatial integrals under Jordan-Wigner.

    h1 is the (active-space) one-electron matrix and eri the chemist-notation
    (pq|rs) tensor, both over spatial orbitals; spin orbitals interleave.
    """
    n_spatial = h1.shape[0]
    n_qubits = 2 * n_spatial
    ladders_up = [raising(p, n_qubits) for p in range(n_qubits)]
    ladders_down = [lowering(p, n_qubits) for p in range(n_qubits)]
    out: PauliOp = identity_op(n_qubits, constant)

    for p in range(n_spatial):
        for q in range(n_spatial):
            if abs(h1[p, q]) < 1e-12:
                continue
            for spin in (0, 1):
                term = op_multiply(ladders_up[2 * p + spin], ladders_down[2 * q + spin])
                op_add(out, term, scale=h1[p, q])

    for p in range(n_spatial):
        for q in range(n_spatial):
            for r in range(n_spatial):
                for s in range(n_spatial):
                    coeff = eri[p, q, r, s]
                    if abs(coeff) < 1e-12:
                        continue
                    for sigma in (0, 1):
                        for tau in (0, 1):
                            i = 2 * p + sigma
                            j = 2 * r + tau
                            k = 2 * s + tau
                            l = 2 * q + sigma
                            if i == j or k == l:
                                continue  # a+_i a+_j or a_k a_l vanishes
                            term = op_multiply(
                                op_multiply(ladders_up[i], ladders_up[j]),
                                op_multiply(ladders_down[k], ladders_down[l]),
                            )
                            op_add(out, term, scale=0.5 * coeff)
    return op_clean(out)


def hermitian_real_part(op: PauliOp, tol: float = 1e-9) -> dict[str, float]:
    """Coefficients of a Hermitian operator as floats; rejects genuine imaginary parts."""
    worst = max((abs(c.imag) for c in op.values()), default=0.0)
    if worst > tol:
        raise ValueError(f"operator has imaginary coefficients up to {worst}")
    return {s: float(c.real) for s, c in op.items()}
