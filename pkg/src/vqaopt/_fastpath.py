"""Numba-compiled gate kernels.

The pure-numpy kernels in simulator.py are the reference implementation;
these loops reproduce them amplitude pair by amplitude pair (identical IEEE
arithmetic per element, no fastmath) and exist purely for speed.  simulator.py
falls back to the numpy path when numba is unavailable.

Gate codes: 0=RX, 1=RY, 2=RZ, 3=H, 4=CZ, 5=CNOT, 6=FIXED_RY.
Generator axis codes: 0=X, 1=Y, 2=Z.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

SQRT_HALF = 1.0 / math.sqrt(2.0)


@njit(cache=True)
def _gate_row(row, n, code, q1, q2, angle):
    dim = row.shape[0]
    if code == 4:  # CZ
        b1 = 1 << (n - 1 - q1)
        b2 = 1 << (n - 1 - q2)
        for idx in range(dim):
            if (idx & b1) != 0 and (idx & b2) != 0:
                row[idx] = -row[idx]
        return
    if code == 5:  # CNOT
        bc = 1 << (n - 1 - q1)
        bt = 1 << (n - 1 - q2)
        for idx in range(dim):
            if (idx & bc) != 0 and (idx & bt) == 0:
                other = idx | bt
                tmp = row[idx]
                row[idx] = row[other]
                row[other] = tmp
        return
    block = 1 << (n - 1 - q1)
    step = block << 1
    if code == 0 or code == 1 or code == 6:  # RX / RY / FIXED_RY
        half = 0.5 * angle
        c = math.cos(half)
        s = math.sin(half)
        if code == 0:
            u01 = -1j * s
            for base in range(0, dim, step):
                for j in range(base, base + block):
                    a = row[j]
                    b = row[j + block]
                    row[j] = c * a + u01 * b
                    row[j + block] = u01 * a + c * b
        else:
            for base in range(0, dim, step):
                for j in range(base, base + block):
                    a = row[j]
                    b = row[j + block]
                    row[j] = c * a - s * b
                    row[j + block] = s * a + c * b
        return
    if code == 2:  # RZ
        half = 0.5 * angle
        p0 = complex(math.cos(half), -math.sin(half))
        p1 = complex(math.cos(half), math.sin(half))
        for base in range(0, dim, step):
            for j in range(base, base + block):
                row[j] = p0 * row[j]
                row[j + block] = p1 * row[j + block]
        return
    # code == 3: H
    for base in range(0, dim, step):
        for j in range(base, base + block):
            a = row[j]
            b = row[j + block]
            row[j] = SQRT_HALF * (a + b)
            row[j + block] = SQRT_HALF * (a - b)


@njit(cache=True)
def apply_circuit(rows, n, codes, q1s, q2s, angles):
    for g in range(codes.shape[0]):
        for r in range(rows.shape[0]):
            _gate_row(rows[r], n, codes[g], q1s[g], q2s[g], angles[g])


@njit(cache=True)
def _add_generator(target, psi, n, axis, q, factor):
    """target += factor * P_axis(q) psi, with P in {X, Y, Z}."""
    dim = psi.shape[0]
    block = 1 << (n - 1 - q)
    step = block << 1
    if axis == 0:  # X
        for base in range(0, dim, step):
            for j in range(base, base + block):
                target[j] += factor * psi[j + block]
                target[j + block] += factor * psi[j]
    elif axis == 1:  # Y
        for base in range(0, dim, step):
            for j in range(base, base + block):
                target[j] += factor * (-1j) * psi[j + block]
                target[j + block] += factor * 1j * psi[j]
    else:  # Z
        for base in range(0, dim, step):
            for j in range(base, base + block):
                target[j] += factor * psi[j]
                target[j + block] -= factor * psi[j + block]


@njit(cache=True)
def forward_sweep(psi, deriv, n, codes, q1s, q2s, angles, slots, scales, axes):
    """Advance psi and all activated derivative rows through the circuit."""
    n_params = deriv.shape[0]
    active = np.zeros(n_params, dtype=np.bool_)
    for g in range(codes.shape[0]):
        _gate_row(psi, n, codes[g], q1s[g], q2s[g], angles[g])
        for r in range(n_params):
            if active[r]:
                _gate_row(deriv[r], n, codes[g], q1s[g], q2s[g], angles[g])
        slot = slots[g]
        if slot >= 0:
            _add_generator(deriv[slot], psi, n, axes[g], q1s[g], -0.5j * scales[g])
            active[slot] = True


@njit(cache=True)
def backward_gradient(psi, lam, n, codes, q1s, q2s, angles, slots, scales, axes, grad):
    """Adjoint-mode gradient: grad[slot] += scale * Im <lam| P |psi_g>.

    psi must hold the final state and lam the observable applied to it; both
    are consumed (walked back to the initial state).
    """
    dim = psi.shape[0]
    for g in range(codes.shape[0] - 1, -1, -1):
        slot = slots[g]
        if slot >= 0:
            axis = axes[g]
            q = q1s[g]
            block = 1 << (n - 1 - q)
            step = block << 1
            acc = 0.0 + 0.0j
            if axis == 0:
                for base in range(0, dim, step):
                    for j in range(base, base + block):
                        acc += np.conj(lam[j]) * psi[j + block]
                        acc += np.conj(lam[j + block]) * psi[j]
            elif axis == 1:
                for base in range(0, dim, step):
                    for j in range(base, base + block):
                        acc += np.conj(lam[j]) * (-1j) * psi[j + block]
                        acc += np.conj(lam[j + block]) * 1j * psi[j]
            else:
                for base in range(0, dim, step):
                    for j in range(base, base + block):
                        acc += np.conj(lam[j]) * psi[j]
                        acc -= np.conj(lam[j + block]) * psi[j + block]
            grad[slot] += scales[g] * acc.imag
        # undo the gate on both states (rotations invert by negating the angle)
        code = codes[g]
        inverse_angle = -angles[g] if (code <= 2 or code == 6) else angles[g]
        _gate_row(psi, n, code, q1s[g], q2s[g], inverse_angle)
        _gate_row(lam, n, code, q1s[g], q2s[g], inverse_angle)
