"""One- and two-electron integrals over contracted Cartesian Gaussians.

McMurchie-Davidson scheme: Cartesian overlaps expand in Hermite Gaussians
(coefficients E), Coulomb-type integrals contract Hermite charge
distributions against the Boys function through the auxiliary table R.
Angular momenta up to p suffice here, so the recursions stay shallow.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import gamma, gammainc


def boys_array(n_max: int, x: float) -> np.ndarray:
    """F_n(x) for n = 0..n_max."""
    ns = np.arange(n_max + 1)
    if x < 1e-13:
        return 1.0 / (2.0 * ns + 1.0)
    a = ns + 0.5
    return gammainc(a, x) * gamma(a) / (2.0 * x**a)


@lru_cache(maxsize=200_000)
def hermite_expansion(i: int, j: int, t: int, qx: float, a: float, b: float) -> float:
    """Hermite expansion coefficient E_t^{ij} for a Gaussian product along one axis."""
    p = a + b
    mu = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return math.exp(-mu * qx * qx)
    if j == 0:
        return (
            hermite_expansion(i - 1, j, t - 1, qx, a, b) / (2.0 * p)
            - (mu * qx / a) * hermite_expansion(i - 1, j, t, qx, a, b)
            + (t + 1) * hermite_expansion(i - 1, j, t + 1, qx, a, b)
        )
    return (
        hermite_expansion(i, j - 1, t - 1, qx, a, b) / (2.0 * p)
        + (mu * qx / b) * hermite_expansion(i, j - 1, t, qx, a, b)
        + (t + 1) * hermite_expansion(i, j - 1, t + 1, qx, a, b)
    )


def coulomb_hermite(t_max: int, u_max: int, v_max: int, alpha: float, pc) -> np.ndarray:
    """Auxiliary table R_{tuv} at order 0 for Hermite Coulomb integrals."""
    n_max = t_max + u_max + v_max
    x = alpha * float(pc[0] * pc[0] + pc[1] * pc[1] + pc[2] * pc[2])
    fn = boys_array(n_max, x)
    table = np.zeros((n_max + 2, t_max + 1, u_max + 1, v_max + 1))
    power = 1.0
    for n in range(n_max + 1):
        table[n, 0, 0, 0] = power * fn[n]
        power *= -2.0 * alpha
    for t in range(1, t_max + 1):
        for n in range(n_max - t, -1, -1):
            value = pc[0] * table[n + 1, t - 1, 0, 0]
            if t > 1:
                value += (t - 1) * table[n + 1, t - 2, 0, 0]
            table[n, t, 0, 0] = value
    for u in range(1, u_max + 1):
        for t in range(t_max + 1):
            for n in range(n_max - t - u, -1, -1):
                value = pc[1] * table[n + 1, t, u - 1, 0]
                if u > 1:
                    value += (u - 1) * table[n + 1, t, u - 2, 0]
                table[n, t, u, 0] = value
    for v in range(1, v_max + 1):
        for u in range(u_max + 1):
            for t in range(t_max + 1):
                for n in range(n_max - t - u - v, -1, -1):
                    value = pc[2] * table[n + 1, t, u, v - 1]
                    if v > 1:
                        value += (v - 1) * table[n + 1, t, u, v - 2]
                    table[n, t, u, v] = value
    return table[0]


def primitive_overlap(a, A, lmn1, b, B, lmn2) -> float:
    p = a + b
    out = (math.pi / p) ** 1.5
    for axis in range(3):
        out *= hermite_expansion(lmn1[axis], lmn2[axis], 0, A[axis] - B[axis], a, b)
    return out


def primitive_kinetic(a, A, lmn1, b, B, lmn2) -> float:
    l2, m2, n2 = lmn2

    def shifted(dl, dm, dn):
        shifted_lmn = (l2 + dl, m2 + dm, n2 + dn)
        if min(shifted_lmn) < 0:
            return 0.0
        return primitive_overlap(a, A, lmn1, b, B, shifted_lmn)

    term = b * (2 * (l2 + m2 + n2) + 3) * shifted(0, 0, 0)
    term -= 2.0 * b * b * (shifted(2, 0, 0) + shifted(0, 2, 0) + shifted(0, 0, 2))
    term -= 0.5 * (
        l2 * (l2 - 1) * shifted(-2, 0, 0)
        + m2 * (m2 - 1) * shifted(0, -2, 0)
        + n2 * (n2 - 1) * shifted(0, 0, -2)
    )
    return term


def primitive_nuclear(a, A, lmn1, b, B, lmn2, C) -> float:
    p = a + b
    P = tuple((a * A[k] + b * B[k]) / p for k in range(3))
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    table = coulomb_hermite(
        l1 + l2, m1 + m2, n1 + n2, p, tuple(P[k] - C[k] for k in range(3))
    )
    ex = [hermite_expansion(l1, l2, t, A[0] - B[0], a, b) for t in range(l1 + l2 + 1)]
    ey = [hermite_expansion(m1, m2, u, A[1] - B[1], a, b) for u in range(m1 + m2 + 1)]
    ez = [hermite_expansion(n1, n2, v, A[2] - B[2], a, b) for v in range(n1 + n2 + 1)]
    total = 0.0
    for t, et in enumerate(ex):
        for u, eu in enumerate(ey):
            for v, ev in enumerate(ez):
                total += et * eu * ev * table[t, u, v]
    return 2.0 * math.pi / p * total


def primitive_eri(a, A, lmn1, b, B, lmn2, c, C, lmn3, d, D, lmn4) -> float:
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    P = tuple((a * A[k] + b * B[k]) / p for k in range(3))
    Q = tuple((c * C[k] + d * D[k]) / q for k in range(3))
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    l3, m3, n3 = lmn3
    l4, m4, n4 = lmn4
    tab = coulomb_hermite(
        l1 + l2 + l3 + l4,
        m1 + m2 + m3 + m4,
        n1 + n2 + n3 + n4,
        alpha,
        tuple(P[k] - Q[k] for k in range(3)),
    )
    e1x = [hermite_expansion(l1, l2, t, A[0] - B[0], a, b) for t in range(l1 + l2 + 1)]
    e1y = [hermite_expansion(m1, m2, u, A[1] - B[1], a, b) for u in range(m1 + m2 + 1)]
    e1z = [hermite_expansion(n1, n2, v, A[2] - B[2], a, b) for v in range(n1 + n2 + 1)]
    e2x = [hermite_expansion(l3, l4, t, C[0] - D[0], c, d) for t in range(l3 + l4 + 1)]
    e2y = [hermite_expansion(m3, m4, u, C[1] - D[1], c, d) for u in range(m3 + m4 + 1)]
    e2z = [hermite_expansion(n3, n4, v, C[2] - D[2], c, d) for v in range(n3 + n4 + 1)]
    total = 0.0
    for t, et in enumerate(e1x):
        for u, eu in enumerate(e1y):
            for v, ev in enumerate(e1z):
                bra = et * eu * ev
                if bra == 0.0:
                    continue
                for tt, ett in enumerate(e2x):
                    for uu, euu in enumerate(e2y):
                        for vv, evv in enumerate(e2z):
                            sign = -1.0 if (tt + uu + vv) % 2 else 1.0
                            total += bra * ett * euu * evv * sign * tab[t + tt, u + uu, v + vv]
    return 2.0 * math.pi**2.5 / (p * q * math.sqrt(p + q)) * total


def _contracted(op, bf1, bf2, *extra) -> float:
    total = 0.0
    for ci, ai in zip(bf1.coefs, bf1.exps):
        for cj, aj in zip(bf2.coefs, bf2.exps):
            total += ci * cj * op(ai, bf1.center, bf1.lmn, aj, bf2.center, bf2.lmn, *extra)
    return total


def overlap_matrix(basis) -> np.ndarray:
    n = len(basis)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            out[i, j] = out[j, i] = _contracted(primitive_overlap, basis[i], basis[j])
    return out


def kinetic_matrix(basis) -> np.ndarray:
    n = len(basis)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            out[i, j] = out[j, i] = _contracted(primitive_kinetic, basis[i], basis[j])
    return out


def nuclear_matrix(basis, molecule) -> np.ndarray:
    from .basis import ATOMIC_NUMBERS

    n = len(basis)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            value = 0.0
            for symbol, center in zip(molecule.symbols, molecule.coords):
                value -= ATOMIC_NUMBERS[symbol] * _contracted(
                    primitive_nuclear, basis[i], basis[j], center
                )
            out[i, j] = out[j, i] = value
    return out


def eri_tensor(basis) -> np.ndarray:
    """Chemist-notation two-electron integrals (ij|kl), full 8-fold symmetry."""
    n = len(basis)
    eri = np.zeros((n, n, n, n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1)]
    for a, (i, j) in enumerate(pairs):
        for k, l in pairs[: a + 1]:
            value = 0.0
            bi, bj, bk, bl = basis[i], basis[j], basis[k], basis[l]
            for c1, a1 in zip(bi.coefs, bi.exps):
                for c2, a2 in zip(bj.coefs, bj.exps):
                    c12 = c1 * c2
                    for c3, a3 in zip(bk.coefs, bk.exps):
                        for c4, a4 in zip(bl.coefs, bl.exps):
                            value += c12 * c3 * c4 * primitive_eri(
                                a1, bi.center, bi.lmn,
                                a2, bj.center, bj.lmn,
                                a3, bk.center, bk.lmn,
                                a4, bl.center, bl.lmn,
                            )
            for p, q in ((i, j), (j, i)):
                for r, s in ((k, l), (l, k)):
                    eri[p, q, r, s] = eri[r, s, p, q] = value
    return eri


def clear_caches() -> None:
    hermite_expansion.cache_clear()
