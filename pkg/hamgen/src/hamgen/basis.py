"""Minimal-basis (STO-6G) shell construction.

Each Slater orbital is expanded in six Gaussians using the standard
least-squares fit coefficients at unit Slater exponent; element-specific
exponents follow from the usual zeta scaling alpha -> alpha * zeta**2.
The 2s and 2p shells share exponents (sp shell), as in the distributed
STO-6G basis sets.  Primitive and contraction normalization are applied
here so the integral engine sees normalized basis functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# 6-Gaussian fits at zeta = 1
_1S_EXPS = np.array(
    [23.10303149, 4.235915534, 1.185056519, 0.4070988982, 0.1580884151, 0.06510953954]
)
_1S_COEFS = np.array(
    [0.009163596281, 0.04936149294, 0.1685383049, 0.3705627997, 0.4164915298, 0.1303340841]
)
_2SP_EXPS = np.array(
    [10.30869372, 2.040359519, 0.6341422177, 0.2439772350, 0.1059194453, 0.04856900032]
)
_2S_COEFS = np.array(
    [-0.01325278809, -0.04699171014, -0.03378537151, 0.2502417861, 0.5951172526, 0.2407061763]
)
_2P_COEFS = np.array(
    [0.003759696623, 0.03767936984, 0.1738967435, 0.4180364347, 0.4258595477, 0.1017082955]
)

# standard molecular Slater exponents (zeta_1s, zeta_2sp)
_ZETAS = {
    "H": (1.24, None),
    "Li": (2.69, 0.80),
    "Be": (3.68, 1.15),
    "B": (4.68, 1.45),
    "C": (5.67, 1.72),
    "N": (6.67, 1.95),
    "O": (7.66, 2.25),
    "F": (8.65, 2.55),
}

ATOMIC_NUMBERS = {"H": 1, "Li": 3, "Be": 4, "B": 5, "C": 6, "N": 7, "O": 8, "F": 9}

_DOUBLE_FACTORIAL = {-1: 1.0, 0: 1.0, 1: 1.0, 2: 2.0, 3: 3.0, 4: 8.0, 5: 15.0}


def primitive_norm(alpha: float, lmn: tuple[int, int, int]) -> float:
    l, m, n = lmn
    pref = (2.0 * alpha / np.pi) ** 0.75 * (4.0 * alpha) ** ((l + m + n) / 2.0)
    return pref / np.sqrt(
        _DOUBLE_FACTORIAL[2 * l - 1] * _DOUBLE_FACTORIAL[2 * m - 1] * _DOUBLE_FACTORIAL[2 * n - 1]
    )


@dataclass(frozen=True)
class BasisFunction:
    """One contracted Cartesian Gaussian: sum_i c_i N_i exp(-a_i r^2) x^l y^m z^n."""

    center: tuple[float, float, float]
    lmn: tuple[int, int, int]
    exps: np.ndarray
    coefs: np.ndarray  # includes primitive norms and contraction normalization

    @property
    def angular(self) -> int:
        return sum(self.lmn)


def _contract(center, lmn, exps, raw_coefs) -> BasisFunction:
    from .integrals import primitive_overlap

    coefs = np.array(
        [c * primitive_norm(a, lmn) for c, a in zip(raw_coefs, exps)], dtype=float
    )
    self_overlap = 0.0
    for ci, ai in zip(coefs, exps):
        for cj, aj in zip(coefs, exps):
            self_overlap += ci * cj * primitive_overlap(ai, center, lmn, aj, center, lmn)
    return BasisFunction(tuple(center), tuple(lmn), np.asarray(exps, float), coefs / np.sqrt(self_overlap))


def atom_basis(symbol: str, center) -> list[BasisFunction]:
    """STO-6G basis functions for one atom, ordered 1s[, 2s, 2px, 2py, 2pz]."""
    if symbol not in _ZETAS:
        raise ValueError(f"no STO-6G parameters for element {symbol!r}")
    zeta1, zeta2 = _ZETAS[symbol]
    functions = [_contract(center, (0, 0, 0), _1S_EXPS * zeta1**2, _1S_COEFS)]
    if zeta2 is not None:
        sp_exps = _2SP_EXPS * zeta2**2
        functions.append(_contract(center, (0, 0, 0), sp_exps, _2S_COEFS))
        for lmn in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            functions.append(_contract(center, lmn, sp_exps, _2P_COEFS))
    return functions


@dataclass(frozen=True)
class Molecule:
    symbols: tuple[str, ...]
    coords: tuple[tuple[float, float, float], ...]  # atomic units
    charge: int = 0

    def __post_init__(self):
        if len(self.symbols) != len(self.coords):
            raise ValueError("one coordinate triple per atom required")
        unknown = [s for s in self.symbols if s not in ATOMIC_NUMBERS]
        if unknown:
            raise ValueError(f"unsupported elements: {unknown}")

    @property
    def n_electrons(self) -> int:
        return sum(ATOMIC_NUMBERS[s] for s in self.symbols) - self.charge

    def basis(self) -> list[BasisFunction]:
        out = []
        for symbol, center in zip(self.symbols, self.coords):
            out.extend(atom_basis(symbol, center))
        return out

    def nuclear_repulsion(self) -> float:
        energy = 0.0
        coords = np.asarray(self.coords, dtype=float)
        charges = [ATOMIC_NUMBERS[s] for s in self.symbols]
        for i in range(len(charges)):
            for j in range(i + 1, len(charges)):
                energy += charges[i] * charges[j] / np.linalg.norm(coords[i] - coords[j])
        return energy
