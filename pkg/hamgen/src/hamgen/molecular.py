"""Active-space assembly: MO transformation, frozen core, and qubit operators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import Molecule
from .fermion import (
    hamiltonian_operator,
    hermitian_real_part,
    number_operator,
    s2_operator,
    sz_operator,
)
from .scf import SCFResult, run_rhf


@dataclass
class ActiveSpace:
    """Spatial-orbital integrals restricted to the active window."""

    constant: float  # nuclear repulsion + frozen-core energy
    h1: np.ndarray
    eri: np.ndarray
    n_electrons: int  # active electrons
    n_qubits: int
    occupation: str  # Hartree-Fock bitmask over interleaved spin orbitals
    scf_energy: float  # total SCF energy of the parent molecule


def build_active_space(molecule: Molecule, frozen_core: int, scf: SCFResult | None = None) -> ActiveSpace:
    if scf is None:
        scf = run_rhf(molecule)
    coeffs = scf.mo_coeffs
    n_orb = coeffs.shape[1]
    if not 0 <= frozen_core < scf.n_occ or frozen_core >= n_orb:
        if frozen_core != 0:
            raise ValueError(f"cannot freeze {frozen_core} orbitals of {scf.n_occ} occupied")
    h_mo = coeffs.T @ scf.h_core @ coeffs
    eri_mo = np.einsum("pi,qj,rk,sl,pqrs->ijkl", coeffs, coeffs, coeffs, coeffs, scf.eri, optimize=True)

    core = list(range(frozen_core))
    active = list(range(frozen_core, n_orb))
    e_core = 0.0
    for i in core:
        e_core += 2.0 * h_mo[i, i]
        for j in core:
            e_core += 2.0 * eri_mo[i, i, j, j] - eri_mo[i, j, j, i]
    h_eff = h_mo[np.ix_(active, active)].copy()
    for i in core:
        h_eff += 2.0 * eri_mo[np.ix_(active, active, [i], [i])][:, :, 0, 0]
        h_eff -= eri_mo[np.ix_(active, [i], [i], active)][:, 0, 0, :]
    eri_active = eri_mo[np.ix_(active, active, active, active)]

    n_active_electrons = molecule.n_electrons - 2 * frozen_core
    n_occ_active = scf.n_occ - frozen_core
    n_qubits = 2 * len(active)
    occupation = "1" * (2 * n_occ_active) + "0" * (n_qubits - 2 * n_occ_active)
    return ActiveSpace(
        constant=float(scf.e_nuc + e_core),
        h1=h_eff,
        eri=eri_active,
        n_electrons=n_active_electrons,
        n_qubits=n_qubits,
        occupation=occupation,
        scf_energy=scf.energy,
    )


@dataclass
class QubitOperators:
    hamiltonian: dict[str, float]
    number: dict[str, float]
    sz: dict[str, float]
    s2: dict[str, float]
    n_qubits: int
    n_electrons: int
    occupation: str
    scf_energy: float


def build_qubit_operators(space: ActiveSpace) -> QubitOperators:
    hamiltonian = hermitian_real_part(
        hamiltonian_operator(space.constant, space.h1, space.eri)
    )
    return QubitOperators(
        hamiltonian=hamiltonian,
        number=hermitian_real_part(number_operator(space.n_qubits)),
        sz=hermitian_real_part(sz_operator(space.n_qubits)),
        s2=hermitian_real_part(s2_operator(space.n_qubits)),
        n_qubits=space.n_qubits,
        n_electrons=space.n_electrons,
        occupation=space.occupation,
        scf_energy=space.scf_energy,
    )
