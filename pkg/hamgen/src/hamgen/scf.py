"""Restricted Hartree-Fock with DIIS convergence acceleration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import Molecule
from .integrals import eri_tensor, kinetic_matrix, nuclear_matrix, overlap_matrix


class SCFError(RuntimeError):
    pass


@dataclass
class SCFResult:
    energy: float  # total, including nuclear repulsion
    mo_coeffs: np.ndarray  # columns are MOs, ordered by orbital energy
    mo_energies: np.ndarray
    h_core: np.ndarray
    eri: np.ndarray  # chemist notation (pq|rs), AO basis
    overlap: np.ndarray
    e_nuc: float
    n_occ: int


def run_rhf(molecule: Molecule, max_iterations: int = 200, tol: float = 1e-11) -> SCFResult:
    if molecule.n_electrons % 2:
        raise SCFError("restricted HF needs an even electron count")
    basis = molecule.basis()
    overlap = overlap_matrix(basis)
    h_core = kinetic_matrix(basis) + nuclear_matrix(basis, molecule)
    eri = eri_tensor(basis)
    e_nuc = molecule.nuclear_repulsion()
    n_occ = molecule.n_electrons // 2

    s_vals, s_vecs = np.linalg.eigh(overlap)
    if s_vals.min() < 1e-10:
        raise SCFError("near-singular overlap matrix")
    x = s_vecs @ np.diag(s_vals**-0.5) @ s_vecs.T

    def solve(fock):
        f_ortho = x.T @ fock @ x
        energies, vectors = np.linalg.eigh(f_ortho)
        coeffs = x @ vectors
        return energies, coeffs

    energies, coeffs = solve(h_core)
    density = 2.0 * coeffs[:, :n_occ] @ coeffs[:, :n_occ].T
    last_energy = 0.0
    fock_history: list[np.ndarray] = []
    error_history: list[np.ndarray] = []

    for iteration in range(max_iterations):
        coulomb = np.einsum("pqrs,rs->pq", eri, density)
        exchange = np.einsum("prqs,rs->pq", eri, density)
        fock = h_core + coulomb - 0.5 * exchange
        electronic = 0.5 * np.sum(density * (h_core + fock))
        total = electronic + e_nuc

        diis_error = fock @ density @ overlap - overlap @ density @ fock
        fock_history.append(fock)
        error_history.append(diis_error)
        if len(fock_history) > 8:
            fock_history.pop(0)
            error_history.pop(0)
        if len(fock_history) > 1:
            fock = _diis_extrapolate(fock_history, error_history)

        energies, coeffs = solve(fock)
        density = 2.0 * coeffs[:, :n_occ] @ coeffs[:, :n_occ].T
        if abs(total - last_energy) < tol and np.abs(diis_error).max() < 1e-8:
            return SCFResult(float(total), coeffs, energies, h_core, eri, overlap, float(e_nuc), n_occ)
        last_energy = total
    raise SCFError(f"SCF failed to converge in {max_iterations} iterations")


def _diis_extrapolate(focks, errors) -> np.ndarray:
    m = len(focks)
    b = -np.ones((m + 1, m + 1))
    b[m, m] = 0.0
    for i in range(m):
        for j in range(m):
            b[i, j] = np.sum(errors[i] * errors[j])
    rhs = np.zeros(m + 1)
    rhs[m] = -1.0
    try:
        weights = np.linalg.solve(b, rhs)[:m]
    except np.linalg.LinAlgError:
        return focks[-1]
    return sum(w * f for w, f in zip(weights, focks))
