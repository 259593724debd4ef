"""Offline generator of qubit Hamiltonians and spin observables for small molecules."""

from .basis import Molecule, atom_basis
from .files import ground_energy, read_operator, write_operator
from .generate import generate
from .molecular import build_active_space, build_qubit_operators
from .presets import PRESETS
from .scf import run_rhf
from .verify import verify

__version__ = "0.1.0"
