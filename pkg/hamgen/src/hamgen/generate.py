"""End-to-end generation: molecule -> SCF -> active space -> operator files."""

from __future__ import annotations

from pathlib import Path

from .files import write_operator
from .integrals import clear_caches
from .molecular import build_active_space, build_qubit_operators
from .presets import EXPECTED_QUBITS, PRESETS, Preset, parse_xyz


def generate(target: str, out_dir, frozen_core: int | None = None) -> Path:
    """Generate hamiltonian/number/sz/s2 files for a preset name or xyz file.

    Returns the output directory.  Coordinates are interpreted in atomic
    units throughout.
    """
    preset: Preset | None = None
    if target in PRESETS:
        preset = PRESETS[target]
        molecule = preset.molecule
        frozen = preset.frozen_core if frozen_core is None else frozen_core
        label = preset.name
    else:
        path = Path(target)
        if not path.exists():
            raise ValueError(f"{target!r} is neither a preset {tuple(PRESETS)} nor an xyz file")
        molecule = parse_xyz(path.read_text())
        frozen = frozen_core or 0
        label = path.stem

    space = build_active_space(molecule, frozen)
    if preset is not None:
        expected = EXPECTED_QUBITS[preset.name]
        if space.n_qubits != expected:
            raise RuntimeError(
                f"{label}: built {space.n_qubits} qubits, expected {expected}"
            )
    operators = build_qubit_operators(space)
    clear_caches()

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    common = {
        "n_electrons": str(operators.n_electrons),
        "occupation": operators.occupation,
    }
    ham_headers = dict(common)
    ham_headers["scf_energy"] = repr(operators.scf_energy)
    if preset is not None:
        ham_headers["preset"] = preset.name
    write_operator(
        out_dir / "hamiltonian.txt",
        operators.hamiltonian,
        ham_headers,
        f"qubit Hamiltonian for {label} (STO-6G, {frozen} frozen core orbital(s))",
    )
    write_operator(out_dir / "number.txt", operators.number, common, f"particle number for {label}")
    write_operator(out_dir / "sz.txt", operators.sz, common, f"spin projection for {label}")
    write_operator(out_dir / "s2.txt", operators.s2, common, f"total spin for {label}")
    return out_dir
