"""Post-generation verification of an output directory."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .files import basis_expectation, ground_energy, read_operator
from .presets import PRESETS, REFERENCE_TOLERANCE

FILES = ("hamiltonian.txt", "number.txt", "sz.txt", "s2.txt")


class VerifyError(RuntimeError):
    pass


@dataclass
class VerifyReport:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str) -> None:
        self.checks.append((name, passed, detail))

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def raise_if_failed(self) -> None:
        failures = [f"{name}: {detail}" for name, passed, detail in self.checks if not passed]
        if failures:
            raise VerifyError("; ".join(failures))

    def __str__(self) -> str:
        return "\n".join(
            f"[{'ok' if passed else 'FAIL'}] {name}: {detail}" for name, passed, detail in self.checks
        )


def verify(out_dir) -> VerifyReport:
    """Check a generated operator set for internal and physical consistency.

    Covers: file presence, qubit-count agreement, Hartree-Fock expectations of
    the number/spin operators, SCF-energy consistency of the Hamiltonian, and
    (for presets) the exact ground energy against its reference value.
    """
    out_dir = Path(out_dir)
    report = VerifyReport()
    operators = {}
    for filename in FILES:
        path = out_dir / filename
        if not path.exists():
            report.add("files", False, f"missing {path}")
            return report
        try:
            operators[filename] = read_operator(path)
        except ValueError as exc:
            report.add("parse", False, str(exc))
            return report
    report.add("files", True, f"all of {', '.join(FILES)} present and parseable")

    ham_terms, headers, n_qubits = operators["hamiltonian.txt"]
    sizes = {name: op[2] for name, op in operators.items()}
    consistent = all(size == n_qubits for size in sizes.values())
    report.add("qubit_count", consistent, f"{sizes}")
    if not consistent:
        return report

    missing = [key for key in ("n_electrons", "occupation") if key not in headers]
    report.add("headers", not missing, f"missing {missing}" if missing else "metadata present")
    if missing:
        return report
    n_electrons = int(headers["n_electrons"])
    occupation = headers["occupation"]
    if len(occupation) != n_qubits or set(occupation) - {"0", "1"}:
        report.add("occupation", False, f"malformed bitmask {occupation!r}")
        return report

    number_terms = operators["number.txt"][0]
    got_n = basis_expectation(number_terms, n_qubits, occupation)
    report.add(
        "hf_particle_number",
        abs(got_n - n_electrons) < 1e-9,
        f"<HF|N|HF> = {got_n} vs {n_electrons}",
    )
    for name, filename in (("sz", "sz.txt"), ("s2", "s2.txt")):
        value = basis_expectation(operators[filename][0], n_qubits, occupation)
        report.add(
            f"hf_{name}_closed_shell",
            abs(value) < 1e-9,
            f"<HF|{name}|HF> = {value}",
        )

    if "scf_energy" in headers:
        scf_energy = float(headers["scf_energy"])
        hf_energy = basis_expectation(ham_terms, n_qubits, occupation)
        report.add(
            "hf_energy_consistency",
            abs(hf_energy - scf_energy) < 1e-8,
            f"<HF|H|HF> = {hf_energy:.10f} vs SCF {scf_energy:.10f}",
        )

    preset_name = headers.get("preset")
    if preset_name:
        if preset_name not in PRESETS:
            report.add("reference_energy", False, f"unknown preset {preset_name!r}")
        else:
            reference = PRESETS[preset_name].reference_ground_energy
            energy = ground_energy(ham_terms, n_qubits)
            report.add(
                "reference_energy",
                abs(energy - reference) < REFERENCE_TOLERANCE,
                f"ground energy {energy:.6f} vs reference {reference:.3f} "
                f"(tolerance {REFERENCE_TOLERANCE})",
            )
    return report
