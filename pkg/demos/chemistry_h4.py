"""Ground-state search for the H4 molecular operator, with physical audits.

The operator files under tests/fixtures/ were produced offline by the hamgen
package (STO-6G integrals, Jordan-Wigner mapping, interleaved spin orbitals).
Besides chasing the energy we audit the best state found with the particle
number, spin projection, and total spin observables.  Hardware-efficient
circuits conserve none of these, and the audits make the consequences
visible on both initialization strategies.

Run:  python demos/chemistry_h4.py
"""

from pathlib import Path

from vqaopt import (
    ExperimentConfig,
    OptimizerSettings,
    ProblemSettings,
    build_hardware_efficient,
    expectation,
    load_problem,
    run_circuit,
    run_experiment,
)

fixture = Path(__file__).parent.parent / "tests" / "fixtures" / "h4_sto6g"
instance = load_problem(
    fixture / "hamiltonian.txt",
    {"N": fixture / "number.txt", "Sz": fixture / "sz.txt", "S2": fixture / "s2.txt"},
    build_hardware_efficient(8, 2),
)
e_min, e_max = instance.exact_bounds
print(f"H4, 8 qubits, exact ground energy {e_min:.4f} Ha; electrons = {instance.n_electrons}")

problem = ProblemSettings(
    kind="chemistry",
    n_layers=2,
    hamiltonian_path=str(fixture / "hamiltonian.txt"),
    observable_paths={
        "N": str(fixture / "number.txt"),
        "Sz": str(fixture / "sz.txt"),
        "S2": str(fixture / "s2.txt"),
    },
)

print(f"\n{'optimizer / init':28s} {'mean best (Ha)':>15s} {'<N>':>6s} {'<Sz>':>6s} {'<S2>':>6s}")
for label, optimizer, init in (
    ("adam, random", OptimizerSettings(name="adam", eta=0.01), "random_uniform"),
    ("qbang full, random", OptimizerSettings(name="qbang", metric_init="full", eta=0.01), "random_uniform"),
    ("qbang full, perturbed HF", OptimizerSettings(name="qbang", metric_init="full", eta=0.01), "hartree_fock_perturbed"),
):
    config = ExperimentConfig(
        problem=problem, optimizer=optimizer, n_seeds=8, max_steps=300, init_mode=init
    )
    aggregate = run_experiment(config)
    # audit the single best state across seeds
    best = min(aggregate.ok_records, key=lambda r: r.best_energy)
    state = run_circuit(instance.circuit, best.best_params)
    audits = {name: expectation(state, obs) for name, obs in instance.observables.items()}
    print(
        f"{label:28s} {aggregate.mean_best_energy():>15.4f}"
        f" {audits['N']:>6.2f} {audits['Sz']:>6.2f} {audits['S2']:>6.2f}"
    )

print(
    "\nTargets: <N> = 4, <Sz> = 0, <S2> = 0, exact ground = "
    f"{e_min:.3f} Ha."
    "\nRandom starts get within ~0.35 Ha of the ground energy but sit in the"
    "\nwrong spin sector (<S2> = 2): the ansatz trades physicality for energy."
    "\nThe Hartree-Fock bitmask start looks principled, yet the CNOT ring maps"
    "\nthe determinant to a two-electron basis state (<N> = 2) that is itself"
    "\nnear-stationary, and the run parks there with a far worse energy."
    "\nWithout the audit observables both pathologies would be invisible."
)
