"""Flat-landscape benchmark: how many circuit evaluations does each optimizer need?

Deep random circuits have exponentially vanishing gradients, so plain
gradient-based optimizers crawl.  This script builds the 9-qubit circuit with
a fixed Ry(pi/4) wall, four layers of randomly oriented rotations and CZ
chains, and the two-qubit ZZ cost observable, then races four optimizers
over the same ten random initializations.

Run:  python demos/barren_plateau.py            (about half a minute)
"""

from vqaopt import (
    ExperimentConfig,
    OptimizerSettings,
    ProblemSettings,
    emit_csv,
    evals_to_ratio,
    run_experiment,
)

problem = ProblemSettings(kind="barren_plateau", n_qubits=9, n_layers=4, axis_seed=0)

# All four optimizers consume the same initial parameter vectors (seeds 0..9);
# the interesting contrast is the x-axis: cumulative circuit evaluations.
contenders = {
    "adam": OptimizerSettings(name="adam", eta=0.01),
    "qng (block-diag)": OptimizerSettings(name="qng", qng_mode="block_diagonal", eta=0.01),
    "qbroyden (full init)": OptimizerSettings(name="qbroyden", metric_init="full", eta=0.01),
    "qbang (block-diag init)": OptimizerSettings(name="qbang", metric_init="block_diagonal", eta=0.01),
}

print(f"{'optimizer':26s} {'evals to r=0.99':>16s} {'reached':>8s} {'best energy':>12s}")
for label, optimizer in contenders.items():
    config = ExperimentConfig(problem=problem, optimizer=optimizer, n_seeds=10, max_steps=400)
    aggregate = run_experiment(config)
    mean_evals, fraction = evals_to_ratio(aggregate, 0.99)
    shown = f"{mean_evals:.0f}" if mean_evals is not None else "never"
    print(
        f"{label:26s} {shown:>16s} {fraction:>8.0%} {aggregate.mean_best_energy():>12.4f}"
    )
    emit_csv(aggregate, f"demo_output/barren_{optimizer.name}_{optimizer.metric_init}.csv")

print(
    "\nThe filtered-metric optimizer with the cheap block-diagonal initialization"
    "\nreaches the ground state in a fraction of the evaluations: a single metric"
    "\nestimate plus rank-1 updates is enough to navigate the flat landscape."
    "\nPer-step curves are in demo_output/."
)
