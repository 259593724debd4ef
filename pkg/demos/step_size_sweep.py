"""Hyperparameter resilience: the same problem swept over step sizes.

Momentum smooths out aggressive steps; raw curvature steps amplify them.
Sweeping eta from 0.01 to 0.9 on the 9-qubit, 5-layer flat-landscape circuit
shows Adam shrugging off eta = 0.9 while the natural-gradient family starts
to oscillate well before that.

Run:  python demos/step_size_sweep.py
"""

from vqaopt import (
    ExperimentConfig,
    OptimizerSettings,
    ProblemSettings,
    ratio_curve,
    sweep_step_size,
)

problem = ProblemSettings(kind="barren_plateau", n_qubits=9, n_layers=5, axis_seed=0)
etas = [0.01, 0.1, 0.5, 0.9]

for label, optimizer in {
    "adam": OptimizerSettings(name="adam"),
    "qbang (block-diag)": OptimizerSettings(name="qbang", metric_init="block_diagonal"),
    "qbroyden (full)": OptimizerSettings(name="qbroyden", metric_init="full"),
    "qng (block-diag)": OptimizerSettings(name="qng", qng_mode="block_diagonal"),
}.items():
    config = ExperimentConfig(problem=problem, optimizer=optimizer, n_seeds=3, max_steps=300)
    results = sweep_step_size(config, etas)
    cells = []
    for eta in etas:
        _, ratios = ratio_curve(results[eta])
        cells.append(f"eta={eta:<4g} r={ratios[-1]:5.2f}")
    print(f"{label:20s} " + "  ".join(cells))

print(
    "\nFinal approximation ratios after 300 steps.  Ratios near 1.0 mean the"
    "\nrun stayed stable at that step size; collapsing ratios at large eta are"
    "\nthe oscillation/divergence signature of unpreconditioned curvature steps."
)
