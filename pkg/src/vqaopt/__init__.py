"""Statevector simulation and metric-informed optimizers for variational quantum circuits."""

from .pauli import (
    HermiticityError,
    PauliFormatError,
    PauliSum,
    PauliTerm,
    apply_pauli_sum,
    apply_pauli_term,
    exact_bounds,
    expectation,
    parse_pauli_sum,
)
from .simulator import (
    CircuitIR,
    GateOp,
    Statevector,
    derivative_state,
    derivative_states,
    run_circuit,
)
from .gradients import (
    EvalCounter,
    MetricMatrix,
    cost,
    gradient,
    qfim_block_diagonal,
    qfim_full,
    regularize,
)
from .optimizers import (
    AdamState,
    FilterBreakdownError,
    MetricError,
    MetricState,
    OptimizerSettings,
    StepResult,
    adam_direction,
    adam_step,
    filter_update,
    initialize_metric,
    make_runner,
    momentum_qng_step,
    qbang_step,
    qbroyden_step,
    qng_step,
)
from .problems import (
    Graph,
    ProblemInstance,
    build_barren_plateau,
    build_hardware_efficient,
    build_qaoa,
    initial_params,
    load_problem,
    maxcut_hamiltonian,
    number_operator,
    random_graph,
    read_graph,
    sz_operator,
    write_graph,
)
from .harness import (
    ConfigError,
    ExperimentAggregate,
    ExperimentConfig,
    ExperimentError,
    ProblemSettings,
    TrajectoryRecord,
    approximation_ratio,
    build_instance,
    emit_csv,
    evals_to_ratio,
    load_config,
    parse_config,
    ratio_curve,
    run_experiment,
    run_trajectory,
    sweep_step_size,
)

__version__ = "0.1.0"
