import csv
import math

import numpy as np
import pytest

from vqaopt.harness import (
    ConfigError,
    ExperimentConfig,
    ExperimentError,
    ProblemSettings,
    approximation_ratio,
    build_instance,
    emit_csv,
    evals_to_ratio,
    load_config,
    parse_config,
    run_experiment,
    run_trajectory,
    sweep_step_size,
)
from vqaopt.optimizers import OptimizerSettings


def tiny_config(**overrides):
    defaults = dict(
        problem=ProblemSettings(kind="barren_plateau", n_qubits=3, n_layers=2, axis_seed=4),
        optimizer=OptimizerSettings(name="qbang", metric_init="block_diagonal"),
        n_seeds=3,
        max_steps=8,
    )
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


class TestApproximationRatio:
    def test_anchors(self):
        assert approximation_ratio(-1.0, -1.0, 1.0) == pytest.approx(1.0)
        assert approximation_ratio(1.0, -1.0, 1.0) == pytest.approx(0.0)
        assert approximation_ratio(0.0, -1.0, 1.0) == pytest.approx(0.5)

    def test_affine_shift_invariance(self, rng):
        for _ in range(10):
            e_min, width, shift = rng.normal(), abs(rng.normal()) + 0.1, rng.normal() * 10
            e_max = e_min + width
            e_opt = e_min + rng.random() * width
            base = approximation_ratio(e_opt, e_min, e_max)
            moved = approximation_ratio(e_opt + shift, e_min + shift, e_max + shift)
            assert moved == pytest.approx(base, abs=1e-12)

    def test_degenerate_bounds(self):
        with pytest.raises(ValueError):
            approximation_ratio(0.0, 1.0, 1.0)


class TestTrajectory:
    def test_max_steps_zero_records_initial_energy_only(self):
        record = run_trajectory(tiny_config(max_steps=0), seed=0)
        assert record.n_rows == 1
        assert record.steps == [0]
        assert math.isnan(record.grad_norms[0])
        assert -1.0 <= record.energies[0] <= 1.0
        # block-diagonal init is the only charge; the free energy row adds nothing
        assert record.total_evals == 6 + 2

    def test_determinism(self):
        a = run_trajectory(tiny_config(), seed=1)
        b = run_trajectory(tiny_config(), seed=1)
        assert a.energies == b.energies
        assert a.evals == b.evals
        np.testing.assert_array_equal(a.best_params, b.best_params)

    def test_rows_and_accounting_closed_form(self):
        config = tiny_config(max_steps=10)
        record = run_trajectory(config, seed=2)
        n = 6
        init = n + 2  # block-diagonal metric: n_params + n_layers
        assert record.n_rows == 10
        assert record.evals == [init + (k + 1) * (1 + 2 * n) for k in range(10)]
        assert record.total_evals == init + 10 * (1 + 2 * n)
        assert record.best_energy == min(record.energies)

    def test_gamma_short_circuit_converges_immediately(self):
        config = tiny_config(
            optimizer=OptimizerSettings(name="qbang", metric_init="identity", gamma=math.inf)
        )
        record = run_trajectory(config, seed=0)
        assert record.converged
        assert record.n_rows == 0
        assert record.total_evals == 0

    def test_step_failure_marks_failed(self, monkeypatch):
        from vqaopt import optimizers as opt_module
        from vqaopt.optimizers import FilterBreakdownError

        def boom(metric, grad):
            raise FilterBreakdownError("forced")

        monkeypatch.setattr(opt_module, "filter_update", boom)
        record = run_trajectory(tiny_config(), seed=0)
        assert record.failed
        assert "forced" in record.failure_reason
        assert not record.converged


class TestExperiment:
    def test_single_seed_variance_zero(self):
        aggregate = run_experiment(tiny_config(n_seeds=1))
        np.testing.assert_array_equal(aggregate.energy_var, np.zeros(8))
        assert aggregate.n_failures == 0

    def test_same_seeds_share_initializations_across_optimizers(self):
        config_a = tiny_config(optimizer=OptimizerSettings(name="adam"))
        config_b = tiny_config(optimizer=OptimizerSettings(name="qng"))
        agg_a = run_experiment(config_a)
        agg_b = run_experiment(config_b)
        for ra, rb in zip(agg_a.records, agg_b.records):
            assert ra.energies[0] == rb.energies[0]  # same theta_0, same first energy

    def test_thread_pool_matches_sequential(self):
        seq = run_experiment(tiny_config())
        par = run_experiment(tiny_config(n_workers=3))
        for a, b in zip(seq.records, par.records):
            assert a.seed == b.seed
            assert a.energies == b.energies
            assert a.evals == b.evals

    def test_all_seeds_failed_raises(self, monkeypatch):
        from vqaopt import harness as harness_module

        class _Boom:
            def initialize(self, *a, **k):
                raise harness_module.MetricError("forced")

            def step(self, *a, **k):  # pragma: no cover
                raise AssertionError

        monkeypatch.setattr(harness_module, "make_runner", lambda settings: _Boom())
        with pytest.raises(ExperimentError, match="all seeds failed"):
            run_experiment(tiny_config())

    def test_summary_fields(self):
        aggregate = run_experiment(tiny_config())
        summary = aggregate.summary()
        assert summary["n_seeds"] == 3
        assert {"mean_best_energy", "mean_best_ratio", "reach_fraction"} <= set(summary)


class TestEvalsToRatio:
    def _record(self, energies, evals, bounds=(-1.0, 1.0)):
        from vqaopt.harness import TrajectoryRecord

        return TrajectoryRecord(
            seed=0,
            steps=list(range(len(energies))),
            evals=list(evals),
            energies=list(energies),
            grad_norms=[0.0] * len(energies),
            update_norms=[0.0] * len(energies),
            best_energy=min(energies) if energies else math.inf,
            best_params=None,
            converged=False,
            failed=False,
            failure_reason=None,
            total_evals=evals[-1] if evals else 0,
            exact_bounds=bounds,
        )

    def test_starting_at_threshold_returns_first_evals(self):
        record = self._record([-1.0, -0.9], [5, 10])
        assert evals_to_ratio(record, 0.99) == 5

    def test_never_reaching_returns_none(self):
        record = self._record([0.5, 0.4], [5, 10])
        assert evals_to_ratio(record, 0.99) is None

    def test_running_best_is_monotone(self):
        record = self._record([-1.0, 0.9], [5, 10])
        assert evals_to_ratio(record, 0.99) == 5

    def test_threshold_monotonicity(self):
        record = self._record([0.0, -0.5, -0.8, -1.0], [1, 2, 3, 4])
        previous = None
        for threshold in (0.99, 0.9, 0.75, 0.5):
            count = evals_to_ratio(record, threshold)
            assert count is not None
            if previous is not None:
                assert count <= previous
            previous = count

    def test_invalid_threshold(self):
        with pytest.raises(ValueError):
            evals_to_ratio(self._record([0.0], [1]), 0.0)

    def test_aggregate_mean_and_fraction(self):
        aggregate = run_experiment(tiny_config(max_steps=3))
        mean_evals, fraction = evals_to_ratio(aggregate, threshold=1e-9)
        assert mean_evals is not None and mean_evals > 0
        assert fraction == 1.0
        never, frac0 = evals_to_ratio(aggregate, threshold=1.0)
        assert never is None or never > 0
        assert 0.0 <= frac0 <= 1.0


class TestSweep:
    def test_ratio_curve_tracks_mean_energy(self):
        from vqaopt.harness import approximation_ratio, ratio_curve

        aggregate = run_experiment(tiny_config(max_steps=12))
        steps, ratios = ratio_curve(aggregate)
        assert len(steps) == 12
        e_min, e_max = aggregate.exact_bounds
        want = [approximation_ratio(e, e_min, e_max) for e in aggregate.energy_mean]
        np.testing.assert_allclose(ratios, want, atol=1e-14)
        assert ((ratios >= -1e-12) & (ratios <= 1.0 + 1e-12)).all()

    def test_single_eta_equals_plain_run(self):
        config = tiny_config(max_steps=4)
        swept = sweep_step_size(config, [0.01])
        direct = run_experiment(config)
        np.testing.assert_array_equal(swept[0.01].energy_mean, direct.energy_mean)

    def test_empty_eta_list_rejected(self):
        with pytest.raises(ValueError):
            sweep_step_size(tiny_config(), [])


class TestCsv:
    def test_header_only_for_empty_record(self, tmp_path):
        record = run_trajectory(
            tiny_config(
                optimizer=OptimizerSettings(name="qbang", metric_init="identity", gamma=math.inf)
            ),
            seed=0,
        )
        path = tmp_path / "empty.csv"
        emit_csv(record, path)
        assert path.read_text().strip() == "seed,step,evals,energy,grad_norm,update_norm"

    def test_one_row_record_two_lines(self, tmp_path):
        record = run_trajectory(tiny_config(max_steps=1), seed=0)
        path = tmp_path / "one.csv"
        emit_csv(record, path)
        lines = path.read_text().strip().splitlines()
        assert len(lines) == 2

    def test_round_trip_floats(self, tmp_path):
        record = run_trajectory(tiny_config(max_steps=5), seed=1)
        path = tmp_path / "trajectory.csv"
        emit_csv(record, path)
        with path.open() as fh:
            rows = list(csv.DictReader(fh))
        assert [int(r["evals"]) for r in rows] == record.evals
        assert [float(r["energy"]) for r in rows] == record.energies

    def test_aggregate_columns(self, tmp_path):
        aggregate = run_experiment(tiny_config(max_steps=3))
        path = tmp_path / "aggregate.csv"
        emit_csv(aggregate, path)
        with path.open() as fh:
            reader = csv.reader(fh)
            header = next(reader)
            body = list(reader)
        assert header == ["step", "evals_mean", "energy_mean", "energy_var", "n_seeds"]
        assert len(body) == 3
        assert all(row[4] == "3" for row in body)


class TestConfigParsing:
    GOOD = """
    # flat key = value format
    problem = barren_plateau
    n_qubits = 4
    n_layers = 2
    axis_seed = 7
    optimizer = qbang
    eta = 0.02
    eps0 = 0.1
    metric_init = block_diagonal
    step_scaling = true
    n_seeds = 2
    max_steps = 5
    init_mode = random_uniform
    out_dir = /tmp/results
    """

    def test_full_round_trip(self):
        config = parse_config(self.GOOD)
        assert config.problem.kind == "barren_plateau"
        assert config.problem.n_qubits == 4
        assert config.optimizer.eta == 0.02
        assert config.optimizer.step_scaling is True
        assert config.n_seeds == 2
        assert config.out_dir == "/tmp/results"

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config("problem = barren_plateau\noptimizer = adam\nlearning_rate = 1\n")

    def test_duplicate_key(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config("problem = barren_plateau\nproblem = qaoa\noptimizer = adam\n")

    def test_missing_required(self):
        with pytest.raises(ConfigError, match="problem"):
            parse_config("optimizer = adam\n")

    def test_bad_value_type(self):
        with pytest.raises(ConfigError, match="eta"):
            parse_config("problem = barren_plateau\noptimizer = adam\neta = fast\n")

    def test_bad_bool(self):
        with pytest.raises(ConfigError):
            parse_config("problem = barren_plateau\noptimizer = adam\nstep_scaling = yes\n")

    def test_bad_optimizer_name(self):
        with pytest.raises(ConfigError):
            parse_config("problem = barren_plateau\noptimizer = sgd\n")

    def test_qaoa_requires_graph(self):
        with pytest.raises(ConfigError, match="graph"):
            parse_config("problem = qaoa\noptimizer = adam\n")

    def test_load_config_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "nope.txt")

    def test_observables_parsing(self, tmp_path):
        text = (
            "problem = chemistry\nhamiltonian = h.txt\n"
            "observables = number:n.txt,sz:sz.txt\noptimizer = adam\n"
        )
        config = parse_config(text)
        assert config.problem.observable_paths == {"number": "n.txt", "sz": "sz.txt"}


class TestBuildInstance:
    def test_qaoa_from_graph_file(self, tmp_path):
        from vqaopt.problems import random_graph, write_graph

        path = tmp_path / "graph.txt"
        write_graph(random_graph(5, 0.5, seed=0), path)
        settings = ProblemSettings(kind="qaoa", n_layers=2, graph_path=str(path))
        instance = build_instance(settings)
        assert instance.circuit.n_qubits == 5
        assert instance.circuit.n_params == 4
