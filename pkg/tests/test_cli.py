import csv

from vqaopt.cli import main


def test_gen_graph_and_bounds(tmp_path, capsys):
    graph_path = tmp_path / "graph.txt"
    assert main(["gen-graph", "--vertices", "6", "--edge-prob", "0.5", "--seed", "3", "--out", str(graph_path)]) == 0
    assert graph_path.exists()

    ham_path = tmp_path / "ham.txt"
    ham_path.write_text("-0.5 II\n0.5 ZZ\n")
    assert main(["bounds", str(ham_path)]) == 0
    out = capsys.readouterr().out
    assert "E_min -1.0" in out
    assert "E_max 0.0" in out


def test_run_writes_csvs(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text(
        "problem = barren_plateau\nn_qubits = 3\nn_layers = 1\naxis_seed = 2\n"
        "optimizer = adam\neta = 0.05\nn_seeds = 2\nmax_steps = 4\n"
        f"out_dir = {tmp_path / 'out'}\n"
    )
    assert main(["run", str(config)]) == 0
    with (tmp_path / "out" / "trajectories.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2 * 4
    assert (tmp_path / "out" / "aggregate.csv").exists()
    assert "mean best energy" in capsys.readouterr().out


def test_sweep_writes_per_eta_dirs(tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text(
        "problem = barren_plateau\nn_qubits = 2\nn_layers = 1\n"
        "optimizer = qbroyden\nmetric_init = identity\nn_seeds = 1\nmax_steps = 2\n"
        f"out_dir = {tmp_path / 'sweep'}\n"
    )
    assert main(["sweep", str(config), "--etas", "0.01,0.1"]) == 0
    assert (tmp_path / "sweep" / "eta_0.01" / "aggregate.csv").exists()
    assert (tmp_path / "sweep" / "eta_0.1" / "trajectories.csv").exists()
    ratio_lines = (tmp_path / "sweep" / "eta_0.01" / "ratio_curve.csv").read_text().splitlines()
    assert ratio_lines[0] == "step,ratio_mean"
    assert len(ratio_lines) == 3


def test_exit_code_one_on_config_error(tmp_path, capsys):
    config = tmp_path / "bad.cfg"
    config.write_text("problem = barren_plateau\noptimizer = adam\nbogus = 1\n")
    assert main(["run", str(config)]) == 1
    assert "config error" in capsys.readouterr().err


def test_exit_code_one_on_usage_error(capsys):
    assert main(["run"]) == 1


def test_exit_code_two_on_runtime_failure(tmp_path, capsys):
    config = tmp_path / "missing-graph.cfg"
    config.write_text(
        "problem = qaoa\ngraph = /nonexistent/graph.txt\noptimizer = adam\n"
        "n_seeds = 1\nmax_steps = 1\n"
    )
    assert main(["run", str(config)]) == 2
    assert "error" in capsys.readouterr().err
