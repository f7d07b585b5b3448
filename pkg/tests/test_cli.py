import numpy as np

from stabdec import cli, lab, qnn


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_codes_list(capsys):
    code, out, _ = run(capsys, "codes", "list")
    assert code == 0
    assert "five_qubit: [[5,1,3]]" in out
    assert "eleven_qubit: [[11,1,5]]" in out


def test_codes_audit(capsys):
    code, out, _ = run(capsys, "codes", "audit", "five_qubit")
    assert code == 0
    assert "distance_audit: pass" in out


def test_codes_audit_unknown(capsys):
    code, _, err = run(capsys, "codes", "audit", "bogus")
    assert code == 2
    assert err.startswith("error:")


def write_config(tmp_path, **extra):
    base = {
        "code": "five_qubit", "decoder": "naive", "basis": "X",
        "perturbation": "gue", "lambdas": "0.01 0.1",
        "realizations": "1", "samples": "30", "seed": "5",
    }
    base.update({k: str(v) for k, v in extra.items()})
    path = tmp_path / "sweep.cfg"
    path.write_text("".join(f"{k} = {v}\n" for k, v in base.items()))
    return path


def test_sweep_fit_plot_pipeline(tmp_path, capsys):
    cfg = write_config(tmp_path)
    csv = tmp_path / "out.csv"
    code, out, _ = run(capsys, "sweep", str(cfg), "--out", str(csv))
    assert code == 0 and csv.exists()
    code, out, _ = run(capsys, "fit", str(csv), "--decoder", "naive", "--basis", "X")
    assert code == 0 and out.startswith("slope=")
    svg = tmp_path / "out.svg"
    code, out, _ = run(capsys, "plot", str(csv), "-o", str(svg))
    assert code == 0 and svg.read_text().startswith("<svg")


def test_sweep_seed_override(tmp_path, capsys):
    cfg = write_config(tmp_path)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "sweep", str(cfg), "--out", str(a))
    run(capsys, "sweep", str(cfg), "--seed", "99", "--out", str(b))
    assert a.read_bytes() != b.read_bytes()


def test_collapse_command(tmp_path, capsys):
    cfg = write_config(tmp_path, decoder="qec")
    csv = tmp_path / "q.csv"
    run(capsys, "sweep", str(cfg), "--out", str(csv))
    code, out, _ = run(capsys, "collapse", str(csv))
    assert code == 0
    assert "divisor=4" in out  # d + 1 for the distance-3 code


def test_bad_config_is_machine_readable_error(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("code = five_qubit\nnot_a_key = 1\n")
    code, _, err = run(capsys, "sweep", str(bad))
    assert code == 2
    assert err.startswith("error:")


def test_qnn_train_and_eval(tmp_path, capsys):
    cfg = write_config(tmp_path, decoder="qnn", lambdas="0.3",
                       perturbation="uniform_xz", samples="40",
                       train_samples="30", max_iterations="1500",
                       restarts="1", qnn_depth="3")
    model_path = tmp_path / "model.txt"
    code, out, _ = run(capsys, "qnn", "train", str(cfg), "--out", str(model_path))
    assert code == 0 and model_path.exists()
    assert "final_loss=" in out
    code, out, _ = run(capsys, "qnn", "eval", str(model_path), str(cfg))
    assert code == 0
    eps = float(out.split("epsilon=")[1].split()[0])
    assert eps < 1e-6  # noiseless training should generalize


def test_model_file_round_trip(tmp_path, capsys):
    cfg = write_config(tmp_path, decoder="qnn", lambdas="0.3",
                       perturbation="uniform_xz", samples="40",
                       train_samples="30", max_iterations="300",
                       restarts="1", qnn_depth="1")
    model_path = tmp_path / "model.txt"
    run(capsys, "qnn", "train", str(cfg), "--out", str(model_path))
    model = qnn.model_from_text(model_path.read_text())
    again = qnn.model_from_text(qnn.model_to_text(model))
    assert np.array_equal(model.params, again.params)
