import json
import subprocess
import sys

import pytest

from perturbtree import io
from perturbtree.cli import main
from perturbtree.generators import complete_graph, cycle_graph, generate_tree


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def instance(tmp_path, capsys):
    n = 150
    paths = {k: tmp_path / f"{k}.txt" for k in ("tree", "g", "galpha")}
    assert run(capsys, "generate", "tree", "--n", n, "--family", "random", "--seed", 1, "--out", paths["tree"])[0] == 0
    assert run(capsys, "generate", "binomial", "--n", n, "--p", 32 / n, "--prune-D", 32, "--seed", 2, "--out", paths["g"])[0] == 0
    assert run(capsys, "generate", "dense", "--n", n, "--alpha", 0.3, "--out", paths["galpha"])[0] == 0
    return paths


def test_embed_and_verify(instance, tmp_path, capsys):
    emb_path, trace_path = tmp_path / "emb.txt", tmp_path / "trace.json"
    code, _, err = run(
        capsys, "embed", "--tree", instance["tree"], "--g", instance["g"], "--galpha", instance["galpha"],
        "--delta", 3, "--beta", 0.05, "--eps-prime", 0.05, "--seed", 3, "--out", emb_path, "--trace", trace_path,
    )
    assert code == 0, err
    assert json.loads(trace_path.read_text())["n"] == 150
    code, out, _ = run(capsys, "verify-embedding", "--tree", instance["tree"], "--host", instance["g"],
                       "--galpha", instance["galpha"], "--embedding", emb_path)
    assert (code, out.strip()) == (0, "valid")
    # without G_alpha most tree edges are missing from the host
    code, out, _ = run(capsys, "verify-embedding", "--tree", instance["tree"], "--host", instance["g"], "--embedding", emb_path)
    assert code == 1 and out.startswith("invalid:")


def test_embed_failure_exit_code(instance, tmp_path, capsys):
    empty = tmp_path / "empty.txt"
    io.write_graph(io.parse_graph("150 0\n"), empty)
    code, _, err = run(capsys, "embed", "--tree", instance["tree"], "--g", empty, "--galpha", instance["galpha"],
                       "--delta", 3, "--beta", 0.05, "--eps-prime", 0.05)
    assert code == 1 and "phase1" in err


def test_check_expansion(tmp_path, capsys):
    path = tmp_path / "k8.txt"
    io.write_graph(complete_graph(8), path)
    code, out, _ = run(capsys, "check-expansion", path, "--mode", "exact", "--p", 1, "--eps", 0.3, "--C", 2)
    assert code == 0 and out.startswith("verdict pass")
    io.write_graph(cycle_graph(8), path)
    code, out, _ = run(capsys, "check-expansion", path, "--mode", "spectral", "--p", 0.25)
    assert "mode spectral" in out
    io.write_graph(io.parse_graph("3 1\n0 1\n"), path)
    code, out, _ = run(capsys, "check-expansion", path, "--mode", "spectral", "--p", 0.5)
    assert code == 1 and "not" in out.lower()


def test_tree_commands(tmp_path, capsys):
    path = tmp_path / "t.txt"
    io.write_tree(generate_tree(11, "path", 2, 0), path)
    code, out, _ = run(capsys, "star-centers", path)
    assert code == 0 and out.startswith("centers ")
    code, out, _ = run(capsys, "decompose", path, "--beta", 0.2, "--eps", 0.05, "--delta", 2)
    assert code == 0 and "cut_edge" in out
    code, _, err = run(capsys, "decompose", path, "--beta", 0.5, "--eps", 0.1, "--delta", 2)
    assert code == 2 and err.startswith("error:")


def test_enumerate_and_universality(tmp_path, capsys):
    code, out, _ = run(capsys, "enumerate-trees", "--n", 7, "--delta", 6, "--out", tmp_path / "trees")
    assert (code, out.strip()) == (0, "11")
    assert len(list((tmp_path / "trees").iterdir())) == 11
    host = tmp_path / "c7.txt"
    io.write_graph(cycle_graph(7), host)
    assert run(capsys, "universality", "--host", host, "--delta", 2)[0] == 0
    code, out, _ = run(capsys, "universality", "--host", host, "--delta", 3)
    assert code == 1 and out.strip().endswith("not universal")


def test_sweep_and_threshold(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 100, "D": 32, "seeds": 2, "beta": 0.05, "eps_prime": 0.05, "cert_trials": 0}))
    code, out, _ = run(capsys, "sweep", "--config", cfg, "--out", tmp_path / "sw")
    assert code == 0 and "2/2" in out
    assert (tmp_path / "sw" / "summary.csv").exists()
    code, out, _ = run(capsys, "threshold", "--config-slice", cfg, "--target-rate", 1.0, "--grid", 16, 32)
    assert code == 0 and "D_estimate" in out


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "perturbtree.cli", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "verify-embedding" in out.stdout
