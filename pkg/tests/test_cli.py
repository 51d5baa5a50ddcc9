import json
import subprocess
import sys

import pytest

from signedgame.cli import inspect_document, main, simulate_document
from signedgame.game import Variant
from signedgame.network import SignedNetwork, all_negative, deserialize, serialize
from signedgame.oracle import paper_counterexample


@pytest.fixture
def net_file(tmp_path):
    def write(G, name="g.json"):
        path = tmp_path / name
        path.write_text(serialize(G))
        return str(path)
    return write


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["--preset", "paper-counterexample"], paper_counterexample()),
        (["--preset", "one-triad-example"], SignedNetwork(3, [1, 1, -1])),
        (["--preset", "all-negative", "--n", "5"], all_negative(5)),
    ],
)
def test_gen_presets(argv, expected, capsys):
    assert main(["gen", *argv]) == 0
    assert deserialize(capsys.readouterr().out) == expected


def test_gen_random_with_seed_is_reproducible(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["gen", "--random", "--n", "8", "--seed", "5", "--out", str(path)]) == 0
    assert a.read_text() == b.read_text()
    assert deserialize(a.read_text()).n == 8


def test_gen_random_prints_generated_seed(capsys):
    assert main(["gen", "--random", "--n", "4"]) == 0
    err = capsys.readouterr().err
    assert err.startswith("seed: ")


@pytest.mark.parametrize(
    "argv",
    [["gen", "--preset", "all-positive"], ["gen", "--random"], ["gen", "--random", "--n", "5", "--p", "1"],
     ["gen", "--preset", "paper-counterexample", "--n", "7"], ["gen", "--preset", "all-positive", "--n", "2"]],
)
def test_gen_usage_errors(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["verify"])
    assert exc.value.code == 2


def test_inspect_json_matches_library(net_file, capsys):
    G = paper_counterexample()
    assert main(["inspect", "--network", net_file(G), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc == json.loads(json.dumps(inspect_document(G, Variant.CLUSTERING)))
    assert doc["nash"] and not doc["clustering_balanced"]
    assert doc["clusters"] is None


def test_inspect_text(net_file, capsys):
    assert main(["inspect", "--network", net_file(SignedNetwork(3, [1, 1, -1]))]) == 0
    out = capsys.readouterr().out
    assert "nash: False" in out and "dissonance: 1" in out


def test_simulate_matches_library(net_file, capsys):
    G = SignedNetwork(6, [1, -1] * 7 + [1])
    assert main(["simulate", "--network", net_file(G), "--seed", "9"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc == json.loads(json.dumps(simulate_document(G, 9, Variant.CLUSTERING, None)))
    assert doc["absorbed"]
    assert doc["flips"] == len(doc["dissonance_trace"]) - 1


def test_simulate_with_weights(net_file, tmp_path, capsys):
    G = SignedNetwork(3, [1, 1, -1])
    weights = tmp_path / "w.json"
    weights.write_text(json.dumps({"n": 3, "weights": [[0, 1, 1.0], [0, 2, 2.0], [1, 2, 0.5]]}))
    assert main(["simulate", "--network", net_file(G), "--seed", "1", "--weights", str(weights)]) == 0
    assert json.loads(capsys.readouterr().out)["absorbed"]


@pytest.mark.parametrize(
    "doc",
    [{"n": 3, "weights": [[0, 1, 1.0], [0, 2, 2.0]]},
     {"n": 3, "weights": [[0, 1, 1.0], [0, 2, 2.0], [1, 2, 0.0]]},
     {"n": 4, "weights": []}],
)
def test_simulate_rejects_bad_weights(doc, net_file, tmp_path):
    weights = tmp_path / "w.json"
    weights.write_text(json.dumps(doc))
    G = SignedNetwork(3, [1, 1, -1])
    assert main(["simulate", "--network", net_file(G), "--seed", "1", "--weights", str(weights)]) == 2


def test_simulate_missing_file(tmp_path, capsys):
    assert main(["simulate", "--network", str(tmp_path / "nope.json"), "--seed", "1"]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_simulate_malformed_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3, "edges": [[0, 1, 2], [0, 2, 1], [1, 2, 1]]}')
    assert main(["simulate", "--network", str(bad), "--seed", "1"]) == 2


def test_verify_exit_codes(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert main(["verify", "--n-max", "5", "--jobs", "1", "--json", str(out)]) == 0
    assert capsys.readouterr().out.rstrip().endswith("RESULT: PASS")
    assert json.loads(out.read_text())["passed"] is True
    assert main(["verify", "--n-max", "7", "--jobs", "1"]) == 2


def test_experiment_csv_writes_config_sidecar(tmp_path):
    out = tmp_path / "r.csv"
    argv = ["experiment", "--n-min", "3", "--n-max", "5", "--trials", "20", "--seed", "4",
            "--format", "csv", "--out", str(out), "--jobs", "1"]
    assert main(argv) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 4
    cfg = json.loads((tmp_path / "r.csv.config.json").read_text())
    assert cfg["master_seed"] == 4 and cfg["trials"] == 20


def test_experiment_bad_range(capsys):
    assert main(["experiment", "--n-min", "9", "--n-max", "4", "--seed", "1"]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "signedgame", "gen", "--preset", "one-triad-example"],
                          capture_output=True, text=True, check=True)
    assert deserialize(proc.stdout) == SignedNetwork(3, [1, 1, -1])
