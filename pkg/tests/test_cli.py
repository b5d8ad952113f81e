import json
import subprocess
import sys

import pytest

from plantsteal.cli import main

GOOD_INSTANCE = {
    "n": 2,
    "m": 4,
    "valuations": [[10, 9, 1, 1], [10, 9, 1, 1]],
    "predictions": {"kind": "ordering", "orderings": [[3, 2, 1, 0], [3, 2, 1, 0]]},
}


@pytest.fixture
def instance_file(tmp_path):
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(GOOD_INSTANCE))
    return str(path)


def run_cli(args):
    return main(args)


def test_mms_subcommand(instance_file, capsys):
    assert run_cli(["mms", instance_file, "--k", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["mu"] == "10"
    assert out["method"] == "exact"


def test_mms_k1_total(instance_file, capsys):
    assert run_cli(["mms", instance_file, "--k", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["mu"] == "21"


def test_mms_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert run_cli(["mms", str(bad), "--k", "2"]) == 2


def test_mms_cap_exceeded(tmp_path, capsys):
    inst = {"valuations": [[1] * 25]}
    path = tmp_path / "wide.json"
    path.write_text(json.dumps(inst))
    assert run_cli(["mms", str(path), "--k", "2"]) == 3


def test_allocate_matches_worked_example(instance_file, capsys):
    assert run_cli(["allocate", instance_file, "--mechanism", "B-RR-PAS"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["bundles"] == [[0, 2], [1, 3]]
    assert out["trace"]["initial"] == [[1, 3], [0, 2]]
    assert out["trace"]["planted"] == [3, 2]
    assert out["trace"]["stolen"] == [0, 1]
    assert out["values"] == ["11", "10"]


def test_allocate_unknown_mechanism(instance_file, capsys):
    assert run_cli(["allocate", instance_file, "--mechanism", "Bogus"]) == 4


def test_allocate_wrong_agent_count(tmp_path, capsys):
    inst = {"valuations": [[1, 2], [2, 1], [1, 1]],
            "predictions": {"kind": "values", "values": [[1, 2], [2, 1], [1, 1]]}}
    path = tmp_path / "three.json"
    path.write_text(json.dumps(inst))
    assert run_cli(["allocate", str(path), "--mechanism", "B-RR-PAS"]) == 4


def test_allocate_n_agent(tmp_path, capsys):
    inst = {"valuations": [[1] * 9] * 3,
            "predictions": {"kind": "values", "values": [[1] * 9] * 3}}
    path = tmp_path / "n.json"
    path.write_text(json.dumps(inst))
    assert run_cli(["allocate", str(path), "--mechanism", "n-agent"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["trace"]["tentative"] == {"0": [0, 5, 8], "1": [1, 4, 7], "2": [2, 3, 6]}
    assert sorted(sum(out["bundles"], [])) == list(range(9))


def test_verify_subcommand_passes(capsys):
    assert run_cli(["verify", "--property", "consistency", "--mechanism", "B-RR-PAS",
                    "--budget", "10", "--seed", "4"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["passed"] is True


def test_noise_subcommand_exact_distance(capsys):
    assert run_cli(["noise", "--m", "12", "--d", "17", "--seed", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["check"] == 17


def test_noise_rejects_overlarge_distance(capsys):
    assert run_cli(["noise", "--m", "4", "--d", "100"]) == 2


def test_experiment_writes_deterministic_csv(tmp_path, capsys):
    args = ["experiment", "--out", str(tmp_path / "a.csv"), "--profiles", "2",
            "--predictions", "2", "--distances", "1", "5", "--modes", "correlated",
            "--seed", "12"]
    assert run_cli(args) == 0
    args2 = ["experiment", "--out", str(tmp_path / "b.csv"), "--profiles", "2",
             "--predictions", "2", "--distances", "1", "5", "--modes", "correlated",
             "--seed", "12"]
    assert run_cli(args2) == 0
    a = (tmp_path / "a.csv").read_bytes()
    b = (tmp_path / "b.csv").read_bytes()
    assert a == b
    header = a.decode().splitlines()[0]
    assert header == "mechanism,d,epsilon,mode,trials,success_rate,mean_min_ratio"
    # 5 mechanisms x 2 distances x 3 epsilons x 1 mode rows
    assert len(a.decode().splitlines()) == 1 + 5 * 2 * 3


def test_console_script_entry_point(instance_file):
    proc = subprocess.run([sys.executable, "-m", "plantsteal.cli", "mms",
                           instance_file, "--k", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["mu"] == "10"
