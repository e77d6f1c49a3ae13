import json

import pytest

import plugins.policies.skipscan_policy as skipscan_policy
from app.arbiter_enums import EventKind
from app.main import (
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    EXIT_TRACE_ERROR,
    EXIT_VERIFY_FAILED,
    main,
)
from plugins.base_policy import Arbitration


def json_lines(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]

################################################################################
# simulate

def test_simulate_saturated(capsys):
    assert main(["simulate", "--ports", "4", "--cycles", "400"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["grants_per_port"] == [100, 100, 100, 100]
    assert report["max_wait_per_port"] == [3, 3, 3, 3]
    assert report["jain_index"] == pytest.approx(1.0)


def test_simulate_is_byte_identical_for_a_seed(tmp_path):
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / f"{name}.json"
        grants = tmp_path / f"{name}.csv"
        argv = [
            "simulate", "--ports", "5", "--workload", "bernoulli",
            "--p", "0.4", "--seed", "7", "--slice", "3", "--cycles", "300",
            "--out", str(out), "--grants-csv", str(grants),
        ]
        assert main(argv) == EXIT_OK
        outputs.append((out.read_bytes(), grants.read_bytes()))
    assert outputs[0] == outputs[1]


def test_seed_from_environment(monkeypatch, tmp_path):
    argv = ["simulate", "--workload", "onoff", "--cycles", "50"]
    monkeypatch.setenv("RR_ARBITER_SEED", "3")
    assert main(argv + ["--out", str(tmp_path / "env.json")]) == EXIT_OK
    assert main(argv + ["--seed", "3", "--out", str(tmp_path / "flag.json")]) == EXIT_OK
    assert (tmp_path / "env.json").read_bytes() == (tmp_path / "flag.json").read_bytes()

    monkeypatch.setenv("RR_ARBITER_SEED", "three")
    assert main(argv) == EXIT_CONFIG_ERROR


def test_simulate_trace(write_csv, capsys):
    path = write_csv("cycle,reset,req0,req1,req2\n0,0,0,0,1\n1,0,0,0,1\n2,0,0,0,1\n")
    argv = ["simulate", "--trace", path, "--policy", "tokenrotate"]
    assert main(argv) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["turn_misses"] == 2
    assert report["grants_per_port"] == [0, 0, 1]


def test_simulate_empty_trace(write_csv, capsys):
    path = write_csv("cycle,reset,req0,req1,req2\n")
    assert main(["simulate", "--trace", path]) == EXIT_CONFIG_ERROR
    capsys.readouterr()
    assert main(["simulate", "--trace", path, "--ports", "3"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["total_cycles"] == 0
    assert report["jain_index"] == 1.0


@pytest.mark.parametrize("argv", [
    ["simulate", "--ports", "0"],
    ["simulate", "--slice", "0"],
    ["simulate", "--workload", "bernoulli", "--p", "2"],
    ["simulate", "--persistent", "9", "--ports", "4"],
    ["verify", "--max-ports", "11"],
    ["verify", "--max-ports", "0"],
    ["ack", "--tokens", "0011", "--requests", "110"],
])
def test_configuration_errors_exit_2(argv):
    assert main(argv) == EXIT_CONFIG_ERROR


def test_trace_port_mismatch_exits_2(write_csv):
    path = write_csv("cycle,reset,req0,req1\n0,0,1,1\n")
    assert main(["simulate", "--trace", path, "--ports", "3"]) == EXIT_CONFIG_ERROR


@pytest.mark.parametrize("text", [
    "cycle,reset,req0,req1\n0,0,1,x\n",
    "cycle,reset,req0,req1\n0,0,1\n",
    "time,reset,req0\n0,0,1\n",
])
def test_bad_trace_exits_3(write_csv, text):
    assert main(["simulate", "--trace", write_csv(text)]) == EXIT_TRACE_ERROR


@pytest.mark.parametrize("data", [
    b"cycle,reset,req0,req1\n0,0,1,\xff\n",
    b"cycle,reset,req0,req1\n0,0,1,\x00\n",
])
def test_undecodable_trace_exits_3(tmp_path, data):
    path = tmp_path / "trace.csv"
    path.write_bytes(data)
    assert main(["simulate", "--trace", str(path)]) == EXIT_TRACE_ERROR


def test_negative_cycles_exits_2(write_csv, capsys):
    path = write_csv("cycle,reset,req0\n0,0,1\n1,0,1\n2,0,0\n")
    assert main(["simulate", "--trace", path, "--cycles", "-1"]) == EXIT_CONFIG_ERROR
    assert main(["simulate", "--workload", "bernoulli", "--cycles", "-1"]) == EXIT_CONFIG_ERROR
    assert capsys.readouterr().out == ""


def test_trace_cycles_truncates(write_csv, capsys):
    path = write_csv("cycle,reset,req0\n0,0,1\n1,0,1\n2,0,0\n")
    assert main(["simulate", "--trace", path, "--cycles", "2"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["total_cycles"] == 2


def test_missing_trace_file(tmp_path):
    argv = ["simulate", "--trace", str(tmp_path / "nope.csv")]
    assert main(argv) == EXIT_CONFIG_ERROR


def test_argparse_rejects_unknown_policy():
    with pytest.raises(SystemExit) as excinfo:
        main(["simulate", "--policy", "lottery"])
    assert excinfo.value.code == 2

################################################################################
# depth, verify, ack

def test_depth(capsys, tmp_path):
    netlists = tmp_path / "netlists"
    argv = ["depth", "--ports", "4,12", "--netlist-dir", str(netlists)]
    assert main(argv) == EXIT_OK
    assert json_lines(capsys.readouterr().out) == [
        {"n": 4, "chain_depth": 12, "tree_depth": 6},
        {"n": 12, "chain_depth": 36, "tree_depth": 8},
    ]
    assert sorted(p.name for p in netlists.iterdir()) == [
        "chain_12.net", "chain_4.net", "tree_12.net", "tree_4.net"
    ]


def test_verify_passes(capsys):
    assert main(["verify", "--max-ports", "4", "--traces", "20", "--jobs", "2"]) == EXIT_OK
    assert capsys.readouterr().out == ""


def test_verify_reports_injected_bug(monkeypatch, capsys):
    def ignore_token(self, token_index, requests):
        ports = requests.ports()
        if not ports:
            return Arbitration(None, EventKind.NONE, None, token_index)
        return Arbitration(ports[0], EventKind.TURN_HIT, ports[0], ports[0])

    monkeypatch.setattr(skipscan_policy.Policy, "arbitrate", ignore_token)
    assert main(["verify", "--max-ports", "3", "--traces", "2"]) == EXIT_VERIFY_FAILED
    failures = json_lines(capsys.readouterr().out)
    assert failures
    assert all(f["suite"] == "scan" for f in failures)


def test_ack_default_columns(capsys):
    assert main(["ack"]) == EXIT_OK
    rows = json_lines(capsys.readouterr().out)
    assert [row["ack"] for row in rows] == [False, False, False, True, False]
    assert [row["event"] for row in rows] == [
        "turn_miss", "turn_miss", "turn_miss", "turn_hit", "turn_miss"
    ]
    assert rows[3]["message"] == "Access Permitted on Port No. 3"

################################################################################
# run history

def test_simulate_records_runs(tmp_path, capsys):
    db = f"sqlite:///{tmp_path / 'runs.db'}"
    assert main(["simulate", "--ports", "3", "--cycles", "30", "--db", db]) == EXIT_OK
    argv = ["simulate", "--ports", "3", "--cycles", "30", "--db", db,
            "--policy", "tokenrotate", "--slice", "unlimited"]
    assert main(argv) == EXIT_OK
    capsys.readouterr()

    assert main(["runs", "--db", db]) == EXIT_OK
    runs = json_lines(capsys.readouterr().out)
    assert [run["policy"] for run in runs] == ["skipscan", "tokenrotate"]
    assert runs[1]["time_slice"] is None
    assert runs[0]["grants_per_port"] == [10, 10, 10]

    assert main(["runs", "--db", db, "--policy", "tokenrotate"]) == EXIT_OK
    assert len(json_lines(capsys.readouterr().out)) == 1


def test_runs_needs_a_database(monkeypatch):
    monkeypatch.setattr("config.settings.DATABASE_URI", None)
    assert main(["runs"]) == EXIT_CONFIG_ERROR
