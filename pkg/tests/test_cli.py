"""Harness behavior: determinism, exit codes, schemas, error pointers."""

import json
import subprocess
import sys

import pytest

from strat_ic import cli


def run(args, tmp_path, name="out.json"):
    """Invoke main() with --output and return (exit_code, bytes)."""
    path = tmp_path / name
    code = cli.main(list(args) + ["--output", str(path)])
    return code, path.read_bytes()


# -- determinism -----------------------------------------------------------

def test_proptest_bytes_reproducible(tmp_path):
    c1, b1 = run(["proptest", "--seed", "3"], tmp_path, "a.json")
    c2, b2 = run(["proptest", "--seed", "3"], tmp_path, "b.json")
    assert c1 == c2 == 0
    assert b1 == b2


def test_seed_changes_report(tmp_path):
    _, b1 = run(["proptest", "--seed", "0"], tmp_path, "a.json")
    _, b2 = run(["proptest", "--seed", "1"], tmp_path, "b.json")
    assert b1 != b2


def test_ih_bytes_reproducible(tmp_path):
    c1, b1 = run(["ih", "--example", "cone-s1"], tmp_path, "a.json")
    c2, b2 = run(["ih", "--example", "cone-s1"], tmp_path, "b.json")
    assert c1 == c2 == 0
    assert b1 == b2


def test_thread_env_does_not_change_bytes(tmp_path, monkeypatch):
    monkeypatch.setenv("STRAT_IC_THREADS", "1")
    _, b1 = run(["reproduce", "--example", "tor-correction"], tmp_path,
                "a.json")
    monkeypatch.setenv("STRAT_IC_THREADS", "3")
    _, b2 = run(["reproduce", "--example", "tor-correction"], tmp_path,
                "b.json")
    assert b1 == b2


# -- exit codes ------------------------------------------------------------

def test_exit_zero_on_pass(capsys):
    assert cli.main(["build", "--example", "s1"]) == 0
    capsys.readouterr()


def test_exit_two_on_unknown_example(capsys):
    assert cli.main(["build", "--example", "nope"]) == 2
    assert "nope" in capsys.readouterr().err


def test_exit_two_on_missing_input(capsys):
    assert cli.main(["build"]) == 2
    err = capsys.readouterr().err
    assert "--example" in err and "--input" in err


def test_exit_two_on_bad_perversity(capsys):
    assert cli.main(["ih", "--example", "cone-s1",
                     "--perversity", "sideways"]) == 2
    assert "/perversity" in capsys.readouterr().err


def test_mutation_sentinel_fails(tmp_path):
    code, payload = run(["proptest", "--seed", "0", "--mode", "mutate-cup"],
                        tmp_path)
    assert code == 1
    doc = json.loads(payload)
    bad = [r for r in doc["rows"] if r["verdict"] is False]
    assert bad, "flipped cup sign must trip graded commutativity"
    assert any("counterexample" in r["values"] for r in bad
               if isinstance(r["values"], dict))


# -- input validation ------------------------------------------------------

def test_bad_input_json_pointer(tmp_path, capsys):
    p = tmp_path / "space.json"
    p.write_text(json.dumps({
        "schema": 1, "n_vertices": 3,
        "simplices": [[0, 1], [1, "x"]],
        "filtration": {"1": []},
    }))
    assert cli.main(["build", "--input", str(p)]) == 2
    assert "/simplices/1/1" in capsys.readouterr().err


def test_unplaced_cell_rejected(tmp_path, capsys):
    p = tmp_path / "space.json"
    p.write_text(json.dumps({
        "schema": 1, "n_vertices": 3,
        "simplices": [[0, 1, 2]],
        "filtration": {"2": [[0, 1, 2]]},
    }))
    assert cli.main(["build", "--input", str(p)]) == 2
    assert "/filtration" in capsys.readouterr().err


def test_file_input_builds(tmp_path):
    p = tmp_path / "square.json"
    p.write_text(json.dumps({
        "schema": 1, "n_vertices": 4,
        "simplices": [[0, 1], [1, 2], [2, 3], [0, 3]],
        "filtration": {"1": [[0, 1], [1, 2], [2, 3], [0, 3],
                             [0], [1], [2], [3]]},
    }))
    code, payload = run(["build", "--input", str(p)], tmp_path)
    assert code == 0
    doc = json.loads(payload)
    betti = next(r for r in doc["rows"] if r["label"] == "betti")
    assert betti["values"] == [1, 1]


def test_config_rejects_two_sources():
    cfg = cli.RunConfig(command="build", example="s1", input_path="x.json")
    with pytest.raises(cli.BadInput):
        cfg.validate()


def test_mezzo_file_input(tmp_path, capsys):
    p = tmp_path / "mezzo.json"
    p.write_text(json.dumps({
        "schema": 1, "choices": {"7": [[1], [1]], "8": [[1], [-1]]}}))
    code, payload = run(["mezzo", "--example", "suspension-t2",
                         "--mezzo", str(p)], tmp_path)
    assert code == 0
    doc = json.loads(payload)
    assert row(doc, "local-contribution-7")["verdict"] is True
    assert row(doc, "local-contribution-8")["verdict"] is True
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": 1,
                               "choices": {"7": [[1], ["half"]]}}))
    assert cli.main(["mezzo", "--example", "suspension-t2",
                     "--mezzo", str(bad)]) == 2
    assert "/choices/7/1/0" in capsys.readouterr().err


# -- golden outputs --------------------------------------------------------

def row(doc, label):
    return next(r for r in doc["rows"] if r["label"] == label)


def test_golden_ih_cone_s1(tmp_path):
    code, payload = run(["ih", "--example", "cone-s1"], tmp_path)
    assert code == 0
    doc = json.loads(payload)
    assert doc["schema"] == 1
    assert row(doc, "ih-dims")["values"] == [1, 0, 0]
    assert row(doc, "support-level-0")["verdict"] is True


def test_golden_derham_stratumwise(tmp_path):
    code, payload = run(["derham", "--example", "cone-s1",
                         "--table", "stratumwise"], tmp_path)
    assert code == 0
    doc = json.loads(payload)
    assert row(doc, "stratumwise-total")["values"] == [2, 1, 1]
    labels = [r["label"] for r in doc["rows"]]
    assert "dimension-ladder" not in labels


def test_golden_kunneth_torus(tmp_path):
    code, payload = run(["kunneth", "--example", "product:circle,circle"],
                        tmp_path)
    assert code == 0
    doc = json.loads(payload)
    assert row(doc, "product")["values"] == [1, 2, 1]
    oracle = row(doc, "prediction")
    assert oracle["source"] == "oracle"
    assert oracle["verdict"] is True
    assert oracle["values"] == [1, 2, 1]


def test_perversity_long_names(tmp_path):
    _, low = run(["ih", "--example", "cone-t2",
                  "--perversity", "lower-middle"], tmp_path, "a.json")
    _, up = run(["ih", "--example", "cone-t2",
                 "--perversity", "upper-middle"], tmp_path, "b.json")
    assert row(json.loads(low), "ih-dims")["values"] == [1, 0, 0, 0]
    assert row(json.loads(up), "ih-dims")["values"] == [1, 2, 0, 0]


def test_reproduce_single_scenario(tmp_path):
    code, payload = run(["reproduce", "--example", "cone-s1-table"],
                        tmp_path)
    assert code == 0
    doc = json.loads(payload)
    target = next(r for r in doc["rows"] if r["source"] == "target"
                  and not r["informational"])
    assert target["verdict"] is True
    assert target["values"] == [2, 1, 1]


def test_reproduce_unknown_scenario(capsys):
    assert cli.main(["reproduce", "--example", "made-up"]) == 2
    capsys.readouterr()


# -- formats ---------------------------------------------------------------

def test_json_is_canonical(tmp_path):
    _, payload = run(["sheaf", "--example", "s1"], tmp_path)
    doc = json.loads(payload)
    recoded = json.dumps(doc, sort_keys=True, indent=2,
                         ensure_ascii=False) + "\n"
    assert payload.decode() == recoded
    assert doc["schema"] == 1


def test_no_floats_in_reports(tmp_path):
    _, payload = run(["intersect", "--example", "t2"], tmp_path)
    doc = json.loads(payload)
    nums = row(doc, "numbers-1-1")["values"]
    assert all(isinstance(v, str) and "/" in v
               for line in nums for v in line)


def test_csv_rfc4180(tmp_path):
    code, payload = run(["derham", "--example", "cone-s1",
                         "--format", "csv"], tmp_path, "out.csv")
    assert code == 0
    assert payload.count(b"\r\n") >= 5
    first = payload.split(b"\r\n", 1)[0]
    assert first == b"schema,command,digest,ok"


def test_text_format(capsys):
    assert cli.main(["derham", "--example", "cone-s1",
                     "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "stratumwise-total" in out
    assert "[2, 1, 1]" in out


def test_every_row_carries_provenance(tmp_path):
    for args in (["build", "--example", "cone-s1"],
                 ["ih", "--example", "cone-s1"],
                 ["proptest", "--seed", "0"]):
        _, payload = run(args, tmp_path)
        for r in json.loads(payload)["rows"]:
            assert r["source"] in ("computed", "oracle", "target")
            assert isinstance(r["informational"], bool)


# -- console entry point ---------------------------------------------------

def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "strat_ic.cli", "ih", "--example", "cone-s1",
         "--format", "text"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "ih-dims" in proc.stdout
