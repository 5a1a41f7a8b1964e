"""Command line drive: exit codes, schemas, determinism, error paths."""

import json

import pytest

from bosco.cli import main
from bosco.fixtures import wheel_graph
from bosco.planar import canonical_code
from bosco.report import graph_from_json, graph_to_json


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), err


def test_graph_command_emits_the_schema(capsys):
    code, doc, _ = run_json(capsys, "graph", "--fixture", "D33")
    assert code == 0
    assert doc["schema"] == 1
    assert len(doc["vertices"]) == 7
    assert len(doc["edges"]) == 8
    assert doc["base"] == "0"
    assert all(isinstance(v, str) for v in doc["vertices"])
    heights = {rec["id"]: rec["height"] for rec in doc["edges"]}
    assert heights["e0"] == 1 and heights["a11"] == 0
    # the walk lists darts of the unbounded face
    assert doc["outer_face"]


def test_graph_json_round_trip(tmp_path, capsys):
    code, out, _ = run(capsys, "graph", "--fixture", "D330", "--format", "json")
    assert code == 0
    rebuilt = graph_from_json(json.loads(out))
    assert canonical_code(rebuilt) == canonical_code(wheel_graph(3, 3, 0))
    assert json.dumps(graph_to_json(rebuilt), sort_keys=True) == \
        json.dumps(json.loads(out), sort_keys=True)
    path = tmp_path / "d330.json"
    path.write_text(out, encoding="utf-8")
    code, doc, _ = run_json(capsys, "cohomology", str(path))
    assert code == 0
    ranks = {row["height"]: row["rank"] for row in doc["heights"]}
    assert ranks == {2: 1, 4: 1}


def test_cohomology_reports_are_reproducible(capsys):
    first = run(capsys, "cohomology", "--fixture", "D331", "--seed", "7",
                "--format", "json")
    second = run(capsys, "cohomology", "--fixture", "D331", "--seed", "7",
                 "--format", "json")
    assert first == second
    assert first[0] == 0


def test_cohomology_report_fields(capsys):
    code, doc, _ = run_json(capsys, "cohomology", "--fixture", "D330",
                            "--seed", "7", "--retries", "5")
    assert code == 0
    assert doc["tool"]["name"] == "bosco"
    assert doc["seed"] == 7 and doc["retries"] == 5
    assert len(doc["conventions"]) == 12
    assert doc["determinant"] == 0
    assert doc["hf_rank"] is None
    assert doc["certified"] is True
    top = doc["heights"][0]
    assert top["differential_rank"] == 17
    assert len(top["attempts"]) == 5


def test_cohomology_text_prints_heights_and_degrees(capsys):
    code, out, _ = run(capsys, "cohomology", "--fixture", "D33")
    assert code == 0
    assert "height 2 (degree 1)" in out
    assert "height 4 (degree 2)" in out
    assert "determinant 3" in out
    assert "L space: yes" in out


def test_unknot_pipeline(capsys):
    code, doc, _ = run_json(capsys, "cohomology", "--fixture", "unknot")
    assert code == 0
    assert [(r["height"], r["rank"]) for r in doc["heights"]] == [(0, 1)]
    assert doc["determinant"] == 1
    assert doc["hf_rank"] == 1
    assert doc["lspace"] is True


def test_chain_fixture_dispatch(capsys):
    code, doc, _ = run_json(capsys, "cohomology", "--fixture", "E", "2")
    assert code == 0
    ranks = {r["height"]: r["rank"] for r in doc["heights"]}
    assert ranks == {1: 0, 3: 1, 5: 1, 7: 0, 9: 0}
    assert doc["certified"] is True


def test_skein_conclusion_and_les(capsys):
    code, doc, _ = run_json(capsys, "skein", "--fixture", "D333",
                            "--edge", "e0")
    assert code == 0
    assert "vanishes" in doc["conclusion"]
    assert doc["les"]["ok"] is True
    zero = doc["resolutions"][0]
    assert zero["kind"] == "delete"
    assert {r["height"]: r["rank"] for r in zero["heights"]} == {2: 1, 4: 1}
    one = doc["resolutions"][1]
    assert one["total_rank"] == 0


def test_verify_suites(capsys):
    code, doc, _ = run_json(capsys, "verify", "--suite", "oracles")
    assert code == 0
    assert doc["passed"] is True
    assert any(c["name"].startswith("kirchhoff") for c in doc["checks"])
    code, out, _ = run(capsys, "verify", "--suite", "squares")
    assert code == 0
    assert "d squared" in out


def test_exact_mode_on_a_tiny_fixture(capsys):
    code, doc, _ = run_json(capsys, "cohomology", "--fixture", "trefoil",
                            "--exact")
    assert code == 0
    assert doc["certified"] is True
    assert doc["basis"] == ["exact multivariate elimination over the "
                            "function field"]


def test_base_override_keeps_the_ranks(capsys):
    code, doc, _ = run_json(capsys, "cohomology", "--fixture", "D33",
                            "--base", "4")
    assert code == 0
    assert {r["height"]: r["rank"] for r in doc["heights"]} == {2: 3, 4: 0}


def test_usage_errors_exit_one(capsys):
    code, _, err = run(capsys, "cohomology")
    assert code == 1
    assert "fixture" in err
    code, _, _ = run(capsys, "cohomology", "x.pd", "--fixture", "D33")
    assert code == 1
    assert main(["skein", "--fixture", "D33"]) == 1


def test_validation_errors_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.pd"
    bad.write_text("X a b c\n", encoding="utf-8")
    code, _, err = run(capsys, "graph", str(bad))
    assert code == 2
    assert "line 1" in err
    code, _, err = run(capsys, "cohomology", "--fixture", "nope")
    assert code == 2
    code, _, err = run(capsys, "skein", "--fixture", "D33",
                       "--edge", "missing")
    assert code == 2
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"schema": 1, "vertices": ["1"]}),
                      encoding="utf-8")
    code, _, err = run(capsys, "cohomology", str(broken))
    assert code == 2
    assert "missing field" in err


def test_uncertified_ranks_exit_three(capsys):
    code, doc, _ = run_json(capsys, "cohomology", "--fixture", "D44")
    assert code == 3
    assert doc["certified"] is False
    assert any(not r["certified"] for r in doc["heights"])


def test_golden_graph_files_match_the_generators():
    from importlib import resources

    from bosco.fixtures import fixture_by_name
    from bosco.report import canonical_json

    for name in ("D33", "D330", "D36", "E3"):
        stored = resources.files("bosco").joinpath(
            f"data/{name}.json").read_text(encoding="utf-8")
        generated = canonical_json(graph_to_json(fixture_by_name(name)))
        assert stored == generated, name


def test_golden_graph_files_load_and_certify(capsys):
    from importlib import resources

    with resources.as_file(resources.files("bosco").joinpath(
            "data/D36.json")) as path:
        code, doc, _ = run_json(capsys, "cohomology", str(path))
    assert code == 0
    assert {r["height"]: r["rank"] for r in doc["heights"]} == {2: 1, 4: 1}
