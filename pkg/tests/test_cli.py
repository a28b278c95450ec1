from pathlib import Path

import pytest

from trpq.bundle import save_bundle
from trpq.cli import main
from trpq.fixtures import CONTACT_QUERY, contact_example
from trpq.reductions import gen_subset_sum


@pytest.fixture
def fixture_bundle(tmp_path):
    p = tmp_path / "contact"
    save_bundle(contact_example(), p)
    return str(p)


def test_validate_ok(fixture_bundle, capsys):
    assert main(["validate", fixture_bundle]) == 0
    assert capsys.readouterr().out.strip() == "ok"


def test_validate_bad_bundle(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "nope")]) == 2


def test_query_match_binding_table(fixture_bundle, capsys):
    code = main(
        ["query", fixture_bundle, CONTACT_QUERY, "--syntax", "match"]
    )
    assert code == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "x,x_time,y,y_time"
    assert out[1:] == ["n3,4,n6,9", "n7,5,n6,9", "n7,6,n6,9"]


def test_query_parse_error_exit_2(fixture_bundle, capsys):
    assert main(["query", fixture_bundle, "N[2,1]"]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_query_fragment_mismatch_exit_4(fixture_bundle):
    assert main(
        ["query", fixture_bundle, "(N/P)[0,2]", "--algo", "pc",
         "--tuple", "n1,1,n1,1"]
    ) == 4


def test_query_single_tuple(tmp_path, capsys):
    inst = gen_subset_sum([2, 3], 5)
    p = tmp_path / "ss"
    save_bundle(inst.graph, p)
    expr = "(N[2,2] + N[0,0]) / (N[3,3] + N[0,0])"
    assert main(["query", str(p), expr, "--tuple", "v0,0,v0,5"]) == 0
    assert capsys.readouterr().out.strip() == "true"
    assert main(["query", str(p), expr, "--tuple", "v0,0,v0,4"]) == 0
    assert capsys.readouterr().out.strip() == "false"


def test_query_stats(fixture_bundle, capsys):
    code = main(
        ["query", fixture_bundle, CONTACT_QUERY, "--syntax", "match", "--stats"]
    )
    assert code == 0
    err = capsys.readouterr().err
    assert "rows=3" in err
    assert "interval_ms=" in err and "total_ms=" in err


def test_classify_command(capsys):
    assert main(["classify", "?(N/exists)"]) == 0
    assert capsys.readouterr().out.strip() == "PC_ONLY"
    assert main(["classify", "F / N[1,2]"]) == 0
    assert capsys.readouterr().out.strip() == "ANOI"


def test_gen_deterministic(tmp_path, capsys):
    args = ["--persons", "15", "--rooms", "2", "--timepoints", "8", "--seed", "5"]
    assert main(["gen", str(tmp_path / "a"), *args]) == 0
    assert main(["gen", str(tmp_path / "b"), *args]) == 0
    for name in ("objects.csv", "existence.csv", "properties.csv", "meta.toml"):
        assert (tmp_path / "a" / name).read_bytes() == (
            tmp_path / "b" / name
        ).read_bytes()


def test_expand_and_cap(fixture_bundle, tmp_path, capsys):
    assert main(["expand", fixture_bundle, str(tmp_path / "out")]) == 0
    points = (tmp_path / "out" / "existence_points.csv").read_text().splitlines()
    assert points[0] == "id,time"
    assert "n1,1" in points
    # refusal when the cap is exceeded
    assert main(
        ["expand", fixture_bundle, str(tmp_path / "out2"), "--cap", "10"]
    ) == 5


def test_threads_identical_output(fixture_bundle, capsys):
    outputs = []
    for threads in ("1", "2", "4"):
        assert main(
            ["query", fixture_bundle, CONTACT_QUERY, "--syntax", "match",
             "--threads", threads]
        ) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1] == outputs[2]


def test_bench_smoke(capsys):
    code = main(
        ["bench", "--sweep", "threads", "--persons", "40", "--rooms", "4",
         "--timepoints", "12"]
    )
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "sweep,point,query,rows,wall_ms"
    rows_by_point = {}
    for line in lines[1:]:
        sweep, point, qid, rows, _ms = line.split(",")
        rows_by_point.setdefault(qid, []).append(rows)
    for qid, rows in rows_by_point.items():
        assert len(set(rows)) == 1, f"{qid}: rows differ across thread counts"
