import json

import numpy as np
import pytest

from mdspline.cli import main
from mdspline.documents import (
    DocumentError,
    curve_from_document,
    curve_to_document,
    load_document,
    space_from_document,
)

from conftest import FIXTURES


def test_fixture_documents_load():
    running = curve_from_document(load_document(FIXTURES / "running_curve.json"))
    assert running.space.dimension == 7
    phi = space_from_document(load_document(FIXTURES / "mixed_space.json"))
    assert phi.dimension == 5
    gc = curve_from_document(load_document(FIXTURES / "gc_curve.json"))
    assert gc.space.dimension == 8
    assert gc.space.connections is not None


def test_document_roundtrip(tmp_path):
    doc = load_document(FIXTURES / "running_curve.json")
    curve = curve_from_document(doc)
    out = tmp_path / "roundtrip.json"
    with open(out, "w") as fh:
        json.dump(curve_to_document(curve), fh)
    again = curve_from_document(load_document(out))
    assert np.array_equal(again.control_points, curve.control_points)
    assert again.space.degrees.tolist() == curve.space.degrees.tolist()
    assert again.space.domain == curve.space.domain


def test_document_missing_field():
    with pytest.raises(DocumentError):
        space_from_document({"domain": [0, 1], "degrees": [2]})


def test_document_nonfinite_rejected():
    with pytest.raises(DocumentError):
        space_from_document(
            {"domain": [0, float("nan")], "breakpoints": [], "degrees": [2], "continuities": []}
        )


def test_connection_parsing_nested_and_null():
    doc = {
        "domain": [0, 2],
        "breakpoints": [1],
        "degrees": [2, 2],
        "continuities": [1],
        "connections": [None],
    }
    sp = space_from_document(doc)
    assert sp.connection_at(1) is None
    doc["connections"] = [[[1, 0], [0, 2.0]]]
    assert space_from_document(doc).connection_at(1).order == 2
    doc["connections"] = [[1, 0, 0, 2.0]]
    assert space_from_document(doc).connection_at(1).order == 2


def test_cli_validate_running(capsys):
    assert main(["validate", str(FIXTURES / "running_curve.json")]) == 0
    out = capsys.readouterr().out
    assert "K=7" in out
    assert "[0.0, 0.0, 1.0, 1.0, 3.0, 3.0, 3.0]" in out
    assert "[1.0, 3.0, 6.0, 6.0, 7.0, 7.0, 7.0]" in out


def test_cli_validate_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["validate", str(bad)]) == 2
    assert "invalid JSON" in capsys.readouterr().err


def test_cli_validate_bad_continuity(tmp_path, capsys):
    doc = {"domain": [0, 2], "breakpoints": [1], "degrees": [2, 2], "continuities": [2]}
    path = tmp_path / "bad_space.json"
    path.write_text(json.dumps(doc))
    assert main(["validate", str(path)]) == 2
    assert "x_1" in capsys.readouterr().err


def test_cli_missing_file(capsys):
    assert main(["validate", "/nonexistent/nowhere.json"]) == 4


def test_cli_sample_basis_rows_sum_to_one(tmp_path):
    out = tmp_path / "basis.csv"
    rc = main(
        ["sample", str(FIXTURES / "running_curve.json"), "--what", "basis",
         "--samples", "50", "--out", str(out)]
    )
    assert rc == 0
    rows = [line.split(",") for line in out.read_text().strip().splitlines()]
    assert rows[0] == ["x"] + [f"N{i}" for i in range(1, 8)]
    for row in rows[1:]:
        vals = [float(v) for v in row[1:]]
        assert abs(sum(vals) - 1.0) <= 1e-12


def test_cli_sample_transitions_and_derivative(tmp_path):
    for what, extra in (("transitions", []), ("derivative", ["--order", "1"])):
        out = tmp_path / f"{what}.csv"
        rc = main(
            ["sample", str(FIXTURES / "running_curve.json"), "--what", what,
             "--samples", "20", "--out", str(out)] + extra
        )
        assert rc == 0
        assert len(out.read_text().strip().splitlines()) == 21


def test_cli_sample_json_format(tmp_path):
    out = tmp_path / "curve.json"
    rc = main(
        ["sample", str(FIXTURES / "running_curve.json"), "--what", "curve",
         "--samples", "10", "--format", "json", "--out", str(out)]
    )
    assert rc == 0
    payload = json.loads(out.read_text())
    assert payload["headers"] == ["x", "cx", "cy"]
    assert len(payload["rows"]) == 10
    assert payload["rows"][0][1:] == [0.0, 0.0]  # clamped start point


def test_cli_modeling_pipeline(tmp_path, capsys):
    inserted = tmp_path / "inserted.json"
    rc = main(
        ["insert-knot", str(FIXTURES / "running_curve.json"), "--x", "2.6", "--out", str(inserted)]
    )
    assert rc == 0
    doc = json.loads(inserted.read_text())
    assert doc["degrees"] == [1, 2, 2, 4, 2]
    assert doc["continuities"] == [0, 1, 1, 2]
    assert len(doc["control_points"]) == 8

    elevated = tmp_path / "elevated.json"
    rc = main(["elevate", str(inserted), "--interval", "2", "--times", "3", "--out", str(elevated)])
    assert rc == 0
    doc = json.loads(elevated.read_text())
    assert doc["degrees"] == [1, 2, 5, 4, 2]
    assert len(doc["control_points"]) == 11

    conv = tmp_path / "conventional.json"
    assert main(["to-conventional", str(elevated), "--out", str(conv)]) == 0
    doc = json.loads(conv.read_text())
    assert doc["degrees"] == [5, 5, 5, 5, 5]
    assert len(doc["control_points"]) == 22

    # every produced document validates
    for path in (inserted, elevated, conv):
        assert main(["validate", str(path)]) == 0
    capsys.readouterr()


def test_cli_operator_precondition_exit_code(capsys):
    rc = main(["insert-knot", str(FIXTURES / "running_curve.json"), "--x", "1.0"])
    assert rc == 3  # C^0 at x=1 cannot lose more continuity
    capsys.readouterr()


def test_cli_elevate_zero_times_is_semantic_noop(tmp_path):
    out = tmp_path / "same.json"
    rc = main(["elevate", str(FIXTURES / "running_curve.json"), "--interval", "1",
               "--times", "0", "--out", str(out)])
    assert rc == 0
    src = json.loads((FIXTURES / "running_curve.json").read_text())
    dst = json.loads(out.read_text())
    assert dst["degrees"] == src["degrees"]
    assert np.allclose(dst["control_points"], src["control_points"])


def test_cli_to_bezier(tmp_path):
    out = tmp_path / "bezier.json"
    assert main(["to-bezier", str(FIXTURES / "running_curve.json"), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert [seg["degree"] for seg in doc["segments"]] == [1, 2, 4, 2]
    # segment polygons interpolate the curve at break-points
    assert doc["segments"][0]["points"][0] == [0.0, 0.0]


def test_cli_dump_transitions(tmp_path):
    out = tmp_path / "transitions.json"
    assert main(["dump-transitions", str(FIXTURES / "running_curve.json"), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["dimension"] == 7
    assert doc["functions"][0]["constant_one"] is True
    assert doc["functions"][6]["pieces"][0]["degree"] == 4
