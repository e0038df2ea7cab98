import json

import pytest

from pantsplane.cli import main
from pantsplane.handles import data_dir


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_farey_distance(capsys):
    code, doc, _ = run(capsys, "farey", "distance", "0/1", "1/0")
    assert code == 0 and doc["result"]["distance"] == 1
    assert doc["manifest"]["command"] == "farey"
    assert set(doc["manifest"]["fixtures"]) == {"genus2.json", "example_path.json"}


def test_farey_geodesic(capsys):
    code, doc, _ = run(capsys, "farey", "geodesic", "1/0", "5/2")
    assert code == 0 and doc["result"]["path"] == ["1/0", "2/1", "5/2"]


def test_farey_axis(capsys):
    code, doc, _ = run(capsys, "farey", "axis", "--extent", "2")
    assert code == 0 and len(doc["result"]["axis"]) >= 3


def test_bad_slope_exits_2(capsys):
    code, doc, err = run(capsys, "farey", "distance", "0/0", "1/0")
    assert code == 2 and doc is None and "0/0" in err


def test_parabolic_axis_exits_2(capsys):
    code, _, err = run(capsys, "farey", "axis", "--matrix", "1,1,0,1")
    assert code == 2 and "hyperbolic" in err


def test_project_fixture(capsys):
    code, doc, _ = run(capsys, "project", str(data_dir() / "example_path.json"))
    assert code == 0
    res = doc["result"]
    assert res["failures"] == [] and res["total"] <= res["path_length"] == 6


def test_project_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "project", str(bad))[0] == 2
    jump = tmp_path / "jump.json"
    jump.write_text(json.dumps({"path": [{"s1": "0/1", "s2": "0/1"}, {"s1": "3/1", "s2": "0/1"}]}))
    code, _, err = run(capsys, "project", str(jump))
    assert code == 2 and "elementary move" in err
    weights = tmp_path / "weights.json"
    weights.write_text(json.dumps({"path": [[1, 0, 0, 0, 0, 0, 0, 0, 0]]}))
    assert run(capsys, "project", str(weights))[0] == 2


def test_audit_small(capsys):
    code, doc, _ = run(capsys, "audit", "total-geodesy", "--pairs", "5", "--dq-max", "2", "--len", "4")
    assert code == 0 and doc["result"]["verdict"] == "no counterexample within bound"
    assert doc["manifest"]["bounds"] == {"bound": 8, "len": 4, "dq_max": 2}
    code, doc, _ = run(capsys, "audit", "theorem2", "--paths", "20")
    assert code == 0 and doc["manifest"]["parameters"]["len"] == 8
    code, doc, _ = run(capsys, "audit", "lemma4", "--samples", "20")
    assert code == 0 and doc["result"]["verdict"] == "all gaps in {0, 1}"
    code, doc, _ = run(capsys, "audit", "convexity", "--samples", "5")
    assert code == 0 and doc["result"]["trials"] == 5


def test_plane_defaults(capsys):
    code, doc, _ = run(capsys, "plane")
    assert code == 0
    assert doc["result"]["grid"]["vertices"] == 121 and doc["result"]["grid"]["l1_metric"]
    assert doc["result"]["translation"]["constant"]


def test_plane_extent_zero(capsys):
    code, doc, _ = run(capsys, "plane", "--extent", "0")
    assert code == 0 and doc["result"]["grid"]["vertices"] == 1


def test_plane_parabolic(capsys):
    assert run(capsys, "plane", "--m1", "1,2,0,1")[0] == 2


def test_payload_is_deterministic(capsys, tmp_path):
    out = tmp_path / "doc.json"
    _, a, _ = run(capsys, "audit", "theorem2", "--paths", "25", "--seed", "4")
    _, b, _ = run(capsys, "audit", "theorem2", "--paths", "25", "--seed", "4", "--workers", "2", "--out", str(out))
    assert a["payload_sha256"] == b["payload_sha256"]
    assert "runtime" not in a["result"]
    assert json.loads(out.read_text())["payload_sha256"] == a["payload_sha256"]
    _, c, _ = run(capsys, "audit", "theorem2", "--paths", "25", "--seed", "5")
    assert c["payload_sha256"] != a["payload_sha256"]


def test_farey_needs_two_slopes(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["farey", "distance", "1/0"])
    assert exc.value.code == 2
