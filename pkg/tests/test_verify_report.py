import json

import pytest

from twistlab import report
from twistlab.scan import Instance
from twistlab.verify import TAGS, Check, _run_one, verify


def test_check_record_fields():
    d = Check("ii", "M=5 q=5", "claim", 0, 0, None, True).as_dict()
    assert set(d) == {"family", "label", "claim", "measured", "expected", "tol", "pass"}


def test_errors_become_failing_checks():
    out = _run_one(("ii", Instance("main3", 18, (2, 3))))
    assert len(out) == 1 and not out[0].passed
    assert "error" in out[0].expected


def test_unknown_tag():
    with pytest.raises(ValueError):
        verify("nope", 10)
    assert "identities" in TAGS


def test_heegner_tag_includes_kolyvagin():
    checks = verify("heegner", 200)
    assert any("conductor-13" in c.claim for c in checks)
    assert all(c.passed for c in checks)


def test_main2_tag():
    checks = verify("main2", 300)
    assert len(checks) >= 10 and all(c.passed for c in checks)


def test_jsonl_roundtrip(tmp_path):
    recs = [{"family": "x", "label": "b", "measured": 1 + 2j, "pass": True},
            {"family": "x", "label": "a", "measured": (1, 2), "pass": False}]
    path = report.write_jsonl(recs, tmp_path / "r.jsonl")
    back = [json.loads(line) for line in path.read_text().splitlines()]
    assert back[0]["measured"] == [1.0, 2.0] and back[1]["measured"] == [1, 2]
    assert list(back[0]) == sorted(back[0])


def test_figures(tmp_path):
    recs = [Check("ii", f"M={m}", "c", o, o, None, True).as_dict() for m, o in ((5, 0), (65, 1))]
    recs.append(Check("bsd", "M=53", "c", "undefined", 2, None, False).as_dict())
    out = report.write_report(recs, tmp_path)
    names = sorted(p.split("/")[-1] for p in out["figures"])
    assert names == ["ord2_ii.png", "pass_fail.png"]
