import json
import os
from fractions import Fraction

import pytest

from alignedchains.reporting import (
    Report,
    jsonable,
    parse_rational,
    rational_str,
    render,
    render_csv,
    render_json,
    strip_volatile,
    write_atomic,
)


def test_rational_roundtrip():
    assert rational_str(Fraction(3, 5)) == "3/5"
    assert rational_str(Fraction(4, 2)) == "2"
    assert rational_str(7) == "7"
    assert parse_rational(" 3/5 ") == Fraction(3, 5)
    assert parse_rational("2") == 2


def test_jsonable_rewrites():
    value = {"n": Fraction(1, 3), "t": (1, 2), "flag": True, "none": None, 5: "x"}
    assert jsonable(value) == {
        "n": "1/3",
        "t": [1, 2],
        "flag": True,
        "none": None,
        "5": "x",
    }
    with pytest.raises(TypeError, match="float"):
        jsonable(0.5)
    with pytest.raises(TypeError):
        jsonable(object())


def sample_report() -> Report:
    return Report(
        "demo",
        {"seed": "s", "samples": 3},
        [
            {"degree": 1, "norm": Fraction(3, 5), "ok": True},
            {"degree": 2, "ok": False, "extra": None},
        ],
        {"passed": True, "series": [Fraction(1, 2)]},
        timestamp="2026-08-16T00:00:00+00:00",
    )


def test_render_json_shape():
    doc = json.loads(render_json(sample_report()))
    assert doc["meta"]["generated"] == "2026-08-16T00:00:00+00:00"
    assert doc["command"] == "demo"
    assert doc["results"][0]["norm"] == "3/5"
    assert doc["summary"]["series"] == ["1/2"]
    # sorted keys make the payload canonical
    assert list(doc) == sorted(doc)


def test_render_csv_shape():
    text = render_csv(sample_report())
    lines = text.splitlines()
    assert lines[0] == "# generated 2026-08-16T00:00:00+00:00"
    assert lines[1] == "# command demo"
    assert lines[2].startswith("# config ")
    assert lines[3].startswith("# summary ")
    # column union in first-seen order; empty cell for a missing value
    assert lines[4] == "degree,norm,ok,extra"
    assert lines[5] == "1,3/5,true,"
    assert lines[6] == "2,,false,"


def test_render_dispatch():
    rep = sample_report()
    assert render(rep, "json") == render_json(rep)
    assert render(rep, "csv") == render_csv(rep)
    with pytest.raises(ValueError):
        render(rep, "yaml")


def test_strip_volatile_hides_only_timestamp():
    base = sample_report()
    later = Report(
        base.command,
        base.config,
        base.results,
        base.summary,
        timestamp="2030-01-01T12:34:56+00:00",
    )
    for fmt in ("json", "csv"):
        a, b = render(base, fmt), render(later, fmt)
        assert a != b
        assert strip_volatile(a) == strip_volatile(b)


def test_write_atomic(tmp_path):
    path = tmp_path / "report.json"
    write_atomic(str(path), "first\n")
    assert path.read_text() == "first\n"
    write_atomic(str(path), "second\n")
    assert path.read_text() == "second\n"
    leftovers = [p for p in os.listdir(tmp_path) if p.endswith(".tmp")]
    assert leftovers == []
