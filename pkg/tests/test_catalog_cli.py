import json
import os

import numpy as np
import pytest

from nmds_elliptic import catalog
from nmds_elliptic import geometry as geo
from nmds_elliptic.cli import EXIT_CAP, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, main, parse_element
from nmds_elliptic.suites import completeness_record, make_record

from conftest import field, wcurve, wtrack


def _records():
    E = wcurve(7, 0, 1)
    return [make_record(E, 0, verdict={"verdict": "extendable", "elapsed_ms": 3}),
            make_record(E, 1, track={"valid": True})]


def test_catalog_roundtrip(tmp_path):
    path = tmp_path / "cat.jsonl"
    recs = _records()
    catalog.append(path, recs[:1])
    catalog.append(path, recs[1:])
    back = catalog.load(path)
    assert [r.to_json() for r in back] == [r.to_json() for r in recs]
    assert back[0].completeness["verdict"] == "extendable"


def test_catalog_append_is_atomic(tmp_path, monkeypatch):
    path = tmp_path / "cat.jsonl"
    catalog.append(path, _records()[:1])
    before = path.read_bytes()

    def boom(src, dst):
        raise OSError("disk full")

    monkeypatch.setattr(catalog.os, "replace", boom)
    with pytest.raises(OSError):
        catalog.append(path, _records())
    assert path.read_bytes() == before
    assert os.listdir(tmp_path) == ["cat.jsonl"]


def test_stable_view_drops_run_keys():
    a, b = _records()[0], _records()[0]
    b.timestamp = "1970-01-01T00:00:00+00:00"
    b.completeness = dict(b.completeness, elapsed_ms=99)
    assert catalog.stable_view(a) == catalog.stable_view(b)


@pytest.mark.parametrize("q,text,expect", [
    (7, "3", 3), (7, "-1", 6), (11, "2*sqrt3", None), (121, "1+sqrt3", None)])
def test_parse_element(q, text, expect):
    F = field(q)
    v = parse_element(F, text)
    if expect is not None:
        assert v == expect
    if "sqrt3" in text:
        r = F.sub(v, 1) if text.startswith("1+") else F.div(v, 2)
        assert F.mul(r, r) == F.from_int(3)


def test_cli_exit_codes(capsys):
    assert main(["build", "--q", "7", "--weierstrass", "a=0", "b=1"]) == EXIT_OK
    rec = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert rec["track"]["valid"] and rec["n"] == 12
    assert main(["build", "--q", "7", "--weierstrass", "a=0", "b=0"]) == EXIT_DOMAIN
    assert main(["field-info", "--q", "50"]) == EXIT_DOMAIN
    assert main(["complete", "--q", "31", "--weierstrass", "a=1", "b=3"]) == EXIT_CAP
    assert main(["complete", "--q", "7"]) == EXIT_USAGE
    assert main(["build", "--q", "7", "--weierstrass", "a=0", "c=1"]) == EXIT_USAGE
    assert main(["nonsense"]) == EXIT_USAGE
    # y^2 = x^3 + 1 over GF(5) has 6 points, too few for a track
    assert wcurve(5, 0, 1).n < 9
    assert main(["build", "--q", "5", "--weierstrass", "a=0", "b=1"]) == EXIT_DOMAIN


def test_cli_export_and_catalog(tmp_path, capsys):
    out = tmp_path / "G.txt"
    cat = tmp_path / "cat.jsonl"
    assert main(["build", "--q", "7", "--weierstrass", "a=0", "b=1", "--export", str(out),
                 "--catalog", str(cat)]) == EXIT_OK
    M, q = geo.read_matrix(out)
    assert q == 7
    assert M.shape == (9, 12)
    assert np.array_equal(M, wtrack(7, 0, 1).generator_matrix())
    assert len(catalog.load(cat)) == 1
    capsys.readouterr()
    assert main(["export", "--q", "7", "--weierstrass", "a=0", "b=1", "--what", "good"]) == EXIT_OK
    assert capsys.readouterr().out.strip()


def test_complete_is_deterministic_across_partitions(capsys):
    E = wcurve(11, 1, 3)
    views = [catalog.stable_view(make_record(E, 0, verdict=completeness_record(E, 0, k)))
             for k in (1, 4, 16)]
    assert views[0] == views[1] == views[2]
