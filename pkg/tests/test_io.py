import json

import numpy as np
import pytest

from contactlab.catalog import figure_eight
from contactlab.curves import circle_curve
from contactlab.errors import ContractViolation
from contactlab.io import (
    curve_from_dict,
    curve_to_dict,
    format_value,
    read_csv,
    read_curve,
    sha256_file,
    write_csv,
    write_curve,
    write_manifest,
)


class TestCurveFiles:
    def test_round_trip(self, tmp_path):
        leg = figure_eight()
        path = write_curve(tmp_path / "c.json", leg)
        back = read_curve(path)
        t, P = leg.curve.polyline()
        tb, Pb = back.polyline()
        assert np.array_equal(t, tb) and np.array_equal(P, Pb)
        assert back.closed
        assert "provenance" in json.loads(path.read_text())

    def test_planar_rows(self):
        d = curve_to_dict(circle_curve(1.0))
        assert len(d["samples"][0]) == 3
        assert curve_from_dict(d).dim == 2

    @pytest.mark.parametrize(
        "doc",
        [
            [],
            {"n": 1, "closed": False},
            {"n": 0, "closed": False, "samples": [[0, 0, 0, 0]]},
            {"n": True, "closed": False, "samples": [[0, 0, 0, 0]]},
            {"n": 1, "closed": "no", "samples": [[0, 0, 0, 0]]},
            {"n": 1, "closed": False, "samples": [[0, 0, 0, 0, 0]]},
            {"n": 1, "closed": False, "samples": [["a", 0, 0, 0]]},
        ],
    )
    def test_invalid(self, doc):
        with pytest.raises(ContractViolation):
            curve_from_dict(doc)

    def test_missing_and_malformed(self, tmp_path):
        with pytest.raises(ContractViolation):
            read_curve(tmp_path / "nope.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        with pytest.raises(ContractViolation):
            read_curve(bad)


class TestCsv:
    def test_format(self):
        assert format_value(0.1) == "0.10000000000000001"
        assert float(format_value(np.pi)) == np.pi
        assert format_value(True) == "1"
        assert format_value(np.int64(7)) == "7"
        assert format_value(float("nan")) == "nan"
        assert format_value(-np.inf) == "-inf"
        assert format_value("x") == "x"

    def test_round_trip(self, tmp_path, rng):
        vals = rng.normal(size=20)
        rows = [{"k": i, "v": v} for i, v in enumerate(vals)]
        path = write_csv(tmp_path / "a.csv", rows)
        back = read_csv(path)
        assert [float(r["v"]) for r in back] == list(vals)
        assert path.read_text().splitlines()[0] == "k,v"

    def test_fixed_columns(self, tmp_path):
        path = write_csv(tmp_path / "b.csv", [{"a": 1}], ["b", "a"])
        assert path.read_text() == "b,a\n,1\n"


def test_manifest(tmp_path):
    f = write_csv(tmp_path / "a.csv", [{"a": 1.5}])
    m = write_manifest(tmp_path, [f], {"eps": np.float64(0.1), "out": tmp_path}, "0.1.0", 3)
    doc = json.loads(m.read_text())
    assert doc["files"] == [{"path": "a.csv", "sha256": sha256_file(f), "bytes": f.stat().st_size}]
    assert doc["seed"] == 3 and doc["config"]["eps"] == 0.1
