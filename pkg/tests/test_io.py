import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from covkit import io
from covkit.chords import chord_length_distribution
from covkit.covariogram import covariogram_grid
from covkit.errors import ParseError
from covkit.gallery import random_smooth_body
from covkit.geometry import Polygon
from covkit.smooth import SmoothBody, grid

from .conftest import polygons


@given(polygons())
def test_polygon_round_trip_is_bit_exact(P):
    Q = io.loads_body(io.dumps_body(P))
    assert isinstance(Q, Polygon)
    assert np.array_equal(Q.vertices, P.vertices)


@given(st.integers(0, 10**6))
def test_smooth_round_trip_is_bit_exact(seed):
    B = random_smooth_body(np.random.default_rng(seed), n=256)
    C = io.loads_body(io.dumps_body(B))
    assert isinstance(C, SmoothBody)
    assert np.array_equal(C.R, B.R)
    assert np.array_equal(C.base, B.base)
    assert np.array_equal(C.boundary, B.boundary)


def test_file_round_trip(tmp_path, unit_square):
    path = tmp_path / "sq.json"
    io.write_body(unit_square, path)
    assert np.array_equal(io.read_body(path).vertices, unit_square.vertices)


def test_unclosed_profile_is_projected():
    t = grid(64)
    R = 1.0 + 0.3 * np.cos(t)
    B = io.body_from_dict({"type": "smooth", "n": 64, "R": R.tolist(), "base": [0.0, 0.0]})
    assert B.closure_gap() <= 1e-12
    assert B.projection[0] == pytest.approx(0.3)


def test_syntax_error_reports_byte_offset():
    text = '{"type": "polygon",\n "vertices": [[0, 0], [1, 0],, [0, 1]]}'
    with pytest.raises(ParseError) as e:
        io.loads_body(text)
    assert f"byte {text.index(',,') + 1}" in str(e.value)
    assert "line 2" in str(e.value)


def test_byte_offset_counts_utf8_bytes():
    text = '{"name": "été", "type": }'
    with pytest.raises(ParseError) as e:
        io.loads_body(text)
    assert f"byte {len(text[: text.index('}')].encode())}" in str(e.value)


@pytest.mark.parametrize(
    "doc,field",
    [
        ({"vertices": [[0, 0]]}, "type"),
        ({"type": "polygon"}, "vertices"),
        ({"type": "polygon", "vertices": [[0, 0, 1]]}, "vertices"),
        ({"type": "polygon", "vertices": [[0, 0], [1, 0], ["a", 1]]}, "vertices"),
        ({"type": "smooth", "n": 3, "R": [1.0] * 16}, "n"),
        ({"type": "smooth", "n": 16, "R": [1.0] * 15 + [-1.0]}, "R"),
        ({"type": "smooth", "n": 16, "R": [1.0] * 16, "base": [0.0]}, "base"),
        ({"type": "hexagon"}, "type"),
    ],
)
def test_invalid_fields_are_named(doc, field):
    with pytest.raises(ParseError) as e:
        io.body_from_dict(doc)
    assert f"field '{field}'" in str(e.value)


def test_non_utf8_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_bytes(b'{"type": "\xff"}')
    with pytest.raises(ParseError) as e:
        io.read_body(path)
    assert "byte 10" in str(e.value)


def test_read_profile_forms(tmp_path):
    a = tmp_path / "a.json"
    a.write_text(json.dumps([1.0] * 8))
    R, base = io.read_profile(a)
    assert len(R) == 8 and np.array_equal(base, [0.0, 0.0])
    b = tmp_path / "b.json"
    b.write_text(json.dumps({"R": [2.0] * 8, "base": [1.0, 2.0]}))
    R, base = io.read_profile(b)
    assert np.all(R == 2.0) and np.array_equal(base, [1.0, 2.0])


def test_field_csv_round_trip(tmp_path, unit_square):
    fld = covariogram_grid(unit_square, 0.25)
    path = tmp_path / "g.csv"
    io.export_field(fld, path)
    rows = io.read_field_csv(path)
    assert rows.shape == (fld.nx * fld.ny, 3)
    for x, y, g in rows:
        assert g == pytest.approx(max(1 - abs(x), 0) * max(1 - abs(y), 0), abs=1e-12)


def test_histogram_csv(tmp_path, unit_square):
    h = chord_length_distribution(unit_square, (1.0, 1.0), 5)
    path = tmp_path / "h.csv"
    io.export_histogram(h, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "length_lo,length_hi,mass"
    mass = [float(line.split(",")[2]) for line in lines[1:]]
    assert np.array_equal(mass, h.mass)


def test_write_json_is_deterministic(tmp_path):
    obj = {"b": np.float64(1.5), "a": [np.int64(2), np.bool_(True)], "c": np.inf}
    p1, p2 = tmp_path / "1.json", tmp_path / "2.json"
    io.write_json(obj, p1)
    io.write_json(dict(reversed(list(obj.items()))), p2)
    assert p1.read_text() == p2.read_text()
    assert json.loads(p1.read_text()) == {"a": [2, True], "b": 1.5, "c": "inf"}
