import json

import numpy as np
import pytest

from pentagon.directsum import random_zeta_family
from pentagon.errors import ParseError
from pentagon.fileio import load_zeta, parse_zeta, save_report, save_zeta, zeta_to_doc


def test_round_trip_is_bitwise(rng, tmp_path):
    for n in (1, 2, 3):
        zf = random_zeta_family(rng, n)
        path = tmp_path / f"z{n}.json"
        save_zeta(zf, path)
        back = load_zeta(path)
        for a, b in zip(zf.zeta, back.zeta):
            assert np.array_equal(a, b)


def test_scalar_file_accepted(tmp_path):
    doc = {"n": 1, **{f"zeta{i}": [6 - i, 0] for i in range(1, 6)}}
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    zf = load_zeta(path)
    assert zf.n == 1 and zf.z(1)[0, 0] == 5


def test_non_symmetric_names_matrix(rng):
    doc = zeta_to_doc(random_zeta_family(rng, 2))
    doc["zeta3"][0][1] = [9.0, 0.0]
    with pytest.raises(ParseError) as info:
        parse_zeta(doc)
    assert info.value.field == "zeta3"
    assert "zeta3" in str(info.value)
    parse_zeta(doc, strict=False)


@pytest.mark.parametrize(
    "mutate, field",
    [
        (lambda d: d.pop("zeta5"), "zeta5"),
        (lambda d: d.__setitem__("n", 0), "n"),
        (lambda d: d.__setitem__("n", True), "n"),
        (lambda d: d["zeta2"].pop(), "zeta2"),
        (lambda d: d["zeta1"][0].__setitem__(0, [1.0]), "zeta1[0][0]"),
        (lambda d: d["zeta1"][1].__setitem__(1, ["a", 0]), "zeta1[1][1]"),
    ],
)
def test_parse_errors_name_the_field(rng, mutate, field):
    doc = zeta_to_doc(random_zeta_family(rng, 2))
    mutate(doc)
    with pytest.raises(ParseError) as info:
        parse_zeta(doc)
    assert info.value.field == field


def test_invalid_json_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n "n": 1,\n "zeta1": [1, 0],,\n}')
    with pytest.raises(ParseError) as info:
        load_zeta(path)
    assert info.value.line == 3


def test_degenerate_family_is_parse_error():
    doc = {"n": 1, **{f"zeta{i}": [1, 0] for i in range(1, 6)}}
    with pytest.raises(ParseError):
        parse_zeta(doc)
    with pytest.raises(ParseError):
        parse_zeta([1, 2])


def test_save_report(tmp_path):
    path = tmp_path / "r.json"
    save_report({"x": 1.5, "nan": float("nan")}, path)
    assert json.loads(path.read_text())["x"] == 1.5
