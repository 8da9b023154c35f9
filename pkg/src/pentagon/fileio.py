"""Zeta-family files and verification reports (JSON).

A zeta file holds ``"n"`` and five entries ``"zeta1"`` .. ``"zeta5"``; each
is a nested array of ``[re, im]`` pairs (``n x n``). For ``n = 1`` a bare
``[re, im]`` pair is accepted as a 1x1 matrix.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .directsum import ZetaFamily
from .errors import NotSymmetric, ParseError, SingularMatrix

ZETA_KEYS = tuple(f"zeta{i}" for i in range(1, 6))


def _complex(value, field: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise ParseError(f"expected a [re, im] pair, got {value!r}", field=field)
    return complex(float(value[0]), float(value[1]))


def _matrix(value, n: int, field: str) -> np.ndarray:
    if n == 1 and isinstance(value, list) and len(value) == 2 and not isinstance(value[0], list):
        return np.array([[_complex(value, field)]], dtype=np.complex128)
    if not isinstance(value, list) or len(value) != n:
        raise ParseError(f"expected {n} rows", field=field)
    out = np.empty((n, n), dtype=np.complex128)
    for r, row in enumerate(value):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"row {r} must have {n} entries", field=field)
        for c, entry in enumerate(row):
            out[r, c] = _complex(entry, f"{field}[{r}][{c}]")
    return out


def parse_zeta(doc, strict: bool = True) -> ZetaFamily:
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"'n' must be a positive integer, got {n!r}", field="n")
    mats = []
    for key in ZETA_KEYS:
        if key not in doc:
            raise ParseError("missing matrix", field=key)
        m = _matrix(doc[key], n, key)
        if strict and np.max(np.abs(m - m.T)) > 1e-12 * max(1.0, float(np.max(np.abs(m)))):
            raise ParseError("matrix is not symmetric", field=key)
        mats.append(m)
    try:
        return ZetaFamily(tuple(mats), require_symmetric=strict)
    except (NotSymmetric, SingularMatrix) as exc:
        raise ParseError(str(exc)) from exc


def load_zeta(path, strict: bool = True) -> ZetaFamily:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    return parse_zeta(doc, strict)


def zeta_to_doc(zf: ZetaFamily) -> dict:
    doc: dict = {"n": zf.n}
    for key, m in zip(ZETA_KEYS, zf.zeta):
        doc[key] = [[[float(z.real), float(z.imag)] for z in row] for row in m]
    return doc


def save_zeta(zf: ZetaFamily, path) -> None:
    Path(path).write_text(json.dumps(zeta_to_doc(zf), indent=1) + "\n", encoding="utf-8")


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=True) + "\n"


def save_report(report: dict, path) -> None:
    Path(path).write_text(report_to_json(report), encoding="utf-8")
