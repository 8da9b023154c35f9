"""Complex Euclidean metric on triangle spaces, orthonormal and isotropic flips.

Inside a quadrilateral ``ijkl`` the bilinear form pairs blocks ``(i, j)``
through ``X = zeta_ij`` and blocks ``(k, l)`` through ``Y = zeta_kl``. For
symmetric zetas this makes the two triangles of each diagonal orthogonal,
and the Gramian of a triangle ``ijk`` depends on ``zeta_i, zeta_j, zeta_k``
only: ``G_ijk = 2 zeta_ij zeta_kj^-1 zeta_ik``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .directsum import (
    ALL_TRIANGLES,
    FLIP_NAMES,
    FLIP_TABLE,
    FlipSet,
    Triple,
    ZetaFamily,
    flip_faces,
    flips_from_bases,
    triangle_basis,
)
from .errors import DegenerateGram, DegenerateParameters
from .matcore import as_cmatrix, factor_sym, inf_norm, inverse

J4 = np.array(
    [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)


@dataclass(frozen=True)
class QuadScalarProduct:
    quad: tuple[int, int, int, int]
    X: np.ndarray
    Y: np.ndarray

    @classmethod
    def for_quad(cls, zf: ZetaFamily, quad) -> "QuadScalarProduct":
        i, j, k, l = (int(v) for v in quad)
        if not (1 <= i < j < k < l <= 5):
            raise ValueError(f"quad must be increasing in 1..5, got {quad}")
        return cls((i, j, k, l), zf.diff(i, j), zf.diff(k, l))


def _restrict(row: np.ndarray, quad, n: int) -> list[np.ndarray]:
    # Accept either a 5-block row or an already restricted 4-block row.
    row = np.atleast_2d(row)
    if row.shape[1] == 5 * n:
        return [row[:, (v - 1) * n:v * n] for v in quad]
    if row.shape[1] == 4 * n:
        return [row[:, m * n:(m + 1) * n] for m in range(4)]
    raise ValueError(f"row width {row.shape[1]} is neither 4n nor 5n for n={n}")


def scalar_product(f, g, sp: QuadScalarProduct) -> np.ndarray | complex:
    """Bilinear form of the quad; stacked rows give the matrix of pairwise products.

    Entry ``(r, s)`` is the product of row ``r`` of ``f`` with row ``s`` of ``g``.
    For single rows a scalar is returned.
    """
    n = sp.X.shape[0]
    f1, f2, f3, f4 = _restrict(np.asarray(f, dtype=np.complex128), sp.quad, n)
    g1, g2, g3, g4 = _restrict(np.asarray(g, dtype=np.complex128), sp.quad, n)
    X, Y = sp.X, sp.Y
    gram = f1 @ X @ g2.T + f2 @ X.T @ g1.T + f3 @ Y @ g4.T + f4 @ Y.T @ g3.T
    if gram.shape == (1, 1) and np.ndim(f) == 1:
        return complex(gram[0, 0])
    return gram


def triangle_gram(zf: ZetaFamily, triple) -> np.ndarray:
    i, j, k = (int(v) for v in triple)
    if not (1 <= i < j < k <= 5):
        raise ValueError(f"bad triangle {triple}")
    return 2.0 * zf.diff(i, j) @ zf.diff_inv(k, j) @ zf.diff(i, k)


def gram_three_forms(zf: ZetaFamily, triple) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The triangle Gramian evaluated through edges ``ij``, ``jk`` and ``ki``."""
    i, j, k = triple
    b = triangle_basis(zf, triple).blocks
    fi, fj, fk = b[i - 1], b[j - 1], b[k - 1]

    def pair(u, v, z):
        return u @ z @ v.T + v @ z.T @ u.T

    return pair(fi, fj, zf.diff(i, j)), pair(fj, fk, zf.diff(j, k)), pair(fk, fi, zf.diff(k, i))


def quad_of_flip(name: str) -> tuple[int, int, int, int]:
    in1, in2, _, _ = flip_faces(name)
    return tuple(sorted(set(in1) | set(in2)))


def _bases(zf: ZetaFamily, change: Callable[[Triple], np.ndarray]) -> Callable[[Triple], np.ndarray]:
    cache: dict[Triple, np.ndarray] = {}

    def basis(t: Triple) -> np.ndarray:
        if t not in cache:
            cache[t] = change(t) @ triangle_basis(zf, t).matrix
        return cache[t]

    return basis


def orthonormal_factors(
    zf: ZetaFamily, custom: Mapping[Triple, np.ndarray] | None = None
) -> dict[Triple, np.ndarray]:
    """``c_ijk`` with ``c c^T = G_ijk`` for all ten triangles (Takagi route unless overridden)."""
    out = {}
    for t in ALL_TRIANGLES:
        if custom is not None and t in custom:
            out[t] = as_cmatrix(custom[t])
        else:
            out[t] = factor_sym(triangle_gram(zf, t))
    return out


def orthonormal_flips(
    zf: ZetaFamily, custom: Mapping[Triple, np.ndarray] | None = None
) -> FlipSet:
    """Flips between the bases ``e_ijk = c_ijk^-1 f_ijk``; they come out orthogonal."""
    cs = orthonormal_factors(zf, custom)
    inv = {t: inverse(c, zf.cond_cap) for t, c in cs.items()}
    return flips_from_bases(_bases(zf, inv.__getitem__), zf.n, zf.cond_cap)


@dataclass(frozen=True)
class IsoBasisChange:
    """``a @ f`` has Gramian ``[[0, 1], [1, 0]]``; rows are ``c (x, y)`` and ``c' (x', y')``."""

    triple: Triple | None
    a: np.ndarray
    c: complex
    cprime: complex
    sign: int = 1


def isotropic_change(G, c: complex | None = None, sign: int = 1, triple=None) -> IsoBasisChange:
    """Isotropic basis change for a symmetric 2x2 Gramian ``[[al, be], [be, ga]]``.

    ``sign`` picks the square root of ``be^2 - al ga`` (principal for +1) and
    ``c`` defaults to the value making ``c == c'``.
    """
    g = as_cmatrix(G)
    if g.shape != (2, 2):
        raise ValueError("isotropic_change needs a 2x2 Gramian")
    al, be, ga = g[0, 0], 0.5 * (g[0, 1] + g[1, 0]), g[1, 1]
    disc = be * be - al * ga
    scale = max(1.0, float(np.max(np.abs(g))))
    if abs(al) <= 1e-14 * scale:
        raise DegenerateGram(
            "Gramian has alpha = 0; conjugate it by a fixed rotation first "
            "(see rotate_degenerate_gram)"
        )
    if abs(disc) <= 1e-14 * scale * scale:
        raise DegenerateGram("Gramian has beta^2 = alpha*gamma (singular)")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    root = sign * cmath.sqrt(disc)
    norm = 1.0 / (2.0 * al * (al * ga - be * be))
    if c is None:
        c = cmath.sqrt(norm)
    c = complex(c)
    if c == 0:
        raise DegenerateParameters("normalization c must be nonzero")
    cp = norm / c
    a = np.array([[c * (-be + root), c * al], [cp * (-be - root), cp * al]], dtype=np.complex128)
    return IsoBasisChange(triple, a, c, cp, sign)


def rotate_degenerate_gram(G, theta: float = np.pi / 4) -> tuple[np.ndarray, np.ndarray]:
    """Workaround for ``alpha = 0``: returns ``(rot, rot G rot^T)``.

    With ``a'`` from :func:`isotropic_change` on the rotated Gramian, the
    basis change for the original one is ``a' @ rot``. Not applied
    automatically.
    """
    rot = np.array([[np.cos(theta), np.sin(theta)], [-np.sin(theta), np.cos(theta)]], dtype=np.complex128)
    g = as_cmatrix(G)
    return rot, rot @ g @ rot.T


def isotropic_changes(
    zf: ZetaFamily,
    signs: Mapping[Triple, int] | None = None,
    norms: Mapping[Triple, complex] | None = None,
) -> dict[Triple, IsoBasisChange]:
    if zf.n != 2:
        raise ValueError(f"isotropic bases need n = 2, got n = {zf.n}")
    out = {}
    for t in ALL_TRIANGLES:
        s = 1 if signs is None else int(signs.get(t, 1))
        c = None if norms is None else norms.get(t)
        out[t] = isotropic_change(triangle_gram(zf, t), c=c, sign=s, triple=t)
    return out


def isotropic_flips(
    zf: ZetaFamily,
    signs: Mapping[Triple, int] | None = None,
    norms: Mapping[Triple, complex] | None = None,
    changes: Mapping[Triple, np.ndarray] | None = None,
) -> FlipSet:
    """J-orthogonal flips between isotropic bases ``g_ijk = a_ijk f_ijk`` (n = 2).

    ``changes`` overrides the matrices ``a_ijk`` directly.
    """
    if changes is None:
        iso = isotropic_changes(zf, signs, norms)
        amap = {t: ch.a for t, ch in iso.items()}
    else:
        amap = {t: as_cmatrix(a) for t, a in changes.items()}
    return flips_from_bases(_bases(zf, amap.__getitem__), zf.n, zf.cond_cap)


def conjugated_p(zf: ZetaFamily, amap: Mapping[Triple, np.ndarray]) -> np.ndarray:
    """``diag(a123, a134) P diag(a124^-1, a234^-1)`` built from the plain P block."""
    from .directsum import closed_form_p

    p = closed_form_p(zf)
    left = np.zeros((4, 4), dtype=np.complex128)
    right = np.zeros((4, 4), dtype=np.complex128)
    left[:2, :2], left[2:, 2:] = amap[(1, 2, 3)], amap[(1, 3, 4)]
    right[:2, :2] = inverse(amap[(1, 2, 4)])
    right[2:, 2:] = inverse(amap[(2, 3, 4)])
    return left @ p @ right


def j_matrix(n_pairs: int = 2) -> np.ndarray:
    return np.kron(np.eye(n_pairs), SIGMA_X).astype(np.complex128)


def j_orthogonality_residual(m: np.ndarray) -> float:
    j = j_matrix(m.shape[0] // 2)
    return inf_norm(m.T @ j @ m - j)


def flip_residuals(fs: FlipSet, kind: str) -> dict[str, float]:
    """Per-flip orthogonality (``kind='orthogonal'``) or J-orthogonality of the 2n x 2n blocks."""
    out = {}
    for name in FLIP_NAMES:
        blk = fs.block(name)
        if kind == "orthogonal":
            out[name] = inf_norm(blk.T @ blk - np.eye(blk.shape[0]))
        elif kind == "j":
            out[name] = j_orthogonality_residual(blk)
        else:
            raise ValueError(kind)
    return out


def cross_gram(zf: ZetaFamily, name: str, which: str, basis=None) -> np.ndarray:
    """Gramian between the two triangles of one triangulation of the flip's quad."""
    in1, in2, out1, out2 = flip_faces(name)
    t1, t2 = (in1, in2) if which == "in" else (out1, out2)
    sp = QuadScalarProduct.for_quad(zf, quad_of_flip(name))
    if basis is None:
        b1, b2 = triangle_basis(zf, t1).matrix, triangle_basis(zf, t2).matrix
    else:
        b1, b2 = basis(t1), basis(t2)
    return scalar_product(b1, b2, sp)


__all__ = [
    "J4",
    "QuadScalarProduct",
    "IsoBasisChange",
    "scalar_product",
    "triangle_gram",
    "gram_three_forms",
    "orthonormal_factors",
    "orthonormal_flips",
    "isotropic_change",
    "isotropic_changes",
    "isotropic_flips",
    "rotate_degenerate_gram",
    "conjugated_p",
    "cross_gram",
    "flip_residuals",
    "j_orthogonality_residual",
    "quad_of_flip",
    "FLIP_TABLE",
]
