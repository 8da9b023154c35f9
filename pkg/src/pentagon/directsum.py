"""Triangle spaces in a direct sum and the five flip matrices.

Vertices are numbered 1..5 as in the pentagon picture; a triangle is an
increasing triple ``(i, j, k)``. Each triangle carries an ``n``-dimensional
space spanned by the rows of an ``n x 5n`` block row whose blocks satisfy

    sum_m f_m = 0,        sum_m f_m zeta_m = 0.

The flips P, Q (left side of the 2-3 move) and R, S, T (right side) are the
change-of-basis matrices between the stacked triangle bases of successive
triangulations of the pentagon.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DegenerateParameters, SingularMatrix
from .matcore import (
    DEFAULT_COND_CAP,
    as_cmatrix,
    check_symmetric,
    cond_estimate,
    inf_norm,
    inverse,
    solve_right,
)

Triple = tuple[int, int, int]

# (flip name, tetrahedron, triangles before, triangles after, moving slots).
# Stacking order inside each triangulation follows increasing i+j+k.
FLIP_TABLE: dict[str, tuple[str, tuple[Triple, ...], tuple[Triple, ...], tuple[int, int]]] = {
    "P": ("1234", ((1, 2, 4), (2, 3, 4), (1, 4, 5)), ((1, 2, 3), (1, 3, 4), (1, 4, 5)), (0, 1)),
    "Q": ("1345", ((1, 2, 3), (1, 3, 4), (1, 4, 5)), ((1, 2, 3), (1, 3, 5), (3, 4, 5)), (1, 2)),
    "R": ("1245", ((1, 2, 4), (2, 3, 4), (1, 4, 5)), ((1, 2, 5), (2, 3, 4), (2, 4, 5)), (0, 2)),
    "S": ("2345", ((1, 2, 5), (2, 3, 4), (2, 4, 5)), ((1, 2, 5), (2, 3, 5), (3, 4, 5)), (1, 2)),
    "T": ("1235", ((1, 2, 5), (2, 3, 5), (3, 4, 5)), ((1, 2, 3), (1, 3, 5), (3, 4, 5)), (0, 1)),
}
FLIP_NAMES = ("P", "Q", "R", "S", "T")

ALL_TRIANGLES: tuple[Triple, ...] = tuple(
    (i, j, k) for i in range(1, 6) for j in range(i + 1, 6) for k in range(j + 1, 6)
)


def flip_faces(name: str) -> tuple[Triple, Triple, Triple, Triple]:
    """Return ``(in1, in2, out1, out2)`` triangles of a flip, in slot order."""
    _, before, after, (s1, s2) = FLIP_TABLE[name]
    return before[s1], before[s2], after[s1], after[s2]


def _check_triple(triple) -> Triple:
    i, j, k = (int(t) for t in triple)
    if not (1 <= i < j < k <= 5):
        raise ValueError(f"triangle must be strictly increasing in 1..5, got {triple}")
    return i, j, k


@dataclass(frozen=True)
class ZetaFamily:
    """Five ``n x n`` complex matrices with invertible pairwise differences."""

    zeta: tuple[np.ndarray, ...]
    require_symmetric: bool = True
    cond_cap: float = DEFAULT_COND_CAP
    _diff_inv: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.zeta) != 5:
            raise ValueError(f"need exactly five zeta matrices, got {len(self.zeta)}")
        mats = []
        for idx, z in enumerate(self.zeta, start=1):
            m = as_cmatrix(z)
            if self.require_symmetric:
                m = check_symmetric(m, name=f"zeta{idx}")
            elif m.shape[0] != m.shape[1]:
                raise ValueError(f"zeta{idx} is not square")
            m.setflags(write=False)
            mats.append(m)
        n = mats[0].shape[0]
        if any(m.shape != (n, n) for m in mats):
            raise ValueError("zeta matrices have different sizes")
        object.__setattr__(self, "zeta", tuple(mats))
        for i in range(1, 6):
            for j in range(i + 1, 6):
                try:
                    inv = inverse(self.diff(i, j), self.cond_cap)
                except SingularMatrix as exc:
                    raise SingularMatrix(f"zeta{i} - zeta{j} is not invertible: {exc}") from exc
                self._diff_inv[(i, j)] = inv
                self._diff_inv[(j, i)] = -inv

    @classmethod
    def from_scalars(cls, values: Sequence[complex], **kw) -> "ZetaFamily":
        return cls(tuple(np.array([[v]], dtype=np.complex128) for v in values), **kw)

    @property
    def n(self) -> int:
        return self.zeta[0].shape[0]

    def z(self, i: int) -> np.ndarray:
        return self.zeta[i - 1]

    def diff(self, i: int, j: int) -> np.ndarray:
        return self.zeta[i - 1] - self.zeta[j - 1]

    def diff_inv(self, i: int, j: int) -> np.ndarray:
        return self._diff_inv[(i, j)]

    def max_diff_cond(self) -> float:
        return max(cond_estimate(self.diff(i, j)) for i in range(1, 6) for j in range(i + 1, 6))

    def replace(self, index: int, value) -> "ZetaFamily":
        zs = list(self.zeta)
        zs[index - 1] = value
        return ZetaFamily(tuple(zs), self.require_symmetric, self.cond_cap)


def random_zeta_family(
    rng: np.random.Generator, n: int, symmetric: bool = True, max_cond: float = 1e6
) -> ZetaFamily:
    """Entries uniform in the complex unit disc, symmetrized; resampled until
    every difference has condition estimate at most ``max_cond``."""
    while True:
        zs = []
        for _ in range(5):
            r = np.sqrt(rng.uniform(0.0, 1.0, (n, n)))
            phi = rng.uniform(0.0, 2 * np.pi, (n, n))
            m = r * np.exp(1j * phi)
            if symmetric:
                m = 0.5 * (m + m.T)
            zs.append(m)
        try:
            zf = ZetaFamily(tuple(zs), require_symmetric=symmetric)
        except SingularMatrix:
            continue
        if zf.max_diff_cond() <= max_cond:
            return zf


@dataclass(frozen=True)
class TriangleBasis:
    triple: Triple
    blocks: tuple[np.ndarray, ...]

    @property
    def matrix(self) -> np.ndarray:
        """The ``n x 5n`` block row."""
        return np.hstack(self.blocks)

    def relation_residual(self, zf: ZetaFamily) -> float:
        s = sum(self.blocks)
        w = sum(b @ zf.z(m) for m, b in enumerate(self.blocks, start=1))
        return max(float(np.max(np.abs(s))), float(np.max(np.abs(w))))


def triangle_basis(zf: ZetaFamily, triple, lead=None) -> TriangleBasis:
    """Basis of triangle ``ijk``: block i is ``lead``, block j is
    ``lead zeta_ik zeta_kj^-1`` and block k is ``lead zeta_ij zeta_jk^-1``."""
    i, j, k = _check_triple(triple)
    n = zf.n
    lead_m = np.eye(n, dtype=np.complex128) if lead is None else as_cmatrix(lead)
    if lead is not None:
        inverse(lead_m, zf.cond_cap)
    blocks = [np.zeros((n, n), dtype=np.complex128) for _ in range(5)]
    blocks[i - 1] = lead_m.copy()
    blocks[j - 1] = lead_m @ zf.diff(i, k) @ zf.diff_inv(k, j)
    blocks[k - 1] = lead_m @ zf.diff(i, j) @ zf.diff_inv(j, k)
    return TriangleBasis((i, j, k), tuple(blocks))


@dataclass(frozen=True)
class FlipSet:
    P: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    S: np.ndarray
    T: np.ndarray

    def __getitem__(self, name: str) -> np.ndarray:
        return getattr(self, name)

    @property
    def n(self) -> int:
        return self.P.shape[0] // 3

    def block(self, name: str) -> np.ndarray:
        """The nontrivial ``2n x 2n`` block of a flip."""
        return extract_block(self[name], FLIP_TABLE[name][3], self.n)

    def items(self):
        return ((k, self[k]) for k in FLIP_NAMES)


def embed_block(block: np.ndarray, slots: tuple[int, int], n: int) -> np.ndarray:
    """Place a ``2n x 2n`` block on two of the three slots, identity on the third."""
    out = np.zeros((3 * n, 3 * n), dtype=np.complex128)
    idx = [np.arange(s * n, (s + 1) * n) for s in slots]
    rows = np.concatenate(idx)
    out[np.ix_(rows, rows)] = block
    (rest,) = set(range(3)) - set(slots)
    out[rest * n:(rest + 1) * n, rest * n:(rest + 1) * n] = np.eye(n)
    return out


def extract_block(m: np.ndarray, slots: tuple[int, int], n: int) -> np.ndarray:
    rows = np.concatenate([np.arange(s * n, (s + 1) * n) for s in slots])
    return m[np.ix_(rows, rows)].copy()


def _quad_pivots(in1: Triple, in2: Triple) -> tuple[int, int]:
    # The two in-triangles share a diagonal; each owns exactly one of the
    # other two quad vertices, so restricting to those columns is block diagonal.
    quad = sorted(set(in1) | set(in2))
    diag = set(in1) & set(in2)
    off = [v for v in quad if v not in diag]
    a = off[0] if off[0] in in1 else off[1]
    b = off[1] if a == off[0] else off[0]
    return a, b


def flip_block(basis: Callable[[Triple], np.ndarray], name: str, n: int,
               cond_cap: float = DEFAULT_COND_CAP) -> np.ndarray:
    """Solve ``M [b(in1); b(in2)] = [b(out1); b(out2)]`` for the ``2n x 2n`` block."""
    in1, in2, out1, out2 = flip_faces(name)
    f_in = np.vstack([basis(in1), basis(in2)])
    f_out = np.vstack([basis(out1), basis(out2)])
    va, vb = _quad_pivots(in1, in2)
    cols = np.concatenate([np.arange((va - 1) * n, va * n), np.arange((vb - 1) * n, vb * n)])
    try:
        m = solve_right(f_in[:, cols], f_out[:, cols], cond_cap)
    except SingularMatrix as exc:
        raise SingularMatrix(f"stacked basis for flip {name} is not full rank: {exc}") from exc
    return m


def flips_from_bases(basis: Callable[[Triple], np.ndarray], n: int,
                     cond_cap: float = DEFAULT_COND_CAP) -> FlipSet:
    mats = {}
    for name in FLIP_NAMES:
        blk = flip_block(basis, name, n, cond_cap)
        mats[name] = embed_block(blk, FLIP_TABLE[name][3], n)
    return FlipSet(**mats)


def build_flips(zf: ZetaFamily) -> FlipSet:
    """Flip matrices for the bases of :func:`triangle_basis` with identity lead."""
    cache: dict[Triple, np.ndarray] = {}

    def basis(t: Triple) -> np.ndarray:
        if t not in cache:
            cache[t] = triangle_basis(zf, t).matrix
        return cache[t]

    return flips_from_bases(basis, zf.n, zf.cond_cap)


def stacked_basis(basis: Callable[[Triple], np.ndarray], triangles: Iterable[Triple]) -> np.ndarray:
    return np.vstack([basis(t) for t in triangles])


def check_pentagon(fs: FlipSet) -> float:
    """``||QP - TSR||_inf`` (max absolute row sum)."""
    return inf_norm(fs.Q @ fs.P - fs.T @ fs.S @ fs.R)


def closed_form_p(zf: ZetaFamily) -> np.ndarray:
    """The nontrivial block of P written out in terms of zeta differences."""
    n = zf.n
    one = np.eye(n, dtype=np.complex128)
    d, di = zf.diff, zf.diff_inv
    top = np.hstack([one, d(1, 2) @ di(2, 3) @ d(3, 4) @ di(4, 2)])
    bottom = np.hstack([one, -d(1, 4) @ di(4, 2)])
    return np.vstack([top, bottom])


# -- scalar (n = 1) orthogonal specialization -------------------------------

def _branch_sqrt(z: complex, sign: int) -> complex:
    return sign * cmath.sqrt(z)


def kashaev_angles(zi, zj, zk, zl, branch: tuple[int, int] = (1, 1)) -> tuple[complex, complex]:
    """Cosine and sine attached to tetrahedron ``ijkl``.

    Both are principal square roots of cross-ratios, times the signs in
    ``branch``. For real ``z1 > ... > z5`` the principal roots are the
    positive ones.
    """
    vals = [complex(v) for v in (zi, zj, zk, zl)]
    for a in range(4):
        for b in range(a + 1, 4):
            if vals[a] == vals[b]:
                raise DegenerateParameters(f"zeta values {a} and {b} coincide")
    zi, zj, zk, zl = vals
    den = (zi - zk) * (zj - zl)
    cos2 = (zi - zl) * (zj - zk) / den
    sin2 = (zi - zj) * (zk - zl) / den
    return _branch_sqrt(cos2, branch[0]), _branch_sqrt(sin2, branch[1])


def rotation(c: complex, s: complex, slots: tuple[int, int], sign: int) -> np.ndarray:
    """3x3 rotation on two slots; ``sign=+1`` puts ``-s`` above the diagonal."""
    m = np.eye(3, dtype=np.complex128)
    a, b = slots
    m[a, a] = c
    m[b, b] = c
    m[a, b] = -sign * s
    m[b, a] = sign * s
    return m


def kashaev_flips(zeta5: Sequence[complex], branches: dict[str, tuple[int, int]] | None = None) -> FlipSet:
    """The five orthogonal 3x3 factors of the scalar pentagon relation."""
    z = [complex(v) for v in zeta5]
    if len(z) != 5:
        raise ValueError("need five scalars")
    br = {k: (1, 1) for k in FLIP_NAMES}
    if branches:
        br.update(branches)

    def ang(tet: str, name: str):
        idx = [int(ch) - 1 for ch in tet]
        return kashaev_angles(*(z[i] for i in idx), branch=br[name])

    c, s = ang("1234", "P")
    p = rotation(c, s, (0, 1), +1)
    c, s = ang("1345", "Q")
    q = rotation(c, s, (1, 2), -1)
    c, s = ang("1245", "R")
    r = rotation(c, s, (0, 2), -1)
    c, s = ang("2345", "S")
    s_ = rotation(c, s, (1, 2), -1)
    c, s = ang("1235", "T")
    t = rotation(c, s, (0, 1), +1)
    return FlipSet(P=p, Q=q, R=r, S=s_, T=t)


def orthogonality_residual(m: np.ndarray) -> float:
    return inf_norm(m.T @ m - np.eye(m.shape[0]))
