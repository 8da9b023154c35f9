"""Grassmann-Gaussian tetrahedron weights and their canonical transformations.

A weight ``exp(a x1 x2 + sum b_ij x_i y_j + c y1 y2)`` defines the kernel
operator ``f -> int W f dx1 dx2`` from functions of ``x`` to functions of
``y``. Pushing ``(d/dy1, y1, d/dy2, y2)`` through it yields a 4x4 matrix
acting on ``(d/dx1, x1, d/dx2, x2)``; :func:`canonical_matrix` writes it in
closed form and :func:`verify_canonical` recomputes it on the 16-dimensional
algebra.

For the pentagon check the ten triangles of the pentagon get one generator
each (ordered by vertex sum, ties lexicographic) and every tetrahedron reads
its faces from the flip table: inputs ``x1, x2`` are the two triangles the
flip removes, outputs ``y1, y2`` the two it creates, both in slot order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .directsum import (
    ALL_TRIANGLES,
    FLIP_NAMES,
    FLIP_TABLE,
    FlipSet,
    Triple,
    ZetaFamily,
    embed_block,
    extract_block,
    flip_faces,
)
from .errors import DegenerateDelta, InconsistentRatio, NotGaussianGeneric, ZeroSide
from .grassmann import GrassmannElement, berezin, g_exp, left_deriv, triangle_order
from .matcore import as_cmatrix, inf_norm
from .metric import J4, isotropic_changes, isotropic_flips

DEFAULT_FACES = ("x1", "x2", "y1", "y2")

# tetrahedron -> (x1, x2, y1, y2) faces
WIRING: dict[str, tuple[Triple, Triple, Triple, Triple]] = {
    FLIP_TABLE[name][0]: flip_faces(name) for name in FLIP_NAMES
}
TETRA_OF_FLIP = {name: FLIP_TABLE[name][0] for name in FLIP_NAMES}
LHS_TETRA = ("1234", "1345")
RHS_TETRA = ("1245", "2345", "1235")
LHS_INNER = ((1, 3, 4),)
RHS_INNER = ((1, 2, 5), (2, 3, 5), (2, 4, 5))
BOUNDARY = ((1, 2, 4), (2, 3, 4), (1, 4, 5), (1, 2, 3), (1, 3, 5), (3, 4, 5))
GENERATOR_ORDER: tuple[Triple, ...] = tuple(triangle_order(ALL_TRIANGLES))
GEN_INDEX = {t: i for i, t in enumerate(GENERATOR_ORDER)}


@dataclass(frozen=True)
class GaussWeight:
    a: complex
    b: np.ndarray
    c: complex
    faces: tuple = DEFAULT_FACES

    def __post_init__(self):
        b = as_cmatrix(self.b)
        if b.shape != (2, 2):
            raise ValueError(f"b must be 2x2, got {b.shape}")
        b.setflags(write=False)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "c", complex(self.c))
        if len(self.faces) != 4 or len(set(self.faces)) != 4:
            raise ValueError(f"need four distinct face labels, got {self.faces}")
        object.__setattr__(self, "faces", tuple(self.faces))
        if self.delta == 0:
            raise DegenerateDelta("b11 b22 - b12 b21 vanishes")

    @property
    def delta(self) -> complex:
        b = self.b
        return complex(b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0])

    def params(self) -> dict[str, complex]:
        b = self.b
        return {"a": self.a, "b11": complex(b[0, 0]), "b12": complex(b[0, 1]),
                "b21": complex(b[1, 0]), "b22": complex(b[1, 1]), "c": self.c}

    def with_faces(self, faces) -> "GaussWeight":
        return GaussWeight(self.a, self.b, self.c, tuple(faces))


def random_gauss_weight(rng: np.random.Generator, faces=DEFAULT_FACES) -> GaussWeight:
    def z(size=None):
        return rng.normal(size=size) + 1j * rng.normal(size=size)

    while True:
        b = z((2, 2))
        if abs(b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]) > 1e-3:
            return GaussWeight(z(), b, z(), faces)


def scale_generators(w: GaussWeight, kx1, kx2, ky1, ky2) -> GaussWeight:
    """Weight after substituting ``x -> k x`` for each of the four face generators."""
    kx = np.array([kx1, kx2], dtype=np.complex128)
    ky = np.array([ky1, ky2], dtype=np.complex128)
    return GaussWeight(w.a * kx1 * kx2, w.b * np.outer(kx, ky), w.c * ky1 * ky2, w.faces)


def exponent_element(w: GaussWeight, gens: Sequence[int] = (0, 1, 2, 3), num_gens: int = 4) -> GrassmannElement:
    """The quadratic exponent with ``x1, x2, y1, y2`` placed on ``gens``."""
    x1, x2, y1, y2 = (GrassmannElement.generator(num_gens, g) for g in gens)
    b = w.b
    return (w.a * (x1 * x2) + b[0, 0] * (x1 * y1) + b[0, 1] * (x1 * y2)
            + b[1, 0] * (x2 * y1) + b[1, 1] * (x2 * y2) + w.c * (y1 * y2))


def weight_element(w: GaussWeight, gens: Sequence[int] = (0, 1, 2, 3), num_gens: int = 4) -> GrassmannElement:
    return g_exp(exponent_element(w, gens, num_gens))


def canonical_matrix(w: GaussWeight) -> np.ndarray:
    a, c, d = w.a, w.c, w.delta
    (b11, b12), (b21, b22) = w.b
    e = a * c - d
    m = np.array(
        [
            [c * b21, b11 * e, -c * b11, b21 * e],
            [-b22, -a * b12, b12, -a * b22],
            [c * b22, b12 * e, -c * b12, b22 * e],
            [b21, a * b11, -b11, a * b21],
        ],
        dtype=np.complex128,
    )
    return m / d


def j_residual(m: np.ndarray) -> float:
    return inf_norm(m.T @ J4 @ m - J4)


def _ops(gen_d: int, gen_m: int):
    def d(f):
        return left_deriv(gen_d, f)

    def mul(f):
        return GrassmannElement.generator(f.num_gens, gen_m) * f

    return d, mul


def verify_canonical(w: GaussWeight, matrix: np.ndarray | None = None) -> float:
    """Max discrepancy between ``O_y K f`` and ``K (M O_x) f`` over ``f`` in {1, x1, x2, x1 x2}.

    ``K f = int W f dx1 dx2`` on the algebra of ``x1, x2, y1, y2``; ``M``
    defaults to :func:`canonical_matrix`.
    """
    m = canonical_matrix(w) if matrix is None else np.asarray(matrix)
    W = weight_element(w)

    def K(f):
        return berezin(W * f, [0, 1])

    dx1, mx1 = _ops(0, 0)
    dx2, mx2 = _ops(1, 1)
    dy1, my1 = _ops(2, 2)
    dy2, my2 = _ops(3, 3)
    o_x = (dx1, mx1, dx2, mx2)
    o_y = (dy1, my1, dy2, my2)
    worst = 0.0
    for mask in (0b00, 0b01, 0b10, 0b11):
        f = GrassmannElement(4, {mask: 1.0})
        kf = K(f)
        for r in range(4):
            lhs = o_y[r](kf)
            pushed = GrassmannElement(4)
            for col in range(4):
                if m[r, col] != 0:
                    pushed = pushed + m[r, col] * o_x[col](f)
            rhs = K(pushed)
            worst = max(worst, (lhs - rhs).max_abs())
    return worst


def weight_from_matrix(m, faces=DEFAULT_FACES, tol: float = 1e-9) -> GaussWeight:
    """Recover ``(a, b, c)`` from a canonical matrix; inverse of :func:`canonical_matrix`."""
    m = as_cmatrix(m)
    if m.shape != (4, 4):
        raise ValueError("canonical matrix must be 4x4")
    scale = max(1.0, float(np.max(np.abs(m))))
    inv_delta = m[1, 0] * m[3, 2] - m[1, 2] * m[3, 0]
    if abs(inv_delta) <= 1e-13 * scale * scale:
        raise NotGaussianGeneric("m21 m43 - m23 m41 vanishes: not a Gaussian kernel")
    d = 1.0 / inv_delta
    b22, b12, b21, b11 = -d * m[1, 0], d * m[1, 2], d * m[3, 0], -d * m[3, 2]
    # a multiplies (-b12, -b22, b11, b21)/delta in rows 2 and 4;
    # c multiplies (b21, -b11, b22, -b12)/delta in rows 1 and 3.
    a_coef = np.array([-b12, -b22, b11, b21]) / d
    a_vals = np.array([m[1, 1], m[1, 3], m[3, 1], m[3, 3]])
    c_coef = np.array([b21, -b11, b22, -b12]) / d
    c_vals = np.array([m[0, 0], m[0, 2], m[2, 0], m[2, 2]])
    a = np.vdot(a_coef, a_vals) / np.vdot(a_coef, a_coef)
    c = np.vdot(c_coef, c_vals) / np.vdot(c_coef, c_coef)
    try:
        w = GaussWeight(a, [[b11, b12], [b21, b22]], c, faces)
    except DegenerateDelta as exc:
        raise NotGaussianGeneric(str(exc)) from exc
    err = float(np.max(np.abs(canonical_matrix(w) - m)))
    if err > tol * scale:
        raise NotGaussianGeneric(f"no consistent (a, c): reconstruction error {err:.3g}")
    return w


# -- pentagon in the Grassmann algebra ------------------------------------

def _tetra_element(tet: str, w: GaussWeight) -> GrassmannElement:
    faces = w.faces if all(isinstance(f, tuple) for f in w.faces) else WIRING[tet]
    gens = [GEN_INDEX[tuple(f)] for f in faces]
    return weight_element(w, gens, len(GENERATOR_ORDER))


def pentagon_sides(weights: Mapping[str, GaussWeight]) -> tuple[GrassmannElement, GrassmannElement]:
    """``L = int W1234 W1345 dx134`` and ``R = int W1245 W2345 W1235 dx125 dx235 dx245``."""
    missing = set(LHS_TETRA + RHS_TETRA) - set(weights)
    if missing:
        raise ValueError(f"missing weights for {sorted(missing)}")
    el = {t: _tetra_element(t, weights[t]) for t in LHS_TETRA + RHS_TETRA}
    lhs = berezin(el["1234"] * el["1345"], [GEN_INDEX[t] for t in LHS_INNER])
    rhs = berezin(el["1245"] * el["2345"] * el["1235"], [GEN_INDEX[t] for t in RHS_INNER])
    return lhs, rhs


def boundary_mask() -> int:
    return sum(1 << GEN_INDEX[t] for t in BOUNDARY)


def pentagon_grassmann(weights: Mapping[str, GaussWeight], tol: float = 1e-9) -> tuple[float, complex]:
    """Check ``R = const * L`` coefficientwise; returns ``(max relative deviation, const)``."""
    lhs, rhs = pentagon_sides(weights)
    if lhs.max_abs() == 0:
        raise ZeroSide("left-hand side vanishes identically")
    if rhs.max_abs() == 0:
        raise ZeroSide("right-hand side vanishes identically")
    pivot = max(lhs.terms, key=lambda m: abs(lhs.terms[m]))
    const = rhs.coeff(pivot) / lhs.terms[pivot]
    diff = rhs - const * lhs
    dev = diff.max_abs() / rhs.max_abs()
    if dev > tol or const == 0:
        raise InconsistentRatio(
            f"coefficient ratios disagree: max relative deviation {dev:.3g}", deviation=dev, const=const
        )
    return dev, const


def boundary_support(f: GrassmannElement) -> tuple[bool, str]:
    """``(all monomials use boundary generators only, parity)``; parity is
    ``"even"``, ``"odd"``, ``"mixed"`` or ``"empty"``.

    Both pentagon sides come out odd: each is an even product integrated over
    an odd number of generators (one on the left, three on the right).
    """
    bm = boundary_mask()
    inside = all(m & ~bm == 0 for m in f.terms)
    if f.is_zero():
        return inside, "empty"
    if f.is_even():
        return inside, "even"
    if f.is_odd():
        return inside, "odd"
    return inside, "mixed"


# -- bridging flips and weights -------------------------------------------

def weights_from_flips(fs: FlipSet, tol: float = 1e-9) -> dict[str, GaussWeight]:
    """Read each 4x4 flip block as the canonical matrix of its tetrahedron's weight."""
    if fs.n != 2:
        raise ValueError("weights need 2-dimensional triangle spaces")
    out = {}
    for name in FLIP_NAMES:
        tet = TETRA_OF_FLIP[name]
        out[tet] = weight_from_matrix(fs.block(name), faces=WIRING[tet], tol=tol)
    return out


def embedded_canonical(weights: Mapping[str, GaussWeight], exclude: str | None = None) -> dict[str, np.ndarray]:
    out = {}
    for name in FLIP_NAMES:
        tet = TETRA_OF_FLIP[name]
        if tet == exclude:
            continue
        out[tet] = embed_block(canonical_matrix(weights[tet]), FLIP_TABLE[name][3], 2)
    return out


def matrix_pentagon_residual(weights: Mapping[str, GaussWeight]) -> float:
    """``||W1345 W1234 - W1235 W2345 W1245||_inf`` with 6x6 embeddings."""
    e = embedded_canonical(weights)
    return inf_norm(e["1345"] @ e["1234"] - e["1235"] @ e["2345"] @ e["1245"])


def gaussian_signs(zf: ZetaFamily, norms=None) -> dict[Triple, int]:
    """Square-root signs per triangle giving every isotropic flip block determinant +1.

    Each triangle lies in exactly two flips and flipping its sign negates
    both determinants; since det(QP) = det(TSR) a solution always exists.
    """
    base = isotropic_flips(zf, norms=norms)
    need = {}
    for name in FLIP_NAMES:
        det = np.linalg.det(base.block(name))
        need[name] = 1 if det.real > 0 else -1
    tris = list(ALL_TRIANGLES)
    member = {name: [tris.index(t) for t in flip_faces(name)] for name in FLIP_NAMES}
    for bits in range(1 << len(tris)):
        ok = True
        for name in FLIP_NAMES:
            par = sum(bits >> k & 1 for k in member[name]) & 1
            if (-1 if par else 1) != need[name]:
                ok = False
                break
        if ok:
            return {t: (-1 if bits >> k & 1 else 1) for k, t in enumerate(tris)}
    raise RuntimeError("no sign assignment found")  # unreachable: det(QP) = det(TSR)


def gaussian_isotropic_flips(zf: ZetaFamily, norms=None) -> FlipSet:
    return isotropic_flips(zf, signs=gaussian_signs(zf, norms), norms=norms)


def weights_from_zeta(zf: ZetaFamily, norms=None, tol: float = 1e-9) -> dict[str, GaussWeight]:
    return weights_from_flips(gaussian_isotropic_flips(zf, norms), tol)


def solve_fifth_weight(weights: Mapping[str, GaussWeight], missing: str, tol: float = 1e-9) -> GaussWeight:
    """The weight of ``missing`` that makes ``W1345 W1234 = W1235 W2345 W1245`` hold.

    The other four weights are embedded as 6x6 matrices, the relation is
    solved for the missing factor and its flip block is read back as a
    Gaussian weight. Raises ``NotGaussianGeneric`` if the solution is not
    block-shaped or not Gaussian.
    """
    e = embedded_canonical(weights, exclude=missing)
    inv = np.linalg.inv
    if missing == "1235":
        m = e["1345"] @ e["1234"] @ inv(e["1245"]) @ inv(e["2345"])
    elif missing == "1234":
        m = inv(e["1345"]) @ e["1235"] @ e["2345"] @ e["1245"]
    elif missing == "1345":
        m = e["1235"] @ e["2345"] @ e["1245"] @ inv(e["1234"])
    elif missing == "2345":
        m = inv(e["1235"]) @ e["1345"] @ e["1234"] @ inv(e["1245"])
    elif missing == "1245":
        m = inv(e["2345"]) @ inv(e["1235"]) @ e["1345"] @ e["1234"]
    else:
        raise ValueError(f"unknown tetrahedron {missing!r}")
    name = next(k for k, v in TETRA_OF_FLIP.items() if v == missing)
    slots = FLIP_TABLE[name][3]
    blk = extract_block(m, slots, 2)
    off = inf_norm(m - embed_block(blk, slots, 2))
    if off > tol * max(1.0, inf_norm(m)):
        raise NotGaussianGeneric(f"solved factor leaves its flip slots (off-block {off:.3g})")
    return weight_from_matrix(blk, faces=WIRING[missing], tol=tol)

