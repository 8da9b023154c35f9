"""The commuting family ``zeta_i = [[l_i + m_i, i m_i], [i m_i, l_i - m_i]]``.

For this family the flip of tetrahedron 1234 between isotropic bases has a
closed form whose zero pattern forces ``a c = b11 b22 - b12 b21`` in the
Gaussian weight. The printed constraint reads ``ac - b11 b12 + b12 b21 = 0``;
matching the zero entries against the ``(ac - Delta)`` entries of the
canonical matrix gives ``b11 b22`` for the middle term, which is what
:func:`check_constraint_u` tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .directsum import ALL_TRIANGLES, Triple, ZetaFamily
from .errors import DegenerateParameters
from .weights import GaussWeight


@dataclass(frozen=True)
class LambdaMuParams:
    lam: tuple[complex, ...]
    mu: tuple[complex, ...]

    def __post_init__(self):
        lam = tuple(complex(v) for v in self.lam)
        mu = tuple(complex(v) for v in self.mu)
        if len(lam) != len(mu) or len(lam) not in (4, 5):
            raise ValueError("need four or five (lambda, mu) pairs")
        for i in range(len(lam)):
            for j in range(i + 1, len(lam)):
                if lam[i] == lam[j]:
                    raise DegenerateParameters(f"lambda{i + 1} == lambda{j + 1}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)

    def l(self, i: int, j: int) -> complex:
        return self.lam[i - 1] - self.lam[j - 1]

    def m(self, i: int, j: int) -> complex:
        return self.mu[i - 1] - self.mu[j - 1]


def random_lm(rng: np.random.Generator, real: bool = True, min_gap: float = 0.1) -> LambdaMuParams:
    while True:
        lam = rng.uniform(-2, 2, 5)
        mu = rng.uniform(-2, 2, 5)
        if not real:
            lam = lam + 1j * rng.uniform(-2, 2, 5)
            mu = mu + 1j * rng.uniform(-2, 2, 5)
        gaps = [abs(lam[i] - lam[j]) for i in range(5) for j in range(i + 1, 5)]
        if min(gaps) >= min_gap:
            return LambdaMuParams(tuple(lam), tuple(mu))


def lm_matrix(lam: complex, mu: complex) -> np.ndarray:
    return np.array([[lam + mu, 1j * mu], [1j * mu, lam - mu]], dtype=np.complex128)


def zeta_from_lm(p: LambdaMuParams) -> ZetaFamily:
    if len(p.lam) != 5:
        raise ValueError("a zeta family needs five (lambda, mu) pairs")
    return ZetaFamily(tuple(lm_matrix(l, m) for l, m in zip(p.lam, p.mu)))


def vandermonde_mu_det(p: LambdaMuParams) -> complex:
    """Determinant with rows ``(1, l_i, l_i^2, m_i)`` over vertices 1..4.

    Equal ``mu`` gives exactly 0: the LU step on the all-ones column uses
    multipliers equal to 1, which cancels the ``mu`` column without rounding.
    """
    rows = [[1.0, p.lam[i], p.lam[i] ** 2, p.mu[i]] for i in range(4)]
    return complex(np.linalg.det(np.array(rows, dtype=np.complex128)))


def hat_p(p: LambdaMuParams) -> np.ndarray:
    l = p.l
    A = vandermonde_mu_det(p)
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = l(3, 2) * l(4, 1) / (l(3, 1) * l(4, 2))
    m[0, 2] = -l(3, 2) / l(3, 1)
    m[1, 0] = -l(2, 1) * A / (l(3, 1) * l(3, 2) * l(4, 2) ** 2)
    m[1, 1] = 1.0
    m[1, 2] = -A / (l(3, 1) * l(4, 2) * l(4, 3))
    m[1, 3] = -l(2, 1) * l(4, 3) / (l(3, 2) * l(4, 2))
    m[2, 0] = l(2, 1) * l(4, 3) / (l(3, 1) * l(4, 2))
    m[2, 2] = l(3, 2) / l(3, 1)
    m[3, 0] = l(4, 1) * A / (l(3, 1) * l(4, 2) ** 2 * l(4, 3))
    m[3, 1] = 1.0
    m[3, 2] = -A / (l(3, 1) * l(4, 2) * l(4, 3))
    m[3, 3] = l(4, 1) / l(4, 2)
    return m


HAT_P_ZEROS = ((0, 1), (0, 3), (2, 1), (2, 3))


def gram_lm(p: LambdaMuParams, triple: Triple) -> tuple[complex, complex]:
    """``(lambda, mu)`` of the triangle Gramian, which is again of the commuting form."""
    i, j, k = triple
    l, m = p.l, p.m
    lam = 2 * l(j, i) * l(k, i) / l(k, j)
    mu = 2 * (l(k, i) ** 2 * m(j, i) - l(j, i) ** 2 * m(k, i)) / l(k, j) ** 2
    return lam, mu


def lm_isotropic_change(lam: complex, mu: complex, c: complex = 1.0) -> np.ndarray:
    """``(1 / 2 lam) diag(c, 1/c) [[2, 2i], [lam - mu, -i (lam + mu)]]``."""
    if lam == 0:
        raise DegenerateParameters("Gramian lambda vanishes")
    core = np.array([[2, 2j], [lam - mu, -1j * (lam + mu)]], dtype=np.complex128)
    return np.diag([c, 1.0 / c]) @ core / (2 * lam)


def lm_changes(p: LambdaMuParams, consts: dict[Triple, complex] | None = None) -> dict[Triple, np.ndarray]:
    consts = consts or {}
    out = {}
    for t in ALL_TRIANGLES:
        lam, mu = gram_lm(p, t)
        out[t] = lm_isotropic_change(lam, mu, consts.get(t, 1.0))
    return out


def diagonal_gauge(target: np.ndarray, core: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Find ``L = diag(l1, 1/l1, l2, 1/l2)`` and ``R = diag(r1, 1/r1, r2, 1/r2)``
    with ``target ~= L core R``; returns ``(L, R, residual)``.

    Uses entries (1,1), (2,1), (1,3), (3,1), which are nonzero for the
    exotic flip.
    """
    ratio = lambda i, j: target[i, j] / core[i, j]  # noqa: E731
    l1 = np.sqrt(ratio(0, 0) / ratio(1, 0))
    r1 = ratio(0, 0) / l1
    r2 = ratio(0, 2) / l1
    l2 = ratio(2, 0) / r1
    L = np.diag([l1, 1 / l1, l2, 1 / l2])
    R = np.diag([r1, 1 / r1, r2, 1 / r2])
    res = float(np.max(np.abs(L @ core @ R - target)))
    return L, R, res


def check_constraint_u(w: GaussWeight) -> float:
    """``|a c - b11 b22 + b12 b21|``; zero on the exotic family."""
    b = w.b
    return float(abs(w.a * w.c - b[0, 0] * b[1, 1] + b[0, 1] * b[1, 0]))


def printed_constraint_u(w: GaussWeight) -> float:
    """The constraint with the middle term as printed (``b11 b12``); kept for comparison."""
    b = w.b
    return float(abs(w.a * w.c - b[0, 0] * b[0, 1] + b[0, 1] * b[1, 0]))


def hat_flips(p: LambdaMuParams):
    """All five closed-form-style exotic flips, via the isotropic bases with unit constants."""
    from .metric import isotropic_flips

    return isotropic_flips(zeta_from_lm(p), changes=lm_changes(p))


__all__ = [
    "LambdaMuParams",
    "random_lm",
    "zeta_from_lm",
    "lm_matrix",
    "hat_p",
    "HAT_P_ZEROS",
    "vandermonde_mu_det",
    "gram_lm",
    "lm_isotropic_change",
    "lm_changes",
    "diagonal_gauge",
    "check_constraint_u",
    "printed_constraint_u",
    "hat_flips",
]
