"""Finite Grassmann algebra over the complex numbers.

A monomial is a bitmask over generators ``0..num_gens-1``, read in increasing
generator order, so ``0b101`` is ``x0 x2``. Signs from reordering live in
the coefficient.

Conventions:

* ``left_deriv(i, x_i f) = f`` and ``right_deriv(f x_i, i) = f`` for ``f``
  free of ``x_i``.
* The Berezin integral is the right derivative. For ``order = [y, x]``,
  ``berezin(f, order)`` is ``(f <-d/dy) <-d/dx``; with this ordering
  ``berezin(x*y, [y, x]) == 1``: the first differential listed is the
  innermost integral.

Products use a compiled kernel when the extension is importable and
``num_gens <= PACKED_MAX_GENS``; otherwise a pure-Python path.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels as _py_kernels
from .errors import GeneratorMismatch, NotNilpotentSafe

try:
    if os.environ.get("PENTAGON_PURE_PYTHON"):
        raise ImportError("pure-Python backend requested")
    from . import _gcore as _fast_kernels
except ImportError:
    _fast_kernels = None

PACKED_MAX_GENS = 16
_kern = _fast_kernels if _fast_kernels is not None else _py_kernels
BACKEND = "cython" if _fast_kernels is not None else "python"


def available_backends() -> list[str]:
    return ["cython", "python"] if _fast_kernels is not None else ["python"]


def use_backend(name: str) -> str:
    """Switch the product kernel; returns the previous backend name."""
    global _kern, BACKEND
    prev = BACKEND
    if name == "cython":
        if _fast_kernels is None:
            raise RuntimeError("compiled kernel is not available")
        _kern = _fast_kernels
    elif name == "python":
        _kern = _py_kernels
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND = name
    return prev


def reorder_sign(a: int, b: int) -> int:
    return _py_kernels.reorder_sign(a, b)


@dataclass(frozen=True, eq=False)
class GrassmannElement:
    num_gens: int
    terms: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.num_gens < 0:
            raise ValueError("num_gens must be nonnegative")
        limit = 1 << self.num_gens
        clean = {}
        for m, c in self.terms.items():
            m = int(m)
            if m < 0 or m >= limit:
                raise GeneratorMismatch(f"monomial {m:#b} uses generators beyond {self.num_gens}")
            c = complex(c)
            if c != 0:
                clean[m] = c
        object.__setattr__(self, "terms", clean)

    # -- constructors ---------------------------------------------------
    @classmethod
    def scalar(cls, num_gens: int, value: complex = 1.0) -> "GrassmannElement":
        return cls(num_gens, {0: value})

    @classmethod
    def generator(cls, num_gens: int, i: int) -> "GrassmannElement":
        if not 0 <= i < num_gens:
            raise GeneratorMismatch(f"generator {i} out of range for {num_gens}")
        return cls(num_gens, {1 << i: 1.0})

    @classmethod
    def monomial(cls, num_gens: int, gens: Sequence[int], coeff: complex = 1.0) -> "GrassmannElement":
        """``coeff * x_{g0} x_{g1} ...`` in the given (not necessarily sorted) order."""
        out = cls.scalar(num_gens, coeff)
        for g in gens:
            out = out * cls.generator(num_gens, g)
        return out

    @classmethod
    def from_dense(cls, num_gens: int, arr) -> "GrassmannElement":
        arr = np.asarray(arr)
        nz = np.flatnonzero(arr)
        return cls(num_gens, {int(m): complex(arr[m]) for m in nz})

    # -- queries --------------------------------------------------------
    def to_dense(self) -> np.ndarray:
        out = np.zeros(1 << self.num_gens, dtype=np.complex128)
        for m, c in self.terms.items():
            out[m] = c
        return out

    def coeff(self, mask: int) -> complex:
        return self.terms.get(mask, 0j)

    @property
    def scalar_part(self) -> complex:
        return self.terms.get(0, 0j)

    def is_even(self) -> bool:
        return all(m.bit_count() % 2 == 0 for m in self.terms)

    def is_odd(self) -> bool:
        return all(m.bit_count() % 2 == 1 for m in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def contains(self, i: int) -> bool:
        return any(m >> i & 1 for m in self.terms)

    def chop(self, tol: float = 1e-14) -> "GrassmannElement":
        return GrassmannElement(self.num_gens, {m: c for m, c in self.terms.items() if abs(c) > tol})

    def close_to(self, other: "GrassmannElement", tol: float = 1e-12) -> bool:
        return (self - other).max_abs() <= tol

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "GrassmannElement"):
        if self.num_gens != other.num_gens:
            raise GeneratorMismatch(f"{self.num_gens} vs {other.num_gens} generators")

    def _lift(self, other) -> "GrassmannElement":
        if isinstance(other, GrassmannElement):
            self._check(other)
            return other
        return GrassmannElement.scalar(self.num_gens, other)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0j) + c
        return GrassmannElement(self.num_gens, t)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement(self.num_gens, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, GrassmannElement):
            return g_mul(self, other)
        return GrassmannElement(self.num_gens, {m: c * other for m, c in self.terms.items()})

    def __rmul__(self, other):
        return GrassmannElement(self.num_gens, {m: other * c for m, c in self.terms.items()})

    def __truediv__(self, other):
        return self * (1.0 / other)

    def __eq__(self, other):
        if isinstance(other, GrassmannElement):
            return self.num_gens == other.num_gens and self.terms == other.terms
        if np.isscalar(other):
            return self.terms == ({0: complex(other)} if other != 0 else {})
        return NotImplemented

    def __hash__(self):
        return hash((self.num_gens, frozenset(self.terms.items())))

    def __repr__(self):
        return f"GrassmannElement({self.num_gens}, {render(self)})"

    def __str__(self):
        return render(self)


def g_mul(f: GrassmannElement, g: GrassmannElement) -> GrassmannElement:
    if f.num_gens != g.num_gens:
        raise GeneratorMismatch(f"{f.num_gens} vs {g.num_gens} generators")
    if not f.terms or not g.terms:
        return GrassmannElement(f.num_gens)
    if f.num_gens <= PACKED_MAX_GENS:
        ma = np.fromiter(f.terms.keys(), dtype=np.int64, count=len(f.terms))
        ca = np.fromiter(f.terms.values(), dtype=np.complex128, count=len(f.terms))
        mb = np.fromiter(g.terms.keys(), dtype=np.int64, count=len(g.terms))
        cb = np.fromiter(g.terms.values(), dtype=np.complex128, count=len(g.terms))
        return GrassmannElement.from_dense(f.num_gens, _kern.mul_dense(ma, ca, mb, cb, f.num_gens))
    out: dict[int, complex] = {}
    for a, x in f.terms.items():
        for b, y in g.terms.items():
            s = reorder_sign(a, b)
            if s:
                out[a | b] = out.get(a | b, 0j) + s * x * y
    return GrassmannElement(f.num_gens, out)


def g_exp(f: GrassmannElement) -> GrassmannElement:
    """Taylor series of the exponent; terminates since ``f`` is nilpotent."""
    if f.scalar_part != 0:
        raise NotNilpotentSafe("exponent argument has a nonzero scalar term")
    if not f.is_even():
        raise NotNilpotentSafe("exponent argument has odd terms")
    result = GrassmannElement.scalar(f.num_gens)
    power = GrassmannElement.scalar(f.num_gens)
    for k in range(1, f.num_gens // 2 + 1):
        power = power * f
        if power.is_zero():
            break
        result = result + power / math.factorial(k)
    return result


def _check_gen(f: GrassmannElement, i: int):
    if not 0 <= i < f.num_gens:
        raise GeneratorMismatch(f"generator {i} out of range for {f.num_gens}")


def left_deriv(i: int, f: GrassmannElement) -> GrassmannElement:
    _check_gen(f, i)
    bit = 1 << i
    below = bit - 1
    out = {}
    for m, c in f.terms.items():
        if m & bit:
            out[m ^ bit] = -c if (m & below).bit_count() & 1 else c
    return GrassmannElement(f.num_gens, out)


def right_deriv(f: GrassmannElement, i: int) -> GrassmannElement:
    _check_gen(f, i)
    bit = 1 << i
    out = {}
    for m, c in f.terms.items():
        if m & bit:
            out[m ^ bit] = -c if (m >> (i + 1)).bit_count() & 1 else c
    return GrassmannElement(f.num_gens, out)


def berezin(f: GrassmannElement, order: Sequence[int]) -> GrassmannElement:
    """Iterated Berezin integral; ``order`` lists differentials left to right."""
    if len(set(order)) != len(order):
        raise ValueError(f"integration variables repeat: {order}")
    for i in order:
        f = right_deriv(f, i)
    return f


def left_mul(i: int, f: GrassmannElement) -> GrassmannElement:
    return GrassmannElement.generator(f.num_gens, i) * f


def grade_parts(f: GrassmannElement) -> tuple[GrassmannElement, GrassmannElement]:
    ev = {m: c for m, c in f.terms.items() if m.bit_count() % 2 == 0}
    od = {m: c for m, c in f.terms.items() if m.bit_count() % 2 == 1}
    return GrassmannElement(f.num_gens, ev), GrassmannElement(f.num_gens, od)


def basis_monomials(num_gens: int) -> Iterable[GrassmannElement]:
    for m in range(1 << num_gens):
        yield GrassmannElement(num_gens, {m: 1.0})


# -- labels and rendering --------------------------------------------------

@dataclass(frozen=True, order=True)
class GeneratorLabel:
    position: int
    name: str


def triangle_order(triangles: Iterable[tuple[int, int, int]]) -> list[tuple[int, int, int]]:
    """Sort triangles by vertex sum, ties lexicographically."""
    return sorted(set(tuple(t) for t in triangles), key=lambda t: (sum(t), t))


def triangle_labels(triangles: Iterable[tuple[int, int, int]]) -> list[GeneratorLabel]:
    return [GeneratorLabel(p, "x" + "".join(map(str, t))) for p, t in enumerate(triangle_order(triangles))]


def _fmt_coeff(c: complex) -> str:
    def num(v: float) -> str:
        if float(v).is_integer() and abs(v) < 1e15:
            return str(int(v))
        return f"{v:.12g}"

    if c.imag == 0:
        return num(c.real)
    if c.real == 0:
        return num(c.imag) + "i"
    return f"({num(c.real)}{'+' if c.imag >= 0 else '-'}{num(abs(c.imag))}i)"


def render(f: GrassmannElement, labels: Sequence[str] | None = None) -> str:
    """Text form with monomials sorted by degree, then mask: ``1 + x0x1 - 2*x2x3``."""
    if labels is None:
        labels = [f"x{i}" for i in range(f.num_gens)]
    if not f.terms:
        return "0"
    parts = []
    for m in sorted(f.terms, key=lambda m: (m.bit_count(), m)):
        c = f.terms[m]
        word = "".join(labels[i] for i in range(f.num_gens) if m >> i & 1)
        neg = c.imag == 0 and c.real < 0
        mag = _fmt_coeff(-c if neg else c)
        if word:
            body = word if mag == "1" else f"{mag}*{word}"
        else:
            body = mag
        parts.append(("- " if neg else "+ ") + body)
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]
