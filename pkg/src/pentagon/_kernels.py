"""Pure-Python Grassmann product kernel (fallback for ``_gcore``)."""

import numpy as np


def reorder_sign(a: int, b: int) -> int:
    """Sign of the product of monomials ``a`` and ``b`` (bitmasks) in canonical order.

    Counts pairs (p in a, q in b) with p > q; returns 0 if they share a generator.
    """
    if a & b:
        return 0
    swaps = 0
    while b:
        low = b & -b
        swaps += (a & ~((low << 1) - 1)).bit_count()
        b ^= low
    return -1 if swaps & 1 else 1


def mul_dense(ma, ca, mb, cb, ngen):
    """Product of two sparse term lists accumulated into a dense array of size 2**ngen."""
    out = [0j] * (1 << ngen)
    mb_l = [int(x) for x in mb]
    cb_l = [complex(x) for x in cb]
    pairs = list(zip(mb_l, cb_l))
    for a, x in zip(ma, ca):
        a = int(a)
        x = complex(x)
        for b, y in pairs:
            if a & b:
                continue
            s = reorder_sign(a, b)
            out[a | b] += s * x * y
    return np.array(out, dtype=np.complex128)
