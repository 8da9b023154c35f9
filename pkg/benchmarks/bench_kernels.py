"""Compare the compiled and pure-Python Grassmann product kernels.

    python benchmarks/bench_kernels.py [--repeat R] [--seed S]

Times dense random products at several generator counts and the full
Grassmann pentagon check (ten generators), once per available backend.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from pentagon import grassmann as gm
from pentagon.directsum import random_zeta_family
from pentagon.weights import pentagon_grassmann, weights_from_zeta


def random_element(rng, n, density):
    mask = rng.random(1 << n) < density
    vals = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return gm.GrassmannElement.from_dense(n, np.where(mask, vals, 0))


def bench(backend: str, repeat: int, seed: int) -> dict[str, float]:
    prev = gm.use_backend(backend)
    try:
        rng = np.random.default_rng(seed)
        out = {}
        for n in (6, 8, 10):
            f, g = random_element(rng, n, 0.5), random_element(rng, n, 0.5)
            out[f"mul n={n}"] = min(timeit.repeat(lambda: f * g, number=1, repeat=repeat))
        ws = weights_from_zeta(random_zeta_family(rng, 2))
        out["pentagon check"] = min(timeit.repeat(lambda: pentagon_grassmann(ws), number=1, repeat=repeat))
        return out
    finally:
        gm.use_backend(prev)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    results = {b: bench(b, args.repeat, args.seed) for b in gm.available_backends()}
    cases = list(next(iter(results.values())))
    header = f"{'case':<16}" + "".join(f"{b:>14}" for b in results)
    if "cython" in results:
        header += f"{'speedup':>10}"
    print(header)
    for case in cases:
        row = f"{case:<16}" + "".join(f"{results[b][case] * 1e3:>11.3f} ms" for b in results)
        if "cython" in results:
            row += f"{results['python'][case] / results['cython'][case]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
