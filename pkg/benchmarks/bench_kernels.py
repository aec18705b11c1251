"""Time each hot kernel in its compiled-loop and vectorised-numpy form.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

The loop variants are numba-compiled when numba is installed (the first
call, which triggers compilation, is excluded).  Without numba they run as
plain Python and the comparison shows why the numpy path is the fallback.
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from monoidk import _accel, kernels, steinberg
from monoidk.monoid import cyclic_group_monoid, symmetric_group


def best_of(fn, repeat):
    fn()  # warm-up and compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    table = cyclic_group_monoid(60).table
    yield "associativity scan (61 elements)", (table,), kernels.associativity_defects_loop, kernels.associativity_defects_numpy

    g = symmetric_group(4)
    m, n = 200_000, 6
    perm_a = np.argsort(rng.random((m, n)), axis=1)
    perm_b = np.argsort(rng.random((m, n)), axis=1)
    diag_a = rng.integers(0, g.order, size=(m, n))
    diag_b = rng.integers(0, g.order, size=(m, n))
    args = (perm_a, diag_a, perm_b, diag_b, np.asarray(g.table, dtype=np.int64))
    yield f"monomial product ({m} pairs, n={n})", args, kernels.monomial_product_loop, kernels.monomial_product_numpy
    inv = np.asarray(g.inverse, dtype=np.int64)
    yield f"monomial inverse ({m}, n={n})", (perm_a, diag_a, inv), kernels.monomial_inverse_loop, kernels.monomial_inverse_numpy
    yield (
        f"monomial encode ({m}, n={n})",
        (perm_a, diag_a, g.order),
        kernels.monomial_encode_loop,
        kernels.monomial_encode_numpy,
    )

    d, count, window = 6, 200_000, 12
    ab, av = steinberg.random_elements(d, count, window, rng)
    bb, bv = steinberg.random_elements(d, count, window, rng)
    yield f"cocycle product (d={d}, {count} pairs)", (ab, av, bb, bv, d), kernels.cocycle_product_loop, kernels.cocycle_product_numpy


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", help="also write the timings here")
    args = p.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    rows = []
    label = "numba" if _accel.HAVE_NUMBA else "python loop"
    print(f"{'kernel':44s} {label:>12s} {'numpy':>12s} {'ratio':>8s}")
    for name, kargs, loop, vec in cases(rng):
        kargs = tuple(np.ascontiguousarray(a, dtype=np.int64) if isinstance(a, np.ndarray) else a for a in kargs)
        a, b = loop(*kargs), vec(*kargs)
        same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) else np.array_equal(a, b)
        t_loop = best_of(lambda: loop(*kargs), args.repeat)
        t_vec = best_of(lambda: vec(*kargs), args.repeat)
        rows.append({"kernel": name, "loop_s": t_loop, "numpy_s": t_vec, "agree": bool(same)})
        print(f"{name:44s} {t_loop * 1e3:10.2f}ms {t_vec * 1e3:10.2f}ms {t_vec / t_loop:7.2f}x" + ("" if same else "  MISMATCH"))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"backend": label, "seed": args.seed, "results": rows}, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
