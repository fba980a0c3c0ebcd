"""Compiled vs pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times the raw int64 product (dense, and sparse like a braid generator),
the local-leg application and a full braid element evaluation (A_{1->4}
in the extended-R representation of gl11) on both backends, and checks
that the results agree.  Dense bounded inputs take the exact float64
BLAS route on both backends; the compiled loop pays off on sparse ones.
"""

import argparse
import statistics
import time

import numpy as np

from qbrst import _kernels
from qbrst.braid import build_antisymmetrizer, evaluate
from qbrst.qlie import bundled


def _time(fn, repeat):
    out, times = None, []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = ["python"] + (["compiled"] if _kernels.HAVE_COMPILED else [])
    rng = np.random.default_rng(0)
    a = rng.integers(-3, 4, size=(256, 256)).astype(np.int64)
    b = rng.integers(-3, 4, size=(256, 256)).astype(np.int64)
    sparse = np.where(rng.random((625, 625)) < 0.01, rng.integers(-3, 4, size=(625, 625)), 0).astype(np.int64)
    wide = rng.integers(-3, 4, size=(625, 625)).astype(np.int64)
    op = rng.integers(-2, 3, size=(25, 25)).astype(np.int64)
    mat = rng.integers(-2, 3, size=(5, 25, 625)).astype(np.int64)
    gl11 = bundled("gl11")
    rep = gl11.r_rep()
    a4 = build_antisymmetrizer(4)

    cases = [
        ("matmul 256x256", lambda be: _kernels.matmul(a, b, backend=be)),
        ("matmul 625x625, 1% nonzero left", lambda be: _kernels.matmul(sparse, wide, backend=be)),
        ("apply_local 25 on 5x25x625", lambda be: _kernels.apply_local(op, mat, backend=be)),
        ("A_1->4, gl11 extended R (625x625)", lambda be: evaluate(a4, rep, 4, backend=be).data),
    ]
    print(f"{'case':40} " + " ".join(f"{be:>12}" for be in backends) + "   agree")
    for name, fn in cases:
        results, cells = [], []
        for be in backends:
            res, t = _time(lambda: fn(be), args.repeat)
            results.append(np.asarray(res))
            cells.append(f"{t * 1e3:10.2f}ms")
        agree = all(np.array_equal(results[0], r) for r in results[1:])
        print(f"{name:40} " + " ".join(cells) + f"   {agree}")
    if not _kernels.HAVE_COMPILED:
        print("compiled backend not built; only the fallback was timed")


if __name__ == "__main__":
    main()
