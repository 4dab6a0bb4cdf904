"""Compare the compiled and numpy grid-scan kernels on the finite-field oracles.

Usage: python3 benchmarks/bench_kernels.py [--points N]
"""

import argparse
import time

from tanseg import kernels
from tanseg.membership import module_basis
from tanseg.oracle import matrix_minor_system, uvw_binomials, uvw_cubic_system
from tanseg.reference import binomial_generators


def bench(label, p, nvars, stop, pre, left, right):
    cp = kernels.compile_mod_p(pre, p) if pre else None
    cl, cr = kernels.compile_mod_p(left, p), kernels.compile_mod_p(right, p)
    rows = []
    for backend in ("cython", "numpy"):
        try:
            kernels.backend_module(backend)
        except RuntimeError:
            rows.append((backend, None, None))
            continue
        t = time.perf_counter()
        out = kernels.scan_grid(p, nvars, 0, stop, cp, cl, cr, backend=backend)
        rows.append((backend, time.perf_counter() - t, out))
    print(f"{label}: {stop} points")
    base = rows[0][1]
    for backend, secs, out in rows:
        if secs is None:
            print(f"  {backend:7s} unavailable")
            continue
        rate = stop / secs
        speed = f"  x{secs / base:.1f} slower" if backend != "cython" and base else ""
        print(f"  {backend:7s} {secs:8.3f} s  {rate:12.0f} points/s  counts={out[:3]}{speed}")
    results = {out for _, s, out in rows if s is not None}
    assert len(results) == 1, "backends disagree"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=500_000)
    args = ap.parse_args()
    cubics = module_basis("cubic", 4).polys
    bench("matrix oracle, p=3 (full grid)", 3, 10, 3 ** 10, matrix_minor_system(4), cubics, binomial_generators())
    bench("matrix oracle, p=5 (prefix)", 5, 10, min(args.points, 5 ** 10), matrix_minor_system(4), cubics,
          binomial_generators())
    bench("uvw oracle, p=101 (full grid)", 101, 3, 101 ** 3, None, uvw_cubic_system(), uvw_binomials())


if __name__ == "__main__":
    main()
