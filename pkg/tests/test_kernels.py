import random

import numpy as np
import pytest

from tanseg import kernels
from tanseg.oracle import matrix_minor_system, uvw_binomials, uvw_cubic_system
from tanseg.poly import SparsePoly
from tanseg.reference import binomial_generators
from tanseg.schur import cubic_module

needs_ext = pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernels not built")


def test_compile_mod_p_layout():
    x = [SparsePoly.var("UVW", 4, k) for k in range(3)]
    f = x[0] * x[1] * 3 - x[2] * 2
    sysm = kernels.compile_mod_p([f, f * 0 + 7], 5)
    poly_ptr, term_ptr, var_idx, coef = sysm
    assert poly_ptr.tolist() == [0, 2, 3]
    assert sorted(coef.tolist()[:2]) == [3, 3]  # -2 is 3 mod 5
    assert coef.dtype == np.int64 and var_idx.size == 3
    with pytest.raises(ValueError):
        kernels.compile_mod_p([f], 1 << 31)


def test_fraction_coefficients_are_cleared():
    u = SparsePoly.var("UVW", 4, 0)
    half = u * SparsePoly.const("UVW", 4, "1/2") - 1
    sysm = kernels.compile_mod_p([half], 7)
    assert kernels.eval_system_mod_p(sysm, [2, 0, 0], 7) == [0]
    assert kernels.eval_system_mod_p(sysm, [3, 0, 0], 7) == [1]


def test_eval_matches_exact_arithmetic():
    rng = random.Random(0)
    polys = cubic_module(4).polys[:10]
    sysm = kernels.compile_mod_p(polys, 101)
    for _ in range(20):
        pt = [rng.randrange(101) for _ in range(16)]
        exact = [int(f.evaluate(pt)) % 101 for f in polys]
        assert kernels.eval_system_mod_p(sysm, pt, 101) == exact


def test_backend_lookup():
    assert kernels.backend_module("numpy").__name__.endswith("_pykernels")
    with pytest.raises(ValueError):
        kernels.backend_module("fortran")


@needs_ext
@pytest.mark.parametrize("p", [5, 7, 13])
def test_backends_agree_on_uvw_scan(p):
    left = kernels.compile_mod_p(uvw_cubic_system(), p)
    right = kernels.compile_mod_p(uvw_binomials(), p)
    results = {b: kernels.scan_grid(p, 3, 0, p ** 3, None, left, right, backend=b) for b in ("cython", "numpy")}
    assert results["cython"] == results["numpy"]


@needs_ext
def test_backends_agree_on_matrix_scan_slice():
    p = 3
    pre = kernels.compile_mod_p(matrix_minor_system(4), p)
    left = kernels.compile_mod_p(cubic_module(4).polys, p)
    right = kernels.compile_mod_p(binomial_generators(), p)
    for lo, hi in [(0, 5000), (12345, 19683), (59000, 59049)]:
        a = kernels.scan_grid(p, 10, lo, hi, pre, left, right, backend="cython")
        b = kernels.scan_grid(p, 10, lo, hi, pre, left, right, backend="numpy")
        assert a == b


@needs_ext
def test_backends_agree_on_eval():
    rng = random.Random(1)
    sysm = kernels.compile_mod_p(cubic_module(4).polys, 5)
    for _ in range(10):
        pt = [rng.randrange(5) for _ in range(16)]
        assert kernels.eval_system_mod_p(sysm, pt, 5, "cython") == kernels.eval_system_mod_p(sysm, pt, 5, "numpy")


def test_empty_range():
    s = kernels.compile_mod_p(uvw_binomials(), 5)
    assert kernels.scan_grid(5, 3, 10, 10, None, s, s) == (0, 0, 0, -1, -1)
