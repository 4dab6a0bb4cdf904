"""Kernel selection: the compiled extension when importable, else the numpy fallback.

Set ``TANSEG_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from math import lcm
from typing import Sequence

import numpy as np

from . import _pykernels
from .poly import SparsePoly

if os.environ.get("TANSEG_PURE_PYTHON", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from . import _ckernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "numpy"
_impl = _compiled if _compiled is not None else _pykernels


def backend_module(name: str | None = None):
    """Kernel module by name ("cython" or "numpy"); default is the import-time choice."""
    if name is None:
        return _impl
    if name == "numpy":
        return _pykernels
    if name == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")


def compile_mod_p(polys: Sequence[SparsePoly], p: int) -> tuple[np.ndarray, ...]:
    """Pack polynomials into flat arrays (poly_ptr, term_ptr, var_idx, coef) with coefficients mod p.

    Each polynomial is first scaled by the lcm of its denominators, which
    keeps the zero set unchanged.
    """
    if not 2 <= p < 1 << 31:
        raise ValueError("modulus must lie in [2, 2^31)")
    poly_ptr, term_ptr, var_idx, coef = [0], [0], [], []
    for f in polys:
        den = 1
        for c in f.terms.values():
            den = lcm(den, c.denominator)
        for m, c in f.terms.items():
            r = int(c * den) % p
            if not r:
                continue
            coef.append(r)
            var_idx.extend(m)
            term_ptr.append(len(var_idx))
        poly_ptr.append(len(coef))
    as_arr = lambda xs: np.ascontiguousarray(np.array(xs, dtype=np.int64))  # noqa: E731
    return as_arr(poly_ptr), as_arr(term_ptr), as_arr(var_idx), as_arr(coef)


def eval_system_mod_p(system, point, p: int, backend: str | None = None) -> list[int]:
    return [int(x) for x in backend_module(backend).eval_system_mod_p(system, point, p)]


def scan_grid(p, nvars, start, stop, pre, left, right, backend: str | None = None):
    return tuple(int(x) for x in backend_module(backend).scan_grid(p, nvars, start, stop, pre, left, right))
