"""Finite-field enumeration oracles comparing zero sets of two polynomial systems.

A system is compared on every point of F_p^m.  For the matrix oracle the
cubic-module system is evaluated through the principal minors of the
symmetric matrix (t = 1), which equals evaluating its pullback.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from . import kernels
from .core import is_prime
from .poly import SparsePoly, a_pairs, principal_minor_poly, pullback, rewrite_uvw, specialize_t
from .reference import binomial_generators
from .schur import cubic_hwvs, cubic_module

DEFAULT_MAX_POINTS = 10 ** 8


class OracleError(ValueError):
    pass


class BudgetExceeded(OracleError):
    pass


@dataclass
class ZeroSetReport:
    p: int
    variables: int
    points: int
    left_zeros: int
    right_zeros: int
    common_zeros: int
    verdict: str
    counterexample: list[int] | None = None
    counterexample_side: str | None = None
    labels: tuple[str, str] = ("left", "right")
    seconds: float = 0.0
    backend: str = ""
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "variables": self.variables,
            "points": self.points,
            "zero_set_sizes": {self.labels[0]: self.left_zeros, self.labels[1]: self.right_zeros},
            "common_zeros": self.common_zeros,
            "verdict": self.verdict,
            "counterexample": self.counterexample,
            "counterexample_only_in": self.counterexample_side,
            "systems": {"left": self.labels[0], "right": self.labels[1]},
            **self.extra,
        }


def verdict_from_counts(left: int, right: int, common: int) -> str:
    left_only, right_only = left - common, right - common
    if not left_only and not right_only:
        return "equal"
    if not left_only:
        return "left⊂right"
    if not right_only:
        return "right⊂left"
    return "incomparable"


def _decode(index: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(index % p)
        index //= p
    return out[::-1]


def _scan_chunk(args):
    p, m, lo, hi, pre, left, right, backend = args
    return kernels.scan_grid(p, m, lo, hi, pre, left, right, backend=backend)


def _merge(parts):
    """Sum counts and keep the smallest counterexample index; independent of chunk order."""
    nl = sum(x[0] for x in parts)
    nr = sum(x[1] for x in parts)
    nb = sum(x[2] for x in parts)
    lo_hits = [x[3] for x in parts if x[3] >= 0]
    ro_hits = [x[4] for x in parts if x[4] >= 0]
    return nl, nr, nb, min(lo_hits, default=-1), min(ro_hits, default=-1)


def compare_zero_sets(
    p: int,
    nvars: int,
    left: Sequence[SparsePoly],
    right: Sequence[SparsePoly],
    *,
    pre: Sequence[SparsePoly] | None = None,
    labels: tuple[str, str] = ("left", "right"),
    jobs: int = 1,
    chunks: int | None = None,
    budget_seconds: float | None = None,
    max_points: int = DEFAULT_MAX_POINTS,
    backend: str | None = None,
) -> ZeroSetReport:
    """Enumerate F_p^nvars and compare the zero sets of ``left`` (after ``pre``) and ``right``."""
    if not is_prime(p):
        raise OracleError(f"{p} is not prime")
    points = p ** nvars
    if points > max_points:
        raise BudgetExceeded(f"{p}^{nvars} = {points} points exceeds the limit of {max_points}")
    cpre = kernels.compile_mod_p(pre, p) if pre is not None else None
    cl = kernels.compile_mod_p(left, p)
    cr = kernels.compile_mod_p(right, p)
    impl = backend or kernels.BACKEND
    start = time.perf_counter()
    done = 0
    parts = []
    if budget_seconds is not None and points > 4096:
        probe = min(points, 4096)
        parts.append(kernels.scan_grid(p, nvars, 0, probe, cpre, cl, cr, backend=backend))
        rate = probe / max(time.perf_counter() - start, 1e-9)
        estimate = points / rate / max(jobs, 1)
        if estimate > budget_seconds:
            raise BudgetExceeded(f"estimated {estimate:.0f} s for {points} points exceeds budget {budget_seconds} s")
        done = probe
    jobs = max(1, jobs)
    nchunks = max(1, chunks if chunks is not None else jobs * 4)
    remaining = points - done
    step = -(-remaining // nchunks) if remaining else 0
    tasks = [(p, nvars, lo, min(points, lo + step), cpre, cl, cr, impl)
             for lo in range(done, points, step or 1) if step]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, os.cpu_count() or 1)) as pool:
            parts.extend(pool.map(_scan_chunk, tasks))
    else:
        parts.extend(_scan_chunk(t) for t in tasks)
    nl, nr, nb, first_lo, first_ro = _merge(parts)
    verdict = verdict_from_counts(nl, nr, nb)
    cex, side = None, None
    if first_lo >= 0 or first_ro >= 0:
        candidates = [(i, s) for i, s in ((first_lo, labels[0]), (first_ro, labels[1])) if i >= 0]
        i, side = min(candidates)
        cex = _decode(i, p, nvars)
    return ZeroSetReport(p, nvars, points, nl, nr, nb, verdict, cex, side, labels,
                         time.perf_counter() - start, impl)


# ---------------------------------------------------------------------------
# the two concrete oracles


def uvw_cubic_system() -> list[SparsePoly]:
    """The three cubic pullbacks at t = 1 written in u, v, w, each divided by its content."""
    out = []
    for h in cubic_hwvs(4):
        g, _ = rewrite_uvw(specialize_t(pullback(h)))
        out.append(g.primitive())
    return out


def uvw_binomials() -> list[SparsePoly]:
    u, v, w = (SparsePoly.var("UVW", 4, k) for k in range(3))
    return [u - w, v - w]


def compare_zero_sets_uvw(p: int, left: Sequence[SparsePoly] | None = None, **kw) -> ZeroSetReport:
    """Zeros of the u, v, w cubic pullbacks (or ``left``) against the binomials u - w, v - w over F_p^3."""
    if p < 5:
        raise OracleError("the u, v, w oracle needs p >= 5")
    system = uvw_cubic_system() if left is None else list(left)
    report = compare_zero_sets(p, 3, system, uvw_binomials(),
                               labels=("cubics", "binomials"), **kw)
    report.extra["polys"] = [str(f) for f in system]
    return report


def matrix_minor_system(n: int) -> list[SparsePoly]:
    """Principal minors of a symmetric n x n matrix as polynomials in its entries.

    With t = 1 the grid variables are the n(n+1)/2 entries in the order a_{1,1} < a_{1,2} < ...
    """
    return [specialize_t(principal_minor_poly(n, bits)) for bits in range(1 << n)]


def compare_zero_sets_matrix(
    p: int,
    n: int = 4,
    exclude: Sequence[int] = (),
    module=None,
    **kw,
) -> ZeroSetReport:
    """All symmetric n x n matrices over F_p (t = 1): common zeros of the cubic module vs. the two binomials.

    ``exclude`` lists basis positions to drop from the cubic system.
    """
    if n != 4:
        raise OracleError("the binomial comparison is defined for n = 4")
    if p not in (3, 5) and not kw.pop("allow_any_prime", False):
        raise OracleError("the matrix oracle is configured for p in {3, 5}")
    basis = list(module if module is not None else cubic_module(n).polys)
    dropped = set(exclude)
    left = [f for k, f in enumerate(basis) if k not in dropped]
    right = binomial_generators()
    report = compare_zero_sets(p, len(a_pairs(n)), left, right, pre=matrix_minor_system(n),
                               labels=("cubic_module", "binomials"), **kw)
    report.extra["cubics"] = len(left)
    report.extra["grid_variables"] = [f"a_{i}_{j}" for i, j in a_pairs(n)]
    return report
