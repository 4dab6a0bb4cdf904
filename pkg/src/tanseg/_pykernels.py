"""Vectorised numpy versions of the grid-scan kernels (used when the extension is unavailable)."""

from __future__ import annotations

import numpy as np

CHUNK = 1 << 16


def _eval_rows(system, cols: list[np.ndarray], p: int, which=None) -> list[np.ndarray]:
    poly_ptr, term_ptr, var_idx, coef = system
    size = cols[0].shape[0] if cols else 1
    out = []
    for k in range(len(poly_ptr) - 1) if which is None else which:
        acc = np.zeros(size, dtype=np.int64)
        for t in range(poly_ptr[k], poly_ptr[k + 1]):
            mono = np.full(size, coef[t], dtype=np.int64)
            for j in range(term_ptr[t], term_ptr[t + 1]):
                mono = mono * cols[var_idx[j]] % p
            acc += mono
        out.append(acc % p)
    return out


def eval_system_mod_p(system, point, p: int) -> np.ndarray:
    cols = [np.array([int(x) % p], dtype=np.int64) for x in point]
    return np.array([v[0] for v in _eval_rows(system, cols, p)], dtype=np.int64)


def _all_zero(system, cols: list[np.ndarray], p: int, size: int) -> np.ndarray:
    """Mask of points where every polynomial vanishes; later polynomials only see survivors."""
    alive = np.arange(size)
    npolys = len(system[0]) - 1
    for k in range(npolys):
        if alive.size == 0:
            break
        sub = [c[alive] for c in cols]
        (val,) = _eval_rows(system, sub, p, which=[k])
        alive = alive[val == 0]
    mask = np.zeros(size, dtype=bool)
    mask[alive] = True
    return mask


def scan_grid(p: int, nvars: int, start: int, stop: int, pre, left, right):
    n_left = n_right = n_both = 0
    first_lo = first_ro = -1
    for lo in range(start, stop, CHUNK):
        hi = min(stop, lo + CHUNK)
        idx = np.arange(lo, hi, dtype=np.int64)
        size = idx.shape[0]
        digits = []
        rem = idx.copy()
        for _ in range(nvars):
            digits.append(rem % p)
            rem //= p
        digits.reverse()
        lcols = _eval_rows(pre, digits, p) if pre is not None else digits
        lz = _all_zero(left, lcols, p, size)
        rz = _all_zero(right, digits, p, size)
        n_left += int(lz.sum())
        n_right += int(rz.sum())
        n_both += int((lz & rz).sum())
        if first_lo < 0:
            hits = np.flatnonzero(lz & ~rz)
            if hits.size:
                first_lo = int(idx[hits[0]])
        if first_ro < 0:
            hits = np.flatnonzero(rz & ~lz)
            if hits.size:
                first_ro = int(idx[hits[0]])
    return n_left, n_right, n_both, first_lo, first_ro
