# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid scans over F_p for the zero-set oracles."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


cdef inline int64_t _eval_poly(
    int64_t k, const int64_t[::1] poly_ptr, const int64_t[::1] term_ptr,
    const int64_t[::1] var_idx, const int64_t[::1] coef,
    const int64_t* vals, int64_t p,
) noexcept nogil:
    # operands are reduced below p, so a product is reduced only once it could overflow
    cdef int64_t limit = (<int64_t>1 << 62) // p
    cdef int64_t acc = 0, mono, t, j
    for t in range(poly_ptr[k], poly_ptr[k + 1]):
        mono = coef[t]
        for j in range(term_ptr[t], term_ptr[t + 1]):
            if mono >= limit:
                mono %= p
            mono = mono * vals[var_idx[j]]
        acc += mono % p
        if acc >= limit:
            acc %= p
    return acc % p


cdef inline bint _all_zero(
    const int64_t[::1] poly_ptr, const int64_t[::1] term_ptr,
    const int64_t[::1] var_idx, const int64_t[::1] coef,
    const int64_t* vals, int64_t p,
) noexcept nogil:
    cdef int64_t k
    for k in range(poly_ptr.shape[0] - 1):
        if _eval_poly(k, poly_ptr, term_ptr, var_idx, coef, vals, p):
            return False
    return True


def eval_system_mod_p(system, point, int64_t p):
    """Values of every polynomial of ``system`` at ``point`` modulo p."""
    cdef const int64_t[::1] poly_ptr = system[0]
    cdef const int64_t[::1] term_ptr = system[1]
    cdef const int64_t[::1] var_idx = system[2]
    cdef const int64_t[::1] coef = system[3]
    cdef int64_t[::1] vals = np.ascontiguousarray(np.asarray(point, dtype=np.int64) % p)
    cdef int64_t k, m = poly_ptr.shape[0] - 1
    out = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] o = out
    for k in range(m):
        o[k] = _eval_poly(k, poly_ptr, term_ptr, var_idx, coef, &vals[0], p)
    return out


def scan_grid(int64_t p, int64_t nvars, int64_t start, int64_t stop, pre, left, right):
    """Scan grid points start..stop-1 of F_p^nvars (digit 0 is the most significant).

    ``pre`` (or None) maps the point to the values the ``left`` system is
    evaluated on; ``right`` is evaluated on the point itself.  Returns
    (left_zeros, right_zeros, both_zeros, first_left_only, first_right_only)
    with -1 for an absent counterexample.
    """
    cdef const int64_t[::1] pp, pt, pv, pc
    cdef const int64_t[::1] lp = left[0]
    cdef const int64_t[::1] lt = left[1]
    cdef const int64_t[::1] lv = left[2]
    cdef const int64_t[::1] lc = left[3]
    cdef const int64_t[::1] rp = right[0]
    cdef const int64_t[::1] rt = right[1]
    cdef const int64_t[::1] rv = right[2]
    cdef const int64_t[::1] rc = right[3]
    cdef bint has_pre = pre is not None
    cdef int64_t npre = 0
    if has_pre:
        pp = pre[0]
        pt = pre[1]
        pv = pre[2]
        pc = pre[3]
        npre = pp.shape[0] - 1
    digits_arr = np.zeros(max(nvars, 1), dtype=np.int64)
    mapped_arr = np.zeros(max(npre, 1), dtype=np.int64)
    cdef int64_t[::1] digits = digits_arr
    cdef int64_t[::1] mapped = mapped_arr
    cdef int64_t idx, k, rem
    cdef int64_t n_left = 0, n_right = 0, n_both = 0
    cdef int64_t first_lo = -1, first_ro = -1
    cdef bint lz, rz
    if stop <= start:
        return 0, 0, 0, -1, -1
    rem = start
    for k in range(nvars - 1, -1, -1):
        digits[k] = rem % p
        rem //= p
    with nogil:
        for idx in range(start, stop):
            if has_pre:
                for k in range(npre):
                    mapped[k] = _eval_poly(k, pp, pt, pv, pc, &digits[0], p)
                lz = _all_zero(lp, lt, lv, lc, &mapped[0], p)
            else:
                lz = _all_zero(lp, lt, lv, lc, &digits[0], p)
            rz = _all_zero(rp, rt, rv, rc, &digits[0], p)
            if lz:
                n_left += 1
            if rz:
                n_right += 1
            if lz and rz:
                n_both += 1
            elif lz and first_lo < 0:
                first_lo = idx
            elif rz and first_ro < 0:
                first_ro = idx
            # increment the base-p odometer
            k = nvars - 1
            while k >= 0:
                digits[k] += 1
                if digits[k] < p:
                    break
                digits[k] = 0
                k -= 1
    return n_left, n_right, n_both, first_lo, first_ro
