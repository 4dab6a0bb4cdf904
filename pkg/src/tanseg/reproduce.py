"""Reproduction suite behind ``tanseg reproduce``: golden identities, counts, sampling and oracles."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

from . import reference as ref
from .core import GroupElement, HyperTensor, tangent_point, random_rational
from .membership import is_on_principal_minor_variety, is_on_tangential, module_basis
from .minors import (
    GraphFormError,
    HomogenizedMatrix,
    act_on_lagrangian_plane,
    e_minors,
    principal_minor_map,
    random_erank_le1,
    random_symmetric,
)
from .oracle import compare_zero_sets_matrix, compare_zero_sets_uvw
from .poly import exact_rank, pullback, rewrite_uvw, specialize_t
from .schur import S21, candidate_hwvs, cubic_hwvs, wedge_quadric


def random_tangent_point(rng: random.Random, n: int) -> HyperTensor:
    """r0 q1 x ... x qn + sum_i ri q1 x ... x q_i' x ... x qn with seeded rational data."""
    while True:
        base = [(random_rational(rng), random_rational(rng)) for _ in range(n)]
        dirs = [(random_rational(rng), random_rational(rng)) for _ in range(n)]
        coeffs = [random_rational(rng) for _ in range(n + 1)]
        if all(a * d - b * c for (a, b), (c, d) in zip(base, dirs)) and any(coeffs):
            return tangent_point(base, dirs, coeffs)


def _ratio(f, g) -> str:
    c = f.proportional_to(g)
    return "not proportional" if c is None else f"ratio {c}"


def _check_wedge():
    return wedge_quadric() == ref.wedge_quadric_display(), "generated quadric vs. transcribed 8-term display"


def _check_wedge_pullback():
    got, want = pullback(wedge_quadric()), ref.wedge_pullback_display()
    return got == want, f"pullback vs. display: {_ratio(got, want)}"


def _check_wedge_pullback_scaled():
    got, want = pullback(wedge_quadric()), ref.wedge_pullback_display()
    return got == want * 2, "pullback equals twice the display"


def _check_cubic_hwvs():
    gen = cubic_hwvs(4)
    disp = ref.cubic_displays()
    ok = gen[0] * 2 == disp[0] and gen[1] == disp[1] and gen[2] == disp[2]
    return ok, "first cubic = display / 2 (content removed); second and third exact"


def _check_cubic_one_identity():
    x0 = ref.parse_poly("X", 4, "X0000")
    return ref.cubic_one_display() == x0 * wedge_quadric() * 2, "F1 = 2 X^0000 F0"


def _check_cubic_pullbacks():
    got = [specialize_t(pullback(f)) for f in ref.cubic_displays()]
    return got == ref.cubic_pullback_displays(), "pullbacks at t=1 vs. the three displays"


def _check_rewrite():
    images = [rewrite_uvw(specialize_t(pullback(f)))[1] for f in cubic_hwvs(4)]
    return all(not g for g in images), "normal forms modulo u-w, v-w"


def _check_multiplicity():
    r = exact_rank(candidate_hwvs([S21] * 4))
    return r == 3, f"rank of 16 candidates = {r}"


def _check_counts():
    sizes = (len(module_basis("cubic", 4)), len(module_basis("hd", 3)), len(module_basis("hd", 4)))
    return sizes == (48, 1, 20), f"cubic(4), hd(3), hd(4) = {sizes}"


def _oracle_uvw():
    verdicts = {p: compare_zero_sets_uvw(p).verdict for p in (7, 101)}
    return all(v == "equal" for v in verdicts.values()), str(verdicts)


def _oracle_matrix(p: int):
    def check():
        r = compare_zero_sets_matrix(p)
        return r.verdict == "equal", f"p={p}: {r.verdict}, {r.left_zeros} common zeros"
    return check


def _sampling(seed: int, trials: int):
    def check():
        rng = random.Random(seed)
        for n in (3, 4, 5):
            for _ in range(trials):
                z = random_tangent_point(rng, n)
                if not is_on_tangential(z).member or not is_on_principal_minor_variety(z).member:
                    return False, f"tangent point outside the zero set at n={n}"
        for n in (4, 5):
            for _ in range(trials):
                if not is_on_tangential(principal_minor_map(random_erank_le1(rng, n))).member:
                    return False, f"E-rank <= 1 image outside the zero set at n={n}"
        return True, f"{trials} samples per n"
    return check


def _e_minor_fixed(seed: int, trials: int):
    def check():
        rng = random.Random(seed)
        moved = 0
        for _ in range(trials):
            A = random_symmetric(rng, 4)
            M = HomogenizedMatrix(A, Fraction(1))
            try:
                M2 = act_on_lagrangian_plane(GroupElement.random(rng, 4, permute=False), M)
            except GraphFormError:
                continue
            before = [v for _, v in e_minors(A, 1) + e_minors(A, 2)]
            after = [v for _, v in e_minors(M2.matrix, 1) + e_minors(M2.matrix, 2)]
            moved += before != after
        return moved == 0, f"{moved} of {trials} pairs changed some E-minor"
    return check


def run_suite(full: bool = False, seed: int = 0) -> dict:
    checks: list[tuple[str, Callable]] = [
        ("wedge_quadric_golden", _check_wedge),
        ("wedge_pullback_display", _check_wedge_pullback),
        ("wedge_pullback_twice_display", _check_wedge_pullback_scaled),
        ("cubic_hwv_goldens", _check_cubic_hwvs),
        ("cubic_one_identity", _check_cubic_one_identity),
        ("cubic_pullback_displays", _check_cubic_pullbacks),
        ("uvw_normal_forms_zero", _check_rewrite),
        ("multiplicity_three", _check_multiplicity),
        ("module_counts", _check_counts),
        ("oracle_uvw", _oracle_uvw),
        ("oracle_matrix_p3", _oracle_matrix(3)),
        ("membership_sampling", _sampling(seed, 100 if full else 5)),
        ("e_minors_fixed_under_action", _e_minor_fixed(seed, 100 if full else 10)),
    ]
    if full:
        checks.append(("oracle_matrix_p5", _oracle_matrix(5)))
    out = []
    for name, fn in checks:
        ok, detail = fn()
        out.append({"name": name, "status": "PASS" if ok else "FAIL", "detail": detail})
    return {"seed": seed, "full": full, "checks": out}
