import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import rationals, seeds
from tanseg.core import HyperTensor, random_rational, segre_point
from tanseg.minors import HomogenizedMatrix, principal_minor_map, random_symmetric
from tanseg.poly import (
    BasisMatrix,
    CompiledSystem,
    PolyError,
    SparsePoly,
    a_index,
    a_pairs,
    depends_on_diagonal,
    divide_by_t_power,
    eval_on_tensor,
    exact_rank,
    from_string_terms,
    independent_subset,
    monomial_key,
    principal_minor_poly,
    pullback,
    rewrite_uvw,
    specialize_t,
    symbolic_minor,
    t_index,
)
from tanseg.reference import cubic_displays, parse_poly, wedge_quadric_display
from tanseg.reproduce import random_tangent_point
from tanseg.schur import cubic_hwvs, wedge_quadric


def a_values(M: HomogenizedMatrix) -> list[Fraction]:
    n = M.n
    vals = [Fraction(0)] * (t_index(n) + 1)
    for i, j in a_pairs(n):
        vals[a_index(n, i, j)] = M.matrix[i - 1, j - 1]
    vals[t_index(n)] = M.t
    return vals


def random_poly(rng, varset="X", n=3, terms=5, degree=3):
    nv = {"X": 1 << n, "A": t_index(n) + 1, "UVW": 3}[varset]
    out = {}
    for _ in range(terms):
        m = tuple(sorted(rng.randrange(nv) for _ in range(rng.randint(0, degree))))
        out[m] = random_rational(rng, 9)
    return SparsePoly(varset, n, out)


# --- arithmetic --------------------------------------------------------------


@given(seeds)
def test_ring_axioms(seed):
    rng = random.Random(seed)
    f, g, h = (random_poly(rng) for _ in range(3))
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + g == g + f and f * g == g * f
    assert f - f == SparsePoly("X", 3)
    assert (f ** 2) == f * f


@given(seeds, st.lists(rationals, min_size=8, max_size=8))
def test_evaluation_is_a_ring_map(seed, point):
    rng = random.Random(seed)
    f, g = random_poly(rng), random_poly(rng)
    assert (f * g).evaluate(point) == f.evaluate(point) * g.evaluate(point)
    assert (f + g).evaluate(point) == f.evaluate(point) + g.evaluate(point)


def test_no_zero_coefficients_and_queries():
    x = SparsePoly.x(2, "01")
    y = SparsePoly.x(2, "10")
    f = x * y + x * x - x * y
    assert f.terms == {(1, 1): 1}
    assert f.degree == 2 and f.is_homogeneous()
    assert not (x + 1).is_homogeneous()
    assert (x * y).coefficient([2, 1]) == 1
    assert f.variables() == {1}


def test_monomial_order_is_degree_lexicographic():
    ms = [(3,), (0, 0), (0,), (), (1, 2), (0, 3)]
    assert sorted(ms, key=monomial_key) == [(), (0,), (3,), (0, 0), (1, 2), (0, 3)]


def test_derivative_product_rule():
    rng = random.Random(4)
    f, g = random_poly(rng), random_poly(rng)
    for v in range(8):
        assert (f * g).diff(v) == f.diff(v) * g + f * g.diff(v)


def test_json_round_trip_and_names():
    f = parse_poly("X", 4, "X0000 X1111 - 1/2 X0110^2")
    obj = f.to_json()
    assert obj["vars"] == "X" and {"c": "1", "e": {"0000": 1, "1111": 1}} in obj["terms"]
    assert SparsePoly.from_json(obj) == f
    g = parse_poly("A", 4, "a_1_2^2 t - 3 a_4_4")
    assert SparsePoly.from_json(g.to_json()) == g
    assert {"c": "1", "e": {"a_1_2": 2, "t": 1}} in g.to_json()["terms"]
    u = SparsePoly.from_json({"vars": "UVW", "terms": [{"c": "2", "e": {"u": 1, "w": 2}}]})
    assert str(u) == "2*u*w*w"
    with pytest.raises(PolyError):
        SparsePoly.from_json({"vars": "X", "n": 2, "terms": [{"c": "1", "e": {"0102": 1}}]})


def test_normalization():
    f = parse_poly("X", 2, "-4 X11 + 6 X00 X01")
    assert f.content() == 2
    g = f.normalized()
    assert g.leading_term()[1] > 0 and g.content() == 1
    assert g.proportional_to(f) == Fraction(1, 2)
    assert (-f).normalized() == g


def test_varset_mismatch_rejected():
    with pytest.raises(PolyError):
        SparsePoly.x(2, "00") + SparsePoly.var("A", 2, 0)
    with pytest.raises(PolyError):
        eval_on_tensor(SparsePoly.x(3, "000"), HyperTensor(2, {"00": 1}))


# --- evaluation and pullback --------------------------------------------------


def test_eval_examples():
    assert eval_on_tensor(SparsePoly.x(4, "0000"), segre_point([(1, 0)] * 4)) == 1
    F0 = wedge_quadric()
    assert eval_on_tensor(F0, HyperTensor(4, {"0000": 1, "1111": 1})) == 1
    rng = random.Random(6)
    assert all(eval_on_tensor(F0, random_tangent_point(rng, 4)) == 0 for _ in range(100))


def test_symbolic_minor_matches_numeric():
    rng = random.Random(3)
    A = random_symmetric(rng, 4)
    M = HomogenizedMatrix(A, 1)
    vals = a_values(M)
    assert symbolic_minor(4, [1, 2], [3, 4]).evaluate(vals) == A[0, 2] * A[1, 3] - A[0, 3] * A[1, 2]
    assert principal_minor_poly(4, 0b1111).evaluate(vals) == principal_minor_map(M)["1111"]
    # symmetric 4x4 determinant has 17 distinct monomials
    assert len(symbolic_minor(4, [1, 2, 3, 4], [1, 2, 3, 4])) == 17


def test_pullback_of_top_variable_is_determinant():
    for n in (2, 3, 4):
        top = SparsePoly.x(n, "1" * n)
        assert pullback(top) == symbolic_minor(n, range(1, n + 1), range(1, n + 1))


def test_pullback_square_commutes():
    rng = random.Random(12)
    polys = [wedge_quadric()] + cubic_hwvs(4)
    for _ in range(10):
        M = HomogenizedMatrix(random_symmetric(rng, 4), random_rational(rng, nonzero=True))
        z = principal_minor_map(M)
        vals = a_values(M)
        for f in polys:
            assert pullback(f).evaluate(vals) == eval_on_tensor(f, z)


def test_pullback_rejects_bad_input():
    with pytest.raises(PolyError):
        pullback(SparsePoly.x(2, "00") + 1)
    with pytest.raises(PolyError):
        pullback(parse_poly("A", 2, "a_1_2"))


def test_cubic_pullbacks_have_no_diagonal_variables():
    for f in cubic_hwvs(4):
        assert not depends_on_diagonal(specialize_t(pullback(f)))
    assert depends_on_diagonal(pullback(SparsePoly.x(4, "1000")))


def test_t_helpers():
    f = parse_poly("A", 2, "t^3 a_1_1 + t^2 a_1_2^2")
    assert divide_by_t_power(f, 2) == parse_poly("A", 2, "t a_1_1 + a_1_2^2")
    assert specialize_t(f, 2) == parse_poly("A", 2, "8 a_1_1 + 4 a_1_2^2")
    with pytest.raises(PolyError):
        divide_by_t_power(f, 3)


# --- rewriting ----------------------------------------------------------------


def test_rewrite_uvw_examples():
    u = parse_poly("A", 4, "a_1_2 a_3_4")
    v = parse_poly("A", 4, "a_1_3 a_2_4")
    g, image = rewrite_uvw(u - v)
    assert str(g) in ("u - v", "-v + u") and not image
    g, image = rewrite_uvw(u * u)
    assert str(image) == "w*w"
    with pytest.raises(PolyError, match="a_1_2"):
        rewrite_uvw(parse_poly("A", 4, "a_1_2 a_1_3"))


def test_cubic_pullbacks_reduce_to_zero():
    for f in cubic_hwvs(4):
        pb = pullback(f)
        # every monomial of a cubic has four set bits in total, so t^(12 - 4) factors out
        g, image = rewrite_uvw(divide_by_t_power(pb, 8))
        assert not image and g


# --- rank -----------------------------------------------------------------------


def test_exact_rank_examples():
    F0 = wedge_quadric()
    assert exact_rank([F0]) == 1
    assert exact_rank([F0, F0, F0 * 3]) == 1
    polys = cubic_displays()
    assert exact_rank(polys) == 3
    assert exact_rank(polys + [polys[0] + polys[1]]) == 3
    assert independent_subset(polys + [polys[0] - polys[2]]) == polys
    with pytest.raises(PolyError):
        BasisMatrix([])


def test_compiled_system_agrees_with_exact_evaluation():
    rng = random.Random(17)
    polys = cubic_hwvs(4) + [wedge_quadric()]
    system = CompiledSystem(polys)
    for _ in range(20):
        point = [rng.randint(-5, 5) for _ in range(16)]
        vals = system.values(point)
        for f, v in zip(polys, vals):
            exact = f.evaluate(point)
            assert (v == 0) == (exact == 0)
        hit = system.first_nonzero(point)
        expected = next((k for k, f in enumerate(polys) if f.evaluate(point)), None)
        assert (hit[0] if hit else None) == expected


def test_from_string_terms():
    f = from_string_terms("X", 2, [(2, ["01", "01"]), (-1, ["00"])])
    assert f == parse_poly("X", 2, "2 X01^2 - X00")
    assert wedge_quadric_display() == wedge_quadric()
