import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import nonzero_rationals, rationals, seeds
from tanseg.core import (
    GroupElement,
    HyperTensor,
    MultiIndex,
    PrimeScalar,
    TensorError,
    apply_group,
    flattening_witness,
    is_decomposable,
    is_prime,
    random_rational,
    random_tensor,
    segre_point,
    tangent_point,
    to_fraction,
)
from tanseg.reproduce import random_tangent_point


def test_to_fraction_rejects_floats():
    with pytest.raises(TypeError):
        to_fraction(0.5)
    assert to_fraction("3/6") == Fraction(1, 2)


def test_random_rational_range():
    rng = random.Random(1)
    for _ in range(500):
        x = random_rational(rng, 20)
        assert -20 <= x.numerator <= 20 or x.denominator > 1
        assert 1 <= x.denominator <= 20
    assert all(random_rational(rng, 3, nonzero=True) for _ in range(200))


def test_prime_scalar_field_ops():
    a, b = PrimeScalar(3, 7), PrimeScalar(5, 7)
    assert int(a + b) == 1 and int(a * b) == 1 and int(a - b) == 5
    assert int(a / b) == int(a * b.inverse()) == 2
    assert int(a ** 6) == 1
    with pytest.raises(ValueError):
        PrimeScalar(1, 8)
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_multi_index_weight_order_and_strings():
    idx = MultiIndex.from_str("0111")
    assert idx.bits == 0b0111 and idx.weight == 3 and str(idx) == "0111"
    assert idx.positions() == [1, 2, 3]
    assert idx[0] == 0 and idx[3] == 1
    assert str(idx.complement()) == "1000"
    assert MultiIndex.from_positions(4, [0, 3]) == MultiIndex.from_str("1001")
    assert sorted(MultiIndex(3, b) for b in (5, 1, 7)) == [MultiIndex(3, 1), MultiIndex(3, 5), MultiIndex(3, 7)]


def test_segre_examples():
    z = segre_point([(1, 0), (1, 0)])
    assert z.coords == {0: 1}
    assert set(segre_point([(1, 1)] * 3).dense()) == {1}
    z = segre_point([(2, 3), (1, 5)])
    assert (z["00"], z["01"], z["10"], z["11"]) == (2, 10, 3, 15)
    with pytest.raises(TensorError):
        segre_point([(1, 2), (0, 0)])


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_segre_matches_loop_expansion(n):
    rng = random.Random(n)
    pairs = [(random_rational(rng), random_rational(rng, nonzero=True)) for _ in range(n)]
    z = segre_point(pairs)
    for bits in itertools.product((0, 1), repeat=n):
        expected = Fraction(1)
        for k, b in enumerate(bits):
            expected *= pairs[k][b]
        assert z["".join(map(str, bits))] == expected


def test_tangent_point_examples():
    base = [(1, 0)] * 3
    dirs = [(0, 1)] * 3
    assert tangent_point(base, dirs, [1, 0, 0, 0]) == segre_point(base)
    z = tangent_point(base, dirs, [0, 1, 1, 1])
    assert z.coords == {0b100: 1, 0b010: 1, 0b001: 1}
    with pytest.raises(TensorError):
        tangent_point(base, [(2, 0), (0, 1), (0, 1)], [1, 1, 1, 1])
    with pytest.raises(TensorError):
        tangent_point(base, dirs, [0, 0, 0, 0])


def test_apply_group_examples():
    z = HyperTensor(2, {"00": 1})
    g = GroupElement([((0, 1), (-1, 0)), ((1, 0), (0, 1))])
    assert apply_group(g, z).coords == {0b10: -1}
    assert apply_group(GroupElement.identity(2), z) == z
    swap = GroupElement.identity(2)
    swap = GroupElement(swap.factors, [2, 1])
    assert apply_group(swap, segre_point([(2, 3), (1, 5)])) == segre_point([(1, 5), (2, 3)])
    with pytest.raises(TensorError):
        apply_group(GroupElement.identity(3), z)
    with pytest.raises(TensorError):
        GroupElement([((2, 0), (0, 1))])
    with pytest.raises(TensorError):
        GroupElement([((1, 0), (0, 1))] * 2, [1, 1])


def test_group_json_round_trip(rng):
    g = GroupElement.random(rng, 3)
    assert GroupElement.from_json(g.to_json()) == g
    assert GroupElement.from_json({"perm": [2, 1, 3], "factors": [[["0", "1"], ["-1", "0"]]] * 3}).perm == (2, 1, 3)


def test_tensor_json_round_trip(rng):
    z = random_tensor(rng, 4)
    assert HyperTensor.from_json(z.to_json()) == z
    assert HyperTensor.from_json({"n": 4, "coords": {"0110": "1/2", "1111": "-3"}})["0110"] == Fraction(1, 2)
    with pytest.raises(TensorError):
        HyperTensor.from_json({"n": 3, "coords": {"0110": "1"}})


@given(seeds)
def test_action_is_a_group_action(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    g, h = GroupElement.random(rng, n, 6), GroupElement.random(rng, n, 6)
    z = random_tensor(rng, n, 6)
    assert apply_group(g, apply_group(h, z)) == apply_group(g.compose(h), z)


def test_action_composition_100_triples():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(2, 4)
        g, h, z = GroupElement.random(rng, n), GroupElement.random(rng, n), random_tensor(rng, n)
        assert apply_group(g, apply_group(h, z)) == apply_group(g.compose(h), z)


@given(st.lists(st.tuples(rationals, nonzero_rationals), min_size=1, max_size=5))
def test_segre_points_are_decomposable(pairs):
    assert is_decomposable(segre_point(pairs))


def test_random_tensors_are_not_decomposable():
    rng = random.Random(3)
    for n in range(2, 6):
        z = random_tensor(rng, n)
        witness = flattening_witness(z)
        assert witness is not None and witness[3] != 0


def test_decomposability_examples():
    assert not is_decomposable(HyperTensor(2, {"00": 1, "11": 1}))
    assert flattening_witness(HyperTensor(2, {"00": 1, "11": 1}))[3] == 1
    rng = random.Random(11)
    base = [(random_rational(rng), random_rational(rng, nonzero=True)) for _ in range(3)]
    dirs = [(1, 0)] * 3
    assert not is_decomposable(tangent_point(base, dirs, [0, 1, 1, 1]))
    with pytest.raises(TensorError):
        is_decomposable(HyperTensor(2))


def test_action_preserves_decomposability():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(2, 4)
        z = segre_point([(random_rational(rng), random_rational(rng, nonzero=True)) for _ in range(n)])
        assert is_decomposable(apply_group(GroupElement.random(rng, n), z))
        t = random_tangent_point(rng, n)
        assert is_decomposable(apply_group(GroupElement.random(rng, n), t)) == is_decomposable(t)


def test_factor_cap():
    with pytest.raises(TensorError):
        HyperTensor(17)
    assert HyperTensor(17, max_n=17).n == 17
