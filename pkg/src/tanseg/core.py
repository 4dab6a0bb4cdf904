"""Exact scalars, binary multi-indices, 2x...x2 tensors and the SL(2)^n x S_n action.

Bit convention: factor 1 is the most significant bit, so the multi-index
string ``"0111"`` is the integer ``0b0111``.  Action convention: a factor
matrix ``[[a, b], [c, d]]`` sends basis vector 0 to ``a*e0 + c*e1`` and
basis vector 1 to ``b*e0 + d*e1``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

MAX_FACTORS = 16
DEFAULT_HEIGHT = 20

Matrix2 = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


class TensorError(ValueError):
    pass


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point input is not exact; pass int, str or Fraction")
    return Fraction(x)


def fraction_str(x: Fraction) -> str:
    return str(x)


def random_rational(rng: random.Random, height: int = DEFAULT_HEIGHT, nonzero: bool = False) -> Fraction:
    """Numerator uniform in [-height, height], denominator uniform in [1, height]."""
    while True:
        num = rng.randint(-height, height)
        if num or not nonzero:
            return Fraction(num, rng.randint(1, height))


# ---------------------------------------------------------------------------
# finite field scalars


@dataclass(frozen=True)
class PrimeScalar:
    residue: int
    p: int

    def __post_init__(self):
        if self.p < 2 or not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        if not 0 <= self.residue < self.p:
            object.__setattr__(self, "residue", self.residue % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, PrimeScalar):
            if other.p != self.p:
                raise ValueError("mixed moduli")
            return other.residue
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return PrimeScalar((self.residue + o) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return PrimeScalar((self.residue - o) % self.p, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return PrimeScalar((o - self.residue) % self.p, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return PrimeScalar(self.residue * o % self.p, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeScalar(-self.residue % self.p, self.p)

    def __pow__(self, e: int):
        return PrimeScalar(pow(self.residue, e, self.p), self.p)

    def inverse(self) -> "PrimeScalar":
        if self.residue == 0:
            raise ZeroDivisionError("zero has no inverse")
        return PrimeScalar(pow(self.residue, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * PrimeScalar(o, self.p).inverse()

    def __bool__(self):
        return self.residue != 0

    def __int__(self):
        return self.residue


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# multi-indices


@dataclass(frozen=True, order=True)
class MultiIndex:
    """Binary multi-index of length ``n``; ordered by the integer value of its bit string."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative length")
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"bits {self.bits} out of range for n={self.n}")

    @classmethod
    def from_str(cls, s: str) -> "MultiIndex":
        if any(ch not in "01" for ch in s):
            raise ValueError(f"not a binary multi-index: {s!r}")
        return cls(len(s), int(s, 2) if s else 0)

    @classmethod
    def from_positions(cls, n: int, positions: Iterable[int]) -> "MultiIndex":
        """Build from 0-based factor positions (position 0 is factor 1)."""
        bits = 0
        for k in positions:
            bits |= bit_of(n, k)
        return cls(n, bits)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def positions(self) -> list[int]:
        return positions_of(self.n, self.bits)

    def complement(self) -> "MultiIndex":
        return MultiIndex(self.n, ((1 << self.n) - 1) ^ self.bits)

    def __getitem__(self, k: int) -> int:
        return (self.bits >> (self.n - 1 - k)) & 1

    def __str__(self) -> str:
        return format(self.bits, f"0{self.n}b") if self.n else ""


def bit_of(n: int, k: int) -> int:
    """Mask of 0-based factor position ``k`` in an ``n``-bit index."""
    return 1 << (n - 1 - k)


def positions_of(n: int, bits: int) -> list[int]:
    return [k for k in range(n) if bits >> (n - 1 - k) & 1]


def index_str(n: int, bits: int) -> str:
    return format(bits, f"0{n}b") if n else ""


def parse_index(s: str, n: int | None = None) -> int:
    if any(ch not in "01" for ch in s) or (n is not None and len(s) != n):
        raise TensorError(f"bad multi-index key {s!r}" + (f" for n={n}" if n is not None else ""))
    return int(s, 2) if s else 0


# ---------------------------------------------------------------------------
# tensors


class HyperTensor:
    """Point of the 2^n-dimensional coordinate space with exact coordinates.

    ``coords`` maps the integer value of a multi-index to a nonzero Fraction;
    absent keys are zero.
    """

    __slots__ = ("n", "_coords")

    def __init__(self, n: int, coords: Mapping[int, object] | None = None, *, max_n: int = MAX_FACTORS):
        if not 0 <= n <= max_n:
            raise TensorError(f"n={n} outside [0, {max_n}]")
        self.n = n
        clean: dict[int, Fraction] = {}
        size = 1 << n
        for k, v in (coords or {}).items():
            if isinstance(k, MultiIndex):
                if k.n != n:
                    raise TensorError(f"index {k} has length {k.n}, expected {n}")
                k = k.bits
            elif isinstance(k, str):
                k = parse_index(k, n)
            if not 0 <= k < size:
                raise TensorError(f"index {k} out of range")
            v = to_fraction(v)
            if v:
                clean[k] = v
        self._coords = clean

    @classmethod
    def from_dense(cls, n: int, values: Sequence) -> "HyperTensor":
        if len(values) != 1 << n:
            raise TensorError(f"expected {1 << n} values, got {len(values)}")
        return cls(n, {i: v for i, v in enumerate(values)})

    @property
    def coords(self) -> dict[int, Fraction]:
        return dict(self._coords)

    def __getitem__(self, idx) -> Fraction:
        if isinstance(idx, str):
            idx = parse_index(idx, self.n)
        elif isinstance(idx, MultiIndex):
            idx = idx.bits
        return self._coords.get(idx, Fraction(0))

    def dense(self) -> list[Fraction]:
        zero = Fraction(0)
        return [self._coords.get(i, zero) for i in range(1 << self.n)]

    def items(self) -> Iterator[tuple[int, Fraction]]:
        return iter(sorted(self._coords.items()))

    def is_zero(self) -> bool:
        return not self._coords

    def scale(self, c) -> "HyperTensor":
        c = to_fraction(c)
        return HyperTensor(self.n, {k: c * v for k, v in self._coords.items()})

    def integer_coords(self) -> list[int]:
        """Dense integer representative of the projective point (denominators cleared)."""
        from math import lcm

        den = 1
        for v in self._coords.values():
            den = lcm(den, v.denominator)
        out = [0] * (1 << self.n)
        for k, v in self._coords.items():
            out[k] = v.numerator * (den // v.denominator)
        return out

    def proportional_to(self, other: "HyperTensor") -> bool:
        if self.n != other.n:
            return False
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if self._coords.keys() != other._coords.keys():
            return False
        k0 = min(self._coords)
        ratio = self._coords[k0] / other._coords[k0]
        return all(self._coords[k] == ratio * other._coords[k] for k in self._coords)

    def __eq__(self, other):
        if not isinstance(other, HyperTensor):
            return NotImplemented
        return self.n == other.n and self._coords == other._coords

    def __hash__(self):
        return hash((self.n, frozenset(self._coords.items())))

    def __repr__(self):
        body = ", ".join(f"{index_str(self.n, k)}: {v}" for k, v in self.items())
        return f"HyperTensor(n={self.n}, {{{body}}})"

    def to_json(self) -> dict:
        return {"n": self.n, "coords": {index_str(self.n, k): str(v) for k, v in self.items()}}

    @classmethod
    def from_json(cls, obj: Mapping) -> "HyperTensor":
        try:
            n = int(obj["n"])
            coords = obj["coords"]
        except (KeyError, TypeError, ValueError) as exc:
            raise TensorError(f"malformed tensor JSON: {exc}") from exc
        if not isinstance(coords, Mapping):
            raise TensorError("tensor 'coords' must be an object")
        parsed = {}
        for key, val in coords.items():
            try:
                parsed[parse_index(key, n)] = Fraction(str(val))
            except (ValueError, ZeroDivisionError) as exc:
                raise TensorError(f"bad coordinate {key!r}: {val!r}") from exc
        return cls(n, parsed)


def random_tensor(rng: random.Random, n: int, height: int = DEFAULT_HEIGHT) -> HyperTensor:
    """All 2^n coordinates independently random (nonzero)."""
    return HyperTensor(n, {i: random_rational(rng, height, nonzero=True) for i in range(1 << n)})


def _check_pair(pair) -> tuple[Fraction, Fraction]:
    if len(pair) != 2:
        raise TensorError(f"expected a pair, got {pair!r}")
    return to_fraction(pair[0]), to_fraction(pair[1])


def _outer(vectors: Sequence[tuple[Fraction, Fraction]]) -> list[Fraction]:
    out = [Fraction(1)]
    for a, b in vectors:
        out = [x * c for x in out for c in (a, b)]
    return out


def segre_point(vectors: Sequence) -> HyperTensor:
    """Decomposable tensor (a^1 x^0 + b^1 x^1) (x) ... (x) (a^n x^0 + b^n x^1)."""
    pairs = [_check_pair(v) for v in vectors]
    for i, (a, b) in enumerate(pairs):
        if a == 0 and b == 0:
            raise TensorError(f"factor {i + 1} is the zero vector")
    return HyperTensor.from_dense(len(pairs), _outer(pairs))


def tangent_point(base: Sequence, directions: Sequence, coeffs: Sequence) -> HyperTensor:
    """r0 * q1 (x) ... (x) qn + sum_i r_i * q1 (x) .. q_i' .. (x) qn."""
    q = [_check_pair(v) for v in base]
    dq = [_check_pair(v) for v in directions]
    r = [to_fraction(c) for c in coeffs]
    n = len(q)
    if len(dq) != n or len(r) != n + 1:
        raise TensorError("need n base vectors, n directions and n+1 coefficients")
    for i in range(n):
        if q[i][0] * dq[i][1] - q[i][1] * dq[i][0] == 0:
            raise TensorError(f"base and direction of factor {i + 1} are dependent")
    if not any(r):
        raise TensorError("all coefficients vanish")
    total = [r[0] * v for v in _outer(q)]
    for i in range(n):
        if r[i + 1]:
            vecs = q[:i] + [dq[i]] + q[i + 1:]
            total = [s + r[i + 1] * v for s, v in zip(total, _outer(vecs))]
    return HyperTensor.from_dense(n, total)


# ---------------------------------------------------------------------------
# group elements


def _mat2(m) -> Matrix2:
    if len(m) != 2 or any(len(row) != 2 for row in m):
        raise TensorError(f"factor {m!r} is not 2x2")
    return ((to_fraction(m[0][0]), to_fraction(m[0][1])), (to_fraction(m[1][0]), to_fraction(m[1][1])))


def _mul2(x: Matrix2, y: Matrix2) -> Matrix2:
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


IDENTITY2: Matrix2 = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))


class GroupElement:
    """Element of SL(2)^n x| S_n acting as z -> (M_1 (x) ... (x) M_n) P_perm z.

    ``perm`` is 1-based; after permuting, factor ``i`` of the result is
    factor ``perm[i]`` of the input.
    """

    __slots__ = ("n", "factors", "perm")

    def __init__(self, factors: Sequence, perm: Sequence[int] | None = None):
        self.factors: tuple[Matrix2, ...] = tuple(_mat2(m) for m in factors)
        self.n = len(self.factors)
        for i, m in enumerate(self.factors):
            det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
            if det != 1:
                raise TensorError(f"factor {i + 1} has determinant {det}, not 1")
        perm = tuple(range(1, self.n + 1)) if perm is None else tuple(int(p) for p in perm)
        if sorted(perm) != list(range(1, self.n + 1)):
            raise TensorError(f"{perm!r} is not a permutation of 1..{self.n}")
        self.perm = perm

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls([IDENTITY2] * n)

    @classmethod
    def random(cls, rng: random.Random, n: int, height: int = DEFAULT_HEIGHT, permute: bool = True) -> "GroupElement":
        factors = [random_sl2(rng, height) for _ in range(n)]
        perm = list(range(1, n + 1))
        if permute:
            rng.shuffle(perm)
        return cls(factors, perm)

    @property
    def has_trivial_perm(self) -> bool:
        return self.perm == tuple(range(1, self.n + 1))

    def compose(self, other: "GroupElement") -> "GroupElement":
        """``self.compose(other)`` acts as ``self`` after ``other``."""
        if self.n != other.n:
            raise TensorError("dimension mismatch")
        factors = [_mul2(self.factors[k], other.factors[self.perm[k] - 1]) for k in range(self.n)]
        perm = [other.perm[self.perm[k] - 1] for k in range(self.n)]
        return GroupElement(factors, perm)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.factors == other.factors and self.perm == other.perm

    def __repr__(self):
        return f"GroupElement(perm={list(self.perm)}, factors={[[list(map(str, r)) for r in m] for m in self.factors]})"

    def to_json(self) -> dict:
        return {
            "perm": list(self.perm),
            "factors": [[[str(x) for x in row] for row in m] for m in self.factors],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "GroupElement":
        try:
            factors = [[[Fraction(str(x)) for x in row] for row in m] for m in obj["factors"]]
            perm = obj.get("perm")
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise TensorError(f"malformed group element JSON: {exc}") from exc
        return cls(factors, perm)


def random_sl2(rng: random.Random, height: int = DEFAULT_HEIGHT) -> Matrix2:
    a = random_rational(rng, height, nonzero=True)
    b = random_rational(rng, height)
    c = random_rational(rng, height)
    return ((a, b), (c, (1 + b * c) / a))


def permute_factors(values: Sequence, n: int, perm: Sequence[int]) -> list:
    """Dense permutation: new factor i carries old factor perm[i] (1-based)."""
    out = [None] * (1 << n)
    src_masks = [bit_of(n, perm[i] - 1) for i in range(n)]
    for new in range(1 << n):
        old = 0
        for i in range(n):
            if new >> (n - 1 - i) & 1:
                old |= src_masks[i]
        out[new] = values[old]
    return out


def apply_factor(values: list, n: int, k: int, m: Matrix2) -> list:
    """Apply a 2x2 matrix to 0-based factor ``k`` of a dense tensor (in place)."""
    if m == IDENTITY2:
        return values
    (a, b), (c, d) = m
    mask = bit_of(n, k)
    for i in range(1 << n):
        if not i & mask:
            x0, x1 = values[i], values[i | mask]
            values[i] = a * x0 + b * x1
            values[i | mask] = c * x0 + d * x1
    return values


def apply_group(g: GroupElement, z: HyperTensor) -> HyperTensor:
    if g.n != z.n:
        raise TensorError(f"group element has {g.n} factors, tensor has {z.n}")
    vals = permute_factors(z.dense(), z.n, g.perm)
    for k, m in enumerate(g.factors):
        apply_factor(vals, z.n, k, m)
    return HyperTensor.from_dense(z.n, vals)


# ---------------------------------------------------------------------------
# decomposability


def flattening_witness(z: HyperTensor) -> tuple[int, int, int, Fraction] | None:
    """First nonvanishing 2x2 minor of a one-factor flattening, or None.

    Returns ``(factor, column_a, column_b, value)`` with a 1-based factor and
    columns given as the integer index of the remaining n-1 bits.
    """
    if z.is_zero():
        raise TensorError("zero tensor is not a projective point")
    n = z.n
    vals = z.dense()
    for k in range(n):
        mask = bit_of(n, k)
        cols = []
        for i in range(1 << n):
            if not i & mask:
                cols.append((vals[i], vals[i | mask]))
        ref = next(((j, c) for j, c in enumerate(cols) if c[0] or c[1]), None)
        if ref is None:
            continue
        j0, (r0, r1) = ref
        for j, (c0, c1) in enumerate(cols):
            minor = r0 * c1 - r1 * c0
            if minor:
                a, b = sorted((j0, j))
                val = minor if (a, b) == (j0, j) else -minor
                return k + 1, a, b, val
    return None


def is_decomposable(z: HyperTensor) -> bool:
    return flattening_witness(z) is None
