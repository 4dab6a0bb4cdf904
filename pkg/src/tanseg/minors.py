"""Symmetric matrices, minors, the principal minor map, exclusive rank and the Lagrangian action.

Minors are written Delta^R_S (rows R, columns S, both as n-bit multi-indices).
Principal minors have R = S; exclusive minors (E-minors) have R and S
disjoint.  In the wedge picture an E-minor is the coordinate of
e_{R^c} ^ f_S, and a principal minor that of e_{S^c} ^ f_S; this module only
uses the Delta^R_S notation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, lcm
from typing import Iterator, Mapping, Sequence

from . import linalg
from .core import (
    DEFAULT_HEIGHT,
    GroupElement,
    HyperTensor,
    MultiIndex,
    TensorError,
    index_str,
    parse_index,
    random_rational,
    to_fraction,
)
from .poly import SparsePoly, t_index


class MatrixError(ValueError):
    pass


class GraphFormError(MatrixError):
    """The transformed plane has a singular leading n x n block."""


# ---------------------------------------------------------------------------
# matrices


class SymMatrix:
    """Exact symmetric n x n matrix stored as its upper triangle (0-based access)."""

    __slots__ = ("n", "_upper")

    def __init__(self, n: int, upper: Mapping[tuple[int, int], object] | None = None):
        self.n = n
        self._upper: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in (upper or {}).items():
            if i > j:
                i, j = j, i
            if not 0 <= i <= j < n:
                raise MatrixError(f"entry ({i}, {j}) out of range for n={n}")
            v = to_fraction(v)
            if v:
                self._upper[i, j] = v

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "SymMatrix":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise MatrixError("matrix is not square")
        vals = [[to_fraction(x) for x in r] for r in rows]
        bad = [(i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if vals[i][j] != vals[j][i]]
        if bad:
            raise MatrixError(f"matrix is not symmetric at (row, column) {bad}")
        return cls(n, {(i, j): vals[i][j] for i in range(n) for j in range(i, n)})

    @classmethod
    def diagonal(cls, diag: Sequence) -> "SymMatrix":
        return cls(len(diag), {(i, i): v for i, v in enumerate(diag)})

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls.diagonal([1] * n)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if i > j:
            i, j = j, i
        return self._upper.get((i, j), Fraction(0))

    def rows(self) -> list[list[Fraction]]:
        return [[self[i, j] for j in range(self.n)] for i in range(self.n)]

    def is_diagonal(self) -> bool:
        return all(i == j for i, j in self._upper)

    def off_diagonal(self) -> dict[tuple[int, int], Fraction]:
        return {k: v for k, v in self._upper.items() if k[0] != k[1]}

    def integer_scaled(self) -> tuple[list[list[int]], int]:
        """Integer matrix L*A and the scale L (lcm of denominators)."""
        scale = 1
        for v in self._upper.values():
            scale = lcm(scale, v.denominator)
        rows = [[int(self[i, j] * scale) for j in range(self.n)] for i in range(self.n)]
        return rows, scale

    def __eq__(self, other):
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return self.n == other.n and self._upper == other._upper

    def __repr__(self):
        return f"SymMatrix({[[str(x) for x in r] for r in self.rows()]})"


@dataclass(frozen=True)
class HomogenizedMatrix:
    matrix: SymMatrix
    t: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "t", to_fraction(self.t))
        if not self.t and not self.matrix._upper:
            raise MatrixError("matrix and t cannot both vanish")

    @property
    def n(self) -> int:
        return self.matrix.n

    def to_json(self) -> dict:
        return {"n": self.n, "t": str(self.t),
                "entries": [[str(x) for x in row] for row in self.matrix.rows()]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "HomogenizedMatrix":
        try:
            entries = obj["entries"]
            rows = [[Fraction(str(x)) for x in row] for row in entries]
            t = Fraction(str(obj.get("t", "1")))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise MatrixError(f"malformed matrix JSON: {exc}") from exc
        if "n" in obj and int(obj["n"]) != len(rows):
            raise MatrixError(f"'n' is {obj['n']} but there are {len(rows)} rows")
        return cls(SymMatrix.from_rows(rows), t)


def random_symmetric(rng: random.Random, n: int, height: int = DEFAULT_HEIGHT) -> SymMatrix:
    return SymMatrix(n, {(i, j): random_rational(rng, height) for i in range(n) for j in range(i, n)})


def _bits(n: int, idx) -> int:
    if isinstance(idx, MultiIndex):
        if idx.n != n:
            raise MatrixError(f"multi-index {idx} has length {idx.n}, expected {n}")
        return idx.bits
    if isinstance(idx, str):
        return parse_index(idx, n)
    return int(idx)


def _positions(n: int, bits: int) -> list[int]:
    return [k for k in range(n) if bits >> (n - 1 - k) & 1]


# ---------------------------------------------------------------------------
# minors


def minor(A: SymMatrix, I, J) -> Fraction:
    """Delta^I_J(A): rows selected by I, columns by J."""
    n = A.n
    rows, cols = _positions(n, _bits(n, I)), _positions(n, _bits(n, J))
    if len(rows) != len(cols):
        raise MatrixError(f"|I| = {len(rows)} differs from |J| = {len(cols)}")
    return linalg.det([[A[i, j] for j in cols] for i in rows])


def _scaled_minor(B: list[list[int]], rows: Sequence[int], cols: Sequence[int]) -> int:
    return linalg.bareiss_det([[B[i][j] for j in cols] for i in rows])


def principal_minors_naive(A: SymMatrix) -> list[Fraction]:
    """All 2^n principal minors, one determinant per subset."""
    n = A.n
    B, L = A.integer_scaled()
    out = []
    for bits in range(1 << n):
        pos = _positions(n, bits)
        out.append(Fraction(_scaled_minor(B, pos, pos), L ** len(pos)))
    return out


def principal_minors_schur(A: SymMatrix) -> list[Fraction]:
    """All 2^n principal minors by a shared Schur-complement recursion.

    Works on the integer matrix B = L*A.  A node holds the chosen index list S,
    d = Delta_S(B) and the bordered minors E[i][j] = det(B[S+i, S+j]) over
    the undecided indices; including index k uses Sylvester's identity
    E'[i][j] = (E[k][k] E[i][j] - E[i][k] E[k][j]) / d.  A zero d falls back
    to direct determinants for the bordered minors.
    """
    n = A.n
    B, L = A.integer_scaled()
    out: list[Fraction] = [Fraction(0)] * (1 << n)
    scaled = [0] * (1 << n)
    scaled[0] = 1

    def visit(start: int, chosen: list[int], bits: int, d: int, E: list[list[int]]):
        # E is indexed by positions start..n-1 relative to ``start``
        for off in range(n - start):
            k = start + off
            nbits = bits | (1 << (n - 1 - k))
            dk = E[off][off]
            scaled[nbits] = dk
            rest = n - k - 1
            if rest == 0:
                continue
            base = off + 1
            if d:
                rowk = E[off]
                E2 = [
                    [(dk * E[base + i][base + j] - E[base + i][off] * rowk[base + j]) // d for j in range(rest)]
                    for i in range(rest)
                ]
            else:
                S = chosen + [k]
                E2 = [
                    [_scaled_minor(B, S + [k + 1 + i], S + [k + 1 + j]) for j in range(rest)]
                    for i in range(rest)
                ]
            visit(k + 1, chosen + [k], nbits, dk, E2)

    if n:
        visit(0, [], 0, 1, [row[:] for row in B])
    for bits in range(1 << n):
        out[bits] = Fraction(scaled[bits], L ** bits.bit_count())
    return out


BACKENDS = {"naive": principal_minors_naive, "schur": principal_minors_schur}


def principal_minor_map(M: HomogenizedMatrix, backend: str = "schur") -> HyperTensor:
    """[A, t] -> [t^{n-|I|} Delta_I(A) X^I]; evaluated only for t != 0."""
    if not M.t:
        raise MatrixError("the principal minor map is evaluated only where t != 0")
    try:
        compute = BACKENDS[backend]
    except KeyError:
        raise MatrixError(f"unknown backend {backend!r}") from None
    n = M.n
    minors = compute(M.matrix)
    tp = [M.t ** k for k in range(n + 1)]
    return HyperTensor(n, {b: tp[n - b.bit_count()] * v for b, v in enumerate(minors)})


# ---------------------------------------------------------------------------
# exclusive minors and exclusive rank


def exclusive_pairs(n: int, k: int) -> Iterator[tuple[int, int]]:
    """Disjoint (I, J) with |I| = |J| = k, one per unordered pair: I holds the smallest index of I u J."""
    if 2 * k > n or k < 0:
        return
    for union in combinations(range(n), 2 * k):
        first, rest = union[0], union[1:]
        for others in combinations(rest, k - 1):
            rows = (first,) + others
            cols = tuple(x for x in rest if x not in others)
            yield _mask(n, rows), _mask(n, cols)


def _mask(n: int, positions: Sequence[int]) -> int:
    out = 0
    for k in positions:
        out |= 1 << (n - 1 - k)
    return out


def e_minors(A: SymMatrix, k: int) -> list[tuple[tuple[MultiIndex, MultiIndex], Fraction]]:
    """All k x k exclusive minors with their values (empty when 2k > n)."""
    n = A.n
    if k < 1:
        return []
    return [((MultiIndex(n, I), MultiIndex(n, J)), minor(A, I, J)) for I, J in exclusive_pairs(n, k)]


def _first_nonzero_e_minor(A: SymMatrix, k: int):
    n = A.n
    for I, J in exclusive_pairs(n, k):
        v = minor(A, I, J)
        if v:
            return (MultiIndex(n, I), MultiIndex(n, J)), v
    return None


@dataclass(frozen=True)
class ERankCertificate:
    rank: int
    witness: tuple[tuple[MultiIndex, MultiIndex], Fraction] | None = None

    def to_json(self) -> dict:
        out: dict = {"rank": self.rank, "witness": None}
        if self.witness:
            (I, J), v = self.witness
            out["witness"] = {"rows": str(I), "cols": str(J), "value": str(v)}
        return out


def erank(A: SymMatrix) -> ERankCertificate:
    """Minimal k such that every (k+1) x (k+1) E-minor vanishes, with a size-k witness."""
    witness = None
    for k in range(1, A.n // 2 + 1):
        hit = _first_nonzero_e_minor(A, k)
        if hit is None:
            return ERankCertificate(k - 1, witness)
        witness = hit
    return ERankCertificate(A.n // 2, witness)


# ---------------------------------------------------------------------------
# Veronese and E-rank <= 1 parametrisations


def veronese(y: Sequence) -> SymMatrix:
    y = [to_fraction(v) for v in y]
    n = len(y)
    return SymMatrix(n, {(i, j): y[i] * y[j] for i in range(n) for j in range(i, n)})


def sample_erank_le1(w: Sequence, y: Sequence, t) -> HomogenizedMatrix:
    """Diagonal w_i^2, off-diagonal y_i y_j, paired with t^2."""
    w = [to_fraction(v) for v in w]
    y = [to_fraction(v) for v in y]
    if len(w) != len(y):
        raise MatrixError("w and y must have the same length")
    n = len(y)
    upper = {(i, i): w[i] ** 2 for i in range(n)}
    upper.update({(i, j): y[i] * y[j] for i in range(n) for j in range(i + 1, n)})
    return HomogenizedMatrix(SymMatrix(n, upper), to_fraction(t) ** 2)


def random_erank_le1(rng: random.Random, n: int, height: int = DEFAULT_HEIGHT) -> HomogenizedMatrix:
    w = [random_rational(rng, height) for _ in range(n)]
    y = [random_rational(rng, height, nonzero=True) for _ in range(n)]
    return sample_erank_le1(w, y, random_rational(rng, height, nonzero=True))


@dataclass
class ERank1Params:
    """Outcome of recovering the off-diagonal parametrisation of an E-rank <= 1 matrix.

    ``form`` is ``"generic"`` when off-diagonals equal y_i y_j for a vector y
    (over an extension of Q) and ``squares`` holds the determined y_i^2;
    ``"degenerate"`` when every nonzero off-diagonal entry lies in the row
    and column of one index ``hub`` (the diagonal-plus-last-column form);
    ``"failure"`` when the E-rank is at least two.
    """

    ok: bool
    form: str
    products: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    squares: dict[int, Fraction] = field(default_factory=dict)
    hub: int | None = None
    witness: tuple[tuple[MultiIndex, MultiIndex], Fraction] | None = None


def complete_erank1_params(A: SymMatrix) -> ERank1Params:
    n = A.n
    if n >= 4:
        hit = _first_nonzero_e_minor(A, 2)
        if hit is not None:
            return ERank1Params(False, "failure", witness=hit)
    off = A.off_diagonal()
    products = {(i, j): A[i, j] for i in range(n) for j in range(i + 1, n)}
    if not off:
        return ERank1Params(True, "degenerate", products)
    support = set(off)
    squares: dict[int, Fraction] = {}
    consistent = True
    for i in range(n):
        candidates = set()
        for j, k in combinations([x for x in range(n) if x != i], 2):
            if A[j, k]:
                candidates.add(A[i, j] * A[i, k] / A[j, k])
        if len(candidates) > 1:
            consistent = False
        elif candidates:
            squares[i] = candidates.pop()
    if consistent:
        for (i, j), v in off.items():
            if i not in squares or j not in squares or squares[i] * squares[j] != v * v:
                consistent = False
                break
    if consistent:
        return ERank1Params(True, "generic", products, squares)
    hubs = set.intersection(*({i, j} for i, j in support))
    if hubs:
        return ERank1Params(True, "degenerate", products, hub=min(hubs))
    raise MatrixError("E-rank <= 1 matrix with neither a product nor a hub pattern")


def erank1_jacobian_rank(n: int, point: Sequence) -> int:
    """Exact rank of the Jacobian of (w, y, t) -> (entries of sample_erank_le1) at ``point``.

    Computed from the symbolic parametrisation: variables w_1..w_n, y_1..y_n, t
    are encoded as the first 2n+1 A-variables of a large enough ambient ring.
    """
    point = [to_fraction(v) for v in point]
    if len(point) != 2 * n + 1:
        raise MatrixError("point must have 2n+1 coordinates (w, y, t)")
    m = 2 * n + 1
    ring_n = 1
    while t_index(ring_n) + 1 < m:
        ring_n += 1

    def var(k: int) -> SparsePoly:
        return SparsePoly.var("A", ring_n, k)

    ws = [var(k) for k in range(n)]
    ys = [var(n + k) for k in range(n)]
    t = var(2 * n)
    comps = [w * w for w in ws]
    comps += [ys[i] * ys[j] for i in range(n) for j in range(i + 1, n)]
    comps.append(t * t)
    values = point + [Fraction(0)] * (t_index(ring_n) + 1 - m)
    jac = [[Fraction(c.diff(k).evaluate(values)) for k in range(m)] for c in comps]
    return linalg.dense_rank(jac)


# ---------------------------------------------------------------------------
# all minors and the Lagrangian plane action


class PluckerVector:
    """Homogenized minors t^{n-|R|} Delta^R_S over non-redundant pairs R <= S."""

    __slots__ = ("n", "coords")

    def __init__(self, n: int, coords: dict[tuple[int, int], Fraction]):
        self.n = n
        self.coords = coords

    def __getitem__(self, key) -> Fraction:
        R, S = key
        R, S = _bits(self.n, R), _bits(self.n, S)
        if R > S:
            R, S = S, R
        return self.coords[R, S]

    def __len__(self):
        return len(self.coords)

    def principal(self) -> HyperTensor:
        return HyperTensor(self.n, {R: v for (R, S), v in self.coords.items() if R == S})

    def exclusive(self) -> dict[tuple[int, int], Fraction]:
        return {k: v for k, v in self.coords.items() if not k[0] & k[1] and k[0] != k[1]}

    def to_json(self) -> dict:
        return {"n": self.n,
                "coords": {f"{index_str(self.n, R)}|{index_str(self.n, S)}": str(v)
                           for (R, S), v in sorted(self.coords.items())}}

    @classmethod
    def from_json(cls, obj: Mapping) -> "PluckerVector":
        n = int(obj["n"])
        coords = {}
        for key, v in obj["coords"].items():
            r, s = key.split("|")
            coords[parse_index(r, n), parse_index(s, n)] = Fraction(str(v))
        return cls(n, coords)


def plucker_size(n: int) -> int:
    return sum(comb(n, k) * (comb(n, k) + 1) // 2 for k in range(n + 1))


def all_minors_vector(M: HomogenizedMatrix) -> PluckerVector:
    n = M.n
    B, L = M.matrix.integer_scaled()
    coords: dict[tuple[int, int], Fraction] = {}
    for k in range(n + 1):
        subsets = [_mask(n, c) for c in combinations(range(n), k)]
        scale = M.t ** (n - k) / Fraction(L) ** k
        for a, R in enumerate(subsets):
            for S in subsets[a:]:
                lo, hi = min(R, S), max(R, S)
                coords[lo, hi] = scale * _scaled_minor(B, _positions(n, lo), _positions(n, hi))
    return PluckerVector(n, coords)


def act_on_lagrangian_plane(g: GroupElement, M: HomogenizedMatrix) -> HomogenizedMatrix:
    """Apply a permutation-free group element to the plane rowspan[t Id | A] and return its graph form.

    Factor i acts on the pair (e_i, f_i) as e_i -> a e_i + c f_i and
    f_i -> b e_i + d f_i.  With P, Q the e- and f-blocks of the image rows,
    the result is (t P^{-1} Q, t).
    """
    if not g.has_trivial_perm:
        raise MatrixError("act_on_lagrangian_plane needs a group element with identity permutation")
    n = M.n
    if g.n != n:
        raise TensorError(f"group element has {g.n} factors, matrix has size {n}")
    A, t = M.matrix, M.t
    P = [[Fraction(0)] * n for _ in range(n)]
    Q = [[Fraction(0)] * n for _ in range(n)]
    for r in range(n):
        for i in range(n):
            (a, b), (c, d) = g.factors[i]
            x = t if r == i else Fraction(0)
            y = A[r, i]
            P[r][i] = a * x + b * y
            Q[r][i] = c * x + d * y
    sol = _solve(P, Q)
    if sol is None:
        raise GraphFormError("leading n x n block (e-coordinates) of the transformed plane is singular")
    upper = {}
    for i in range(n):
        for j in range(i, n):
            if sol[i][j] != sol[j][i]:
                raise MatrixError("transformed plane is not Lagrangian; check the group element")
            upper[i, j] = t * sol[i][j]
    return HomogenizedMatrix(SymMatrix(n, upper), t)


def _solve(P: list[list[Fraction]], Q: list[list[Fraction]]) -> list[list[Fraction]] | None:
    """P^{-1} Q by Gauss-Jordan, or None when P is singular."""
    n = len(P)
    aug = [P[r][:] + Q[r][:] for r in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c]), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def lagrangian_graph_exists(g: GroupElement, M: HomogenizedMatrix) -> bool:
    try:
        act_on_lagrangian_plane(g, M)
    except GraphFormError:
        return False
    return True

