"""Young symmetrizers, sl2 lowering/raising, and the equivariant module bases.

A filling of a two-row Young diagram with the slots 1..d turns into a
weight vector: slots in the first row carry basis index 0, slots in the
second row carry basis index 1.  Columns are antisymmetrized first, rows
symmetrized second, and the d slots are then multiplied together, which
projects the tensor into the symmetric power.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb, prod
from typing import Iterable, Sequence

from .core import bit_of
from .linalg import Echelon
from .poly import Monomial, PolyError, SparsePoly, monomial_key

log = logging.getLogger(__name__)


class ModuleError(RuntimeError):
    pass


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(p for p in self.parts if p)
        if len(parts) > 2:
            raise ValueError("only partitions with at most two rows are supported")
        if any(a < b for a, b in zip(parts, parts[1:])) or any(p < 0 for p in parts):
            raise ValueError(f"{self.parts} is not a partition")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def row_lengths(self) -> tuple[int, int]:
        p = self.parts + (0, 0)
        return p[0], p[1]

    @property
    def weight(self) -> int:
        a, b = self.row_lengths
        return a - b

    @property
    def dimension(self) -> int:
        """Dimension of the Schur module S_pi C^2."""
        return self.weight + 1

    def __str__(self):
        return "S_" + ",".join(map(str, self.parts))


@dataclass(frozen=True)
class Filling:
    """A filled Young diagram; rows are tuples of slot labels 1..d."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows if len(r))
        object.__setattr__(self, "rows", rows)
        Partition(tuple(len(r) for r in rows))
        labels = sorted(x for r in rows for x in r)
        if labels != list(range(1, len(labels) + 1)):
            raise ValueError(f"filling {rows} does not use each of 1..d exactly once")

    @classmethod
    def parse(cls, text: str) -> "Filling":
        """``"12/3"`` is the tableau with rows (1, 2) and (3,)."""
        return cls(tuple(tuple(int(ch) for ch in row) for row in text.split("/")))

    @property
    def shape(self) -> Partition:
        return Partition(tuple(len(r) for r in self.rows))

    @property
    def size(self) -> int:
        return sum(len(r) for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        width = len(self.rows[0]) if self.rows else 0
        return [tuple(r[c] for r in self.rows if c < len(r)) for c in range(width)]

    def __str__(self):
        return "/".join("".join(map(str, r)) for r in self.rows)


def row_filling(d: int) -> Filling:
    return Filling((tuple(range(1, d + 1)),))


# ---------------------------------------------------------------------------
# Young symmetrizer on one factor


def _block_group(blocks: Sequence[Sequence[int]], d: int):
    """Yield (permutation as slot map, sign) for the product of symmetric groups on ``blocks``."""
    per_block = []
    for blk in blocks:
        blk = [s - 1 for s in blk]
        per_block.append([(blk, img) for img in permutations(blk)])
    for choice in product(*per_block):
        perm = list(range(d))
        for src, img in choice:
            for a, b in zip(src, img):
                perm[a] = b
        yield perm, _sign(perm)


def _sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def _act(perm: Sequence[int], word: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(word)
    for s, b in enumerate(word):
        out[perm[s]] = b
    return tuple(out)


def symmetrize_factor(filling: Filling) -> dict[tuple[int, ...], int]:
    """Image of the weight word of ``filling`` under column antisymmetrization then row symmetrization.

    Returns a map from bit words (one bit per slot) to integer coefficients.
    """
    d = filling.size
    word = [0] * d
    for r, row in enumerate(filling.rows):
        for s in row:
            word[s - 1] = r
    vec = {tuple(word): 1}
    cols = [c for c in filling.columns() if len(c) > 1]
    out: dict[tuple[int, ...], int] = {}
    for perm, sgn in _block_group(cols, d):
        for w, c in vec.items():
            key = _act(perm, w)
            out[key] = out.get(key, 0) + sgn * c
    vec = {w: c for w, c in out.items() if c}
    rows = [r for r in filling.rows if len(r) > 1]
    out = {}
    for perm, _ in _block_group(rows, d):
        for w, c in vec.items():
            key = _act(perm, w)
            out[key] = out.get(key, 0) + c
    return {w: c for w, c in out.items() if c}


def hwv_from_fillings(fillings: Sequence[Filling | str], d: int | None = None, n: int | None = None,
                      raw: bool = False) -> SparsePoly:
    """Highest weight vector in S^d(V_1 (x) ... (x) V_n) built from one filling per factor.

    The result is divided by its positive content unless ``raw`` is set.
    Returns the zero polynomial (and logs why) if the fillings annihilate the
    symmetric projection.
    """
    fills = [Filling.parse(f) if isinstance(f, str) else f for f in fillings]
    n = len(fills) if n is None else n
    if len(fills) != n:
        raise ModuleError(f"expected {n} fillings, got {len(fills)}")
    d = fills[0].size if d is None else d
    if any(f.size != d for f in fills):
        raise ModuleError(f"all fillings must have size {d}")
    factor_vecs = [list(symmetrize_factor(f).items()) for f in fills]
    masks = [bit_of(n, i) for i in range(n)]
    terms: dict[Monomial, Fraction] = {}
    for choice in product(*factor_vecs):
        coef = 1
        slots = [0] * d
        for i, (word, c) in enumerate(choice):
            coef *= c
            for s in range(d):
                if word[s]:
                    slots[s] |= masks[i]
        m = tuple(sorted(slots))
        terms[m] = terms.get(m, 0) + coef
    f = SparsePoly("X", n, terms)
    if not f:
        log.info("fillings %s annihilate the projection to S^%d", [str(x) for x in fills], d)
        return f
    return f if raw else f.primitive()


# ---------------------------------------------------------------------------
# sl2 operators


def _shift(i: int, f: SparsePoly, lowering: bool) -> SparsePoly:
    if f.varset != "X":
        raise PolyError("sl2 operators act on X-variables")
    if not 1 <= i <= f.n:
        raise PolyError(f"factor {i} out of range")
    mask = bit_of(f.n, i - 1)
    out: dict[Monomial, Fraction] = {}
    for m, c in f.terms.items():
        prev = None
        for p, v in enumerate(m):
            if v == prev:
                continue
            prev = v
            if bool(v & mask) == lowering:
                continue
            k = m.count(v)
            nv = v ^ mask
            nm = tuple(sorted(m[:p] + (nv,) + m[p + 1:]))
            out[nm] = out.get(nm, 0) + k * c
    return SparsePoly("X", f.n, out)


def lower(i: int, f: SparsePoly) -> SparsePoly:
    """Derivation sending the index-0 direction of factor ``i`` (1-based) to index 1."""
    return _shift(i, f, lowering=True)


def raise_(i: int, f: SparsePoly) -> SparsePoly:
    """Derivation sending the index-1 direction of factor ``i`` (1-based) to index 0."""
    return _shift(i, f, lowering=False)


def monomial_weight(n: int, m: Monomial) -> tuple[int, ...]:
    out = []
    for i in range(n):
        mask = bit_of(n, i)
        ones = sum(1 for v in m if v & mask)
        out.append(len(m) - 2 * ones)
    return tuple(out)


def weight(f: SparsePoly) -> tuple[int, ...]:
    """Per-factor weight (#index-0 minus #index-1); raises if ``f`` is not a weight vector."""
    ws = {monomial_weight(f.n, m) for m in f.terms}
    if len(ws) != 1:
        raise PolyError("polynomial is not a weight vector")
    return ws.pop()


def permute_poly(f: SparsePoly, perm: Sequence[int]) -> SparsePoly:
    """Move factor k of ``f`` to factor perm[k] (both 1-based via a 0-based list of targets)."""
    n = f.n
    src = [bit_of(n, k) for k in range(n)]
    dst = [bit_of(n, perm[k] - 1) for k in range(n)]

    def relabel(v: int) -> int:
        out = 0
        for k in range(n):
            if v & src[k]:
                out |= dst[k]
        return out

    return f.map_variables(relabel)


# ---------------------------------------------------------------------------
# module specifications and generation


@dataclass
class ModuleSpec:
    """Module S_{pi_1} ... S_{pi_n} (summed over factor arrangements) with given highest weight vectors.

    ``partitions`` is the representative arrangement; ``hwvs`` are the
    highest weight vectors of that arrangement, one per copy.
    """

    n: int
    d: int
    family: str
    partitions: tuple[Partition, ...]
    hwvs: list[SparsePoly] = field(default_factory=list)

    @property
    def multiplicity(self) -> int:
        return len(self.hwvs)

    def arrangements(self) -> list[tuple[int, ...]]:
        """Permutations (0-based targets) realising each distinct placement of the partitions."""
        seen = {}
        shapes = [p.parts for p in self.partitions]
        for perm in _placements(shapes):
            key = tuple(shapes[perm.index(k)] for k in range(self.n))
            seen.setdefault(key, perm)
        return [seen[k] for k in sorted(seen)]

    def predicted_dimension(self) -> int:
        per_copy = prod(p.dimension for p in self.partitions)
        return self.multiplicity * len(self.arrangements()) * per_copy

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "family": self.family,
                "partitions": [list(p.parts) for p in self.partitions]}


def _placements(shapes: Sequence[tuple[int, ...]]):
    """One permutation per distinct placement of a multiset of shapes (0-based targets)."""
    n = len(shapes)
    groups: dict[tuple[int, ...], list[int]] = {}
    for k, s in enumerate(shapes):
        groups.setdefault(s, []).append(k)
    keys = list(groups)

    def rec(gi: int, free: list[int], assign: dict[int, int]):
        if gi == len(keys):
            yield tuple(assign[k] for k in range(n))
            return
        members = groups[keys[gi]]
        for targets in combinations(free, len(members)):
            rest = [x for x in free if x not in targets]
            new = dict(assign)
            for src, dst in zip(members, targets):
                new[src] = dst
            yield from rec(gi + 1, rest, new)

    yield from rec(0, list(range(n)), {})


@dataclass
class ModuleBasis:
    spec: ModuleSpec
    polys: list[SparsePoly]
    origins: list[tuple[int, int]] = field(default_factory=list)

    def copy_indices(self, copy: int) -> list[int]:
        """Positions of the elements generated from highest weight vector number ``copy``."""
        return [k for k, (c, _) in enumerate(self.origins) if c == copy]

    @property
    def dimension(self) -> int:
        return len(self.polys)

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def to_json(self) -> dict:
        return {"spec": self.spec.to_json(), "dimension": self.dimension,
                "origins": [list(o) for o in self.origins],
                "polys": [p.to_json() for p in self.polys]}

    @classmethod
    def from_json(cls, obj: dict) -> "ModuleBasis":
        s = obj["spec"]
        spec = ModuleSpec(int(s["n"]), int(s["d"]), s["family"],
                          tuple(Partition(tuple(p)) for p in s["partitions"]))
        polys = [SparsePoly.from_json(p) for p in obj["polys"]]
        if int(obj["dimension"]) != len(polys):
            raise ModuleError("dimension field disagrees with the number of polynomials")
        origins = [tuple(o) for o in obj.get("origins", [])]
        return cls(spec, polys, origins)


def _row(f: SparsePoly) -> dict:
    return {monomial_key(m): c for m, c in f.terms.items()}


def lowering_closure(hwvs: Iterable[SparsePoly], with_copy: bool = False) -> list:
    """Breadth-first closure under all lowering operators, keeping an independent set.

    Each highest weight vector is closed in turn, so elements are grouped by
    copy; with ``with_copy`` the result holds (copy index, poly) pairs.
    """
    spaces: dict[tuple[int, ...], Echelon] = {}
    basis: list = []
    for copy, h in enumerate(hwvs):
        wave = [h] if h else []
        while wave:
            nxt = []
            for f in wave:
                ech = spaces.setdefault(weight(f), Echelon())
                if not ech.add(_row(f)):
                    continue
                basis.append((copy, f) if with_copy else f)
                for i in range(1, f.n + 1):
                    g = lower(i, f)
                    if g:
                        nxt.append(g)
            wave = nxt
    return basis


def generate_module_basis(spec: ModuleSpec) -> ModuleBasis:
    if not spec.hwvs:
        raise ModuleError(f"module spec {spec.family} has no highest weight vectors")
    closure = lowering_closure(spec.hwvs, with_copy=True)
    spaces: dict[tuple[int, ...], Echelon] = {}
    polys: list[SparsePoly] = []
    origins: list[tuple[int, int]] = []
    for a, perm in enumerate(spec.arrangements()):
        targets = [t + 1 for t in perm]
        for copy, f in closure:
            g = permute_poly(f, targets).normalized()
            if spaces.setdefault(weight(g), Echelon()).add(_row(g)):
                polys.append(g)
                origins.append((copy, a))
    expected = spec.predicted_dimension()
    if len(polys) != expected:
        raise ModuleError(f"{spec.family} module for n={spec.n}: generated {len(polys)} "
                          f"independent elements, predicted {expected}")
    return ModuleBasis(spec, polys, origins)


# ---------------------------------------------------------------------------
# the specific modules

S21 = Partition((2, 1))
S22 = Partition((2, 2))
WEDGE = Partition((1, 1))

# fillings giving F1, F2, F3 (first column {1,3} is "12/3", first column {1,2} is "13/2")
CUBIC_FILLINGS = (
    ("12/3", "12/3", "12/3", "12/3"),
    ("12/3", "12/3", "13/2", "13/2"),
    ("12/3", "13/2", "12/3", "13/2"),
)
HD_FILLINGS = ("12/34", "12/34", "12/34")


def _padded(fills: Sequence[str], n: int, d: int) -> list[Filling]:
    return [Filling.parse(f) for f in fills] + [row_filling(d)] * (n - len(fills))


def cubic_hwvs(n: int = 4) -> list[SparsePoly]:
    return [hwv_from_fillings(_padded(f, n, 3)) for f in CUBIC_FILLINGS]


def hd_hwv(n: int = 3) -> SparsePoly:
    return hwv_from_fillings(_padded(HD_FILLINGS, n, 4))


def cubic_spec(n: int) -> ModuleSpec:
    parts = (S21,) * 4 + (Partition((3,)),) * (n - 4)
    return ModuleSpec(n, 3, "cubic", parts, cubic_hwvs(n))


def hd_spec(n: int) -> ModuleSpec:
    parts = (S22,) * 3 + (Partition((4,)),) * (n - 3)
    return ModuleSpec(n, 4, "hd", parts, [hd_hwv(n)])


def hd_module(n: int) -> ModuleBasis:
    if n < 3:
        raise ModuleError("the hyperdeterminantal module needs n >= 3")
    return generate_module_basis(hd_spec(n))


def cubic_module(n: int) -> ModuleBasis:
    if n < 3:
        raise ModuleError("the cubic module needs n >= 3")
    if n == 3:
        spec = ModuleSpec(3, 3, "cubic", (S21,) * 3)
        return ModuleBasis(spec, [])
    return generate_module_basis(cubic_spec(n))


def wedge_quadric(n: int = 4) -> SparsePoly:
    if n != 4:
        raise ModuleError("only the n=4 wedge quadric is built")
    return hwv_from_fillings(["1/2"] * 4)


def standard_fillings(shape: Partition) -> list[Filling]:
    """All standard fillings (rows and columns increasing) of a two-row shape."""
    a, b = shape.row_lengths
    d = a + b
    out = []
    for second in combinations(range(1, d + 1), b):
        first = tuple(x for x in range(1, d + 1) if x not in second)
        if all(second[k] > first[k] for k in range(b)):
            out.append(Filling((first, second)))
    return out


def candidate_hwvs(shapes: Sequence[Partition]) -> list[SparsePoly]:
    """hwv_from_fillings over every combination of standard fillings, one shape per factor."""
    options = [standard_fillings(s) for s in shapes]
    return [hwv_from_fillings(list(choice)) for choice in product(*options)]


def expected_dimension(family: str, n: int) -> int:
    if family == "hd":
        return comb(n, 3) * 5 ** (n - 3)
    if family == "cubic":
        return 3 * comb(n, 4) * 16 * 4 ** (n - 4) if n >= 4 else 0
    raise ModuleError(f"unknown family {family!r}")
