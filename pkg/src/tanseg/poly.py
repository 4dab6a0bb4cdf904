"""Sparse exact multivariate polynomials, pullback to symmetric matrices and the u,v,w rewrite.

Three variable sets share one representation:

* ``"X"``: tensor coordinates ``X^I``; variable index = integer value of ``I``.
* ``"A"``: entries ``a_{i,j}`` (i <= j) of a symmetric matrix followed by ``t``;
  ordered a_{1,1} < a_{1,2} < ... < a_{1,n} < a_{2,2} < ... < a_{n,n} < t.
* ``"UVW"``: u = a_{1,2}a_{3,4}, v = a_{1,3}a_{2,4}, w = a_{1,4}a_{2,3}.

A monomial is the ascending tuple of its variable indices, with repetition,
so ``X^{0000} X^{1111}`` is ``(0, 15)``.  Monomials are compared by degree,
then lexicographically on the descending variable word (larger variables
dominate).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Callable, Iterable, Mapping, Sequence

from . import linalg
from .core import HyperTensor, index_str, parse_index

VARSETS = ("X", "A", "UVW")
UVW_NAMES = ("u", "v", "w")

Monomial = tuple[int, ...]


class PolyError(ValueError):
    pass


def monomial_key(m: Monomial):
    return (len(m), m[::-1])


def _merge(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


# ---------------------------------------------------------------------------
# variable bookkeeping


def a_index(n: int, i: int, j: int) -> int:
    """Index of a_{i,j} (1-based, symmetric) among the A-variables."""
    if i > j:
        i, j = j, i
    if not 1 <= i <= j <= n:
        raise PolyError(f"a_{i}_{j} out of range for n={n}")
    return (i - 1) * n - (i - 1) * (i - 2) // 2 + (j - i)


def t_index(n: int) -> int:
    return n * (n + 1) // 2


@lru_cache(maxsize=None)
def a_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(1, n + 1) for j in range(i, n + 1))


def nvars(varset: str, n: int) -> int:
    if varset == "X":
        return 1 << n
    if varset == "A":
        return t_index(n) + 1
    return 3


def var_name(varset: str, n: int, v: int) -> str:
    if varset == "X":
        return index_str(n, v)
    if varset == "A":
        if v == t_index(n):
            return "t"
        i, j = a_pairs(n)[v]
        return f"a_{i}_{j}"
    return UVW_NAMES[v]


def parse_var(varset: str, n: int, name: str) -> int:
    if varset == "X":
        return parse_index(name, n)
    if varset == "A":
        if name == "t":
            return t_index(n)
        try:
            _, i, j = name.split("_")
            return a_index(n, int(i), int(j))
        except ValueError as exc:
            raise PolyError(f"bad A-variable {name!r}") from exc
    if name not in UVW_NAMES:
        raise PolyError(f"bad UVW-variable {name!r}")
    return UVW_NAMES.index(name)


# ---------------------------------------------------------------------------
# polynomials


class SparsePoly:
    __slots__ = ("varset", "n", "terms")

    def __init__(self, varset: str, n: int, terms: Mapping[Monomial, object] | None = None):
        if varset not in VARSETS:
            raise PolyError(f"unknown variable set {varset!r}")
        self.varset = varset
        self.n = n
        clean = {}
        for m, c in (terms or {}).items():
            c = c if isinstance(c, Fraction) else Fraction(c)
            if c:
                clean[tuple(sorted(m))] = c
        self.terms: dict[Monomial, Fraction] = clean

    @classmethod
    def _raw(cls, varset: str, n: int, terms: dict) -> "SparsePoly":
        p = cls.__new__(cls)
        p.varset, p.n, p.terms = varset, n, terms
        return p

    @classmethod
    def var(cls, varset: str, n: int, v: int) -> "SparsePoly":
        return cls._raw(varset, n, {(v,): Fraction(1)})

    @classmethod
    def const(cls, varset: str, n: int, c) -> "SparsePoly":
        c = Fraction(c)
        return cls._raw(varset, n, {(): c} if c else {})

    @classmethod
    def x(cls, n: int, index) -> "SparsePoly":
        if isinstance(index, str):
            index = parse_index(index, n)
        return cls.var("X", n, index)

    def zero(self) -> "SparsePoly":
        return SparsePoly._raw(self.varset, self.n, {})

    # -- basic queries --------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({len(m) for m in self.terms}) <= 1

    def variables(self) -> set[int]:
        return {v for m in self.terms for v in m}

    def sorted_terms(self, descending: bool = True) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: monomial_key(kv[0]), reverse=descending)

    def leading_term(self) -> tuple[Monomial, Fraction]:
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        m = max(self.terms, key=monomial_key)
        return m, self.terms[m]

    def coefficient(self, m: Iterable[int]) -> Fraction:
        return self.terms.get(tuple(sorted(m)), Fraction(0))

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "SparsePoly"):
        if self.varset != other.varset or self.n != other.n:
            raise PolyError(f"variable sets differ: {self.varset}{self.n} vs {other.varset}{other.n}")

    def _lift(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return SparsePoly.const(self.varset, self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return SparsePoly._raw(self.varset, self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._raw(self.varset, self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        self._check(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _merge(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return SparsePoly._raw(self.varset, self.n, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "SparsePoly":
        c = Fraction(c)
        if not c:
            return self.zero()
        return SparsePoly._raw(self.varset, self.n, {m: c * v for m, v in self.terms.items()})

    def __truediv__(self, c):
        return self.scale(1 / Fraction(c))

    def __pow__(self, e: int):
        if e < 0:
            raise PolyError("negative exponent")
        result = SparsePoly.const(self.varset, self.n, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(): Fraction(other)} if other else {})
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.varset == other.varset and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.varset, self.n, frozenset(self.terms.items())))

    # -- calculus and substitution --------------------------------------
    def diff(self, v: int) -> "SparsePoly":
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            k = m.count(v)
            if k:
                i = m.index(v)
                nm = m[:i] + m[i + 1:]
                out[nm] = out.get(nm, 0) + k * c
        return SparsePoly(self.varset, self.n, out)

    def evaluate(self, values: Sequence | Mapping):
        """Substitute ``values[v]`` for each variable; values may be any ring elements."""
        total = None
        for m, c in self.terms.items():
            term = None
            for v in m:
                x = values[v]
                term = x if term is None else term * x
            if term is None:
                val = c
            elif c == 1:
                val = term
            else:
                val = term * c
            total = val if total is None else total + val
        return 0 if total is None else total

    def map_variables(self, f: Callable[[int], int]) -> "SparsePoly":
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            nm = tuple(sorted(f(v) for v in m))
            s = out.get(nm, 0) + c
            if s:
                out[nm] = s
            else:
                out.pop(nm, None)
        return SparsePoly._raw(self.varset, self.n, out)

    # -- normalisation ----------------------------------------------------
    def content(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "SparsePoly":
        """Divide by the positive content: integer coefficients with gcd 1, signs kept."""
        if not self.terms:
            return self
        return self.scale(1 / self.content())

    def normalized(self) -> "SparsePoly":
        """Primitive form with positive leading coefficient."""
        p = self.primitive()
        if p.terms and p.leading_term()[1] < 0:
            p = -p
        return p

    def proportional_to(self, other: "SparsePoly") -> Fraction | None:
        """Return ``c`` with ``self == c * other``, or None."""
        self._check(other)
        if not self.terms or not other.terms:
            return Fraction(1) if not self.terms and not other.terms else None
        if self.terms.keys() != other.terms.keys():
            return None
        m = next(iter(self.terms))
        c = self.terms[m] / other.terms[m]
        if all(self.terms[k] == c * other.terms[k] for k in self.terms):
            return c
        return None

    # -- display and serialisation ------------------------------------------
    def __repr__(self):
        return f"SparsePoly({self.varset}, n={self.n}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(self._fmt_var(v) for v in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def _fmt_var(self, v: int) -> str:
        name = var_name(self.varset, self.n, v)
        return f"X^{name}" if self.varset == "X" else name

    def to_json(self) -> dict:
        terms = []
        for m, c in self.sorted_terms():
            exps: dict[str, int] = {}
            for v in m:
                key = var_name(self.varset, self.n, v)
                exps[key] = exps.get(key, 0) + 1
            terms.append({"c": str(c), "e": exps})
        return {"vars": self.varset, "n": self.n, "terms": terms}

    @classmethod
    def from_json(cls, obj: Mapping) -> "SparsePoly":
        try:
            varset = obj["vars"]
            n = int(obj.get("n", 4 if varset == "UVW" else 0))
            out: dict[Monomial, Fraction] = {}
            for term in obj["terms"]:
                m: list[int] = []
                for name, e in term["e"].items():
                    e = int(e)
                    if e < 0:
                        raise PolyError("negative exponent")
                    m.extend([parse_var(varset, n, name)] * e)
                key = tuple(sorted(m))
                out[key] = out.get(key, 0) + Fraction(str(term["c"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, PolyError):
                raise
            raise PolyError(f"malformed polynomial JSON: {exc}") from exc
        return cls(varset, n, out)


def from_string_terms(varset: str, n: int, terms: Iterable[tuple[object, Sequence[str]]]) -> SparsePoly:
    """Build from ``(coefficient, [variable names])`` pairs; repeated names multiply."""
    out: dict[Monomial, Fraction] = {}
    for c, names in terms:
        m = tuple(sorted(parse_var(varset, n, s) for s in names))
        out[m] = out.get(m, 0) + Fraction(c)
    return SparsePoly(varset, n, out)


# ---------------------------------------------------------------------------
# evaluation on tensors


def eval_on_tensor(f: SparsePoly, z: HyperTensor) -> Fraction:
    if f.varset != "X":
        raise PolyError(f"expected a polynomial in X-variables, got {f.varset}")
    if f.n != z.n:
        raise PolyError(f"polynomial has n={f.n}, tensor has n={z.n}")
    return Fraction(f.evaluate(z.dense()))


class CompiledSystem:
    """A list of polynomials prepared for repeated exact evaluation at integer points.

    Coefficients are cleared to integers per polynomial (which does not
    change vanishing), and each distinct monomial is evaluated once per point.
    """

    def __init__(self, polys: Sequence[SparsePoly]):
        self.polys = list(polys)
        mono_ids: dict[Monomial, int] = {}
        self.rows: list[list[tuple[int, int]]] = []
        for f in self.polys:
            den = 1
            for c in f.terms.values():
                den = lcm(den, c.denominator)
            row = []
            for m, c in f.terms.items():
                k = mono_ids.setdefault(m, len(mono_ids))
                row.append((k, int(c * den)))
            self.rows.append(row)
        self.monomials = list(mono_ids)
        # monomials grouped by prefix so products are shared
        self._plan = _product_plan(self.monomials)

    def monomial_values(self, point: Sequence[int]) -> list[int]:
        cache: dict[Monomial, int] = {(): 1}
        for m in self._plan:
            cache[m] = cache[m[:-1]] * point[m[-1]]
        return [cache[m] for m in self.monomials]

    def values(self, point: Sequence[int]) -> list[int]:
        mv = self.monomial_values(point)
        return [sum(c * mv[k] for k, c in row) for row in self.rows]

    def first_nonzero(self, point: Sequence[int], order: Iterable[int] | None = None) -> tuple[int, int] | None:
        """Lowest-index polynomial that does not vanish, with its (integer-scaled) value."""
        mv = self.monomial_values(point)
        for i in (range(len(self.rows)) if order is None else order):
            val = sum(c * mv[k] for k, c in self.rows[i])
            if val:
                return i, val
        return None


def _product_plan(monomials: Iterable[Monomial]) -> list[Monomial]:
    needed: set[Monomial] = set()
    for m in monomials:
        for k in range(1, len(m) + 1):
            needed.add(m[:k])
    return sorted(needed, key=len)


# ---------------------------------------------------------------------------
# pullback along the principal minor map


def _entry_poly(n: int, i: int, j: int) -> SparsePoly:
    return SparsePoly.var("A", n, a_index(n, i, j))


def symbolic_minor(n: int, rows: Sequence[int], cols: Sequence[int]) -> SparsePoly:
    """Minor of the generic symmetric matrix with 1-based ``rows`` and ``cols``, by Laplace expansion."""
    rows, cols = tuple(rows), tuple(cols)
    if len(rows) != len(cols):
        raise PolyError("minor needs as many rows as columns")
    memo: dict[tuple[int, ...], SparsePoly] = {}

    def expand(r: int, remaining: tuple[int, ...]) -> SparsePoly:
        if r == len(rows):
            return SparsePoly.const("A", n, 1)
        hit = memo.get(remaining)
        if hit is not None:
            return hit
        total = SparsePoly("A", n)
        for pos, c in enumerate(remaining):
            sub = expand(r + 1, remaining[:pos] + remaining[pos + 1:])
            if sub:
                term = _entry_poly(n, rows[r], c) * sub
                total = total - term if pos % 2 else total + term
        memo[remaining] = total
        return total

    return expand(0, cols)


@lru_cache(maxsize=None)
def principal_minor_poly(n: int, bits: int) -> SparsePoly:
    """t^{n-|I|} * Delta_I(A) as a polynomial in the A-variables."""
    idx = [k + 1 for k in range(n) if bits >> (n - 1 - k) & 1]
    minor = symbolic_minor(n, idx, idx)
    return minor * SparsePoly.var("A", n, t_index(n)) ** (n - len(idx))


def pullback(f: SparsePoly, n: int | None = None) -> SparsePoly:
    """Substitute X^I = t^{n-|I|} Delta_I(A)."""
    if f.varset != "X":
        raise PolyError("pullback needs a polynomial in X-variables")
    n = f.n if n is None else n
    if n != f.n:
        raise PolyError(f"polynomial has n={f.n}, asked for n={n}")
    if not f.is_homogeneous():
        raise PolyError("pullback needs a homogeneous polynomial")
    cache: dict[Monomial, SparsePoly] = {(): SparsePoly.const("A", n, 1)}

    def mono(m: Monomial) -> SparsePoly:
        hit = cache.get(m)
        if hit is None:
            hit = mono(m[:-1]) * principal_minor_poly(n, m[-1])
            cache[m] = hit
        return hit

    total: dict[Monomial, Fraction] = {}
    for m, c in f.terms.items():
        for am, ac in mono(m).terms.items():
            s = total.get(am, 0) + c * ac
            if s:
                total[am] = s
            else:
                total.pop(am, None)
    return SparsePoly._raw("A", n, total)


def specialize_t(f: SparsePoly, value=1) -> SparsePoly:
    """Set t to ``value`` in a polynomial over the A-variables."""
    if f.varset != "A":
        raise PolyError("specialize_t needs A-variables")
    tv = t_index(f.n)
    value = Fraction(value)
    out: dict[Monomial, Fraction] = {}
    for m, c in f.terms.items():
        k = m.count(tv)
        nm = m[: len(m) - k] if k else m
        s = out.get(nm, 0) + c * value ** k
        if s:
            out[nm] = s
        else:
            out.pop(nm, None)
    return SparsePoly._raw("A", f.n, out)


def divide_by_t_power(f: SparsePoly, k: int) -> SparsePoly:
    """Exact division by t^k; raises if some term has lower t-degree."""
    tv = t_index(f.n)
    out = {}
    for m, c in f.terms.items():
        if m.count(tv) < k:
            raise PolyError(f"t^{k} does not divide the term {m}")
        out[m[: len(m) - k]] = c
    return SparsePoly._raw("A", f.n, out)


def depends_on_diagonal(f: SparsePoly) -> bool:
    diag = {a_index(f.n, i, i) for i in range(1, f.n + 1)}
    return bool(f.variables() & diag)


# ---------------------------------------------------------------------------
# rewriting modulo the binomial ideal


def uvw_monomials(n: int = 4) -> tuple[Monomial, Monomial, Monomial]:
    u = tuple(sorted((a_index(n, 1, 2), a_index(n, 3, 4))))
    v = tuple(sorted((a_index(n, 1, 3), a_index(n, 2, 4))))
    w = tuple(sorted((a_index(n, 1, 4), a_index(n, 2, 3))))
    return u, v, w


def rewrite_uvw(f: SparsePoly) -> tuple[SparsePoly, SparsePoly]:
    """Express ``f`` (n=4 A-variables, t-free) in u, v, w; also return its image at u = v = w.

    The image is a polynomial in w alone; it vanishes exactly when ``f`` lies
    in the ideal generated by u - w and v - w.
    """
    if f.varset != "A" or f.n != 4:
        raise PolyError("rewrite_uvw needs a polynomial in the n=4 A-variables")
    pairs = [
        (a_index(4, 1, 2), a_index(4, 3, 4)),
        (a_index(4, 1, 3), a_index(4, 2, 4)),
        (a_index(4, 1, 4), a_index(4, 2, 3)),
    ]
    allowed = {v for p in pairs for v in p}
    out: dict[Monomial, Fraction] = {}
    for m, c in f.terms.items():
        bad = [v for v in m if v not in allowed]
        exps = []
        for x, y in pairs:
            ex, ey = m.count(x), m.count(y)
            if ex != ey:
                bad.append(x)
            exps.append(ex)
        if bad:
            names = "*".join(var_name("A", 4, v) for v in m) or "1"
            raise PolyError(f"monomial {names} is not a product of u, v, w")
        key = (0,) * exps[0] + (1,) * exps[1] + (2,) * exps[2]
        out[key] = out.get(key, 0) + c
    g = SparsePoly("UVW", 4, out)
    image = g.map_variables(lambda _v: 2)
    return g, image


# ---------------------------------------------------------------------------
# linear independence


class BasisMatrix:
    """Polynomials over a shared variable set viewed as rows over the monomial frame."""

    def __init__(self, rows: Sequence[SparsePoly]):
        rows = list(rows)
        if not rows:
            raise PolyError("empty basis matrix")
        for r in rows[1:]:
            rows[0]._check(r)
        self.rows = rows

    def frame(self) -> list[Monomial]:
        return sorted({m for r in self.rows for m in r.terms}, key=monomial_key)


def exact_rank(rows: BasisMatrix | Sequence[SparsePoly]) -> int:
    """Rank over Q by fraction-free elimination."""
    if not isinstance(rows, BasisMatrix):
        rows = BasisMatrix(rows)
    return linalg.rank({monomial_key(m): c for m, c in r.terms.items()} for r in rows.rows)


def independent_subset(polys: Iterable[SparsePoly]) -> list[SparsePoly]:
    ech = linalg.Echelon()
    return [p for p in polys if ech.add({monomial_key(m): c for m, c in p.terms.items()})]
