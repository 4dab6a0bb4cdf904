"""Set-theoretic membership in the principal-minor variety and the tangential variety."""

from __future__ import annotations

import json
import os
import random
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence

from .core import GroupElement, HyperTensor, TensorError, apply_group
from .poly import CompiledSystem, SparsePoly, eval_on_tensor
from .schur import ModuleBasis, ModuleError, cubic_hwvs, cubic_module, hd_hwv, hd_module, wedge_quadric

CACHE_FORMAT = 2
CACHE_ENV = "TANSEG_CACHE_DIR"
_BUILDERS = {"hd": hd_module, "cubic": cubic_module}


class MembershipError(ValueError):
    pass


@dataclass(frozen=True)
class MembershipReport:
    member: bool
    variety: str
    witness: tuple[str, Fraction] | None
    polys_evaluated: int
    probabilistic: bool = False

    def to_json(self) -> dict:
        out = {
            "member": self.member,
            "variety": self.variety,
            "polys_evaluated": self.polys_evaluated,
            "probabilistic": self.probabilistic,
            "witness": None,
        }
        if self.witness is not None:
            out["witness"] = {"element": self.witness[0], "value": str(self.witness[1])}
        return out


# ---------------------------------------------------------------------------
# cached module bases


def cache_dir() -> Path | None:
    """Directory for generated bases, from $TANSEG_CACHE_DIR; None disables the disk cache."""
    path = os.environ.get(CACHE_ENV)
    return Path(path) if path else None


def _cache_file(family: str, n: int) -> Path | None:
    root = cache_dir()
    return None if root is None else root / f"{family}-n{n}-v{CACHE_FORMAT}.json"


@lru_cache(maxsize=None)
def module_basis(family: str, n: int) -> ModuleBasis:
    """Module basis for ``family`` in {"hd", "cubic"}, read from or written to the disk cache."""
    if family not in _BUILDERS:
        raise ModuleError(f"unknown module family {family!r}")
    path = _cache_file(family, n)
    if path is not None and path.exists():
        try:
            return ModuleBasis.from_json(json.loads(path.read_text()))
        except (ValueError, KeyError):
            pass  # stale or corrupt: regenerate
    basis = _BUILDERS[family](n)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(basis.to_json(), fh, sort_keys=True)
        os.replace(tmp, path)
    return basis


@lru_cache(maxsize=None)
def _compiled(family: str, n: int) -> CompiledSystem:
    return CompiledSystem(module_basis(family, n).polys)


# ---------------------------------------------------------------------------
# membership tests


def _check_point(z: HyperTensor):
    if z.n < 3:
        raise MembershipError("membership tests need n >= 3")
    if z.is_zero():
        raise TensorError("the zero tensor is not a projective point")


def _scan(z: HyperTensor, families: Sequence[str], variety: str,
          extra: Sequence[tuple[str, SparsePoly]] = ()) -> MembershipReport:
    """Evaluate families in order; the witness is the first non-vanishing element."""
    point = z.integer_coords()
    evaluated = 0
    for family in families:
        system = _compiled(family, z.n)
        hit = system.first_nonzero(point)
        if hit is not None:
            k = hit[0]
            f = module_basis(family, z.n).polys[k]
            return MembershipReport(False, variety, (f"{family}[{k}]", eval_on_tensor(f, z)), evaluated + k + 1)
        evaluated += len(system.rows)
    for name, f in extra:
        evaluated += 1
        value = eval_on_tensor(f, z)
        if value:
            return MembershipReport(False, variety, (name, value), evaluated)
    return MembershipReport(True, variety, None, evaluated)


def is_on_principal_minor_variety(z: HyperTensor) -> MembershipReport:
    """Zero set of the hyperdeterminantal module."""
    _check_point(z)
    return _scan(z, ["hd"], "principal_minors")


def is_on_tangential(z: HyperTensor, with_quadric: bool = False) -> MembershipReport:
    """Common zeros of the hyperdeterminantal and cubic modules.

    ``with_quadric`` also evaluates the n = 4 wedge quadric, as a cross-check only.
    """
    _check_point(z)
    extra = []
    if with_quadric:
        if z.n != 4:
            raise MembershipError("the wedge quadric exists only for n = 4")
        extra.append(("wedge", wedge_quadric(4)))
    return _scan(z, ["hd", "cubic"], "tangential", extra)


def tangential_generators(n: int) -> list[SparsePoly]:
    """Highest weight vectors whose group orbits span the modules of the tangential test."""
    out = [hd_hwv(n)]
    if n >= 4:
        out += cubic_hwvs(n)
    return out


def randomized_orbit_vanishing(
    h: SparsePoly | Sequence[SparsePoly],
    z: HyperTensor,
    trials: int = 64,
    seed: int = 0,
    *,
    include_identity: bool = True,
    height: int = 20,
    variety: str = "tangential",
) -> MembershipReport:
    """Evaluate h at g.z for seeded random group elements g; stop at the first nonzero value.

    A True verdict is probabilistic: the span of the orbit of h vanishes at z
    with high probability only.
    """
    if trials < 1:
        raise MembershipError("trials must be at least 1")
    polys = [h] if isinstance(h, SparsePoly) else list(h)
    if not polys:
        raise MembershipError("no polynomials given")
    rng = random.Random(seed)
    count = 0
    for trial in range(trials):
        if trial == 0 and include_identity:
            g = GroupElement.identity(z.n)
        else:
            g = GroupElement.random(rng, z.n, height)
        gz = apply_group(g, z)
        for k, f in enumerate(polys):
            count += 1
            value = eval_on_tensor(f, gz)
            if value:
                return MembershipReport(False, variety, (f"orbit[trial={trial},poly={k}]", value), count)
    return MembershipReport(True, variety, None, count, probabilistic=True)
