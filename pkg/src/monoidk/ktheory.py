"""Closed-form K-groups of pointed monoids and their finite-level cross-checks."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import aset
from .abgroup import Z, FgAbelianGroup, cyclic, direct_sum, homology, mod2
from .matrix import MonomialGroup
from .monoid import FiniteGroup, PointedMonoid, abelianization, poly_units, units

Z2 = cyclic(2)


@dataclass(frozen=True)
class KReport:
    k0: FgAbelianGroup | None = None
    k1: FgAbelianGroup | None = None
    k2: FgAbelianGroup | None = None
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {}
        for name in ("k0", "k1", "k2"):
            g = getattr(self, name)
            out[name] = None if g is None else g.to_json()
        out["provenance"] = dict(self.provenance)
        return out


def k1(a: PointedMonoid) -> FgAbelianGroup:
    """``Z/2 + (A^x)^ab``."""
    return Z2 + abelianization(units(a))


def k2_summands(g: FgAbelianGroup) -> tuple[FgAbelianGroup, FgAbelianGroup, FgAbelianGroup]:
    """The three pieces ``Z/2``, ``G/2`` and ``H_2(G; Z)``."""
    return Z2, mod2(g), homology(g, 2)


def k2_abelian(g: FgAbelianGroup) -> FgAbelianGroup:
    """``K_2`` of ``G*`` for finitely generated abelian ``G``."""
    return direct_sum(*k2_summands(g))


def pi2s_formula(gab: FgAbelianGroup, h2: FgAbelianGroup) -> FgAbelianGroup:
    """``Z/2 + (G^ab / 2) + H_2(G)`` with ``H_2`` supplied by the caller."""
    return direct_sum(Z2, mod2(gab), h2)


def is_group_monoid(a: PointedMonoid) -> bool:
    """Every nonzero element is a unit."""
    return len(units(a)) == a.size - 1


def proj_is_vec(a: PointedMonoid) -> tuple[bool, list[str]]:
    """Whether every principal projective ``Ae`` (``e`` a nonzero idempotent) is free.

    Finite projective A-sets are wedges of such pieces, so this decides
    ``Proj(A) = Vec(A)``.
    """
    regular = aset.free_of_rank(a, 1)
    gen = regular.generators[0]
    non_free = []
    for e in a.idempotents():
        if e == a.zero:
            continue
        sub, _ = aset.sub_aset(regular.aset, regular.aset.orbit(regular.aset.act(e, gen)))
        if aset.find_basis(sub) is None:
            non_free.append(a.elements[e])
    return not non_free, non_free


def k_report(a: PointedMonoid) -> KReport:
    prov = {}
    vec, non_free = proj_is_vec(a)
    k0 = None
    if vec:
        k0 = Z
        prov["k0"] = "Proj = Vec regime: every principal projective is free"
    else:
        prov["k0"] = f"omitted: Ae is projective but not free for e in {non_free}"
    kk1 = k1(a)
    prov["k1"] = "Z/2 + abelianized unit group"
    k2 = None
    if is_group_monoid(a) and units(a).is_abelian():
        g = abelianization(units(a))
        k2 = k2_abelian(g)
        prov["k2"] = "Z/2 + G/2 + H_2(G; Z) for abelian G"
    else:
        prov["k2"] = "omitted: only group monoids of abelian groups have a closed form here"
    return KReport(k0, kk1, k2, prov)


@dataclass(frozen=True)
class K1Check:
    n: int
    gl_order: int
    abelianization: FgAbelianGroup
    k1: FgAbelianGroup
    seconds: float

    @property
    def equal(self) -> bool:
        return self.abelianization == self.k1

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "gl_order": self.gl_order,
            "gl_abelianization": self.abelianization.to_json(),
            "k1": self.k1.to_json(),
            "equal": self.equal,
        }


def k1_bruteforce_check(a: PointedMonoid, n: int) -> K1Check:
    """Abelianize the finite group ``GL_n(A)`` and compare with :func:`k1`."""
    t0 = time.perf_counter()
    group = MonomialGroup(a, n).as_finite_group()
    ab = abelianization(group)
    return K1Check(n, group.order, ab, k1(a), time.perf_counter() - t0)


# --------------------------------------------------------------------------
# bases of free A-sets


@dataclass(frozen=True)
class BasisReport:
    free: bool
    basis: tuple[int, ...] | None

    @property
    def rank(self) -> int | None:
        return None if self.basis is None else len(self.basis)


def free_basis(m: aset.FiniteASet) -> BasisReport:
    basis = aset.find_basis(m)
    return BasisReport(basis is not None, basis)


def is_basis(m: aset.FiniteASet, points) -> bool:
    points = tuple(points)
    free = aset.free_aset(m.monoid, [f"b{i}" for i in range(len(points))])
    return aset.extend_from_generators(free, m, points).is_iso()


def basis_correspondence(m: aset.FiniteASet, b1, b2) -> list[tuple[int, int, int]] | None:
    """Match two bases: ``(i, j, u)`` with ``b1[i] = u . b2[j]`` and ``u`` a unit.

    Returns ``None`` when the bases have different sizes or some element of
    ``b1`` is not a unit multiple of exactly one element of ``b2``.
    """
    if len(b1) != len(b2):
        return None
    unit_idx = list(units(m.monoid).parent)
    out = []
    used = set()
    for i, x in enumerate(b1):
        hits = [(j, int(u)) for j, y in enumerate(b2) for u in unit_idx if m.act(int(u), y) == x]
        js = {j for j, _ in hits}
        if len(js) != 1:
            return None
        j = js.pop()
        if j in used:
            return None
        used.add(j)
        out.append((i, j, hits[0][1]))
    return out


# --------------------------------------------------------------------------
# homotopy invariance


@dataclass(frozen=True)
class HomotopyReport:
    units_order: int
    poly_units_order: int
    isomorphism: dict  # label in A -> label in A[x]
    is_homomorphism: bool
    k1: FgAbelianGroup
    k1_poly: FgAbelianGroup
    idempotents: list  # (label in A, label in A[x])

    @property
    def ok(self) -> bool:
        return self.is_homomorphism and self.units_order == self.poly_units_order and self.k1 == self.k1_poly

    def to_json(self) -> dict:
        return {
            "units_order": self.units_order,
            "poly_units_order": self.poly_units_order,
            "isomorphism": self.isomorphism,
            "is_homomorphism": self.is_homomorphism,
            "k1": self.k1.to_json(),
            "k1_poly": self.k1_poly.to_json(),
            "idempotents": self.idempotents,
            "ok": self.ok,
        }


def _is_isomorphism(g: FiniteGroup, h: FiniteGroup, phi: np.ndarray) -> bool:
    if len(set(phi.tolist())) != h.order or g.order != h.order:
        return False
    return bool(np.array_equal(phi[g.table], h.table[phi[:, None], phi[None, :]]))


def homotopy_invariance_check(a: PointedMonoid) -> HomotopyReport:
    """Compare ``units(A)`` with ``units(A[x])`` along ``u -> (u, 0)``."""
    base = units(a)
    pu = poly_units(a)
    phi = np.array([pu.bijection[int(p)] for p in base.parent], dtype=np.int64)
    iso = {a.elements[int(p)]: pu.group.elements[pu.bijection[int(p)]] for p in base.parent}
    idem = [[a.elements[e], img.label(a)] for e, img in pu.idempotents]
    return HomotopyReport(
        base.order,
        pu.group.order,
        iso,
        _is_isomorphism(base, pu.group, phi),
        k1(a),
        Z2 + abelianization(pu.group),
        idem,
    )
