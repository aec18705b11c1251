"""Pointed monoids given by multiplication tables, finite groups, unit groups,
commutator subgroups and abelianizations, and the polynomial extension A[x].

Elements are addressed by index; labels are strings used for I/O.  Tables
are read-only ``int64`` arrays with ``table[i, j]`` the index of
``elements[i] * elements[j]``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sympy import factorint

from . import kernels
from .abgroup import FgAbelianGroup, cokernel, invariant_factors_from_orders
from .errors import InvalidStructureError, StructuralError


def _frozen_table(table, n, what):
    try:
        arr = np.array(table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise StructuralError(f"{what}: table is not an integer matrix") from exc
    if arr.shape != (n, n):
        raise StructuralError(f"{what}: table has shape {arr.shape}, expected {(n, n)}")
    if n and (arr.min() < 0 or arr.max() >= n):
        raise StructuralError(f"{what}: table entries must be indices in [0, {n})")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PointedMonoid:
    """Finite monoid with absorbing ``zero`` and unit ``one``."""

    elements: tuple[str, ...]
    table: np.ndarray
    zero: int
    one: int

    def __post_init__(self):
        elements = tuple(str(e) for e in self.elements)
        if len(set(elements)) != len(elements):
            raise StructuralError("monoid element labels must be distinct")
        if not elements:
            raise StructuralError("a pointed monoid has at least one element")
        n = len(elements)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "table", _frozen_table(self.table, n, "monoid"))
        for name in ("zero", "one"):
            idx = getattr(self, name)
            if not isinstance(idx, (int, np.integer)) or not 0 <= idx < n:
                raise StructuralError(f"monoid {name} index {idx!r} out of range")
            object.__setattr__(self, name, int(idx))

    @classmethod
    def from_labels(cls, elements, table, zero, one) -> PointedMonoid:
        """Build from a table of labels (the JSON layout)."""
        elements = [str(e) for e in elements]
        index = {e: i for i, e in enumerate(elements)}
        try:
            rows = [[index[str(x)] for x in row] for row in table]
            z, o = index[str(zero)], index[str(one)]
        except KeyError as exc:
            raise StructuralError(f"unknown element label {exc.args[0]!r}") from None
        if len(rows) != len(elements) or any(len(r) != len(elements) for r in rows):
            raise StructuralError("table must be |A| x |A|")
        return cls(tuple(elements), np.array(rows, dtype=np.int64), z, o)

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def index(self, label: str) -> int:
        try:
            return self.elements.index(str(label))
        except ValueError:
            raise StructuralError(f"{label!r} is not an element of the monoid") from None

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def product(self, indices) -> int:
        out = self.one
        for i in indices:
            out = int(self.table[out, i])
        return out

    def nonzero(self) -> list[int]:
        return [i for i in range(self.size) if i != self.zero]

    def idempotents(self) -> list[int]:
        return [i for i in range(self.size) if self.table[i, i] == i]

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def __eq__(self, other):
        if not isinstance(other, PointedMonoid):
            return NotImplemented
        return (
            self.elements == other.elements
            and self.zero == other.zero
            and self.one == other.one
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.elements, self.zero, self.one, self.table.tobytes()))

    def __repr__(self):
        return f"PointedMonoid({list(self.elements)!r}, zero={self.elements[self.zero]!r}, one={self.elements[self.one]!r})"

    def to_json(self) -> dict:
        e = self.elements
        return {
            "elements": list(e),
            "zero": e[self.zero],
            "one": e[self.one],
            "table": [[e[x] for x in row] for row in self.table.tolist()],
        }

    @classmethod
    def from_json(cls, data) -> PointedMonoid:
        for key in ("elements", "zero", "one", "table"):
            if key not in data:
                raise StructuralError(f"monoid JSON is missing {key!r}")
        return cls.from_labels(data["elements"], data["table"], data["zero"], data["one"])


@dataclass(frozen=True)
class Violation:
    axiom: str  # "associativity" | "absorbing" | "unit" | "zero-equals-one"
    witness: tuple

    def describe(self, labels=None) -> str:
        w = tuple(labels[i] for i in self.witness) if labels is not None else self.witness
        return f"{self.axiom} fails at {w}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid

    def by_axiom(self, axiom: str) -> list[Violation]:
        return [v for v in self.violations if v.axiom == axiom]


def validate_monoid(candidate: PointedMonoid) -> ValidationReport:
    """Every violated pointed-monoid axiom, with witnesses.

    Structural problems (table shape, indices) are rejected earlier, when the
    :class:`PointedMonoid` is constructed.
    """
    t = candidate.table
    z, o = candidate.zero, candidate.one
    found = [Violation("associativity", tuple(int(x) for x in row)) for row in kernels.associativity_defects(t)]
    for a in range(candidate.size):
        if t[z, a] != z or t[a, z] != z:
            found.append(Violation("absorbing", (a,)))
    for a in range(candidate.size):
        if t[o, a] != a or t[a, o] != a:
            found.append(Violation("unit", (a,)))
    if z == o and candidate.size > 1:
        found.append(Violation("zero-equals-one", (z,)))
    return ValidationReport(tuple(found))


def require_valid(candidate: PointedMonoid) -> PointedMonoid:
    report = validate_monoid(candidate)
    if not report.valid:
        first = report.violations[0].describe(candidate.elements)
        raise InvalidStructureError(f"not a pointed monoid: {first}", report.violations)
    return candidate


def load_monoid(path) -> PointedMonoid:
    data = json.loads(Path(path).read_text())
    return require_valid(PointedMonoid.from_json(data))


# --------------------------------------------------------------------------
# finite groups


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Finite group by Cayley table.

    ``parent`` optionally records, for each element, its index in an
    ambient structure (the monoid for a unit group, the big group for a
    subgroup).
    """

    elements: tuple[str, ...]
    table: np.ndarray
    identity: int = field(default=-1)
    inverse: np.ndarray = field(default=None)
    parent: tuple[int, ...] | None = None

    def __post_init__(self):
        elements = tuple(str(e) for e in self.elements)
        n = len(elements)
        if n == 0:
            raise StructuralError("a group is nonempty")
        object.__setattr__(self, "elements", elements)
        t = _frozen_table(self.table, n, "group")
        object.__setattr__(self, "table", t)
        ident = self.identity
        if ident < 0:
            col = np.arange(n)
            hits = [e for e in range(n) if np.array_equal(t[e], col) and np.array_equal(t[:, e], col)]
            if not hits:
                raise InvalidStructureError("table has no two-sided identity")
            ident = hits[0]
        object.__setattr__(self, "identity", int(ident))
        if self.inverse is None:
            rows, cols = np.nonzero(t == ident)
            inv = np.full(n, -1, dtype=np.int64)
            inv[rows] = cols
            if (inv < 0).any() or not np.array_equal(t[inv, np.arange(n)], np.full(n, ident)):
                raise InvalidStructureError("table has an element without a two-sided inverse")
        else:
            inv = np.array(self.inverse, dtype=np.int64)
        inv.setflags(write=False)
        object.__setattr__(self, "inverse", inv)
        if self.parent is not None:
            object.__setattr__(self, "parent", tuple(int(p) for p in self.parent))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def commutator(self, a: int, b: int) -> int:
        """``[a, b] = a b a^-1 b^-1``."""
        t = self.table
        return int(t[t[a, b], self.inverse[t[b, a]]])

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def check_associative(self) -> bool:
        return kernels.associativity_defects(self.table).shape[0] == 0

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = int(self.table[x, a])
            k += 1
        return k

    def subgroup(self, members) -> FiniteGroup:
        """The subgroup on the (closed) index set ``members``."""
        members = sorted(set(int(m) for m in members))
        pos = np.full(self.order, -1, dtype=np.int64)
        pos[members] = np.arange(len(members))
        sub = self.table[np.ix_(members, members)]
        mapped = pos[sub]
        if (mapped < 0).any():
            raise InvalidStructureError("index set is not closed under multiplication")
        return FiniteGroup(
            tuple(self.elements[m] for m in members),
            mapped,
            identity=int(pos[self.identity]),
            parent=tuple(members),
        )

    def generated(self, gens, start=None) -> np.ndarray:
        """Boolean mask of the subgroup generated by ``gens`` (and ``start``)."""
        mask = np.zeros(self.order, dtype=bool)
        mask[self.identity] = True
        gens = np.unique(np.asarray(list(gens), dtype=np.int64))
        if start is not None:
            mask |= start
            gens = np.union1d(gens, np.flatnonzero(start))
        if gens.size == 0:
            return mask
        frontier = np.flatnonzero(mask)
        while frontier.size:
            prods = np.unique(self.table[np.ix_(frontier, gens)])
            new = prods[~mask[prods]]
            mask[new] = True
            frontier = new
        return mask

    def is_normal(self, mask) -> bool:
        members = np.flatnonzero(mask)
        t, inv = self.table, self.inverse
        for g in range(self.order):
            conj = t[t[g, members], inv[g]]
            if not mask[conj].all():
                return False
        return True

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def group_from_table(elements, table) -> FiniteGroup:
    return FiniteGroup(tuple(elements), np.asarray(table))


def cyclic_group(n: int, prefix: str = "g") -> FiniteGroup:
    if n < 1:
        raise StructuralError("cyclic group order must be >= 1")
    labels = ["e"] + [f"{prefix}{k}" if k > 1 else prefix for k in range(1, n)]
    table = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return FiniteGroup(tuple(labels), table, identity=0)


def permutation_group(perms, labels=None) -> FiniteGroup:
    """Group on a closed list of permutations (tuples, ``p[i]`` image of ``i``).

    Multiplication is functional composition ``(pq)(i) = p(q(i))``.
    """
    perms = [tuple(p) for p in perms]
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    table = np.empty((n, n), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            table[i, j] = index[tuple(p[x] for x in q)]
    if labels is None:
        labels = ["".join(str(x + 1) for x in p) for p in perms]
    return FiniteGroup(tuple(labels), table)


def symmetric_group(n: int) -> FiniteGroup:
    return permutation_group(sorted(itertools.permutations(range(n))))


def alternating_group(n: int) -> FiniteGroup:
    return permutation_group([p for p in sorted(itertools.permutations(range(n))) if permutation_sign(p) == 1])


def permutation_sign(p) -> int:
    p = list(p)
    seen = [False] * len(p)
    sign = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def quaternion_group() -> FiniteGroup:
    # units of the quaternions as (sign, basis) with basis in 1, i, j, k
    basis_mul = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elems = [(s, b) for s in (1, -1) for b in "1ijk"]
    index = {x: i for i, x in enumerate(elems)}
    table = np.empty((8, 8), dtype=np.int64)
    for x, (s1, b1) in enumerate(elems):
        for y, (s2, b2) in enumerate(elems):
            s, b = basis_mul[(b1, b2)]
            table[x, y] = index[(s1 * s2 * s, b)]
    labels = [("" if s == 1 else "-") + b for s, b in elems]
    return FiniteGroup(tuple(labels), table, identity=0)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    n, m = g.order, h.order
    labels = [f"({a},{b})" for a in g.elements for b in h.elements]
    gi = np.repeat(np.arange(n), m)
    hi = np.tile(np.arange(m), n)
    table = g.table[gi[:, None], gi[None, :]] * m + h.table[hi[:, None], hi[None, :]]
    return FiniteGroup(tuple(labels), table, identity=g.identity * m + h.identity)


def abelian_group(orders) -> FiniteGroup:
    """Finite abelian group ``Z/n1 x Z/n2 x ...`` as a table."""
    out = cyclic_group(1)
    for k, n in enumerate(orders):
        out = direct_product(out, cyclic_group(int(n), prefix="abcdefgh"[k % 8]))
    if orders:
        # drop the leading trivial factor from labels
        labels = tuple(lbl[3:-1] if lbl.startswith("(e,") else lbl for lbl in out.elements)
        out = FiniteGroup(labels, out.table, identity=out.identity)
    return out


# --------------------------------------------------------------------------
# monoid constructions


def group_monoid(g: FiniteGroup, zero_label: str | None = None) -> PointedMonoid:
    """``G_* = G + {*}`` with ``*`` absorbing; the zero is listed first."""
    if zero_label is None:
        zero_label = "0" if "0" not in g.elements else "*"
    if zero_label in g.elements:
        raise StructuralError(f"zero label {zero_label!r} collides with a group element")
    n = g.order
    table = np.zeros((n + 1, n + 1), dtype=np.int64)
    table[1:, 1:] = g.table + 1
    return PointedMonoid((zero_label,) + g.elements, table, 0, g.identity + 1)


def f1() -> PointedMonoid:
    """The field with one element, ``{0, 1}``."""
    return PointedMonoid(("0", "1"), np.array([[0, 0], [0, 1]]), 0, 1)


def cyclic_group_monoid(n: int) -> PointedMonoid:
    return group_monoid(cyclic_group(n))


def idempotent_monoid() -> PointedMonoid:
    """``{0, 1, e}`` with ``e^2 = e``."""
    return PointedMonoid(("0", "1", "e"), np.array([[0, 0, 0], [0, 1, 2], [0, 2, 2]]), 0, 1)


def nilpotent_monoid() -> PointedMonoid:
    """``{0, 1, n}`` with ``n^2 = 0``."""
    return PointedMonoid(("0", "1", "n"), np.array([[0, 0, 0], [0, 1, 2], [0, 2, 0]]), 0, 1)


def left_zero_monoid() -> PointedMonoid:
    """``{0, 1, e, f}`` with ``xy = x`` for ``x, y`` in ``{e, f}``; noncommutative."""
    t = np.array([[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 2, 2], [0, 3, 3, 3]])
    return PointedMonoid(("0", "1", "e", "f"), t, 0, 1)


def opposite(a: PointedMonoid) -> PointedMonoid:
    return PointedMonoid(a.elements, a.table.T.copy(), a.zero, a.one)


def smash(a: PointedMonoid, b: PointedMonoid) -> PointedMonoid:
    """``A ^ B``: pairs of nonzero elements plus a common zero, componentwise product."""
    pairs = [(x, y) for x in a.nonzero() for y in b.nonzero()]
    labels = ["0" if "0" not in [f"({a.elements[x]},{b.elements[y]})" for x, y in pairs] else "*"]
    labels += [f"({a.elements[x]},{b.elements[y]})" for x, y in pairs]
    index = {p: i + 1 for i, p in enumerate(pairs)}
    n = len(pairs) + 1
    table = np.zeros((n, n), dtype=np.int64)
    for (x1, y1), i in index.items():
        for (x2, y2), j in index.items():
            x, y = a.table[x1, x2], b.table[y1, y2]
            table[i, j] = 0 if x == a.zero or y == b.zero else index[(int(x), int(y))]
    return PointedMonoid(tuple(labels), table, 0, index[(a.one, b.one)])


# --------------------------------------------------------------------------
# units, commutators, abelianization


def units(a: PointedMonoid) -> FiniteGroup:
    """The group of invertible elements, labelled as in ``a``."""
    t = a.table
    one = a.one
    members = [x for x in range(a.size) if any(t[x, y] == one and t[y, x] == one for y in range(a.size))]
    sub = t[np.ix_(members, members)]
    pos = {m: i for i, m in enumerate(members)}
    table = np.vectorize(pos.__getitem__, otypes=[np.int64])(sub) if members else sub
    return FiniteGroup(tuple(a.elements[m] for m in members), table, identity=pos[one], parent=tuple(members))


def commutator_mask(g: FiniteGroup) -> np.ndarray:
    t, inv = g.table, g.inverse
    comms = np.unique(t[t, inv[t.T]])  # [a, b] = (ab)(ba)^-1
    mask = np.zeros(g.order, dtype=bool)
    mask[g.identity] = True
    for c in comms:
        if not mask[c]:
            mask = g.generated([c], start=mask)
    return mask


def commutator_subgroup(g: FiniteGroup) -> FiniteGroup:
    """``[G, G]``: closure of all commutators; ``parent`` indexes into ``g``."""
    return g.subgroup(np.flatnonzero(commutator_mask(g)))


def quotient_invariants(g: FiniteGroup, normal_mask) -> FgAbelianGroup:
    """Invariant factors of the abelian quotient ``G/N``.

    Uses the counts ``|Q[p^j]| = #{gN : (gN)^(p^j) = N}``; these determine
    every p-primary part.
    """
    normal_mask = np.asarray(normal_mask, dtype=bool)
    n_order = int(normal_mask.sum())
    q_order = g.order // n_order
    if q_order == 1:
        return FgAbelianGroup.trivial()
    orders = {}
    for p, e in factorint(q_order).items():
        # power_mask[j][x] : x^(p^j) in N
        x = np.arange(g.order)
        counts = [n_order]
        for j in range(1, e + 1):
            y = x.copy()
            for _ in range(p - 1):
                y = g.table[y, x]
            x = y  # now x = original^(p^j)
            counts.append(int(normal_mask[x].sum()) // n_order)
        counts[0] = 1
        # at_least[j] = number of cyclic p-factors of exponent >= j
        at_least = []
        for j in range(1, e + 1):
            ratio = counts[j] // counts[j - 1]
            k = 0
            while ratio > 1:
                ratio //= p
                k += 1
            at_least.append(k)
        exps = []
        for j in range(e):
            nxt = at_least[j + 1] if j + 1 < e else 0
            exps.extend([j + 1] * (at_least[j] - nxt))
        orders[p] = [p**k for k in exps]
    return FgAbelianGroup(0, invariant_factors_from_orders(q for v in orders.values() for q in v))


def abelianization(g: FiniteGroup) -> FgAbelianGroup:
    """``G / [G, G]`` in invariant-factor form."""
    return quotient_invariants(g, commutator_mask(g))


def abelianization_by_presentation(g: FiniteGroup) -> FgAbelianGroup:
    """Abelianization as the cokernel of the table's relation matrix.

    Generators ``e_g`` for every element, relations ``e_a + e_b - e_ab``;
    an independent route for small groups.
    """
    n = g.order
    rows = []
    for a in range(n):
        for b in range(a, n):
            row = [0] * n
            row[a] += 1
            row[b] += 1
            row[int(g.table[a, b])] -= 1
            if any(row):
                rows.append(row)
    return cokernel(rows, n)


# --------------------------------------------------------------------------
# A[x]


@dataclass(frozen=True)
class PolyElement:
    """Element ``a x^n`` of ``A[x]``; the zero has ``coeff=None``."""

    coeff: int | None
    degree: int | None = None

    def __post_init__(self):
        if self.coeff is None:
            object.__setattr__(self, "degree", None)
        elif self.degree is None or self.degree < 0:
            raise StructuralError("nonzero polynomial elements need a degree >= 0")

    @property
    def is_zero(self) -> bool:
        return self.coeff is None

    def label(self, a: PointedMonoid) -> str:
        if self.is_zero:
            return a.elements[a.zero]
        return f"({a.elements[self.coeff]},{self.degree})"


def poly_element(a: PointedMonoid, coeff: int, degree: int) -> PolyElement:
    if coeff == a.zero:
        return PolyElement(None)
    return PolyElement(coeff, degree)


def poly_mul(a: PointedMonoid, x: PolyElement, y: PolyElement) -> PolyElement:
    if x.is_zero or y.is_zero:
        return PolyElement(None)
    c = a.mul(x.coeff, y.coeff)
    if c == a.zero:
        return PolyElement(None)
    return PolyElement(c, x.degree + y.degree)


def poly_is_unit(a: PointedMonoid, x: PolyElement) -> bool:
    """Degrees add and never cancel, so only degree-0 units of ``A`` invert."""
    if x.is_zero or x.degree != 0:
        return False
    t = a.table
    return any(t[x.coeff, y] == a.one and t[y, x.coeff] == a.one for y in range(a.size))


def poly_is_idempotent(a: PointedMonoid, x: PolyElement) -> bool:
    if x.is_zero:
        return True
    return x.degree == 0 and a.mul(x.coeff, x.coeff) == x.coeff


@dataclass(frozen=True)
class PolyUnits:
    group: FiniteGroup  # units of A[x]
    elements: tuple[PolyElement, ...]  # group element k is elements[k]
    bijection: dict  # unit index of A -> group index
    idempotents: tuple[tuple[int, PolyElement], ...]  # (idempotent e of A, its image in A[x])


def poly_units(a: PointedMonoid) -> PolyUnits:
    """Unit group of ``A[x]`` with the witnessing bijection ``u -> (u, 0)``."""
    base = units(a)
    elems = tuple(PolyElement(int(p), 0) for p in base.parent)
    pos = {e: k for k, e in enumerate(elems)}
    for e in elems:
        if not poly_is_unit(a, e):
            raise AssertionError("degree-0 unit failed to invert")
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            table[i, j] = pos[poly_mul(a, x, y)]
    group = FiniteGroup(tuple(e.label(a) for e in elems), table)
    idem = tuple((e, PolyElement(e, 0)) for e in a.idempotents() if e != a.zero)
    return PolyUnits(group, elems, {int(p): k for k, p in enumerate(base.parent)}, idem)
