"""Finitely generated abelian groups, Smith normal form, tensor/Tor and
low-degree homology of abelian groups.

Groups are kept in invariant-factor form ``Z^r + Z/d1 + ... + Z/dk`` with
``d1 | d2 | ... | dk`` and every ``di >= 2``.  Cyclic orders elsewhere in
the package use ``0`` for the infinite cyclic group and ``1`` for the
trivial group.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from math import gcd, prod

from sympy import factorint

from .errors import StructuralError, UnsupportedError


@dataclass(frozen=True)
class FgAbelianGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        torsion = tuple(int(d) for d in self.torsion)
        if self.free_rank < 0:
            raise StructuralError("free rank must be nonnegative")
        if any(d < 2 for d in torsion):
            raise StructuralError(f"invariant factors must be >= 2, got {torsion}")
        if any(b % a for a, b in zip(torsion, torsion[1:])):
            raise StructuralError(f"invariant factors must form a divisibility chain, got {torsion}")
        object.__setattr__(self, "torsion", torsion)
        object.__setattr__(self, "free_rank", int(self.free_rank))

    @classmethod
    def from_cyclic(cls, orders) -> FgAbelianGroup:
        """Direct sum of cyclic groups ``Z/n`` (``n = 0`` means ``Z``)."""
        orders = [abs(int(n)) for n in orders]
        free = sum(1 for n in orders if n == 0)
        return cls(free, invariant_factors_from_orders(n for n in orders if n > 1))

    @classmethod
    def trivial(cls) -> FgAbelianGroup:
        return cls(0, ())

    @classmethod
    def parse(cls, spec: str) -> FgAbelianGroup:
        """Parse ``"free=r;torsion=d1,d2,..."``; torsion is normalised."""
        return parse_group_spec(spec)

    def cyclic_orders(self) -> list[int]:
        return [0] * self.free_rank + list(self.torsion)

    def primary_decomposition(self) -> dict[int, list[int]]:
        """Prime -> list of prime-power orders (descending)."""
        out: dict[int, list[int]] = defaultdict(list)
        for d in self.torsion:
            for p, e in factorint(d).items():
                out[p].append(p**e)
        return {p: sorted(v, reverse=True) for p, v in sorted(out.items())}

    @property
    def order(self) -> int | None:
        """Cardinality, or ``None`` when infinite."""
        if self.free_rank:
            return None
        return prod(self.torsion)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def rank_mod(self, p: int) -> int:
        """Dimension of ``G/p`` over ``F_p``."""
        return self.free_rank + sum(1 for d in self.torsion if d % p == 0)

    def __add__(self, other: FgAbelianGroup) -> FgAbelianGroup:
        return direct_sum(self, other)

    def to_json(self) -> dict:
        return {"free": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data) -> FgAbelianGroup:
        return cls.from_cyclic([0] * int(data.get("free", 0)) + [int(d) for d in data.get("torsion", [])])

    def spec(self) -> str:
        return f"free={self.free_rank};torsion={','.join(map(str, self.torsion))}"

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


Z = FgAbelianGroup(1, ())
ZERO = FgAbelianGroup(0, ())


def cyclic(n: int) -> FgAbelianGroup:
    return FgAbelianGroup.from_cyclic([n])


def invariant_factors_from_orders(orders) -> tuple[int, ...]:
    """Invariant factors of a direct sum of finite cyclic groups (CRT)."""
    powers: dict[int, list[int]] = defaultdict(list)
    for n in orders:
        n = int(n)
        if n <= 0:
            raise StructuralError("finite cyclic orders expected")
        for p, e in factorint(n).items():
            powers[p].append(p**e)
    if not powers:
        return ()
    length = max(len(v) for v in powers.values())
    factors = [1] * length
    for v in powers.values():
        v.sort(reverse=True)
        for i, q in enumerate(v):
            factors[i] *= q
    return tuple(sorted(f for f in factors if f > 1))


def direct_sum(*groups: FgAbelianGroup) -> FgAbelianGroup:
    orders = []
    for g in groups:
        orders.extend(g.cyclic_orders())
    return FgAbelianGroup.from_cyclic(orders)


_SPEC_RE = re.compile(r"^\s*free\s*=\s*(\d+)\s*;\s*torsion\s*=\s*([\d,\s]*)$")


def parse_group_spec(spec: str) -> FgAbelianGroup:
    m = _SPEC_RE.match(spec)
    if not m:
        raise StructuralError(f"group spec must look like 'free=r;torsion=d1,d2,...', got {spec!r}")
    free = int(m.group(1))
    body = m.group(2).strip()
    torsion = [int(t) for t in body.split(",") if t.strip()] if body else []
    if any(d < 1 for d in torsion):
        raise StructuralError(f"torsion orders must be positive, got {torsion}")
    return FgAbelianGroup.from_cyclic([0] * free + [d for d in torsion if d > 1])


def iso_test(g: FgAbelianGroup, h: FgAbelianGroup) -> bool:
    return g.free_rank == h.free_rank and g.torsion == h.torsion


# --------------------------------------------------------------------------
# Smith normal form


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(matrix, transforms: bool = True):
    """Smith normal form over the integers.

    Returns ``(S, U, V)`` with ``U @ M @ V == S``, ``U`` and ``V`` unimodular
    and ``S`` diagonal with nonnegative entries ``s1 | s2 | ...``.  With
    ``transforms=False`` only ``S`` is computed (``U`` and ``V`` are None).
    All arithmetic is on Python ints.
    """
    a = [[int(x) for x in row] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    if any(len(row) != n for row in a):
        raise StructuralError("ragged integer matrix")
    u = _identity(m) if transforms else None
    v = _identity(n) if transforms else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if transforms:
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if transforms:
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        rs, rd = a[src], a[dst]
        for k in range(n):
            if rs[k]:
                rd[k] -= q * rs[k]
        if transforms:
            us, ud = u[src], u[dst]
            for k in range(m):
                if us[k]:
                    ud[k] -= q * us[k]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in a:
            if row[src]:
                row[dst] -= q * row[src]
        if transforms:
            for row in v:
                if row[src]:
                    row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        # smallest nonzero entry of the trailing block becomes the pivot
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, a[i][t] // piv)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, a[t][j] // piv)
                    if a[t][j]:
                        dirty = True
            if dirty:
                # a remainder smaller than the pivot exists in row or column t
                best = None
                for i in range(t + 1, m):
                    if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                        best = (abs(a[i][t]), i, "r")
                for j in range(t + 1, n):
                    if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                        best = (abs(a[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            bad = None
            for i in range(t + 1, m):
                row = a[i]
                for j in range(t + 1, n):
                    if row[j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if transforms:
                u[t] = [-x for x in u[t]]
        t += 1
    return a, u, v


def diagonal(s) -> list[int]:
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]


def cokernel(matrix, ncols: int | None = None) -> FgAbelianGroup:
    """``Z^ncols / rowspace(matrix)`` in canonical form."""
    rows = [list(r) for r in matrix]
    if ncols is None:
        if not rows:
            raise StructuralError("ncols required for an empty relation matrix")
        ncols = len(rows[0])
    if not rows:
        return FgAbelianGroup(ncols, ())
    s, _, _ = smith_normal_form(rows, transforms=False)
    diag = diagonal(s)
    nonzero = [d for d in diag if d]
    free = ncols - len(nonzero)
    return FgAbelianGroup.from_cyclic([0] * free + [d for d in nonzero if d > 1])


def in_row_lattice(vector, matrix) -> bool:
    """Whether ``vector`` is an integer combination of the rows of ``matrix``."""
    vector = [int(x) for x in vector]
    rows = [list(r) for r in matrix]
    if not rows:
        return not any(vector)
    # x M = v  <=>  (x U^{-1}) S = v V  with U M V = S
    s, _, v = smith_normal_form(rows)
    n = len(vector)
    w = [sum(vector[i] * v[i][j] for i in range(n)) for j in range(n)]
    diag = diagonal(s)
    for j, wj in enumerate(w):
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            if wj:
                return False
        elif wj % d:
            return False
    return True


def presentation_matrix(group: FgAbelianGroup) -> list[list[int]]:
    """Square relation matrix whose cokernel is ``group``."""
    orders = group.cyclic_orders()
    return [[orders[i] if i == j else 0 for j in range(len(orders))] for i in range(len(orders))]


# --------------------------------------------------------------------------
# tensor, Tor, homology


def tensor_tor(g: FgAbelianGroup, h: FgAbelianGroup) -> tuple[FgAbelianGroup, FgAbelianGroup]:
    """``(g (x) h, Tor(g, h))``, both canonical."""
    tens, tor = [], []
    for a in g.cyclic_orders():
        for b in h.cyclic_orders():
            if a == 0 and b == 0:
                tens.append(0)
            elif a == 0 or b == 0:
                tens.append(a or b)
            else:
                k = gcd(a, b)
                tens.append(k)
                tor.append(k)
    return (
        FgAbelianGroup.from_cyclic([t for t in tens if t != 1]),
        FgAbelianGroup.from_cyclic([t for t in tor if t != 1]),
    )


def tensor(g: FgAbelianGroup, h: FgAbelianGroup) -> FgAbelianGroup:
    return tensor_tor(g, h)[0]


def tor(g: FgAbelianGroup, h: FgAbelianGroup) -> FgAbelianGroup:
    return tensor_tor(g, h)[1]


def mod2(g: FgAbelianGroup) -> FgAbelianGroup:
    """``G/2 = G (x) Z/2``."""
    return tensor(g, cyclic(2))


MAX_DEGREE = 3


def _cyclic_homology(n: int, top: int) -> list[FgAbelianGroup]:
    """Integral homology of ``Z/n`` (``n = 0``: ``Z``) in degrees ``0..top``."""
    out = [Z]
    for k in range(1, top + 1):
        if n == 0:
            out.append(Z if k == 1 else ZERO)
        elif n == 1:
            out.append(ZERO)
        else:
            out.append(cyclic(n) if k % 2 == 1 else ZERO)
    return out


def _kunneth(hx: list[FgAbelianGroup], hy: list[FgAbelianGroup], top: int) -> list[FgAbelianGroup]:
    out = []
    for k in range(top + 1):
        parts = []
        for i in range(k + 1):
            parts.append(tensor(hx[i], hy[k - i]))
        for i in range(k):
            parts.append(tor(hx[i], hy[k - 1 - i]))
        out.append(direct_sum(*parts))
    return out


def integral_homology(g: FgAbelianGroup, top: int = MAX_DEGREE) -> list[FgAbelianGroup]:
    """``[H_0(G; Z), ..., H_top(G; Z)]`` by iterated Kunneth over cyclic summands."""
    if top > MAX_DEGREE:
        raise UnsupportedError(f"homology is supported in degrees <= {MAX_DEGREE}")
    acc = [Z] + [ZERO] * top
    for n in g.cyclic_orders():
        acc = _kunneth(acc, _cyclic_homology(n, top), top)
    return acc


def homology(g: FgAbelianGroup, k: int, coefficients: int = 0) -> FgAbelianGroup:
    """``H_k(G; Z)`` (``coefficients=0``) or ``H_k(G; Z/2)`` (``coefficients=2``)."""
    if not 0 <= k <= MAX_DEGREE:
        raise UnsupportedError(f"homology is supported in degrees 0..{MAX_DEGREE}, got {k}")
    if coefficients not in (0, 2):
        raise UnsupportedError("coefficients must be Z (0) or Z/2 (2)")
    h = integral_homology(g, k)
    if coefficients == 0:
        return h[k]
    two = cyclic(2)
    parts = [tensor(h[k], two)]
    if k >= 1:
        parts.append(tor(h[k - 1], two))
    return direct_sum(*parts)
