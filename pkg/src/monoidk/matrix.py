"""Row-monomic matrices over a pointed monoid, GL_n(A) and elementary subgroup.

Convention: the decomposition ``D(a_1, ..., a_n) sigma`` has entry ``a_i`` at
``(i, sigma(i))``; ``perm[i] = sigma(i)``.  Multiplying such matrices
composes permutations in row order, ``(D s)(D' t)`` has permutation
``i -> t(s(i))``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NotInvertibleError, SizeGuardError, StructuralError, check_size
from .monoid import FiniteGroup, PointedMonoid, commutator_mask, permutation_sign, units


@dataclass(frozen=True)
class RowMonomicMatrix:
    """``rows x cols`` matrix with at most one nonzero entry per row.

    ``entries[i]`` is ``None`` for a zero row or ``(column, element)`` with
    ``element`` a nonzero monoid index.
    """

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        entries = tuple(None if e is None else (int(e[0]), int(e[1])) for e in self.entries)
        if len(entries) != self.rows:
            raise StructuralError(f"expected {self.rows} row entries, got {len(entries)}")
        for e in entries:
            if e is not None and not 0 <= e[0] < self.cols:
                raise StructuralError(f"column {e[0]} out of range for {self.cols} columns")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def identity(cls, n: int, a: PointedMonoid) -> RowMonomicMatrix:
        return cls(n, n, tuple((i, a.one) for i in range(n)))

    @classmethod
    def zero(cls, m: int, n: int) -> RowMonomicMatrix:
        return cls(m, n, (None,) * m)

    def check(self, a: PointedMonoid) -> RowMonomicMatrix:
        for e in self.entries:
            if e is not None and (not 0 <= e[1] < a.size or e[1] == a.zero):
                raise StructuralError("stored entries must be nonzero elements of the monoid")
        return self

    def dense(self, a: PointedMonoid) -> list[list[int]]:
        out = [[a.zero] * self.cols for _ in range(self.rows)]
        for i, e in enumerate(self.entries):
            if e is not None:
                out[i][e[0]] = e[1]
        return out

    def to_json(self, a: PointedMonoid) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [None if e is None else [e[0], a.elements[e[1]]] for e in self.entries],
        }

    @classmethod
    def from_json(cls, data, a: PointedMonoid) -> RowMonomicMatrix:
        try:
            rows, cols, raw = int(data["rows"]), int(data["cols"]), data["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"bad matrix JSON: {exc}") from None
        entries = []
        for e in raw:
            if e is None:
                entries.append(None)
            else:
                col, label = e
                idx = a.index(label)
                entries.append(None if idx == a.zero else (int(col), idx))
        return cls(rows, cols, tuple(entries)).check(a)

    def pad(self, n: int, a: PointedMonoid) -> RowMonomicMatrix:
        """Image under the stable inclusion ``GL_k -> GL_n`` (identity block)."""
        if self.rows != self.cols or n < self.rows:
            raise StructuralError("pad needs a square matrix and n >= its size")
        extra = tuple((i, a.one) for i in range(self.rows, n))
        return RowMonomicMatrix(n, n, self.entries + extra)


def mat_mul(left: RowMonomicMatrix, right: RowMonomicMatrix, a: PointedMonoid) -> RowMonomicMatrix:
    """Product over the monoid ring, which stays row-monomic."""
    if left.cols != right.rows:
        raise StructuralError(f"cannot multiply {left.rows}x{left.cols} by {right.rows}x{right.cols}")
    out = []
    for e in left.entries:
        if e is None:
            out.append(None)
            continue
        j, x = e
        f = right.entries[j]
        if f is None:
            out.append(None)
            continue
        k, y = f
        xy = a.mul(x, y)
        out.append(None if xy == a.zero else (k, xy))
    return RowMonomicMatrix(left.rows, right.cols, tuple(out))


def mat_chain(a: PointedMonoid, *mats: RowMonomicMatrix) -> RowMonomicMatrix:
    out = mats[0]
    for m in mats[1:]:
        out = mat_mul(out, m, a)
    return out


# --------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True)
class MonomialDecomposition:
    diag: tuple[int, ...]  # monoid indices of units
    perm: tuple[int, ...]  # perm[i] = sigma(i)


@dataclass(frozen=True)
class NonInvertible:
    reason: str  # "missing row" | "repeated column" | "non-unit entry" | "not square"
    row: int | None = None

    def __bool__(self):
        return False


def decompose(m: RowMonomicMatrix, a: PointedMonoid) -> MonomialDecomposition | NonInvertible:
    if m.rows != m.cols:
        return NonInvertible("not square")
    unit_set = set(units(a).parent)
    seen = {}
    for i, e in enumerate(m.entries):
        if e is None:
            return NonInvertible("missing row", i)
        if e[0] in seen:
            return NonInvertible("repeated column", i)
        seen[e[0]] = i
        if e[1] not in unit_set:
            return NonInvertible("non-unit entry", i)
    return MonomialDecomposition(tuple(e[1] for e in m.entries), tuple(e[0] for e in m.entries))


def recompose(d: MonomialDecomposition) -> RowMonomicMatrix:
    n = len(d.perm)
    return RowMonomicMatrix(n, n, tuple((d.perm[i], d.diag[i]) for i in range(n)))


def diagonal_matrix(diag, a: PointedMonoid) -> RowMonomicMatrix:
    n = len(diag)
    return RowMonomicMatrix(n, n, tuple((i, int(x)) for i, x in enumerate(diag)))


def permutation_matrix(perm, a: PointedMonoid) -> RowMonomicMatrix:
    """Matrix with ``1`` at ``(i, perm[i])``."""
    n = len(perm)
    return RowMonomicMatrix(n, n, tuple((int(perm[i]), a.one) for i in range(n)))


# --------------------------------------------------------------------------
# GL_n(A) as an encoded finite group


class MonomialGroup:
    """``GL_n(A)`` with elements encoded as int64 codes.

    Diagonal entries are stored as indices into ``units(A)``; batched
    products go through :func:`monoidk.kernels.monomial_product`.
    """

    def __init__(self, a: PointedMonoid, n: int):
        if n < 1:
            raise StructuralError("matrix size must be >= 1")
        self.monoid = a
        self.n = n
        self.units = units(a)
        self.k = self.units.order
        self.unit_table = np.ascontiguousarray(self.units.table, dtype=np.int64)
        self.unit_inverse = np.ascontiguousarray(self.units.inverse, dtype=np.int64)
        self._unit_pos = {p: i for i, p in enumerate(self.units.parent)}
        self.order = self.k**n * math.factorial(n)

    # conversions -----------------------------------------------------------
    def encode(self, perm, diag) -> np.ndarray:
        return kernels.monomial_encode(np.atleast_2d(perm), np.atleast_2d(diag), self.k)

    def decode(self, codes):
        return kernels.monomial_decode(np.atleast_1d(codes), self.n, self.k)

    def from_matrix(self, m: RowMonomicMatrix) -> int:
        d = decompose(m, self.monoid)
        if not d:
            raise NotInvertibleError(f"matrix is not invertible: {d.reason}")
        diag = [self._unit_pos[x] for x in d.diag]
        return int(self.encode(np.array([d.perm]), np.array([diag]))[0])

    def to_matrix(self, code: int) -> RowMonomicMatrix:
        perm, diag = self.decode([code])
        parent = self.units.parent
        return RowMonomicMatrix(
            self.n, self.n, tuple((int(perm[0, i]), parent[int(diag[0, i])]) for i in range(self.n))
        )

    @property
    def identity(self) -> int:
        return int(self.encode(np.arange(self.n)[None, :], np.full((1, self.n), self.units.identity))[0])

    # arithmetic ------------------------------------------------------------
    def mul(self, x, y) -> np.ndarray:
        px, dx = self.decode(x)
        py, dy = self.decode(y)
        if px.shape[0] != py.shape[0]:
            px, py = np.broadcast_arrays(px, py)
            dx, dy = np.broadcast_arrays(dx, dy)
        p, d = kernels.monomial_product(px, dx, py, dy, self.unit_table)
        return self.encode(p, d)

    def inv(self, x) -> np.ndarray:
        p, d = self.decode(x)
        ip, idg = kernels.monomial_inverse(p, d, self.unit_inverse)
        return self.encode(ip, idg)

    def commutator(self, x, y) -> np.ndarray:
        """``[x, y] = x y x^-1 y^-1`` elementwise."""
        x = np.atleast_1d(np.asarray(x, dtype=np.int64))
        y = np.atleast_1d(np.asarray(y, dtype=np.int64))
        x, y = np.broadcast_arrays(x, y)
        return self.mul(self.mul(x, y), self.inv(self.mul(y, x)))

    # enumeration -------------------------------------------------------------
    def all_codes(self) -> np.ndarray:
        check_size(self.order, f"elements of GL_{self.n}")
        perms = np.array(list(itertools.permutations(range(self.n))), dtype=np.int64)
        diags = np.array(list(itertools.product(range(self.k), repeat=self.n)), dtype=np.int64).reshape(-1, self.n)
        p = np.repeat(perms, diags.shape[0], axis=0)
        d = np.tile(diags, (perms.shape[0], 1))
        return np.sort(self.encode(p, d))

    def generators(self) -> np.ndarray:
        """Transposition ``(0 1)``, the ``n``-cycle and ``D(u, 1, ..., 1)`` for unit generators ``u``."""
        n, k = self.n, self.k
        ident = np.arange(n)
        one = self.units.identity
        gens = []
        if n >= 2:
            swap = ident.copy()
            swap[[0, 1]] = [1, 0]
            gens.append((swap, np.full(n, one)))
            cycle = np.roll(ident, -1)
            gens.append((cycle, np.full(n, one)))
        for u in range(k):
            if u != one:
                d = np.full(n, one)
                d[0] = u
                gens.append((ident, d))
        if not gens:
            return np.array([self.identity], dtype=np.int64)
        return np.unique(self.encode(np.array([g[0] for g in gens]), np.array([g[1] for g in gens])))

    def closure(self, seeds, conjugate_by=None) -> np.ndarray:
        """Sorted codes of the subgroup generated by ``seeds``.

        With ``conjugate_by``, the smallest subgroup containing ``seeds`` and
        closed under conjugation by those elements (a normal closure when
        they generate the group).
        """
        gens = np.unique(np.atleast_1d(np.asarray(seeds, dtype=np.int64)))
        conj = None if conjugate_by is None else np.unique(np.atleast_1d(np.asarray(conjugate_by, dtype=np.int64)))
        while True:
            members = self._subgroup(gens)
            if conj is None:
                return members
            # conjugates of the generators must already lie in the subgroup
            g = np.repeat(gens, conj.size)
            c = np.tile(conj, gens.size)
            conjugates = np.unique(self.mul(self.mul(c, g), self.inv(c)))
            missing = conjugates[~np.isin(conjugates, members, assume_unique=False)]
            if missing.size == 0:
                return members
            gens = np.union1d(gens, missing)

    def _subgroup(self, gens) -> np.ndarray:
        members = np.array([self.identity], dtype=np.int64)
        frontier = members
        gens = np.asarray(gens, dtype=np.int64)
        if gens.size == 0:
            return members
        bound = self.order
        while frontier.size:
            left = np.repeat(frontier, gens.size)
            right = np.tile(gens, frontier.size)
            prods = np.unique(self.mul(left, right))
            new = np.setdiff1d(prods, members, assume_unique=True)
            members = np.union1d(members, new)
            frontier = new
            if members.size > bound:
                raise AssertionError("closure exceeded the group order")
        return members

    def as_finite_group(self) -> FiniteGroup:
        """Full Cayley table (size guarded on ``order**2``)."""
        codes = self.all_codes()
        n = codes.size
        if n * n > TABLE_LIMIT:
            raise SizeGuardError(f"Cayley table of GL_{self.n} would have {n * n} entries (limit {TABLE_LIMIT})")
        left = np.repeat(codes, n)
        right = np.tile(codes, n)
        prods = self.mul(left, right)
        table = np.searchsorted(codes, prods).reshape(n, n)
        labels = tuple(_label(self.to_matrix(int(c)), self.monoid) for c in codes)
        return FiniteGroup(labels, table, parent=tuple(int(c) for c in codes))


def _label(m: RowMonomicMatrix, a: PointedMonoid) -> str:
    return "[" + " ".join(f"{e[0]}:{a.elements[e[1]]}" for e in m.entries) + "]"


# --------------------------------------------------------------------------
# GL_n and E_n


def enumerate_gl(a: PointedMonoid, n: int) -> list[RowMonomicMatrix]:
    """All ``|A^x|^n n!`` invertible ``n x n`` matrices, sorted by code."""
    group = MonomialGroup(a, n)
    return [group.to_matrix(int(c)) for c in group.all_codes()]


def in_elementary(m: RowMonomicMatrix, a: PointedMonoid) -> bool:
    """Even permutation and ``a_1 a_2 ... a_n`` (index order) in ``[A^x, A^x]``."""
    d = decompose(m, a)
    if not d:
        raise NotInvertibleError(f"matrix is not invertible: {d.reason}")
    if permutation_sign(d.perm) != 1:
        return False
    u = units(a)
    pos = {p: i for i, p in enumerate(u.parent)}
    prod_idx = a.product(d.diag)
    return bool(commutator_mask(u)[pos[prod_idx]])


def elementary_codes(group: MonomialGroup) -> np.ndarray:
    """Codes of every element satisfying the :func:`in_elementary` predicate."""
    codes = group.all_codes()
    perm, diag = group.decode(codes)
    even = np.array([permutation_sign(p) == 1 for p in perm])
    # product of the diagonal in index order, inside the unit group
    acc = np.full(codes.size, group.units.identity, dtype=np.int64)
    for i in range(group.n):
        acc = group.unit_table[acc, diag[:, i]]
    in_comm = commutator_mask(group.units)[acc]
    return codes[even & in_comm]


ALL_PAIRS_LIMIT = 4_000_000
TABLE_LIMIT = 25_000_000


def brute_elementary_codes(a: PointedMonoid, n: int, method: str = "auto") -> np.ndarray:
    """Sorted codes of the commutator subgroup of ``GL_n(A)``.

    ``method="all-pairs"`` closes the set of all commutators ``[X, Y]``;
    ``"generators"`` takes the normal closure of commutators of a
    generating set, which is the same subgroup.  ``"auto"`` uses all pairs
    when ``|GL_n|^2`` is at most ``ALL_PAIRS_LIMIT``.
    """
    group = MonomialGroup(a, n)
    check_size(group.order, f"elements of GL_{n}")
    if method == "auto":
        method = "all-pairs" if group.order**2 <= ALL_PAIRS_LIMIT else "generators"
    if method == "all-pairs":
        codes = group.all_codes()
        comms = set()
        for start in range(0, codes.size, 256):
            block = codes[start : start + 256]
            x = np.repeat(block, codes.size)
            y = np.tile(codes, block.size)
            comms.update(np.unique(group.commutator(x, y)).tolist())
        return group.closure(np.array(sorted(comms), dtype=np.int64))
    if method == "generators":
        gens = group.generators()
        x = np.repeat(gens, gens.size)
        y = np.tile(gens, gens.size)
        seeds = np.unique(group.commutator(x, y))
        return group.closure(seeds, conjugate_by=gens)
    raise StructuralError(f"unknown method {method!r}")


def brute_elementary(a: PointedMonoid, n: int, method: str = "auto") -> frozenset[RowMonomicMatrix]:
    group = MonomialGroup(a, n)
    return frozenset(group.to_matrix(int(c)) for c in brute_elementary_codes(a, n, method))


def elementary_agreement(a: PointedMonoid, n: int, method: str = "auto") -> dict:
    """Compare the commutator closure with the predicate set, element for element."""
    group = MonomialGroup(a, n)
    brute = brute_elementary_codes(a, n, method)
    predicate = elementary_codes(group)
    return {
        "n": n,
        "gl_order": group.order,
        "brute_order": int(brute.size),
        "predicate_order": int(predicate.size),
        "equal": bool(np.array_equal(brute, predicate)),
    }


def minimal_stable_rank(a: PointedMonoid, max_n: int = 5) -> int | None:
    """Smallest ``n`` from which closure and predicate agree up to ``max_n``."""
    agree = []
    for n in range(1, max_n + 1):
        try:
            agree.append(elementary_agreement(a, n)["equal"])
        except SizeGuardError:
            break
    for n in range(1, len(agree) + 1):
        if all(agree[n - 1 :]):
            return n
    return None


# --------------------------------------------------------------------------
# explicit factorizations used to show E_n is generated by commutators


def _unit_diag(a: PointedMonoid, n: int, values: dict) -> RowMonomicMatrix:
    return diagonal_matrix([values.get(i, a.one) for i in range(n)], a)


def _cycles_to_perm(n: int, cycles) -> tuple[int, ...]:
    perm = list(range(n))
    for cyc in cycles:
        for x, y in zip(cyc, cyc[1:] + cyc[:1]):
            perm[x] = y
    return tuple(perm)


def _invert_perm(perm) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


def factorization_identities(a: PointedMonoid, convention: str = "column") -> list[dict]:
    """Check the three factorizations for every pair of units ``a, b``.

    * ``D(a, a^-1) = D(a, 1) S D(a^-1, 1) S`` with ``S`` the swap;
    * ``D(a, a^-1) s D(a, a^-1) s^-1 = D(a, 1, a^-1)`` for ``s = (123)(456)``
      in GL_6 (``D`` padded by ones);
    * ``D(aba^-1b^-1, 1) = D(a, a^-1, 1) D(b, 1, b^-1) D(a^-1, a, 1) D(b^-1, 1, b)``.

    The permutation matrix of ``s`` is built with ``convention="column"``
    (``1`` at ``(s(j), j)``) or ``"row"`` (``1`` at ``(i, s(i))``).  Only the
    column reading makes the middle identity hold; see the README.
    """
    if convention not in ("row", "column"):
        raise StructuralError(f"unknown convention {convention!r}")
    u = units(a)
    inv = {int(p): int(u.parent[u.inverse[i]]) for i, p in enumerate(u.parent)}
    sigma = _cycles_to_perm(6, [(0, 1, 2), (3, 4, 5)])
    if convention == "column":
        sigma = _invert_perm(sigma)
    s = permutation_matrix(sigma, a)
    s_inv = permutation_matrix(_invert_perm(sigma), a)
    swap = permutation_matrix((1, 0), a)
    out = []
    for x in u.parent:
        x = int(x)
        xi = inv[x]
        lhs = _unit_diag(a, 2, {0: x, 1: xi})
        rhs = mat_chain(a, _unit_diag(a, 2, {0: x}), swap, _unit_diag(a, 2, {0: xi}), swap)
        out.append({"identity": "swap", "a": a.elements[x], "b": None, "holds": lhs == rhs})
        d6 = _unit_diag(a, 6, {0: x, 1: xi})
        lhs = mat_chain(a, d6, s, d6, s_inv)
        rhs = _unit_diag(a, 6, {0: x, 2: xi})
        out.append({"identity": "conjugation", "a": a.elements[x], "b": None, "holds": lhs == rhs})
        for y in u.parent:
            y = int(y)
            yi = inv[y]
            comm = a.product([x, y, xi, yi])
            lhs = _unit_diag(a, 3, {0: comm})
            rhs = mat_chain(
                a,
                _unit_diag(a, 3, {0: x, 1: xi}),
                _unit_diag(a, 3, {0: y, 2: yi}),
                _unit_diag(a, 3, {0: xi, 1: x}),
                _unit_diag(a, 3, {0: yi, 2: y}),
            )
            out.append({"identity": "commutator", "a": a.elements[x], "b": a.elements[y], "holds": lhs == rhs})
    return out


def conjugation_value(a: PointedMonoid, x: int, convention: str = "row") -> tuple[int, ...]:
    """Diagonal of ``D(x, x^-1) s D(x, x^-1) s^-1`` in GL_6 for ``s = (123)(456)``."""
    u = units(a)
    pos = {int(p): i for i, p in enumerate(u.parent)}
    xi = int(u.parent[u.inverse[pos[x]]])
    sigma = _cycles_to_perm(6, [(0, 1, 2), (3, 4, 5)])
    if convention == "column":
        sigma = _invert_perm(sigma)
    d6 = _unit_diag(a, 6, {0: x, 1: xi})
    m = mat_chain(a, d6, permutation_matrix(sigma, a), d6, permutation_matrix(_invert_perm(sigma), a))
    dec = decompose(m, a)
    if dec.perm != tuple(range(6)):
        raise AssertionError("conjugate is not diagonal")
    return dec.diag
