"""Brute-force reference computations.

Each function here recomputes something the library does cleverly, by the
most direct route available and without calling the routine under test.
They are slow and meant for small inputs.
"""

from __future__ import annotations

import itertools
from collections import Counter
from math import gcd

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors
from sympy.utilities.iterables import multiset_partitions

from .abgroup import FgAbelianGroup

# --------------------------------------------------------------------------
# monoid ring


def dense_ring_product(left, right, a):
    """Product of matrices over ``Z[A]`` as formal sums, reduced by the zero.

    ``left``/``right`` are dense lists of monoid indices.  Each entry of the
    result is a Counter of nonzero monoid elements.
    """
    m, n, k = len(left), len(right), len(right[0]) if right else 0
    out = [[Counter() for _ in range(k)] for _ in range(m)]
    for i in range(m):
        for j in range(n):
            for c in range(k):
                x = a.mul(left[i][j], right[j][c])
                if x != a.zero:
                    out[i][c][x] += 1
    return out


# --------------------------------------------------------------------------
# A-sets


def pointed_equivariant_maps(src, tgt):
    """Every map of carriers that is pointed and equivariant, by full enumeration."""
    out = []
    for images in itertools.product(range(tgt.size), repeat=src.size - 1):
        f = (0,) + images
        ok = True
        for x in range(src.monoid.size):
            row = src.action[x]
            trow = tgt.action[x]
            for m in range(src.size):
                if f[int(row[m])] != int(trow[f[m]]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(f)
    return out


def _is_compatible(m, blocks) -> bool:
    cls = {}
    for b, block in enumerate(blocks):
        for x in block:
            cls[x] = b
    for block in blocks:
        for x in range(m.monoid.size):
            if len({cls[int(m.action[x, p])] for p in block}) != 1:
                return False
    return True


def minimal_congruence(m, pairs):
    """Finest A-compatible partition containing ``pairs``, by scanning all set partitions."""
    best = None
    for parts in multiset_partitions(list(range(m.size))):
        cls = {}
        for b, block in enumerate(parts):
            for x in block:
                cls[x] = b
        if any(cls[x] != cls[y] for x, y in pairs):
            continue
        if not _is_compatible(m, parts):
            continue
        if best is None or len(parts) > len(best):
            best = parts
    return tuple(sorted(tuple(sorted(b)) for b in best))


def congruence_lattice(m):
    """All congruences of ``m`` as canonical block tuples."""
    out = []
    for parts in multiset_partitions(list(range(m.size))):
        if _is_compatible(m, parts):
            out.append(tuple(sorted(tuple(sorted(b)) for b in parts)))
    return out


def pullback_cones(t, f, g):
    """Pairs ``(h1, h2)`` of maps from ``t`` with ``f h1 = g h2``."""
    hk = pointed_equivariant_maps(t, f.source)
    hn = pointed_equivariant_maps(t, g.source)
    return [
        (h1, h2)
        for h1 in hk
        for h2 in hn
        if all(f.map[h1[x]] == g.map[h2[x]] for x in range(t.size))
    ]


# --------------------------------------------------------------------------
# abelian groups and homology


def snf_invariants(matrix) -> list[int]:
    """Nonzero diagonal of the Smith form computed by sympy."""
    if not matrix or not matrix[0]:
        return []
    inv = invariant_factors(Matrix(matrix), domain=ZZ)
    return [abs(int(x)) for x in inv if int(x) != 0]


def cokernel_oracle(matrix, ncols: int) -> FgAbelianGroup:
    inv = snf_invariants(matrix) if matrix else []
    rank = len(inv)
    return FgAbelianGroup.from_cyclic([d for d in inv if d != 1] + [0] * (ncols - rank))


def exterior_square_h2(g: FgAbelianGroup) -> FgAbelianGroup:
    """``H_2`` of an abelian group as ``Lambda^2``: one ``Z/gcd(d_i, d_j)`` per pair."""
    orders = g.cyclic_orders()
    parts = [gcd(a, b) for a, b in itertools.combinations(orders, 2)]
    return FgAbelianGroup.from_cyclic([p for p in parts if p != 1])


def _periodic_complex(d: int, top: int):
    """Chain complex ``Z <- Z <- ...`` computing ``H_*(Z/d)`` (``d = 0``: the circle)."""
    if d == 0:
        dims = [1, 1] + [0] * (top - 1)
        diffs = {k: 0 for k in range(1, top + 1)}
        return dims[: top + 1], diffs
    dims = [1] * (top + 1)
    diffs = {k: (0 if k % 2 else d) for k in range(1, top + 1)}
    return dims, diffs


def chain_complex_homology(g: FgAbelianGroup, top: int = 3) -> list[FgAbelianGroup]:
    """Integral homology from the tensor product of periodic resolutions.

    Builds ``C = (x)_i C(d_i)`` up to degree ``top + 1`` with Koszul signs
    and reads ``H_k`` off the Smith forms of the boundary matrices.
    """
    orders = [d for d in g.cyclic_orders() if d != 1]
    deg = top + 1
    factors = [_periodic_complex(d, deg) for d in orders]
    # basis of C_n: tuples of degrees (one per factor) with nonzero dimension and sum n
    bases = []
    for n in range(deg + 1):
        basis = [
            c
            for c in itertools.product(range(n + 1), repeat=len(orders))
            if sum(c) == n and all(c[i] < len(factors[i][0]) and factors[i][0][c[i]] for i in range(len(orders)))
        ]
        bases.append(basis)
    if not orders:
        bases = [[()]] + [[] for _ in range(deg)]
    boundaries = {}
    for n in range(1, deg + 1):
        rows = bases[n - 1]
        pos = {c: i for i, c in enumerate(rows)}
        mat = [[0] * len(bases[n]) for _ in rows]
        for j, c in enumerate(bases[n]):
            sign = 1
            for i, ci in enumerate(c):
                if ci > 0:
                    coeff = factors[i][1][ci]
                    if coeff:
                        tgt = c[:i] + (ci - 1,) + c[i + 1 :]
                        mat[pos[tgt]][j] += sign * coeff
                if ci % 2:
                    sign = -sign
        boundaries[n] = mat
    out = []
    for k in range(top + 1):
        dim = len(bases[k])
        rank_out = len(snf_invariants(boundaries[k])) if k >= 1 and bases[k] and bases[k - 1] else 0
        incoming = boundaries[k + 1] if bases[k + 1] and bases[k] else []
        inv = snf_invariants(incoming) if incoming else []
        free = dim - rank_out - len(inv)
        out.append(FgAbelianGroup.from_cyclic([d for d in inv if d != 1] + [0] * free))
    return out


def homology_z2_oracle(g: FgAbelianGroup, top: int = 3) -> list[int]:
    """Orders of ``H_k(G; Z/2)`` from the complex reduced mod 2 (dimensions over F_2)."""
    orders = [d for d in g.cyclic_orders() if d != 1]
    if any(d == 0 for d in orders):
        raise ValueError("finite groups only")
    # over F_2 the boundary of C(d) is 0 for even d, and an isomorphism in even degrees for odd d
    # Poincare series of H_*(Z/d; F_2) is 1/(1-t) for even d and 1 for odd d.
    series = [1] + [0] * top
    for d in orders:
        factor = [1] * (top + 1) if d % 2 == 0 else [1] + [0] * top
        series = [sum(series[i] * factor[k - i] for i in range(k + 1)) for k in range(top + 1)]
    return [2**s for s in series]


# --------------------------------------------------------------------------
# exhaustive small A-sets


def monoid_generators(a) -> list[int]:
    """A generating set of the monoid ``A`` (besides 0 and 1), chosen greedily."""
    gens: list[int] = []

    def span(gs):
        seen = {a.one}
        frontier = [a.one]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gs:
                    y = a.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    targets = set(a.nonzero())
    for x in a.nonzero():
        if x == a.one:
            continue
        if x not in span(gens):
            gens.append(x)
        if targets <= span(gens):
            break
    return gens


def small_asets(a, max_size: int):
    """Every A-set with at most ``max_size`` points (basepoint included), one per isomorphism class."""
    from .aset import FiniteASet

    gens = monoid_generators(a)
    cycles = [_cycle_relation(a, g) for g in gens]
    out = []
    for size in range(1, max_size + 1):
        maps = [(0,) + m for m in itertools.product(range(size), repeat=size - 1)]
        per_gen = [[m for m in maps if _satisfies_cycle(m, rel)] for rel in cycles]
        seen = set()
        for choice in itertools.product(*per_gen):
            table = _extend_action(a, gens, choice, size)
            if table is None:
                continue
            key = _canonical_action(table, size)
            if key in seen:
                continue
            seen.add(key)
            carrier = ("*",) + tuple(f"p{i}" for i in range(1, size))
            out.append(FiniteASet(a, carrier, table))
    return out


def _cycle_relation(a, g) -> tuple[int, int]:
    """The least ``i < j`` with ``g^i = g^j``."""
    powers = [a.one]
    while True:
        nxt = a.mul(powers[-1], g)
        if nxt in powers:
            return powers.index(nxt), len(powers)
        powers.append(nxt)


def _satisfies_cycle(m, rel) -> bool:
    i, j = rel
    size = len(m)
    cur = tuple(range(size))
    at_i = cur if i == 0 else None
    for k in range(1, j + 1):
        cur = tuple(m[v] for v in cur)
        if k == i:
            at_i = cur
    return cur == at_i


def _extend_action(a, gens, choice, size):
    import numpy as np

    table = [None] * a.size
    table[a.one] = tuple(range(size))
    table[a.zero] = (0,) * size
    if a.zero == a.one:
        return np.zeros((1, size), dtype=np.int64) if size == 1 else None
    frontier = [a.one]
    while frontier:
        nxt = []
        for x in frontier:
            for g, gm in zip(gens, choice):
                y = a.mul(g, x)  # (g x).m = g.(x.m)
                ym = tuple(gm[v] for v in table[x])
                if table[y] is None:
                    table[y] = ym
                    nxt.append(y)
                elif table[y] != ym:
                    return None
        frontier = nxt
    if any(t is None for t in table):
        return None
    arr = np.array(table, dtype=np.int64)
    # full axiom check: (xy).m = x.(y.m)
    for x in range(a.size):
        for y in range(a.size):
            if not (arr[a.mul(x, y)] == arr[x][arr[y]]).all():
                return None
    return arr


def _canonical_action(table, size):
    best = None
    for perm in itertools.permutations(range(1, size)):
        p = (0,) + perm  # old -> new
        inv = [0] * size
        for old, new in enumerate(p):
            inv[new] = old
        key = tuple(tuple(p[int(row[inv[j]])] for j in range(size)) for row in table)
        if best is None or key < best:
            best = key
    return best


# --------------------------------------------------------------------------
# first homology of a 2-complex


def complex_h1(n_vertices: int, edges, triangles) -> FgAbelianGroup:
    """``H_1`` of a 2-dimensional complex straight from its boundary matrices.

    ``edges`` are ``(tail, head)`` vertex pairs and ``triangles`` are edge
    triples ``(f, g, h)`` with boundary ``f + g - h``.  For a connected
    complex this is the abelianized fundamental group.
    """
    e = len(edges)
    d1 = [[0] * e for _ in range(n_vertices)]
    for k, (s, t) in enumerate(edges):
        d1[t][k] += 1
        d1[s][k] -= 1
    d2 = [[0] * len(triangles) for _ in range(e)]
    for k, (f, g, h) in enumerate(triangles):
        d2[f][k] += 1
        d2[g][k] += 1
        d2[h][k] -= 1
    rank1 = len(snf_invariants(d1))
    inv2 = snf_invariants(d2) if triangles else []
    free = e - rank1 - len(inv2)
    return FgAbelianGroup.from_cyclic([d for d in inv2 if d != 1] + [0] * free)


# --------------------------------------------------------------------------
# collection in M(Z/d)


def collect_letters(d: int, letters) -> tuple[int, dict[int, int]]:
    """Normal form of a word in ``M(Z/d)`` by bubble-sorting single letters.

    ``letters`` holds ``0`` for ``alpha`` and ``+-i`` for ``X_i^{+-1}``.
    Swapping two adjacent letters with different indices costs one ``alpha``,
    since any commutator of distinct generators (or their inverses) is
    ``alpha`` and ``alpha`` is central of order at most 2.  Returns
    ``(bit, exponents)``; the bit is dropped for odd ``d``.
    """
    bit = sum(1 for x in letters if x == 0)
    word = [x for x in letters if x != 0]
    for i in range(len(word)):
        for j in range(len(word) - 1 - i):
            if abs(word[j]) > abs(word[j + 1]):
                word[j], word[j + 1] = word[j + 1], word[j]
                bit += 1
    exps: dict[int, int] = {}
    for x in word:
        exps[abs(x)] = exps.get(abs(x), 0) + (1 if x > 0 else -1)
    if d:
        exps = {i: e % d for i, e in exps.items()}
    exps = {i: e for i, e in exps.items() if e}
    return (bit % 2 if d % 2 == 0 else 0), exps
