"""Rank-bounded Q-construction on free A-sets and the edge-path group of its nerve.

Objects are ranks ``0..N`` standing for ``A^{v n}``.  A morphism ``m -> n``
is an isomorphism class of spans ``m <<- p >-> n`` whose legs are an
admissible epimorphism and an admissible monomorphism.  Legs are stored as
row-monomic matrices over fixed free bases (row ``k`` is the image of the
``k``-th middle generator), and a span class is stored as the least pair
``(g J, g I)`` over ``g`` in ``GL_p(A)``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from . import aset
from .abgroup import FgAbelianGroup, cokernel, in_row_lattice
from .errors import StructuralError, UnsupportedError, check_size
from .matrix import RowMonomicMatrix, enumerate_gl, mat_mul
from .monoid import PointedMonoid


@dataclass(frozen=True, order=True)
class QObject:
    rank: int


def _key(m: RowMonomicMatrix) -> tuple:
    return tuple((-1, -1) if e is None else e for e in m.entries)


@dataclass(frozen=True)
class QSpan:
    """``source <<-epi- middle -mono->> target`` on free A-sets of the given ranks."""

    source: int
    target: int
    epi: RowMonomicMatrix  # middle_rank x source
    mono: RowMonomicMatrix  # middle_rank x target

    @property
    def middle_rank(self) -> int:
        return self.epi.rows

    def sort_key(self) -> tuple:
        return (self.source, self.target, self.middle_rank, _key(self.epi), _key(self.mono))

    def weight(self) -> int:
        """Rank cocycle ``rank(middle) - rank(source)``, additive under composition."""
        return self.middle_rank - self.source

    def describe(self) -> str:
        return f"{self.source}<-{self.middle_rank}->{self.target}"


class QCategory:
    """Free A-sets of rank at most ``bound`` with span composition."""

    def __init__(self, a: PointedMonoid, bound: int):
        if bound < 0:
            raise StructuralError("rank bound must be nonnegative")
        self.a = a
        self.bound = bound
        self._free: dict[int, aset.FreeASet] = {}
        self._gl: dict[int, list[RowMonomicMatrix]] = {}
        self._epi: dict[tuple, bool] = {}
        self._mono: dict[tuple, bool] = {}

    # -- realizations ---------------------------------------------------
    def free(self, rank: int) -> aset.FreeASet:
        if rank not in self._free:
            self._free[rank] = aset.free_of_rank(self.a, rank)
        return self._free[rank]

    def morphism(self, matrix: RowMonomicMatrix) -> aset.ASetMorphism:
        return aset.matrix_morphism(self.a, matrix, self.free(matrix.rows), self.free(matrix.cols))

    def realize(self, span: QSpan):
        """``(middle, epi, mono)`` as A-sets and morphisms."""
        return self.free(span.middle_rank).aset, self.morphism(span.epi), self.morphism(span.mono)

    def gl(self, p: int) -> list[RowMonomicMatrix]:
        if p not in self._gl:
            self._gl[p] = [RowMonomicMatrix(0, 0, ())] if p == 0 else enumerate_gl(self.a, p)
        return self._gl[p]

    # -- admissibility --------------------------------------------------
    def is_epi(self, m: RowMonomicMatrix) -> bool:
        k = (m.rows, m.cols, m.entries)
        if k not in self._epi:
            self._epi[k] = aset.is_admissible_epi(self.morphism(m))
        return self._epi[k]

    def is_mono(self, m: RowMonomicMatrix) -> bool:
        k = (m.rows, m.cols, m.entries)
        if k not in self._mono:
            self._mono[k] = aset.is_admissible_mono(self.morphism(m))
        return self._mono[k]

    def matrices(self, rows: int, cols: int):
        choices = [None] + [(j, x) for j in range(cols) for x in self.a.nonzero()]
        check_size(len(choices) ** rows, f"{rows}x{cols} row-monomic matrices")
        for entries in itertools.product(choices, repeat=rows):
            yield RowMonomicMatrix(rows, cols, entries)

    # -- spans ----------------------------------------------------------
    def canonical(self, span: QSpan) -> QSpan:
        best = None
        for g in self.gl(span.middle_rank):
            cand = QSpan(span.source, span.target, mat_mul(g, span.epi, self.a), mat_mul(g, span.mono, self.a))
            if best is None or cand.sort_key() < best.sort_key():
                best = cand
        return best

    def check_span(self, span: QSpan) -> QSpan:
        if span.epi.rows != span.mono.rows:
            raise StructuralError("span legs have different middles")
        if span.epi.cols != span.source or span.mono.cols != span.target:
            raise StructuralError("span legs do not match the end objects")
        if not self.is_epi(span.epi):
            raise StructuralError("left leg is not an admissible epimorphism")
        if not self.is_mono(span.mono):
            raise StructuralError("right leg is not an admissible monomorphism")
        return span

    def identity(self, n: int) -> QSpan:
        ident = RowMonomicMatrix.identity(n, self.a)
        return self.canonical(QSpan(n, n, ident, ident))

    def spans(self, m: int, n: int) -> list[QSpan]:
        """All span classes ``m -> n`` in canonical order."""
        out = set()
        for p in range(m, n + 1):
            epis = [j for j in self.matrices(p, m) if self.is_epi(j)]
            monos = [i for i in self.matrices(p, n) if self.is_mono(i)]
            for j in epis:
                for i in monos:
                    out.add(self.canonical(QSpan(m, n, j, i)))
        return sorted(out, key=QSpan.sort_key)

    def compose(self, s1: QSpan, s2: QSpan) -> QSpan:
        """``s2 . s1``: the middle is the pullback of ``mono(s1)`` along ``epi(s2)``."""
        if s1.target != s2.source:
            raise StructuralError("spans are not composable")
        i1 = self.morphism(s1.mono)
        j2 = self.morphism(s2.epi)
        z, (to_p, to_q) = aset.pullback(i1, j2)
        epi = aset.compose(self.morphism(s1.epi), to_p)
        mono = aset.compose(self.morphism(s2.mono), to_q)
        basis = aset.find_basis(z)
        if basis is None:
            raise UnsupportedError("pullback middle is projective but not free; only Proj = Vec is supported")
        src = self.free(s1.source).generators
        tgt = self.free(s2.target).generators
        span = QSpan(
            s1.source,
            s2.target,
            aset.morphism_matrix(epi, basis, src),
            aset.morphism_matrix(mono, basis, tgt),
        )
        return self.canonical(span)


def compose_spans(cat: QCategory, s1: QSpan, s2: QSpan) -> QSpan:
    return cat.compose(s1, s2)


def hom_count_f1(m: int, n: int) -> int:
    """Span classes ``m -> n`` over F1: a ``p``-subset of ``n`` plus an injection of ``m`` into it."""
    from math import comb, perm

    return sum(comb(n, p) * perm(p, m) for p in range(m, n + 1))


# --------------------------------------------------------------------------
# nerve and edge-path group


@dataclass
class Nerve:
    category: QCategory
    vertices: list[int]
    edges: list[QSpan]
    triangles: list[tuple[int, int, int]]  # (f, g, g.f) as edge indices

    @cached_property
    def edge_index(self) -> dict[QSpan, int]:
        return {e: k for k, e in enumerate(self.edges)}


def build_nerve(a: PointedMonoid, bound: int) -> Nerve:
    cat = QCategory(a, bound)
    verts = list(range(bound + 1))
    by_pair = {(m, n): cat.spans(m, n) for m in verts for n in verts}
    edges = [e for m in verts for n in verts for e in by_pair[(m, n)]]
    index = {e: k for k, e in enumerate(edges)}
    check_size(sum(len(by_pair[(x, y)]) * len(by_pair[(y, z)]) for x in verts for y in verts for z in verts), "triangles")
    triangles = []
    for x in verts:
        for y in verts:
            for z in verts:
                for f in by_pair[(x, y)]:
                    for g in by_pair[(y, z)]:
                        triangles.append((index[f], index[g], index[compose_spans(cat, f, g)]))
    return Nerve(cat, verts, edges, triangles)


def _spanning_tree(nerve: Nerve) -> dict[int, int]:
    """BFS from rank 0 visiting ranks in order, first edge in canonical order wins."""
    parent_edge: dict[int, int] = {}
    seen = {0}
    queue = deque([0])
    out_edges: dict[int, list[int]] = {v: [] for v in nerve.vertices}
    for k, e in enumerate(nerve.edges):
        out_edges[e.source].append(k)
        out_edges[e.target].append(k)
    while queue:
        v = queue.popleft()
        for k in out_edges[v]:
            e = nerve.edges[k]
            w = e.target if e.source == v else e.source
            if w not in seen:
                seen.add(w)
                parent_edge[w] = k
                queue.append(w)
    if len(seen) != len(nerve.vertices):
        raise StructuralError("nerve is disconnected")
    return parent_edge


def _eliminate(rows: list[dict[int, int]], probes: list[dict[int, int]]):
    """Drop variables that occur with a unit coefficient in some relation.

    Both the quotient ``Z^cols / rows`` and row-lattice membership of the
    probes are unchanged; what is left is returned for a dense Smith form.
    """
    rows = [dict(r) for r in rows if r]
    probes = [dict(p) for p in probes]
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    alive = set(range(len(rows)))
    eliminated = set()

    def axpy(dst: dict, src: dict, q: int, owner: int | None):
        for c, v in src.items():
            nv = dst.get(c, 0) - q * v
            if nv:
                if owner is not None and c not in dst:
                    col_rows.setdefault(c, set()).add(owner)
                dst[c] = nv
            else:
                dst.pop(c, None)
                if owner is not None:
                    col_rows[c].discard(owner)

    progress = True
    while progress:
        progress = False
        for i in sorted(alive, key=lambda i: len(rows[i])):
            r = rows[i]
            if not r:
                alive.discard(i)
                continue
            pivot = next((c for c, v in sorted(r.items()) if abs(v) == 1), None)
            if pivot is None:
                continue
            sign = r[pivot]
            alive.discard(i)
            for c in r:
                col_rows[c].discard(i)
            for k in list(col_rows.get(pivot, ())):
                axpy(rows[k], r, rows[k][pivot] * sign, k)
            for p in probes:
                if pivot in p:
                    axpy(p, r, p[pivot] * sign, None)
            eliminated.add(pivot)
            progress = True
            break
    remaining = [rows[i] for i in sorted(alive) if rows[i]]
    return remaining, probes, eliminated


@dataclass
class EdgePathPresentation:
    generators: list[int]  # nerve edge indices outside the spanning tree
    relators: list[list[tuple[int, int]]]  # words of (generator position, +-1)
    tree: dict[int, int]  # vertex -> tree edge index
    abelianization: FgAbelianGroup
    rank_map: list[int]  # weight of each generator
    loop_generators: dict[int, int] = field(default_factory=dict)  # rank -> generator position of 0 <<- n >-> n

    def word_rank(self, word) -> int:
        return sum(self.rank_map[g] * s for g, s in word)


def pi1_presentation(nerve: Nerve) -> EdgePathPresentation:
    tree = _spanning_tree(nerve)
    tree_edges = set(tree.values())
    gens = [k for k in range(len(nerve.edges)) if k not in tree_edges]
    pos = {k: i for i, k in enumerate(gens)}
    relators = []
    for f, g, h in nerve.triangles:
        word = [(pos[f], 1)] if f in pos else []
        if g in pos:
            word.append((pos[g], 1))
        if h in pos:
            word.append((pos[h], -1))
        relators.append(word)
    rank_map = [nerve.edges[k].weight() for k in gens]
    cat = nerve.category
    loops = {}
    for n in nerve.vertices[1:]:
        ident = RowMonomicMatrix.identity(n, cat.a)
        j_n = cat.canonical(QSpan(0, n, RowMonomicMatrix(n, 0, (None,) * n), ident))
        k = nerve.edge_index[j_n]
        if k in pos:
            loops[n] = pos[k]
    rows = _relator_rows(relators)
    remaining, _, eliminated = _eliminate(rows, [])
    cols = [c for c in range(len(gens)) if c not in eliminated]
    cidx = {c: i for i, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in remaining]
    for i, r in enumerate(remaining):
        for c, v in r.items():
            dense[i][cidx[c]] = v
    ab = cokernel(dense, len(cols))
    return EdgePathPresentation(gens, relators, tree, ab, rank_map, loops)


def _relator_rows(relators) -> list[dict[int, int]]:
    rows = []
    for word in relators:
        r: dict[int, int] = {}
        for g, s in word:
            r[g] = r.get(g, 0) + s
        r = {c: v for c, v in r.items() if v}
        if r:
            rows.append(r)
    return rows


def in_relation_lattice(pres: EdgePathPresentation, vector: dict[int, int]) -> bool:
    """Whether an integer combination of generators is trivial in the abelianization."""
    rows = _relator_rows(pres.relators)
    remaining, (probe,), _ = _eliminate(rows, [vector])
    cols = sorted({c for r in remaining for c in r} | set(probe))
    if not probe:
        return True
    cidx = {c: i for i, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in remaining]
    for i, r in enumerate(remaining):
        for c, v in r.items():
            dense[i][cidx[c]] = v
    vec = [0] * len(cols)
    for c, v in probe.items():
        vec[cidx[c]] = v
    if not dense:
        return False
    return in_row_lattice(vec, dense)


@dataclass(frozen=True)
class QReport:
    rank_bound: int
    vertices: int
    edges: int
    triangles: int
    generators: int
    abelianization: FgAbelianGroup
    rank_surjective: bool
    rank_well_defined: bool
    additivity: dict  # "m+n" -> bool
    is_integers: bool

    @property
    def ok(self) -> bool:
        return self.rank_surjective and self.rank_well_defined and all(self.additivity.values())

    def to_json(self) -> dict:
        return {
            "rank_bound": self.rank_bound,
            "vertices": self.vertices,
            "edges": self.edges,
            "triangles": self.triangles,
            "generators": self.generators,
            "abelianization": self.abelianization.to_json(),
            "rank_surjective": self.rank_surjective,
            "rank_well_defined": self.rank_well_defined,
            "additivity": self.additivity,
            "abelianization_is_Z": self.is_integers,
        }


def q_report(a: PointedMonoid, bound: int) -> tuple[QReport, Nerve, EdgePathPresentation]:
    """Build the truncated nerve and check the rank homomorphism and loop additivity."""
    nerve = build_nerve(a, bound)
    pres = pi1_presentation(nerve)
    well_defined = all(pres.word_rank(w) == 0 for w in pres.relators)
    # the image of the rank map is the subgroup generated by the weights
    surjective = _gcd_all(pres.rank_map) == 1
    additivity = {}
    loops = pres.loop_generators
    for m in range(1, bound + 1):
        for n in range(m, bound + 1 - m):
            if n < 1:
                continue
            vec: dict[int, int] = {}
            for r, s in ((m + n, 1), (m, -1), (n, -1)):
                vec[loops[r]] = vec.get(loops[r], 0) + s
            vec = {c: v for c, v in vec.items() if v}
            additivity[f"{m}+{n}"] = in_relation_lattice(pres, vec)
    report = QReport(
        bound,
        len(nerve.vertices),
        len(nerve.edges),
        len(nerve.triangles),
        len(pres.generators),
        pres.abelianization,
        surjective,
        well_defined,
        additivity,
        pres.abelianization == FgAbelianGroup(1, ()),
    )
    return report, nerve, pres


def _gcd_all(values) -> int:
    from math import gcd

    out = 0
    for v in values:
        out = gcd(out, v)
    return out
