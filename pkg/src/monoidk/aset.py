"""Finite pointed A-sets: morphisms, limits and colimits, tensor and Hom,
projectivity and admissible exact sequences.

A :class:`FiniteASet` keeps its basepoint at carrier index 0 and stores the
action as an ``(|A|, |M|)`` table, ``action[a, m] = a.m``.  Bisets carry a
second table for the right action, ``right_action[b, m] = m.b``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .errors import InvalidStructureError, StructuralError
from .monoid import PointedMonoid, f1, opposite, smash, units

BASE = "*"


def _action_table(action, n_monoid, n_carrier, what):
    try:
        arr = np.array(action, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise StructuralError(f"{what}: action is not an integer table") from exc
    if arr.shape != (n_monoid, n_carrier):
        raise StructuralError(f"{what}: action has shape {arr.shape}, expected {(n_monoid, n_carrier)}")
    if arr.size and (arr.min() < 0 or arr.max() >= n_carrier):
        raise StructuralError(f"{what}: action entries must be carrier indices")
    arr.setflags(write=False)
    return arr


def action_violations(monoid: PointedMonoid, action: np.ndarray) -> list[str]:
    """Axioms of a pointed left action that ``action`` breaks."""
    out = []
    n = action.shape[1]
    pts = np.arange(n)
    if not np.array_equal(action[monoid.one], pts):
        out.append("unit does not act as the identity")
    if not (action[monoid.zero] == 0).all():
        out.append("zero does not act as the constant basepoint map")
    if not (action[:, 0] == 0).all():
        out.append("basepoint is not fixed")
    # (ab).m == a.(b.m)
    lhs = action[monoid.table]  # lhs[a, b, m] = (ab).m
    rhs = action[np.arange(monoid.size)[:, None, None], action[None, :, :]]  # a.(b.m)
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        a, b, m = bad[0]
        out.append(f"action is not multiplicative at ({monoid.elements[a]}, {monoid.elements[b]}, point {m})")
    return out


@dataclass(frozen=True, eq=False)
class FiniteASet:
    monoid: PointedMonoid
    carrier: tuple[str, ...]
    action: np.ndarray

    def __post_init__(self):
        carrier = tuple(str(c) for c in self.carrier)
        if not carrier:
            raise StructuralError("an A-set has at least the basepoint")
        if len(set(carrier)) != len(carrier):
            raise StructuralError("carrier labels must be distinct")
        object.__setattr__(self, "carrier", carrier)
        act = _action_table(self.action, self.monoid.size, len(carrier), "A-set")
        object.__setattr__(self, "action", act)
        problems = action_violations(self.monoid, act)
        if problems:
            raise InvalidStructureError(f"not an A-set: {problems[0]}", problems)

    @property
    def size(self) -> int:
        return len(self.carrier)

    def __len__(self):
        return len(self.carrier)

    def act(self, a: int, m: int) -> int:
        return int(self.action[a, m])

    def orbit(self, m: int) -> frozenset[int]:
        """The sub-A-set ``A.m``."""
        return frozenset(int(x) for x in self.action[:, m])

    def index(self, label: str) -> int:
        try:
            return self.carrier.index(str(label))
        except ValueError:
            raise StructuralError(f"{label!r} is not in the carrier") from None

    def points(self) -> range:
        return range(1, self.size)

    def __repr__(self):
        return f"FiniteASet(|A|={self.monoid.size}, carrier={list(self.carrier)!r})"

    def to_json(self, monoid_ref=None) -> dict:
        a = self.monoid
        action = {}
        for x in range(a.size):
            if x in (a.zero, a.one):
                continue
            action[a.elements[x]] = [self.carrier[int(m)] for m in self.action[x]]
        return {
            "monoid": monoid_ref if monoid_ref is not None else a.to_json(),
            "carrier": list(self.carrier),
            "action": action,
        }

    @classmethod
    def from_json(cls, data, monoid: PointedMonoid | None = None, base_dir=None) -> FiniteASet:
        if monoid is None:
            ref = data.get("monoid")
            if isinstance(ref, str):
                path = Path(ref)
                if base_dir is not None and not path.is_absolute():
                    path = Path(base_dir) / path
                ref = json.loads(path.read_text())
            if not isinstance(ref, dict):
                raise StructuralError("A-set JSON needs a monoid (inline object or file reference)")
            monoid = PointedMonoid.from_json(ref)
        carrier = [str(c) for c in data["carrier"]]
        if BASE not in carrier:
            raise StructuralError(f"carrier must contain the basepoint {BASE!r}")
        carrier.remove(BASE)
        carrier = [BASE] + carrier
        pos = {c: i for i, c in enumerate(carrier)}
        raw = {str(k): v for k, v in data.get("action", {}).items()}
        # listed order of the file's carrier for image lists
        listed = [str(c) for c in data["carrier"]]
        table = np.zeros((monoid.size, len(carrier)), dtype=np.int64)
        for x in range(monoid.size):
            label = monoid.elements[x]
            if x == monoid.zero and label not in raw:
                continue
            if x == monoid.one and label not in raw:
                table[x] = np.arange(len(carrier))
                continue
            if label not in raw:
                raise StructuralError(f"A-set JSON lacks the action of {label!r}")
            images = raw[label]
            if len(images) != len(listed):
                raise StructuralError(f"action of {label!r} must list an image for every carrier point")
            try:
                for src, img in zip(listed, images):
                    table[x, pos[src]] = pos[str(img)]
            except KeyError as exc:
                raise StructuralError(f"unknown carrier label {exc.args[0]!r}") from None
        return cls(monoid, tuple(carrier), table)


def load_aset(path) -> FiniteASet:
    path = Path(path)
    return FiniteASet.from_json(json.loads(path.read_text()), base_dir=path.parent)


def trivial_aset(a: PointedMonoid) -> FiniteASet:
    return FiniteASet(a, (BASE,), np.zeros((a.size, 1), dtype=np.int64))


def pointed_set(labels) -> FiniteASet:
    """A pointed set, i.e. an F1-set, on ``*`` plus ``labels``."""
    a = f1()
    carrier = (BASE,) + tuple(labels)
    table = np.zeros((2, len(carrier)), dtype=np.int64)
    table[a.one] = np.arange(len(carrier))
    return FiniteASet(a, carrier, table)


# --------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True, eq=False)
class ASetMorphism:
    source: FiniteASet
    target: FiniteASet
    map: tuple[int, ...]

    def __post_init__(self):
        mp = tuple(int(x) for x in self.map)
        if len(mp) != self.source.size:
            raise StructuralError("morphism map must cover the source carrier")
        if any(not 0 <= x < self.target.size for x in mp):
            raise StructuralError("morphism map leaves the target carrier")
        object.__setattr__(self, "map", mp)
        if self.source.monoid != self.target.monoid:
            raise StructuralError("source and target are over different monoids")
        if mp[0] != 0:
            raise InvalidStructureError("morphism does not preserve the basepoint")
        f = np.array(mp)
        if not np.array_equal(f[self.source.action], self.target.action[:, f]):
            raise InvalidStructureError("morphism is not A-equivariant")

    def __call__(self, m: int) -> int:
        return self.map[m]

    def __eq__(self, other):
        if not isinstance(other, ASetMorphism):
            return NotImplemented
        return self.source is other.source and self.target is other.target and self.map == other.map

    def __hash__(self):
        return hash((id(self.source), id(self.target), self.map))

    def kernel_points(self) -> list[int]:
        return [m for m, y in enumerate(self.map) if y == 0]

    def image(self) -> set[int]:
        return set(self.map)

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def is_onto(self) -> bool:
        return len(set(self.map)) == self.target.size

    def is_normal(self) -> bool:
        """Injective off the kernel."""
        off = [y for y in self.map if y != 0]
        return len(set(off)) == len(off)

    def is_zero(self) -> bool:
        return all(y == 0 for y in self.map)

    def is_iso(self) -> bool:
        return self.is_injective() and self.source.size == self.target.size


def compose(g: ASetMorphism, f: ASetMorphism) -> ASetMorphism:
    """``g . f`` (first ``f``)."""
    if f.target is not g.source:
        raise StructuralError("morphisms are not composable")
    return ASetMorphism(f.source, g.target, tuple(g.map[x] for x in f.map))


def identity(m: FiniteASet) -> ASetMorphism:
    return ASetMorphism(m, m, tuple(range(m.size)))


def zero_morphism(m: FiniteASet, n: FiniteASet) -> ASetMorphism:
    return ASetMorphism(m, n, (0,) * m.size)


def same_map(f: ASetMorphism, g: ASetMorphism) -> bool:
    return f.map == g.map


# --------------------------------------------------------------------------
# free A-sets


class FreeASet(NamedTuple):
    aset: FiniteASet
    generators: tuple[int, ...]  # carrier index of each generator


def free_aset(a: PointedMonoid, generators) -> FreeASet:
    """The wedge of copies of ``A`` indexed by ``generators``."""
    generators = [str(g) for g in generators]
    if len(set(generators)) != len(generators):
        raise StructuralError("generator labels must be distinct")
    nz = a.nonzero()
    slot = {x: i for i, x in enumerate(nz)}
    width = len(nz)
    carrier = [BASE]
    for g in generators:
        for x in nz:
            carrier.append(g if x == a.one else f"{a.elements[x]}.{g}")
    if len(set(carrier)) != len(carrier):
        raise StructuralError("generator labels collide with generated labels")
    table = np.zeros((a.size, len(carrier)), dtype=np.int64)
    for k in range(len(generators)):
        for x in nz:
            src = 1 + k * width + slot[x]
            for b in range(a.size):
                bx = a.mul(b, x)
                table[b, src] = 0 if bx == a.zero else 1 + k * width + slot[bx]
    gens = tuple(1 + k * width + slot[a.one] for k in range(len(generators)))
    return FreeASet(FiniteASet(a, tuple(carrier), table), gens)


def free_of_rank(a: PointedMonoid, rank: int) -> FreeASet:
    return free_aset(a, [f"x{i + 1}" for i in range(rank)])


def extend_from_generators(free: FreeASet, target: FiniteASet, images) -> ASetMorphism:
    """The unique morphism sending each free generator to ``images[k]``."""
    src = free.aset
    images = list(images)
    if len(images) != len(free.generators):
        raise StructuralError("one image per generator required")
    mp = [0] * src.size
    for g, y in zip(free.generators, images):
        for b in range(src.monoid.size):
            mp[src.act(b, g)] = target.act(b, y)
    return ASetMorphism(src, target, tuple(mp))


def matrix_morphism(a: PointedMonoid, matrix, source: FreeASet | None = None, target: FreeASet | None = None) -> ASetMorphism:
    """Morphism of free A-sets encoded by a row-monomic matrix.

    Row ``k`` holding ``(j, x)`` sends generator ``k`` to ``x . y_j``.
    """
    source = source or free_of_rank(a, matrix.rows)
    target = target or free_of_rank(a, matrix.cols)
    if len(source.generators) != matrix.rows or len(target.generators) != matrix.cols:
        raise StructuralError("matrix shape does not match the free A-sets")
    images = []
    for e in matrix.entries:
        images.append(0 if e is None else target.aset.act(e[1], target.generators[e[0]]))
    return extend_from_generators(source, target.aset, images)


def express_in_basis(m: FiniteASet, basis, point: int):
    """``(k, x)`` with ``point = x . basis[k]``, or ``None`` for the basepoint."""
    if point == 0:
        return None
    for k, g in enumerate(basis):
        hits = np.flatnonzero(m.action[:, g] == point)
        if hits.size:
            return k, int(hits[0])
    raise StructuralError(f"point {point} is not generated by the basis")


def morphism_matrix(f: ASetMorphism, source_basis, target_basis):
    """Row-monomic matrix of a morphism between free A-sets with chosen bases."""
    from .matrix import RowMonomicMatrix

    entries = [express_in_basis(f.target, target_basis, f.map[g]) for g in source_basis]
    return RowMonomicMatrix(len(source_basis), len(target_basis), tuple(entries))


# --------------------------------------------------------------------------
# generating sets and morphism search


def generating_set(m: FiniteASet) -> tuple[int, ...]:
    """A minimal generating set: one point per maximal principal sub-A-set."""
    orbits = {x: m.orbit(x) for x in m.points()}
    chosen = []
    covered: set[int] = set()
    for x in m.points():
        ox = orbits[x]
        if any(ox < orbits[y] for y in m.points()):
            continue
        if x in covered:
            continue
        chosen.append(x)
        covered |= ox
    return tuple(chosen)


def _candidates(src: FiniteASet, gen: int, tgt: FiniteASet, allowed=None) -> list[int]:
    """Points ``y`` for which ``a.gen -> a.y`` is well defined."""
    col = src.action[:, gen]
    _, first = np.unique(col, return_inverse=True)
    out = []
    pool = range(tgt.size) if allowed is None else allowed
    for y in pool:
        img = tgt.action[:, y]
        # equal images of gen must give equal images of y
        rep = np.zeros(first.max() + 1, dtype=np.int64) - 1
        ok = True
        for a_idx, cls in enumerate(first):
            if rep[cls] < 0:
                rep[cls] = img[a_idx]
            elif rep[cls] != img[a_idx]:
                ok = False
                break
        if ok and img[src.monoid.zero] == 0:
            out.append(int(y))
    return out


def iter_morphisms(src: FiniteASet, tgt: FiniteASet, fibers=None, injective=False):
    """Yield every equivariant pointed map ``src -> tgt``.

    ``fibers`` optionally restricts each generator's image to a set.
    """
    if src.monoid != tgt.monoid:
        raise StructuralError("A-sets over different monoids")
    gens = generating_set(src)
    cand = [
        _candidates(src, g, tgt, None if fibers is None else sorted(fibers(g)))
        for g in gens
    ]
    act = src.action
    tact = tgt.action
    n = src.size

    def extend(k, mp):
        if k == len(gens):
            if injective and len(set(mp)) != n:
                return
            yield tuple(mp)
            return
        g = gens[k]
        pts = act[:, g]
        for y in cand[k]:
            imgs = tact[:, y]
            trial = list(mp)
            ok = True
            for p, q in zip(pts, imgs):
                cur = trial[p]
                if cur < 0:
                    trial[p] = int(q)
                elif cur != q:
                    ok = False
                    break
            if ok:
                yield from extend(k + 1, trial)

    start = [-1] * n
    start[0] = 0
    for mp in extend(0, start):
        yield ASetMorphism(src, tgt, mp)


def hom_set(m: FiniteASet, n: FiniteASet) -> list[ASetMorphism]:
    """All A-set morphisms ``m -> n`` in lexicographic order of maps."""
    return sorted(iter_morphisms(m, n), key=lambda f: f.map)


def find_isomorphism(m: FiniteASet, n: FiniteASet) -> ASetMorphism | None:
    if m.size != n.size or m.monoid != n.monoid:
        return None
    for f in iter_morphisms(m, n, injective=True):
        return f
    return None


def find_section(j: ASetMorphism) -> ASetMorphism | None:
    """A morphism ``s`` with ``j . s = id``, if one exists."""
    fibers = {}
    for x, y in enumerate(j.map):
        fibers.setdefault(y, []).append(x)
    for s in iter_morphisms(j.target, j.source, fibers=lambda g: fibers.get(g, [])):
        if all(j.map[s.map[y]] == y for y in range(j.target.size)):
            return s
    return None


# --------------------------------------------------------------------------
# congruences and quotients


@dataclass(frozen=True)
class Congruence:
    """Partition of a carrier compatible with the action; block 0 holds ``*``."""

    blocks: tuple[tuple[int, ...], ...]

    def class_map(self, size: int) -> tuple[int, ...]:
        out = [0] * size
        for b, block in enumerate(self.blocks):
            for x in block:
                out[x] = b
        return tuple(out)


def _canonical_blocks(groups) -> tuple[tuple[int, ...], ...]:
    blocks = sorted(tuple(sorted(int(x) for x in g)) for g in groups)
    return tuple(blocks)  # block containing 0 sorts first


def congruence_closure(m: FiniteASet, pairs, right_action=None) -> Congruence:
    """Smallest congruence containing ``pairs``.

    Union-find over the carrier; every merge of ``x, y`` queues the pairs
    ``(a.x, a.y)`` (and ``(x.c, y.c)`` for an optional right action table)
    until nothing new is merged.
    """
    ds = DisjointSet(range(m.size))
    tables = [m.action]
    if right_action is not None:
        tables.append(right_action)
    work = [(int(x), int(y)) for x, y in pairs]
    while work:
        x, y = work.pop()
        if ds.connected(x, y):
            continue
        ds.merge(x, y)
        for t in tables:
            for row in t:
                ax, ay = int(row[x]), int(row[y])
                if not ds.connected(ax, ay):
                    work.append((ax, ay))
    return Congruence(_canonical_blocks(ds.subsets()))


def is_congruence(m: FiniteASet, blocks) -> bool:
    """Whether the partition ``blocks`` of the carrier is A-compatible."""
    cls = np.array(Congruence(_canonical_blocks(blocks)).class_map(m.size))
    images = cls[m.action]  # images[a, x] = class of a.x
    for block in blocks:
        block = list(block)
        if (images[:, block] != images[:, block[:1]]).any():
            return False
    return True


def quotient(m: FiniteASet, cong: Congruence, labels=None) -> tuple[FiniteASet, ASetMorphism]:
    """``M / ~`` with its quotient morphism; classes labelled by representatives."""
    cls = np.array(cong.class_map(m.size))
    reps = [block[0] for block in cong.blocks]
    if labels is None:
        labels = [BASE] + [m.carrier[r] for r in reps[1:]]
    table = cls[m.action[:, reps]]
    q = FiniteASet(m.monoid, tuple(labels), table)
    return q, ASetMorphism(m, q, tuple(int(c) for c in cls))


def sub_aset(m: FiniteASet, points) -> tuple[FiniteASet, ASetMorphism]:
    """Sub-A-set on a closed set of points (the basepoint is added)."""
    pts = sorted(set(int(p) for p in points) | {0})
    pos = {p: i for i, p in enumerate(pts)}
    try:
        table = np.vectorize(pos.__getitem__, otypes=[np.int64])(m.action[:, pts])
    except KeyError:
        raise StructuralError("point set is not closed under the action") from None
    sub = FiniteASet(m.monoid, tuple(m.carrier[p] for p in pts), table)
    return sub, ASetMorphism(sub, m, tuple(pts))


# --------------------------------------------------------------------------
# limits and colimits


class Limit(NamedTuple):
    obj: FiniteASet
    legs: tuple[ASetMorphism, ...]


class KernelCokernel(NamedTuple):
    kernel: FiniteASet
    inclusion: ASetMorphism
    cokernel: FiniteASet
    projection: ASetMorphism


def equalizer(f: ASetMorphism, g: ASetMorphism) -> Limit:
    if f.source is not g.source or f.target is not g.target:
        raise StructuralError("equalizer needs parallel morphisms")
    pts = [m for m in range(f.source.size) if f.map[m] == g.map[m]]
    sub, inc = sub_aset(f.source, pts)
    return Limit(sub, (inc,))


def coequalizer(f: ASetMorphism, g: ASetMorphism) -> Limit:
    """Quotient of the target by the congruence generated by ``f(m) ~ g(m)``."""
    if f.source is not g.source or f.target is not g.target:
        raise StructuralError("coequalizer needs parallel morphisms")
    pairs = [(x, y) for x, y in zip(f.map, g.map) if x != y]
    q, proj = quotient(f.target, congruence_closure(f.target, pairs))
    return Limit(q, (proj,))


def kernel_cokernel(f: ASetMorphism) -> KernelCokernel:
    ker, inc = equalizer(f, zero_morphism(f.source, f.target))
    coker, proj = coequalizer(f, zero_morphism(f.source, f.target))
    return KernelCokernel(ker, inc[0], coker, proj[0])


def product(objs) -> Limit:
    """Cartesian product with the diagonal action; basepoint first."""
    objs = list(objs)
    if not objs:
        raise StructuralError("product of an empty family")
    a = objs[0].monoid
    if any(o.monoid != a for o in objs):
        raise StructuralError("A-sets over different monoids")
    if len(objs) == 1:
        return Limit(objs[0], (identity(objs[0]),))
    tuples = list(itertools.product(*[range(o.size) for o in objs]))  # (0, ..., 0) first
    pos = {t: i for i, t in enumerate(tuples)}
    labels = [BASE] + ["(" + ",".join(o.carrier[i] for o, i in zip(objs, t)) + ")" for t in tuples[1:]]
    table = np.empty((a.size, len(tuples)), dtype=np.int64)
    for x in range(a.size):
        for k, t in enumerate(tuples):
            table[x, k] = pos[tuple(int(o.action[x, i]) for o, i in zip(objs, t))]
    obj = FiniteASet(a, tuple(labels), table)
    legs = tuple(ASetMorphism(obj, o, tuple(t[c] for t in tuples)) for c, o in enumerate(objs))
    return Limit(obj, legs)


def coproduct(objs) -> Limit:
    """Wedge: basepoints identified; legs are the summand inclusions."""
    objs = list(objs)
    if not objs:
        raise StructuralError("coproduct of an empty family")
    a = objs[0].monoid
    if any(o.monoid != a for o in objs):
        raise StructuralError("A-sets over different monoids")
    if len(objs) == 1:
        return Limit(objs[0], (identity(objs[0]),))
    labels = [BASE]
    offsets = []
    for c, o in enumerate(objs):
        offsets.append(len(labels) - 1)
        labels.extend(f"{c}:{lbl}" for lbl in o.carrier[1:])
    table = np.zeros((a.size, len(labels)), dtype=np.int64)
    for c, o in enumerate(objs):
        off = offsets[c]
        for m in o.points():
            img = o.action[:, m]
            table[:, off + m] = np.where(img == 0, 0, img + off)
    obj = FiniteASet(a, tuple(labels), table)
    legs = tuple(
        ASetMorphism(o, obj, (0,) + tuple(offsets[c] + m for m in o.points())) for c, o in enumerate(objs)
    )
    return Limit(obj, legs)


def product_coproduct(objs) -> tuple[Limit, Limit]:
    objs = list(objs)
    return product(objs), coproduct(objs)


def pullback(f: ASetMorphism, g: ASetMorphism) -> Limit:
    """Fibre product ``{(k, n) : f(k) = g(n)}`` with its two projections."""
    if f.target is not g.target:
        raise StructuralError("pullback needs a cospan with a common target")
    k_set, n_set = f.source, g.source
    pairs = [(k, n) for k in range(k_set.size) for n in range(n_set.size) if f.map[k] == g.map[n]]
    pos = {p: i for i, p in enumerate(pairs)}  # (0, 0) first
    a = k_set.monoid
    labels = [BASE] + [f"({k_set.carrier[k]},{n_set.carrier[n]})" for k, n in pairs[1:]]
    table = np.empty((a.size, len(pairs)), dtype=np.int64)
    for x in range(a.size):
        for i, (k, n) in enumerate(pairs):
            table[x, i] = pos[(k_set.act(x, k), n_set.act(x, n))]
    obj = FiniteASet(a, tuple(labels), table)
    return Limit(
        obj,
        (
            ASetMorphism(obj, k_set, tuple(k for k, _ in pairs)),
            ASetMorphism(obj, n_set, tuple(n for _, n in pairs)),
        ),
    )


# --------------------------------------------------------------------------
# projectivity and exactness


@dataclass(frozen=True)
class ProjectivityVerdict:
    projective: bool
    generators: tuple[int, ...]
    cover: ASetMorphism  # free A-set onto P
    section: ASetMorphism | None  # P -> free cover with cover . section = id

    def __bool__(self):
        return self.projective

    def describe(self) -> str:
        if self.projective:
            return "retract of a free A-set (section of the free cover found)"
        return "identity of P does not lift along the free cover"


def free_cover(p: FiniteASet) -> tuple[FreeASet, ASetMorphism]:
    gens = generating_set(p)
    free = free_aset(p.monoid, [f"g{i}" for i in range(len(gens))])
    return free, extend_from_generators(free, p, gens)


def is_projective(p: FiniteASet) -> ProjectivityVerdict:
    """Projective iff the identity lifts along the free cover on a minimal generating set."""
    _, cover = free_cover(p)
    section = find_section(cover)
    return ProjectivityVerdict(section is not None, generating_set(p), cover, section)


@dataclass(frozen=True)
class ExactnessVerdict:
    status: str  # "exact" | "normal-failure" | "mismatch"
    where: str | None = None  # "i", "j", "M", "N" or "K"
    detail: str = ""
    split: bool | None = None
    section: ASetMorphism | None = None
    k_projective: bool | None = None

    @property
    def exact(self) -> bool:
        return self.status == "exact"

    def __bool__(self):
        return self.exact


def is_admissible_exact(i: ASetMorphism, j: ASetMorphism, find_split: bool = True) -> ExactnessVerdict:
    """Check ``0 -> M -i-> N -j-> K -> 0`` for admissible exactness."""
    if i.target is not j.source:
        raise StructuralError("sequence is not composable: target of i is not the source of j")
    if not i.is_normal():
        return ExactnessVerdict("normal-failure", "i", "i is not injective off its kernel")
    if not j.is_normal():
        return ExactnessVerdict("normal-failure", "j", "j is not injective off its kernel")
    if i.kernel_points() != [0]:
        return ExactnessVerdict("mismatch", "M", "kernel of i is larger than the basepoint")
    if set(i.map) != set(j.kernel_points()):
        return ExactnessVerdict("mismatch", "N", "image of i differs from the kernel of j")
    if not j.is_onto():
        return ExactnessVerdict("mismatch", "K", "j is not onto")
    if not find_split:
        return ExactnessVerdict("exact")
    section = find_section(j)
    return ExactnessVerdict(
        "exact",
        split=section is not None,
        section=section,
        k_projective=is_projective(j.target).projective,
    )


def is_admissible_mono(f: ASetMorphism) -> bool:
    """``f`` fits as ``i`` into an admissible sequence of projective A-sets."""
    kc = kernel_cokernel(f)
    verdict = is_admissible_exact(f, kc.projection, find_split=False)
    return bool(verdict) and all(is_projective(x).projective for x in (f.source, f.target, kc.cokernel))


def is_admissible_epi(f: ASetMorphism) -> bool:
    """``f`` fits as ``j`` into an admissible sequence of projective A-sets."""
    kc = kernel_cokernel(f)
    verdict = is_admissible_exact(kc.inclusion, f, find_split=False)
    return bool(verdict) and all(is_projective(x).projective for x in (kc.kernel, f.source, f.target))


# --------------------------------------------------------------------------
# bisets, tensor and Hom


@dataclass(frozen=True, eq=False)
class Biset:
    """An (A, B)-biset: left A-action and commuting right B-action."""

    left: PointedMonoid
    right: PointedMonoid
    carrier: tuple[str, ...]
    left_action: np.ndarray
    right_action: np.ndarray  # right_action[b, m] = m.b

    def __post_init__(self):
        carrier = tuple(str(c) for c in self.carrier)
        object.__setattr__(self, "carrier", carrier)
        la = _action_table(self.left_action, self.left.size, len(carrier), "biset (left)")
        ra = _action_table(self.right_action, self.right.size, len(carrier), "biset (right)")
        object.__setattr__(self, "left_action", la)
        object.__setattr__(self, "right_action", ra)
        problems = action_violations(self.left, la) + [
            "right: " + p for p in action_violations(opposite(self.right), ra)
        ]
        # a.(m.b) == (a.m).b
        if not np.array_equal(_commute_lhs(la, ra), _commute_rhs(la, ra)):
            problems.append("left and right actions do not commute")
        if problems:
            raise InvalidStructureError(f"not a biset: {problems[0]}", problems)

    @property
    def size(self) -> int:
        return len(self.carrier)

    def left_set(self) -> FiniteASet:
        return FiniteASet(self.left, self.carrier, self.left_action)

    def right_set(self) -> FiniteASet:
        """The right action as a left ``B^op``-set."""
        return FiniteASet(opposite(self.right), self.carrier, self.right_action)

    def as_left_aset(self, enveloping: PointedMonoid | None = None) -> FiniteASet:
        """Left set over ``A ^ B^op`` with ``(a, b).m = a.m.b``."""
        env = enveloping or smash(self.left, opposite(self.right))
        table = np.zeros((env.size, self.size), dtype=np.int64)
        pairs = [(x, y) for x in self.left.nonzero() for y in self.right.nonzero()]
        table[env.zero] = 0
        for k, (x, y) in enumerate(pairs):
            table[k + 1] = self.right_action[y][self.left_action[x]]
        return FiniteASet(env, self.carrier, table)

    @classmethod
    def from_left(cls, m: FiniteASet) -> Biset:
        """An A-set viewed as an (A, F1)-biset."""
        one = f1()
        ra = np.zeros((2, m.size), dtype=np.int64)
        ra[one.one] = np.arange(m.size)
        return cls(m.monoid, one, m.carrier, m.action, ra)

    @classmethod
    def from_right(cls, monoid: PointedMonoid, carrier, right_action) -> Biset:
        """A right B-set viewed as an (F1, B)-biset."""
        one = f1()
        la = np.zeros((2, len(carrier)), dtype=np.int64)
        la[one.one] = np.arange(len(carrier))
        return cls(one, monoid, tuple(carrier), la, right_action)

    @classmethod
    def regular(cls, a: PointedMonoid) -> Biset:
        """``A`` as an (A, A)-biset; the zero is the basepoint."""
        order = [a.zero] + a.nonzero()
        pos = {x: i for i, x in enumerate(order)}
        carrier = tuple(BASE if x == a.zero else a.elements[x] for x in order)
        la = np.array([[pos[a.mul(x, m)] for m in order] for x in range(a.size)], dtype=np.int64)
        ra = np.array([[pos[a.mul(m, y)] for m in order] for y in range(a.size)], dtype=np.int64)
        return cls(a, a, carrier, la, ra)

    @classmethod
    def smash_of(cls, x: FiniteASet, y: FiniteASet) -> Biset:
        """``X ^ Y`` for a left A-set ``X`` and a left ``B^op``-set ``Y`` (a right B-set).

        Both actions are componentwise, so they commute.
        """
        pairs = [(p, q) for p in range(1, x.size) for q in range(1, y.size)]
        pos = {pq: k + 1 for k, pq in enumerate(pairs)}

        def idx(p, q):
            return 0 if p == 0 or q == 0 else pos[(p, q)]

        la = np.zeros((x.monoid.size, len(pairs) + 1), dtype=np.int64)
        ra = np.zeros((y.monoid.size, len(pairs) + 1), dtype=np.int64)
        for (p, q), k in pos.items():
            for a in range(x.monoid.size):
                la[a, k] = idx(x.act(a, p), q)
            for b in range(y.monoid.size):
                ra[b, k] = idx(p, y.act(b, q))
        labels = (BASE,) + tuple(f"({x.carrier[p]},{y.carrier[q]})" for p, q in pairs)
        return cls(x.monoid, opposite(y.monoid), labels, la, ra)


def _commute_lhs(la, ra):
    # lhs[a, b, m] = a.(m.b)
    return la[:, None, :][np.arange(la.shape[0])[:, None, None], 0, ra[None, :, :]]


def _commute_rhs(la, ra):
    # rhs[a, b, m] = (a.m).b
    return ra[None, :, :][0, np.arange(ra.shape[0])[None, :, None], la[:, None, :]]


def as_biset(x, side: str = "left") -> Biset:
    if isinstance(x, Biset):
        return x
    if isinstance(x, FiniteASet):
        return Biset.from_left(x)
    raise StructuralError(f"expected a Biset or FiniteASet, got {type(x).__name__}")


def tensor(m: Biset, n, over: PointedMonoid | None = None) -> Biset:
    """``M (x)_B N`` for an (A, B)-biset ``M`` and a (B, C)-biset ``N``.

    ``N`` may be a plain left B-set.  The carrier is the smash ``M ^ N``
    modulo the congruence generated by ``(m.b, n) ~ (m, b.n)``.
    """
    if not isinstance(m, Biset):
        raise StructuralError("left tensor factor must be declared as a biset (right action over B)")
    n = as_biset(n)
    b = m.right
    if over is not None and over != b:
        raise StructuralError("tensor base monoid does not match the right action of M")
    if n.left != b:
        raise StructuralError("right monoid of M differs from left monoid of N")
    mp = list(range(1, m.size))
    npts = list(range(1, n.size))
    pairs = [(x, y) for x in mp for y in npts]
    pos = {p: i + 1 for i, p in enumerate(pairs)}

    def idx(x, y):
        return 0 if x == 0 or y == 0 else pos[(x, y)]

    size = len(pairs) + 1
    left = np.zeros((m.left.size, size), dtype=np.int64)
    right = np.zeros((n.right.size, size), dtype=np.int64)
    for (x, y), k in pos.items():
        for a in range(m.left.size):
            left[a, k] = idx(int(m.left_action[a, x]), y)
        for c in range(n.right.size):
            right[c, k] = idx(x, int(n.right_action[c, y]))
    labels = [BASE] + [f"{m.carrier[x]}(x){n.carrier[y]}" for x, y in pairs]
    smash_left = FiniteASet(m.left, tuple(labels), left)
    gen = []
    for bb in range(b.size):
        for x in range(m.size):
            for y in range(n.size):
                p = idx(int(m.right_action[bb, x]), y)
                q = idx(x, int(n.left_action[bb, y]))
                if p != q:
                    gen.append((p, q))
    cong = congruence_closure(smash_left, gen, right_action=right)
    cls = np.array(cong.class_map(size))
    reps = [blk[0] for blk in cong.blocks]
    q_labels = [BASE] + [labels[r] for r in reps[1:]]
    return Biset(m.left, n.right, tuple(q_labels), cls[left[:, reps]], cls[right[:, reps]])


def biset_homs(m: Biset, n: Biset) -> list[tuple[int, ...]]:
    """Maps of bisets ``m -> n`` (equivariant on both sides)."""
    if m.left != n.left or m.right != n.right:
        raise StructuralError("bisets over different monoid pairs")
    env = smash(m.left, opposite(m.right))
    return [f.map for f in iter_morphisms(m.as_left_aset(env), n.as_left_aset(env))]


def hom_biset(m: Biset, p: Biset) -> Biset:
    """``Hom_A(M, P)`` as a (B, C)-biset for an (A, B)-biset M and (A, C)-biset P.

    ``(b.f)(x) = f(x.b)`` and ``(f.c)(x) = f(x).c``; the zero map is the
    basepoint.
    """
    if m.left != p.left:
        raise StructuralError("Hom_A needs both bisets over the same left monoid")
    maps = sorted(f.map for f in iter_morphisms(m.left_set(), p.left_set()))
    zero = (0,) * m.size
    maps.remove(zero)
    maps = [zero] + maps
    pos = {f: i for i, f in enumerate(maps)}
    bl = np.empty((m.right.size, len(maps)), dtype=np.int64)
    cr = np.empty((p.right.size, len(maps)), dtype=np.int64)
    for k, f in enumerate(maps):
        farr = np.array(f)
        for b in range(m.right.size):
            bl[b, k] = pos[tuple(int(v) for v in farr[m.right_action[b]])]
        for c in range(p.right.size):
            cr[c, k] = pos[tuple(int(v) for v in p.right_action[c][farr])]
    labels = [BASE] + ["[" + ",".join(p.carrier[v] for v in f) + "]" for f in maps[1:]]
    return Biset(m.right, p.right, tuple(labels), bl, cr)


def find_biset_isomorphism(m: Biset, n: Biset) -> tuple[int, ...] | None:
    if m.size != n.size or m.left != n.left or m.right != n.right:
        return None
    env = smash(m.left, opposite(m.right))
    for f in iter_morphisms(m.as_left_aset(env), n.as_left_aset(env), injective=True):
        return f.map
    return None


def units_act_freely(m: FiniteASet) -> bool:
    """Whether nontrivial units fix no non-base point (a necessary condition for freeness)."""
    u = units(m.monoid)
    for x in u.parent:
        if x == m.monoid.one:
            continue
        if any(m.act(x, p) == p for p in m.points()):
            return False
    return True


def find_basis(m: FiniteASet) -> tuple[int, ...] | None:
    """A free basis of ``m`` or ``None`` when ``m`` is not free.

    A basis must generate, so it can be read off a minimal generating set;
    ``m`` is free on it iff the induced map from the wedge is bijective.
    """
    gens = generating_set(m)
    free = free_aset(m.monoid, [f"b{i}" for i in range(len(gens))])
    f = extend_from_generators(free, m, gens)
    return gens if f.is_iso() else None
