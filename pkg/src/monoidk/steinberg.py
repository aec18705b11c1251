"""The central extensions M(Z/d) and the split group E(G*).

``M(Z/d)`` has a central ``alpha`` and generators ``X_2, X_3, ...`` with
``[X_i, X_j] = alpha`` for ``i != j`` and ``X_i^d = 1``.  Elements are kept in
normal form ``(r, e)``: ``alpha^r X_2^{e_2} X_3^{e_3} ...`` with increasing
indices.  Products follow the 2-cocycle

    (r, e)(s, f) = (r + s + c(e, f), e + f),   c(e, f) = sum_{k > l} e_k f_l mod 2,

which needs exponent parities to be well defined, i.e. ``d`` even or zero.
For odd ``d`` the relations force ``alpha = 1`` and the bit is dropped.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from . import kernels
from .abgroup import FgAbelianGroup
from .errors import StructuralError, check_size
from .matrix import MonomialGroup, RowMonomicMatrix, in_elementary, mat_mul
from .monoid import PointedMonoid

# --------------------------------------------------------------------------
# M(Z/d)


def alpha_order(d: int) -> int:
    """Order of ``alpha`` in ``M(Z/d)``: 2 for even ``d`` (including 0), else 1."""
    if d < 0:
        raise StructuralError("modulus must be >= 0")
    return 2 if d % 2 == 0 else 1


def _check_modulus(d: int) -> int:
    d = int(d)
    if d < 0:
        raise StructuralError("modulus must be >= 0")
    return d


@dataclass(frozen=True)
class MGroupElement:
    """``alpha^bit * prod X_i^{e_i}``; ``exps`` lists ``(i, e_i)`` with ``e_i != 0``, increasing ``i``."""

    modulus: int
    bit: int = 0
    exps: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        d = _check_modulus(self.modulus)
        clean = {}
        for i, e in self.exps:
            i, e = int(i), int(e)
            if i < 2:
                raise StructuralError("generator indices start at 2")
            clean[i] = clean.get(i, 0) + e
        if d:
            clean = {i: e % d for i, e in clean.items()}
        exps = tuple(sorted((i, e) for i, e in clean.items() if e))
        object.__setattr__(self, "modulus", d)
        object.__setattr__(self, "exps", exps)
        object.__setattr__(self, "bit", int(self.bit) % 2 if d % 2 == 0 else 0)

    @property
    def vector(self) -> dict[int, int]:
        return dict(self.exps)

    def exponent(self, i: int) -> int:
        return self.vector.get(i, 0)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.exps)

    @property
    def is_identity(self) -> bool:
        return self.bit == 0 and not self.exps

    def dense(self, indices) -> list[int]:
        v = self.vector
        return [v.get(i, 0) for i in indices]

    def standard_form(self, window=None) -> str:
        """``a X2^e2 X3^e3 ...`` over ``window`` (default: the support); ``1`` for the identity."""
        if self.is_identity:
            return "1"
        idx = sorted(set(window or ()) | set(self.support))
        parts = ["a"] if self.bit else []
        parts += [f"X{i}^{self.exponent(i)}" for i in idx]
        return " ".join(parts)

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "alpha": self.bit,
            "exponents": {str(i): e for i, e in self.exps},
        }


def m_identity(d: int) -> MGroupElement:
    return MGroupElement(d)


def alpha(d: int) -> MGroupElement:
    return MGroupElement(d, 1)


def gen(d: int, i: int, power: int = 1) -> MGroupElement:
    """``X_i^power``."""
    return MGroupElement(d, 0, ((i, power),))


def cocycle(e: dict[int, int], f: dict[int, int]) -> int:
    """``sum_{k > l} e_k f_l mod 2`` on exponent parities."""
    c = 0
    for k, ek in e.items():
        if ek & 1:
            c += sum(1 for l, fl in f.items() if l < k and fl & 1)
    return c & 1


def m_mul(x: MGroupElement, y: MGroupElement) -> MGroupElement:
    if x.modulus != y.modulus:
        raise StructuralError(f"moduli differ: {x.modulus} vs {y.modulus}")
    d = x.modulus
    ex, ey = x.vector, y.vector
    bit = 0 if d % 2 else (x.bit + y.bit + cocycle(ex, ey)) & 1
    out = dict(ex)
    for i, e in ey.items():
        out[i] = out.get(i, 0) + e
    return MGroupElement(d, bit, tuple(out.items()))


def m_inv(x: MGroupElement) -> MGroupElement:
    d = x.modulus
    neg = {i: (-e) % d if d else -e for i, e in x.exps}
    bit = 0 if d % 2 else (x.bit + cocycle(x.vector, neg)) & 1
    return MGroupElement(d, bit, tuple(neg.items()))


def m_pow(x: MGroupElement, k: int) -> MGroupElement:
    if k < 0:
        return m_pow(m_inv(x), -k)
    out = m_identity(x.modulus)
    base = x
    while k:
        if k & 1:
            out = m_mul(out, base)
        base = m_mul(base, base)
        k >>= 1
    return out


def m_prod(d: int, factors) -> MGroupElement:
    out = m_identity(d)
    for f in factors:
        out = m_mul(out, f)
    return out


def m_commutator(x: MGroupElement, y: MGroupElement) -> MGroupElement:
    """``x y x^-1 y^-1``."""
    return m_mul(m_mul(x, y), m_inv(m_mul(y, x)))


def from_standard(d: int, bit: int, vector) -> MGroupElement:
    """Evaluate ``alpha^bit X_2^{v_2} X_3^{v_3} ...`` by multiplying generator powers."""
    out = alpha(d) if bit else m_identity(d)
    for i, e in sorted(dict(vector).items()):
        out = m_mul(out, m_pow(gen(d, i), e))
    return out


_TOKEN = re.compile(r"^(a|alpha|X(\d+))(?:\^(-?\d+))?$")


def parse_word(d: int, word: str) -> list[MGroupElement]:
    """Tokens ``a``, ``a^k``, ``Xi``, ``Xi^k`` separated by spaces."""
    out = []
    for tok in word.split():
        m = _TOKEN.match(tok)
        if not m:
            raise StructuralError(f"cannot parse word token {tok!r}")
        power = int(m.group(3)) if m.group(3) is not None else 1
        if m.group(2) is None:
            out.append(m_pow(alpha(d), power))
        else:
            i = int(m.group(2))
            if i < 2:
                raise StructuralError(f"generator index must be >= 2 in {tok!r}")
            out.append(gen(d, i, power))
    return out


def word_window(word: str) -> list[int]:
    """Generator indices ``2..max`` mentioned in ``word``."""
    idx = [int(x) for x in re.findall(r"X(\d+)", word)]
    return list(range(2, max(idx) + 1)) if idx else []


def normal_form(d: int, word: str) -> MGroupElement:
    return m_prod(d, parse_word(d, word))


# batched form for audits ------------------------------------------------------


def to_arrays(elems, window: int):
    """``(bits, vectors)`` with columns for indices ``2..window+1``."""
    bits = np.array([x.bit for x in elems], dtype=np.int64)
    vecs = np.array([x.dense(range(2, window + 2)) for x in elems], dtype=np.int64).reshape(len(elems), window)
    return bits, vecs


def from_arrays(d: int, bits, vecs) -> list[MGroupElement]:
    return [
        MGroupElement(d, int(b), tuple((i + 2, int(e)) for i, e in enumerate(v) if e))
        for b, v in zip(bits, vecs)
    ]


def random_elements(d: int, count: int, window: int, rng: np.random.Generator, spread: int = 5):
    """Random ``(bits, vectors)`` arrays in normal form."""
    bits = rng.integers(0, 2, size=count) if d % 2 == 0 else np.zeros(count, dtype=np.int64)
    if d:
        vecs = rng.integers(0, d, size=(count, window))
    else:
        vecs = rng.integers(-spread, spread + 1, size=(count, window))
    return bits.astype(np.int64), vecs.astype(np.int64)


def batch_associativity_failures(d: int, count: int, window: int, rng) -> int:
    """Count triples with ``(xy)z != x(yz)`` among ``count`` random triples."""
    xb, xv = random_elements(d, count, window, rng)
    yb, yv = random_elements(d, count, window, rng)
    zb, zv = random_elements(d, count, window, rng)
    ab, av = kernels.cocycle_product(xb, xv, yb, yv, d)
    lb, lv = kernels.cocycle_product(ab, av, zb, zv, d)
    bb, bv = kernels.cocycle_product(yb, yv, zb, zv, d)
    rb, rv = kernels.cocycle_product(xb, xv, bb, bv, d)
    bad = (lb != rb) | (lv != rv).any(axis=1)
    return int(bad.sum())


# --------------------------------------------------------------------------
# finitely supported permutations


@dataclass(frozen=True)
class Perm:
    """Permutation of ``{1, 2, ...}`` fixing everything above ``len(images)``.

    ``images[k] = sigma(k + 1)``; ``parity`` is the certificate (0 even).
    """

    images: tuple[int, ...]
    parity: int = -1

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise StructuralError(f"{imgs} is not a permutation of 1..{len(imgs)}")
        # trim fixed points at the top so equal permutations compare equal
        while imgs and imgs[-1] == len(imgs):
            imgs = imgs[:-1]
        object.__setattr__(self, "images", imgs)
        object.__setattr__(self, "parity", _parity(imgs))

    @classmethod
    def identity(cls) -> Perm:
        return cls(())

    @classmethod
    def from_cycles(cls, cycles, size: int | None = None) -> Perm:
        top = max([size or 0] + [max(c) for c in cycles if c])
        imgs = list(range(1, top + 1))
        for c in cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                imgs[a - 1] = b
        return cls(tuple(imgs))

    def __call__(self, i: int) -> int:
        return self.images[i - 1] if 1 <= i <= len(self.images) else i

    @property
    def degree(self) -> int:
        return len(self.images)

    @property
    def is_even(self) -> bool:
        return self.parity == 0

    def compose(self, other: Perm) -> Perm:
        """``self . other`` (apply ``other`` first)."""
        n = max(self.degree, other.degree)
        return Perm(tuple(self(other(i)) for i in range(1, n + 1)))

    def inverse(self) -> Perm:
        inv = [0] * self.degree
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Perm(tuple(inv))

    def padded(self, n: int) -> tuple[int, ...]:
        return tuple(self(i) for i in range(1, n + 1))


def _parity(imgs) -> int:
    seen = [False] * len(imgs)
    swaps = 0
    for start in range(len(imgs)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = imgs[k] - 1
            length += 1
        swaps += length - 1
    return swaps & 1


def random_even_perm(rng: np.random.Generator, n: int) -> Perm:
    while True:
        p = Perm(tuple(int(x) + 1 for x in rng.permutation(n)))
        if p.is_even:
            return p


def even_perms(n: int) -> list[Perm]:
    return [p for p in (Perm(tuple(x + 1 for x in q)) for q in itertools.permutations(range(n))) if p.is_even]


# --------------------------------------------------------------------------
# the action on M(Z/d)


def sigma_generator_image(sigma: Perm, i: int, d: int) -> MGroupElement:
    """Image of ``X_i`` under the generator rule, taken verbatim."""
    s1 = sigma(1)
    si = sigma(i)
    if s1 == 1:
        return gen(d, si)
    if si == 1:
        return gen(d, s1, -1)
    return m_mul(gen(d, s1, -1), gen(d, si))


def sigma_act(sigma: Perm, x: MGroupElement) -> MGroupElement:
    """Apply ``sigma`` to the normal form ``alpha^r prod X_i^{e_i}`` factor by factor."""
    if not sigma.is_even:
        raise StructuralError("the action is defined for even permutations only")
    d = x.modulus
    out = alpha(d) if x.bit else m_identity(d)
    for i, e in x.exps:
        out = m_mul(out, m_pow(sigma_generator_image(sigma, i, d), e))
    return out


def projection(x: MGroupElement) -> dict[int, int]:
    """``M(Z/d) -> (+) Z/d``, ``(r, e) -> e``."""
    return x.vector


def lambda_act(sigma: Perm, vector: dict[int, int], d: int) -> dict[int, int]:
    """Coordinate action on ``(+)_{i >= 2} Z/d`` through the full vector.

    The vector ``v`` stands for ``Diag(-sum v, v_2, v_3, ...)``; coordinate
    ``j`` moves to ``sigma(j)`` and coordinate 1 is dropped again.
    """
    full = {1: -sum(vector.values())}
    full.update(vector)
    moved = {sigma(j): e for j, e in full.items()}
    out = {i: e for i, e in moved.items() if i != 1}
    if d:
        out = {i: e % d for i, e in out.items()}
    return {i: e for i, e in out.items() if e}


# --------------------------------------------------------------------------
# E(G*) as a split extension


def _abelian_monoid(orders) -> tuple[PointedMonoid, list[tuple[int, ...]], dict]:
    elems = list(itertools.product(*[range(n) for n in orders]))
    pos = {e: k + 1 for k, e in enumerate(elems)}
    n = len(elems) + 1
    table = np.zeros((n, n), dtype=np.int64)
    for x in elems:
        for y in elems:
            table[pos[x], pos[y]] = pos[tuple((a + b) % m for a, b, m in zip(x, y, orders))]
    labels = ("0",) + tuple("(" + ",".join(map(str, e)) + ")" for e in elems)
    one = pos[tuple(0 for _ in orders)]
    return PointedMonoid(labels, table, 0, one), elems, pos


@dataclass(frozen=True)
class ESemidirectElement:
    """``u(vector) s(perm)``: ``vector[k]`` is the coordinate ``k + 2`` as a residue tuple."""

    vector: tuple[tuple[int, ...], ...]
    perm: Perm


class EGroup:
    """``E_n(G*) = (+)_{i=2}^n G x| A_n`` with the maps ``u``, ``t`` and ``s``.

    Matrices follow the row convention ``D(a) sigma`` with ``a_i`` at
    ``(i, sigma(i))``, so ``s(sigma) s(tau) = s(tau . sigma)`` and
    conjugating ``u(v)`` by ``s(sigma)`` moves coordinate ``sigma(j)`` to ``j``.
    The coordinate action :func:`lambda_act` is therefore conjugation by
    ``s(sigma)^-1``.
    """

    def __init__(self, g: FgAbelianGroup, n: int):
        if g.free_rank:
            raise StructuralError("E(G*) is realized for finite G only")
        if n < 3:
            raise StructuralError("truncation n must be >= 3")
        self.g = g
        self.n = n
        self.orders = tuple(g.torsion)
        size = (g.order or 1) ** (n - 1) * _half_factorial(n)
        check_size(size, f"elements of E_{n}(G*)")
        self.monoid, self.elems, self._pos = _abelian_monoid(self.orders)
        self.gl = MonomialGroup(self.monoid, n)
        self.zero_vec = tuple(0 for _ in self.orders)

    # residue arithmetic ------------------------------------------------
    def add(self, x, y):
        return tuple((a + b) % m for a, b, m in zip(x, y, self.orders))

    def neg(self, x):
        return tuple((-a) % m for a, m in zip(x, self.orders))

    def total(self, vector):
        out = self.zero_vec
        for v in vector:
            out = self.add(out, v)
        return out

    # the maps u, t, s ----------------------------------------------------
    def u(self, vector) -> RowMonomicMatrix:
        vector = tuple(tuple(v) for v in vector)
        if len(vector) != self.n - 1:
            raise StructuralError(f"vector must have {self.n - 1} coordinates")
        diag = [self.neg(self.total(vector))] + list(vector)
        return RowMonomicMatrix(self.n, self.n, tuple((i, self._pos[x]) for i, x in enumerate(diag)))

    def t(self, m: RowMonomicMatrix) -> Perm:
        return Perm(tuple(e[0] + 1 for e in m.entries))

    def s(self, sigma: Perm) -> RowMonomicMatrix:
        if sigma.degree > self.n:
            raise StructuralError("permutation moves points beyond the truncation")
        one = self.monoid.one
        return RowMonomicMatrix(self.n, self.n, tuple((sigma(i) - 1, one) for i in range(1, self.n + 1)))

    def matrix(self, x: ESemidirectElement) -> RowMonomicMatrix:
        return mat_mul(self.u(x.vector), self.s(x.perm), self.monoid)

    def from_matrix(self, m: RowMonomicMatrix) -> ESemidirectElement:
        """Split ``m = u(v) s(t(m))``."""
        labels = [self.elems[e[1] - 1] for e in m.entries]
        return ESemidirectElement(tuple(labels[1:]), self.t(m))

    # semidirect structure ------------------------------------------------
    def lam(self, sigma: Perm, vector):
        """Coordinates of ``s(sigma)^-1 u(v) s(sigma)``."""
        full = [self.neg(self.total(vector))] + list(vector)
        moved = [None] * self.n
        for j in range(1, self.n + 1):
            moved[sigma(j) - 1] = full[j - 1]
        return tuple(moved[1:])

    def conj_vector(self, sigma: Perm, vector):
        """Coordinates of ``s(sigma) u(v) s(sigma)^-1`` (the inverse action)."""
        return self.lam(sigma.inverse(), vector)

    def mul(self, x: ESemidirectElement, y: ESemidirectElement) -> ESemidirectElement:
        # u(v) s(a) u(w) s(b) = u(v + s(a) w s(a)^-1) s(b . a)
        w = self.conj_vector(x.perm, y.vector)
        vec = tuple(self.add(a, b) for a, b in zip(x.vector, w))
        return ESemidirectElement(vec, y.perm.compose(x.perm))

    def elements(self) -> list[ESemidirectElement]:
        vecs = itertools.product(self.elems, repeat=self.n - 1)
        perms = even_perms(self.n)
        return [ESemidirectElement(tuple(v), p) for v in vecs for p in perms]

    def order(self) -> int:
        return len(self.elems) ** (self.n - 1) * _half_factorial(self.n)

    def verify(self, samples: int = 200, seed: int = 0) -> dict:
        """Split-exactness checks at the matrix level."""
        rng = np.random.default_rng(seed)
        elems = self.elements()
        codes = {self.gl.from_matrix(self.matrix(x)) for x in elems}
        predicate = {c for c in self.gl.all_codes().tolist() if in_elementary(self.gl.to_matrix(c), self.monoid)}
        ident = Perm.identity()
        t_of_u = all(self.t(self.u(x.vector)) == ident for x in elems)
        perms = even_perms(self.n)
        t_of_s = all(self.t(self.s(p)) == p for p in perms)
        kernel = {c for c in predicate if self.t(self.gl.to_matrix(c)) == ident}
        image_u = {self.gl.from_matrix(self.u(v)) for v in itertools.product(self.elems, repeat=self.n - 1)}
        mul_ok = True
        for _ in range(samples):
            x = elems[rng.integers(len(elems))]
            y = elems[rng.integers(len(elems))]
            if self.matrix(self.mul(x, y)) != mat_mul(self.matrix(x), self.matrix(y), self.monoid):
                mul_ok = False
                break
        return {
            "order": len(codes),
            "expected_order": self.order(),
            "matches_predicate": codes == predicate,
            "t_of_u_trivial": t_of_u,
            "t_of_s_identity": t_of_s,
            "exact_at_middle": kernel == image_u,
            "u_injective": len(image_u) == len(self.elems) ** (self.n - 1),
            "semidirect_product_matches_matrices": mul_ok,
        }


def _half_factorial(n: int) -> int:
    from math import factorial

    return factorial(n) // 2


def e_group(g: FgAbelianGroup, n: int) -> EGroup:
    return EGroup(g, n)


# --------------------------------------------------------------------------
# quotient, reduction and audits


@dataclass(frozen=True)
class KernelReport:
    modulus: int
    kernel_order: int
    alpha_order: int
    alpha_central: bool
    homomorphism: bool
    surjective: bool

    @property
    def ok(self) -> bool:
        return self.kernel_order == self.alpha_order and self.alpha_central and self.homomorphism and self.surjective

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "kernel_order": self.kernel_order,
            "alpha_order": self.alpha_order,
            "alpha_central": self.alpha_central,
            "homomorphism": self.homomorphism,
            "surjective": self.surjective,
        }


def projection_kernel(d: int, samples: int = 100, window: int = 5, seed: int = 0) -> KernelReport:
    """``(r, e) -> e`` onto ``(+) Z/d``: kernel, centrality of ``alpha`` and homomorphism checks."""
    d = _check_modulus(d)
    rng = np.random.default_rng(seed)
    xb, xv = random_elements(d, samples, window, rng)
    yb, yv = random_elements(d, samples, window, rng)
    xs = from_arrays(d, xb, xv)
    ys = from_arrays(d, yb, yv)
    a = alpha(d)
    central = all(m_mul(a, x) == m_mul(x, a) for x in xs)
    hom = all(_vec_add(projection(x), projection(y), d) == projection(m_mul(x, y)) for x, y in zip(xs, ys))
    # every vector lifts to (0, v); the fibre over 0 is {alpha^r}
    surjective = all(projection(MGroupElement(d, 0, tuple(x.exps))) == projection(x) for x in xs)
    fibre = {m_pow(a, r) for r in range(2)} | {m_commutator(gen(d, i), gen(d, j)) for i in range(2, 5) for j in range(2, 5)}
    kernel = {x for x in fibre if not projection(x)}
    return KernelReport(d, len(kernel), alpha_order(d), central, hom, surjective)


def _vec_add(u: dict, v: dict, d: int) -> dict:
    out = dict(u)
    for i, e in v.items():
        out[i] = out.get(i, 0) + e
    if d:
        out = {i: e % d for i, e in out.items()}
    return {i: e for i, e in out.items() if e}


def reduce_mod(x: MGroupElement, d: int) -> MGroupElement:
    """``M(Z) -> M(Z/d)`` sending ``alpha -> alpha`` and ``X_i -> X_i``."""
    if x.modulus != 0:
        raise StructuralError("reduction starts from M(Z)")
    d = _check_modulus(d)
    return MGroupElement(d, x.bit, x.exps)


def random_m_element(d: int, rng, window: int = 5, spread: int = 3) -> MGroupElement:
    b, v = random_elements(d, 1, window, rng, spread)
    return from_arrays(d, b, v)[0]


def normal_closure_word(d: int, rng, max_factors: int = 6, window: int = 5):
    """A random ``prod a_l X_{i_l}^{+-d} a_l^-1`` in ``M(Z)``, returned with its factors."""
    n_factors = int(rng.integers(1, max_factors + 1))
    out = m_identity(0)
    factors = []
    for _ in range(n_factors):
        a = random_m_element(0, rng, window)
        i = int(rng.integers(2, window + 2))
        sign = 1 if rng.integers(2) else -1
        term = m_mul(m_mul(a, gen(0, i, sign * d)), m_inv(a))
        factors.append((a, i, sign))
        out = m_mul(out, term)
    return out, factors


@dataclass(frozen=True)
class ParityAudit:
    modulus: int
    words: int
    odd_r: int
    not_in_kernel: int

    @property
    def ok(self) -> bool:
        return self.odd_r == 0 and self.not_in_kernel == 0

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "words": self.words, "odd_r": self.odd_r, "not_in_kernel": self.not_in_kernel}


def parity_audit(d: int, words: int = 100, seed: int = 0) -> ParityAudit:
    """For even ``d``: normal-closure words of ``X_i^{+-d}`` in ``M(Z)`` have even ``r``."""
    if d <= 0 or d % 2:
        raise StructuralError("the parity audit is stated for even d > 0")
    rng = np.random.default_rng(seed)
    odd = 0
    outside = 0
    for _ in range(words):
        x, _ = normal_closure_word(d, rng)
        odd += x.bit
        if not reduce_mod(x, d).is_identity:
            outside += 1
    return ParityAudit(d, words, odd, outside)


@dataclass
class SteinbergAudit:
    modulus: int
    seed: int
    associativity_failures: int = 0
    relation_failures: list = None
    commutator_preservation_failures: int = 0
    power_relation_failures: int = 0
    composition_failures: int = 0
    automorphism_failures: int = 0
    intertwining_failures: int = 0
    kernel: KernelReport | None = None
    parity: ParityAudit | None = None
    cases: int = 0

    def failures(self) -> dict:
        out = {
            "associativity": self.associativity_failures,
            "presentation_relations": len(self.relation_failures or []),
            "sigma_commutator_relation": self.commutator_preservation_failures,
            "sigma_power_relation": self.power_relation_failures,
            "sigma_composition": self.composition_failures,
            "sigma_homomorphism": self.automorphism_failures,
            "sigma_intertwines_lambda": self.intertwining_failures,
            "kernel": 0 if self.kernel is None or self.kernel.ok else 1,
            "parity": 0 if self.parity is None or self.parity.ok else 1,
        }
        return out

    @property
    def ok(self) -> bool:
        return not any(self.failures().values())

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "seed": self.seed,
            "cases": self.cases,
            "failures": self.failures(),
            "relation_failures": self.relation_failures or [],
            "kernel": None if self.kernel is None else self.kernel.to_json(),
            "parity": None if self.parity is None else self.parity.to_json(),
            "ok": self.ok,
        }


def presentation_failures(d: int, top: int = 6) -> list[str]:
    """Relations ``[alpha, X_i] = 1``, ``[X_i, X_j] = alpha``, ``X_i^d = 1`` on indices ``2..top``."""
    bad = []
    a = alpha(d)
    ident = m_identity(d)
    for i in range(2, top + 1):
        if m_commutator(a, gen(d, i)) != ident:
            bad.append(f"[alpha, X{i}] != 1")
        if d and m_pow(gen(d, i), d) != ident:
            bad.append(f"X{i}^{d} != 1")
        for j in range(2, top + 1):
            if i != j:
                c = m_commutator(gen(d, i), gen(d, j))
                want = a if d % 2 == 0 else ident
                if c != want:
                    bad.append(f"[X{i}, X{j}] != alpha")
    # for odd d the relations force alpha = 1, which the model realizes
    if d % 2 and not a.is_identity:
        bad.append("alpha != 1 for odd d")
    return bad


def steinberg_audit(
    d: int,
    seed: int = 0,
    triples: int = 10_000,
    cases: int = 200,
    parity_words: int = 100,
    perm_degree: int = 7,
) -> SteinbergAudit:
    d = _check_modulus(d)
    rng = np.random.default_rng(seed)
    audit = SteinbergAudit(d, seed, cases=cases)
    audit.associativity_failures = batch_associativity_failures(d, triples, 6, rng)
    audit.relation_failures = presentation_failures(d)
    a = alpha(d)
    ident = m_identity(d)
    for _ in range(cases):
        s = random_even_perm(rng, perm_degree)
        t = random_even_perm(rng, perm_degree)
        i, j = (int(v) for v in rng.choice(np.arange(2, perm_degree + 1), size=2, replace=False))
        if sigma_act(s, m_commutator(gen(d, i), gen(d, j))) != m_commutator(
            sigma_act(s, gen(d, i)), sigma_act(s, gen(d, j))
        ) or sigma_act(s, m_commutator(gen(d, i), gen(d, j))) != (a if d % 2 == 0 else ident):
            audit.commutator_preservation_failures += 1
        if d and m_pow(sigma_act(s, gen(d, i)), d) != ident:
            audit.power_relation_failures += 1
        x = random_m_element(d, rng, window=perm_degree - 1)
        y = random_m_element(d, rng, window=perm_degree - 1)
        if sigma_act(s.compose(t), x) != sigma_act(s, sigma_act(t, x)):
            audit.composition_failures += 1
        if sigma_act(s, m_mul(x, y)) != m_mul(sigma_act(s, x), sigma_act(s, y)):
            audit.automorphism_failures += 1
        if projection(sigma_act(s, x)) != lambda_act(s, projection(x), d):
            audit.intertwining_failures += 1
    audit.kernel = projection_kernel(d, seed=seed)
    if d > 0 and d % 2 == 0:
        audit.parity = parity_audit(d, parity_words, seed=seed)
    return audit
