"""Self-check suites run by ``monoidk verify``.

Each suite takes a monoid and a seeded generator and returns a list of
:class:`Check` records.  Library calls are module-qualified on purpose, so
the coverage test can wrap them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import abgroup, aset, ktheory, matrix, monoid, oracles, qcat
from .errors import SizeGuardError, UnsupportedError


@dataclass
class Check:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)
    skipped: str | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "ok": self.ok, "detail": self.detail}
        if self.skipped:
            out["skipped"] = self.skipped
        return out


ORACLE_LIMIT = 200_000


def _guarded(name, fn) -> Check:
    try:
        return fn()
    except (SizeGuardError, UnsupportedError) as exc:
        return Check(name, True, skipped=str(exc))


# --------------------------------------------------------------------------
# monoid


def monoid_suite(a: monoid.PointedMonoid, rng: np.random.Generator) -> list[Check]:
    report = monoid.validate_monoid(a)
    u = monoid.units(a)
    comm = monoid.commutator_subgroup(u)
    ab = monoid.abelianization(u)
    pres = monoid.abelianization_by_presentation(u)
    pu = monoid.poly_units(a)
    return [
        Check("valid", report.valid, {"violations": [v.describe(a.elements) for v in report.violations]}),
        Check("units_associative", u.check_associative(), {"order": u.order}),
        Check("commutator_subgroup_normal", u.is_normal(monoid.commutator_mask(u)), {"order": comm.order}),
        Check("abelianization_two_ways", abgroup.iso_test(ab, pres), {"table": ab.to_json(), "presentation": pres.to_json()}),
        Check("abelianization_order", ab.order == u.order // comm.order, {"order": ab.order}),
        Check("poly_units_order", pu.group.order == u.order, {"order": pu.group.order}),
    ]


# --------------------------------------------------------------------------
# matrices


def _random_matrix(a, rows, cols, rng):
    entries = []
    for _ in range(rows):
        if rng.random() < 0.2:
            entries.append(None)
            continue
        x = int(rng.integers(a.size))
        entries.append(None if x == a.zero else (int(rng.integers(cols)), x))
    return matrix.RowMonomicMatrix(rows, cols, tuple(entries))


def matrix_suite(a: monoid.PointedMonoid, rng: np.random.Generator) -> list[Check]:
    checks = []
    bad = 0
    for _ in range(50):
        x, y, z = (_random_matrix(a, 3, 3, rng) for _ in range(3))
        left = matrix.mat_mul(matrix.mat_mul(x, y, a), z, a)
        right = matrix.mat_mul(x, matrix.mat_mul(y, z, a), a)
        bad += left != right
    checks.append(Check("mat_mul_associative", bad == 0, {"samples": 50, "failures": int(bad)}))

    def roundtrip():
        mats = matrix.enumerate_gl(a, 3)
        ok = all(matrix.recompose(matrix.decompose(m, a)) == m for m in mats)
        return Check("decompose_roundtrip", ok, {"n": 3, "count": len(mats)})

    checks.append(_guarded("decompose_roundtrip", roundtrip))
    ids = matrix.factorization_identities(a)
    checks.append(Check("factorization_identities", all(r["holds"] for r in ids), {"cases": len(ids)}))

    def elementary():
        n = 3
        brute = matrix.brute_elementary(a, n)
        group = matrix.MonomialGroup(a, n)
        predicate = {group.to_matrix(int(c)) for c in matrix.elementary_codes(group)}
        member = all(matrix.in_elementary(m, a) for m in brute)
        return Check(
            "elementary_characterization",
            brute == predicate and member,
            {"n": n, "brute_order": len(brute), "predicate_order": len(predicate)},
        )

    checks.append(_guarded("elementary_characterization", elementary))
    return checks


# --------------------------------------------------------------------------
# K_1


def k1_suite(a: monoid.PointedMonoid, rng: np.random.Generator) -> list[Check]:
    checks = []
    for n in (2, 3):

        def run(n=n):
            res = ktheory.k1_bruteforce_check(a, n)
            return Check(f"k1_bruteforce_n{n}", abgroup.iso_test(res.abelianization, res.k1), res.to_json())

        checks.append(_guarded(f"k1_bruteforce_n{n}", run))
    return checks


# --------------------------------------------------------------------------
# A-sets


def aset_suite(a: monoid.PointedMonoid, rng: np.random.Generator) -> list[Check]:
    checks = []
    free1 = aset.free_aset(a, ["x"])
    free2 = aset.free_aset(a, ["x", "y"])
    m = free2.aset

    basis = ktheory.free_basis(m)
    checks.append(Check("free_basis", basis.free and basis.rank == 2, {"basis": list(basis.basis or ())}))
    checks.append(Check("free_is_projective", bool(aset.is_projective(m)), {}))

    # coequalizers against the partition oracle
    bad = 0
    trials = 10 if m.size <= 8 else 0
    for _ in range(trials):
        images_f = [int(rng.integers(m.size))]
        images_g = [int(rng.integers(m.size))]
        f = aset.extend_from_generators(free1, m, images_f)
        g = aset.extend_from_generators(free1, m, images_g)
        q = aset.coequalizer(f, g)
        blocks = _blocks_of(q.legs[0])
        expected = oracles.minimal_congruence(m, [(images_f[0], images_g[0])])
        bad += blocks != expected
    checks.append(Check("coequalizer_oracle", bad == 0, {"trials": trials, "failures": int(bad)}))

    # kernel and cokernel of a random map free1 -> free2
    f = aset.extend_from_generators(free1, m, [int(rng.integers(m.size))])
    kc = aset.kernel_cokernel(f)
    checks.append(
        Check(
            "kernel_cokernel_sizes",
            kc.kernel.size == len(f.kernel_points()) and kc.cokernel.size == m.size - len(f.image()) + 1,
            {"kernel": kc.kernel.size, "cokernel": kc.cokernel.size},
        )
    )

    prod, coprod = aset.product_coproduct([free1.aset, free1.aset])
    checks.append(
        Check(
            "product_coproduct_sizes",
            prod.obj.size == free1.aset.size**2 and coprod.obj.size == 2 * free1.aset.size - 1,
            {"product": prod.obj.size, "coproduct": coprod.obj.size},
        )
    )

    homs = aset.hom_set(free1.aset, m)
    if m.size ** (free1.aset.size - 1) <= ORACLE_LIMIT:
        brute = len(oracles.pointed_equivariant_maps(free1.aset, m))
        checks.append(Check("hom_set_oracle", len(homs) == brute == m.size, {"count": len(homs)}))
    else:
        # the free A-set on one generator represents the underlying pointed set
        checks.append(Check("hom_set_free", len(homs) == m.size, {"count": len(homs)}, skipped="oracle too large"))

    # A (x)_A M is M again
    t = aset.tensor(aset.Biset.regular(a), aset.Biset.from_left(m))
    checks.append(Check("tensor_unit", t.size == m.size, {"size": t.size}))

    # X -> X v X -> X, collapsing the first summand, is split exact
    first, second = coprod.legs
    back = {q: p for p, q in enumerate(second.map)}
    collapse = aset.ASetMorphism(coprod.obj, free1.aset, tuple(back.get(p, 0) for p in range(coprod.obj.size)))
    verdict = aset.is_admissible_exact(first, collapse)
    checks.append(Check("wedge_sequence_exact", verdict.exact and bool(verdict.split), {"status": verdict.status}))

    pb = aset.pullback(f, f)
    cones = oracles.pullback_cones(free1.aset, f, f)
    maps_in = aset.hom_set(free1.aset, pb.obj)
    checks.append(Check("pullback_cones", len(cones) == len(maps_in), {"cones": len(cones)}))
    return checks


def _blocks_of(q: aset.ASetMorphism) -> tuple[tuple[int, ...], ...]:
    groups: dict[int, list[int]] = {}
    for x, y in enumerate(q.map):
        groups.setdefault(y, []).append(x)
    return tuple(sorted(tuple(sorted(b)) for b in groups.values()))


# --------------------------------------------------------------------------
# Q-construction


def q_suite(a: monoid.PointedMonoid, rng: np.random.Generator) -> list[Check]:
    bound = 2 if a.size <= 2 else 1

    def run():
        report, _, _ = qcat.q_report(a, bound)
        return Check("q_rank_homomorphism", report.ok, report.to_json())

    return [_guarded("q_rank_homomorphism", run)]


# --------------------------------------------------------------------------
# homotopy invariance


def homotopy_suite(a: monoid.PointedMonoid, rng: np.random.Generator) -> list[Check]:
    rep = ktheory.homotopy_invariance_check(a)
    kr = ktheory.k_report(a)
    return [
        Check("units_of_polynomials", rep.ok, rep.to_json()),
        Check("k_report", kr.k1 is not None, kr.to_json()),
    ]


SUITES = {
    "monoid": monoid_suite,
    "matrix": matrix_suite,
    "k1": k1_suite,
    "aset": aset_suite,
    "q": q_suite,
    "homotopy": homotopy_suite,
}


def run_suites(names, a: monoid.PointedMonoid, seed: int = 0) -> dict[str, list[Check]]:
    out = {}
    for name in names:
        rng = np.random.default_rng([seed, list(SUITES).index(name)])
        out[name] = SUITES[name](a, rng)
    return out

