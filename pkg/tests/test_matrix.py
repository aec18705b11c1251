import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from monoidk import oracles
from monoidk.errors import NotInvertibleError, SizeGuardError, StructuralError
from monoidk.matrix import (
    MonomialGroup,
    RowMonomicMatrix,
    brute_elementary,
    conjugation_value,
    decompose,
    diagonal_matrix,
    elementary_agreement,
    enumerate_gl,
    factorization_identities,
    in_elementary,
    mat_mul,
    minimal_stable_rank,
    permutation_matrix,
    recompose,
)
from monoidk.monoid import units

from conftest import GROUP_MONOIDS, MONOIDS


def matrices(a, rows, cols):
    entry = st.one_of(st.none(), st.tuples(st.integers(0, cols - 1), st.integers(0, a.size - 1)))
    return st.lists(entry, min_size=rows, max_size=rows).map(
        lambda es: RowMonomicMatrix(rows, cols, tuple(None if e is None or e[1] == a.zero else e for e in es))
    )


@st.composite
def monoid_and_pair(draw):
    a = MONOIDS[draw(st.sampled_from(sorted(MONOIDS)))]
    m, n, k = (draw(st.integers(1, 4)) for _ in range(3))
    return a, draw(matrices(a, m, n)), draw(matrices(a, n, k))


@given(monoid_and_pair())
def test_product_matches_monoid_ring(case):
    a, left, right = case
    got = mat_mul(left, right, a).dense(a)
    ring = oracles.dense_ring_product(left.dense(a), right.dense(a), a)
    for i, row in enumerate(ring):
        for j, cell in enumerate(row):
            # row-monomic products have at most one term per entry
            assert sum(cell.values()) <= 1
            expected = next(iter(cell)) if cell else a.zero
            assert got[i][j] == expected


@given(monoid_and_pair())
def test_identity_is_neutral(case):
    a, left, _ = case
    assert mat_mul(RowMonomicMatrix.identity(left.rows, a), left, a) == left
    assert mat_mul(left, RowMonomicMatrix.identity(left.cols, a), a) == left


def test_shape_mismatch():
    a = MONOIDS["f1"]
    with pytest.raises(StructuralError):
        mat_mul(RowMonomicMatrix.identity(2, a), RowMonomicMatrix.identity(3, a), a)


@pytest.mark.parametrize("name", sorted(MONOIDS))
def test_gl_enumeration_and_roundtrip(name):
    a = MONOIDS[name]
    k = units(a).order
    for n in (1, 2, 3):
        mats = enumerate_gl(a, n)
        assert len(mats) == len(set(mats)) == k**n * math.factorial(n)
        for m in mats:
            d = decompose(m, a)
            assert recompose(d) == m
            assert mat_mul(diagonal_matrix(d.diag, a), permutation_matrix(d.perm, a), a) == m


def test_non_invertible_verdicts():
    a = MONOIDS["nilpotent"]
    n = a.index("n")
    assert decompose(RowMonomicMatrix(2, 2, ((0, a.one), None)), a).reason == "missing row"
    assert decompose(RowMonomicMatrix(2, 2, ((0, a.one), (0, a.one))), a).reason == "repeated column"
    assert decompose(RowMonomicMatrix(2, 2, ((0, n), (1, a.one))), a).reason == "non-unit entry"
    assert decompose(RowMonomicMatrix(2, 3, ((0, a.one), (1, a.one))), a).reason == "not square"
    with pytest.raises(NotInvertibleError):
        in_elementary(RowMonomicMatrix(2, 2, ((0, n), (1, a.one))), a)


@pytest.mark.parametrize("name", sorted(GROUP_MONOIDS))
def test_encoded_group_matches_matrices(name):
    a = GROUP_MONOIDS[name]
    g = MonomialGroup(a, 3)
    rng = np.random.default_rng(7)
    codes = g.all_codes()
    x = rng.choice(codes, 40)
    y = rng.choice(codes, 40)
    prods = g.mul(x, y)
    for cx, cy, cp in zip(x, y, prods):
        assert g.to_matrix(int(cp)) == mat_mul(g.to_matrix(int(cx)), g.to_matrix(int(cy)), a)
    assert np.all(g.mul(x, g.inv(x)) == g.identity)


@pytest.mark.parametrize("name", sorted(MONOIDS))
@pytest.mark.parametrize("n", [3, 4])
def test_elementary_predicate_matches_commutator_closure(name, n):
    report = elementary_agreement(MONOIDS[name], n)
    assert report["equal"], report


def test_closure_methods_agree():
    a = MONOIDS["z3"]
    assert brute_elementary(a, 3, "all-pairs") == brute_elementary(a, 3, "generators")


def test_elementary_examples():
    a = MONOIDS["z2"]
    g = a.index("g")
    # odd permutation
    assert not in_elementary(permutation_matrix((1, 0, 2), a), a)
    # diagonal product g is not a commutator in an abelian group
    assert not in_elementary(diagonal_matrix((g, a.one, a.one), a), a)
    assert in_elementary(diagonal_matrix((g, g, a.one), a), a)
    s3 = MONOIDS["sigma3"]
    c = s3.index("231")
    assert in_elementary(diagonal_matrix((c, s3.one, s3.one), s3), s3)


@pytest.mark.parametrize("name", sorted(MONOIDS))
def test_minimal_stable_rank(name):
    assert minimal_stable_rank(MONOIDS[name], max_n=4) == 1


@pytest.mark.parametrize("name", sorted(MONOIDS))
def test_factorizations_under_column_convention(name):
    assert all(r["holds"] for r in factorization_identities(MONOIDS[name], "column"))


def test_row_convention_conjugation_value():
    # with 1 at (i, s(i)) the conjugate is D(1, a^-1, a), not D(a, 1, a^-1)
    a = MONOIDS["z3"]
    g, g2 = a.index("g"), a.index("g2")
    one = a.one
    assert conjugation_value(a, g, "row") == (one, g2, g, one, one, one)
    assert conjugation_value(a, g, "column") == (g, one, g2, one, one, one)
    checks = factorization_identities(a, "row")
    assert not all(r["holds"] for r in checks if r["identity"] == "conjugation" and r["a"] != "e")
    assert all(r["holds"] for r in checks if r["identity"] != "conjugation")


def test_size_guard(monkeypatch):
    monkeypatch.setenv("MONOIDK_SIZE_GUARD", "100")
    with pytest.raises(SizeGuardError):
        enumerate_gl(MONOIDS["z3"], 3)
