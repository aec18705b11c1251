import itertools
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from monoidk.abgroup import FgAbelianGroup
from monoidk.errors import InvalidStructureError, StructuralError
from monoidk.monoid import (
    PointedMonoid,
    abelian_group,
    abelianization,
    abelianization_by_presentation,
    alternating_group,
    commutator_subgroup,
    cyclic_group,
    direct_product,
    f1,
    group_monoid,
    load_monoid,
    poly_element,
    poly_is_idempotent,
    poly_is_unit,
    poly_mul,
    poly_units,
    quaternion_group,
    require_valid,
    symmetric_group,
    units,
    validate_monoid,
)

from conftest import MONOIDS


def naive_violations(table, zero, one):
    n = len(table)
    bad = set()
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            bad.add(("associativity", (a, b, c)))
    for a in range(n):
        if table[zero][a] != zero or table[a][zero] != zero:
            bad.add(("absorbing", (a,)))
        if table[one][a] != a or table[a][one] != a:
            bad.add(("unit", (a,)))
    return bad


@pytest.mark.parametrize("name", sorted(MONOIDS))
def test_standard_monoids_are_valid(name):
    assert validate_monoid(MONOIDS[name]).valid


def test_broken_associativity_names_the_triple(data_dir):
    data = PointedMonoid.from_json(json.loads((data_dir / "bad_assoc.json").read_text()))
    report = validate_monoid(data)
    assert not report.valid
    triples = {tuple(data.elements[i] for i in v.witness) for v in report.by_axiom("associativity")}
    # (x x) x = y x = x but x (x x) = x y = 0
    assert ("x", "x", "x") in triples
    with pytest.raises(InvalidStructureError, match="associativity"):
        load_monoid(data_dir / "bad_assoc.json")


def test_unit_and_absorbing_violations():
    t = np.array([[0, 1], [0, 1]])
    report = validate_monoid(PointedMonoid(("0", "1"), t, 0, 1))
    assert report.by_axiom("absorbing")
    with pytest.raises(InvalidStructureError):
        require_valid(PointedMonoid(("0", "1"), t, 0, 1))
    t = np.array([[0, 0, 0], [0, 1, 2], [0, 2, 1]])
    assert validate_monoid(PointedMonoid(("0", "1", "x"), t, 0, 2)).by_axiom("unit")


def test_structural_errors():
    with pytest.raises(StructuralError):
        PointedMonoid(("0", "1"), np.array([[0, 0, 0]]), 0, 1)
    with pytest.raises(StructuralError):
        PointedMonoid(("0", "0"), np.array([[0, 0], [0, 1]]), 0, 1)
    with pytest.raises(StructuralError):
        PointedMonoid.from_labels(["0", "1"], [["0", "0"], ["0", "q"]], "0", "1")


@given(st.integers(2, 4).flatmap(lambda n: st.lists(st.lists(st.integers(0, n - 1), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_validation_matches_triple_loop(table):
    n = len(table)
    m = PointedMonoid(tuple(str(i) for i in range(n)), np.array(table), 0, 1)
    found = {(v.axiom, v.witness) for v in validate_monoid(m).violations}
    assert found == naive_violations(table, 0, 1)


def test_json_roundtrip(any_monoid):
    again = PointedMonoid.from_json(any_monoid.to_json())
    assert again == any_monoid


def test_group_monoid_shape():
    g = symmetric_group(3)
    a = group_monoid(g)
    assert a.size == 7 and a.elements[a.zero] == "0"
    assert validate_monoid(a).valid
    assert units(a).order == 6


@pytest.mark.parametrize(
    "name,order,comm,ab",
    [
        ("f1", 1, 1, ()),
        ("z2", 2, 1, (2,)),
        ("z3", 3, 1, (3,)),
        ("sigma3", 6, 3, (2,)),
        ("idempotent", 1, 1, ()),
        ("nilpotent", 1, 1, ()),
        ("left_zero", 1, 1, ()),
    ],
)
def test_units_commutators_abelianization(name, order, comm, ab):
    u = units(MONOIDS[name])
    assert u.order == order
    assert commutator_subgroup(u).order == comm
    assert abelianization(u) == FgAbelianGroup(0, ab)


@pytest.mark.parametrize(
    "group,ab",
    [
        (quaternion_group(), (2, 2)),
        (alternating_group(4), (3,)),
        (symmetric_group(4), (2,)),
        (direct_product(symmetric_group(3), cyclic_group(4)), (2, 4)),
    ],
)
def test_abelianization_known_groups(group, ab):
    assert abelianization(group) == FgAbelianGroup(0, ab)
    assert abelianization_by_presentation(group) == FgAbelianGroup(0, ab)


@given(st.lists(st.integers(1, 6), min_size=1, max_size=3).filter(lambda o: np.prod(o) <= 48))
def test_abelian_group_abelianizes_to_itself(orders):
    g = abelian_group(orders)
    assert commutator_subgroup(g).order == 1
    assert abelianization(g) == FgAbelianGroup.from_cyclic(orders)
    assert abelianization(g) == abelianization_by_presentation(g)


def test_polynomial_units_and_idempotents(any_monoid):
    a = any_monoid
    pu = poly_units(a)
    assert pu.group.order == units(a).order
    assert [e for e, _ in pu.idempotents] == [e for e in a.idempotents() if e != a.zero]
    for e, img in pu.idempotents:
        assert poly_is_idempotent(a, img)
        assert img.degree == 0
    # positive degree is never a unit and never idempotent
    x = poly_element(a, a.one, 1)
    assert not poly_is_unit(a, x)
    assert not poly_is_idempotent(a, x)
    assert poly_mul(a, x, x).degree == 2


def test_f1_is_two_elements():
    a = f1()
    assert a.size == 2 and a.mul(a.one, a.one) == a.one
