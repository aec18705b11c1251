import pytest
from hypothesis import given
from hypothesis import strategies as st

from monoidk import aset, ktheory
from monoidk.abgroup import Z, FgAbelianGroup, cyclic, direct_sum, homology, iso_test, mod2
from monoidk.monoid import cyclic_group_monoid, units

from conftest import GROUP_MONOIDS, MONOIDS

Z2 = cyclic(2)


def fg(*orders):
    return FgAbelianGroup.from_cyclic(list(orders))


@pytest.mark.parametrize(
    "name,expected",
    [("f1", [2]), ("z2", [2, 2]), ("z3", [6]), ("sigma3", [2, 2]), ("idempotent", [2]), ("left_zero", [2])],
)
def test_k1_closed_form(name, expected):
    assert ktheory.k1(MONOIDS[name]) == fg(*expected)


@pytest.mark.parametrize("name", sorted(GROUP_MONOIDS))
@pytest.mark.parametrize("n", [2, 3])
def test_k1_matches_brute_force(name, n):
    res = ktheory.k1_bruteforce_check(GROUP_MONOIDS[name], n)
    assert res.equal and iso_test(res.abelianization, res.k1)


def test_k1_brute_force_orders():
    assert ktheory.k1_bruteforce_check(MONOIDS["f1"], 3).gl_order == 6
    assert ktheory.k1_bruteforce_check(MONOIDS["z2"], 3).gl_order == 48
    assert ktheory.k1_bruteforce_check(MONOIDS["z3"], 2).gl_order == 18


@pytest.mark.parametrize(
    "g,expected",
    [
        (fg(3), [2]),
        (fg(2), [2, 2]),
        (Z, [2, 2]),
        (fg(4, 6), [2, 2, 2, 2]),
        (fg(), [2]),
        (fg(0, 0), [2, 2, 2, 0]),  # H_2(Z^2) = Z
    ],
)
def test_k2_examples(g, expected):
    assert ktheory.k2_abelian(g) == fg(*expected)


@pytest.mark.parametrize("d", list(range(1, 16, 2)))
def test_k2_odd_cyclic(d):
    assert ktheory.k2_abelian(cyclic(d)) == Z2


@pytest.mark.parametrize("d", [0, 2, 4, 6, 8, 10])
def test_k2_even_cyclic(d):
    assert ktheory.k2_abelian(cyclic(d)) == fg(2, 2)


groups = st.lists(st.sampled_from([0, 2, 3, 4, 5, 6, 8, 9, 12]), min_size=0, max_size=4).map(FgAbelianGroup.from_cyclic)


@given(groups)
def test_k2_two_rank(g):
    k2 = ktheory.k2_abelian(g)
    h2 = homology(g, 2)
    assert k2.rank_mod(2) == 1 + mod2(g).rank_mod(2) + h2.rank_mod(2)
    assert k2.free_rank == h2.free_rank
    for p in (3, 5):
        assert k2.rank_mod(p) == h2.rank_mod(p)


@given(groups, groups)
def test_mod2_summand_is_natural(g1, g2):
    assert mod2(g1 + g2) == direct_sum(mod2(g1), mod2(g2))
    assert ktheory.k2_summands(g1 + g2)[1] == ktheory.k2_summands(g1)[1] + ktheory.k2_summands(g2)[1]


# pi_2^s patterns for nonabelian groups: (abelianization, H_2, expected)
PI2S = [
    ("A_3", fg(3), fg(), [2]),
    ("A_5", fg(), fg(2), [2, 2]),
    ("A_6", fg(), fg(6), [2, 6]),
    ("S_3", fg(2), fg(), [2, 2]),
    ("S_5", fg(2), fg(2), [2, 2, 2]),
    ("E_3(F_4)", fg(), fg(), [2]),
    ("GL_2(F_3)", fg(2), fg(), [2, 2]),
    ("GL_2(F_5)", fg(4), fg(), [2, 2]),
    ("GL_2(F_4)", fg(3), fg(), [2]),
    ("GL_3(F_8)", fg(7), fg(), [2]),
]


@pytest.mark.parametrize("name,gab,h2,expected", PI2S, ids=[p[0] for p in PI2S])
def test_pi2s_patterns(name, gab, h2, expected):
    assert ktheory.pi2s_formula(gab, h2) == fg(*expected)


def test_pi2s_agrees_with_k2_for_abelian_groups():
    for g in (fg(2), fg(4, 6), fg(0, 3)):
        assert ktheory.pi2s_formula(g, homology(g, 2)) == ktheory.k2_abelian(g)


def test_proj_is_vec():
    assert ktheory.proj_is_vec(MONOIDS["f1"]) == (True, [])
    assert ktheory.proj_is_vec(MONOIDS["nilpotent"]) == (True, [])
    assert ktheory.proj_is_vec(MONOIDS["idempotent"]) == (False, ["e"])
    assert ktheory.proj_is_vec(MONOIDS["left_zero"]) == (False, ["e", "f"])


def test_k_report_omits_rather_than_guesses():
    rep = ktheory.k_report(MONOIDS["idempotent"])
    assert rep.k0 is None and "omitted" in rep.provenance["k0"]
    assert rep.k2 is None
    rep = ktheory.k_report(MONOIDS["z2"])
    assert rep.k0 == Z and rep.k1 == fg(2, 2) and rep.k2 == fg(2, 2)
    assert ktheory.k_report(MONOIDS["sigma3"]).k2 is None


def test_free_basis_and_correspondence():
    z2 = MONOIDS["z2"]
    free = aset.free_aset(z2, ["x", "y", "z"])
    rep = ktheory.free_basis(free.aset)
    assert rep.free and rep.rank == 3
    x = free.generators[0]
    g = z2.elements.index("g")
    gx = free.aset.act(g, x)
    single = aset.free_aset(z2, ["x"])
    assert ktheory.is_basis(single.aset, [single.generators[0]])
    assert ktheory.is_basis(single.aset, [single.aset.act(g, single.generators[0])])
    b1 = (gx, free.generators[1], free.generators[2])
    match = ktheory.basis_correspondence(free.aset, b1, free.generators)
    assert match is not None and match[0] == (0, 0, g)
    assert ktheory.basis_correspondence(free.aset, b1[:2], free.generators) is None


def test_non_free_projective_has_no_basis():
    a = MONOIDS["idempotent"]
    regular = aset.free_of_rank(a, 1)
    e = a.elements.index("e")
    sub, _ = aset.sub_aset(regular.aset, regular.aset.orbit(regular.aset.act(e, regular.generators[0])))
    assert not ktheory.free_basis(sub).free


@pytest.mark.parametrize("name", sorted(MONOIDS))
def test_homotopy_invariance(name):
    rep = ktheory.homotopy_invariance_check(MONOIDS[name])
    assert rep.ok
    assert len(rep.isomorphism) == len(units(MONOIDS[name]))
    assert all(img.endswith(",0)") for img in rep.isomorphism.values())


def test_homotopy_invariance_z5():
    rep = ktheory.homotopy_invariance_check(cyclic_group_monoid(5))
    assert rep.k1 == rep.k1_poly == cyclic(10)


def test_idempotents_of_polynomials_have_degree_zero():
    rep = ktheory.homotopy_invariance_check(MONOIDS["idempotent"])
    assert rep.idempotents == [["1", "(1,0)"], ["e", "(e,0)"]]
