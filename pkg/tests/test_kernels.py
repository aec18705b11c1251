import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from monoidk import _accel, kernels, steinberg
from monoidk.monoid import cyclic_group_monoid, PointedMonoid, symmetric_group, validate_monoid

from conftest import DATA, MONOIDS

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


def random_monomials(rng, m, n, k):
    perm = np.array([rng.permutation(n) for _ in range(m)], dtype=np.int64).reshape(m, n)
    diag = rng.integers(0, k, size=(m, n), dtype=np.int64)
    return perm, diag


@needs_numba
@pytest.mark.parametrize("name", sorted(MONOIDS))
def test_associativity_scan_parity(name):
    t = MONOIDS[name].table
    assert np.array_equal(kernels.associativity_defects_loop(t), kernels.associativity_defects_numpy(t))


@needs_numba
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_associativity_scan_parity_random_tables(n, seed):
    t = np.random.default_rng(seed).integers(0, n, size=(n, n), dtype=np.int64)
    assert np.array_equal(kernels.associativity_defects_loop(t), kernels.associativity_defects_numpy(t))


@needs_numba
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_monomial_kernels_parity(n, seed):
    rng = np.random.default_rng(seed)
    g = symmetric_group(3)
    pa, da = random_monomials(rng, 20, n, g.order)
    pb, db = random_monomials(rng, 20, n, g.order)
    for x, y in zip(
        kernels.monomial_product_loop(pa, da, pb, db, g.table), kernels.monomial_product_numpy(pa, da, pb, db, g.table)
    ):
        assert np.array_equal(x, y)
    inv = np.asarray(g.inverse, dtype=np.int64)
    for x, y in zip(kernels.monomial_inverse_loop(pa, da, inv), kernels.monomial_inverse_numpy(pa, da, inv)):
        assert np.array_equal(x, y)
    assert np.array_equal(kernels.monomial_encode_loop(pa, da, g.order), kernels.monomial_encode_numpy(pa, da, g.order))


@needs_numba
@pytest.mark.parametrize("d", [0, 2, 3, 4, 5, 6])
def test_cocycle_parity(d):
    rng = np.random.default_rng(d)
    ab, av = steinberg.random_elements(d, 200, 6, rng)
    bb, bv = steinberg.random_elements(d, 200, 6, rng)
    for x, y in zip(kernels.cocycle_product_loop(ab, av, bb, bv, d), kernels.cocycle_product_numpy(ab, av, bb, bv, d)):
        assert np.array_equal(x, y)


@pytest.mark.parametrize("d", [0, 2, 3, 4, 6])
def test_cocycle_product_matches_scalar_product(d):
    rng = np.random.default_rng(10 + d)
    ab, av = steinberg.random_elements(d, 50, 5, rng)
    bb, bv = steinberg.random_elements(d, 50, 5, rng)
    bit, vec = kernels.cocycle_product(ab, av, bb, bv, d)
    got = steinberg.from_arrays(d, bit, vec)
    xs = steinberg.from_arrays(d, ab, av)
    ys = steinberg.from_arrays(d, bb, bv)
    assert got == [steinberg.m_mul(x, y) for x, y in zip(xs, ys)]
    ib, iv = kernels.cocycle_inverse(ab, av, d)
    assert all(steinberg.m_mul(x, y).is_identity for x, y in zip(xs, steinberg.from_arrays(d, ib, iv)))


def test_encode_decode_roundtrip():
    rng = np.random.default_rng(0)
    perm, diag = random_monomials(rng, 30, 4, 3)
    back = kernels.monomial_decode(kernels.monomial_encode(perm, diag, 3), 4, 3)
    assert np.array_equal(back[0], perm) and np.array_equal(back[1], diag)


@pytest.mark.parametrize("flag,expected", [("1", "numpy"), ("true", "numpy"), ("", None), ("0", None)])
def test_env_flag_selects_backend(monkeypatch, flag, expected):
    monkeypatch.setenv("MONOIDK_DISABLE_NUMBA", flag)
    want = expected or ("numba" if _accel.HAVE_NUMBA else "numpy")
    assert _accel.backend_name() == want


def test_results_independent_of_backend(monkeypatch):
    good = cyclic_group_monoid(4)
    bad = PointedMonoid.from_json(json.loads((DATA / "bad_assoc.json").read_text()))

    def run():
        return (
            validate_monoid(good).valid,
            [v.describe(bad.elements) for v in validate_monoid(bad).violations],
            steinberg.batch_associativity_failures(4, 500, 5, np.random.default_rng(0)),
        )

    monkeypatch.setenv("MONOIDK_DISABLE_NUMBA", "1")
    slow = run()
    monkeypatch.setenv("MONOIDK_DISABLE_NUMBA", "0")
    fast = run()
    assert slow == fast
    assert slow[0] and slow[1] and slow[2] == 0
