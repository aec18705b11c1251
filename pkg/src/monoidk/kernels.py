"""Hot numeric kernels, each in a compiled-loop and a vectorised-numpy form.

Monomial matrices are passed in batches as two ``(m, n)`` integer arrays:
``perm[k, i]`` is the column of the nonzero entry in row ``i`` of matrix
``k`` and ``diag[k, i]`` is that entry as an index into a unit group.
Elements of the cocycle model of M(Z/d) are a bit array ``(m,)`` plus a
vector array ``(m, n)`` of exponents on a window of generator indices.

The public functions dispatch on :func:`monoidk._accel.use_numba`; the
``*_numpy`` and ``*_loop`` variants stay importable for benchmarking and
cross-checks.
"""

import numpy as np

from ._accel import njit, use_numba

# --------------------------------------------------------------------------
# associativity scan


def associativity_defects_numpy(table):
    t = np.asarray(table, dtype=np.int64)
    n = t.shape[0]
    left = t[t]  # left[a, b, c] = (ab)c
    right = t[np.arange(n)[:, None, None], t[None, :, :]]  # a(bc)
    return np.argwhere(left != right).astype(np.int64)


@njit
def associativity_defects_loop(table):
    n = table.shape[0]
    count = 0
    for a in range(n):
        for b in range(n):
            ab = table[a, b]
            for c in range(n):
                if table[ab, c] != table[a, table[b, c]]:
                    count += 1
    out = np.empty((count, 3), dtype=np.int64)
    k = 0
    for a in range(n):
        for b in range(n):
            ab = table[a, b]
            for c in range(n):
                if table[ab, c] != table[a, table[b, c]]:
                    out[k, 0] = a
                    out[k, 1] = b
                    out[k, 2] = c
                    k += 1
    return out


def associativity_defects(table):
    """All triples ``(a, b, c)`` with ``(ab)c != a(bc)``, lexicographic."""
    t = np.ascontiguousarray(table, dtype=np.int64)
    if use_numba():
        return associativity_defects_loop(t)
    return associativity_defects_numpy(t)


# --------------------------------------------------------------------------
# monomial matrices


def monomial_product_numpy(perm_a, diag_a, perm_b, diag_b, unit_table):
    # row i of A hits column perm_a[i]; that row of B carries the rest
    perm = np.take_along_axis(perm_b, perm_a, axis=1)
    diag = unit_table[diag_a, np.take_along_axis(diag_b, perm_a, axis=1)]
    return perm, diag


@njit
def monomial_product_loop(perm_a, diag_a, perm_b, diag_b, unit_table):
    m, n = perm_a.shape
    perm = np.empty((m, n), dtype=np.int64)
    diag = np.empty((m, n), dtype=np.int64)
    for k in range(m):
        for i in range(n):
            j = perm_a[k, i]
            perm[k, i] = perm_b[k, j]
            diag[k, i] = unit_table[diag_a[k, i], diag_b[k, j]]
    return perm, diag


def monomial_product(perm_a, diag_a, perm_b, diag_b, unit_table):
    """Batched product of invertible monomial matrices ``A[k] @ B[k]``."""
    args = [np.ascontiguousarray(x, dtype=np.int64) for x in (perm_a, diag_a, perm_b, diag_b, unit_table)]
    if use_numba():
        return monomial_product_loop(*args)
    return monomial_product_numpy(*args)


def monomial_inverse_numpy(perm, diag, unit_inverse):
    m, n = perm.shape
    inv_perm = np.empty_like(perm)
    rows = np.arange(m)[:, None]
    inv_perm[rows, perm] = np.arange(n)[None, :]
    inv_diag = unit_inverse[np.take_along_axis(diag, inv_perm, axis=1)]
    return inv_perm, inv_diag


@njit
def monomial_inverse_loop(perm, diag, unit_inverse):
    m, n = perm.shape
    inv_perm = np.empty((m, n), dtype=np.int64)
    inv_diag = np.empty((m, n), dtype=np.int64)
    for k in range(m):
        for i in range(n):
            inv_perm[k, perm[k, i]] = i
        for j in range(n):
            inv_diag[k, j] = unit_inverse[diag[k, inv_perm[k, j]]]
    return inv_perm, inv_diag


def monomial_inverse(perm, diag, unit_inverse):
    args = [np.ascontiguousarray(x, dtype=np.int64) for x in (perm, diag, unit_inverse)]
    if use_numba():
        return monomial_inverse_loop(*args)
    return monomial_inverse_numpy(*args)


def monomial_encode_numpy(perm, diag, n_units):
    m, n = perm.shape
    perm_weights = n ** np.arange(n, dtype=np.int64)
    diag_weights = n_units ** np.arange(n, dtype=np.int64)
    return perm @ perm_weights + (n**n) * (diag @ diag_weights)


@njit
def monomial_encode_loop(perm, diag, n_units):
    m, n = perm.shape
    offset = 1
    for _ in range(n):
        offset *= n
    out = np.empty(m, dtype=np.int64)
    for k in range(m):
        pc = 0
        dc = 0
        pw = 1
        dw = 1
        for i in range(n):
            pc += perm[k, i] * pw
            dc += diag[k, i] * dw
            pw *= n
            dw *= n_units
        out[k] = pc + offset * dc
    return out


def monomial_encode(perm, diag, n_units):
    """Injective int64 code of each matrix (mixed radix on perm and diag)."""
    perm = np.ascontiguousarray(perm, dtype=np.int64)
    diag = np.ascontiguousarray(diag, dtype=np.int64)
    if use_numba():
        return monomial_encode_loop(perm, diag, int(n_units))
    return monomial_encode_numpy(perm, diag, int(n_units))


def monomial_decode(codes, n, n_units):
    codes = np.asarray(codes, dtype=np.int64)
    offset = n**n
    pc = codes % offset
    dc = codes // offset
    perm = np.empty((codes.shape[0], n), dtype=np.int64)
    diag = np.empty((codes.shape[0], n), dtype=np.int64)
    for i in range(n):
        perm[:, i] = pc % n
        pc = pc // n
        diag[:, i] = dc % n_units
        dc = dc // n_units
    return perm, diag


# --------------------------------------------------------------------------
# cocycle model of M(Z/d)


def _reduce(vec, modulus):
    return vec % modulus if modulus > 0 else vec


def cocycle_product_numpy(bit_a, vec_a, bit_b, vec_b, modulus):
    vec = _reduce(vec_a + vec_b, modulus)
    if modulus % 2 == 1:
        return np.zeros_like(bit_a), vec
    ea = vec_a & 1
    fb = vec_b & 1
    below = np.cumsum(fb, axis=1) - fb  # sum of f_l over l < k
    c = np.sum(ea * below, axis=1) & 1
    return (bit_a + bit_b + c) & 1, vec


@njit
def cocycle_product_loop(bit_a, vec_a, bit_b, vec_b, modulus):
    m, n = vec_a.shape
    bit = np.empty(m, dtype=np.int64)
    vec = np.empty((m, n), dtype=np.int64)
    for k in range(m):
        c = 0
        below = 0
        for i in range(n):
            c += (vec_a[k, i] & 1) * below
            below += vec_b[k, i] & 1
            s = vec_a[k, i] + vec_b[k, i]
            if modulus > 0:
                s = s % modulus
            vec[k, i] = s
        if modulus % 2 == 1:
            bit[k] = 0
        else:
            bit[k] = (bit_a[k] + bit_b[k] + c) & 1
    return bit, vec


def cocycle_product(bit_a, vec_a, bit_b, vec_b, modulus):
    """Batched products ``(r, e)(s, f) = (r + s + c(e, f), e + f)``.

    ``c(e, f) = sum_{k > l} e_k f_l mod 2``; for odd moduli the bit is
    identically zero.  Exponents must be reduced representatives
    (``0 <= e < d`` for ``d > 0``) so that parities are well defined.
    """
    args = [np.ascontiguousarray(x, dtype=np.int64) for x in (bit_a, vec_a, bit_b, vec_b)]
    if use_numba():
        return cocycle_product_loop(*args, int(modulus))
    return cocycle_product_numpy(*args, int(modulus))


def cocycle_inverse(bit, vec, modulus):
    neg = _reduce(-np.asarray(vec, dtype=np.int64), modulus)
    zero_bit = np.zeros_like(np.asarray(bit, dtype=np.int64))
    # (r, e)(s, -e) = (r + s + c(e, -e), 0) forces s = r + c(e, -e)
    c_bit, _ = cocycle_product(zero_bit, vec, zero_bit, neg, modulus)
    if modulus % 2 == 1:
        return zero_bit, neg
    return (np.asarray(bit, dtype=np.int64) + c_bit) & 1, neg
