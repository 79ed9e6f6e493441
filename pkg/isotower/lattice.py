# isotower/lattice.py
"""
Exact integer lattice algebra on object-dtype numpy arrays: unimodular
elimination, integer kernels and row Hermite normal forms.
"""

import logging
from typing import Tuple

import numpy as np

logger = logging.getLogger(__name__)


def as_int_matrix(a, cols: int = 0) -> np.ndarray:
    """Python-int object array; an empty input keeps `cols` columns."""
    m = np.array(a, dtype=object)
    if m.size == 0:
        return np.zeros((0, cols), dtype=object)
    return m.reshape(m.shape[0], -1)


def exgcd(a: int, b: int) -> np.ndarray:
    """
    A 2×2 integer matrix M of determinant 1 with M @ [a, b] = [gcd(a, b), 0].
    When a divides b, M[0, 1] is 0.
    """
    sa = -1 if a < 0 else 1
    sb = -1 if b < 0 else 1
    a, b = a * sa, b * sb
    # Euclid on [b, a] tracking the row operations
    m = np.array([[b, 0, 1], [a, 1, 0]], dtype=object)
    while m[1, 0] != 0:
        q = m[0, 0] // m[1, 0]
        m[0] -= q * m[1]
        m = m[::-1]
    g = m[0, 0]
    ops = m[:, 1:] * np.array([sa, sb], dtype=object)
    if g != 0:
        ops[1] = [-sb * b // g, sa * a // g]
    else:
        ops = np.eye(2, dtype=object)
    return ops


def inv_2x2_det1(m: np.ndarray) -> np.ndarray:
    if m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] != 1:
        raise ValueError("matrix does not have determinant 1")
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=object)


def normal_form(a) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    (D, T, Tinv) with D = S·A·Tinv diagonal for some unimodular S, T·Tinv = I.

    Columns are cleared with row operations and rows with column operations,
    alternating until both are clear, one pivot at a time.  No divisibility
    between the diagonal entries is enforced.
    """
    d = as_int_matrix(a).copy()
    rows, cols = d.shape
    t = np.eye(cols, dtype=object)
    tinv = np.eye(cols, dtype=object)

    def clear_col(i: int) -> bool:
        if all(d[j, i] == 0 for j in range(i + 1, rows)):
            return False
        for j in range(i + 1, rows):
            m = exgcd(d[i, i], d[j, i])
            d[[i, j]] = m @ d[[i, j]]
        return True

    def clear_row(i: int) -> bool:
        if all(d[i, j] == 0 for j in range(i + 1, cols)):
            return False
        for j in range(i + 1, cols):
            m = exgcd(d[i, i], d[i, j]).T
            d[:, [i, j]] = d[:, [i, j]] @ m
            t[[i, j]] = inv_2x2_det1(m) @ t[[i, j]]
            tinv[:, [i, j]] = tinv[:, [i, j]] @ m
        return True

    for i in range(min(rows, cols)):
        clear_col(i)
        while clear_row(i) and clear_col(i):
            pass
    return d, t, tinv


def kernel(a, cols: int = 0) -> np.ndarray:
    """Integer matrix whose columns are a ℤ-basis of {x : A·x = 0}."""
    m = as_int_matrix(a, cols)
    d, _, tinv = normal_form(m)
    n = m.shape[1]
    diag = [d[i, i] if i < min(d.shape) else 0 for i in range(n)]
    keep = [i for i in range(n) if diag[i] == 0]
    return tinv[:, keep] if keep else np.zeros((n, 0), dtype=object)


def hermite_normal_form(rows) -> np.ndarray:
    """
    Row Hermite normal form of the lattice spanned by the rows: echelon,
    positive pivots, entries above each pivot reduced into [0, pivot),
    zero rows dropped.  Two lattices are equal iff their forms are.
    """
    h = as_int_matrix(rows).copy()
    n_rows, n_cols = h.shape
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        for j in range(r + 1, n_rows):
            if h[j, c] != 0:
                m = exgcd(h[r, c], h[j, c])
                h[[r, j]] = m @ h[[r, j]]
        if h[r, c] == 0:
            continue
        if h[r, c] < 0:
            h[r] = -h[r]
        for i in range(r):
            h[i] -= (h[i, c] // h[r, c]) * h[r]
        r += 1
    return h[:r]


def same_lattice(a, b) -> bool:
    ha, hb = hermite_normal_form(a), hermite_normal_form(b)
    return ha.shape == hb.shape and bool(np.all(ha == hb))


def to_lists(m: np.ndarray):
    return [[int(x) for x in row] for row in np.asarray(m, dtype=object)]
