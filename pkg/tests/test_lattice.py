import math

import numpy as np
import pytest

from isotower.lattice import (
    as_int_matrix,
    exgcd,
    hermite_normal_form,
    inv_2x2_det1,
    kernel,
    normal_form,
    same_lattice,
    to_lists,
)


@pytest.mark.parametrize("a", range(-6, 7))
@pytest.mark.parametrize("b", [-9, -4, 0, 1, 5, 12])
def test_exgcd(a, b):
    m = exgcd(a, b)
    assert m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] == 1
    assert to_lists(m @ np.array([a, b], dtype=object).reshape(2, 1)) == [[math.gcd(a, b)], [0]]


def test_exgcd_divisor_keeps_the_first_row_simple():
    assert exgcd(3, 9)[0, 1] == 0


def test_inv_2x2_det1():
    m = exgcd(12, 18)
    assert to_lists(inv_2x2_det1(m) @ m) == [[1, 0], [0, 1]]
    with pytest.raises(ValueError):
        inv_2x2_det1(np.array([[2, 0], [0, 1]], dtype=object))


def test_kernel_of_a_row():
    k = kernel([[1, 2, 3]])
    assert k.shape == (3, 2)
    assert to_lists(np.array([[1, 2, 3]], dtype=object) @ k) == [[0, 0]]
    assert same_lattice(k.T, [[-2, 1, 0], [-3, 0, 1]])


def test_kernel_of_an_empty_matrix():
    assert to_lists(kernel([], cols=3)) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_kernel_of_an_invertible_matrix():
    assert kernel([[2, 1], [1, 1]]).shape == (2, 0)


def test_hermite_normal_form():
    assert to_lists(hermite_normal_form([[2, 0], [0, 3], [2, 3]])) == [[2, 0], [0, 3]]
    assert to_lists(hermite_normal_form([[0, -4], [0, 6]])) == [[0, 2]]


def test_same_lattice():
    assert same_lattice([[1, 0], [0, 1]], [[1, 1], [0, 1]])
    assert not same_lattice([[2, 0], [0, 1]], [[1, 0], [0, 1]])
    assert not same_lattice([[1, 0]], [[1, 0], [0, 1]])


def test_normal_form():
    a = as_int_matrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    d, t, tinv = normal_form(a)
    assert all(d[i, j] == 0 for i in range(3) for j in range(3) if i != j)
    assert to_lists(t @ tinv) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert same_lattice(d, a @ tinv)
