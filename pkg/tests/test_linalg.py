import numpy as np
import pytest
from numpy.testing import assert_allclose

from isotower.errors import InvalidInput
from isotower.linalg import (
    adjoint,
    as_matrix,
    check_hermitian,
    check_projector,
    complement_frame,
    gram_schmidt_complete,
    hermitian_eig,
    matrix_from_json,
    matrix_to_json,
    numerical_rank,
    operator_norm,
    projector_from_frame,
    projector_rank,
    scale_of,
)


def test_adjoint_small_cases():
    assert_allclose(adjoint(np.array([[1j]])), [[-1j]])
    assert_allclose(adjoint(np.eye(3)), np.eye(3))
    assert_allclose(adjoint(np.array([[0, 1], [0, 0]])), [[0, 0], [1, 0]])


def test_as_matrix_rejects_vectors_and_nan():
    with pytest.raises(InvalidInput):
        as_matrix([1.0, 2.0])
    with pytest.raises(InvalidInput):
        as_matrix([[np.nan, 0.0], [0.0, 1.0]])


def test_check_hermitian_symmetrizes_and_rejects():
    a = np.array([[1.0, 2 + 1j], [2 - 1j, 3.0]])
    assert_allclose(check_hermitian(a), a)
    with pytest.raises(InvalidInput):
        check_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(InvalidInput):
        check_hermitian(np.zeros((2, 3)))


def test_hermitian_eig_sorts_ascending():
    eig = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
    assert_allclose(eig.values, [1.0, 2.0, 3.0])
    assert_allclose(eig.reconstruct(), np.diag([3.0, 1.0, 2.0]), atol=1e-12)


def test_hermitian_eig_swap_matrix():
    eig = hermitian_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert_allclose(eig.values, [-1.0, 1.0], atol=1e-12)
    v = eig.vectors[:, 0]
    assert_allclose(abs(v[0]), 1 / np.sqrt(2), atol=1e-12)
    assert_allclose(v[1] / v[0], -1.0, atol=1e-12)


def test_hermitian_eig_matches_characteristic_polynomial(rng):
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    a = (a + adjoint(a)) / 2
    roots = np.sort(np.roots(np.poly(a)).real)
    assert_allclose(hermitian_eig(a).values, roots, atol=1e-8)


def test_operator_norm():
    assert operator_norm(np.diag([2.0, -3.0])) == pytest.approx(3.0)
    assert operator_norm(np.array([[0.0, 2.0], [0.0, 0.0]])) == pytest.approx(2.0)
    assert operator_norm(np.zeros((0, 0))) == 0.0


def test_operator_norm_against_power_iteration(rng):
    g = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
    gram = adjoint(g) @ g
    v = np.ones(3, dtype=complex)
    for _ in range(500):
        v = gram @ v
        v /= np.linalg.norm(v)
    assert operator_norm(g) == pytest.approx(np.sqrt(np.vdot(v, gram @ v).real), rel=1e-8)


def test_scale_of_is_at_least_one():
    assert scale_of(np.zeros((2, 2))) == 1.0
    assert scale_of(np.eye(2), 5 * np.eye(2)) == pytest.approx(5.0)


def test_projectors_from_frames():
    assert_allclose(projector_from_frame(np.array([[1.0], [0.0]])), np.diag([1.0, 0.0]))
    assert_allclose(projector_from_frame(np.eye(3)), np.eye(3))
    v = np.array([[1.0], [1.0]]) / np.sqrt(2)
    assert_allclose(projector_from_frame(v), [[0.5, 0.5], [0.5, 0.5]], atol=1e-12)


def test_projector_rank():
    v = np.array([[1.0], [2.0], [2.0]]) / 3.0
    assert projector_rank(np.zeros((2, 2))) == 0
    assert projector_rank(np.eye(3)) == 3
    assert projector_rank(v @ adjoint(v)) == 1


def test_check_projector_rejects_oblique():
    with pytest.raises(InvalidInput):
        check_projector(np.array([[1.0, 1.0], [0.0, 0.0]]))


def test_complement_frame_spans_the_rest():
    f = complement_frame(np.diag([1.0, 0.0]))
    assert_allclose(f @ adjoint(f), np.diag([0.0, 1.0]), atol=1e-12)


def test_gram_schmidt_completion_is_deterministic():
    e1 = np.eye(3)[:, :1].astype(complex)
    assert_allclose(gram_schmidt_complete(e1, 2), np.eye(3)[:, 1:], atol=1e-12)
    with pytest.raises(InvalidInput):
        gram_schmidt_complete(e1, 3)


def test_numerical_rank():
    v = np.array([[1.0], [1j]])
    assert numerical_rank(v @ adjoint(v)) == 1
    assert numerical_rank(np.zeros((2, 2))) == 0


def test_matrix_json():
    m = np.array([[1 + 2j, 0], [0, -1]])
    obj = matrix_to_json(m)
    assert obj["rows"] == 2 and obj["cols"] == 2
    assert obj["data"][0] == [1.0, 2.0]
    assert_allclose(matrix_from_json(obj), m)


def test_matrix_json_rejects_malformed():
    with pytest.raises(InvalidInput):
        matrix_from_json({"rows": 2, "cols": 2, "data": [[1.0, 0.0]]})
    with pytest.raises(InvalidInput):
        matrix_from_json({"rows": 1})
