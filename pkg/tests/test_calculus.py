import numpy as np
import pytest
from numpy.testing import assert_allclose

from isotower.calculus import (
    EXP,
    SQRT,
    P_k,
    ScalarFunction,
    apply_to_spectrum,
    exp_h,
    is_injective,
    kappa,
    kappa_inv,
    lambda_k,
    level_threshold,
    log_h,
    rho,
    sigma,
    spectral_norm_bound,
    top_block_size,
    tower_weight,
)
from isotower.errors import DomainError, InvalidInput, NotInjective
from isotower.linalg import adjoint
from isotower.random_instances import haar_isometry, random_hermitian, random_injective


def test_exp_of_zero_is_identity():
    assert_allclose(exp_h(np.zeros((3, 3))), np.eye(3))


def test_square_matches_matrix_product():
    a = np.array([[2.0, 1.0], [1.0, 2.0]])
    out = apply_to_spectrum(ScalarFunction(np.square, name="square"), a)
    assert_allclose(out, [[5.0, 4.0], [4.0, 5.0]], atol=1e-12)


def test_log_inverts_exp(rng):
    a = random_hermitian(4, rng)
    assert_allclose(log_h(exp_h(a)), a, atol=1e-9)


def test_domain_is_enforced():
    with pytest.raises(DomainError):
        log_h(np.diag([0.0, 1.0]))
    with pytest.raises(DomainError):
        apply_to_spectrum(SQRT, np.diag([-1.0, 1.0]))
    # roundoff below zero is clamped
    assert_allclose(apply_to_spectrum(SQRT, np.diag([-1e-14, 4.0])), np.diag([0.0, 2.0]), atol=1e-12)


def test_non_finite_results_are_rejected():
    with pytest.raises(DomainError):
        apply_to_spectrum(EXP, np.diag([1000.0, 0.0]))


def test_rho_examples():
    assert_allclose(rho(np.array([[-2.0]])), [[2.0]])
    theta = haar_isometry(4, 2, 3)
    assert_allclose(rho(theta), np.eye(2), atol=1e-12)
    r = rho(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert_allclose(r @ r, [[1.0, 1.0], [1.0, 2.0]], atol=1e-10)


def test_sigma_of_positive_scalar_is_identity():
    data = sigma(2.5 * np.eye(3))
    assert_allclose(data.sigma, np.eye(3), atol=1e-12)
    assert data.rank == 3


def test_sigma_on_a_kernel():
    data = sigma(np.diag([0.0, 3.0]))
    assert data.rank == 1
    assert_allclose(data.sigma_domain, np.diag([0.0, 1.0]), atol=1e-12)
    assert_allclose(data.sigma @ np.array([0.0, 1.0]), [0.0, 1.0], atol=1e-12)


def test_polar_recomposition(rng):
    g = random_injective(5, 3, rng)
    data = sigma(g)
    assert_allclose(adjoint(data.sigma) @ data.sigma, np.eye(3), atol=1e-9)
    assert_allclose(data.sigma @ data.rho, g, atol=1e-9)


def test_is_injective():
    assert is_injective(np.eye(3, 2))
    assert not is_injective(np.diag([0.0, 1.0]))
    assert not is_injective(np.ones((1, 2)))


def test_kappa_examples():
    theta0 = haar_isometry(3, 2, 5)
    assert_allclose(kappa(np.zeros((2, 2)), np.eye(2)), -np.eye(2))
    assert_allclose(kappa(np.eye(2), theta0), -np.e * theta0, atol=1e-12)


def test_kappa_inv_examples():
    theta0 = haar_isometry(3, 2, 5)
    alpha, theta = kappa_inv(-np.e * theta0)
    assert_allclose(alpha, np.eye(2), atol=1e-12)
    assert_allclose(theta, theta0, atol=1e-12)
    alpha, theta = kappa_inv(-np.eye(2))
    assert_allclose(alpha, np.zeros((2, 2)), atol=1e-12)
    assert_allclose(theta, np.eye(2), atol=1e-12)
    with pytest.raises(NotInjective):
        kappa_inv(np.diag([0.0, 1.0]))


def test_kappa_round_trip(rng):
    a = random_hermitian(3, rng)
    theta = haar_isometry(5, 3, rng)
    a2, theta2 = kappa_inv(kappa(a, theta))
    assert_allclose(a2, a, atol=1e-9)
    assert_allclose(theta2, theta, atol=1e-9)


def test_kappa_needs_an_isometry():
    with pytest.raises(InvalidInput):
        kappa(np.zeros((2, 2)), 2 * np.eye(2))


def test_P_k_examples():
    assert_allclose(P_k(np.diag([0.0, 1.0, 2.0]), 1), np.diag([0.0, 0.0, 1.0]), atol=1e-12)
    assert_allclose(P_k(np.diag([0.0, 1.0, 1.0]), 1), np.zeros((3, 3)), atol=1e-12)
    assert_allclose(P_k(np.diag([0.0, 1.0, 1.0]), 2), np.diag([0.0, 1.0, 1.0]), atol=1e-12)
    assert_allclose(P_k(np.diag([0.0, 1.0, 2.0]), 0), np.zeros((3, 3)))
    assert_allclose(P_k(np.diag([0.0, 1.0, 2.0]), 3), np.eye(3), atol=1e-12)
    with pytest.raises(InvalidInput):
        P_k(np.eye(2), 3)


def test_top_block_size():
    assert top_block_size(np.array([0.0, 1.0, 1.0]), 1, 1e-8) == 0
    assert top_block_size(np.array([0.0, 1.0, 1.0]), 2, 1e-8) == 2
    assert top_block_size(np.array([0.0, 1.0, 2.0]), 3, 1e-8) == 3


def test_lambda_k_examples():
    assert_allclose(lambda_k(np.diag([0.0, 1.0, 3.0]), 1), np.diag([0.0, 0.0, 2.0]), atol=1e-12)
    assert_allclose(lambda_k(np.diag([1.0, 2.0, 4.0]), 2), np.diag([0.0, 1.0, 3.0]), atol=1e-12)
    with pytest.raises(InvalidInput):
        lambda_k(np.eye(3), 3)


def test_lambda_k_loses_rank_on_repeated_eigenvalues():
    assert_allclose(lambda_k(np.diag([0.0, 1.0, 1.0]), 1), np.zeros((3, 3)), atol=1e-12)


def test_tower_weight_at_the_top_is_exp(rng):
    a = random_hermitian(3, rng)
    assert_allclose(tower_weight(a, 3), exp_h(a))
    assert_allclose(tower_weight(a, 1), lambda_k(a, 1))


def test_spectral_norm_bound():
    assert spectral_norm_bound(np.diag([-5.0, 1.0])) == pytest.approx(5.0)
    assert spectral_norm_bound(np.zeros((0, 0))) == 0.0

def test_sigma_threshold_decides_the_kernel():
    g = np.diag([10.0, 6e-8])
    assert sigma(g).rank == 1
    assert sigma(g, 5e-8).rank == 2
    assert not is_injective(g)
    assert is_injective(g, 5e-8)


def test_level_threshold():
    alpha = np.diag([-5.0, 0.0, 5.0])
    assert level_threshold(alpha, 3) == 0.0
    assert level_threshold(alpha, 1) == pytest.approx(5e-8)
