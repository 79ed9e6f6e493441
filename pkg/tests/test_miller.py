import numpy as np
import pytest
from numpy.testing import assert_allclose

from isotower.calculus import P_k
from isotower.errors import InvalidInput, OutsideChart
from isotower.linalg import adjoint, frame_of_projector, is_isometry, numerical_rank
from isotower.miller import (
    FiltrationPoint,
    cayley,
    cayley_inv,
    derivative_deviation,
    filtration_level,
    g0_g1_homotopy,
    g0_map,
    g1_map,
    gamma_diffeo,
    gamma_diffeo_inv,
    gamma_section,
    hermitian_basis,
    in_chart_A,
    in_chart_B,
    inclusion,
    interpolated_log,
    make_filtration_point,
    res_k_inverse_on_B,
    res_k_map,
    split_gamma,
    top_splitting_derivative_check,
)
from isotower.random_instances import haar_unitary, random_hermitian, random_thom_point, random_tower_point
from isotower.tower import point_deviation


def test_inclusion():
    assert_allclose(inclusion(3, 2), [[1, 0], [0, 1], [0, 0]])
    with pytest.raises(InvalidInput):
        inclusion(1, 2)


def test_filtration_levels():
    j = inclusion(3, 2)
    assert filtration_level(FiltrationPoint(j)) == 0
    assert filtration_level(FiltrationPoint(-j)) == 2
    assert filtration_level(FiltrationPoint(j @ np.diag([-1.0, 1.0]))) == 1


def test_filtration_level_is_the_numerical_rank():
    j = inclusion(3, 2)
    phi = j.copy()
    phi[:, 0] = [np.cos(1e-9), 0.0, np.sin(1e-9)]
    assert filtration_level(FiltrationPoint(phi)) == numerical_rank(phi - j, 1e-8) == 1


def test_make_filtration_point_needs_an_isometry():
    with pytest.raises(InvalidInput):
        make_filtration_point(2 * inclusion(3, 2))
    with pytest.raises(InvalidInput):
        make_filtration_point(np.eye(2, 3))


def test_gamma_section_and_diffeo(rng):
    frame = haar_unitary(3, rng)[:, :1]
    w = frame @ adjoint(frame)
    section = gamma_section(w, 4)
    assert filtration_level(section) == 1
    delta = gamma_diffeo(w, section.phi)
    assert_allclose(delta, -inclusion(4, 3) @ w, atol=1e-12)
    assert_allclose(gamma_diffeo_inv(w, delta), section.phi, atol=1e-12)


def test_gamma_diffeo_needs_agreement_off_W():
    with pytest.raises(InvalidInput):
        gamma_diffeo(np.diag([1.0, 0.0]), -np.eye(2))


def test_cayley_values():
    assert_allclose(cayley(np.zeros((2, 2))), -np.eye(2))
    assert_allclose(cayley(np.array([[2.0]])), [[-1j]], atol=1e-12)


def test_cayley_is_unitary_and_invertible(rng):
    delta = random_hermitian(3, rng)
    phi = cayley(delta)
    assert is_isometry(phi)
    assert_allclose(cayley_inv(phi), delta, atol=1e-9)


def test_cayley_inv_outside_the_chart():
    with pytest.raises(OutsideChart):
        cayley_inv(np.eye(2))
    with pytest.raises(InvalidInput):
        cayley_inv(np.eye(3, 2))


def test_res_k_of_the_inclusion(rng):
    alpha = random_hermitian(3, rng)
    x = res_k_map(alpha, FiltrationPoint(inclusion(4, 3)), 2)
    pf = frame_of_projector(P_k(alpha, 2))
    assert_allclose(x.theta() @ pf, inclusion(4, 3) @ pf, atol=1e-10)


def test_res_k_example():
    x = res_k_map(np.diag([2.0, 0.0]), FiltrationPoint(np.diag([-1.0, 1.0])), 1)
    assert_allclose(x.theta() @ np.array([1.0, 0.0]), [-1.0, 0.0], atol=1e-12)


def test_res_k_rejects_high_levels():
    with pytest.raises(InvalidInput):
        res_k_map(np.diag([2.0, 0.0]), FiltrationPoint(-np.eye(2)), 1)


def test_chart_membership(rng):
    alpha = random_hermitian(3, rng)
    assert not in_chart_A(alpha, FiltrationPoint(inclusion(4, 3)), 2)
    assert in_chart_A(alpha, FiltrationPoint(-inclusion(4, 3)), 2)
    assert in_chart_B(random_tower_point(3, 4, 2, rng))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_res_k_inverse_on_B(k, rng):
    x = random_tower_point(3, 4, k, rng)
    p = res_k_inverse_on_B(x)
    assert is_isometry(p.phi)
    assert filtration_level(p) <= k
    assert point_deviation(res_k_map(x.alpha, p, k), x) < 1e-9


def test_split_gamma(rng):
    z = random_thom_point(2, 3, 1, rng)
    alpha_h, beta_h = split_gamma(z)
    assert_allclose(alpha_h + beta_h, z.gamma, atol=1e-12)
    assert_allclose(z.W @ adjoint(inclusion(3, 2)) @ alpha_h, np.zeros((2, 2)), atol=1e-12)


def test_interpolated_log():
    x = np.array([0.5, 1.0, 3.0])
    assert_allclose(interpolated_log(x, 0.0), np.log(x))
    assert_allclose(interpolated_log(x, 1.0), x - 1.0, atol=1e-12)
    with pytest.raises(InvalidInput):
        interpolated_log(np.array([0.0]), 0.0)


def test_g0_g1_homotopy_endpoints():
    for seed in range(3):
        z = random_thom_point(2, 3, 1, seed)
        assert_allclose(g0_g1_homotopy(0.0, z), g0_map(z), atol=1e-9)
        assert_allclose(g0_g1_homotopy(1.0, z), g1_map(z), atol=1e-9)


def test_g0_g1_homotopy_time_range(rng):
    z = random_thom_point(2, 3, 1, rng)
    with pytest.raises(InvalidInput):
        g0_g1_homotopy(1.5, z)
    with pytest.raises(InvalidInput):
        g0_g1_homotopy(-0.1, z)


def test_hermitian_basis_is_orthonormal():
    basis = hermitian_basis(3)
    assert len(basis) == 9
    gram = np.array([[np.trace(adjoint(a) @ b) for b in basis] for a in basis])
    assert_allclose(gram, np.eye(9), atol=1e-12)
    for b in basis:
        assert_allclose(b, adjoint(b))


def test_derivative_is_the_identity():
    assert derivative_deviation(2, 1e-4) <= 1e-3


def test_derivative_error_shrinks_with_the_step():
    coarse = derivative_deviation(2, 1e-3)
    fine = derivative_deviation(2, 5e-4)
    assert fine <= 0.5 * coarse + 1e-12


def test_top_splitting_derivative_check():
    report = top_splitting_derivative_check(1e-4)
    assert report.ok
    assert report.checks[0].id == "miller.derivative.d2"
    with pytest.raises(InvalidInput):
        top_splitting_derivative_check(1e-2)
