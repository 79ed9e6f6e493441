import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from isotower.calculus import rho
from isotower.errors import InvalidInput
from isotower.facial import (
    INF,
    POSITIVE,
    FacialMapSpec,
    chi_map,
    check_facial,
    collapse_bottom_map,
    degree_on_diagonal,
    degree_on_sphere,
    eta,
    exp_identification,
    f_bar_prime,
    frak_A,
    frak_B,
    g_double_prime,
    hat,
    identity_map,
    interval_to_line,
    is_inf,
    line_to_interval,
    log_identification,
    mu,
    nu,
    phi_lift_map,
    r_lift_map,
    reflection_map,
    scale_map,
    shift_map,
    sphere_restriction,
    square_map,
    swap_map,
)
from isotower.random_instances import (
    haar_isometry,
    haar_unitary,
    hermitian_with_spectrum,
    random_hermitian,
    random_injective,
)


def test_identity_is_facial():
    assert check_facial(identity_map(3), 200, 1).ok


def test_collapse_bottom_is_facial():
    assert check_facial(collapse_bottom_map(3), 200, 2).ok


def test_swap_is_caught_with_a_witness():
    report = check_facial(swap_map(3), 200, 3)
    assert not report.ok
    ascending = next(c for c in report.checks if c.id == "facial.swap.ascending")
    assert ascending.status == "fail"
    assert "input" in ascending.witness


def test_builtin_maps_are_facial():
    for f in (square_map(3), chi_map(3), scale_map(2, 3.0), phi_lift_map(3, 1), r_lift_map(3, 2)):
        report = check_facial(f, 200, 4)
        assert report.ok, [c.witness for c in report.failed]


def test_check_facial_records_strata():
    report = check_facial(square_map(3), 40, 5)
    strata = report.checks[0].metrics["strata"]
    assert set(strata) <= {"interior", "face", "diagonal", "zero"}
    assert sum(strata.values()) == 40


def test_check_facial_needs_samples():
    with pytest.raises(InvalidInput):
        check_facial(identity_map(2), 0, 0)


def test_evaluate_at_infinity():
    out, extra = square_map(2).evaluate(INF)
    assert is_inf(out) and extra is None


def test_eta():
    assert_allclose(eta(np.diag([2.0, 0.0, 1.0])), [0.0, 1.0, 2.0])
    assert_allclose(eta(1.5 * np.eye(3)), [1.5, 1.5, 1.5])


def test_eta_matches_hermitian_eig(rng):
    a = random_hermitian(4, rng)
    assert_allclose(eta(a), np.linalg.eigvalsh(a), atol=1e-10)


def test_nu_examples(rng):
    assert_allclose(nu(np.eye(2), (1.0, 2.0)), np.diag([1.0, 2.0]))
    assert_allclose(nu(haar_unitary(3, rng), (0.7, 0.7, 0.7)), 0.7 * np.eye(3), atol=1e-12)


def test_nu_round_trip(rng):
    u = haar_unitary(3, rng)
    t = np.array([-1.0, 0.5, 2.0])
    assert_allclose(eta(nu(u, t)), t, atol=1e-10)


def test_nu_rejects_bad_frames():
    with pytest.raises(InvalidInput):
        nu(2 * np.eye(2), (1.0, 2.0))
    with pytest.raises(InvalidInput):
        nu(np.eye(2), (2.0, 1.0))
    with pytest.raises(InvalidInput):
        nu(np.eye(2), INF)


def test_mu_examples(rng):
    assert_allclose(mu(np.eye(2), np.eye(2)), -np.eye(2))
    theta = haar_isometry(3, 2, rng)
    assert_allclose(mu(theta, np.zeros((2, 2))), np.zeros((3, 2)))
    alpha = hermitian_with_spectrum([0.5, 2.0], rng)
    assert_allclose(rho(mu(theta, alpha)), alpha, atol=1e-10)


def test_mu_needs_psd():
    with pytest.raises(InvalidInput):
        mu(np.eye(2), np.diag([-1.0, 1.0]))


def test_frak_A_shift(rng):
    a = random_hermitian(3, rng)
    out, extra = frak_A(shift_map(3, 0.5), a)
    assert_allclose(out, a + 0.5 * np.eye(3), atol=1e-12)
    assert extra is None


def test_frak_A_square_on_psd(rng):
    a = hermitian_with_spectrum([0.0, 0.5, 2.0], rng)
    out, _ = frak_A(square_map(3), a)
    assert_allclose(out, a @ a, atol=1e-10)


def test_frak_A_collapse_bottom(rng):
    a = hermitian_with_spectrum([-1.0, 0.5, 2.0], rng)
    out, _ = frak_A(collapse_bottom_map(3), a)
    assert_allclose(out, -np.eye(3), atol=1e-10)


def test_frak_A_rejects_non_psd_on_positive_maps():
    with pytest.raises(InvalidInput):
        frak_A(square_map(2), np.diag([-1.0, 1.0]))


def test_frak_B_identity_and_doubling(rng):
    g = random_injective(4, 3, rng)
    out, _ = frak_B(identity_map(3, POSITIVE), g)
    assert_allclose(out, g, atol=1e-10)
    out, _ = frak_B(scale_map(3, 2.0), g)
    assert_allclose(out, 2 * g, atol=1e-10)


def test_frak_B_keeps_the_kernel():
    g = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]])
    out, _ = frak_B(scale_map(2, 2.0), g)
    assert_allclose(out @ np.array([0.0, 1.0]), np.zeros(3), atol=1e-12)


def test_frak_B_needs_a_positive_map(rng):
    with pytest.raises(InvalidInput):
        frak_B(identity_map(2), random_injective(3, 2, rng))


def test_hat_of_identity_is_identity():
    out, _ = hat(identity_map(2, POSITIVE), 3).evaluate([0.5, 1.0, 2.0, 4.0])
    assert_allclose(out, [0.5, 1.0, 2.0, 4.0])


def test_hat_interpolates_between_the_extremes():
    f2 = FacialMapSpec(2, 2, lambda t: t ** 2, variant=POSITIVE, name="sq")
    out, _ = hat(f2, 2).evaluate([1.0, 2.0, 3.0])
    assert_allclose(out, [1.0, 5.0, 9.0])
    out, _ = hat(f2, 2).evaluate(INF)
    assert is_inf(out)


def test_hat_needs_a_map_on_D2():
    with pytest.raises(InvalidInput):
        hat(identity_map(3, POSITIVE), 2)


def test_chi_map_values():
    out, extra = chi_map(2).evaluate([1.0, math.e])
    assert_allclose(out, [0.0, 1.0])
    assert extra == pytest.approx(0.0)
    out, _ = chi_map(2).evaluate([0.0, 1.0])
    assert is_inf(out)


def test_lift_maps():
    out, _ = phi_lift_map(3, 1).evaluate([-1.0, 0.5, 2.0])
    assert_allclose(out, [-1.0, 0.5, 2.5])
    out, _ = r_lift_map(3, 1).evaluate([0.0, 0.0, 1.0])
    assert_allclose(out, [-1.0, -1.0, 0.0])
    out, _ = r_lift_map(3, 1).evaluate([0.0, 0.0, 0.0])
    assert is_inf(out)


def test_identifications():
    assert is_inf(log_identification([0.0, 1.0]))
    assert_allclose(log_identification([1.0, math.e]), [0.0, 1.0])
    assert_allclose(exp_identification([0.0, 1.0]), [1.0, math.e])
    assert is_inf(interval_to_line(0.0))
    assert is_inf(interval_to_line(1.0))
    assert interval_to_line(0.5) == pytest.approx(0.0)
    assert line_to_interval(INF) == 1.0
    assert line_to_interval(interval_to_line(0.3)) == pytest.approx(0.3)


def test_diagonal_degrees():
    assert degree_on_diagonal(identity_map(3)) == 1
    assert degree_on_diagonal(reflection_map()) == -1
    assert degree_on_diagonal(square_map(2)) == 1
    assert degree_on_diagonal(chi_map(3)) == 1


def test_sphere_degrees():
    assert degree_on_sphere(f_bar_prime) == 1
    assert degree_on_sphere(g_double_prime) == 1
    assert degree_on_sphere(sphere_restriction(r_lift_map(2, 1), 2, 1)) == 1


def test_sphere_restriction_needs_a_thom_map():
    with pytest.raises(InvalidInput):
        sphere_restriction(identity_map(3), 3, 1)
    with pytest.raises(InvalidInput):
        sphere_restriction(r_lift_map(3, 3), 3, 3)
