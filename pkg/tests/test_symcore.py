import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussrd.exceptions import DomainError
from gaussrd.symcore import (
    J,
    SymplecticForm,
    bosonic_entropy,
    check_uncertainty,
    gaussian_entropy,
    log_scale,
    psd_sqrt,
    purification_beta,
    purification_cm,
    quadratic_expectation,
    require_physical,
    rotation,
    symplectic_eigenvalues,
    williamson_one_mode,
)


def one_mode(gamma_s, log_z, theta):
    r = rotation(theta)
    z = math.exp(log_z)
    return r @ np.diag([gamma_s * z, gamma_s / z]) @ r.T


one_mode_cms = st.builds(
    one_mode,
    st.floats(1.0, 30.0),
    st.floats(-2.0, 2.0),
    st.floats(0.0, math.pi),
)


def mp_g(x):
    x = mpmath.mpf(x)
    if x == 0:
        return mpmath.mpf(0)
    return ((x + 1) * mpmath.log(x + 1) - x * mpmath.log(x)) / mpmath.log(2)


class TestBosonicEntropy:
    def test_zero(self):
        assert bosonic_entropy(0.0) == 0.0

    @pytest.mark.parametrize("x", [1e-8, 0.005, 0.25, 1.0, 7.5, 1e4])
    def test_against_mpmath(self, x):
        mpmath.mp.dps = 40
        assert bosonic_entropy(x) == pytest.approx(float(mp_g(x)), rel=1e-13, abs=1e-15)

    def test_quarter_photon_in_bits(self):
        assert bosonic_entropy(0.25) == pytest.approx(0.902410118609203, abs=1e-14)

    def test_nats_conversion(self):
        assert bosonic_entropy(1.0, "nats") == pytest.approx(2 * math.log(2))
        assert bosonic_entropy(1.0, "bits") == pytest.approx(2.0)

    def test_vectorised(self):
        x = np.array([0.0, 0.25, 1.0])
        np.testing.assert_allclose(bosonic_entropy(x), [0.0, 0.902410118609203, 2.0], atol=1e-14)

    def test_rejects_negative(self):
        with pytest.raises(DomainError):
            bosonic_entropy(-0.1)

    def test_unknown_base(self):
        with pytest.raises(DomainError):
            log_scale("dits")


class TestSymplecticForm:
    def test_joint_form_signs(self):
        m = SymplecticForm.joint(1).matrix
        np.testing.assert_array_equal(m[:2, :2], J)
        np.testing.assert_array_equal(m[2:, 2:], -J)

    def test_flip_maps_to_standard(self):
        f = SymplecticForm.joint(2)
        d = f.flip()
        np.testing.assert_array_equal(d @ f.matrix @ d, SymplecticForm.standard(4).matrix)

    def test_bad_signs(self):
        with pytest.raises(DomainError):
            SymplecticForm((1, 0))


class TestEigenvalues:
    def test_thermal(self):
        np.testing.assert_allclose(symplectic_eigenvalues(3.0 * np.eye(2)), [3.0])

    def test_direct_sum_descending(self):
        g = np.zeros((4, 4))
        g[:2, :2] = one_mode(4.0, 0.7, 0.3)
        g[2:, 2:] = 1.5 * np.eye(2)
        np.testing.assert_allclose(symplectic_eigenvalues(g), [4.0, 1.5])

    @given(one_mode_cms)
    def test_one_mode_is_sqrt_det(self, g):
        assert symplectic_eigenvalues(g)[0] == pytest.approx(math.sqrt(np.linalg.det(g)), rel=1e-10)

    def test_sign_flip_invariance_of_joint_form(self):
        # a product state has the same spectrum under either orientation
        g = np.zeros((4, 4))
        g[:2, :2] = one_mode(2.0, 0.2, 0.1)
        g[2:, 2:] = one_mode(3.0, -0.4, 1.1)
        np.testing.assert_allclose(
            symplectic_eigenvalues(g, SymplecticForm.joint()), symplectic_eigenvalues(g)
        )

    def test_rejects_asymmetric(self):
        with pytest.raises(DomainError):
            symplectic_eigenvalues(np.array([[2.0, 0.1], [0.0, 2.0]]))

    def test_rejects_odd_size(self):
        with pytest.raises(DomainError):
            symplectic_eigenvalues(np.eye(3))


class TestUncertainty:
    def test_vacuum_is_boundary(self):
        rep = check_uncertainty(np.eye(2))
        assert rep.valid
        assert abs(rep.min_eigenvalue) < 1e-12

    def test_subvacuum_rejected(self):
        rep = check_uncertainty(0.5 * np.eye(2))
        assert not rep.valid
        assert rep.min_eigenvalue == pytest.approx(-0.5)
        with pytest.raises(DomainError):
            require_physical(0.5 * np.eye(2))

    def test_squeezed_vacuum_valid(self):
        assert check_uncertainty(np.diag([4.0, 0.25])).valid

    @given(one_mode_cms)
    def test_valid_implies_nu_at_least_one(self, g):
        assert check_uncertainty(g).valid
        assert symplectic_eigenvalues(g)[-1] >= 1.0 - 1e-10


class TestWilliamson:
    @given(one_mode_cms)
    def test_residual(self, g):
        w = williamson_one_mode(g)
        np.testing.assert_allclose(w.S.T @ g @ w.S, w.gamma_s * np.eye(2), atol=1e-12 * w.gamma_s * 10)
        assert np.linalg.det(w.S) == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(w.S.T @ J @ w.S, J, atol=1e-12)

    def test_pure_snaps_to_one(self):
        w = williamson_one_mode(np.diag([3.0, 1.0 / 3.0]))
        assert w.gamma_s == 1.0
        assert w.n_s == 0.0


class TestPurification:
    @given(one_mode_cms)
    @settings(max_examples=50)
    def test_one_mode_pure(self, g):
        p = purification_cm(g)
        np.testing.assert_array_equal(p[:2, :2], g)
        np.testing.assert_array_equal(p[2:, 2:], g)
        np.testing.assert_allclose(symplectic_eigenvalues(p, SymplecticForm.joint()), [1.0, 1.0], atol=1e-9)

    def test_one_mode_beta_is_scaled_j(self):
        g = one_mode(2.5, 0.4, 0.9)
        np.testing.assert_allclose(purification_beta(g), math.sqrt(2.5**2 - 1) * J, atol=1e-12)

    @pytest.mark.parametrize("n", [2, 3])
    def test_multimode_pure(self, rng, n):
        a = rng.normal(size=(2 * n, 2 * n))
        g = a @ a.T + 1.5 * np.eye(2 * n)
        g = g / symplectic_eigenvalues(g)[-1] * 1.2
        p = purification_cm(g)
        nu = symplectic_eigenvalues(p, SymplecticForm.joint(n))
        np.testing.assert_allclose(nu, np.ones(2 * n), atol=1e-8)

    def test_entropy_of_purification_vanishes(self):
        p = purification_cm(3.0 * np.eye(2))
        assert abs(gaussian_entropy(p, SymplecticForm.joint())) < 1e-9


def test_gaussian_entropy_thermal():
    assert gaussian_entropy(1.5 * np.eye(2)) == pytest.approx(0.902410118609203, abs=1e-13)


def test_psd_sqrt_squares_back(rng):
    a = rng.normal(size=(3, 3))
    a = a @ a.T
    r = psd_sqrt(a)
    np.testing.assert_allclose(r @ r, a, atol=1e-12)
    np.testing.assert_allclose(r, r.T)


def test_quadratic_expectation_vacuum():
    # <X^2 + P^2> on the vacuum is 1 in these units
    assert quadratic_expectation(np.eye(2), np.eye(2)) == pytest.approx(0.5)


def test_pure_beta_is_exactly_zero():
    # det is 1 only up to roundoff here
    g = one_mode(1.0, 1.3, 0.77)
    np.testing.assert_array_equal(purification_beta(g), np.zeros((2, 2)))
