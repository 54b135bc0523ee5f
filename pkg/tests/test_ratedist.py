import math

import numpy as np
import pytest

from gaussrd.channel import GaussianChannel, joint_cm
from gaussrd.coherent import NoiseParams, coherent_info, coherent_info_from_cm, noise_matrix, tau_from_t
from gaussrd.distortion import canonical_distortion
from gaussrd.exceptions import DomainError
from gaussrd.ratedist import (
    GridSpec,
    analyze_source,
    brute_force_rate,
    clipping_point,
    pure_state_rate,
    rate_distortion,
    rate_point,
    rd_curve,
)
from gaussrd.states import family_cm, thermal_cm
from gaussrd.symcore import bosonic_entropy, rotation


@pytest.mark.parametrize("ns", [0.0, 0.1, 0.25, 1.0, 5.0])
def test_zero_distortion_is_entropy(ns):
    assert rate_distortion(thermal_cm(ns), 0.0).r_i == pytest.approx(bosonic_entropy(ns), abs=1e-9)


def test_zero_distortion_squeezed_source():
    g = rotation(0.4) @ np.diag([4.0, 0.75]) @ rotation(0.4).T
    ns = (math.sqrt(3.0) - 1) / 2
    assert rate_distortion(g, 0.0).r_i == pytest.approx(bosonic_entropy(ns), abs=1e-9)


def test_strong_thermal_clipped():
    p = rate_distortion(3 * np.eye(2), 0.5)
    assert p.r_i == 0.0
    assert p.i_c == pytest.approx(-0.2778051511, abs=1e-9)
    assert (p.delta, p.tau) == pytest.approx((0.25, 13 / 9))


def test_spot_value():
    p = rate_distortion(family_cm(3.0, 0.25), 0.1)
    assert p.r_i == pytest.approx(0.36873, abs=1e-4)
    assert p.r_i == pytest.approx(0.3687095132, abs=1e-9)


def test_thermal_tau_formula():
    ns, n_n = 0.4, 0.7
    cosh2r = 1 + 2 * ns * (ns + 1) / (2 * ns + 1) ** 2
    assert rate_distortion(thermal_cm(ns), n_n).tau == pytest.approx(2 * n_n * cosh2r, rel=1e-14)


def test_thermal_shortcut_matches_optimizer():
    a = analyze_source(2.0 * np.eye(2))
    g = 2.0 * np.eye(2) + np.array([[1e-9, 0.0], [0.0, -1e-9]])
    b = analyze_source(g)
    assert a.thermal and not b.thermal
    assert a.omega == pytest.approx(b.omega, abs=1e-7)


class TestPureStateRate:
    @pytest.mark.parametrize("n_n", [0.0, 0.3, 2.0])
    def test_vacuum_source(self, n_n):
        assert pure_state_rate(0.0, n_n) == 0.0

    def test_no_noise(self):
        assert pure_state_rate(1.0, 0.0) == pytest.approx(2.0, abs=1e-14)

    def test_equals_omega_two_closed_form(self):
        expected = max(0.0, coherent_info(NoiseParams(1.0, 0.09, 0.6)))
        assert pure_state_rate(1.0, 0.3) == pytest.approx(expected, abs=1e-12)

    def test_near_pure_reduction(self):
        g = np.diag([(1 + 1e-9) * 2.0, (1 + 1e-9) / 2.0])
        src = analyze_source(g)
        for n_n in np.linspace(0, 3, 13):
            assert rate_point(src, n_n).r_i == pytest.approx(pure_state_rate(src.n_s, n_n), abs=1e-6)


@pytest.mark.parametrize("trace", [2.0, 3.0, 10.0])
def test_pure_family_identically_zero(trace):
    curve = rd_curve(family_cm(trace, 0.0), np.linspace(0, 5, 201))
    assert all(p.r_i == 0.0 for p in curve)


def test_curve_monotone(rng):
    grid = np.linspace(0, 4, 101)
    for _ in range(5):
        r = np.array([p.r_i for p in rd_curve(thermal_cm(rng.exponential(1.0)), grid)])
        assert np.all(np.diff(r) <= 1e-12)


def test_strong_thermal_curve():
    grid = np.linspace(0, 3, 61)
    r = np.array([p.r_i for p in rd_curve(3 * np.eye(2), grid)])
    assert r[0] == pytest.approx(2.0, abs=1e-12)
    assert np.all(np.diff(r) <= 0)
    # the rate vanishes well before 2 sinh 2r_s = 2.0847
    assert r[grid >= 2.0847].max() == 0.0


def test_curve_grid_validation():
    with pytest.raises(DomainError):
        rd_curve(thermal_cm(0.5), [0.0, 1.0, 0.5])
    with pytest.raises(DomainError):
        rd_curve(thermal_cm(0.5), [-0.1, 1.0])


def test_negative_distortion_rejected():
    with pytest.raises(DomainError):
        rate_distortion(thermal_cm(0.5), -0.1)


class TestClippingPoint:
    @pytest.mark.parametrize("ns", [0.05, 0.25, 1.0])
    def test_before_two_sinh_bound(self, ns):
        gs = 2 * ns + 1
        bound = 2 * math.sqrt(((gs * gs - 1) / (gs * gs) + 2) ** 2 / 4 - 1)
        z = clipping_point(thermal_cm(ns))
        assert 0 < z < bound
        assert rate_distortion(thermal_cm(ns), bound).r_i == 0.0
        assert abs(rate_distortion(thermal_cm(ns), z).i_c) < 1e-9

    def test_pure(self):
        assert clipping_point(family_cm(3.0, 0.0)) is None


class TestBruteForce:
    def test_weak_signal_argmin(self):
        bf = brute_force_rate(thermal_cm(0.005), 0.2)
        assert bf.delta_star == pytest.approx(0.04)
        closed = rate_distortion(thermal_cm(0.005), 0.2).i_c
        assert bf.i_min == pytest.approx(closed, abs=1e-12)

    def test_pure_grid_nonpositive(self):
        g = family_cm(3.0, 0.0)
        src = analyze_source(g)
        deltas = np.linspace(0, 0.25, 11)
        for t in (-1.0, 0.0, 1.0):
            for d in deltas:
                assert coherent_info(NoiseParams(0.0, d, tau_from_t(0.5, d, src.omega, t))) <= 0.0
        assert rate_distortion(g, 0.5).r_i == 0.0

    def test_strong_source_argmin_near_diagonal(self):
        bf = brute_force_rate(3 * np.eye(2), 0.3)
        assert round(abs(bf.delta_star - 0.09) / bf.delta_step) <= 1

    def test_strong_source_grid_below_closed_form(self):
        # the grid finds channels of the same canonical distortion with lower
        # coherent information than delta = N_n^2; confirm one as an explicit channel
        g = 3 * np.eye(2)
        src = analyze_source(g)
        bf = brute_force_rate(g, 0.3, source=src)
        closed = rate_point(src, 0.3).i_c
        assert bf.i_min < closed - 1e-3
        N = noise_matrix(0.3, bf.delta_star, bf.t_star, src.minimum.M_star, src.S)
        ch = GaussianChannel(src.minimum.M_star, N)
        assert canonical_distortion(ch, g, src.minimum).n_n == pytest.approx(0.3, abs=1e-12)
        assert coherent_info_from_cm(joint_cm(ch, g)) == pytest.approx(bf.i_min, abs=1e-9)

    def test_grid_validation(self):
        with pytest.raises(DomainError):
            GridSpec(2, 81)
