import numpy as np
import pytest
from hypothesis import given, strategies as st

from isacsim.array import (UlaConfig, beampattern, beampattern_from_columns, dft_grid, steering,
                           steering_matrix)
from isacsim.errors import InputError

angles = st.floats(-np.pi / 2, np.pi / 2, allow_nan=False)
sizes = st.integers(1, 64)


def random_psd(rng, M, rank=3):
    F = rng.standard_normal((M, rank)) + 1j * rng.standard_normal((M, rank))
    return F @ F.conj().T


def test_steering_broadside_is_all_ones():
    np.testing.assert_allclose(steering(UlaConfig(4), 0.0), np.ones(4))


def test_steering_endfire_alternates():
    np.testing.assert_allclose(steering(2, np.pi / 2), [1, -1], atol=1e-15)


def test_steering_element_phase():
    a = steering(5, 0.3)
    np.testing.assert_allclose(a, np.exp(1j * np.pi * np.arange(5) * np.sin(0.3)))
    assert np.vdot(steering(16, 0.3), steering(16, 0.3)).real == pytest.approx(16, abs=1e-12)


def test_invalid_inputs():
    with pytest.raises(InputError):
        UlaConfig(0)
    with pytest.raises(InputError):
        steering(4, 2.0)
    with pytest.raises(InputError):
        beampattern(2, np.array([[1, 1], [0, 1]]), 0.0)


def test_steering_matrix_columns():
    th = [-0.4, 0.1, 1.2]
    S = steering_matrix(7, th)
    for i, t in enumerate(th):
        np.testing.assert_allclose(S[:, i], steering(7, t))


def test_beampattern_isotropic():
    M = 8
    for th in np.linspace(-1.5, 1.5, 7):
        assert beampattern(M, np.eye(M) / M, th) == pytest.approx(1 / M)


def test_beampattern_steered_unit_trace():
    M, th0 = 12, 0.4
    a = steering(M, th0)
    X = np.outer(a.conj(), a) / M
    assert beampattern(M, X, th0) == pytest.approx(1.0)


def test_dft_grid_sum_equals_trace(rng):
    for M in (1, 2, 7, 16, 33):
        X = random_psd(rng, M)
        total = sum(M * beampattern(M, X, t) for t in dft_grid(M))
        assert total == pytest.approx(M * np.trace(X).real, rel=1e-12)


def test_columns_route_matches_matrix_route(rng):
    F = rng.standard_normal((9, 2)) + 1j * rng.standard_normal((9, 2))
    th = np.array([-0.7, 0.0, 0.9])
    direct = [beampattern(9, F @ F.conj().T, t) for t in th]
    np.testing.assert_allclose(beampattern_from_columns(F, th), direct, rtol=1e-12)


@given(M=sizes, theta=angles)
def test_steering_norm_property(M, theta):
    a = steering(M, theta)
    assert abs(np.vdot(a, a).real - M) <= 1e-12 * M


@given(M=st.integers(1, 24), theta=angles, seed=st.integers(0, 2**31))
def test_beampattern_linear_and_bounded(M, theta, seed):
    rng = np.random.default_rng(seed)
    X1, X2 = random_psd(rng, M), random_psd(rng, M, 1)
    p1, p2 = beampattern(M, X1, theta), beampattern(M, X2, theta)
    p12 = beampattern(M, X1 + X2, theta)
    assert p12 == pytest.approx(p1 + p2, rel=1e-10, abs=1e-12)
    assert p1 <= np.linalg.eigvalsh(X1)[-1] * (1 + 1e-10) + 1e-12
    assert p1 >= -1e-12
