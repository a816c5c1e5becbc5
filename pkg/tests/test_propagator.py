import numpy as np
import pytest

from xhermite.errors import NearPole, NotKreinAdler, SingularTime, TruncationTooSmall
from xhermite.propagator import (
    PropagatorModel,
    closed_form_propagator,
    count_local_minima,
    g_osc_exact,
    g_osc_spectral,
    green_function,
    green_function_exact,
    k_osc,
    k_osc_spectral,
    k_sigma,
    k_sigma_spectral,
    potential,
    schrodinger_residual,
    verify_deltaV_identity,
    verify_eigenfunctions,
    xhermite_functions,
)

rng = np.random.default_rng(7)


def test_k_osc_matches_mehler_sum():
    # t = -i ln 2 gives lambda = e^{-it} = 1/2
    t = -1j * np.log(2.0)
    for x, y in [(0.3, -0.4), (1.1, 0.7), (0.0, 0.0)]:
        assert abs(k_osc(x, y, t) - k_osc_spectral(x, y, t, 80)) < 1e-13


def test_k_osc_singular_time():
    with pytest.raises(SingularTime):
        k_osc(0.1, 0.2, 0.0)
    with pytest.raises(SingularTime):
        k_osc(0.1, 0.2, np.pi)


def test_empty_sigma_is_oscillator():
    m = PropagatorModel.from_sigma(())
    assert k_sigma(m, 0.3, 0.5, 1.2) == pytest.approx(k_osc(0.3, 0.5, 1.2), rel=1e-15)


@pytest.mark.parametrize("sigma", [(1, 2), (2, 3)])
def test_closed_forms(sigma):
    m = PropagatorModel.from_sigma(sigma)
    x = rng.uniform(-2, 2, 50)
    y = rng.uniform(-2, 2, 50)
    t = rng.uniform(0.3, 2.8, 50) - 0.2j
    a = k_sigma(m, x, y, t)
    b = closed_form_propagator(sigma, x, y, t)
    assert np.max(np.abs(a - b) / np.abs(b)) < 1e-12


@pytest.mark.parametrize("sigma", [(1, 2), (2, 3), (1, 2, 3, 4)])
def test_spectral_expansion(sigma):
    m = PropagatorModel.from_sigma(sigma)
    for x, y in [(0.2, -0.9), (1.3, 0.4)]:
        assert abs(k_sigma_spectral(sigma, x, y, -1j, 80) - k_sigma(m, x, y, -1j)) < 1e-10


def test_symmetry_and_periodic_modulus():
    m = PropagatorModel.from_sigma((2, 3))
    x, y, t = 0.7, -1.2, 1.1 - 0.1j
    k = k_sigma(m, x, y, t)
    assert abs(k - k_sigma(m, y, x, t)) < 1e-14 * abs(k)
    assert abs(abs(k_sigma(m, x, y, t + 2 * np.pi)) - abs(k)) < 1e-12 * abs(k)


def test_schrodinger_second_order():
    m = PropagatorModel.from_sigma((1, 2))
    pot = potential((1, 2))
    x, y, t = np.array([0.4]), np.array([-0.6]), np.array([1.3])
    r = [schrodinger_residual(m, pot, x, y, t, h, h / 4)[0] for h in (1e-2, 5e-3, 2.5e-3)]
    assert r[2] < r[1] < r[0]
    assert 3.0 < r[0] / r[1] < 5.0


def test_potentials_match_simplified_forms():
    x = np.linspace(-4, 4, 41)
    v12 = x**2 / 4 + 2 * (1 + 2 * (x**2 - 1) / (x**2 + 1) ** 2)
    v23 = x**2 / 4 + 2 * (1 + 4 * x**2 * (x**4 - 9) / (x**4 + 3) ** 2)
    assert np.allclose(potential((1, 2))(x), v12, rtol=1e-14, atol=1e-14)
    assert np.allclose(potential((2, 3))(x), v23, rtol=1e-14, atol=1e-14)


def test_potential_refuses_non_krein_adler():
    with pytest.raises(NotKreinAdler):
        potential((1,))


@pytest.mark.parametrize("sigma", [(1, 2), (2, 3), (3, 4), (1, 2, 3, 4), (2, 3, 5, 6)])
def test_delta_v_identity(sigma):
    rep = verify_deltaV_identity(sigma)
    assert rep.passed
    assert rep.details[0]["negated_rhs_holds"] is False


def test_well_count():
    assert len(count_local_minima(potential((2, 3)))) == 2
    assert len(count_local_minima(potential((3, 4)))) == 3


def test_eigenfunctions():
    rep = verify_eigenfunctions((1, 2))
    assert rep.passed, rep.details


def test_deleted_eigenfunctions_vanish():
    psi = xhermite_functions((1, 2), np.linspace(-3, 3, 11), [1, 2])
    assert not np.any(psi)


def test_green_relation_vs_direct():
    m = PropagatorModel.from_sigma((1, 2))
    g = green_function(m, 0.4, -0.3, 0.9 + 0.3j, 200)
    assert g.difference < 1e-8


def test_green_exact_oscillator():
    # closed-form resolvent agrees with a long spectral sum away from the real axis
    E = 0.7 + 0.6j
    assert abs(g_osc_exact(0.2, 0.5, E) - g_osc_spectral(0.2, 0.5, E, 4000)) < 2e-3
    m = PropagatorModel.from_sigma((1, 2))
    assert np.isfinite(green_function_exact(m, 0.2, 0.5, E))


def test_green_guards():
    m = PropagatorModel.from_sigma((1, 2))
    with pytest.raises(NearPole):
        green_function(m, 0.1, 0.2, 0.5 + 1e-8, 200)
    with pytest.raises(TruncationTooSmall):
        green_function(m, 0.1, 0.2, 100 + 1j, 200)
