from fractions import Fraction

import mpmath as mp
import pytest

from weierstrass_mock.curves import CURVE_11A1, CURVE_37A1, CURVE_361, newform_coefficients
from weierstrass_mock.lattice import period_lattice
from weierstrass_mock.mock import (
    atkin_lehner_matrix,
    cusp_expansion,
    eichler_eval,
    eichler_series,
    mock_form,
    normalize_star,
    omega_q,
    reduce_gamma0_matrix,
    xi0_coefficient,
    zeta_of_eichler,
    zhat_eval,
    zhat_plus_series,
    zhat_plus_series_numeric,
)


def mobius(g, z):
    a, b, c, d = g
    return (a * z + b) / (c * z + d)


def test_eichler_series_coefficients(curve):
    a = newform_coefficients(curve, 12)
    s = eichler_series(curve, 12)
    assert all(s[n] == Fraction(int(a[n]), n) for n in range(1, 13))
    assert s[0] == 0


def test_zeta_of_eichler_is_exact_and_matches_composition(curve):
    exact = zeta_of_eichler(curve, 14)
    assert exact.exact and exact[-1] == 1
    from weierstrass_mock.series import series_compose
    from weierstrass_mock.weierstrass import zeta_laurent

    lat = period_lattice(curve)
    composed = series_compose(zeta_laurent(lat, 18), eichler_series(curve, 18))
    assert all(exact[n] == composed[n] for n in range(-1, 15))


def test_exact_and_numeric_routes_agree(curve):
    exact = zhat_plus_series(curve, 12)
    numeric = zhat_plus_series_numeric(curve, 12)
    for n in range(-1, 13):
        c = exact[n]
        c = mp.mpf(c.numerator) / c.denominator if isinstance(c, Fraction) else c
        assert abs(c - numeric[n]) < mp.mpf(10) ** -40


def test_rational_s_detection():
    assert mock_form(CURVE_361).S_exact == -2
    assert mock_form(CURVE_11A1).S_exact is None
    assert zhat_plus_series(CURVE_361, 6).exact
    assert not zhat_plus_series(CURVE_37A1, 6).exact


def test_modular_invariance(curve):
    N = curve.conductor
    z = mp.mpc("0.137", "0.61") / mp.sqrt(N)
    base = zhat_eval(curve, z, condition=False).total
    for k in range(1, 6):
        g = (1 + k * N, 1, k * N, 1) if k % 2 else (1, 0, k * N, 1)
        assert g[0] * g[3] - g[1] * g[2] == 1
        assert abs(zhat_eval(curve, mobius(g, z)).total - base) < mp.mpf(10) ** -15


def test_reduce_gamma0_returns_group_element(curve):
    N = curve.conductor
    z = mp.mpc("0.31", "0.0007")
    w, (a, b, c, d) = reduce_gamma0_matrix(z, N)
    assert a * d - b * c == 1 and c % N == 0
    assert abs(mobius((a, b, c, d), z) - w) < mp.mpf(10) ** -40
    assert w.imag > z.imag
    assert -0.5 <= w.real < 0.5


def test_atkin_lehner_matrix():
    for Q, N in [(11, 11), (37, 37), (2, 6), (3, 6), (4, 20), (5, 20)]:
        a, b, c, d = atkin_lehner_matrix(Q, N)
        assert a * d - b * c == Q
        assert a % Q == 0 and d % Q == 0 and c % N == 0
    with pytest.raises(ValueError):
        atkin_lehner_matrix(2, 4)


def test_omega_is_basepoint_independent():
    for E in (CURVE_11A1, CURVE_37A1):
        N = E.conductor
        ref = omega_q(E, N)
        for z in (mp.mpc("0.1", "0.3"), mp.mpc("-0.2", "0.05"), mp.mpc(0, 1) / N):
            assert abs(omega_q(E, N, basepoint=z) - ref) < mp.mpf(10) ** -30


def test_omega_of_11a1():
    ref = omega_q(CURVE_11A1, 11)
    assert abs(ref - mp.mpf("0.25384186")) < 1e-7
    assert abs(ref / period_lattice(CURVE_11A1).omega1 - mp.mpf(1) / 5) < mp.mpf(10) ** -40


def test_cusp_expansion_matches_pointwise_values():
    E = CURVE_11A1
    pkg = mock_form(E)
    cusp = cusp_expansion(E, 11, 30)
    assert not cusp.omega_in_lattice
    z = mp.mpc("0.2", "0.9")
    q = mp.expjpi(2 * z)
    value = zhat_eval(E, -1 / (11 * z)).total
    predicted = (
        cusp.holomorphic.evaluate(q)
        + cusp.completion_constant
        - cusp.lam * pkg.completion_coefficient * mp.conj(eichler_eval(E, z))
    )
    assert abs(value - predicted) < mp.mpf(10) ** -30


def test_cusp_constant_of_11a1_is_rational():
    c = cusp_expansion(CURVE_11A1, 11, 2).constant_term
    assert abs(c - mp.mpf(17) / 5) < mp.mpf(10) ** -40


def test_normalize_star_modes():
    series, constants, shift = normalize_star(CURVE_37A1, -3, 6)
    assert abs(series[0]) < mp.mpf(10) ** -60
    assert set(constants) == {1, 37}
    assert all(abs(c - 1) < mp.mpf(10) ** -40 for c in constants.values())
    assert abs(shift - 1) < mp.mpf(10) ** -40
    _, _, shift_sum = normalize_star(CURVE_37A1, -3, 6, mode="sum")
    assert abs(shift_sum - 2) < mp.mpf(10) ** -40
    with pytest.raises(ValueError):
        normalize_star(CURVE_37A1, -3, 6, mode="other")
    with pytest.raises(ValueError):
        normalize_star(CURVE_37A1, 20, 6)


def test_star_form_scaling():
    series, _, shift = normalize_star(CURVE_37A1, -3, 6)
    plus = zhat_plus_series(CURVE_37A1, 6)
    scale = mp.sqrt(3 * 37)
    assert abs(series[-1] * scale - 1) < mp.mpf(10) ** -60
    assert abs(series[2] * scale - plus[2]) < mp.mpf(10) ** -60


def test_xi0_coefficient(curve):
    lat = period_lattice(curve)
    assert abs(xi0_coefficient(curve) - mp.pi / lat.area) < mp.mpf(10) ** -60


def test_eichler_eval_limits():
    with pytest.raises(ValueError):
        eichler_eval(CURVE_11A1, mp.mpc(0.1, -1))
    with pytest.raises(ArithmeticError):
        eichler_eval(CURVE_11A1, mp.mpc(0, "1e-7"))
