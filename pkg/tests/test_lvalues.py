import mpmath as mp
import numpy as np
import pytest
from scipy.special import exp1

from weierstrass_mock.curves import CURVE_11A1, CURVE_37A1
from weierstrass_mock.lattice import period_lattice
from weierstrass_mock.lvalues import (
    central_derivative,
    central_value,
    l_series_job,
    tail_bound,
    terms_for,
    twist_root_number,
)


def test_exp1_against_mpmath():
    for x in np.geomspace(1e-3, 300, 40):
        ref = mp.e1(x)
        assert abs(exp1(x) - ref) <= 1e-14 * abs(ref)


def test_root_numbers():
    assert twist_root_number(CURVE_11A1, 1) == 1
    assert twist_root_number(CURVE_37A1, 1) == -1
    for d in (12, 21, 28, 33):
        assert twist_root_number(CURVE_37A1, d) == -1
    with pytest.raises(ValueError):
        twist_root_number(CURVE_37A1, 9)
    with pytest.raises(ValueError):
        twist_root_number(CURVE_11A1, -11)


def test_l_value_of_11a1_matches_period_ratio():
    # L(E, 1) / Omega = 1/5 for 11a1
    L = central_value(l_series_job(CURVE_11A1))
    omega = period_lattice(CURVE_11A1).omega1.real
    assert abs(L.value - float(omega) / 5) < 1e-12
    assert L.err_bound < 1e-12


def test_derivative_of_37a1():
    job = l_series_job(CURVE_37A1)
    assert job.target == "derivative" and job.root_number == -1
    Lp = central_derivative(job)
    assert abs(Lp.value - 0.305999773834052) < 1e-12
    z = central_value(job)
    assert z.value == 0 and z.note


def test_convergence_self_consistency():
    coarse = central_derivative(l_series_job(CURVE_37A1, 12, err_bound=1e-6))
    fine = central_derivative(l_series_job(CURVE_37A1, 12, err_bound=1e-13))
    assert coarse.terms < fine.terms
    assert abs(coarse.value - fine.value) <= coarse.err_bound + fine.err_bound


def test_wrong_target_is_rejected():
    with pytest.raises(ValueError):
        central_derivative(l_series_job(CURVE_11A1))
    with pytest.raises(ValueError):
        l_series_job(CURVE_11A1, target="second")


def test_tail_bounds():
    assert tail_bound(37, 200, "derivative") < tail_bound(37, 200, "value")
    assert tail_bound(37, 300, "value") < tail_bound(37, 200, "value")
    for err in (1e-6, 1e-12):
        M = terms_for(37 * 144, err, "derivative")
        assert tail_bound(37 * 144, M, "derivative") <= err
        assert M == 16 or tail_bound(37 * 144, M - 1, "derivative") > err


def test_doubling_terms_stays_within_bound():
    from dataclasses import replace

    from weierstrass_mock.curves import newform_coefficients

    for E, fn in ((CURVE_11A1, central_value), (CURVE_37A1, central_derivative)):
        job = l_series_job(E, err_bound=1e-10)
        doubled = replace(job, terms=2 * job.terms, coefficients=newform_coefficients(E, 2 * job.terms))
        a, b = fn(job), fn(doubled)
        assert abs(a.value - b.value) < a.err_bound


def test_atkin_lehner_period_is_central_value():
    from weierstrass_mock.mock import omega_q

    L = central_value(l_series_job(CURVE_11A1))
    assert abs(omega_q(CURVE_11A1, 11) - L.value) < 1e-6
    # root number -1: both sides vanish
    assert central_value(l_series_job(CURVE_37A1)).value == 0
    assert abs(omega_q(CURVE_37A1, 37)) < 1e-30
