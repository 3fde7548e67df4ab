"""Acceptance criteria 1-9, each at its stated tolerance and time limit.

Criteria 1-8 run the tagged cases in the package's case file; criterion 9 runs
the property checks directly. A criterion is reported PASS only when every one
of its checks passes, including checks recorded as known failures.
"""

import random
import time
from functools import cache

import mpmath as mp
import pytest

from weierstrass_mock.repro import load_cases, run_case

LIMITS = {1: 10, 2: 60, 3: 30, 4: 60, 5: 300, 6: 120, 7: 900, 8: 300, 9: 300}


@cache
def criterion_rows(k):
    start = time.perf_counter()
    rows = [run_case(c) for c in load_cases() if c.get("criterion") == k]
    return rows, time.perf_counter() - start


def summarize(rows, seconds, k):
    bad = [r["id"] for r in rows if r["status"] not in ("pass", "xpass")]
    detail = f"{len(rows) - len(bad)}/{len(rows)} checks, {seconds:.1f} s"
    if bad:
        detail += ", failing: " + ", ".join(bad)
    return not bad and seconds < LIMITS[k], detail


@pytest.mark.parametrize("k", [1, 2, 3, 5, 6, 8])
def test_criterion(k, record_criterion):
    rows, seconds = criterion_rows(k)
    assert rows
    ok, detail = summarize(rows, seconds, k)
    record_criterion(k, ok, detail)
    assert ok, detail


KNOWN = {
    4: "the U(11) relation holds for the constant term only; the other coefficients of the "
       "cusp-0 expansion are -11 times those of Z^+|U(11), so the displayed relation fails",
    7: "c+(28) comes out as +0.6781939953; the magnitude matches the table but the sign "
       "cannot be reproduced under the convention that fixes the other six rows",
}


@pytest.mark.parametrize("k", [4, 7])
def test_criterion_with_known_failure(k, record_criterion, request):
    request.node.add_marker(pytest.mark.xfail(strict=True, reason=KNOWN[k]))
    rows, seconds = criterion_rows(k)
    ok, detail = summarize(rows, seconds, k)
    record_criterion(k, ok, detail)
    assert ok, detail


@pytest.mark.parametrize("k", [4, 7])
def test_criterion_attainable_part(k):
    rows, seconds = criterion_rows(k)
    known = [r for r in rows if r["status"] in ("xfail", "xpass")]
    rest = [r for r in rows if r not in known]
    assert len(known) == 1 and rest
    assert all(r["status"] == "pass" for r in rest), [r["id"] for r in rest if r["status"] != "pass"]
    assert seconds < LIMITS[k]


# --- criterion 9: property suites ------------------------------------------------


def _addition_law(rng):
    from weierstrass_mock.curves import CURVE_37A1
    from weierstrass_mock.lattice import period_lattice
    from weierstrass_mock.weierstrass import weierstrass_all

    lat = period_lattice(CURVE_37A1)
    worst = mp.mpf(0)
    for _ in range(25):
        z1, z2 = (mp.mpf(rng.random()) * lat.omega1 + mp.mpf(rng.random()) * lat.omega2 for _ in range(2))
        _, x1, y1 = weierstrass_all(lat, z1)
        _, x2, y2 = weierstrass_all(lat, z2)
        _, x3, _ = weierstrass_all(lat, z1 + z2)
        worst = max(worst, abs(x3 - (-x1 - x2 + ((y1 - y2) / (x1 - x2)) ** 2 / 4)))
    return worst < mp.mpf(10) ** -20


def _gamma0_invariance(rng):
    from weierstrass_mock.curves import CURVE_11A1, CURVE_37A1, CURVE_361
    from weierstrass_mock.mock import zhat_eval

    for E in (CURVE_11A1, CURVE_37A1, CURVE_361):
        N = E.conductor
        for _ in range(5):
            z = mp.mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.4, 0.8)) / mp.sqrt(N)
            k, t = rng.randint(1, 4), rng.randint(-3, 3)
            a, b, c, d = 1 + k * N, 1, k * N, 1
            gz = (a * (z + t) + b) / (c * (z + t) + d)
            if abs(zhat_eval(E, gz).total - zhat_eval(E, z, condition=False).total) >= mp.mpf(10) ** -15:
                return False
    return True


def _eisenstein_recursion():
    from weierstrass_mock.curves import CURVE_11A1
    from weierstrass_mock.lattice import eisenstein_direct, period_lattice

    lat = period_lattice(CURVE_11A1)
    w1, w2 = lat.reduced_basis
    R = 12 * (abs(w1) + abs(w2))
    for two_k in (8, 10, 12):
        with mp.workprec(80):
            direct, tail = eisenstein_direct(lat, two_k, R)
        if abs(direct - lat.G_numeric(two_k)) > tail + mp.mpf(10) ** -15:
            return False
    return True


def _hecke_composition(rng):
    from fractions import Fraction

    from weierstrass_mock.hecke import hecke_operator
    from weierstrass_mock.series import LaurentQSeries

    for _ in range(10):
        lo = rng.randint(-2, 1)
        f = LaurentQSeries([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(80)], lo, exact=True)
        p, n = rng.choice([2, 3, 5]), rng.randint(1, 2)
        lhs = hecke_operator(hecke_operator(f, p, n), p, 1)
        rhs = hecke_operator(f, p, n + 1) + hecke_operator(f, p, n - 1).scale(p)
        top = min(lhs.precision_exponent, rhs.precision_exponent)
        if any(lhs[m] != rhs[m] for m in range(min(lhs.min_exponent, rhs.min_exponent), top)):
            return False
    return True


def _class_numbers():
    from weierstrass_mock.arith import kronecker
    from weierstrass_mock.heegner import class_number_bruteforce, heegner_classes

    for D in (-3, -4, -7, -8, -11, -15, -20, -23, -24):
        w = {-3: 6, -4: 4}.get(D, 2)
        analytic = -w * sum(kronecker(D, a) * a for a in range(1, -D)) // (-2 * D)
        positive = sum(c.sign_label > 0 for c in heegner_classes(1, D, D % 2))
        if not positive == class_number_bruteforce(D) == analytic:
            return False
    return True


def _hasse_bound():
    from math import sqrt

    from weierstrass_mock.arith import primes_up_to
    from weierstrass_mock.curves import CURVE_11A1, CURVE_37A1, CURVE_361, newform_coefficients

    for E in (CURVE_11A1, CURVE_37A1, CURVE_361):
        primes = [p for p in primes_up_to(200) if E.conductor % p][:20]
        a = newform_coefficients(E, primes[-1])
        if len(primes) < 20 or any(abs(a[p]) > 2 * sqrt(p) for p in primes):
            return False
    return True


def test_criterion_9_property_suites(record_criterion):
    rng = random.Random(9)
    start = time.perf_counter()
    checks = {
        "addition law": _addition_law(rng),
        "Gamma0(N) invariance": _gamma0_invariance(rng),
        "Eisenstein recursion": _eisenstein_recursion(),
        "Hecke composition": _hecke_composition(rng),
        "class numbers": _class_numbers(),
        "Hasse bound": _hasse_bound(),
    }
    seconds = time.perf_counter() - start
    bad = [name for name, ok in checks.items() if not ok]
    ok = not bad and seconds < LIMITS[9]
    detail = f"{len(checks) - len(bad)}/{len(checks)} suites, {seconds:.1f} s"
    if bad:
        detail += ", failing: " + ", ".join(bad)
    record_criterion(9, ok, detail)
    assert ok, detail
