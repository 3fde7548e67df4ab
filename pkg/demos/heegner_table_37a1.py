"""Twisted traces of the mock modular form of 37a1 next to central derivatives of its twists."""

import time

import mpmath as mp

from weierstrass_mock.curves import CURVE_37A1
from weierstrass_mock.heegner import curve_lift_coefficient
from weierstrass_mock.lvalues import central_derivative, l_series_job

print(f"{'d':>5} {'c+(d)':>16} {'L(E_d, 1)':>16} {'sec':>6}")
for d in (1, 12, 21, 28, 33, 1489, 4393):
    start = time.perf_counter()
    c = curve_lift_coefficient(CURVE_37A1, -3, 21, d)
    L = central_derivative(l_series_job(CURVE_37A1, d))
    print(f"{d:>5} {mp.nstr(c.real, 10):>16} {L.value:>16.10f} {time.perf_counter() - start:>6.1f}")
