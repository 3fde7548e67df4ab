"""The Weierstrass mock modular form of 11a1: S, the expansion at infinity and the cusp 0 data."""

import mpmath as mp

from weierstrass_mock.curves import CURVE_11A1
from weierstrass_mock.lattice import period_lattice
from weierstrass_mock.mock import cusp_expansion, omega_q, zhat_plus_series

E = CURVE_11A1
lat = period_lattice(E)
print("real period   ", mp.nstr(lat.omega1.real, 15))
print("S             ", mp.nstr(lat.S.real, 15))

series = zhat_plus_series(E, 6)
print("Z^+ = " + " + ".join(f"({mp.nstr(series[n].real, 8)}) q^{n}" for n in range(-1, 7)))

omega = omega_q(E, 11)
print("Omega_11      ", mp.nstr(omega.real, 15), " ratio to real period", mp.nstr((omega / lat.omega1).real, 15))

cusp = cusp_expansion(E, 11, 6)
print("cusp 0 constant", mp.nstr(cusp.constant_term.real, 15), "(17/5 =", mp.nstr(mp.mpf(17) / 5, 15) + ")")
