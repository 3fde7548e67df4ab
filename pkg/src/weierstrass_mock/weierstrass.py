"""Weierstrass zeta and p-functions: Laurent expansions and point evaluation."""

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .series import LaurentQSeries

__all__ = [
    "HarmonicFormValue",
    "PoleError",
    "WeierstrassSeries",
    "completed_zeta_eval",
    "weierstrass_all",
    "weierstrass_series",
    "wp_eval",
    "wp_laurent",
    "wp_prime_eval",
    "zeta_eval",
    "zeta_laurent",
]

#: evaluation is refused closer than this fraction of the shortest period to a lattice point
POLE_TOLERANCE = mp.mpf("1e-8")
#: the Laurent series is summed only for |u| below this fraction of the shortest period
SERIES_RADIUS = mp.mpf("0.25")


class PoleError(ArithmeticError):
    """Evaluation point too close to a lattice point."""


@dataclass(frozen=True)
class HarmonicFormValue:
    """A value split as holomorphic part plus the nonholomorphic completion term."""

    holomorphic: mp.mpc
    completion: mp.mpc

    @property
    def total(self):
        return self.holomorphic + self.completion

    def __neg__(self):
        return HarmonicFormValue(-self.holomorphic, -self.completion)


@dataclass(frozen=True)
class WeierstrassSeries:
    zeta_laurent: LaurentQSeries
    wp_laurent: LaurentQSeries
    radius: mp.mpf


def zeta_laurent(lattice, order):
    """zeta(u) = 1/u - sum_{k>=1} G_{2k+2} u^{2k+1}, known below u^order.

    Exact coefficients when the lattice carries exact g2, g3.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    exact = lattice.g2 is not None
    terms = {-1: 1}
    for e in range(3, order, 2):
        terms[e] = -lattice.G(e + 1)
    if not exact:
        terms = {e: mp.mpc(c) for e, c in terms.items()}
    return LaurentQSeries.from_dict(terms, order, exact=exact)


def wp_laurent(lattice, order):
    """p(u) = 1/u^2 + sum_{k>=1} (2k+1) G_{2k+2} u^{2k}, known below u^order."""
    exact = lattice.g2 is not None
    terms = {-2: 1}
    for e in range(2, order, 2):
        terms[e] = (e + 1) * lattice.G(e + 2)
    if not exact:
        terms = {e: mp.mpc(c) for e, c in terms.items()}
    return LaurentQSeries.from_dict(terms, order, exact=exact)


def weierstrass_series(lattice, order):
    return WeierstrassSeries(zeta_laurent(lattice, order), wp_laurent(lattice, order), lattice.radius)


def _g2_numeric(lattice):
    return 60 * lattice.G_numeric(4)


def _numeric_G_list(lattice, kmax):
    return lattice.G_numeric_list(kmax)


def _series_values(lattice, u):
    """(zeta, p, p') at small u by the Laurent series, with the truncation adaptive."""
    eps = mp.mpf(2) ** (-mp.mp.prec - 8)
    u2 = u * u
    zeta = 1 / u
    wp = 1 / u2
    wpp = -2 / (u2 * u)
    k = 1
    upow = u  # u^(2k-1)
    Gs = _numeric_G_list(lattice, 64)
    scale = abs(zeta)
    while True:
        if 2 * k + 2 >= len(Gs):
            Gs = _numeric_G_list(lattice, 2 * len(Gs))
        G = Gs[k + 1]
        # terms -G u^{2k+1}, (2k+1) G u^{2k}, 2k(2k+1) G u^{2k-1}
        t = G * upow
        wpp += 2 * k * (2 * k + 1) * t
        t *= u
        wp += (2 * k + 1) * t
        t *= u
        zeta -= t
        if abs(t) * (2 * k + 1) * 2 * k < eps * scale * abs(u) ** 3 and k > 2:
            break
        upow *= u2
        k += 1
        if k > 5000:
            raise ArithmeticError("Laurent series did not converge; argument not reduced")
    return zeta, wp, wpp


def _reduce(lattice, z):
    """(z0, w) with z = z0 + w, w in the lattice, z0 in the parallelogram centred at 0."""
    z = mp.mpc(z)
    x, y = lattice.coordinates(z)
    m, n = int(mp.nint(x)), int(mp.nint(y))
    w = m * lattice.omega1 + n * lattice.omega2
    z0 = z - w
    # a few greedy steps towards the nearest lattice point with the reduced basis
    b1, b2 = lattice.reduced_basis
    improved = True
    while improved:
        improved = False
        for v in (b1, b2, b1 + b2, b1 - b2):
            for s in (v, -v):
                if abs(z0 - s) < abs(z0):
                    z0 -= s
                    w += s
                    improved = True
    return z0, w


def weierstrass_all(lattice, z):
    """(zeta(z), p(z), p'(z)) at a complex point z not on the lattice."""
    z0, w = _reduce(lattice, z)
    radius = lattice.radius
    if abs(z0) < POLE_TOLERANCE * radius:
        raise PoleError(f"z = {mp.nstr(z, 15)} is within {mp.nstr(abs(z0), 5)} of a lattice point")
    halvings = 0
    u = z0
    while abs(u) > SERIES_RADIUS * radius:
        u /= 2
        halvings += 1
    with mp.extraprec(8 * halvings + 16):
        zeta, x, y = _series_values(lattice, u)
        g2 = _g2_numeric(lattice)
        for _ in range(halvings):
            m = (6 * x * x - g2 / 2) / y
            x3 = -2 * x + m * m / 4
            y = -(y + m * (x3 - x))
            zeta = 2 * zeta + m / 2
            x = x3
        zeta = zeta + lattice.quasi_period(w)
    return +zeta, +x, +y


def zeta_eval(lattice, z):
    """Weierstrass zeta(Lambda; z)."""
    return weierstrass_all(lattice, z)[0]


def wp_eval(lattice, z):
    return weierstrass_all(lattice, z)[1]


def wp_prime_eval(lattice, z):
    return weierstrass_all(lattice, z)[2]


def completed_zeta_eval(lattice, z):
    """Split value of the lattice-invariant function zeta(z) - S z - (pi/area) conj(z)."""
    z = mp.mpc(z)
    zeta = zeta_eval(lattice, z)
    return HarmonicFormValue(zeta - lattice.S * z, -lattice.completion_coefficient * mp.conj(z))
