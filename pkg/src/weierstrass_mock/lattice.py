"""Period lattices of elliptic curves over Q, Eisenstein numbers and the invariant S."""

import itertools
from fractions import Fraction

import mpmath as mp
import numpy as np

__all__ = [
    "PeriodLattice",
    "eisenstein_direct",
    "eisenstein_q",
    "eisenstein_recursion",
    "period_lattice",
    "reduce_tau",
    "s_invariant",
    "s_invariant_oracle",
]


def _mpf(x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def eisenstein_q(tau):
    """(E2, E4, E6) at tau (Im tau > 0) from the Lambert series; tau should be reduced."""
    tau = mp.mpc(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    q = mp.expjpi(2 * tau)
    eps = mp.mpf(2) ** (-mp.mp.prec - 16)
    s1 = s3 = s5 = mp.mpc(0)
    qn = mp.mpc(1)
    n = 0
    while True:
        n += 1
        qn *= q
        t = qn / (1 - qn)
        s1 += n * t
        s3 += n**3 * t
        s5 += n**5 * t
        if abs(qn) * n**5 < eps:
            break
        if n > 100000:
            raise ArithmeticError("Eisenstein q-series did not converge; reduce tau first")
    return 1 - 24 * s1, 1 + 240 * s3, 1 - 504 * s5


def reduce_tau(tau):
    """Move tau into the standard fundamental domain.

    Returns (tau', (a, b, c, d)) with tau' = (a tau + b)/(c tau + d).
    """
    tau = mp.mpc(tau)
    a, b, c, d = 1, 0, 0, 1
    for _ in range(10000):
        n = int(mp.nint(tau.real))
        if n:
            tau -= n
            a, b = a - n * c, b - n * d
        if abs(tau) < 1 - mp.mpf(2) ** (-mp.mp.prec // 2):
            tau = -1 / tau
            a, b, c, d = -c, -d, a, b
        else:
            return tau, (a, b, c, d)
    raise ArithmeticError("reduction of tau did not terminate")


def _extend_recursion(G, kmax):
    """Extend {4: G4, 6: G6, ...} in place up to G_2kmax."""
    exact = isinstance(G[4], (Fraction, int))
    n = 4
    while 2 * n in G:
        n += 1
    for n in range(n, kmax + 1):
        total = 0
        for j in range(2, n - 1):
            coeff = Fraction(3 * (2 * j - 1) * (2 * n - 2 * j - 1), (2 * n + 1) * (2 * n - 1) * (n - 3))
            if not exact:
                coeff = mp.mpf(coeff.numerator) / coeff.denominator
            total += coeff * G[2 * j] * G[2 * n - 2 * j]
        G[2 * n] = total
    return G


def eisenstein_recursion(G4, G6, kmax):
    """{2k: G_2k} for 4 <= 2k <= 2 kmax from G4 and G6 by the standard quadratic recursion.

    Works with exact rationals or with mpmath numbers.
    """
    G = _extend_recursion({4: G4, 6: G6}, max(kmax, 3))
    return {k: v for k, v in G.items() if k <= 2 * kmax}


class PeriodLattice:
    """Lattice Z omega1 + Z omega2 with Im(omega2/omega1) > 0.

    ``g2``/``g3`` may be given as exact rationals (for a curve's lattice); if not,
    they are computed from the generators.
    """

    def __init__(self, omega1, omega2, g2=None, g3=None):
        omega1, omega2 = mp.mpc(omega1), mp.mpc(omega2)
        if (omega2 / omega1).imag < 0:
            omega2 = -omega2
        self.omega1 = omega1
        self.omega2 = omega2
        self.area = (mp.conj(omega1) * omega2).imag
        if self.area <= 0:
            raise ValueError("generators are linearly dependent over R")
        # reduced basis: tau in the fundamental domain
        tau, (a, b, c, d) = reduce_tau(omega2 / omega1)
        w1 = c * omega2 + d * omega1
        self._tau = tau
        self._w1 = w1
        E2, E4, E6 = eisenstein_q(tau)
        self._E = (E2, E4, E6)
        self.G2_holomorphic = (mp.pi**2 / 3) * E2 / w1**2
        self.S = (mp.pi**2 / 3 * E2 - mp.pi / tau.imag) / w1**2
        G4 = mp.pi**4 / 45 * E4 / w1**4
        G6 = 2 * mp.pi**6 / 945 * E6 / w1**6
        self.g2 = Fraction(g2) if g2 is not None else None
        self.g3 = Fraction(g3) if g3 is not None else None
        self.G4_numeric = G4
        self.G6_numeric = G6
        self._G_cache = {}
        self._G_numeric_cache = {}

    def __repr__(self):
        return f"PeriodLattice(omega1={mp.nstr(self.omega1, 15)}, omega2={mp.nstr(self.omega2, 15)})"

    @property
    def tau(self):
        return self.omega2 / self.omega1

    @property
    def reduced_basis(self):
        """(w1, w2) generating the same lattice with w2/w1 in the fundamental domain."""
        return self._w1, self._w1 * self._tau

    @property
    def completion_coefficient(self):
        """pi / area: coefficient of conj(z) making zeta(z) - S z - (pi/area) conj(z) periodic."""
        return mp.pi / self.area

    @property
    def radius(self):
        """Length of the shortest nonzero lattice vector."""
        return abs(self._w1)

    @property
    def G4(self):
        return Fraction(self.g2, 60) if self.g2 is not None else self.G4_numeric

    @property
    def G6(self):
        return Fraction(self.g3, 140) if self.g3 is not None else self.G6_numeric

    def G(self, two_k):
        """G_2k for 2k >= 4; exact rationals when g2, g3 are exact."""
        if two_k < 4 or two_k % 2:
            raise ValueError("G_2k needs an even 2k >= 4")
        if not self._G_cache:
            self._G_cache.update({4: self.G4, 6: self.G6})
        _extend_recursion(self._G_cache, two_k // 2)
        return self._G_cache[two_k]

    def G_numeric_list(self, kmax):
        """[None, None, G4, G6, ..., G_2kmax] as mpmath numbers (recursion run numerically)."""
        cache = self._G_numeric_cache
        if not cache:
            cache.update({4: mp.mpc(_mpf(self.G4) if isinstance(self.G4, Fraction) else self.G4),
                          6: mp.mpc(_mpf(self.G6) if isinstance(self.G6, Fraction) else self.G6)})
        _extend_recursion(cache, kmax)
        return [None, None] + [cache[2 * k] for k in range(2, kmax + 1)]

    def G_numeric(self, two_k):
        v = self.G(two_k)
        return _mpf(v) if isinstance(v, Fraction) else v

    def quasi_period(self, w):
        """eta(w) = zeta(z + w) - zeta(z) for a lattice vector w."""
        w = mp.mpc(w)
        return self.S * w + self.completion_coefficient * mp.conj(w)

    def coordinates(self, z):
        """Real coordinates (x, y) with z = x omega1 + y omega2."""
        z = mp.mpc(z)
        w1, w2 = self.omega1, self.omega2
        det = (mp.conj(w1) * w2).imag
        x = (mp.conj(z) * w2).imag / det
        y = (mp.conj(w1) * z).imag / det
        return x, y

    def contains(self, z, tol=None):
        if tol is None:
            tol = mp.mpf(10) ** (-20)
        x, y = self.coordinates(z)
        return abs(x - mp.nint(x)) < tol and abs(y - mp.nint(y)) < tol

    def scaled(self, lam):
        lam = mp.mpc(lam)
        return PeriodLattice(lam * self.omega1, lam * self.omega2)


def s_invariant(lattice):
    """S(Lambda) = w1^-2 (G2(tau) - pi / Im tau) for a basis (w1, w1 tau)."""
    return lattice.S


def _agm_candidates(g2, g3):
    roots = mp.polyroots([4, 0, -_mpf(g2), -_mpf(g3)], maxsteps=400, extraprec=2 * mp.mp.prec)
    for i, j, k in itertools.permutations(range(3)):
        ei, ej, ek = (mp.mpc(roots[t]) for t in (i, j, k))
        a, b, c = mp.sqrt(ei - ek), mp.sqrt(ei - ej), mp.sqrt(ej - ek)
        if min(abs(a), abs(b), abs(c)) == 0:
            continue
        w1 = mp.pi / mp.agm(a, b)
        w2 = 1j * mp.pi / mp.agm(a, c)
        if abs((w2 / w1).imag) < mp.mpf(2) ** (-mp.mp.prec // 2):
            continue
        yield w1, w2


def period_lattice(E):
    """Period lattice of E, with omega1 the least positive real period.

    Generators come from the AGM on the roots of 4X^3 - g2 X - g3; the candidate
    basis is accepted only if 60 G4 and 140 G6 recover g2 and g3.
    """
    g2, g3, _ = E.short_model()
    tol = mp.mpf(2) ** (-(mp.mp.prec * 3) // 4) * (1 + abs(_mpf(g2)) + abs(_mpf(g3)))
    basis = None
    for w1, w2 in _agm_candidates(g2, g3):
        lat = PeriodLattice(w1, w2)
        err = abs(60 * lat.G4_numeric - _mpf(g2)) + abs(140 * lat.G6_numeric - _mpf(g3))
        if err < tol:
            basis = lat.reduced_basis
            break
    if basis is None:
        raise ArithmeticError("AGM did not produce a lattice matching the curve; increase precision")
    b1, b2 = basis
    # the lattice is stable under conjugation; find the primitive positive real vector
    small = [m * b1 + n * b2 for m in range(-2, 3) for n in range(-2, 3) if (m, n) != (0, 0)]
    eps = mp.mpf(2) ** (-mp.mp.prec // 2) * abs(b1)
    reals = [v for v in small if abs(v.imag) < eps and v.real > 0]
    omega1 = mp.mpc(min(reals, key=lambda v: v.real).real, 0)
    # complete to a basis: smallest positive imaginary part, then smallest |real part|
    others = [v for v in small if v.imag > eps]
    min_im = min(v.imag for v in others)
    cands = [v for v in others if abs(v.imag - min_im) < eps]
    omega2 = min(cands, key=lambda v: abs(v.real))
    omega2 = omega2 - mp.floor(omega2.real / omega1.real + mp.mpf(1) / 2) * omega1
    lat = PeriodLattice(omega1, omega2, g2=g2, g3=g3)
    if abs(lat.area - (b1.conjugate() * b2).imag) > eps * abs(b1):
        raise ArithmeticError("failed to complete the real period to a lattice basis")
    return lat


def eisenstein_direct(lattice, two_k, R):
    """(partial sum over 0 < |w| <= R of w^-2k, error bound) for 2k >= 4.

    The bound covers the tail: the number of lattice points in an annulus is
    controlled by area, giving 2 pi / area * (R - d)^(2 - 2k) / (2k - 2) with d
    the diameter of a fundamental parallelogram.
    """
    if two_k < 4 or two_k % 2:
        raise ValueError("direct sums need an even 2k >= 4")
    w1, w2 = lattice.reduced_basis
    d = abs(w1) + abs(w2)
    R = mp.mpf(R)
    if R <= 2 * d:
        raise ValueError("cutoff radius too small for a useful tail bound")
    # coordinates bounded by R / (distance between lattice lines)
    h1 = lattice.area / abs(w2)
    h2 = lattice.area / abs(w1)
    M1, M2 = int(R / h1) + 1, int(R / h2) + 1
    total = mp.mpc(0)
    # fixed order: by n, then by m, so the result is reproducible bit for bit
    for n in range(-M2, M2 + 1):
        for m in range(-M1, M1 + 1):
            if m == 0 and n == 0:
                continue
            w = m * w1 + n * w2
            if abs(w) <= R:
                total += w ** (-two_k)
    tail = 2 * mp.pi / lattice.area * (R - d) ** (2 - two_k) / (two_k - 2)
    return total, tail


def s_invariant_oracle(lattice, eps=1e-3):
    """Independent floating-point estimate of S from Gaussian-damped lattice sums.

    sum_{w != 0} w^-2 exp(-eps |w|^2) = S + c eps + o(eps); two damping
    parameters eps and 3 eps are combined to cancel the linear term.
    """
    w1, w2 = (complex(v) for v in lattice.reduced_basis)

    def damped(e):
        R = np.sqrt(60.0 / e)
        h = float(lattice.area) / max(abs(w1), abs(w2))
        M = int(R / h) + 2
        m, n = np.meshgrid(np.arange(-M, M + 1), np.arange(-M, M + 1))
        w = (m * w1 + n * w2).ravel()
        r2 = (w * w.conjugate()).real
        keep = (r2 > 0) & (r2 <= R * R)
        w, r2 = w[keep], r2[keep]
        return complex(np.sum(np.exp(-e * r2) / w**2))

    return (3 * damped(eps) - damped(3 * eps)) / 2
