"""The Eichler integral, the Weierstrass mock modular form and its cusp expansions.

For a curve E with newform F = sum a(n) q^n the Eichler integral is
cE(z) = sum a(n)/n q^n, and the Weierstrass mock modular form is
Z^+(z) = zeta(Lambda; cE(z)) - S(Lambda) cE(z).  Its completion
Z(z) = Z^+(z) - (pi/area) conj(cE(z)) is invariant under Gamma_0(N).

zeta(Lambda; cE) has rational coefficients for every curve (G4 = g2/60 and
G6 = g3/140 are rational and all G_2k follow from them).  They are computed
here exactly from the differential equations satisfied by X = p(cE) and
Y = p'(cE):  D X = F Y and D Y = F (6 X^2 - g2/2) with D = q d/dq.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import gmpy2
import mpmath as mp

from .arith import divisors, factorint, is_fundamental_discriminant, rationalize
from .curves import atkin_lehner_data, newform_coefficients
from .lattice import period_lattice
from .series import LaurentQSeries, q_derivative, series_compose, series_multiply, series_reciprocal
from .weierstrass import HarmonicFormValue, completed_zeta_eval, weierstrass_all, wp_laurent, zeta_laurent

__all__ = [
    "CuspExpansion",
    "MockFormPackage",
    "atkin_lehner_matrix",
    "cusp_expansion",
    "eichler_eval",
    "eichler_series",
    "mock_form",
    "normalize_star",
    "STAR_MODES",
    "omega_q",
    "reduce_gamma0",
    "reduce_gamma0_matrix",
    "xi0_coefficient",
    "zeta_of_eichler",
    "zhat_eval",
    "zhat_plus_series",
    "zhat_plus_series_numeric",
]

#: S is treated as rational when it is this close to p/r with r <= S_DENOMINATOR_CAP
S_RATIONAL_TOL = mp.mpf("1e-30")
S_DENOMINATOR_CAP = 10**4


def _mpq(x):
    x = Fraction(x)
    return gmpy2.mpq(x.numerator, x.denominator)


def _frac(x):
    return Fraction(int(x.numerator), int(x.denominator))


def eichler_series(E, n_max):
    """sum_{n <= n_max} a(n)/n q^n with exact coefficients."""
    a = newform_coefficients(E, n_max)
    return LaurentQSeries([Fraction(a[n], n) for n in range(1, n_max + 1)], 1, n_max + 1, exact=True)


_ZETA_CACHE = {}


def zeta_of_eichler(E, n_max):
    """zeta(Lambda_E; cE(q)) exactly, known through q^n_max."""
    cached = _ZETA_CACHE.get(E)
    if cached is not None and cached.precision_exponent > n_max:
        return cached.truncate(n_max + 1)
    result = _zeta_of_eichler_ode(E, max(n_max, 8))
    _ZETA_CACHE[E] = result
    return result.truncate(n_max + 1)


def _zeta_of_eichler_ode(E, n_max):
    seed = 6
    a = newform_coefficients(E, n_max + seed + 6)
    f = [0] + [int(v) for v in a.a[1:]]
    g2, g3, _ = E.short_model()
    lattice = period_lattice(E)
    # low-order terms of X = p(cE) and Y = p'(cE) by direct substitution; the
    # linear system below is singular at n = 3 so these cannot be skipped
    eich = LaurentQSeries([Fraction(f[n], n) for n in range(1, seed + 6)], 1)
    Xs = series_compose(wp_laurent(lattice, seed + 4), eich)
    Fs = LaurentQSeries(f[1 : seed + 7], 1)
    Ys = series_multiply(q_derivative(Xs), series_reciprocal(Fs))
    x = {k: _mpq(Xs[k]) for k in range(-2, seed + 1)}
    y = {k: _mpq(Ys[k]) for k in range(-3, seed)}
    half_g2 = _mpq(g2) / 2
    W = {}

    def w_coeff(k):
        # coefficient of q^k in 6 X^2 - g2/2
        s = gmpy2.mpq(0)
        for i in range(-2, k + 3):
            s += x[i] * x[k - i]
        return 6 * s - (half_g2 if k == 0 else 0)

    for k in range(-4, seed - 1):
        W[k] = w_coeff(k)
    for n in range(seed, n_max + 1):
        # unknowns x_{n+1}, y_n:
        #   (n+1) x_{n+1} - y_n = A      (D X = F Y at q^(n+1))
        #   n y_n - 12 x_{n+1} = B      (D Y = F W at q^n)
        A = gmpy2.mpq(0)
        for j in range(2, n + 5):
            if f[j]:
                A += f[j] * y[n + 1 - j]
        B = gmpy2.mpq(0)
        for i in range(-1, n + 1):
            B += x[i] * x[n - 1 - i]
        B *= 6
        for j in range(2, n + 5):
            if f[j]:
                B += f[j] * W[n - j]
        xn1 = (B + n * A) / ((n + 4) * (n - 3))
        x[n + 1] = xn1
        y[n] = (n + 1) * xn1 - A
        W[n - 1] = w_coeff(n - 1)
    # D zeta(cE) = -X F; the constant term comes from 1/cE = q^-1 - a(2)/2 + ...
    z = [Fraction(1), Fraction(-f[2], 2)]
    for n in range(1, n_max + 1):
        s = gmpy2.mpq(0)
        for j in range(1, n + 3):
            if f[j]:
                s += f[j] * x[n - j]
        z.append(_frac(-s / n))
    return LaurentQSeries(z, -1, n_max + 1, exact=True)


@dataclass
class MockFormPackage:
    """Everything attached to one curve that the evaluation routines reuse."""

    curve: object
    lattice: object
    S: mp.mpc
    S_exact: object
    completion_coefficient: mp.mpf
    atkin_lehner: dict
    omega: dict = field(default_factory=dict)
    _coeffs: list = field(default_factory=list, repr=False)

    @property
    def level(self):
        return self.curve.conductor

    def eichler_coefficients(self, n_max):
        """[0, a(1)/1, a(2)/2, ...] as mpf, extended on demand."""
        if len(self._coeffs) <= n_max:
            n_new = max(n_max, 2 * len(self._coeffs), 64)
            a = newform_coefficients(self.curve, n_new)
            self._coeffs = [mp.mpf(0)] + [mp.mpf(int(a.a[n])) / n for n in range(1, n_new + 1)]
        return self._coeffs


@lru_cache(maxsize=None)
def _mock_form_cached(E, prec):
    lattice = period_lattice(E)
    S = lattice.S
    try:
        S_exact = rationalize(S, S_DENOMINATOR_CAP, S_RATIONAL_TOL)
    except ValueError:
        S_exact = None
    try:
        al = atkin_lehner_data(E)
    except ValueError:
        al = None
    return MockFormPackage(E, lattice, S, S_exact, lattice.completion_coefficient, al)


def mock_form(E):
    """Cached MockFormPackage for E at the current working precision."""
    return _mock_form_cached(E, mp.mp.prec)


def eichler_eval(E, z, err_budget=None, max_terms=200000):
    """cE(z) = sum a(n)/n q^n at z in the upper half plane.

    |a(n)/n| <= d(n)/sqrt(n) <= 2, so the tail after M terms is at most
    2 |q|^(M+1) / (1 - |q|); M is chosen to push it below ``err_budget``.
    """
    z = mp.mpc(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half plane")
    if err_budget is None:
        err_budget = mp.mpf(2) ** (-mp.mp.prec + 8)
    q = mp.expjpi(2 * z)
    r = abs(q)
    M = int(mp.ceil(mp.log(err_budget * (1 - r) / 2) / mp.log(r)))
    M = max(M, 1)
    if M > max_terms:
        raise ArithmeticError(
            f"Im z = {mp.nstr(z.imag, 5)} needs {M} terms for the error budget; apply a Fricke flip first"
        )
    c = mock_form(E).eichler_coefficients(M)
    total = mp.mpc(0)
    for n in range(M, 0, -1):
        total = (total + c[n]) * q
    return total


def atkin_lehner_matrix(Q, N):
    """W_Q = [[Q a, b], [N c, Q d]] of determinant Q with the smallest nonnegative entries (Q || N)."""
    M = N // Q
    if N % Q or gcd(Q, M) != 1:
        raise ValueError(f"{Q} does not exactly divide {N}")
    if Q == N:
        return (0, -1, N, 0)
    # Q a d - b M c = 1: take a = c = 1, then Q d - M b = 1
    for d in range(0, M + 1):
        if (Q * d - 1) % M == 0:
            b = (Q * d - 1) // M
            if b >= 0:
                return (Q, b, N, Q * d)
    raise ArithmeticError("no Atkin-Lehner matrix found")


def _mobius(m, z):
    a, b, c, d = m
    return (a * z + b) / (c * z + d)


def reduce_gamma0_matrix(z, N):
    """(gamma z, gamma) with gamma in Gamma_0(N) maximising Im(gamma z) and Re(gamma z) in [-1/2, 1/2).

    Greedy: while some bottom row (c, d) with N | c has |c z + d| < 1, apply it.
    """
    z = mp.mpc(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half plane")
    best = z
    M = (1, 0, 0, 1)
    for _ in range(200):
        y = best.imag
        kmax = int(1 / (N * y)) + 1
        step = None
        for k in range(1, kmax + 1):
            c = N * k
            centre = int(mp.nint(-c * best.real))
            for d in range(centre - 2, centre + 3):
                if gcd(c, d) != 1:
                    continue
                if abs(c * best + d) ** 2 < 1 - mp.mpf(10) ** (-20):
                    g, u, v = gmpy2.gcdext(d, c)
                    # u d + v c = 1  =>  a = u, b = -v gives a d - b c = 1
                    step = (int(u), -int(v), c, d)
                    break
            if step:
                break
        if step:
            best = _mobius(step, best)
            M = _mat_mul(step, M)
        t = int(mp.floor(best.real + mp.mpf(1) / 2))
        if t:
            best = best - t
            M = _mat_mul((1, -t, 0, 1), M)
        if not step:
            return best, M
    return best, M


def reduce_gamma0(z, N):
    """gamma z for gamma in Gamma_0(N) maximising Im(gamma z), with real part in [-1/2, 1/2)."""
    return reduce_gamma0_matrix(z, N)[0]


def _mat_mul(g, h):
    a, b, c, d = g
    e, f, g2, h2 = h
    return (a * e + b * g2, a * f + b * h2, c * e + d * g2, c * f + d * h2)


def _omega_raw(pkg, Q, z0):
    W = atkin_lehner_matrix(Q, pkg.level)
    lam = _lambda(pkg, Q)
    wz = _mobius(W, z0)
    return eichler_eval(pkg.curve, z0) - lam * eichler_eval(pkg.curve, wz)


def _lambda(pkg, Q):
    if pkg.atkin_lehner is None:
        raise ValueError("Atkin-Lehner data needs a squarefree level")
    lam = 1
    for q, _ in factorint(Q) if Q > 1 else ():
        lam *= pkg.atkin_lehner["lambda"][q]
    return lam


def omega_q(E, Q, basepoint=None):
    """Omega_Q = cE(z) - lambda_Q cE(W_Q z), evaluated at z = i / sqrt(N) by default."""
    pkg = mock_form(E)
    if basepoint is None:
        if Q in pkg.omega:
            return pkg.omega[Q]
        basepoint = mp.mpc(0, 1) / mp.sqrt(pkg.level)
        value = _omega_raw(pkg, Q, basepoint)
        pkg.omega[Q] = value
        return value
    return _omega_raw(pkg, Q, mp.mpc(basepoint))


def _eichler_conditioned(pkg, z):
    """cE(z) modulo Lambda, using Gamma_0(N) reduction and a Fricke flip when that helps."""
    N = pkg.level
    z1 = reduce_gamma0(z, N)
    if pkg.atkin_lehner is not None:
        w1 = reduce_gamma0(-1 / (N * z1), N)
        if w1.imag > z1.imag * (1 + mp.mpf(10) ** (-10)):
            lam = pkg.atkin_lehner["lambda_N"]
            # cE(z1) = lambda_N (cE(W z1) - Omega_N) and cE(W z1) = cE(w1) mod Lambda
            return lam * (eichler_eval(pkg.curve, w1) - omega_q(pkg.curve, N))
    return eichler_eval(pkg.curve, z1)


def zhat_eval(E, z, err_budget=None, condition=True):
    """Completed form Z(z) = zeta*(cE(z)) split into holomorphic and completion parts.

    With ``condition`` the point is first moved by Gamma_0(N) (and W_N) to
    improve convergence; the total is unchanged but the split then refers to
    a lattice translate of cE(z).
    """
    pkg = mock_form(E)
    z = mp.mpc(z)
    u = _eichler_conditioned(pkg, z) if condition else eichler_eval(E, z, err_budget)
    return completed_zeta_eval(pkg.lattice, u)


def zhat_plus_series(E, n_max):
    """Z^+ = zeta(cE) - S cE through q^n_max; exact when S is rational, else mpc coefficients."""
    pkg = mock_form(E)
    zeta = zeta_of_eichler(E, n_max)
    eich = eichler_series(E, n_max)
    if pkg.S_exact is not None:
        return zeta - eich.scale(pkg.S_exact)
    return zeta.promote() - eich.promote().scale(pkg.S)


def zhat_plus_series_numeric(E, n_max):
    """Independent floating-point route: Laurent series of zeta with G4, G6 taken from the
    period lattice (q-series), composed with cE by generic series substitution."""
    pkg = mock_form(E)
    lat = pkg.lattice
    G = {4: lat.G4_numeric, 6: lat.G6_numeric}
    from .lattice import eisenstein_recursion

    G.update(eisenstein_recursion(G[4], G[6], n_max // 2 + 3))
    terms = {-1: mp.mpc(1)}
    for e in range(3, n_max + 3, 2):
        terms[e] = -G[e + 1]
    zl = LaurentQSeries.from_dict(terms, n_max + 3, exact=False)
    eich = eichler_series(E, n_max + 2).promote()
    composed = series_compose(zl, eich)
    return (composed - eich.scale(pkg.S)).truncate(n_max + 1)


def _wp_taylor(pkg, u0, n):
    """Taylor coefficients p_0..p_n of p(u0 + t)."""
    _, p0, p1 = weierstrass_all(pkg.lattice, u0)
    g2 = 60 * pkg.lattice.G_numeric(4)
    p = [p0, p1]
    for k in range(0, n - 1):
        sq = sum(p[i] * p[k - i] for i in range(k + 1))
        p.append((6 * sq - (g2 / 2 if k == 0 else 0)) / ((k + 2) * (k + 1)))
    return p[: n + 1]


@dataclass(frozen=True)
class CuspExpansion:
    """Expansion of Z at the cusp W_Q(infinity).

    ``holomorphic`` is the q-series of Z^+ | W_Q (constant term included);
    ``completion_constant`` is the constant produced by the nonholomorphic
    part -(pi/area) conj(lambda (cE - Omega)); ``constant_term`` is their sum.
    """

    Q: int
    lam: int
    omega: mp.mpc
    omega_reduced: mp.mpc
    holomorphic: LaurentQSeries
    completion_constant: mp.mpc
    constant_term: mp.mpc
    omega_in_lattice: bool


def cusp_expansion(E, Q, n_max):
    """Z | W_Q as lambda_Q-twisted substitution of lambda_Q (cE - Omega_Q) into zeta*."""
    pkg = mock_form(E)
    lat = pkg.lattice
    if Q == 1:
        series = zhat_plus_series(E, n_max)
        series = series.promote() if series.exact else series
        return CuspExpansion(1, 1, mp.mpc(0), mp.mpc(0), series, mp.mpc(0), series[0], True)
    lam = _lambda(pkg, Q)
    omega = omega_q(E, Q)
    x, y = lat.coordinates(omega)
    w = mp.nint(x) * lat.omega1 + mp.nint(y) * lat.omega2
    omega0 = omega - w
    in_lattice = abs(omega0) < mp.mpf(10) ** (-20) * lat.radius
    eich = eichler_series(E, n_max + 2).promote()
    if in_lattice:
        # zeta*(lambda cE) = lambda zeta*(cE): the expansion is lambda Z at infinity
        series = zhat_plus_series(E, n_max)
        series = (series.promote() if series.exact else series).scale(lam)
        return CuspExpansion(Q, lam, omega, mp.mpc(0), series, mp.mpc(0), series[0], True)
    u0 = -lam * omega0
    zeta0, _, _ = weierstrass_all(lat, u0)
    p = _wp_taylor(pkg, u0, n_max + 1)
    # zeta(u0 + t) - S (u0 + t) = c_0 + sum c_k t^k with zeta' = -p
    coeffs = [zeta0 - pkg.S * u0, -p[0] - pkg.S]
    for k in range(2, n_max + 2):
        coeffs.append(-p[k - 1] / k)
    outer = LaurentQSeries(coeffs, 0, n_max + 2, exact=False)
    series = series_compose(outer, eich.scale(lam)).truncate(n_max + 1)
    comp_const = lam * pkg.completion_coefficient * mp.conj(omega0)
    return CuspExpansion(Q, lam, omega, omega0, series, comp_const, series[0] + comp_const, False)


STAR_MODES = ("infinity", "sum")


def normalize_star(E, Delta, n_max=10, mode="infinity"):
    """(series, constants, shift): (Z^+ - shift) / sqrt(|Delta| N) expanded at infinity.

    ``constants`` maps each Q || N (Q = 1 for infinity) to the constant term of Z
    at W_Q(infinity). ``mode="infinity"`` subtracts the constant at infinity, so the
    star form has zero constant term there (and at every cusp whose constant agrees,
    as for 37a1). ``mode="sum"`` subtracts the sum of all cusp constants.
    """
    Delta = int(Delta)
    if not is_fundamental_discriminant(Delta):
        raise ValueError(f"{Delta} is not a fundamental discriminant")
    if mode not in STAR_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    N = E.conductor
    constants = {}
    for Q in divisors(N):
        if gcd(Q, N // Q) != 1:
            continue
        constants[Q] = cusp_expansion(E, Q, 1 if Q > 1 else n_max).constant_term
    shift = constants[1] if mode == "infinity" else sum(constants.values())
    series = zhat_plus_series(E, n_max)
    series = series.promote() if series.exact else series
    scale = 1 / mp.sqrt(abs(Delta) * N)
    return (series - LaurentQSeries([shift], 0, n_max + 1, exact=False)).scale(scale), constants, shift


def xi0_coefficient(E):
    """pi / area(Lambda_E): the coefficient of the completion term -(pi/area) conj(cE).

    Applying xi_0 to the completed form returns this constant times F_E up to
    the normalising factor of xi_0 (here (pi/area) = deg(phi) / (4 pi ||F||^2)).
    """
    return mock_form(E).completion_coefficient
