"""Elliptic curves over Q and the coefficients of their weight-2 newforms."""

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import numpy as np
from numba import njit

from .arith import factorint, is_fundamental_discriminant, is_prime, is_squarefree, kronecker, primes_up_to
from .series import LaurentQSeries

__all__ = [
    "EllipticCurveQ",
    "NewformCoefficients",
    "ap_point_count",
    "atkin_lehner_data",
    "newform_coefficients",
    "quadratic_twist_coefficients",
    "CURVE_11A1",
    "CURVE_37A1",
    "CURVE_361",
    "named_curve",
]


class EllipticCurveQ:
    """Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with a given conductor."""

    def __init__(self, ainvs, conductor, label=""):
        if len(ainvs) != 5:
            raise ValueError("need five coefficients a1, a2, a3, a4, a6")
        self.ainvs = tuple(Fraction(a) for a in ainvs)
        self.conductor = int(conductor)
        self.label = label or ",".join(str(a) for a in self.ainvs)
        if self.conductor < 1:
            raise ValueError("conductor must be positive")
        if self.discriminant == 0:
            raise ValueError("singular model (discriminant 0)")
        disc = self.discriminant
        for p, _ in factorint(self.conductor):
            if disc.numerator % p != 0:
                raise ValueError(f"prime {p} divides the conductor but not the discriminant")

    def __repr__(self):
        return f"EllipticCurveQ({[str(a) for a in self.ainvs]}, conductor={self.conductor}, label={self.label!r})"

    def __eq__(self, other):
        return isinstance(other, EllipticCurveQ) and (self.ainvs, self.conductor) == (other.ainvs, other.conductor)

    def __hash__(self):
        return hash((self.ainvs, self.conductor))

    @property
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def c4(self):
        b2, b4, _, _ = self.b_invariants
        return b2 * b2 - 24 * b4

    @property
    def c6(self):
        b2, b4, b6, _ = self.b_invariants
        return -(b2**3) + 36 * b2 * b4 - 216 * b6

    @property
    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j_invariant(self):
        return self.c4**3 / self.discriminant

    def short_model(self):
        """(g2, g3, shift) with y^2 = 4X^3 - g2 X - g3 and X = x + shift."""
        b2 = self.b_invariants[0]
        return self.c4 / 12, self.c6 / 216, b2 / 12

    def reduction_type(self, p):
        """'good', 'split', 'nonsplit' or 'additive' at the prime p (model assumed minimal)."""
        if self.discriminant.numerator % p != 0:
            return "good"
        if self.c4.numerator % p == 0:
            return "additive"
        return "split" if _multiplicative_ap(self, p) == 1 else "nonsplit"


def _mod_p(x, p):
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ValueError(f"prime {p} divides a denominator of the model")
    return x.numerator * pow(x.denominator, -1, p) % p


def _count_points_bruteforce(E, p):
    """#E(F_p) including the point at infinity, by trying every (x, y)."""
    a1, a2, a3, a4, a6 = (_mod_p(a, p) for a in E.ainvs)
    x = np.arange(p, dtype=np.int64)
    rhs = (((x + a2) * x % p + a4) * x + a6) % p
    count = 1
    for y in range(p):
        lhs = (y * y + a1 * x * y + a3 * y) % p
        count += int(np.count_nonzero(lhs == rhs))
    return count


@njit(cache=True)
def _legendre_sum_many(primes, coeffs):
    """For each odd prime p, sum over x in F_p of the Legendre symbol of c3 x^3 + c2 x^2 + c1 x + c0.

    ``coeffs`` holds the cubic's coefficients already reduced mod each p (one row per prime).
    The cubic is stepped through x = 0, 1, ... with finite differences, so the
    inner loop is additions only.
    """
    out = np.zeros(len(primes), dtype=np.int64)
    for i in range(len(primes)):
        p = primes[i]
        c3, c2, c1, c0 = coeffs[i, 0], coeffs[i, 1], coeffs[i, 2], coeffs[i, 3]
        is_square = np.zeros(p, dtype=np.int8)
        for y in range(1, (p + 1) // 2):
            is_square[y * y % p] = 1
        f = c0 % p
        d1 = (c3 + c2 + c1) % p
        d2 = (6 * c3 + 2 * c2) % p
        d3 = (6 * c3) % p
        total = 0
        for x in range(p):
            if f != 0:
                total += 2 * is_square[f] - 1
            f += d1
            if f >= p:
                f -= p
            d1 += d2
            if d1 >= p:
                d1 -= p
            d2 += d3
            if d2 >= p:
                d2 -= p
        out[i] = total
    return out


def _good_ap_many(E, primes):
    """a_p for a batch of odd primes of good reduction."""
    primes = np.asarray(primes, dtype=np.int64)
    if len(primes) == 0:
        return np.zeros(0, dtype=np.int64)
    b2, b4, b6, _ = E.b_invariants
    coeffs = np.array([[4 % p, _mod_p(b2, p), _mod_p(2 * b4, p), _mod_p(b6, p)] for p in primes.tolist()], dtype=np.int64)
    # after completing the square in y, #E = p + 1 + sum chi(f(x))
    return -_legendre_sum_many(primes, coeffs)


def _multiplicative_ap(E, p):
    # the node's tangent directions are defined over F_p iff -c6 is a square
    if p == 2:
        return p + 1 - _count_points_bruteforce(E, p)
    return kronecker(-E.c6.numerator * E.c6.denominator, p)


def ap_point_count(E, p):
    """a_p = p + 1 - #E(F_p) for good p; +1/-1 for split/non-split multiplicative; 0 if additive."""
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    for a in E.ainvs:
        if a.denominator % p == 0:
            raise ValueError(f"prime {p} divides a denominator of the model")
    kind = E.reduction_type(p)
    if kind == "additive":
        return 0
    if kind in ("split", "nonsplit"):
        return _multiplicative_ap(E, p)
    if p == 2:
        return p + 1 - _count_points_bruteforce(E, p)
    return int(_good_ap_many(E, [p])[0])


class NewformCoefficients:
    """a(n) for 1 <= n <= n_max of the newform of level N, stored as an int64 numpy array."""

    def __init__(self, a, level):
        self.a = np.asarray(a, dtype=np.int64)
        self.level = int(level)

    @property
    def n_max(self):
        return len(self.a) - 1

    def __getitem__(self, n):
        if n < 1 or n > self.n_max:
            raise IndexError(f"a({n}) not available (n_max = {self.n_max})")
        return int(self.a[n])

    def __len__(self):
        return self.n_max

    def as_list(self):
        return [int(v) for v in self.a[1:]]

    def series(self, n_max=None):
        """sum a(n) q^n, known through q^n_max."""
        n_max = self.n_max if n_max is None else min(n_max, self.n_max)
        return LaurentQSeries([0] + [int(v) for v in self.a[1 : n_max + 1]], 0, n_max + 1, exact=True)

    def truncated(self, n_max):
        return NewformCoefficients(self.a[: n_max + 1], self.level)


def _smallest_prime_factor(n):
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in primes_up_to(isqrt(n) + 1):
        block = spf[p * p :: p]
        block[block == 0] = p
    spf[spf == 0] = np.arange(n + 1)[spf == 0]
    return spf


def _fill_multiplicative(ap, bad, n_max):
    """Extend prime values to all n <= n_max by the Hecke recursion and multiplicativity."""
    a = np.zeros(n_max + 1, dtype=np.int64)
    if n_max >= 1:
        a[1] = 1
    spf = _smallest_prime_factor(n_max)
    for n in range(2, n_max + 1):
        p = int(spf[n])
        m, pk = n, 1
        k = 0
        while m % p == 0:
            m //= p
            pk *= p
            k += 1
        if m > 1:
            a[n] = a[pk] * a[m]
            continue
        # n = p^k
        if k == 1:
            a[n] = ap[p]
        elif p in bad:
            a[n] = a[p] * a[n // p]
        else:
            a[n] = a[p] * a[n // p] - p * a[n // (p * p)]
    return a


_COEFF_CACHE = {}


def newform_coefficients(E, n_max):
    """a_E(n) for n <= n_max; results are cached per curve and extended on demand."""
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    cached = _COEFF_CACHE.get(E)
    if cached is not None and cached.n_max >= n_max:
        return cached.truncated(n_max)
    bad = {p for p, _ in factorint(E.conductor)}
    primes = primes_up_to(n_max)
    special = [int(p) for p in primes if p == 2 or p in bad]
    for a in E.ainvs:
        special += [p for p, _ in factorint(a.denominator)] if a.denominator != 1 else []
    ap = {p: ap_point_count(E, p) for p in special}
    rest = np.array([p for p in primes.tolist() if p not in ap], dtype=np.int64)
    ap.update(zip(rest.tolist(), _good_ap_many(E, rest).tolist()))
    result = NewformCoefficients(_fill_multiplicative(ap, bad, n_max), E.conductor)
    _COEFF_CACHE[E] = result
    return result


def quadratic_twist_coefficients(E, d, n_max):
    """Coefficients chi_d(n) a(n) of the twist by the fundamental discriminant d (level N d^2)."""
    d = int(d)
    if not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a fundamental discriminant")
    if gcd(d, E.conductor) != 1:
        raise ValueError(f"twist requires gcd(d, N) = 1, got d={d}, N={E.conductor}")
    base = newform_coefficients(E, n_max)
    if d == 1:
        return base
    period = abs(d)
    chi_period = np.array([kronecker(d, n) for n in range(period)], dtype=np.int64)
    chi = chi_period[np.arange(n_max + 1) % period]
    chi[0] = 0
    return NewformCoefficients(base.a * chi, E.conductor * d * d)


def atkin_lehner_data(E, n_coeffs=None):
    """Atkin-Lehner eigenvalues for squarefree level.

    Returns ``{"lambda": {q: lambda_q}, "lambda_N": ..., "epsilon": ...}`` with
    lambda_q = -a(q), lambda_N their product and epsilon = -lambda_N.
    """
    N = E.conductor
    if not is_squarefree(N):
        raise ValueError(f"level {N} is not squarefree; Atkin-Lehner data is only implemented there")
    lam = {}
    for q, _ in factorint(N):
        lam[q] = -ap_point_count(E, q)
    lam_N = 1
    for v in lam.values():
        lam_N *= v
    return {"lambda": lam, "lambda_N": lam_N, "epsilon": -lam_N}


CURVE_11A1 = EllipticCurveQ([0, -1, 1, -10, -20], 11, "11a1")
CURVE_37A1 = EllipticCurveQ([0, 0, 1, -1, 0], 37, "37a1")
CURVE_361 = EllipticCurveQ([0, 0, 1, -38, 90], 361, "361a1")

_NAMED = {c.label: c for c in (CURVE_11A1, CURVE_37A1, CURVE_361)}


@lru_cache(maxsize=None)
def named_curve(label):
    try:
        return _NAMED[label]
    except KeyError:
        raise KeyError(f"unknown curve label {label!r}; known: {sorted(_NAMED)}") from None
