"""Small exact number-theory helpers shared by the other modules."""

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import mpmath as mp
import numpy as np

__all__ = [
    "INFINITY_VALUATION",
    "divisors",
    "factorint",
    "is_fundamental_discriminant",
    "is_prime",
    "is_squarefree",
    "kronecker",
    "primes_up_to",
    "rationalize",
    "to_fraction",
    "valuation",
]

#: stands in for ord_p(0) = +oo
INFINITY_VALUATION = float("inf")


def primes_up_to(n):
    """Primes <= n as a numpy int64 array (sieve of Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


@lru_cache(maxsize=4096)
def factorint(n):
    """Prime factorisation of a nonzero integer as a tuple of (p, e); sign dropped."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    p = 5
    step = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def is_prime(n):
    n = int(n)
    return n >= 2 and factorint(n) == ((n, 1),)


def is_squarefree(n):
    return all(e == 1 for _, e in factorint(n))


def divisors(n):
    divs = [1]
    for p, e in factorint(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def kronecker(a, n):
    """Kronecker symbol (a/n) for arbitrary integers, with (a/-1) = sign(a)."""
    a, n = int(a), int(n)
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 == 1 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fundamental_discriminant(d):
    """True for 1 and for discriminants of quadratic fields."""
    d = int(d)
    if d == 1:
        return True
    if d == 0:
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def to_fraction(x):
    """Exact rational value of an int, Fraction or real mpf."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    x = mp.mpf(x)
    if not mp.isfinite(x):
        raise ValueError("cannot convert a non-finite value")
    sign, man, exp, _ = x._mpf_
    value = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -value if sign else value


def rationalize(x, max_denominator=10**4, tol=None):
    """Best rational approximation p/r with r <= max_denominator.

    Raises ValueError when |x - p/r| >= tol (default 2**(-prec/2)) or when x has
    a nonnegligible imaginary part.
    """
    if tol is None:
        tol = mp.mpf(2) ** (-(mp.mp.prec // 2))
    if isinstance(x, mp.mpc) or isinstance(x, complex):
        if abs(mp.mpc(x).imag) >= tol:
            raise ValueError(f"value {mp.nstr(x, 15)} is not real")
        x = mp.mpc(x).real
    candidate = to_fraction(x).limit_denominator(max_denominator)
    err = abs(mp.mpf(x) - mp.mpf(candidate.numerator) / candidate.denominator)
    if err >= tol:
        raise ValueError(
            f"{mp.nstr(x, 20)} is not within {mp.nstr(tol, 3)} of a rational "
            f"with denominator <= {max_denominator}"
        )
    return candidate


def valuation(x, p):
    """p-adic valuation of an integer or rational; +oo (a float) for zero."""
    x = Fraction(x)
    if x == 0:
        return INFINITY_VALUATION
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def crt_pair(r1, m1, r2, m2):
    """Solve x = r1 (m1), x = r2 (m2) for coprime moduli."""
    g = gcd(m1, m2)
    if g != 1:
        raise ValueError("moduli must be coprime")
    inv = pow(m1, -1, m2)
    return (r1 + m1 * ((r2 - r1) * inv % m2)) % (m1 * m2)
