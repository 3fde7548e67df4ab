"""Weight-2 Hecke operators on rational q-series and the p-adic limit of zeta(Lambda; cE).

For R = sum a(m) q^m of weight 0 the weight-2 series D R = q dR/dq has
coefficients b(m) = m a(m), and the composite operator T(p^n) acts by

    (D R | T(p^n))_m = sum_{j=0}^{min(ord_p m, n)} p^j b(p^(n-2j) m).

For a curve E and an ordinary prime p the normalised images
T_n = [D zeta(Lambda_E; cE)] | T(p^n) / a_E(p^n) converge p-adically to a
multiple of the newform F_E; the multiplier's base-p digits are read off
from the q^1 coefficients of T_n.
"""

from dataclasses import dataclass
from fractions import Fraction

from .arith import INFINITY_VALUATION, is_prime, valuation
from .curves import newform_coefficients
from .mock import zeta_of_eichler
from .series import LaurentQSeries, q_derivative

__all__ = [
    "CongruenceResult",
    "PrecisionExhaustedError",
    "SupersingularPrimeError",
    "check_rational_series",
    "default_window",
    "hecke_operator",
    "hecke_weight2",
    "normalized_hecke_image",
    "padic_congruence_check",
    "s_p_digits",
    "valuation",
]

#: largest index of zeta(cE) the default window asks for
WINDOW_BUDGET = 1250


class SupersingularPrimeError(ValueError):
    """p divides a_E(p): the ordinarity hypothesis of the p-adic limit fails."""


class PrecisionExhaustedError(RuntimeError):
    """A base-p digit did not stabilise within the computed levels."""


def check_rational_series(series, bound=None):
    """Raise unless ``series`` is exact; optionally check denominators divide ``bound``."""
    if not series.exact:
        raise TypeError("a rational q-series with exact coefficients is required")
    if bound is not None:
        for n, c in series.items():
            if bound % Fraction(c).denominator:
                raise ValueError(f"coefficient of q^{n} has denominator outside {bound}")
    return series


def _ord(m, p):
    if m == 0:
        return None
    v = 0
    m = abs(m)
    while m % p == 0:
        m //= p
        v += 1
    return v


def hecke_operator(series, p, n, N=1):
    """T(p^n) on a weight-2 q-series given by its coefficients b(m).

    The result is known through q^(ceil(P / p^n) - 1) when the input is known
    through q^(P - 1).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if N % p == 0:
        raise ValueError(f"p = {p} divides the level {N}")
    if n < 0:
        raise ValueError("n must be non-negative")
    check_rational_series(series)
    if n == 0:
        return series
    pn = p**n
    P = series.precision_exponent
    out_prec = -(-P // pn)
    v = series.valuation()
    if v is None:
        return LaurentQSeries([], 0, out_prec, exact=True)
    lo = min(v, 0) * pn
    coeffs = []
    for m in range(lo, out_prec):
        s = Fraction(0)
        if m == 0:
            # ord_p(0) is infinite: every j contributes b(0) p^j
            b0 = series[0] if v <= 0 else 0
            s = sum((Fraction(p**j) * b0 for j in range(n + 1)), Fraction(0))
        else:
            top = min(_ord(m, p), n)
            for j in range(top + 1):
                k = p ** (n - 2 * j) * m if n >= 2 * j else m // p ** (2 * j - n)
                if v <= k < P:
                    c = series[k]
                    if c:
                        s += p**j * Fraction(c)
        coeffs.append(s)
    return LaurentQSeries(coeffs, lo, out_prec, exact=True)


def hecke_weight2(series, p, n, N=1):
    """(q dR/dq) | T(p^n) for a weight-0 rational q-series R."""
    check_rational_series(series)
    return hecke_operator(q_derivative(series), p, n, N)


def default_window(p, n):
    """Last q-exponent checked at level n: 2 p^n, capped so zeta(cE) is needed only through ~WINDOW_BUDGET."""
    pn = p**n
    return max(1, min(2 * pn, WINDOW_BUDGET // pn))


def _ordinary_check(E, p):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if E.conductor % p == 0:
        raise ValueError(f"p = {p} divides the conductor {E.conductor}")
    ap = newform_coefficients(E, p)[p]
    if ap % p == 0:
        raise SupersingularPrimeError(f"a({p}) = {ap} is divisible by {p}")


def normalized_hecke_image(E, p, n, K=None):
    """T_n = [D zeta(Lambda_E; cE)] | T(p^n) / a_E(p^n), known through q^K."""
    _ordinary_check(E, p)
    K = default_window(p, n) if K is None else int(K)
    pn = p**n
    R = zeta_of_eichler(E, pn * K)
    image = hecke_weight2(R, p, n, E.conductor).truncate(K + 1)
    apn = newform_coefficients(E, pn)[pn]
    return image.scale(Fraction(1, int(apn)))


@dataclass(frozen=True)
class CongruenceResult:
    """Outcome of a congruence check T_n - c F = 0 mod p^t over q^(-p^n) .. q^K."""

    p: int
    n: int
    t: int
    constant: Fraction
    c_n: Fraction
    witness: LaurentQSeries
    valuations: dict
    passed: bool

    @property
    def min_valuation(self):
        return min(self.valuations.values(), default=INFINITY_VALUATION)


def _residue(c, modulus):
    c = Fraction(c)
    inv = pow(c.denominator, -1, modulus)
    return c.numerator * inv % modulus


def padic_congruence_check(E, p, n, t, K=None, constant=None):
    """Check T_n - c F_E = 0 mod p^t coefficientwise.

    ``constant`` defaults to c_n (the q^1 coefficient of T_n) reduced into
    [0, p^n); pass an explicit rational to test a specific displayed multiplier.
    """
    T = normalized_hecke_image(E, p, n, K)
    K = T.precision_exponent - 1
    c_n = Fraction(T[1])
    pn = p**n
    if constant is None:
        if c_n.denominator % p == 0:
            raise ArithmeticError(f"c_{n} = {c_n} is not {p}-integral")
        constant = Fraction(_residue(c_n, pn))
    constant = Fraction(constant)
    a = newform_coefficients(E, max(K, 1))
    F = LaurentQSeries([Fraction(int(a[m])) for m in range(1, K + 1)], 1, K + 1, exact=True)
    witness = T - F.scale(constant)
    vals = {m: valuation(c, p) for m, c in witness.items()}
    passed = all(v >= t for v in vals.values())
    return CongruenceResult(p, n, t, constant, c_n, witness, vals, passed)


def s_p_digits(E, p, n_terms, extra_levels=1):
    """First ``n_terms`` base-p digits of the p-adic limit multiplier.

    Level n gives c_n mod p^n; digit k is read at every level n > k and must agree.
    """
    _ordinary_check(E, p)
    if n_terms < 1:
        raise ValueError("n_terms must be positive")
    levels = n_terms + extra_levels
    residues = {}
    for n in range(1, levels + 1):
        T = normalized_hecke_image(E, p, n, K=1)
        c = Fraction(T[1])
        if c.denominator % p == 0:
            raise ArithmeticError(f"c_{n} = {c} is not {p}-integral")
        residues[n] = _residue(c, p**n)
    digits = []
    for k in range(n_terms):
        seen = {(residues[n] // p**k) % p for n in range(k + 1, levels + 1)}
        if len(seen) != 1:
            raise PrecisionExhaustedError(f"digit {k} varies across levels: {sorted(seen)}")
        digits.append(seen.pop())
    return tuple(digits), residues
