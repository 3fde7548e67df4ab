"""Truncated Laurent series in q with exact or high-precision coefficients.

A series stores the coefficients of q^min_exponent, ..., q^(precision_exponent - 1);
everything from q^precision_exponent on is unknown.  Coefficients are either all
``Fraction`` (exact) or all ``mpmath.mpc`` (inexact).  The two kinds never mix
implicitly: use :meth:`LaurentQSeries.promote` to go from exact to inexact.
"""

from fractions import Fraction
from numbers import Rational

import mpmath as mp

from .arith import is_fundamental_discriminant, kronecker

__all__ = [
    "KindError",
    "LaurentQSeries",
    "eta_product",
    "j_series",
    "q_derivative",
    "series_compose",
    "series_multiply",
    "series_power",
    "series_reciprocal",
    "sigma_series",
    "twist_by_character",
]


class KindError(TypeError):
    """Raised when exact and inexact coefficients would be mixed."""


def _is_exact_scalar(x):
    return isinstance(x, Rational)


def _coerce(values, exact):
    if exact:
        out = []
        for v in values:
            if not _is_exact_scalar(v):
                raise KindError(f"inexact value {v!r} in an exact series")
            out.append(Fraction(v))
        return tuple(out)
    return tuple(mp.mpc(v) for v in values)


class LaurentQSeries:
    """Immutable truncated Laurent series sum c_n q^n for min_exponent <= n < precision_exponent."""

    __slots__ = ("min_exponent", "coefficients", "precision_exponent", "exact")

    def __init__(self, coefficients, min_exponent=0, precision_exponent=None, exact=None):
        coefficients = list(coefficients)
        if exact is None:
            exact = all(_is_exact_scalar(c) for c in coefficients)
        if precision_exponent is None:
            precision_exponent = min_exponent + len(coefficients)
        n_known = precision_exponent - min_exponent
        if n_known < 0:
            # nothing known at all; keep a consistent empty series
            min_exponent = precision_exponent
            n_known = 0
        coefficients = coefficients[:n_known]
        coefficients += [0] * (n_known - len(coefficients))
        object.__setattr__(self, "min_exponent", int(min_exponent))
        object.__setattr__(self, "precision_exponent", int(precision_exponent))
        object.__setattr__(self, "exact", bool(exact))
        object.__setattr__(self, "coefficients", _coerce(coefficients, exact))

    def __setattr__(self, name, value):
        raise AttributeError("LaurentQSeries is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_dict(cls, terms, precision_exponent, exact=None):
        """Build from {exponent: coefficient}; missing exponents are zero."""
        if not terms:
            return cls([], precision_exponent, precision_exponent, exact=True if exact is None else exact)
        lo = min(terms)
        coeffs = [terms.get(n, 0) for n in range(lo, precision_exponent)]
        return cls(coeffs, lo, precision_exponent, exact)

    @classmethod
    def monomial(cls, exponent, precision_exponent, coefficient=1, exact=True):
        return cls.from_dict({exponent: coefficient}, precision_exponent, exact)

    # -- access ---------------------------------------------------------------

    def __getitem__(self, n):
        if n >= self.precision_exponent:
            raise IndexError(f"coefficient of q^{n} is beyond the known precision q^{self.precision_exponent}")
        if n < self.min_exponent:
            return Fraction(0) if self.exact else mp.mpc(0)
        return self.coefficients[n - self.min_exponent]

    def items(self):
        """(exponent, coefficient) pairs for the nonzero known coefficients."""
        return [(self.min_exponent + i, c) for i, c in enumerate(self.coefficients) if c != 0]

    def valuation(self):
        """Exponent of the first nonzero coefficient, or None for a zero series."""
        for i, c in enumerate(self.coefficients):
            if c != 0:
                return self.min_exponent + i
        return None

    def normalized(self):
        """Same series with leading zero coefficients stripped."""
        v = self.valuation()
        if v is None or v == self.min_exponent:
            return self
        return LaurentQSeries(self.coefficients[v - self.min_exponent :], v, self.precision_exponent, self.exact)

    def truncate(self, precision_exponent):
        """Forget coefficients from q^precision_exponent on."""
        if precision_exponent >= self.precision_exponent:
            return self
        return LaurentQSeries(self.coefficients, self.min_exponent, precision_exponent, self.exact)

    def is_zero(self):
        return all(c == 0 for c in self.coefficients)

    def promote(self, bits=None):
        """Inexact copy; coefficients are rounded at ``bits`` mantissa bits (default: current mp.prec)."""
        if bits is None:
            bits = mp.mp.prec
        with mp.workprec(bits):
            coeffs = [mp.mpc(mp.mpf(c.numerator) / c.denominator) if self.exact else +c for c in self.coefficients]
        return LaurentQSeries(coeffs, self.min_exponent, self.precision_exponent, exact=False)

    def evaluate(self, q):
        """Numerical value of the truncated series at a complex q."""
        q = mp.mpc(q)
        total = mp.mpc(0)
        for n, c in reversed(self.items()):
            total += (mp.mpf(c.numerator) / c.denominator if self.exact else c) * q**n
        return total

    # -- arithmetic -------------------------------------------------------------

    def _check_kind(self, other):
        if self.exact != other.exact:
            raise KindError("cannot mix exact and inexact series; promote explicitly")

    def __add__(self, other):
        if not isinstance(other, LaurentQSeries):
            if other == 0:
                return self
            other = LaurentQSeries([other], 0, self.precision_exponent, self.exact)
        self._check_kind(other)
        prec = min(self.precision_exponent, other.precision_exponent)
        lo = min(self.min_exponent, other.min_exponent)
        coeffs = [self[n] + other[n] for n in range(lo, prec)]
        return LaurentQSeries(coeffs, lo, prec, self.exact)

    __radd__ = __add__

    def __neg__(self):
        return LaurentQSeries([-c for c in self.coefficients], self.min_exponent, self.precision_exponent, self.exact)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        """Multiply every coefficient by a scalar of the matching kind."""
        if self.exact and not _is_exact_scalar(c):
            raise KindError("inexact scalar times exact series; promote explicitly")
        return LaurentQSeries([c * x for x in self.coefficients], self.min_exponent, self.precision_exponent, self.exact)

    def __mul__(self, other):
        if isinstance(other, LaurentQSeries):
            return series_multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, LaurentQSeries):
            if self.exact != other.exact:
                return False
            diff = self - other
            return diff.is_zero() and self.precision_exponent == other.precision_exponent
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.normalized().min_exponent, self.precision_exponent, self.normalized().coefficients))

    def __repr__(self):
        shown = []
        for n, c in self.items()[:8]:
            shown.append(f"({c})*q^{n}" if self.exact else f"({mp.nstr(c, 8)})*q^{n}")
        body = " + ".join(shown) if shown else "0"
        return f"LaurentQSeries({body} + O(q^{self.precision_exponent}))"


def _zero_like(a):
    return Fraction(0) if a.exact else mp.mpc(0)


def _one_like(a):
    return Fraction(1) if a.exact else mp.mpc(1)


def series_multiply(a, b):
    """Cauchy product.

    With a = q^va(...) known below q^pa and b likewise, the product is known
    below q^min(pa + vb, pb + va) and starts at q^(va + vb).
    """
    a._check_kind(b)
    a, b = a.normalized(), b.normalized()
    lo = a.min_exponent + b.min_exponent
    prec = min(a.precision_exponent + b.min_exponent, b.precision_exponent + a.min_exponent)
    n = prec - lo
    if n <= 0:
        return LaurentQSeries([], prec, prec, a.exact)
    ca, cb = a.coefficients[:n], b.coefficients[:n]
    out = [_zero_like(a)] * n
    for i, x in enumerate(ca):
        if x == 0:
            continue
        for j in range(min(len(cb), n - i)):
            y = cb[j]
            if y != 0:
                out[i + j] += x * y
    return LaurentQSeries(out, lo, prec, a.exact)


def series_power(a, e):
    """a**e for an integer (or Fraction, exact case) exponent e.

    Uses the standard O(n^2) power recurrence on the unit part; the relative
    precision of ``a`` is preserved.
    """
    a = a.normalized()
    v = a.valuation()
    if v is None:
        raise ZeroDivisionError("power of a zero series")
    rel = a.precision_exponent - v
    f = a.coefficients[:rel]
    f0 = f[0]
    alpha = Fraction(e) if a.exact else mp.mpf(e)
    if a.exact:
        if Fraction(e).denominator != 1 and f0 != 1:
            raise ValueError("fractional powers need a unit leading coefficient")
        g0 = f0 ** int(e) if Fraction(e).denominator == 1 else Fraction(1)
    else:
        g0 = f0**alpha
    new_v = v * e
    if Fraction(new_v).denominator != 1:
        raise ValueError("power leads to a fractional exponent")
    g = [g0]
    for n in range(1, rel):
        s = _zero_like(a)
        for k in range(1, n + 1):
            if f[k] != 0:
                s += ((alpha + 1) * k - n) * f[k] * g[n - k]
        g.append(s / (n * f0))
    new_v = int(new_v)
    return LaurentQSeries(g, new_v, new_v + rel, a.exact)


def series_reciprocal(a):
    """1/a.  If a = q^v(c + ...) is known below q^p, the result is known below q^(p - 2v)."""
    a = a.normalized()
    v = a.valuation()
    if v is None:
        raise ZeroDivisionError("reciprocal of a series with zero leading coefficient")
    rel = a.precision_exponent - v
    f = a.coefficients[:rel]
    inv0 = _one_like(a) / f[0]
    g = [inv0]
    for n in range(1, rel):
        s = _zero_like(a)
        for k in range(1, n + 1):
            if f[k] != 0:
                s += f[k] * g[n - k]
        g.append(-s * inv0)
    return LaurentQSeries(g, -v, -v + rel, a.exact)


def series_compose(outer, inner):
    """outer(inner(q)) for a series ``inner`` with positive valuation.

    With inner = q^vi(...) known to relative order ri and outer known below
    u^po, the result is known below q^min(po*vi, k*vi + ri), k being the
    smallest exponent of a nonzero term of ``outer`` other than the constant.
    """
    outer._check_kind(inner)
    inner = inner.normalized()
    vi = inner.valuation()
    if vi is None or vi < 1:
        raise ValueError("inner series must have zero constant term and be nonzero")
    outer_n = outer.normalized()
    vo = outer_n.valuation()
    if vo is None:
        return LaurentQSeries([], outer.precision_exponent * vi, outer.precision_exponent * vi, outer.exact)
    ri = inner.precision_exponent - vi
    # u^k carries an error O(q^(k vi + ri)); an exact constant term carries none
    ks = [k for k, c in outer_n.items() if k != 0]
    prec = outer.precision_exponent * vi
    if ks:
        prec = min(prec, min(ks) * vi + ri)
    result = LaurentQSeries([], prec, prec, outer.exact)
    # inner**vo, then repeated multiplication by inner; for vo < 0 this
    # goes through the reciprocal inside series_power
    if vo != 0:
        power = series_power(inner, vo)
    else:
        power = LaurentQSeries([_one_like(outer)], 0, prec, outer.exact)
    base = inner
    for k in range(vo, outer.precision_exponent):
        if k * vi >= prec:
            break
        c = outer[k]
        if c != 0:
            result = result + power.truncate(prec).scale(c)
        power = series_multiply(power, base).truncate(prec)
    return result.truncate(prec)


def q_derivative(a):
    """q d/dq: the coefficient of q^n is multiplied by n.  Precision unchanged."""
    coeffs = [(a.min_exponent + i) * c for i, c in enumerate(a.coefficients)]
    return LaurentQSeries(coeffs, a.min_exponent, a.precision_exponent, a.exact)


def twist_by_character(a, D, mode="kronecker"):
    """Multiply the coefficient of q^n by chi(n).

    ``mode="kronecker"`` uses the Kronecker symbol (D/n), with (D/-1) = sign(D)
    at negative exponents.  ``mode="trivial"`` uses the principal character
    modulo |D|.
    """
    D = int(D)
    if not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    if mode == "kronecker":
        chi = lambda n: kronecker(D, n)
    elif mode == "trivial":
        from math import gcd

        chi = lambda n: 1 if gcd(n, D) == 1 else 0
    else:
        raise ValueError(f"unknown twist mode {mode!r}")
    coeffs = [chi(a.min_exponent + i) * c for i, c in enumerate(a.coefficients)]
    return LaurentQSeries(coeffs, a.min_exponent, a.precision_exponent, a.exact)


def _euler_product(n_terms, step=1):
    """prod_{n>=1} (1 - q^(step n)) through q^(n_terms - 1), via the pentagonal theorem."""
    coeffs = [0] * n_terms
    k = 0
    while True:
        done = True
        for kk in ((k,) if k == 0 else (k, -k)):
            e = step * kk * (3 * kk - 1) // 2
            if e < n_terms:
                coeffs[e] += -1 if kk % 2 else 1
                done = False
        if done and k > 0:
            break
        k += 1
    return LaurentQSeries(coeffs, 0, n_terms, exact=True)


def eta_product(spec, n_max):
    """prod eta(m z)^e over (m, e) in ``spec``, known through q^n_max.

    The q-power offset sum(m e)/24 must be an integer.
    """
    offset = Fraction(0)
    for m, e in spec:
        if m <= 0:
            raise ValueError("eta scales must be positive")
        offset += Fraction(m * e, 24)
    if offset.denominator != 1:
        raise ValueError(f"q-power offset {offset} is not an integer")
    offset = int(offset)
    n_terms = max(n_max - offset + 1, 0)
    result = LaurentQSeries([1], 0, n_terms, exact=True)
    for m, e in spec:
        if e == 0:
            continue
        result = series_multiply(result, series_power(_euler_product(n_terms, m), e))
    return LaurentQSeries(result.coefficients, offset, offset + n_terms, exact=True)


def sigma_series(k, n_terms, constant=0, scale=1):
    """constant + scale * sum_{n>=1} sigma_k(n) q^n, known below q^n_terms."""
    sig = [0] * n_terms
    for d in range(1, n_terms):
        dk = d**k
        for m in range(d, n_terms, d):
            sig[m] += dk
    coeffs = [Fraction(constant)] + [Fraction(scale * s) for s in sig[1:]]
    return LaurentQSeries(coeffs[:n_terms], 0, n_terms, exact=True)


def j_series(n_max):
    """Klein's j = E4^3 / Delta through q^n_max (exact integers)."""
    n_terms = n_max + 2
    e4 = sigma_series(3, n_terms, 1, 240)
    delta = eta_product([(1, 24)], n_max + 2)
    j = series_multiply(series_power(e4, 3), series_reciprocal(delta))
    return j.truncate(n_max + 1)
