"""Binary quadratic forms, Heegner points of level N and twisted traces.

Level-N Heegner forms are written [A, B, C] = A x^2 + B xy + C y^2 with N | A;
the attached CM point is the root of A z^2 + B z + C in the upper half plane.
In the lattice notation [a, b, Nc] used for genus characters, the same form
has a = C, b = -B, c = A / N, and its CM point is the root of
Nc z^2 - b z + a.  The sign label of a class is the sign of a = C.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, isqrt

import mpmath as mp

from .arith import divisors, factorint, is_fundamental_discriminant, kronecker

__all__ = [
    "BinaryQF",
    "HeegnerClass",
    "NORMALIZATIONS",
    "SIGN_CONVENTIONS",
    "class_number_bruteforce",
    "cm_point",
    "combine_traces",
    "curve_lift_coefficient",
    "curve_trace_function",
    "default_h",
    "gamma0_class_key",
    "genus_character",
    "heegner_classes",
    "lift_coefficient",
    "reduced_forms",
    "twisted_trace",
    "zagier_fd",
]


@dataclass(frozen=True, order=True)
class BinaryQF:
    a: int
    b: int
    c: int

    @property
    def discriminant(self):
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def compose(self, g):
        """Q o g, i.e. (x, y) -> Q(alpha x + beta y, gamma x + delta y) for g = (alpha, beta, gamma, delta)."""
        al, be, ga, de = g
        a = self(al, ga)
        c = self(be, de)
        b = 2 * self.a * al * be + self.b * (al * de + be * ga) + 2 * self.c * ga * de
        return BinaryQF(a, b, c)

    def __neg__(self):
        return BinaryQF(-self.a, -self.b, -self.c)

    def content(self):
        return gcd(gcd(self.a, self.b), self.c)

    def __str__(self):
        return f"[{self.a},{self.b},{self.c}]"


def _mat_mul(g, h):
    a, b, c, d = g
    e, f, g2, h2 = h
    return (a * e + b * g2, a * f + b * h2, c * e + d * g2, c * f + d * h2)


def _mat_inv(g):
    a, b, c, d = g
    return (d, -b, -c, a)


def reduce_form(Q):
    """(Q0, g) with Q0 reduced (|b| <= a <= c, b >= 0 if |b| = a or a = c) and Q = Q0 o g.

    Q must be positive definite.
    """
    if Q.discriminant >= 0 or Q.a <= 0:
        raise ValueError(f"{Q} is not positive definite")
    h = (1, 0, 0, 1)  # Q o h = current
    cur = Q
    while True:
        a, b, c = cur.a, cur.b, cur.c
        if not (-a < b <= a):
            # translate: x -> x + t y changes b by 2ta
            t = (a - b) // (2 * a)
            step = (1, t, 0, 1)
            cur = cur.compose(step)
            h = _mat_mul(h, step)
            continue
        if a > c or (a == c and b < 0):
            step = (0, -1, 1, 0)
            cur = cur.compose(step)
            h = _mat_mul(h, step)
            continue
        break
    # Q o h = cur  =>  Q = cur o h^-1
    return cur, _mat_inv(h)


def reduced_forms(D):
    """All reduced positive definite forms of discriminant D < 0 (imprimitive ones included)."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            out.append(BinaryQF(a, b, c))
        a += 1
    return out


def class_number_bruteforce(D, primitive_only=False):
    """Number of reduced forms of discriminant D (|b| <= a <= c)."""
    forms = reduced_forms(D)
    if primitive_only:
        forms = [Q for Q in forms if Q.content() == 1]
    return len(forms)


def automorphs(Q, box=2):
    """Elements of SL2(Z) (entries in [-box, box]) fixing the reduced form Q, as 4-tuples."""
    out = []
    rng = range(-box, box + 1)
    for al, be, ga, de in product(rng, repeat=4):
        if al * de - be * ga == 1 and Q.compose((al, be, ga, de)) == Q:
            out.append((al, be, ga, de))
    return out


def cm_point(Q):
    """Root in the upper half plane of a z^2 + b z + c (for a < 0 the form is negated first)."""
    D = Q.discriminant
    if D >= 0:
        raise ValueError(f"{Q} does not have negative discriminant")
    a, b = (Q.a, Q.b) if Q.a > 0 else (-Q.a, -Q.b)
    return mp.mpc(-b, mp.sqrt(-D)) / (2 * a)


def _p1_points(N):
    """Canonical representatives of P^1(Z/N)."""
    units = [u for u in range(1, N + 1) if gcd(u, N) == 1] if N > 1 else [1]
    seen = set()
    pts = []
    for x in range(N):
        for y in range(N):
            if gcd(gcd(x, y), N) != 1:
                continue
            key = min(((u * x) % N, (u * y) % N) for u in units)
            if key not in seen:
                seen.add(key)
                pts.append(key)
    return pts if N > 1 else [(0, 0)]


def _canonical_point(x, y, N):
    if N == 1:
        return (0, 0)
    units = [u for u in range(1, N) if gcd(u, N) == 1]
    return min(((u * x) % N, (u * y) % N) for u in units)


def _lift_point(x, y, N):
    """Integers (X, Y) with gcd 1 reducing to (x, y) mod N."""
    if N == 1:
        return 1, 0
    for i in range(0, 50):
        for j in range(0, 50):
            X, Y = x + i * N, y + j * N
            if gcd(X, Y) == 1:
                return X, Y
    raise ArithmeticError("could not lift point of P^1(Z/N)")


def _complete(X, Y):
    """g in SL2(Z) with first column (X, Y)."""
    # X d - b Y = 1
    g, s, t = _ext_gcd(X, Y)
    # s X + t Y = 1  =>  d = s, b = -t
    return (X, -t, Y, s)


def _ext_gcd(a, b):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, s, t = _ext_gcd(b, a % b)
    return g, t, s - (a // b) * t


def gamma0_class_key(Q, N):
    """Canonical label of the Gamma_0(N)-class of a positive definite level-N form (N | a)."""
    Q0, g = reduce_form(Q)
    # Q = Q0 o g; the class is determined by Q0 and g's first column mod N up to Aut(Q0)
    x, y = g[0], g[2]
    pts = []
    for s in automorphs(Q0):
        sg = _mat_mul(s, g)
        pts.append(_canonical_point(sg[0] % max(N, 1), sg[2] % max(N, 1), N))
    return (Q0.a, Q0.b, Q0.c, min(pts))


@dataclass(frozen=True)
class HeegnerClass:
    representative: BinaryQF
    stabilizer_order: int
    sign_label: int
    character_value: int
    cm_point: mp.mpc

    @property
    def discriminant(self):
        return self.representative.discriminant


def _positive_classes(N, D, beta):
    """(representative, stabilizer order) for Gamma_0(N)-classes of positive forms [A, B, C],
    N | A, B = beta mod 2N, discriminant D."""
    out = []
    for Q0 in reduced_forms(D):
        auts = automorphs(Q0)
        orbit_done = set()
        for (x, y) in _p1_points(N):
            X, Y = _lift_point(x, y, N)
            g = _complete(X, Y)
            Qg = Q0.compose(g)
            if Qg.a % N:
                continue
            if (Qg.b - beta) % (2 * N):
                continue
            pt = _canonical_point(x, y, N)
            if pt in orbit_done:
                continue
            orbit = set()
            fix = 0
            for s in auts:
                sg = _mat_mul(s, g)
                p2 = _canonical_point(sg[0] % N if N > 1 else 0, sg[2] % N if N > 1 else 0, N)
                orbit.add(p2)
                if p2 == pt:
                    fix += 1
            orbit_done |= orbit
            # +-1 both fix every point
            out.append((_nice_representative(Qg, N), fix // 2))
    return out


def _nice_representative(Q, N):
    """Gamma_0(N)-equivalent form whose CM point has the largest imaginary part found by reduction."""
    from .mock import reduce_gamma0_matrix

    z = cm_point(Q)
    _, m = reduce_gamma0_matrix(z, N)
    # CM point of Q o g is g^-1 z; we want m z, so compose with m^-1
    Q2 = Q.compose(_mat_inv(m))
    if Q2.a < 0:
        Q2 = Q2  # cannot happen for positive definite forms
    return Q2


def genus_character(Q, Delta, N):
    """chi_Delta of the level-N form Q = [A, B, C] (N | A), i.e. of [a, b, Nc] = [C, -B, A].

    Uses the factorisation rule (Delta1/N1 a)(Delta2/N2 c) over Delta = Delta1 Delta2
    (fundamental discriminants) and N = N1 N2; 0 when no admissible factorisation exists
    or when the divisibility and square conditions fail.
    """
    Delta = int(Delta)
    if not is_fundamental_discriminant(Delta):
        raise ValueError(f"{Delta} is not a fundamental discriminant")
    if Q.a % N:
        raise ValueError(f"{Q} is not a level-{N} form")
    a, b, c = Q.c, -Q.b, Q.a // N
    D = b * b - 4 * N * a * c
    if D % Delta:
        return 0
    quot = (D // Delta) % (4 * N)
    if not any((t * t - quot) % (4 * N) == 0 for t in range(2 * N)):
        return 0
    if gcd(gcd(gcd(a, b), c), Delta) != 1:
        return 0
    if Delta == 1:
        return 1
    for D1 in _fundamental_factors(Delta):
        D2 = Delta // D1
        for N1 in divisors(N):
            N2 = N // N1
            if gcd(D1, N1 * a) == 1 and gcd(D2, N2 * c) == 1:
                return kronecker(D1, N1 * a) * kronecker(D2, N2 * c)
    return 0


def _fundamental_factors(Delta):
    """Fundamental discriminants D1 (including 1) with Delta / D1 also fundamental."""
    out = []
    for d in divisors(abs(Delta)):
        for s in (1, -1):
            D1 = s * d
            if Delta % D1 == 0 and is_fundamental_discriminant(D1) and is_fundamental_discriminant(Delta // D1):
                out.append(D1)
    return out


def heegner_classes(N, D, beta, Delta=1):
    """Gamma_0(N)-classes of forms [A, B, C] with N | A, B = beta (2N), disc D, of both signs.

    Negative classes are the negatives of the positive classes for -beta.
    ``character_value`` is chi_Delta of the class (1 when Delta = 1).
    """
    N, D, beta = int(N), int(D), int(beta)
    if D >= 0:
        raise ValueError("Heegner discriminants are negative")
    if (beta * beta - D) % (4 * N):
        raise ValueError(f"beta = {beta} does not satisfy beta^2 = D mod 4N")
    out = []
    for Q, stab in _positive_classes(N, D, beta % (2 * N)):
        out.append(HeegnerClass(Q, stab, +1, genus_character(Q, Delta, N), cm_point(Q)))
    for Q, stab in _positive_classes(N, D, (-beta) % (2 * N)):
        Qn = -Q
        out.append(HeegnerClass(Qn, stab, -1, genus_character(Qn, Delta, N), cm_point(Qn)))
    return out


SIGN_CONVENTIONS = ("literal", "corrected")
NORMALIZATIONS = ("footnote", "theorem")


def twisted_trace(F, N, Delta, r, d, h=1):
    """(tr_plus, tr_minus, per-class diagnostics) for the index with form discriminant Delta * d.

    tr_plus sums chi(lambda) F(D_lambda) / |Gamma_lambda| over positive classes;
    tr_minus sums sgn(Delta) chi(lambda) F(D_lambda) / |Gamma_lambda| over negative classes.
    The residue class is beta = r h mod 2N.
    """
    D = Delta * d
    beta = (r * h) % (2 * N)
    sgn = 1 if Delta > 0 else -1
    tr_plus = mp.mpc(0)
    tr_minus = mp.mpc(0)
    rows = []
    for cl in heegner_classes(N, D, beta, Delta):
        if cl.character_value == 0:
            rows.append((cl, None))
            continue
        value = F(cl.cm_point)
        rows.append((cl, value))
        if cl.sign_label > 0:
            tr_plus += cl.character_value * value / cl.stabilizer_order
        else:
            tr_minus += sgn * cl.character_value * value / cl.stabilizer_order
    return tr_plus, tr_minus, rows


def _check_conventions(sign_convention, normalization):
    if sign_convention not in SIGN_CONVENTIONS or normalization not in NORMALIZATIONS:
        raise ValueError("unknown convention")


def combine_traces(tr_plus, tr_minus, N, Delta, d, sign_convention="corrected", normalization="footnote"):
    """Lift coefficient from the two traces returned by twisted_trace.

    ``normalization="theorem"``: sqrt(Delta) / (2 sqrt(m)) (tr+ - tr-) with m = |d| / (4N).
    ``normalization="footnote"``: (tr+ - tr-) / (2 sqrt(d)).
    ``sign_convention="literal"`` subtracts tr- as defined; ``"corrected"`` subtracts
    sgn(Delta) tr-, which is the combination that survives for odd Delta.
    """
    _check_conventions(sign_convention, normalization)
    sgn = 1 if Delta > 0 else -1
    combo = tr_plus - tr_minus if sign_convention == "literal" else tr_plus - sgn * tr_minus
    if normalization == "footnote":
        return combo / (2 * mp.sqrt(d))
    m = mp.mpf(abs(d)) / (4 * N)
    return mp.sqrt(mp.mpc(Delta)) / (2 * mp.sqrt(m)) * combo


def lift_coefficient(F, N, Delta, r, d, h=1, sign_convention="corrected", normalization="footnote"):
    """Coefficient of the lift of F attached to form discriminant Delta * d (see combine_traces)."""
    _check_conventions(sign_convention, normalization)
    if (Delta * d - (r * h) ** 2) % (4 * N):
        raise ValueError("congruence condition fails: Delta d must be (r h)^2 mod 4N")
    tp, tm, _ = twisted_trace(F, N, Delta, r, d, h)
    return combine_traces(tp, tm, N, Delta, d, sign_convention, normalization)


def default_h(N, d):
    """Smallest h in [0, 2N) with h^2 = d mod 4N, or None."""
    for h in range(2 * N):
        if (h * h - d) % (4 * N) == 0:
            return h
    return None


def curve_trace_function(E, Delta, mode="infinity", err_budget=None):
    """(F, shift) with F = zhat_E - shift, the function whose traces give c^+(d).

    ``shift`` is chosen by ``mode`` as in normalize_star; no 1/sqrt(|Delta| N)
    factor is applied.
    """
    from .mock import cusp_expansion, normalize_star, zhat_eval

    if mode == "infinity":
        shift = cusp_expansion(E, 1, 1).constant_term
    else:
        shift = normalize_star(E, Delta, 1, mode=mode)[2]

    def F(z):
        return zhat_eval(E, z, err_budget).total - shift

    return F, shift


def curve_lift_coefficient(E, Delta, r, d, h=None, mode="infinity", sign_convention="corrected",
                           normalization="footnote", err_budget=None):
    """c^+(d) for the lift of Z_E minus its cusp constant(s), traced over Delta * d."""
    N = E.conductor
    if h is None:
        h = default_h(N, d)
        if h is None:
            raise ValueError(f"{d} is not a square mod {4 * N}")
    F, _ = curve_trace_function(E, Delta, mode, err_budget)
    return lift_coefficient(F, N, Delta, r, d, h, sign_convention, normalization)


def klein_j_minus_744(z):
    """J(z) = j(z) - 744, evaluated after SL2(Z) reduction via Eisenstein series."""
    from .lattice import eisenstein_q, reduce_tau

    tau, _ = reduce_tau(z)
    _, E4, E6 = eisenstein_q(tau)
    return 1728 * E4**3 / (E4**3 - E6**2) - 744


def zagier_fd(d, D_max, Delta=None):
    """Generating series of twisted traces of J = j - 744 for the discriminant -d (N = 1).

    Coefficient of q^D (1 <= D <= D_max, -d D a discriminant) is
    (1/sqrt(D)) sum chi(Q) J(alpha_Q) / w_Q with the genus character for -d;
    the principal part is q^-d.
    """
    from .series import LaurentQSeries

    Delta = -d if Delta is None else Delta
    terms = {-d: mp.mpc(1)}
    for D in range(1, D_max + 1):
        disc = Delta * D
        if disc % 4 not in (0, 1):
            continue
        c = lift_coefficient(klein_j_minus_744, 1, Delta, Delta % 2, D, h=1 if D % 2 else 0)
        terms[D] = c
    return LaurentQSeries.from_dict(terms, D_max + 1, exact=False)
