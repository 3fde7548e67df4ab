"""Central values and first derivatives of L(E, s) and its quadratic twists at s = 1.

For a weight-2 newform of level M with root number eps and A = 2 pi / sqrt(M),

    L(1)  = (1 + eps) sum a(n)/n exp(-A n),
    L'(1) = 2 sum a(n)/n E1(A n)          (eps = -1),

where E1 is the exponential integral. With |a(n)| <= d(n) sqrt(n) <= 2 n the
tails past n = M_terms are bounded by 4 e^{-A (M+1)} / (1 - e^{-A}), with an
extra factor 1 / (A (M+1)) for the derivative since E1(x) <= e^{-x} / x.
"""

from dataclasses import dataclass
from math import exp, gcd, log, pi, sqrt

import numpy as np
from scipy.special import exp1

from .arith import is_fundamental_discriminant, kronecker
from .curves import atkin_lehner_data, newform_coefficients, quadratic_twist_coefficients

__all__ = [
    "LSeriesJob",
    "LValue",
    "central_derivative",
    "central_value",
    "l_series_job",
    "tail_bound",
    "terms_for",
    "twist_root_number",
]

DEFAULT_ERR = 1e-12


@dataclass(frozen=True)
class LSeriesJob:
    coefficients: object
    level: int
    root_number: int
    target: str
    terms: int
    err_bound: float


@dataclass(frozen=True)
class LValue:
    value: float
    err_bound: float
    terms: int
    note: str = ""

    def __float__(self):
        return float(self.value)


def tail_bound(level, terms, target):
    """Bound on the neglected tail of the smoothed series after ``terms`` terms."""
    A = 2 * pi / sqrt(level)
    x = A * (terms + 1)
    bound = 4 * exp(-x) / (1 - exp(-A))
    if target == "derivative":
        bound /= x
    return bound


def terms_for(level, err_bound, target="value"):
    """Smallest term count whose tail bound is below ``err_bound``."""
    A = 2 * pi / sqrt(level)
    M = max(16, int((log(4 / (err_bound * (1 - exp(-A))))) / A))
    while tail_bound(level, M, target) > err_bound:
        M = int(M * 1.1) + 1
    while M > 16 and tail_bound(level, M - 1, target) <= err_bound:
        M -= max(1, M // 64)
    while tail_bound(level, M, target) > err_bound:
        M += 1
    return M


def twist_root_number(E, d):
    """eps(E_d) = eps(E) chi_d(-N) for a fundamental d coprime to N."""
    d = int(d)
    if not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a fundamental discriminant")
    N = E.conductor
    if gcd(d, N) != 1:
        raise ValueError(f"gcd({d}, {N}) != 1")
    eps = atkin_lehner_data(E)["epsilon"]
    return eps * kronecker(d, -N)


def l_series_job(E, d=1, target=None, err_bound=DEFAULT_ERR, root_number=None):
    """Job for L(E_d, s) at s = 1; ``target`` defaults to what the root number leaves nonzero."""
    eps = twist_root_number(E, d) if root_number is None else int(root_number)
    if target is None:
        target = "value" if eps == 1 else "derivative"
    if target not in ("value", "derivative"):
        raise ValueError(f"unknown target {target!r}")
    level = E.conductor * d * d
    terms = terms_for(level, err_bound, target)
    coeffs = newform_coefficients(E, terms) if d == 1 else quadratic_twist_coefficients(E, d, terms)
    return LSeriesJob(coeffs, level, eps, target, terms, err_bound)


def _weights(job):
    n = np.arange(1, job.terms + 1, dtype=np.float64)
    a = np.asarray(job.coefficients.a[1 : job.terms + 1], dtype=np.float64)
    return n, a / n, 2 * pi / sqrt(job.level)


def central_value(job):
    """L(1); exactly 0 when the root number is -1."""
    if job.root_number == -1:
        return LValue(0.0, 0.0, 0, "root number -1 forces L(1) = 0")
    n, w, A = _weights(job)
    value = 2 * float(np.sum(w * np.exp(-A * n)))
    return LValue(value, tail_bound(job.level, job.terms, "value"), job.terms)


def central_derivative(job):
    """L'(1) for root number -1."""
    if job.root_number != -1:
        raise ValueError("the derivative series requires root number -1")
    n, w, A = _weights(job)
    value = 2 * float(np.sum(w * exp1(A * n)))
    return LValue(value, tail_bound(job.level, job.terms, "derivative"), job.terms)
