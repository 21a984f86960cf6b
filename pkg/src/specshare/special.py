"""Scalar special functions backing the fading distributions.

Self-contained implementations in the classic Numerical-Recipes style:
a power series / asymptotic-expansion pair for the modified Bessel
function I0, and a series / continued-fraction pair for the regularized
lower incomplete gamma function.  ``math.lgamma`` from the standard
library supplies log-gamma.
"""

from __future__ import annotations

import math

_I0_SWITCH = 15.0  # below: power series; above: asymptotic expansion
_MAX_ITER = 600
_EPS = 1e-17


def bessel_i0(x: float) -> float:
    """Modified Bessel function of the first kind, order zero."""
    return math.exp(log_bessel_i0(x))


def log_bessel_i0(x: float) -> float:
    """ln I0(x) for x >= 0, safe against overflow of e^x."""
    if x < 0:
        raise ValueError(f"bessel_i0 requires x >= 0, got {x}")
    if x < _I0_SWITCH:
        # all-positive power series: sum_k (x^2/4)^k / (k!)^2
        t = 0.25 * x * x
        term = 1.0
        total = 1.0
        for k in range(1, _MAX_ITER):
            term *= t / (k * k)
            total += term
            if term < total * _EPS:
                break
        return math.log(total)
    # I0(x) ~ e^x/sqrt(2 pi x) * sum_k a_k x^{-k}, a_k = a_{k-1} (2k-1)^2/(8k).
    # The series is divergent; accumulate while terms shrink.
    term = 1.0
    total = 1.0
    for k in range(1, 40):
        nxt = term * (2 * k - 1) ** 2 / (8.0 * k * x)
        if nxt >= term:
            break
        term = nxt
        total += term
        if term < total * _EPS:
            break
    return x - 0.5 * math.log(2.0 * math.pi * x) + math.log(total)


def reg_lower_gamma(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x).

    Series representation for x < a + 1, continued fraction for the
    complement beyond (the switch point keeps both expansions in their
    fast-converging regime).
    """
    if a <= 0:
        raise ValueError(f"shape must be positive, got {a}")
    if x < 0:
        raise ValueError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_series(a, x)
    return 1.0 - _gamma_cont_fraction(a, x)


def reg_upper_gamma(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x)."""
    if a <= 0:
        raise ValueError(f"shape must be positive, got {a}")
    if x < 0:
        raise ValueError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_series(a, x)
    return _gamma_cont_fraction(a, x)


def _log_prefactor(a: float, x: float) -> float:
    return -x + a * math.log(x) - math.lgamma(a)


def _gamma_series(a: float, x: float) -> float:
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(_log_prefactor(a, x))


def _gamma_cont_fraction(a: float, x: float) -> float:
    # modified Lentz evaluation of the continued fraction for Q(a, x)
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if b != 0 else 1.0 / tiny
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(_log_prefactor(a, x))
