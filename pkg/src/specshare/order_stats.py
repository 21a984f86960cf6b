"""Concentration sequences and finite-n oracles for extreme order statistics.

Two asymptotic facts drive every scaling result in the toolkit: the
maximum of n draws from an exponential-tail(c) distribution concentrates
as ln(n)/c, and the sum of the k = f(n) lowest order statistics of a
low-gain(lam, gamma) distribution concentrates as
n * (f(n)/n)**(1 + 1/gamma) / (lam**(1/gamma) * (1 + 1/gamma)).

Alongside the closed forms live exact and empirical finite-n oracles so
simulations can be checked against something independent: a closed-form
expectation for the exponential case and direct partial-selection
sampling for any model.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fading import FadingModel, LowGainParams, TailParams


@dataclass(frozen=True)
class ConcentrationSequence:
    """A deterministic normalizer a_n > 0 together with a readable description."""

    description: str
    eval: Callable[[int], float]

    def __call__(self, n: int) -> float:
        return self.eval(n)


def max_concentration(tail: TailParams, n: int) -> float:
    """Normalizer ln(n)/c for the maximum of n exponential-tail draws."""
    n = int(n)
    if n < 2:
        raise ValueError(f"max concentration needs n >= 2, got {n}")
    return np.log(n) / tail.c


def lower_sum_concentration(low: LowGainParams, n: int, f_of_n: int) -> float:
    """Normalizer for the sum of the f(n) lowest of n low-gain draws."""
    n, f_of_n = int(n), int(f_of_n)
    if not 1 <= f_of_n <= n:
        raise ValueError(f"need 1 <= f(n) <= n, got f(n)={f_of_n}, n={n}")
    inv_gamma = 1.0 / low.gamma
    return n * (f_of_n / n) ** (1.0 + inv_gamma) / (low.lam**inv_gamma * (1.0 + inv_gamma))


def max_sequence(tail: TailParams) -> ConcentrationSequence:
    return ConcentrationSequence(f"ln(n)/{tail.c:g}", lambda n: max_concentration(tail, n))


def lower_sum_sequence(low: LowGainParams, f_exponent: float) -> ConcentrationSequence:
    def value(n: int) -> float:
        return lower_sum_concentration(low, n, int(np.ceil(n**f_exponent)))

    return ConcentrationSequence(
        f"n*(ceil(n^{f_exponent:g})/n)^(1+1/{low.gamma:g})"
        f"/({low.lam:g}^(1/{low.gamma:g})*(1+1/{low.gamma:g}))",
        value,
    )


def exact_exponential_lower_sum(n: int, k: int) -> float:
    """Exact E[sum of the k lowest of n unit exponentials].

    From E[X_{i:n}] = sum_{j=n-i+1}^{n} 1/j, collecting the weight each
    1/j receives across i = 1..k gives a single k-term sum.
    """
    n, k = int(n), int(k)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    j = np.arange(n - k + 1, n + 1, dtype=np.float64)
    return float(np.sum((j - (n - k)) / j))


def empirical_lower_sum(model: FadingModel, n: int, k: int, rng: np.random.Generator) -> float:
    """Draw n gains and return the sum of the k smallest (partial selection)."""
    n, k = int(n), int(k)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    draws = model.sample(rng, n)
    if k == n:
        return float(draws.sum())
    return float(np.partition(draws, k - 1)[:k].sum())


def inverse_low_gain_expansion(low: LowGainParams, y: float) -> float:
    """Leading term (y/lam)**(1/gamma) of the inverse CDF near zero.

    Accurate to O(y**(2/gamma)): the error against the true quantile is
    bounded by a constant times y**(2/gamma) for small y.
    """
    y = float(y)
    if not 0.0 < y < 0.1:
        raise ValueError(f"expansion valid for 0 < y < 0.1, got {y}")
    return (y / low.lam) ** (1.0 / low.gamma)


def deviation_probability(values: np.ndarray, normalizer: float, eps: float) -> float:
    """Fraction of trials with |value/normalizer - 1| > eps."""
    ratios = np.asarray(values, dtype=np.float64) / normalizer
    return float(np.mean(np.abs(ratios - 1.0) > eps))
