"""Unit-mean power-gain distributions for channel and interference gains.

Each model describes the power gain G = X^2/2 of a fading amplitude X
normalized so that E[X^2] = 2, hence E[G] = 1:

* ``Rayleigh``      - G is unit exponential.
* ``Rician(K)``     - G is a scaled noncentral chi-square; K is the ratio
                      of line-of-sight power to scattered power.
* ``NakagamiM(m)``  - G is Gamma(shape m, scale 1/m).

Beyond pdf/cdf/quantile/sampling, each model exposes the two parameters
the asymptotic analysis runs on: the exponential tail rate ``c`` of the
pdf, and the low-gain pair ``(lam, gamma)`` with
F(g) = lam * g**gamma + O(g**(gamma+1)) near zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special import log_bessel_i0, reg_lower_gamma

_QUANTILE_ABS_TOL = 1e-10


@dataclass(frozen=True)
class TailParams:
    """Exponential tail rate of the power-gain pdf: ln f(g)/g -> -c."""

    c: float

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"tail parameter c must be positive, got {self.c}")


@dataclass(frozen=True)
class LowGainParams:
    """Leading-order CDF behavior near zero: F(g) = lam * g**gamma + O(g**(gamma+1))."""

    lam: float
    gamma: float

    def __post_init__(self):
        if not (self.lam > 0 and self.gamma > 0):
            raise ValueError(f"low-gain parameters must be positive, got {self}")


def _check_gain(g: float) -> float:
    g = float(g)
    if g < 0 or math.isnan(g):
        raise ValueError(f"power gain must be nonnegative, got {g}")
    return g


def _check_prob(p: float) -> float:
    p = float(p)
    if not 0.0 <= p < 1.0:
        raise ValueError(f"probability must lie in [0, 1), got {p}")
    return p


class FadingModel:
    """Common interface of the unit-mean power-gain distributions."""

    def pdf(self, g: float) -> float:
        raise NotImplementedError

    def cdf(self, g: float) -> float:
        raise NotImplementedError

    def quantile(self, p: float) -> float:
        """Inverse CDF, bracketed bisection to 1e-10 absolute unless closed-form."""
        p = _check_prob(p)
        if p == 0.0:
            return 0.0
        lo, hi = 0.0, 1.0
        while self.cdf(hi) < p:
            lo, hi = hi, hi * 2.0
            if hi > 1e9:  # unreachable for the supported families
                raise RuntimeError("quantile bracket expansion failed")
        while hi - lo > _QUANTILE_ABS_TOL:
            mid = 0.5 * (lo + hi)
            if self.cdf(mid) < p:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        raise NotImplementedError

    def tail_parameter(self) -> TailParams:
        raise NotImplementedError

    def low_gain_params(self) -> LowGainParams:
        raise NotImplementedError

    def spec_string(self) -> str:
        """Round-trippable CLI/config spelling of the model."""
        raise NotImplementedError


def _check_count(count: int) -> int:
    count = int(count)
    if count < 1:
        raise ValueError(f"sample count must be >= 1, got {count}")
    return count


@dataclass(frozen=True)
class Rayleigh(FadingModel):
    """Rayleigh fading: power gain is unit exponential."""

    def pdf(self, g):
        return math.exp(-_check_gain(g))

    def cdf(self, g):
        return -math.expm1(-_check_gain(g))

    def quantile(self, p):
        return -math.log1p(-_check_prob(p))

    def sample(self, rng, count):
        # inverse transform keeps the draw count at exactly one uniform per gain
        return -np.log1p(-rng.random(_check_count(count)))

    def tail_parameter(self):
        return TailParams(c=1.0)

    def low_gain_params(self):
        return LowGainParams(lam=1.0, gamma=1.0)

    def spec_string(self):
        return "rayleigh"


@dataclass(frozen=True)
class Rician(FadingModel):
    """Rician fading with K-factor K >= 0; reduces to Rayleigh at K = 0."""

    K: float

    def __post_init__(self):
        if not self.K >= 0:
            raise ValueError(f"Rician K-factor must be >= 0, got {self.K}")

    def pdf(self, g):
        g = _check_gain(g)
        K = self.K
        # f(g) = (1+K) e^{-K} e^{-(K+1) g} I0(2 sqrt(K (K+1) g)), in log space
        z = 2.0 * math.sqrt(K * (K + 1.0) * g)
        return math.exp(math.log1p(K) - K - (K + 1.0) * g + log_bessel_i0(z))

    def cdf(self, g):
        g = _check_gain(g)
        K = self.K
        if K == 0.0:
            return -math.expm1(-g)
        x = (K + 1.0) * g
        if x > 700.0:
            return 1.0
        # Poisson(K)-weighted mixture of Erlang(k+1) CDFs evaluated at x.
        # upper = e^{-x} sum_{j > k} x^j / j! is peeled off term by term.
        weight = math.exp(-K)
        upper = -math.expm1(-x)
        px = math.exp(-x)
        total = 0.0
        weight_seen = 0.0
        for k in range(_max_poisson_terms(K)):
            total += weight * upper
            weight_seen += weight
            if 1.0 - weight_seen < 1e-16 and weight < 1e-16:
                break
            weight *= K / (k + 1.0)
            px *= x / (k + 1.0)
            upper = max(upper - px, 0.0)
        return min(total, 1.0)

    def sample(self, rng, count):
        count = _check_count(count)
        K = self.K
        # LOS offset calibrated so E[G] = 1: G = ((Z1 + mu)^2 + Z2^2)/2 with
        # Z ~ N(0, 1/(K+1)) and mu^2 = 2K/(K+1).
        sigma = math.sqrt(1.0 / (K + 1.0))
        mu = math.sqrt(2.0 * K / (K + 1.0))
        z = rng.standard_normal((2, count))
        return 0.5 * ((sigma * z[0] + mu) ** 2 + (sigma * z[1]) ** 2)

    def tail_parameter(self):
        return TailParams(c=self.K + 1.0)

    def low_gain_params(self):
        return LowGainParams(lam=(1.0 + self.K) * math.exp(-self.K), gamma=1.0)

    def spec_string(self):
        return f"rician:K={self.K:g}"


def _max_poisson_terms(K: float) -> int:
    # Poisson(K) tail below 1e-16 well before K + 40 sqrt(K) + 40
    return int(K + 40.0 * math.sqrt(K) + 40.0)


@dataclass(frozen=True)
class NakagamiM(FadingModel):
    """Nakagami-m fading: power gain is Gamma(shape m, scale 1/m), m >= 0.5."""

    m: float

    def __post_init__(self):
        if not self.m >= 0.5:
            raise ValueError(f"Nakagami shape must be >= 0.5, got {self.m}")

    def pdf(self, g):
        g = _check_gain(g)
        m = self.m
        if g == 0.0:
            if m < 1.0:
                return math.inf
            return 1.0 if m == 1.0 else 0.0
        log_pdf = m * math.log(m) - math.lgamma(m) + (m - 1.0) * math.log(g) - m * g
        return math.exp(log_pdf)

    def cdf(self, g):
        return reg_lower_gamma(self.m, self.m * _check_gain(g))

    def sample(self, rng, count):
        return rng.gamma(self.m, 1.0 / self.m, size=_check_count(count))

    def tail_parameter(self):
        return TailParams(c=self.m)

    def low_gain_params(self):
        m = self.m
        return LowGainParams(lam=math.exp((m - 1.0) * math.log(m) - math.lgamma(m)), gamma=m)

    def spec_string(self):
        return f"nakagami:m={self.m:g}"


def parse_model_spec(spec: str) -> FadingModel:
    """Parse a model specification string.

    Accepted forms: ``rayleigh``, ``rician:K=<v>``, ``nakagami:m=<v>``.
    """
    text = spec.strip().lower()
    if text == "rayleigh":
        return Rayleigh()
    for name, param, cls in (("rician", "k", Rician), ("nakagami", "m", NakagamiM)):
        prefix = name + ":"
        if text.startswith(prefix):
            body = text[len(prefix) :]
            key, sep, value = body.partition("=")
            if sep != "=" or key.strip() != param:
                raise ValueError(
                    f"bad model spec {spec!r}: expected {name}:{param.upper() if param == 'k' else param}=<value>"
                )
            try:
                return cls(float(value))
            except ValueError as exc:
                raise ValueError(f"bad model spec {spec!r}: {exc}") from None
    raise ValueError(
        f"unknown model spec {spec!r}; use rayleigh, rician:K=<v>, or nakagami:m=<v>"
    )
