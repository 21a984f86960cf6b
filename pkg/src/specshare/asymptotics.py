"""Closed-form asymptotic results: scaling baselines, throughput factors,
and the protection-factor ranges where simultaneous transmission beats
time division.

All functions pass ``int``/``Fraction`` inputs through exact rational
arithmetic, so endpoints like 5/7 or 26/35 come out as exact fractions;
float inputs fall back to float arithmetic.  The secondary throughput
factor is the limiting ratio of the secondary sum-rate under sharing to
its stand-alone sum-rate; under time division it equals 1 - f.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import RefusalError
from .network import CoexistenceLevel, Mode, Scenario, check_level

LOG_N = "log n"
LOG_LOG_N = "log log n"


def _pos(x):
    """Clamp to the nonnegative part, preserving exact types."""
    return x if x > 0 else 0 * x


def _check_config(f, alpha, gamma) -> None:
    if not 0 < f <= 1:
        raise ValueError(f"protection factor must lie in (0, 1], got {f}")
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")


@dataclass(frozen=True)
class AsymptoticConfig:
    """One closed-form query: scenario, level, and the (f, alpha, gamma) triple."""

    scenario: Scenario
    level: CoexistenceLevel
    f: object
    alpha: object
    gamma: object

    def __post_init__(self):
        check_level(self.scenario, self.level)
        _check_config(self.f, self.alpha, self.gamma)


@dataclass(frozen=True)
class FactorResult:
    """Secondary throughput factor in [0, 1] plus primary-protection feasibility."""

    secondary_factor: object
    feasible: bool


@dataclass(frozen=True)
class RateScale:
    """Symbolic asymptotic sum-rate: coefficient times log n or log log n."""

    coefficient: object
    scale: str

    def __str__(self):
        inner = "log(n)" if self.scale == LOG_N else "log(log(n))"
        return f"{self.coefficient}*{inner}"


def td_exponents(scenario: Scenario, f, alpha) -> tuple[RateScale, RateScale]:
    """Time-division scaling pair (primary, secondary).

    An uplink network scales as log n (coefficient includes alpha on the
    secondary side), a downlink one as log log n.  The secondary's time
    share is 1 - f in every scenario.
    """
    if not 0 < f <= 1:
        raise ValueError(f"protection factor must lie in (0, 1], got {f}")
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if scenario.primary_mode is Mode.UPLINK:
        primary = RateScale(f, LOG_N)
    else:
        primary = RateScale(f, LOG_LOG_N)
    if scenario.secondary_mode is Mode.UPLINK:
        secondary = RateScale(alpha * (1 - f), LOG_N)
    else:
        secondary = RateScale(1 - f, LOG_LOG_N)
    return primary, secondary


def throughput_factor(config: AsymptoticConfig) -> FactorResult:
    """Maximum secondary throughput factor under the primary protection constraint."""
    scenario, level = config.scenario, config.level
    f, alpha, gamma = config.f, config.alpha, config.gamma
    tag = scenario.tag

    if level is CoexistenceLevel.PURE_INTERFERENCE:
        if tag == "uu":
            # Protection needs the secondary exponent alpha <= 1 - f, and
            # even then the secondary's own rate vanishes relative to its
            # stand-alone scaling.
            feasible = f < 1 and alpha <= 1 - f
            return FactorResult(0 * f, feasible)
        if tag == "du":
            # The full secondary uplink drowns the downlink primary.
            return FactorResult(0 * f, False)
        if tag == "ud":
            return FactorResult(0 * f, True)
        return FactorResult(1 + 0 * f, True)  # dd

    if tag == "uu":
        if level is CoexistenceLevel.ASYMMETRIC:
            return FactorResult(_pos((alpha - 1 - f * gamma) / (alpha * (1 + gamma))), True)
        # symmetric: two branches that agree at f = 1/(1+gamma)
        if f <= 1 / (1 + gamma):
            if alpha >= 1 / (1 + gamma) - f:
                value = (
                    gamma / (alpha * (gamma + 1) ** 2)
                    - (gamma / (gamma + 1)) * f / alpha
                    + 1 / (1 + gamma)
                )
                return FactorResult(_pos(value), True)
            return FactorResult(1 + 0 * f, True)
        value = 1 / (alpha * gamma) - (1 + 1 / gamma) * f / alpha + 1 / (1 + gamma)
        return FactorResult(_pos(value), True)

    if tag == "du":  # asymmetric is the only scheduled level here
        return FactorResult(1 / (1 + gamma) + 0 * f, True)

    # ud, symmetric
    if f <= 1 / (1 + gamma):
        return FactorResult(1 + 0 * f, True)
    return FactorResult(0 * f, True)


@dataclass(frozen=True)
class Interval:
    """Interval of protection factors f; lo is open, hi closure is per ``hi_closed``."""

    lo: object
    hi: object
    hi_closed: bool = True

    def __str__(self):
        return f"({self.lo}, {self.hi}{']' if self.hi_closed else ')'}"

    def contains(self, f) -> bool:
        if not self.lo < f:
            return False
        return f <= self.hi if self.hi_closed else f < self.hi


def crossover_ranges(
    scenario: Scenario,
    level: CoexistenceLevel,
    alpha,
    gamma,
) -> tuple[Interval, ...]:
    """Ranges of f where the sharing factor strictly exceeds the TD factor 1 - f."""
    check_level(scenario, level)
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    tag = scenario.tag

    if tag == "uu":
        if level is CoexistenceLevel.PURE_INTERFERENCE:
            return ()
        if level is CoexistenceLevel.ASYMMETRIC:
            if alpha > 1 + gamma:
                lo = (1 + gamma * alpha) / (alpha - gamma + gamma * alpha)
                return (Interval(lo, 1 + 0 * lo, hi_closed=True),)
            return ()
        # symmetric
        if gamma < 1:
            raise RefusalError(
                "closed-form crossover ranges for uu symmetric co-existence are "
                "stated only for gamma >= 1; for gamma < 1 the ranges are left "
                "implicit and must be read off the factor curve"
            )
        results = []
        if alpha > 1 + gamma:
            lo = (alpha * gamma**2 / (gamma + 1) - 1) / (gamma * alpha - 1 - gamma)
            results.append(Interval(lo, 1 + 0 * lo, hi_closed=True))
        if alpha < 1 / (1 + gamma):
            hi = (gamma * alpha - gamma / (gamma + 1)) / (gamma * alpha + alpha - gamma)
            results.append(Interval(0 * hi, hi, hi_closed=False))
        return tuple(results)

    if tag == "du":
        if level is CoexistenceLevel.PURE_INTERFERENCE:
            return ()
        lo = gamma / (1 + gamma)
        return (Interval(lo, 1 + 0 * lo, hi_closed=True),)

    if tag == "ud":
        if level is CoexistenceLevel.PURE_INTERFERENCE:
            return ()
        hi = 1 / (1 + gamma)
        return (Interval(0 * hi, hi, hi_closed=True),)

    # dd: simultaneous transmission wins for every f
    one = 1 if isinstance(gamma, (int, Fraction)) else 1.0
    return (Interval(0 * one, one, hi_closed=True),)


def factor_curve(
    scenario: Scenario,
    level: CoexistenceLevel,
    alpha,
    gamma,
    f_grid,
) -> list[tuple[object, object, object]]:
    """Rows (f, sharing factor, TD factor 1 - f) over a grid of f values."""
    rows = []
    for f in f_grid:
        result = throughput_factor(AsymptoticConfig(scenario, level, f, alpha, gamma))
        rows.append((f, result.secondary_factor, 1 - f))
    return rows
