"""Finite-size sum-rate expressions, all in bits per channel use (log base 2).

Interference is always treated as noise.  An uplink network's sum-rate
is log2(1 + P * sum of active channel gains / (N0 + interference
power)); a downlink network transmits to its strongest user, so the sum
is replaced by a max.  Interference into a receiver comes from the
opposite network's active uplink users, or from its base station when
that network is in downlink mode.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import RefusalError
from .fading import FadingModel, Rayleigh
from .network import Mode, NetworkInstance, Scenario
from .scheduling import ScheduleDecision


class RatePair(NamedTuple):
    """Primary and secondary sum-rates in bits per channel use."""

    primary: float
    secondary: float


def uplink_alone(gains, P: float, N0: float) -> float:
    """Stand-alone multiple-access sum-rate log2(1 + P * sum(G) / N0)."""
    gains = np.asarray(gains, dtype=np.float64)
    if gains.size == 0:
        raise ValueError("uplink_alone needs at least one user")
    return float(np.log2(1.0 + P * gains.sum() / N0))


def downlink_alone(gains, P: float, N0: float) -> float:
    """Stand-alone broadcast sum-rate log2(1 + P * max(G) / N0)."""
    gains = np.asarray(gains, dtype=np.float64)
    if gains.size == 0:
        raise ValueError("downlink_alone needs at least one user")
    return float(np.log2(1.0 + P * gains.max() / N0))


def _signal(gains: np.ndarray, active: np.ndarray, mode: Mode) -> float:
    """Numerator gain term: sum over active uplink users, max for downlink."""
    if len(active) == 0:
        return 0.0
    if mode is Mode.UPLINK:
        return float(gains[active].sum())
    return float(gains[active].max())


def _interference(instance: NetworkInstance, decision: ScheduleDecision, source: Mode, into_primary: bool) -> float:
    """Interference power-gain total arriving at one network's receiver."""
    if source is Mode.DOWNLINK:
        return instance.g0_sp if into_primary else instance.g0_ps
    if into_primary:
        active = decision.active_secondary
        return float(instance.g_sp[active].sum()) if len(active) else 0.0
    active = decision.active_primary
    return float(instance.g_ps[active].sum()) if len(active) else 0.0


def _rate(signal: float, interference: float, P: float, N0: float) -> float:
    if signal == 0.0:
        return 0.0
    return float(np.log2(1.0 + P * signal / (N0 + P * interference)))


def sim_rates(
    instance: NetworkInstance, decision: ScheduleDecision, scenario: Scenario
) -> RatePair:
    """(primary, secondary) sum-rates under simultaneous transmission."""
    params = instance.params
    if scenario.primary_mode is Mode.DOWNLINK and len(decision.active_primary) > 1:
        raise ValueError("downlink primary transmits to a single user")
    if scenario.secondary_mode is Mode.DOWNLINK and len(decision.active_secondary) > 1:
        raise ValueError("downlink secondary transmits to a single user")
    sig_p = _signal(instance.g_p, decision.active_primary, scenario.primary_mode)
    sig_s = _signal(instance.g_s, decision.active_secondary, scenario.secondary_mode)
    int_p = _interference(instance, decision, scenario.secondary_mode, into_primary=True)
    int_s = _interference(instance, decision, scenario.primary_mode, into_primary=False)
    return RatePair(
        _rate(sig_p, int_p, params.P, params.N0),
        _rate(sig_s, int_s, params.P, params.N0),
    )


def ub_rates(
    instance: NetworkInstance, decision: ScheduleDecision, scenario: Scenario
) -> RatePair:
    """Best-case rate pair dominating any subset pair of the same sizes.

    Every activated user is credited with the largest channel gain in its
    network while the interference uses the smallest order statistics, so
    component-wise ``ub_rates >= sim_rates`` for any decision with the
    same cardinalities.  Defined for scenarios with at least one uplink
    network; a double-downlink system has no such construction.
    """
    if scenario.primary_mode is Mode.DOWNLINK and scenario.secondary_mode is Mode.DOWNLINK:
        raise RefusalError("no best-case construction exists for the dd scenario")
    params = instance.params
    P, N0 = params.P, params.N0
    count_p = len(decision.active_primary)
    count_s = len(decision.active_secondary)

    def lowest_sum(gains: np.ndarray, count: int) -> float:
        if count == 0:
            return 0.0
        return float(np.partition(gains, count - 1)[:count].sum())

    if scenario.primary_mode is Mode.UPLINK:
        sig_p = count_p * float(instance.g_p.max()) if count_p else 0.0
    else:
        sig_p = float(instance.g_p.max())
    if scenario.secondary_mode is Mode.UPLINK:
        sig_s = count_s * float(instance.g_s.max()) if count_s else 0.0
    else:
        sig_s = float(instance.g_s.max())

    if scenario.secondary_mode is Mode.UPLINK:
        int_p = lowest_sum(instance.g_sp, count_s)
    else:
        int_p = instance.g0_sp
    if scenario.primary_mode is Mode.UPLINK:
        int_s = lowest_sum(instance.g_ps, count_p)
    else:
        int_s = instance.g0_ps

    return RatePair(_rate(sig_p, int_p, P, N0), _rate(sig_s, int_s, P, N0))


def td_rates(primary_alone: float, secondary_alone: float, f) -> RatePair:
    """Time-division split: primary transmits a fraction f, secondary 1 - f."""
    if not 0 < f <= 1:
        raise ValueError(f"time fraction must lie in (0, 1], got {f}")
    return RatePair(f * primary_alone, (1 - f) * secondary_alone)


def intermediate_rate(
    scenario: Scenario,
    n: int,
    alpha: float,
    P: float,
    N0: float,
    alpha_bar: float | None = None,
    beta: float = 0.5,
    model: FadingModel = Rayleigh(),
) -> float:
    """Closed-form secondary rate with concentration values substituted in.

    For Rayleigh gains and a primary that activates n**0.5 users, the
    interference sum at the secondary receiver concentrates at P/2, which
    gives the 1/2 term below; a downlink primary contributes its
    base-station gain with unit mean instead.

      uu: log2(1 + n**alpha_bar / (N0/P + 1/2))
      ud: log2(1 + ln(n**alpha) / (N0/P + 1/2))
      du: log2(1 + n**alpha_bar / (N0/P + 1))
      dd: log2(1 + ln(n**alpha) / (N0/P + 1))

    These are the dashed tracking curves the simulated rate converges to.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    tag = scenario.tag
    if tag in ("uu", "ud"):
        if not isinstance(model, Rayleigh):
            raise RefusalError(
                "the 1/2 interference term in the uu/ud closed forms is specific to "
                "Rayleigh gains (unit low-gain parameters); other models are not supported"
            )
        if beta != 0.5:
            raise RefusalError(
                "the 1/2 interference term in the uu/ud closed forms assumes the primary "
                f"activates n**0.5 users; got beta={beta}"
            )
        noise = N0 / P + 0.5
    else:
        noise = N0 / P + 1.0
    if tag in ("uu", "du"):
        if alpha_bar is None:
            raise ValueError(f"scenario {tag} needs alpha_bar")
        signal = float(n) ** alpha_bar
    else:
        signal = alpha * math.log(n)
    return float(np.log2(1.0 + signal / noise))
