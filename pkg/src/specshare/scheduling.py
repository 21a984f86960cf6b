"""Active-set selection for uplink networks.

The least-interference rule activates the users with the smallest
interference gains to the opposite network's receiver; it is equivalent
to comparing each user's interference gain against a quantile threshold,
which is what makes the strategy deployable without any coordination.
For small systems an exhaustive oracle searches every index-subset pair
at fixed cardinalities and maximizes the secondary rate subject to a
per-realization primary protection constraint, providing the comparison
point for the claim that joint optimization cannot beat
least-interference scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .errors import RefusalError
from .fading import FadingModel
from .network import (
    CoexistenceLevel,
    Mode,
    NetworkInstance,
    Scenario,
    Strategy,
    check_level,
    power_count,
)

BRUTE_FORCE_LIMIT = 14


@dataclass(frozen=True)
class ActivationExponents:
    """Activated-user scaling exponents: secondary n**alpha_bar, primary n**beta."""

    alpha_bar: float
    beta: float

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")
        if self.alpha_bar < 0.0:
            raise ValueError(f"alpha_bar must be >= 0, got {self.alpha_bar}")


@dataclass(frozen=True)
class ScheduleDecision:
    """Activated index sets plus the realized thresholds that produced them.

    ``active_primary``/``active_secondary`` are sorted index arrays.  For
    a downlink network the "active set" is the single strongest user (the
    base station transmits to it).  Thresholds are the largest activated
    interference gain and are present only for least-interference
    selections.  ``feasible`` is False only for exhaustive-search results
    where no subset pair satisfied the protection constraint.
    """

    active_primary: np.ndarray
    active_secondary: np.ndarray
    primary_threshold: Optional[float] = None
    secondary_threshold: Optional[float] = None
    feasible: bool = True

    def __post_init__(self):
        for arr in (self.active_primary, self.active_secondary):
            arr.setflags(write=False)


def _as_index_array(indices) -> np.ndarray:
    return np.sort(np.asarray(list(indices), dtype=np.intp))


def least_interference_set(interference_gains: np.ndarray, count: int) -> np.ndarray:
    """Indices of the ``count`` smallest gains; ties broken by lower index."""
    gains = np.asarray(interference_gains, dtype=np.float64)
    count = int(count)
    if not 0 <= count <= len(gains):
        raise ValueError(f"count must lie in [0, {len(gains)}], got {count}")
    if count == 0:
        return np.empty(0, dtype=np.intp)
    order = np.argsort(gains, kind="stable")
    return np.sort(order[:count])


def threshold_value(model: FadingModel, count: int, pool: int) -> float:
    """Quantile threshold F^{-1}(count/(pool+1)) for activating ~count of pool users."""
    count, pool = int(count), int(pool)
    if not 1 <= count <= pool:
        raise ValueError(f"need 1 <= count <= pool, got count={count}, pool={pool}")
    return model.quantile(count / (pool + 1))


def _strongest(gains: np.ndarray) -> np.ndarray:
    return np.array([int(np.argmax(gains))], dtype=np.intp)


def _realized_threshold(gains: np.ndarray, selected: np.ndarray) -> Optional[float]:
    if len(selected) == 0:
        return 0.0
    return float(np.max(gains[selected]))


def schedule(
    instance: NetworkInstance,
    scenario: Scenario,
    level: CoexistenceLevel,
    strategy: Strategy,
    exponents: ActivationExponents,
) -> ScheduleDecision:
    """Build the activated sets for one realization.

    Pure interference activates everything; the asymmetric level lets
    only the secondary select (primary treated as fully active); the
    symmetric level applies least-interference selection on both sides.
    Downlink networks always get the strongest-user sentinel.  Joint
    optimization has no closed selection rule and is served by
    :func:`joint_opt_bruteforce`.
    """
    check_level(scenario, level)
    if strategy is Strategy.JOINT_OPTIMIZATION and level is not CoexistenceLevel.PURE_INTERFERENCE:
        raise ValueError(
            "joint optimization has no streaming selection rule; "
            "use joint_opt_bruteforce for the exhaustive finite-size oracle"
        )
    params = instance.params
    n, k = params.n, params.k
    if exponents.alpha_bar > params.alpha:
        raise ValueError(
            f"alpha_bar={exponents.alpha_bar} exceeds alpha={params.alpha}"
        )

    p_thr = s_thr = None

    if scenario.primary_mode is Mode.DOWNLINK:
        active_p = _strongest(instance.g_p)
    elif level is CoexistenceLevel.SYMMETRIC:
        count_p = power_count(n, exponents.beta, n)
        active_p = least_interference_set(instance.g_ps, count_p)
        p_thr = _realized_threshold(instance.g_ps, active_p)
    else:  # pure interference, or asymmetric (primary operates as usual)
        active_p = np.arange(n, dtype=np.intp)

    if scenario.secondary_mode is Mode.DOWNLINK:
        active_s = _strongest(instance.g_s)
    elif level is CoexistenceLevel.PURE_INTERFERENCE:
        active_s = np.arange(k, dtype=np.intp)
    else:
        count_s = power_count(n, exponents.alpha_bar, k)
        active_s = least_interference_set(instance.g_sp, count_s)
        s_thr = _realized_threshold(instance.g_sp, active_s)

    if strategy is not Strategy.LEAST_INTERFERENCE:
        p_thr = s_thr = None
    return ScheduleDecision(active_p, active_s, p_thr, s_thr)


def joint_opt_bruteforce(
    instance: NetworkInstance,
    scenario: Scenario,
    level: CoexistenceLevel,
    f: float,
    counts: tuple[int, int],
) -> ScheduleDecision:
    """Exhaustive subset search at fixed cardinalities.

    Maximizes the secondary rate over every admissible index-subset pair
    subject to the per-realization protection constraint
    ``primary_sim_rate >= f * primary_alone_rate``; ties resolve to the
    lexicographically smallest pair.  If nothing is feasible, returns the
    pair maximizing the primary rate, flagged ``feasible=False``.  Sizes
    are capped at n, k <= 14.
    """
    from . import rates  # local import to avoid a module cycle

    check_level(scenario, level)
    if level is CoexistenceLevel.PURE_INTERFERENCE and counts != (
        len(instance.g_p),
        len(instance.g_s),
    ):
        raise ValueError("pure interference admits only the all-active subset pair")
    params = instance.params
    n, k = params.n, params.k
    if n > BRUTE_FORCE_LIMIT or k > BRUTE_FORCE_LIMIT:
        raise RefusalError(
            f"exhaustive subset search is capped at n, k <= {BRUTE_FORCE_LIMIT}; "
            f"got n={n}, k={k}"
        )
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"protection factor must lie in [0, 1], got {f}")
    count_p, count_s = counts
    P, N0 = params.P, params.N0

    primary_up = scenario.primary_mode is Mode.UPLINK
    secondary_up = scenario.secondary_mode is Mode.UPLINK
    if level is CoexistenceLevel.ASYMMETRIC and primary_up and count_p != n:
        raise ValueError("asymmetric level keeps the primary fully active (count_p must be n)")

    # Candidate subsets per side.  Downlink sides have a single candidate
    # (strongest user); an uplink side that does not schedule at this
    # level is pinned to the all-active subset.
    if primary_up:
        if level is CoexistenceLevel.SYMMETRIC:
            if not 0 <= count_p <= n:
                raise ValueError(f"primary count must lie in [0, {n}], got {count_p}")
            p_subsets = list(combinations(range(n), count_p))
        else:
            p_subsets = [tuple(range(n))]
    else:
        p_subsets = [tuple(_strongest(instance.g_p))]
    if secondary_up:
        if not 0 <= count_s <= k:
            raise ValueError(f"secondary count must lie in [0, {k}], got {count_s}")
        s_subsets = list(combinations(range(k), count_s))
    else:
        s_subsets = [tuple(_strongest(instance.g_s))]

    def subset_sums(gains: np.ndarray, subsets: list[tuple[int, ...]]) -> np.ndarray:
        if subsets and len(subsets[0]) == 0:
            return np.zeros(len(subsets))
        idx = np.array(subsets, dtype=np.intp)
        return gains[idx].sum(axis=1)

    # Signal terms per subset (sum for uplink, strongest gain for downlink)
    sig_p = subset_sums(instance.g_p, p_subsets) if primary_up else np.array(
        [instance.g_p[p_subsets[0][0]]]
    )
    sig_s = subset_sums(instance.g_s, s_subsets) if secondary_up else np.array(
        [instance.g_s[s_subsets[0][0]]]
    )
    # Interference terms: an uplink side interferes through its active
    # users, a downlink side through its base station.
    int_into_p = (
        subset_sums(instance.g_sp, s_subsets) if secondary_up else np.full(len(s_subsets), instance.g0_sp)
    )
    int_into_s = (
        subset_sums(instance.g_ps, p_subsets) if primary_up else np.full(len(p_subsets), instance.g0_ps)
    )

    rate_p = np.log2(1.0 + P * sig_p[:, None] / (N0 + P * int_into_p[None, :]))
    rate_s = np.log2(1.0 + P * sig_s[None, :] / (N0 + P * int_into_s[:, None]))

    alone_p = (
        rates.uplink_alone(instance.g_p, P, N0)
        if primary_up
        else rates.downlink_alone(instance.g_p, P, N0)
    )
    feasible_mask = rate_p >= f * alone_p

    if feasible_mask.any():
        score = np.where(feasible_mask, rate_s, -np.inf)
        flat = int(np.argmax(score))  # first max = lexicographically smallest pair
        feasible = True
    else:
        flat = int(np.argmax(rate_p))
        feasible = False
    i, j = divmod(flat, len(s_subsets))
    return ScheduleDecision(
        _as_index_array(p_subsets[i]),
        _as_index_array(s_subsets[j]),
        feasible=feasible,
    )


def optimal_exponents(
    scenario: Scenario,
    level: CoexistenceLevel,
    f,
    alpha,
    gamma,
) -> ActivationExponents:
    """Closed-form optimizing exponents for each scenario and level.

    These are the activation exponents that attain the maximum secondary
    throughput factor in the asymptotic analysis.  An ``alpha_bar`` (or
    secondary count) of 0 encodes "no positive scaling achievable".
    Downlink sides carry sentinel values: beta=1 for a downlink primary,
    alpha_bar=alpha for a downlink secondary.
    """
    check_level(scenario, level)
    if level is CoexistenceLevel.PURE_INTERFERENCE:
        raise ValueError("pure interference has no activation exponents to optimize")
    if not 0 < f <= 1:
        raise ValueError(f"protection factor must lie in (0, 1], got {f}")
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")

    if scenario == Scenario.parse("uu"):
        if level is CoexistenceLevel.ASYMMETRIC:
            if alpha > 1:
                a_bar = (gamma - f * gamma + alpha) / (1 + gamma)
            else:
                a_bar = 0
            return ActivationExponents(alpha_bar=float(a_bar), beta=1.0)
        # symmetric
        if f <= 1 / (1 + gamma):
            beta = 1 / (1 + gamma)
            if alpha >= 1 / (1 + gamma) - f:
                a_bar = (gamma * (beta - f) + alpha) / (1 + gamma)
            else:
                a_bar = alpha
        else:
            beta = f
            if alpha > ((1 + gamma) ** 2 * f - (1 + gamma)) / gamma:
                a_bar = alpha / (1 + gamma)
            else:
                a_bar = 0
        return ActivationExponents(alpha_bar=float(a_bar), beta=float(beta))

    if scenario == Scenario.parse("du"):
        return ActivationExponents(alpha_bar=float(alpha / (1 + gamma)), beta=1.0)

    if scenario == Scenario.parse("ud"):
        return ActivationExponents(alpha_bar=float(alpha), beta=float(f))

    raise ValueError("dd has no scheduled level")
