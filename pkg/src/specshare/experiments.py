"""Seeded Monte Carlo sweeps emitting CSV tables.

Three experiment families:

* concentration sweeps: empirical maxima or lowest-k sums against their
  closed-form normalizers;
* tracking sweeps: the simulated secondary sum-rate of each scenario
  against its closed-form "intermediate" curve as n grows;
* strategy comparisons: least-interference selection against the
  exhaustive subset oracle and the best-case bound on small systems.

Every run is a pure function of its spec including the seed.  Trial
streams are derived counter-style from (seed, n, trial, purpose), so
parallel execution cannot reorder randomness.

The tracking sweep simulates rates through identities that are exact in
distribution instead of materializing all k = round(n**alpha) secondary
users (k reaches 1e15 at the default settings): a sum of m unit
exponentials is drawn as Gamma(m, 1), and the maximum of k unit
exponentials as -ln(-expm1(ln(U)/k)) for a single uniform U.  Agreement
with the literal generate/schedule/evaluate path is covered by tests at
small sizes.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import __version__ as _version
from .asymptotics import Interval, crossover_ranges, factor_curve
from .errors import BudgetError, RefusalError
from .fading import FadingModel, Rayleigh
from .network import (
    CoexistenceLevel,
    Mode,
    Scenario,
    Strategy,
    SystemParams,
    check_level,
    generate,
    power_count,
)
from .order_stats import (
    exact_exponential_lower_sum,
    lower_sum_concentration,
    max_concentration,
)
from .rates import downlink_alone, intermediate_rate, sim_rates, ub_rates, uplink_alone
from .rng import StreamKey
from .scheduling import (
    ActivationExponents,
    ScheduleDecision,
    joint_opt_bruteforce,
    least_interference_set,
    optimal_exponents,
)

DEFAULT_BUDGET = 10**9  # total sampled gains per run


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


@dataclass(frozen=True)
class SweepSpec:
    """Full description of one tracking sweep (defaults follow the
    10 dB transmit / 0 dB noise, alpha=3 simulation setting)."""

    scenario: Scenario
    level: CoexistenceLevel
    n_grid: tuple[int, ...]
    trials: int
    seed: int
    strategy: Strategy = Strategy.LEAST_INTERFERENCE
    model: FadingModel = Rayleigh()
    alpha: float = 3.0
    alpha_bar: float = 1.5
    beta: float = 0.5
    P_dB: float = 10.0
    N_dB: float = 0.0

    def __post_init__(self):
        check_level(self.scenario, self.level)
        grid = tuple(int(n) for n in self.n_grid)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError(f"n_grid must be strictly increasing, got {self.n_grid}")
        if not grid or grid[0] < 2:
            raise ValueError("n_grid must contain integers >= 2")
        if int(self.trials) < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.alpha_bar > self.alpha:
            raise ValueError(f"alpha_bar={self.alpha_bar} exceeds alpha={self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")
        object.__setattr__(self, "n_grid", grid)

    @property
    def P(self) -> float:
        return db_to_linear(self.P_dB)

    @property
    def N0(self) -> float:
        return db_to_linear(self.N_dB)

    def metadata(self) -> dict:
        return {
            "scenario": self.scenario.tag,
            "level": self.level.value,
            "strategy": self.strategy.value,
            "model": self.model.spec_string(),
            "alpha": self.alpha,
            "alpha_bar": self.alpha_bar,
            "beta": self.beta,
            "n_grid": list(self.n_grid),
            "trials": self.trials,
            "seed": self.seed,
            "P_dB": self.P_dB,
            "N_dB": self.N_dB,
        }


@dataclass
class SweepResult:
    """Tabular result: per-trial rows plus per-n aggregates of the ratio column."""

    columns: tuple[str, ...]
    rows: list[tuple]
    aggregate_columns: tuple[str, ...]
    aggregates: list[tuple]
    metadata: dict = field(default_factory=dict)

    def write_csv(self, path: str | Path, sidecar: bool = True) -> tuple[Path, Path, Optional[Path]]:
        """Write rows, aggregates, and an optional JSON metadata sidecar.

        ``path`` is the per-trial CSV; aggregates go next to it with an
        ``.agg.csv`` suffix, metadata with ``.json``.
        """
        path = Path(path)
        _write_csv(path, self.columns, self.rows)
        agg_path = path.with_suffix(".agg.csv")
        _write_csv(agg_path, self.aggregate_columns, self.aggregates)
        meta_path = None
        if sidecar:
            meta_path = path.with_suffix(".json")
            meta = dict(self.metadata)
            meta["rows"] = len(self.rows)
            meta["version"] = _version
            meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
        return path, agg_path, meta_path


def _format_cell(value) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _write_csv(path: Path, columns: tuple[str, ...], rows: list[tuple]) -> None:
    # RFC-4180 style: header row, comma separators, LF line endings.  No
    # cell in these tables ever needs quoting.
    lines = [",".join(columns)]
    lines.extend(",".join(_format_cell(cell) for cell in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _aggregate(rows: list[tuple], n_index: int, ratio_index: int) -> list[tuple]:
    by_n: dict[int, list[float]] = {}
    for row in rows:
        by_n.setdefault(row[n_index], []).append(row[ratio_index])
    out = []
    for n in sorted(by_n):
        ratios = np.array(by_n[n])
        out.append((n, float(ratios.mean()), float(np.median(ratios)), float(ratios.std())))
    return out


def _run_trials(task: Callable[[int, int], tuple], pairs: list[tuple[int, int]], jobs: int) -> list[tuple]:
    if jobs <= 1:
        results = [task(n, t) for n, t in pairs]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda p: task(*p), pairs))
    return sorted(results, key=lambda row: (row[0], row[1]))


def _check_budget(estimated_draws: float, budget: int) -> None:
    if estimated_draws > budget:
        raise BudgetError(
            f"run would sample about {estimated_draws:.3g} gains, above the budget "
            f"of {budget:.3g}; shrink n_grid/trials or raise the budget"
        )


def _exp_max(rng: np.random.Generator, count: int) -> float:
    """Maximum of ``count`` unit exponentials via one uniform draw."""
    u = rng.random()
    return -math.log(-math.expm1(math.log(u) / count))


def _exp_sum(rng: np.random.Generator, count: int) -> float:
    """Sum of ``count`` unit exponentials via one Gamma(count, 1) draw."""
    if count == 0:
        return 0.0
    return float(rng.gamma(count, 1.0))


def run_tracking_sweep(spec: SweepSpec, budget: int = DEFAULT_BUDGET, jobs: int = 1) -> SweepResult:
    """Secondary sum-rate vs its closed-form intermediate curve.

    Scenario settings: an uplink secondary activates round(n**alpha_bar)
    least-interference users; an uplink primary (symmetric level)
    activates round(n**beta).  Supports Rayleigh gains only, matching the
    closed forms in :func:`specshare.rates.intermediate_rate`.
    """
    if not isinstance(spec.model, Rayleigh):
        raise RefusalError("tracking sweeps support Rayleigh gains only")
    if spec.strategy is not Strategy.LEAST_INTERFERENCE:
        raise RefusalError("tracking sweeps schedule by least interference only")
    tag = spec.scenario.tag

    per_trial = {"uu": lambda n: n + 2, "ud": lambda n: n + 2, "du": lambda n: 3, "dd": lambda n: 3}[tag]
    _check_budget(sum(per_trial(n) for n in spec.n_grid) * spec.trials, budget)

    P, N0 = spec.P, spec.N0
    root = StreamKey(spec.seed).child("tracking", tag)

    def describe(n: int) -> str:
        if tag in ("uu", "du"):
            return f"{spec.alpha_bar:g}*log2(n)"
        return f"log2({spec.alpha:g}*ln(n))"

    def task(n: int, trial: int) -> tuple:
        key = root.child(n, trial)
        sig_rng = key.child("signal").generator()
        int_rng = key.child("interference").generator()
        k = max(1, power_count(n, spec.alpha, 10**30))

        if tag in ("uu", "du"):
            count_s = power_count(n, spec.alpha_bar, k)
            # active users' own gains are i.i.d. (selection keys on the
            # independent interference gains), so their sum is Gamma(count_s, 1)
            signal = _exp_sum(sig_rng, count_s)
        else:
            signal = _exp_max(sig_rng, k)

        if tag in ("uu", "ud"):
            count_p = power_count(n, spec.beta, n)
            draws = -np.log1p(-int_rng.random(n))
            interference = float(np.partition(draws, count_p - 1)[:count_p].sum()) if count_p else 0.0
        else:
            interference = float(-math.log1p(-int_rng.random()))

        actual = math.log2(1.0 + P * signal / (N0 + P * interference)) if signal > 0 else 0.0
        inter = intermediate_rate(
            spec.scenario, n, spec.alpha, P, N0, alpha_bar=spec.alpha_bar, beta=spec.beta
        )
        ratio = actual / inter if inter > 0 else math.nan
        return (n, trial, actual, inter, describe(n), ratio)

    pairs = [(n, t) for n in spec.n_grid for t in range(spec.trials)]
    rows = _run_trials(task, pairs, jobs)
    return SweepResult(
        columns=("n", "trial", "actual_rate", "intermediate_rate", "asymptotic", "ratio"),
        rows=rows,
        aggregate_columns=("n", "mean_ratio", "median_ratio", "stddev_ratio"),
        aggregates=_aggregate(rows, 0, 5),
        metadata={"experiment": "tracking", **spec.metadata()},
    )


def run_concentration_sweep(
    model: FadingModel,
    statistic: str,
    n_grid: tuple[int, ...],
    trials: int,
    seed: int,
    f_exponent: float = 0.5,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
) -> SweepResult:
    """Empirical max or lowest-k sum against its concentration normalizer."""
    if statistic not in ("max", "lower_sum"):
        raise ValueError(f"statistic must be 'max' or 'lower_sum', got {statistic!r}")
    grid = tuple(int(n) for n in n_grid)
    if not grid or min(grid) < 2:
        raise ValueError("n_grid must contain integers >= 2")
    if statistic == "lower_sum" and not 0 < f_exponent < 1:
        raise ValueError(f"f_exponent must lie in (0, 1), got {f_exponent}")
    _check_budget(float(sum(grid)) * trials, budget)

    tail = model.tail_parameter()
    low = model.low_gain_params()
    root = StreamKey(seed).child("concentration", statistic, model.spec_string())

    def task(n: int, trial: int) -> tuple:
        rng = root.child(n, trial).generator()
        draws = model.sample(rng, n)
        if statistic == "max":
            value = float(draws.max())
            normalizer = max_concentration(tail, n)
        else:
            k = int(np.ceil(n**f_exponent))
            value = float(np.partition(draws, k - 1)[:k].sum())
            normalizer = lower_sum_concentration(low, n, k)
        return (n, trial, value, normalizer, value / normalizer)

    pairs = [(n, t) for n in grid for t in range(trials)]
    rows = _run_trials(task, pairs, jobs)
    return SweepResult(
        columns=("n", "trial", "value", "normalizer", "ratio"),
        rows=rows,
        aggregate_columns=("n", "mean_ratio", "median_ratio", "stddev_ratio"),
        aggregates=_aggregate(rows, 0, 4),
        metadata={
            "experiment": "concentration",
            "statistic": statistic,
            "model": model.spec_string(),
            "f_exponent": f_exponent if statistic == "lower_sum" else None,
            "n_grid": list(grid),
            "trials": trials,
            "seed": seed,
        },
    )


@dataclass
class FactorCurveResult:
    columns: tuple[str, ...]
    rows: list[tuple]
    crossovers: Optional[tuple[Interval, ...]]
    note: str = ""


def run_factor_curve(
    scenario: Scenario,
    level: CoexistenceLevel,
    alpha: float,
    gamma: float,
    f_step: float,
) -> FactorCurveResult:
    """Tabulate the sharing factor against the TD factor over an f grid."""
    if not 0 < f_step < 0.5:
        raise ValueError(f"f_step must lie in (0, 0.5), got {f_step}")
    steps = int(round(1.0 / f_step))
    grid = [i * f_step for i in range(1, steps)] + [1.0]
    rows = factor_curve(scenario, level, alpha, gamma, grid)
    try:
        crossovers: Optional[tuple[Interval, ...]] = crossover_ranges(scenario, level, alpha, gamma)
        note = ""
    except RefusalError as exc:
        crossovers = None
        note = str(exc)
    return FactorCurveResult(("f", "sim_factor", "td_factor"), rows, crossovers, note)


def default_oracle_counts(
    scenario: Scenario,
    level: CoexistenceLevel,
    f: float,
    n: int,
    k: int,
    gamma: float,
) -> tuple[int, int]:
    """Cardinalities for the strategy comparison.

    With a positive protection factor the closed-form optimizing
    exponents are rounded into counts; with f = 0 (no protection, every
    pair feasible) half the users are activated.  Downlink sides always
    count 1 (the strongest user).
    """
    primary_up = scenario.primary_mode is Mode.UPLINK
    secondary_up = scenario.secondary_mode is Mode.UPLINK
    if f > 0 and n >= 2:
        alpha = math.log(k) / math.log(n)
        exps = optimal_exponents(scenario, level, f, alpha, gamma)
        count_s = power_count(n, exps.alpha_bar, k) if secondary_up else 1
        if not primary_up:
            count_p = 1
        elif level is CoexistenceLevel.ASYMMETRIC:
            count_p = n
        else:
            count_p = power_count(n, exps.beta, n)
    else:
        count_s = max(1, k // 2) if secondary_up else 1
        if not primary_up:
            count_p = 1
        elif level is CoexistenceLevel.ASYMMETRIC:
            count_p = n
        else:
            count_p = max(1, n // 2)
    return count_p, count_s


def run_strategy_equivalence(
    n: int,
    k: int,
    model: FadingModel,
    scenario: Scenario,
    level: CoexistenceLevel,
    f: float,
    trials: int,
    seed: int,
    counts: Optional[tuple[int, int]] = None,
) -> SweepResult:
    """Least-interference vs exhaustive-oracle vs best-case secondary rates.

    Per trial, all three use the same cardinalities on the same
    realization.  Whenever the least-interference decision meets the
    protection constraint it lies inside the oracle's search space, so
    ``li <= jo`` must hold; ``jo <= ub`` and ``li <= ub`` must hold
    unconditionally.  The ``violations`` metadata counts failures of the
    applicable comparisons.
    """
    check_level(scenario, level)
    if level is CoexistenceLevel.PURE_INTERFERENCE:
        raise ValueError("strategy comparison is defined for scheduled levels only")
    if n < 1 or k < 1:
        raise ValueError("need n, k >= 1")
    alpha = math.log(k) / math.log(n) if n >= 2 else 1.0
    gamma = model.low_gain_params().gamma
    if counts is None:
        counts = default_oracle_counts(scenario, level, f, n, k, gamma)
    count_p, count_s = counts

    params = SystemParams(n=n, alpha=alpha, P=10.0, N0=1.0, model=model)
    if params.k != k:
        raise ValueError(f"k={k} is not representable as round(n**alpha) with n={n}")
    primary_up = scenario.primary_mode is Mode.UPLINK
    secondary_up = scenario.secondary_mode is Mode.UPLINK
    root = StreamKey(seed).child("strategy", scenario.tag, level.value)

    rows = []
    violations = 0
    for trial in range(trials):
        instance = generate(params, root.child(trial))

        if primary_up:
            if level is CoexistenceLevel.SYMMETRIC:
                active_p = least_interference_set(instance.g_ps, count_p)
            else:
                active_p = np.arange(n, dtype=np.intp)
        else:
            active_p = np.array([int(np.argmax(instance.g_p))], dtype=np.intp)
        if secondary_up:
            active_s = least_interference_set(instance.g_sp, count_s)
        else:
            active_s = np.array([int(np.argmax(instance.g_s))], dtype=np.intp)
        li_decision = ScheduleDecision(active_p, active_s)

        alone_p = (
            uplink_alone(instance.g_p, params.P, params.N0)
            if primary_up
            else downlink_alone(instance.g_p, params.P, params.N0)
        )
        li_rates = sim_rates(instance, li_decision, scenario)
        li_feasible = li_rates.primary >= f * alone_p

        jo_counts = (len(active_p) if primary_up else 1, len(active_s) if secondary_up else 1)
        jo_decision = joint_opt_bruteforce(instance, scenario, level, f, jo_counts)
        jo_rates = sim_rates(instance, jo_decision, scenario)

        ub = ub_rates(instance, li_decision, scenario)

        comparable = li_feasible and jo_decision.feasible
        eps = 1e-12
        ok = (jo_rates.secondary <= ub.secondary + eps) and (
            li_rates.secondary <= ub.secondary + eps
        )
        if comparable:
            ok = ok and li_rates.secondary <= jo_rates.secondary + eps
        if not ok:
            violations += 1
        rows.append(
            (
                trial,
                li_rates.secondary,
                jo_rates.secondary,
                ub.secondary,
                int(li_feasible),
                int(jo_decision.feasible),
                int(comparable),
                int(ok),
            )
        )

    ratios = [row[1] / row[2] if row[2] > 0 else 1.0 for row in rows]
    aggregates = [
        (n, float(np.mean(ratios)), float(np.median(ratios)), float(np.std(ratios)))
    ]
    return SweepResult(
        columns=(
            "trial",
            "li_secondary",
            "jo_secondary",
            "ub_secondary",
            "li_feasible",
            "jo_feasible",
            "comparable",
            "ok",
        ),
        rows=rows,
        aggregate_columns=("n", "mean_li_over_jo", "median_li_over_jo", "stddev_li_over_jo"),
        aggregates=aggregates,
        metadata={
            "experiment": "strategy-equivalence",
            "scenario": scenario.tag,
            "level": level.value,
            "model": model.spec_string(),
            "n": n,
            "k": k,
            "f": f,
            "counts": list(counts),
            "trials": trials,
            "seed": seed,
            "violations": violations,
        },
    )
