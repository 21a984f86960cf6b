"""Command-line front end.

Subcommands:

* ``theory``      - closed-form throughput factors, optimizing exponents,
                    and time-division scalings.
* ``crossover``   - exact f-ranges where sharing beats time division.
* ``sweep``       - tracking sweep CSV (actual vs intermediate rate).
* ``concentrate`` - order-statistic concentration sweep CSV.
* ``scenario``    - single-shot small system, optionally with the
                    exhaustive scheduling oracle.

Rates print in bits per channel use.  Powers are accepted in dB
(``--p-db``/``--n-db``) with linear overrides (``--p-linear`` /
``--n-linear``).  Stochastic commands require an explicit ``--seed``.
Exit codes: 0 success, 2 validation error, 3 size/budget refusal,
4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .asymptotics import AsymptoticConfig, td_exponents, throughput_factor
from .errors import RefusalError
from .experiments import (
    DEFAULT_BUDGET,
    SweepSpec,
    db_to_linear,
    default_oracle_counts,
    run_concentration_sweep,
    run_strategy_equivalence,
    run_tracking_sweep,
)
from .fading import parse_model_spec
from .network import allowed_levels, CoexistenceLevel, Mode, Scenario, SystemParams, generate
from .rates import downlink_alone, sim_rates, uplink_alone
from .rng import StreamKey
from .scheduling import least_interference_set, ScheduleDecision
from .experiments import run_factor_curve

_LEVELS = {
    "pure": CoexistenceLevel.PURE_INTERFERENCE,
    "asymmetric": CoexistenceLevel.ASYMMETRIC,
    "symmetric": CoexistenceLevel.SYMMETRIC,
}

# level used when --level is omitted: the single scheduled level of the
# scenario, or pure interference when nothing schedules
_DEFAULT_LEVEL = {"uu": None, "du": "asymmetric", "ud": "symmetric", "dd": "pure"}


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return f"{value} ({float(value):g})"
    if isinstance(value, float):
        return format(value, "g")
    return str(value)


def _resolve_level(args) -> CoexistenceLevel:
    if getattr(args, "level", None):
        return _LEVELS[args.level]
    default = _DEFAULT_LEVEL[args.scenario]
    if default is None:
        raise ValueError(
            f"scenario {args.scenario!r} has several co-existence levels; pass --level"
        )
    return _LEVELS[default]


def _powers(args) -> tuple[float, float]:
    P = args.p_linear if args.p_linear is not None else db_to_linear(args.p_db)
    N0 = args.n_linear if args.n_linear is not None else db_to_linear(args.n_db)
    return P, N0


def _add_power_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p-db", type=float, default=10.0, help="transmit power P in dB (default 10)")
    parser.add_argument("--n-db", type=float, default=0.0, help="noise power N in dB (default 0)")
    parser.add_argument("--p-linear", type=float, default=None, help="transmit power P in linear units (overrides --p-db)")
    parser.add_argument("--n-linear", type=float, default=None, help="noise power N in linear units (overrides --n-db)")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="specshare",
        description="Spectrum co-existence analysis of primary and secondary networks.",
    )
    parser.add_argument("--version", action="version", version=f"specshare {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers: dict[str, argparse.ArgumentParser] = {}

    def new_command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, default=None, help="flat key=value config file; flags override it")
        subparsers[name] = p
        return p

    p = new_command("theory", "closed-form factors, exponents, and TD scalings")
    p.add_argument("--scenario", required=True, choices=("uu", "ud", "du", "dd"), help="primary/secondary modes (u=uplink, d=downlink)")
    p.add_argument("--level", choices=tuple(_LEVELS), default=None, help="co-existence level (defaults to the scenario's only scheduled level)")
    p.add_argument("--f", type=_fraction, required=True, help="primary protection factor in (0, 1] (dimensionless)")
    p.add_argument("--alpha", type=_fraction, default=Fraction(1), help="secondary size exponent, k = n^alpha (default 1)")
    p.add_argument("--gamma", type=_fraction, default=Fraction(1), help="low-gain CDF order (1 for Rayleigh/Rician, m for Nakagami-m)")

    p = new_command("crossover", "f-ranges where sharing beats time division")
    p.add_argument("--scenario", required=True, choices=("uu", "ud", "du", "dd"))
    p.add_argument("--level", choices=tuple(_LEVELS), default=None, help="restrict to one level (default: all scheduled levels)")
    p.add_argument("--alpha", type=_fraction, default=Fraction(1), help="secondary size exponent (default 1)")
    p.add_argument("--gamma", type=_fraction, default=Fraction(1), help="low-gain CDF order (default 1)")

    p = new_command("sweep", "tracking sweep: actual vs intermediate secondary rate")
    p.add_argument("--scenario", required=True, choices=("uu", "ud", "du", "dd"))
    p.add_argument("--level", choices=tuple(_LEVELS), default=None)
    p.add_argument("--alpha", type=float, default=3.0, help="secondary size exponent (default 3)")
    p.add_argument("--alpha-bar", type=float, default=1.5, help="secondary activation exponent (default 1.5)")
    p.add_argument("--beta", type=float, default=0.5, help="primary activation exponent (default 0.5)")
    _add_power_flags(p)
    p.add_argument("--n", type=_int_list, required=True, help="comma-separated primary user counts, strictly increasing")
    p.add_argument("--trials", type=int, default=200, help="Monte Carlo trials per n (default 200)")
    p.add_argument("--seed", type=int, required=True, help="master seed (required; runs are deterministic)")
    p.add_argument("--out", type=Path, default=Path("sweep.csv"), help="output CSV path (default sweep.csv)")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for trials (default 1)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max sampled gains per run (default 1e9)")

    p = new_command("concentrate", "order-statistic concentration sweep")
    p.add_argument("--model", required=True, help="fading model: rayleigh, rician:K=<v>, nakagami:m=<v>")
    p.add_argument("--stat", required=True, choices=("max", "lower_sum"), help="statistic to track")
    p.add_argument("--f-exponent", type=float, default=0.5, help="lowest-count exponent: k = ceil(n^e) (default 0.5)")
    p.add_argument("--n", type=_int_list, required=True, help="comma-separated sample sizes")
    p.add_argument("--trials", type=int, default=500, help="trials per n (default 500)")
    p.add_argument("--seed", type=int, required=True, help="master seed (required)")
    p.add_argument("--out", type=Path, default=Path("concentrate.csv"), help="output CSV path")
    p.add_argument("--jobs", type=int, default=1, help="worker threads (default 1)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max sampled gains per run (default 1e9)")

    p = new_command("factors", "factor-vs-f curve with crossover marks")
    p.add_argument("--scenario", required=True, choices=("uu", "ud", "du", "dd"))
    p.add_argument("--level", choices=tuple(_LEVELS), default=None)
    p.add_argument("--alpha", type=float, default=1.0, help="secondary size exponent")
    p.add_argument("--gamma", type=float, default=1.0, help="low-gain CDF order")
    p.add_argument("--f-step", type=float, default=0.01, help="grid step for f in (0, 0.5) (default 0.01)")
    p.add_argument("--out", type=Path, default=None, help="optional CSV output path")

    p = new_command("scenario", "single small system: rates and optional oracle check")
    p.add_argument("--scenario", required=True, choices=("uu", "ud", "du", "dd"))
    p.add_argument("--level", choices=tuple(_LEVELS), default=None)
    p.add_argument("--n", type=int, required=True, help="primary user count")
    p.add_argument("--alpha", type=float, default=1.0, help="secondary size exponent, k = round(n^alpha)")
    p.add_argument("--f", type=float, default=0.5, help="primary protection factor (dimensionless)")
    p.add_argument("--model", default="rayleigh", help="fading model spec (default rayleigh)")
    _add_power_flags(p)
    p.add_argument("--counts", type=_int_list, default=None, help="explicit primary,secondary active counts")
    p.add_argument("--trials", type=int, default=1, help="trials for --oracle comparison (default 1)")
    p.add_argument("--seed", type=int, required=True, help="master seed (required)")
    p.add_argument("--oracle", action="store_true", help="run the exhaustive oracle comparison (n, k <= 14)")

    return parser, subparsers


def _apply_config(parser, subparsers, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    config_path = getattr(args, "config", None)
    if config_path is None:
        return args
    command = args.command
    command_parser = subparsers[command]
    known = {
        opt.lstrip("-"): action.dest
        for action in command_parser._actions
        for opt in action.option_strings
        if opt.startswith("--") and opt not in ("--help", "--config")
    }
    overrides = {}
    text = Path(config_path).read_text()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if sep != "=" or not key:
            raise ValueError(f"{config_path}:{lineno}: expected key=value, got {raw!r}")
        if key not in known:
            raise ValueError(f"{config_path}:{lineno}: unknown key {key!r} for command {command!r}")
        overrides[key] = value
    # config supplies defaults; explicit flags win on the re-parse
    synthetic = []
    for key, value in overrides.items():
        if value.lower() in ("true", "yes", "on") and _is_store_true(command_parser, key):
            synthetic.append(f"--{key}")
        else:
            synthetic.extend([f"--{key}", value])
    head, tail = [command], argv[argv.index(command) + 1 :]
    return parser.parse_args(head + synthetic + tail)


def _is_store_true(parser: argparse.ArgumentParser, key: str) -> bool:
    for action in parser._actions:
        if f"--{key}" in action.option_strings:
            return isinstance(action, argparse._StoreTrueAction)
    return False


def cmd_theory(args) -> int:
    scenario = Scenario.parse(args.scenario)
    level = _resolve_level(args)
    config = AsymptoticConfig(scenario, level, args.f, args.alpha, args.gamma)
    result = throughput_factor(config)
    print(
        f"scenario={scenario.tag} level={level.value} "
        f"f={args.f} alpha={args.alpha} gamma={args.gamma}"
    )
    print(f"secondary_throughput_factor={_fmt(result.secondary_factor)}")
    print(f"feasible={'yes' if result.feasible else 'no'}")
    print(f"td_secondary_factor={_fmt(1 - args.f)}")
    if level is not CoexistenceLevel.PURE_INTERFERENCE:
        from .scheduling import optimal_exponents

        exps = optimal_exponents(scenario, level, args.f, args.alpha, args.gamma)
        if scenario.primary_mode is Mode.UPLINK:
            print(f"optimal_beta={_fmt(exps.beta)}")
        if scenario.secondary_mode is Mode.UPLINK:
            print(f"optimal_alpha_bar={_fmt(exps.alpha_bar)}")
    primary_td, secondary_td = td_exponents(scenario, args.f, args.alpha)
    print(f"td_primary_rate={primary_td}")
    print(f"td_secondary_rate={secondary_td}")
    return 0


def cmd_crossover(args) -> int:
    from .asymptotics import crossover_ranges

    scenario = Scenario.parse(args.scenario)
    if args.level:
        levels = [_LEVELS[args.level]]
    else:
        levels = [
            lv for lv in allowed_levels(scenario) if lv is not CoexistenceLevel.PURE_INTERFERENCE
        ]
        if not levels:  # dd: pure interference is the only (and winning) level
            levels = [CoexistenceLevel.PURE_INTERFERENCE]
    parts = []
    for level in levels:
        try:
            intervals = crossover_ranges(scenario, level, args.alpha, args.gamma)
        except RefusalError as exc:
            if args.level:
                raise
            parts.append(f"{level.value}: no closed form ({exc})")
            continue
        if intervals:
            parts.append(f"{level.value}: " + " U ".join(str(iv) for iv in intervals))
        else:
            parts.append(f"{level.value}: empty")
    print("; ".join(parts))
    return 0


def cmd_sweep(args) -> int:
    scenario = Scenario.parse(args.scenario)
    level = _resolve_level(args)
    P, N0 = _powers(args)
    spec = SweepSpec(
        scenario=scenario,
        level=level,
        n_grid=args.n,
        trials=args.trials,
        seed=args.seed,
        alpha=args.alpha,
        alpha_bar=args.alpha_bar,
        beta=args.beta,
        P_dB=10 * np.log10(P),
        N_dB=10 * np.log10(N0),
    )
    result = run_tracking_sweep(spec, budget=args.budget, jobs=args.jobs)
    csv_path, agg_path, meta_path = result.write_csv(args.out)
    print(f"wrote {csv_path} ({len(result.rows)} rows), {agg_path}, {meta_path}")
    return 0


def cmd_concentrate(args) -> int:
    model = parse_model_spec(args.model)
    result = run_concentration_sweep(
        model,
        args.stat,
        args.n,
        args.trials,
        args.seed,
        f_exponent=args.f_exponent,
        budget=args.budget,
        jobs=args.jobs,
    )
    csv_path, agg_path, meta_path = result.write_csv(args.out)
    print(f"wrote {csv_path} ({len(result.rows)} rows), {agg_path}, {meta_path}")
    return 0


def cmd_factors(args) -> int:
    scenario = Scenario.parse(args.scenario)
    level = _resolve_level(args)
    result = run_factor_curve(scenario, level, args.alpha, args.gamma, args.f_step)
    if args.out is not None:
        lines = [",".join(result.columns)]
        lines += [",".join(format(v, ".12g") for v in row) for row in result.rows]
        Path(args.out).write_text("\n".join(lines) + "\n")
        print(f"wrote {args.out} ({len(result.rows)} rows)")
    else:
        print(",".join(result.columns))
        for row in result.rows:
            print(",".join(format(v, ".6g") for v in row))
    if result.crossovers is None:
        print(f"crossover: {result.note}")
    elif result.crossovers:
        print("crossover: " + " U ".join(str(iv) for iv in result.crossovers))
    else:
        print("crossover: empty")
    return 0


def cmd_scenario(args) -> int:
    scenario = Scenario.parse(args.scenario)
    level = _resolve_level(args)
    model = parse_model_spec(args.model)
    P, N0 = _powers(args)
    params = SystemParams(n=args.n, alpha=args.alpha, P=P, N0=N0, model=model)
    k = params.k
    gamma = model.low_gain_params().gamma
    counts = tuple(args.counts) if args.counts else default_oracle_counts(
        scenario, level, args.f, args.n, k, gamma
    )
    if len(counts) != 2:
        raise ValueError(f"--counts needs exactly primary,secondary, got {counts}")

    if args.oracle:
        result = run_strategy_equivalence(
            args.n, k, model, scenario, level, args.f, args.trials, args.seed, counts=counts
        )
        print(",".join(result.columns))
        for row in result.rows:
            print(",".join(_fmt(v) for v in row))
        print(f"violations={result.metadata['violations']}")
        return 0

    instance = generate(params, StreamKey(args.seed).child("scenario", scenario.tag))
    count_p, count_s = counts
    if scenario.primary_mode is Mode.UPLINK:
        active_p = (
            least_interference_set(instance.g_ps, count_p)
            if level is CoexistenceLevel.SYMMETRIC
            else np.arange(params.n, dtype=np.intp)
        )
        alone_p = uplink_alone(instance.g_p, P, N0)
    else:
        active_p = np.array([int(np.argmax(instance.g_p))], dtype=np.intp)
        alone_p = downlink_alone(instance.g_p, P, N0)
    if scenario.secondary_mode is Mode.UPLINK:
        active_s = (
            least_interference_set(instance.g_sp, count_s)
            if level is not CoexistenceLevel.PURE_INTERFERENCE
            else np.arange(k, dtype=np.intp)
        )
        alone_s = uplink_alone(instance.g_s, P, N0)
    else:
        active_s = np.array([int(np.argmax(instance.g_s))], dtype=np.intp)
        alone_s = downlink_alone(instance.g_s, P, N0)
    decision = ScheduleDecision(active_p, active_s)
    pair = sim_rates(instance, decision, scenario)
    print(f"scenario={scenario.tag} level={level.value} n={params.n} k={k} model={model.spec_string()}")
    print(f"active_primary={len(active_p)} active_secondary={len(active_s)}")
    print(f"primary_rate={pair.primary:.6g} bits/use (alone {alone_p:.6g})")
    print(f"secondary_rate={pair.secondary:.6g} bits/use (alone {alone_s:.6g})")
    print(f"primary_protection={pair.primary / alone_p:.6g} target_f={args.f:g}")
    return 0


_COMMANDS = {
    "theory": cmd_theory,
    "crossover": cmd_crossover,
    "sweep": cmd_sweep,
    "concentrate": cmd_concentrate,
    "factors": cmd_factors,
    "scenario": cmd_scenario,
}


def main(argv: list[str] | None = None) -> int:
    parser, subparsers = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config(parser, subparsers, argv)
        return _COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RefusalError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
