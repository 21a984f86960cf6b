"""System parameters and random realizations of the two-network system.

A realization holds every gain the rate expressions touch: n primary and
k secondary channel gains, the interference gains from each user to the
opposite network's receiver, and the two base-station interference
scalars.  All gains are i.i.d. draws from one fading model.  Each vector
comes from its own derived sub-stream, so regenerating with a different
secondary-size exponent leaves the primary-side draws untouched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .fading import FadingModel, parse_model_spec
from .rng import StreamKey


class Mode(Enum):
    UPLINK = "up"
    DOWNLINK = "down"


@dataclass(frozen=True)
class Scenario:
    """Which direction each network transmits in (primary first)."""

    primary_mode: Mode
    secondary_mode: Mode

    @property
    def tag(self) -> str:
        return ("u" if self.primary_mode is Mode.UPLINK else "d") + (
            "u" if self.secondary_mode is Mode.UPLINK else "d"
        )

    @staticmethod
    def parse(tag: str) -> "Scenario":
        tag = tag.strip().lower()
        modes = {"u": Mode.UPLINK, "d": Mode.DOWNLINK}
        if len(tag) != 2 or tag[0] not in modes or tag[1] not in modes:
            raise ValueError(f"scenario must be one of uu/ud/du/dd, got {tag!r}")
        return Scenario(modes[tag[0]], modes[tag[1]])


UU = Scenario(Mode.UPLINK, Mode.UPLINK)
UD = Scenario(Mode.UPLINK, Mode.DOWNLINK)
DU = Scenario(Mode.DOWNLINK, Mode.UPLINK)
DD = Scenario(Mode.DOWNLINK, Mode.DOWNLINK)


class CoexistenceLevel(Enum):
    PURE_INTERFERENCE = "pure"
    ASYMMETRIC = "asymmetric"
    SYMMETRIC = "symmetric"


class Strategy(Enum):
    LEAST_INTERFERENCE = "least-interference"
    JOINT_OPTIMIZATION = "joint-optimization"


def allowed_levels(scenario: Scenario) -> tuple[CoexistenceLevel, ...]:
    """Co-existence levels defined for a scenario.

    Scheduling levels exist only for uplink networks: the asymmetric
    level needs an uplink secondary, the symmetric level an uplink
    primary on top of that.  Downlink networks always transmit to their
    strongest user, so a double-downlink system has only the
    pure-interference level.
    """
    levels = [CoexistenceLevel.PURE_INTERFERENCE]
    if scenario.secondary_mode is Mode.UPLINK:
        levels.append(CoexistenceLevel.ASYMMETRIC)
    if scenario.primary_mode is Mode.UPLINK:
        levels.append(CoexistenceLevel.SYMMETRIC)
    return tuple(levels)


def check_level(scenario: Scenario, level: CoexistenceLevel) -> None:
    if level not in allowed_levels(scenario):
        raise ValueError(
            f"co-existence level {level.value!r} is not defined for scenario "
            f"{scenario.tag!r} (allowed: {[lv.value for lv in allowed_levels(scenario)]})"
        )


def round_count(x: float) -> int:
    """Nearest-integer count with .5 rounding up (not banker's rounding)."""
    return int(math.floor(x + 0.5))


def power_count(n: int, exponent: float, pool: int) -> int:
    """Active-user count round(n**exponent) clamped to the pool.

    An exponent of exactly 0 is the deactivate-everything sentinel used
    by the closed forms when no positive scaling is achievable.
    """
    if exponent == 0.0:
        return 0
    return max(0, min(pool, round_count(n**exponent)))


@dataclass(frozen=True)
class SystemParams:
    """Sizes, powers, and fading model of one co-existence experiment."""

    n: int
    alpha: float
    P: float
    N0: float
    model: FadingModel

    def __post_init__(self):
        if int(self.n) < 1:
            raise ValueError(f"need n >= 1 primary users, got {self.n}")
        if not self.alpha > 0:
            raise ValueError(f"need alpha > 0, got {self.alpha}")
        if not (self.P > 0 and self.N0 > 0):
            raise ValueError(f"powers must be positive (linear units), got P={self.P}, N0={self.N0}")

    @property
    def k(self) -> int:
        """Secondary user count round(n**alpha), at least 1."""
        return max(1, round_count(self.n**self.alpha))


@dataclass(frozen=True)
class NetworkInstance:
    """One realization of all channel and interference power gains."""

    params: SystemParams
    g_p: np.ndarray  # n primary channel gains
    g_s: np.ndarray  # k secondary channel gains
    g_sp: np.ndarray  # k interference gains, secondary user -> primary receiver
    g_ps: np.ndarray  # n interference gains, primary user -> secondary receiver
    g0_sp: float  # secondary base station -> primary receiver
    g0_ps: float  # primary base station -> secondary receiver

    def __post_init__(self):
        n, k = self.params.n, self.params.k
        if len(self.g_p) != n or len(self.g_ps) != n:
            raise ValueError("primary-side gain vectors must have length n")
        if len(self.g_s) != k or len(self.g_sp) != k:
            raise ValueError("secondary-side gain vectors must have length k")
        for arr in (self.g_p, self.g_s, self.g_sp, self.g_ps):
            arr.setflags(write=False)


_VECTOR_FIELDS = ("g_p", "g_s", "g_sp", "g_ps")
_SCALAR_FIELDS = ("g0_sp", "g0_ps")


def generate(params: SystemParams, stream: StreamKey) -> NetworkInstance:
    """Draw a full realization; deterministic for a given stream identity."""
    n, k = params.n, params.k
    sizes = {"g_p": n, "g_s": k, "g_sp": k, "g_ps": n}
    vectors = {
        name: params.model.sample(stream.child(name).generator(), size)
        for name, size in sizes.items()
    }
    scalars = {
        name: float(params.model.sample(stream.child(name).generator(), 1)[0])
        for name in _SCALAR_FIELDS
    }
    return NetworkInstance(params=params, **vectors, **scalars)


_MAGIC = "specshare-instance v1"


def save_instance(instance: NetworkInstance, path: str | Path) -> None:
    """Write a flat columnar dump: text header, then little-endian float64 columns."""
    p = instance.params
    header = (
        f"{_MAGIC}\n"
        f"params n={p.n} alpha={p.alpha!r} P={p.P!r} N0={p.N0!r} model={p.model.spec_string()}\n"
        + ",".join(
            f"{name}:{len(getattr(instance, name))}" for name in _VECTOR_FIELDS
        )
        + ","
        + ",".join(f"{name}:1" for name in _SCALAR_FIELDS)
        + "\n"
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        for name in _VECTOR_FIELDS:
            fh.write(np.asarray(getattr(instance, name), dtype="<f8").tobytes())
        for name in _SCALAR_FIELDS:
            fh.write(np.array([getattr(instance, name)], dtype="<f8").tobytes())


def load_instance(path: str | Path) -> NetworkInstance:
    """Read a dump written by :func:`save_instance`."""
    with open(path, "rb") as fh:
        magic = fh.readline().decode("ascii").rstrip("\n")
        if magic != _MAGIC:
            raise ValueError(f"not a specshare instance file: bad magic {magic!r}")
        params_line = fh.readline().decode("ascii").rstrip("\n")
        layout_line = fh.readline().decode("ascii").rstrip("\n")
        payload = fh.read()

    if not params_line.startswith("params "):
        raise ValueError("malformed instance file: missing params line")
    fields = dict(item.split("=", 1) for item in params_line[len("params ") :].split())
    params = SystemParams(
        n=int(fields["n"]),
        alpha=float(fields["alpha"]),
        P=float(fields["P"]),
        N0=float(fields["N0"]),
        model=parse_model_spec(fields["model"]),
    )

    columns: dict[str, np.ndarray] = {}
    offset = 0
    data = np.frombuffer(payload, dtype="<f8")
    for item in layout_line.split(","):
        name, _, length_text = item.partition(":")
        length = int(length_text)
        columns[name] = data[offset : offset + length].copy()
        offset += length
    if offset != len(data):
        raise ValueError("malformed instance file: payload length mismatch")

    return NetworkInstance(
        params=params,
        g_p=columns["g_p"],
        g_s=columns["g_s"],
        g_sp=columns["g_sp"],
        g_ps=columns["g_ps"],
        g0_sp=float(columns["g0_sp"][0]),
        g0_ps=float(columns["g0_ps"][0]),
    )
