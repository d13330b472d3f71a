"""Facility location mechanisms.

The central family is the phantom mechanism with scaling: the facility goes
to the median of the ``n`` reports and ``n + 1`` phantom positions, where
the phantoms may depend on the scaling function but never on the reports.
Dictator, midpoint and the two optimal placements are included as
baselines.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import optimal as _optimal
from .errors import check_position
from .instance import LocationProfile, ProfileLike, as_profile
from .scaling import ScalingFunction


def median_of_pool(values: Sequence[float]) -> float:
    """The ``(m+1)``-th smallest of ``2m + 1`` values."""
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size % 2 == 0:
        raise ValueError(f"pool must have odd size, got {arr.size}")
    m = arr.size // 2
    return float(np.partition(arr, m)[m])


# phantom policies -------------------------------------------------------------
#
# A policy is any callable ``policy(q, n) -> n + 1 positions``.  It never sees
# the reports, which is what keeps the mechanism strategyproof whenever the
# agents' preferences are single-peaked.

@dataclass(frozen=True)
class ConstantPhantoms:
    positions: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "positions",
                           tuple(sorted(check_position(p, "phantom") for p in self.positions)))

    def __call__(self, q: ScalingFunction, n: int) -> tuple[float, ...]:
        if len(self.positions) != n + 1:
            raise ValueError(f"{len(self.positions)} phantoms given, {n + 1} needed for {n} agents")
        return self.positions


@dataclass(frozen=True)
class MedianPolicy:
    """``ceil((n+1)/2)`` phantoms at 0 and the rest at 1."""

    def __call__(self, q: ScalingFunction, n: int) -> tuple[float, ...]:
        zeros = math.ceil((n + 1) / 2)
        return (0.0,) * zeros + (1.0,) * (n + 1 - zeros)


@dataclass(frozen=True)
class AllAt:
    c: float

    def __post_init__(self):
        check_position(self.c, "constant")

    def __call__(self, q: ScalingFunction, n: int) -> tuple[float, ...]:
        return (float(self.c),) * (n + 1)


def phantoms_for(policy: Callable, q: ScalingFunction, n: int) -> np.ndarray:
    ph = np.sort(np.asarray(policy(q, n), dtype=float))
    if ph.size != n + 1:
        raise ValueError(f"policy returned {ph.size} phantoms, {n + 1} needed")
    if ph.size and (ph[0] < 0.0 or ph[-1] > 1.0):
        raise ValueError("phantom positions must lie in [0, 1]")
    return ph


# mechanisms -------------------------------------------------------------------

class Mechanism:
    """A map from ``(q, profile)`` to a facility position."""

    def __call__(self, q: ScalingFunction, x: ProfileLike) -> float:
        raise NotImplementedError

    def outcomes(self, q: ScalingFunction, x: LocationProfile, agent: int,
                 reports: np.ndarray) -> np.ndarray:
        """Facility position for each alternative report of input agent ``agent``."""
        return np.array([self(q, x.replace(agent, r)) for r in reports])

    @property
    def name(self) -> str:
        return type(self).__name__.lower()

    def to_dict(self) -> dict:
        return {"type": self.name}


@dataclass(frozen=True)
class PhantomMechanism(Mechanism):
    policy: Callable = MedianPolicy()

    def __call__(self, q, x):
        x = as_profile(x)
        ph = phantoms_for(self.policy, q, x.n)
        return median_of_pool(np.concatenate([x.positions, ph]))

    def outcomes(self, q, x, agent, reports):
        # With the other 2n values fixed and sorted as F, the median of
        # F + {r} is r clamped to [F[n-1], F[n]].
        x = as_profile(x)
        others = np.delete(x.original, agent)
        fixed = np.sort(np.concatenate([others, phantoms_for(self.policy, q, x.n)]))
        n = x.n
        return np.clip(np.asarray(reports, dtype=float), fixed[n - 1], fixed[n])

    @property
    def name(self) -> str:
        if isinstance(self.policy, MedianPolicy):
            return "median"
        if isinstance(self.policy, AllAt):
            return f"constant({self.policy.c:g})"
        if isinstance(self.policy, ConstantPhantoms):
            return "phantoms(" + ",".join(f"{p:g}" for p in self.policy.positions) + ")"
        return "phantoms"

    def to_dict(self):
        if isinstance(self.policy, MedianPolicy):
            return {"type": "median"}
        if isinstance(self.policy, AllAt):
            return {"type": "constant", "c": self.policy.c}
        if isinstance(self.policy, ConstantPhantoms):
            return {"type": "phantoms", "positions": list(self.policy.positions)}
        raise ValueError("q-dependent phantom policies have no JSON form")


@dataclass(frozen=True)
class Dictator(Mechanism):
    """Facility at the report of the agent with input label ``agent``."""

    agent: int = 0

    def __call__(self, q, x):
        return as_profile(x).position_of(self.agent)

    def outcomes(self, q, x, agent, reports):
        reports = np.asarray(reports, dtype=float)
        if agent == self.agent:
            return reports.copy()
        return np.full(reports.shape, x.position_of(self.agent))

    @property
    def name(self):
        return f"dictator({self.agent})"

    def to_dict(self):
        return {"type": "dictator", "agent": self.agent}


@dataclass(frozen=True)
class Midpoint(Mechanism):
    def __call__(self, q, x):
        return as_profile(x).midpoint


@dataclass(frozen=True)
class OptimalTC(Mechanism):
    def __call__(self, q, x):
        return _optimal.optimal_tc(q, x).position

    @property
    def name(self):
        return "opt_tc"


@dataclass(frozen=True)
class OptimalMC(Mechanism):
    def __call__(self, q, x):
        return _optimal.optimal_mc(q, x).position

    @property
    def name(self):
        return "opt_mc"


def median_mechanism() -> PhantomMechanism:
    return PhantomMechanism(MedianPolicy())


def constant_mechanism(c: float) -> PhantomMechanism:
    return PhantomMechanism(AllAt(c))


def phantom_mechanism(positions: Sequence[float]) -> PhantomMechanism:
    return PhantomMechanism(ConstantPhantoms(tuple(positions)))


def run(mech: Mechanism, q: ScalingFunction, x: ProfileLike) -> float:
    return mech(q, as_profile(x))


def from_dict(d: dict) -> Mechanism:
    """Parse a mechanism descriptor such as ``{"type": "constant", "c": 0.3}``."""
    if not isinstance(d, dict) or "type" not in d:
        raise ValueError("mechanism descriptor must be an object with a 'type'")
    kind = d["type"]
    if kind == "median":
        return median_mechanism()
    if kind == "constant":
        return constant_mechanism(float(d["c"]))
    if kind == "phantoms":
        return phantom_mechanism([float(p) for p in d["positions"]])
    if kind == "dictator":
        return Dictator(int(d.get("agent", 0)))
    if kind == "midpoint":
        return Midpoint()
    if kind == "opt_tc":
        return OptimalTC()
    if kind == "opt_mc":
        return OptimalMC()
    raise ValueError(f"unknown mechanism type {kind!r}")


def from_json(text: str) -> Mechanism:
    return from_dict(json.loads(text))
