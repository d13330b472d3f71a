"""Agent location profiles and the cost functionals."""
from __future__ import annotations

import json
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, check_position
from .scaling import ScalingFunction


class LocationProfile:
    """Agent positions in ``[0, 1]``, stored sorted.

    ``order[k]`` is the input index of the ``k``-th smallest position, so
    ``original`` recovers the reports in the order they were given.
    """

    __slots__ = ("positions", "order")

    def __init__(self, reports: Sequence[float]):
        arr = np.array(reports, dtype=float).ravel()
        if arr.size == 0:
            raise ValueError("a profile needs at least one agent")
        bad = (arr < 0.0) | (arr > 1.0) | np.isnan(arr)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise DomainError(f"agent {i} at {float(arr[i])!r} lies outside [0, 1]")
        order = np.argsort(arr, kind="stable")
        positions = arr[order]
        positions.setflags(write=False)
        order.setflags(write=False)
        self.positions = positions
        self.order = order

    @property
    def n(self) -> int:
        return int(self.positions.size)

    def __len__(self) -> int:
        return self.n

    @property
    def leftmost(self) -> float:
        return float(self.positions[0])

    @property
    def rightmost(self) -> float:
        return float(self.positions[-1])

    @property
    def midpoint(self) -> float:
        return (self.leftmost + self.rightmost) / 2

    @property
    def original(self) -> np.ndarray:
        out = np.empty_like(self.positions)
        out[self.order] = self.positions
        return out

    def position_of(self, agent: int) -> float:
        """Position of the agent with input label ``agent``."""
        if not 0 <= agent < self.n:
            raise IndexError(f"agent {agent} out of range for {self.n} agents")
        return float(self.original[agent])

    def replace(self, agent: int, report: float) -> "LocationProfile":
        """Profile in which input agent ``agent`` reports ``report`` instead."""
        reports = self.original
        reports[agent] = check_position(report, "report")
        return LocationProfile(reports)

    def __repr__(self) -> str:
        return f"LocationProfile({self.original.tolist()!r})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, LocationProfile)
                and np.array_equal(self.original, other.original))

    def to_json(self) -> str:
        return json.dumps(self.original.tolist())

    @classmethod
    def from_json(cls, text: str) -> "LocationProfile":
        data = json.loads(text)
        if not isinstance(data, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in data):
            raise ValueError("a profile must be a JSON array of numbers")
        return cls(data)

    @classmethod
    def load(cls, path) -> "LocationProfile":
        with open(path) as fh:
            return cls.from_json(fh.read())


ProfileLike = Union[LocationProfile, Sequence[float]]


def as_profile(x: ProfileLike) -> LocationProfile:
    return x if isinstance(x, LocationProfile) else LocationProfile(x)


def agent_cost(q: ScalingFunction, y: float, xi: float) -> float:
    """``q(y) * |y - xi|``."""
    xi = check_position(xi, "agent position")
    out = q(y) * np.abs(np.asarray(y, dtype=float) - xi)
    return float(out) if np.ndim(out) == 0 else out


def total_cost(q: ScalingFunction, y, x: ProfileLike):
    """Sum of agent costs; ``y`` may be a scalar or an array of positions."""
    pos = as_profile(x).positions
    y_arr = np.asarray(y, dtype=float)
    dist = np.abs(y_arr[..., None] - pos).sum(axis=-1)
    out = q(y_arr) * dist
    return float(out) if np.ndim(out) == 0 else out


def max_cost(q: ScalingFunction, y, x: ProfileLike):
    """Largest agent cost; only the two extreme agents can attain it."""
    p = as_profile(x)
    y_arr = np.asarray(y, dtype=float)
    dist = np.maximum(np.abs(y_arr - p.leftmost), np.abs(y_arr - p.rightmost))
    out = q(y_arr) * dist
    return float(out) if np.ndim(out) == 0 else out
