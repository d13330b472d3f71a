"""Scaling functions on the unit interval.

A scaling function ``q`` maps a facility position ``y`` in ``[0, 1]`` to a
positive factor that multiplies every agent's distance.  Two families are
supported: continuous piecewise linear functions and the exponentials
``c * exp(+/- y)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DiscontinuityError, NonPositiveError, ScalingError, check_position

CONTINUITY_TOL = 1e-9
SLACK_TOL = 1e-12


@dataclass(frozen=True)
class SinglePeakedReport:
    satisfied: bool
    worst_slack: float
    witness: float | None = None

    def to_dict(self) -> dict:
        return {"satisfied": self.satisfied, "worst_slack": self.worst_slack,
                "witness": self.witness}


class ScalingFunction:
    """Common interface of both scaling families."""

    def __call__(self, y):
        raise NotImplementedError

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Points where ``q`` may fail to be differentiable, endpoints included."""
        raise NotImplementedError

    def minimum(self) -> float:
        raise NotImplementedError

    def maximum(self) -> float:
        raise NotImplementedError

    def range_ratio(self) -> float:
        return self.maximum() / self.minimum()

    def local_minima(self) -> list[float]:
        raise NotImplementedError

    def segment_minima(self) -> list[float]:
        raise NotImplementedError

    def scaled(self, c: float) -> "ScalingFunction":
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _evaluate_checked(y):
    arr = np.asarray(y, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr)):
        bad = arr[(arr < 0.0) | (arr > 1.0) | np.isnan(arr)].ravel()[0]
        check_position(bad)
    return arr


@dataclass(frozen=True)
class PiecewiseLinear(ScalingFunction):
    """Continuous piecewise linear ``q`` given by its knots.

    ``knots`` runs strictly increasing from 0 to 1 and ``values[j]`` is the
    value of ``q`` at ``knots[j]``.  Segment ``j`` covers
    ``[knots[j], knots[j+1]]`` with slope ``slopes[j]``.
    """

    knots: tuple[float, ...]
    values: tuple[float, ...]
    slopes: tuple[float, ...]

    def __post_init__(self):
        k = len(self.knots) - 1
        if k < 1 or len(self.values) != k + 1 or len(self.slopes) != k:
            raise ScalingError("need at least one segment with matching knots/values/slopes")
        if self.knots[0] != 0.0 or self.knots[-1] != 1.0:
            raise ScalingError("segments must tile [0, 1] exactly")
        if any(b <= a for a, b in zip(self.knots, self.knots[1:])):
            raise ScalingError("every segment needs positive width")
        if not all(math.isfinite(v) for v in self.values + self.slopes):
            raise ScalingError("non-finite value or slope")
        if min(self.values) <= 0.0:
            j = int(np.argmin(self.values))
            raise NonPositiveError(
                f"q({self.knots[j]}) = {self.values[j]} is not strictly positive")

    # construction -------------------------------------------------------

    @classmethod
    def from_points(cls, breakpoints: Sequence[float], values: Sequence[float]) -> "PiecewiseLinear":
        knots = tuple(float(s) for s in breakpoints)
        vals = tuple(float(v) for v in values)
        if len(knots) != len(vals):
            raise ScalingError("breakpoints and values differ in length")
        if len(knots) >= 2 and any(b <= a for a, b in zip(knots, knots[1:])):
            raise ScalingError("breakpoints must be strictly increasing")
        slopes = tuple((v1 - v0) / (s1 - s0)
                       for s0, s1, v0, v1 in zip(knots, knots[1:], vals, vals[1:]))
        return cls(knots, vals, slopes)

    @classmethod
    def from_segments(cls, segments: Iterable[Sequence[float]]) -> "PiecewiseLinear":
        """Build from ``(left, right, slope, intercept)`` rows, ``q_j(y) = a_j*y + b_j``.

        Raises :class:`DiscontinuityError` if neighbouring pieces disagree at
        a shared breakpoint by more than ``CONTINUITY_TOL``.
        """
        segs = [tuple(float(v) for v in s) for s in segments]
        if not segs:
            raise ScalingError("no segments given")
        for (l0, r0, a0, b0), (l1, r1, a1, b1) in zip(segs, segs[1:]):
            if r0 != l1:
                raise ScalingError(f"segments do not meet: {r0} vs {l1}")
            left, right = a0 * r0 + b0, a1 * l1 + b1
            if abs(left - right) > CONTINUITY_TOL:
                raise DiscontinuityError(
                    f"jump of {right - left:.3g} at y={r0} ({left} vs {right})")
        knots = tuple(s[0] for s in segs) + (segs[-1][1],)
        values = tuple(a * l + b for l, _, a, b in segs) + (segs[-1][2] * segs[-1][1] + segs[-1][3],)
        slopes = tuple(s[2] for s in segs)
        return cls(knots, values, slopes)

    @classmethod
    def linear(cls, slope: float, intercept: float) -> "PiecewiseLinear":
        return cls.from_segments([(0.0, 1.0, slope, intercept)])

    @classmethod
    def constant(cls, c: float) -> "PiecewiseLinear":
        return cls.from_points([0.0, 1.0], [c, c])

    # evaluation ---------------------------------------------------------

    @property
    def n_segments(self) -> int:
        return len(self.slopes)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return self.knots

    @property
    def intercepts(self) -> tuple[float, ...]:
        return tuple(v - a * s for s, v, a in zip(self.knots, self.values, self.slopes))

    def segments(self) -> list[tuple[float, float, float, float]]:
        return [(self.knots[j], self.knots[j + 1], self.slopes[j], b)
                for j, b in enumerate(self.intercepts)]

    def _index(self, arr):
        idx = np.searchsorted(self.knots, arr, side="right") - 1
        return np.clip(idx, 0, self.n_segments - 1)

    def __call__(self, y):
        arr = _evaluate_checked(y)
        knots = np.asarray(self.knots)
        values = np.asarray(self.values)
        slopes = np.asarray(self.slopes)
        idx = self._index(arr)
        out = values[idx] + slopes[idx] * (arr - knots[idx])
        # exact value at the right end of the domain
        out = np.where(arr == 1.0, values[-1], out)
        return float(out) if out.ndim == 0 else out

    def slope_at(self, y: float) -> float:
        """Slope of the segment used to evaluate ``q(y)``."""
        return self.slopes[int(self._index(check_position(y)))]

    def minimum(self) -> float:
        return min(self.values)

    def maximum(self) -> float:
        return max(self.values)

    def local_minima(self) -> list[float]:
        k = self.n_segments
        qualifies = []
        for i in range(k + 1):
            left_ok = i == 0 or self.slopes[i - 1] <= 0.0
            right_ok = i == k or self.slopes[i] >= 0.0
            qualifies.append(left_ok and right_ok)
        out = []
        for i in range(k + 1):
            if not qualifies[i]:
                continue
            # keep only the leftmost knot of a flat run
            if i > 0 and self.slopes[i - 1] == 0.0 and qualifies[i - 1]:
                continue
            out.append(self.knots[i])
        return out

    def segment_minima(self) -> list[float]:
        """The cheaper endpoint of every segment (both endpoints of flat ones)."""
        pts = set()
        for j, a in enumerate(self.slopes):
            if a >= 0.0:
                pts.add(self.knots[j])
            if a <= 0.0:
                pts.add(self.knots[j + 1])
        return sorted(pts)

    def scaled(self, c: float) -> "PiecewiseLinear":
        return PiecewiseLinear(self.knots, tuple(c * v for v in self.values),
                               tuple(c * a for a in self.slopes))

    def shifted(self, c: float) -> "PiecewiseLinear":
        return PiecewiseLinear(self.knots, tuple(v + c for v in self.values), self.slopes)

    def to_dict(self) -> dict:
        return {"type": "piecewise_linear", "breakpoints": list(self.knots),
                "values": list(self.values)}


@dataclass(frozen=True)
class Exponential(ScalingFunction):
    """``q(y) = scale * exp(sign * y)``."""

    sign: int = 1
    scale: float = 1.0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ScalingError(f"sign must be +1 or -1, got {self.sign!r}")
        if not self.scale > 0.0:
            raise NonPositiveError(f"scale must be positive, got {self.scale!r}")

    def __call__(self, y):
        arr = _evaluate_checked(y)
        out = self.scale * np.exp(self.sign * arr)
        return float(out) if out.ndim == 0 else out

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (0.0, 1.0)

    def minimum(self) -> float:
        return self(self._argmin())

    def maximum(self) -> float:
        return self(1.0 - self._argmin())

    def range_ratio(self) -> float:
        return math.e

    def _argmin(self) -> float:
        return 0.0 if self.sign > 0 else 1.0

    def local_minima(self) -> list[float]:
        return [self._argmin()]

    def segment_minima(self) -> list[float]:
        return [self._argmin()]

    def scaled(self, c: float) -> "Exponential":
        return Exponential(self.sign, self.scale * c)

    def to_dict(self) -> dict:
        return {"type": "exponential", "sign": self.sign, "scale": self.scale}


# module-level API ------------------------------------------------------------

def evaluate(q: ScalingFunction, y):
    return q(y)


def range_ratio(q: ScalingFunction) -> float:
    """``max q / min q`` over ``[0, 1]``."""
    return q.range_ratio()


def local_minima(q: ScalingFunction) -> list[float]:
    """Knots where ``q`` stops decreasing and starts increasing.

    A flat run contributes only its leftmost knot; a constant function
    therefore has the single local minimum ``0``.
    """
    return q.local_minima()


def check_single_peaked_condition(q: ScalingFunction) -> SinglePeakedReport:
    """Test ``q(y) - |q'(y)| >= 0`` away from the breakpoints.

    On a piece with slope ``a`` the smallest slack is at the cheaper
    endpoint of that piece, so the check is exact and needs no sampling.
    """
    if isinstance(q, Exponential):
        return SinglePeakedReport(True, 0.0, None)
    worst, witness = math.inf, None
    for j, a in enumerate(q.slopes):
        lo_at = q.knots[j] if q.values[j] <= q.values[j + 1] else q.knots[j + 1]
        slack = min(q.values[j], q.values[j + 1]) - abs(a)
        if slack < worst:
            worst, witness = slack, lo_at
    ok = worst >= -SLACK_TOL
    return SinglePeakedReport(ok, float(worst), None if ok else float(witness))


def check_single_peaked_exact(q: ScalingFunction) -> SinglePeakedReport:
    """Necessary and sufficient single-peakedness test for agents in ``[0, 1]``.

    An agent at ``x`` has ``u'(y) = +/-(q(y) + q'(y)(y - x))``; the worst agent
    sits at 1 on increasing pieces and at 0 on decreasing ones, which gives
    ``q(y) >= q'(y)(1 - y)`` and ``q(y) >= -q'(y) y`` respectively.  This is
    weaker than :func:`check_single_peaked_condition`.
    """
    if isinstance(q, Exponential):
        # slack c*e^y*y (sign +1) or c*e^-y*(1-y) (sign -1), zero at one end
        return SinglePeakedReport(True, 0.0, None)
    worst, witness = math.inf, None
    for j, a in enumerate(q.slopes):
        if a > 0.0:
            y = q.knots[j]
            slack = q.values[j] - a * (1.0 - y)
        elif a < 0.0:
            y = q.knots[j + 1]
            slack = q.values[j + 1] + a * y
        else:
            y, slack = q.knots[j], min(q.values[j], q.values[j + 1])
        if slack < worst:
            worst, witness = slack, y
    ok = worst >= -SLACK_TOL
    return SinglePeakedReport(ok, float(worst), None if ok else float(witness))


def make_w_adversarial(high: float, low: float) -> PiecewiseLinear:
    """W-shaped ``q``: ``high`` at 0, 0.5, 1 and ``low`` at 0.25, 0.75."""
    if not high > low > 0.0:
        raise ValueError(f"need high > low > 0, got high={high}, low={low}")
    return PiecewiseLinear.from_points([0.0, 0.25, 0.5, 0.75, 1.0],
                                       [high, low, high, low, high])


def make_v_shaped(high: float, low: float, at: float = 0.5) -> PiecewiseLinear:
    """``high`` at both ends, ``low`` at ``at``."""
    if not high > low > 0.0 or not 0.0 < at < 1.0:
        raise ValueError("need high > low > 0 and 0 < at < 1")
    return PiecewiseLinear.from_points([0.0, at, 1.0], [high, low, high])


def make_phantom_defeater(a1: float, a2: float) -> PiecewiseLinear:
    """Two-piece ``q`` that lets an agent profit against phantoms at ``a1 < a2``.

    Decreasing on ``[0, m]`` and increasing on ``[m, 1]`` with ``m = (a1+a2)/2``;
    both pieces take the value ``(a2 - a1)/(a2 + 1)`` at ``m``.
    """
    a1, a2 = float(a1), float(a2)
    if not 0.0 <= a1 < a2 <= 1.0:
        raise ValueError(f"need 0 <= a1 < a2 <= 1, got a1={a1}, a2={a2}")
    mid = (a1 + a2) / 2
    r = (a1 + 1) / (a2 + 1)
    left = (0.0, mid, -4.0 / (a1 + a2), 3.0 - r)
    right = (mid, 1.0, 8.0 / (a2 + 1), -(5 * a1 + 3 * a2) / (a2 + 1))
    try:
        return PiecewiseLinear.from_segments([left, right])
    except NonPositiveError as exc:
        raise ScalingError(f"construction for a1={a1}, a2={a2} is not positive: {exc}") from exc


def make_extremal_piecewise(k: int) -> PiecewiseLinear:
    """Increasing ``k``-piece ``q`` with ``q(0) = 1`` and zero slack on every piece.

    Each piece grows by a factor ``1 + 1/k`` so ``q(1) = (1 + 1/k)**k``.
    """
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    knots = [i / k for i in range(k + 1)]
    knots[-1] = 1.0
    segs, value = [], 1.0
    for j in range(k):
        s0, s1 = knots[j], knots[j + 1]
        a = value  # q(s0) = a * s0 + (1 - s0) * a = a
        segs.append((s0, s1, a, (1.0 - s0) * a))
        value = a * (1.0 + s1 - s0)
    return PiecewiseLinear.from_segments(segs)


# JSON ------------------------------------------------------------------------

def from_dict(d: dict) -> ScalingFunction:
    """Parse the JSON scaling-function format.

    ``{"type": "piecewise_linear", "breakpoints": [...], "values": [...]}``,
    ``{"type": "piecewise_linear", "segments": [[l, r, a, b], ...]}`` or
    ``{"type": "exponential", "sign": 1, "scale": 1.0}``.
    """
    if not isinstance(d, dict):
        raise ValueError("scaling function must be a JSON object")
    kind = d.get("type")
    if kind == "piecewise_linear":
        if "segments" in d:
            return PiecewiseLinear.from_segments(d["segments"])
        bps, vals = d.get("breakpoints"), d.get("values")
        if not isinstance(bps, list) or not isinstance(vals, list):
            raise ValueError("piecewise_linear needs 'breakpoints' and 'values' arrays")
        if len(bps) != len(vals):
            raise ValueError("'values' must have the same length as 'breakpoints'")
        return PiecewiseLinear.from_points(bps, vals)
    if kind == "exponential":
        return Exponential(int(d.get("sign", 1)), float(d.get("scale", 1.0)))
    raise ValueError(f"unknown scaling function type {kind!r}")


def from_json(text: str) -> ScalingFunction:
    return from_dict(json.loads(text))


def load(path) -> ScalingFunction:
    with open(path) as fh:
        return from_dict(json.load(fh))
