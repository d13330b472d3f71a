"""Exact optimal facility placement, plus a brute-force grid oracle."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from .instance import ProfileLike, as_profile, max_cost, total_cost
from .scaling import Exponential, PiecewiseLinear, ScalingFunction

TIE_TOL = 1e-12


class Objective(str, Enum):
    TC = "tc"
    MC = "mc"

    def cost(self, q, y, x):
        return total_cost(q, y, x) if self is Objective.TC else max_cost(q, y, x)


def as_objective(obj) -> Objective:
    if isinstance(obj, Objective):
        return obj
    return Objective(str(obj).lower())


@dataclass(frozen=True)
class OptimumResult:
    position: float
    value: float
    candidates_examined: int

    def to_dict(self) -> dict:
        return asdict(self)


def _leftmost_best(q, x, candidates, objective: Objective) -> OptimumResult:
    cand = np.asarray(candidates, dtype=float)
    values = objective.cost(q, cand, x)
    best = values.min()
    ok = values <= best + TIE_TOL * max(1.0, abs(best))
    pos = float(cand[ok].min())
    return OptimumResult(pos, float(objective.cost(q, pos, x)), int(cand.size))


def tc_candidates(q: ScalingFunction, x: ProfileLike) -> list[float]:
    """Agent positions followed by the cheaper endpoint of each segment of ``q``.

    Restricted to one segment and one gap between neighbouring agents the
    total cost is ``(a*y + b) * (a'*y + m)``; whenever it is convex both
    roots lie on the side where it increases, so the minimum sits at a gap
    endpoint.  Gap endpoints are agents or breakpoints, and a breakpoint
    can only win if it is the cheaper end of an adjacent segment.
    """
    return list(as_profile(x).positions) + list(q.segment_minima())


def optimal_tc(q: ScalingFunction, x: ProfileLike) -> OptimumResult:
    """Minimize total cost over the candidate set; ties go to the leftmost point."""
    x = as_profile(x)
    return _leftmost_best(q, x, tc_candidates(q, x), Objective.TC)


def _quadratic_vertex(A: float, B: float, lo: float, hi: float):
    """Vertex of ``A*y**2 + B*y + C`` if convex and inside ``[lo, hi]``."""
    if A > 0.0:
        v = -B / (2 * A)
        if lo < v < hi:
            return v
    return None


def mc_candidates(q: ScalingFunction, x: ProfileLike) -> list[float]:
    """Closed-form candidates for the maximum-cost optimum.

    Left of ``mid = (x_1 + x_n)/2`` only the rightmost agent matters and
    right of it only the leftmost, so on each piece of ``q`` (split at
    ``mid``) the objective is a product of two linear functions.
    """
    x = as_profile(x)
    x1, xn, mid = x.leftmost, x.rightmost, x.midpoint
    cands = {0.0, mid, 1.0}
    if isinstance(q, PiecewiseLinear):
        for l, r, a, b in q.segments():
            cands.update((l, r))
            # c_n(y) = (a y + b)(xn - y) on [l, r] intersected with [0, mid]
            lo, hi = l, min(r, mid)
            if lo < hi:
                v = _quadratic_vertex(-a, a * xn - b, lo, hi)
                if v is not None:
                    cands.add(v)
            # c_1(y) = (a y + b)(y - x1) on [l, r] intersected with [mid, 1]
            lo, hi = max(l, mid), r
            if lo < hi:
                v = _quadratic_vertex(a, b - a * x1, lo, hi)
                if v is not None:
                    cands.add(v)
    elif isinstance(q, Exponential):
        # stationary points of e^{sy}(xn - y) and e^{sy}(y - x1)
        s = q.sign
        cands.add(min(max(xn - 1.0 / s, 0.0), mid))
        cands.add(min(max(x1 - 1.0 / s, mid), 1.0))
    else:
        cands.update(q.breakpoints)
    return sorted(cands)


def optimal_mc(q: ScalingFunction, x: ProfileLike) -> OptimumResult:
    x = as_profile(x)
    return _leftmost_best(q, x, mc_candidates(q, x), Objective.MC)


def optimal(q: ScalingFunction, x: ProfileLike, objective) -> OptimumResult:
    objective = as_objective(objective)
    return optimal_tc(q, x) if objective is Objective.TC else optimal_mc(q, x)


def grid_points(step: float) -> np.ndarray:
    """``{0, step, 2*step, ...}`` up to and including 1."""
    if not step > 0:
        raise ValueError(f"grid step must be positive, got {step!r}")
    m = int(np.floor(1.0 / step + 1e-9))
    ys = np.arange(m + 1) * step
    ys = ys[ys <= 1.0]
    if ys[-1] < 1.0:
        ys = np.append(ys, 1.0)
    return ys


def grid_optimum(q: ScalingFunction, x: ProfileLike, objective, step: float = 1e-4) -> OptimumResult:
    """Exhaustive scan of a uniform grid; a verification oracle only."""
    if not 0 < step <= 0.01:
        raise ValueError(f"grid step must lie in (0, 0.01], got {step!r}")
    objective = as_objective(objective)
    ys = grid_points(step)
    vals = objective.cost(q, ys, as_profile(x))
    i = int(np.argmin(vals))
    return OptimumResult(float(ys[i]), float(vals[i]), int(ys.size))
