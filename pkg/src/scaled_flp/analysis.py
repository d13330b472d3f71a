"""Strategyproofness falsification and approximation-ratio measurement."""
from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Iterator

import numpy as np

from .instance import LocationProfile, ProfileLike, agent_cost, as_profile
from .mechanisms import Mechanism
from .optimal import Objective, as_objective, grid_points, optimal
from .scaling import PiecewiseLinear, ScalingFunction

GAIN_TOL = 1e-9
RATIO_FLOOR_TOL = 1e-9


@dataclass(frozen=True)
class DeviationCertificate:
    """A profitable unilateral misreport."""

    agent: int
    true_position: float
    misreport: float
    facility_before: float
    facility_after: float
    cost_before: float
    cost_after: float

    @property
    def gain(self) -> float:
        return self.cost_before - self.cost_after

    def verify(self, q: ScalingFunction, tol: float = 0.0) -> bool:
        """Recompute both costs from the stored positions."""
        before = agent_cost(q, self.facility_before, self.true_position)
        after = agent_cost(q, self.facility_after, self.true_position)
        return (abs(before - self.cost_before) <= tol and abs(after - self.cost_after) <= tol
                and before - after >= GAIN_TOL)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["gain"] = self.gain
        return d


def misreport_candidates(q: ScalingFunction, x: LocationProfile, step: float) -> np.ndarray:
    """Uniform grid plus breakpoints of ``q``, agent positions and ``(x_1+x_n)/2``."""
    pts = np.concatenate([grid_points(step), np.asarray(q.breakpoints, dtype=float),
                          x.positions, [x.midpoint]])
    return np.unique(pts)


def find_sp_violation(mech: Mechanism, q: ScalingFunction, x: ProfileLike,
                      report_grid_step: float = 1e-3) -> DeviationCertificate | None:
    """Search unilateral misreports for one that lowers the liar's true cost.

    Returns the largest-gain certificate, or ``None``.  Ties go to the lowest
    agent label and then to the report closest to the truth.  ``None`` only means nothing was found
    on this grid; it is not a proof of strategyproofness.
    """
    if not 0 < report_grid_step <= 0.01:
        raise ValueError(f"grid step must lie in (0, 0.01], got {report_grid_step!r}")
    x = as_profile(x)
    reports = misreport_candidates(q, x, report_grid_step)
    truthful = mech(q, x)
    best = None
    for agent in range(x.n):
        xi = x.position_of(agent)
        before = agent_cost(q, truthful, xi)
        facilities = mech.outcomes(q, x, agent, reports)
        after = agent_cost(q, facilities, xi)
        gains = before - after
        top = gains.max()
        if top < GAIN_TOL or (best is not None and top <= best.gain + 1e-12):
            continue
        tied = np.flatnonzero(gains >= top - 1e-12)
        k = int(tied[np.argmin(np.abs(reports[tied] - xi))])
        best = DeviationCertificate(agent, xi, float(reports[k]), float(truthful),
                                    float(facilities[k]), float(before), float(after[k]))
    return best


@dataclass(frozen=True)
class RatioReport:
    """Mechanism objective over optimal objective on one instance.

    When the optimum is zero and the mechanism is not, ``unbounded`` is set
    and ``ratio`` is ``inf``; ``mech_value`` keeps the numerator.
    """

    mechanism: str
    instance: str
    objective: str
    mech_value: float
    opt_value: float
    ratio: float
    unbounded: bool
    mech_position: float
    opt_position: float
    seed: int | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.unbounded:
            d["ratio"] = "inf"
        return d


def approx_ratio(mech: Mechanism, q: ScalingFunction, x: ProfileLike, objective,
                 instance: str = "", seed: int | None = None) -> RatioReport:
    objective = as_objective(objective)
    x = as_profile(x)
    y = mech(q, x)
    num = float(objective.cost(q, y, x))
    opt = optimal(q, x, objective)
    if opt.value == 0.0:
        unbounded = num > 0.0
        ratio = math.inf if unbounded else 1.0
    else:
        unbounded, ratio = False, num / opt.value
    return RatioReport(mech.name, instance, objective.value, num, opt.value, ratio,
                       unbounded, float(y), opt.position, seed)


Family = Callable[[np.random.Generator], "tuple[ScalingFunction, LocationProfile]"]


def ratio_sweep(mech: Mechanism | Callable, family: Family, samples: int, objective,
                seed: int = 0) -> Iterator[RatioReport]:
    """One report per generated instance, reproducible from ``seed``.

    ``mech`` may also be a callable ``(q, x) -> Mechanism`` when the
    mechanism depends on the instance size (e.g. random phantoms).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    for i in range(samples):
        q, x = family(rng)
        m = mech if isinstance(mech, Mechanism) else mech(q, x)
        yield approx_ratio(m, q, x, objective, instance=str(i), seed=seed)


def worst(reports: Iterable[RatioReport]) -> RatioReport:
    """The first report with the largest ratio."""
    best = None
    for r in reports:
        if best is None or r.ratio > best.ratio:
            best = r
    if best is None:
        raise ValueError("no reports")
    return best


def worst_ratio_search(mech, family: Family, samples: int, objective, seed: int = 0) -> RatioReport:
    return worst(ratio_sweep(mech, family, samples, objective, seed))


CSV_COLUMNS = ["seed", "instance_id", "mechanism", "objective", "mech_value", "opt_value", "ratio"]


def csv_row(r: RatioReport) -> list:
    ratio = "inf" if r.unbounded else repr(r.ratio)
    return [r.seed if r.seed is not None else "", r.instance, r.mechanism, r.objective,
            repr(r.mech_value), repr(r.opt_value), ratio]


def write_csv(reports: Iterable[RatioReport], fh) -> RatioReport | None:
    """Stream rows to ``fh``; returns the worst report seen."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    best = None
    for r in reports:
        w.writerow(csv_row(r))
        if best is None or r.ratio > best.ratio:
            best = r
    return best


# empirical single-peakedness (independent of the closed-form tests) -----------

def utility_single_peaked(q: ScalingFunction, xi: float, step: float = 1e-3,
                          tol: float = 1e-9) -> bool:
    """Sampled check that ``-q(y)|y - xi|`` rises up to ``xi`` and falls after it."""
    ys = grid_points(step)
    if isinstance(q, PiecewiseLinear):
        ys = np.union1d(ys, q.knots)
    u = -q(ys) * np.abs(ys - xi)
    du = np.diff(u)
    left = ys[1:] <= xi
    right = ys[:-1] >= xi
    return bool(np.all(du[left] >= -tol) and np.all(du[right] <= tol))
