"""Recompute the worked numbers behind each counterexample and bound.

Every case builds its instance, recomputes the quantities of interest and
compares them against the expected values.  ``reproduce("all")`` runs
every case.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import analysis, families
from .instance import LocationProfile, agent_cost, max_cost, total_cost
from .mechanisms import (Dictator, Midpoint, OptimalTC, constant_mechanism,
                         median_mechanism, phantom_mechanism)
from .optimal import optimal_mc, optimal_tc
from .scaling import (CONTINUITY_TOL, Exponential, PiecewiseLinear,
                      check_single_peaked_condition, make_extremal_piecewise,
                      make_phantom_defeater, make_v_shaped, make_w_adversarial)

DEFAULT_SEED = 20240601


@dataclass
class Check:
    name: str
    expected: object
    actual: object
    passed: bool
    tol: float | None = None

    def to_dict(self) -> dict:
        def clean(v):
            if isinstance(v, float) and math.isinf(v):
                return "inf"
            return v
        return {"name": self.name, "expected": clean(self.expected),
                "actual": clean(self.actual), "tol": self.tol, "passed": self.passed}


@dataclass
class CaseReport:
    case_id: str
    checks: list[Check] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def close(self, name, actual, expected, tol=1e-9):
        actual = float(actual)
        ok = abs(actual - expected) <= tol
        self.checks.append(Check(name, expected, actual, ok, tol))
        return ok

    def point(self, name, position, value, expected_position, expected_value, tol=1e-9):
        """One assertion on a (position, value) pair."""
        actual = [float(position), float(value)]
        ok = (abs(actual[0] - expected_position) <= tol
              and abs(actual[1] - expected_value) <= tol)
        self.checks.append(Check(name, [expected_position, expected_value], actual, ok, tol))
        return ok

    def at_least(self, name, actual, bound, tol=0.0):
        actual = float(actual)
        self.checks.append(Check(name, f">= {bound}", actual, actual >= bound - tol, tol))

    def at_most(self, name, actual, bound, tol=0.0):
        actual = float(actual)
        self.checks.append(Check(name, f"<= {bound}", actual, actual <= bound + tol, tol))

    def truth(self, name, value, expected=True):
        self.checks.append(Check(name, expected, value, value == expected))

    def to_dict(self) -> dict:
        return {"case": self.case_id, "passed": self.passed,
                "checks": [c.to_dict() for c in self.checks], "details": self.details}


def fig1_scaling() -> PiecewiseLinear:
    return PiecewiseLinear.from_segments([(0.0, 0.5, -3.0, 2.0), (0.5, 1.0, 3.0, -1.0)])


def median_counterexample_scaling() -> PiecewiseLinear:
    return PiecewiseLinear.from_segments([(0.0, 0.5, -10.0, 6.0), (0.5, 1.0, 10.0, -4.0)])


def case_fig1(seed=None) -> CaseReport:
    rep = CaseReport("fig1")
    q, x = fig1_scaling(), LocationProfile([0.0, 0.0, 0.6])
    y_med = median_mechanism()(q, x)
    y_mid = Midpoint()(q, x)
    rep.close("median TC", total_cost(q, y_med, x), 1.2)
    rep.close("midpoint MC", max_cost(q, y_mid, x), 0.33)
    tc, mc = optimal_tc(q, x), optimal_mc(q, x)
    rep.point("optimal TC [position, value]", tc.position, tc.value, 0.5, 0.55)
    rep.point("optimal MC [position, value]", mc.position, mc.value, 0.5, 0.25)
    rep.details.update(median_facility=y_med, midpoint_facility=y_mid)
    return rep


def case_opt_tc_not_sp(seed=None) -> CaseReport:
    rep = CaseReport("opt_tc_not_sp")
    q, x = PiecewiseLinear.linear(-0.8, 1.0), LocationProfile([0.3, 0.4, 0.7])
    mech = OptimalTC()
    y = mech(q, x)
    rep.close("optimal facility", y, 0.4)
    rep.close("agent 3 cost", agent_cost(q, y, 0.7), 0.204)
    y_lie = mech(q, x.replace(2, 0.755))
    rep.close("facility after misreport 0.755", y_lie, 1.0)
    rep.close("agent 3 cost after misreport", agent_cost(q, y_lie, 0.7), 0.06)
    cert = analysis.find_sp_violation(mech, q, x, 1e-3)
    rep.truth("falsifier finds a deviation", cert is not None)
    if cert is not None:
        rep.at_least("falsifier gain", cert.gain, 0.144, tol=1e-6)
        rep.details["certificate"] = cert.to_dict()
    return rep


def case_median_not_sp(seed=None) -> CaseReport:
    rep = CaseReport("median_not_sp")
    q, x = median_counterexample_scaling(), LocationProfile([0.5, 0.7, 0.9])
    mech = median_mechanism()
    y = mech(q, x)
    rep.close("median facility", y, 0.7)
    rep.close("agent 3 cost", agent_cost(q, y, 0.9), 0.6)
    y_lie = mech(q, x.replace(2, 0.5))
    rep.close("facility after misreport 0.5", y_lie, 0.5)
    rep.close("agent 3 cost after misreport", agent_cost(q, y_lie, 0.9), 0.4)
    cert = analysis.find_sp_violation(mech, q, x, 1e-3)
    rep.truth("falsifier finds a deviation", cert is not None)
    if cert is not None:
        rep.close("falsifier gain", cert.gain, 0.2)
        rep.details["certificate"] = cert.to_dict()
    return rep


def _random_pair(rng) -> tuple[float, float]:
    while True:
        a1, a2 = np.sort(rng.uniform(0.0, 1.0, 2))
        if a2 - a1 > 1e-3:
            return float(a1), float(a2)


def defeater_case1_instance(a1: float, a2: float, n: int, n_star: int):
    """Phantoms and profile for the interior-agent case (``1 <= n_star <= n-1``).

    ``n_star`` phantoms sit at ``a1`` and the rest at ``a2``.  Agents below
    the three pinned ones are placed at ``a1``; agents above them at
    ``(a1 + a2)/2``.
    """
    mid = (a1 + a2) / 2
    pinned = {n - n_star: a1, n + 1 - n_star: (3 * a1 + a2) / 4}
    if n_star >= 2:
        pinned[n + 2 - n_star] = mid
    xs = [pinned.get(i, a1 if i < n - n_star else mid) for i in range(1, n + 1)]
    phantoms = [a1] * n_star + [a2] * (n + 1 - n_star)
    liar = n - n_star - 1  # zero-based label of x_{n - n*}
    cost_before = agent_cost(make_phantom_defeater(a1, a2), (3 * a1 + a2) / 4, a1)
    cost_after = (a2 - a1) / (a2 + 1) * (a2 - a1) / 2
    return phantoms, xs, liar, cost_before, cost_after


def defeater_case2_instance(a1: float, a2: float, n: int):
    """``n`` phantoms at ``a1`` and one at ``a2``; agents at ``(a1+3a2)/4`` and ``a2``."""
    phantoms = [a1] * n + [a2]
    xs = [(a1 + 3 * a2) / 4] + [a2] * (n - 1)
    liar = n - 1
    cost_before = 3 * (a2 - a1) ** 2 / (4 * (a2 + 1))
    cost_after = (a2 - a1) ** 2 / (2 * (a2 + 1))
    return phantoms, xs, liar, cost_before, cost_after


def _phantom_case(case_id: str, which: int, seed, pairs: int = 20) -> CaseReport:
    rep = CaseReport(case_id)
    seed = DEFAULT_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    rep.details["seed"] = seed
    rep.details["instances"] = []
    worst_cont, all_found, all_at_mid, all_gap = 0.0, True, True, True
    for _ in range(pairs):
        a1, a2 = _random_pair(rng)
        q = make_phantom_defeater(a1, a2)
        mid = (a1 + a2) / 2
        l_seg, r_seg = q.segments()
        jump = abs((l_seg[2] * mid + l_seg[3]) - (r_seg[2] * mid + r_seg[3]))
        worst_cont = max(worst_cont, jump)
        n = int(rng.integers(3, 8))
        if which == 1:
            n_star = int(rng.integers(1, n))
            phantoms, xs, liar, before, after = defeater_case1_instance(a1, a2, n, n_star)
        else:
            n_star = n
            phantoms, xs, liar, before, after = defeater_case2_instance(a1, a2, n)
        x = LocationProfile(xs)
        mech = phantom_mechanism(phantoms)
        cert = analysis.find_sp_violation(mech, q, x, 1e-3)
        gap = before - after
        found = cert is not None
        at_mid = found and cert.misreport == mid and cert.true_position == xs[liar]
        enough = found and cert.gain >= gap - 1e-9
        # the prescribed misreport on its own
        direct = agent_cost(q, mech(q, x.replace(liar, mid)), xs[liar])
        direct_ok = abs(direct - after) <= 1e-9 and before - direct > 0
        all_found &= found and direct_ok
        all_at_mid &= at_mid
        all_gap &= enough
        rep.details["instances"].append({
            "a1": a1, "a2": a2, "n": n, "n_star": n_star, "gap": gap,
            "certificate": cert.to_dict() if cert else None})
    rep.at_most("max jump at (a1+a2)/2", worst_cont, CONTINUITY_TOL)
    rep.truth(f"deviation to (a1+a2)/2 profitable in all {pairs} pairs", all_found)
    rep.truth("falsifier certificate misreports (a1+a2)/2", all_at_mid)
    rep.truth("falsifier gain >= analytic gap", all_gap)
    return rep


def case_phantom_not_sp_case1(seed=None) -> CaseReport:
    return _phantom_case("phantom_not_sp_case1", 1, seed)


def case_phantom_not_sp_case2(seed=None) -> CaseReport:
    return _phantom_case("phantom_not_sp_case2", 2, seed)


def case_not_single_peaked_linear(seed=None) -> CaseReport:
    rep = CaseReport("not_single_peaked_linear")
    q = PiecewiseLinear.linear(1.0, 0.01)
    report = check_single_peaked_condition(q)
    rep.truth("condition fails", report.satisfied, False)
    rep.details["condition"] = report.to_dict()
    rep.truth("utility of agent at 0.5 not single-peaked",
              analysis.utility_single_peaked(q, 0.5), False)
    # u'(y) = 2y - 0.49 left of the agent: zero at 0.245
    ys = np.array([0.0, 0.245, 0.5])
    u = -q(ys) * np.abs(ys - 0.5)
    rep.close("utility at 0", u[0], -0.005)
    rep.close("utility dip at 0.245", u[1], -(0.255 * 0.255))
    rep.truth("utility falls on [0, 0.245]", bool(u[1] < u[0]))
    return rep


def case_rq_e_bound(seed=None, samples: int = 500) -> CaseReport:
    rep = CaseReport("rq_e_bound")
    q = Exponential(1, 1.0)
    rep.close("e^y at 1", q(1.0), math.e)
    rep.close("r_q of e^y", q.range_ratio(), math.e)
    rep.truth("e^y meets the condition", check_single_peaked_condition(q).satisfied)
    seed = DEFAULT_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    worst = max(families.random_condition_passing(rng).range_ratio() for _ in range(samples))
    rep.at_most(f"max r_q over {samples} condition-passing q", worst, math.e, tol=1e-9)
    rep.details["seed"] = seed
    return rep


def case_rq_piecewise_bound(seed=None, samples: int = 500) -> CaseReport:
    rep = CaseReport("rq_piecewise_bound")
    for k in (1, 2, 4, 8):
        q = make_extremal_piecewise(k)
        rep.close(f"r_q of extremal k={k}", q.range_ratio(), (1 + 1 / k) ** k)
        rep.truth(f"extremal k={k} meets the condition", check_single_peaked_condition(q).satisfied)
    seed = DEFAULT_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    excess = -math.inf
    for _ in range(samples):
        q = families.random_condition_passing(rng)
        k = q.n_segments
        excess = max(excess, q.range_ratio() - (1 + 1 / k) ** k)
    rep.at_most(f"max r_q - (1+1/k)^k over {samples} samples", excess, 0.0, tol=1e-9)
    rep.details["seed"] = seed
    return rep


def _w_instances():
    q = make_w_adversarial(2.0, 1.0)
    return q, [LocationProfile([0.0, 0.0, 0.5, 0.5]), LocationProfile([0.5, 0.5, 1.0, 1.0])]


def case_tc_lower_bound(seed=None) -> CaseReport:
    rep = CaseReport("tc_lower_bound")
    q, profiles = _w_instances()
    rq = q.range_ratio()
    for label, x in zip(("left", "right"), profiles):
        r = analysis.approx_ratio(median_mechanism(), q, x, "tc")
        rep.close(f"median TC ratio ({label} W profile)", r.ratio, rq, tol=1e-6)
    rep.details["r_q"] = rq
    return rep


def case_mc_lower_bound(seed=None) -> CaseReport:
    rep = CaseReport("mc_lower_bound")
    q, profiles = _w_instances()
    rq = q.range_ratio()
    for label, x in zip(("left", "right"), profiles):
        r = analysis.approx_ratio(median_mechanism(), q, x, "mc")
        rep.close(f"median MC ratio ({label} W profile)", r.ratio, 2 * rq, tol=1e-6)
    rep.details["r_q"] = rq
    return rep


def case_dictator_tc(seed=None) -> CaseReport:
    rep = CaseReport("dictator_tc")
    q = PiecewiseLinear.from_points([0.0, 0.5, 1.0], [2.0, 0.5, 0.5])
    rq = q.range_ratio()
    for n in (3, 5):
        x = LocationProfile([0.0] + [0.5] * (n - 1))
        r = analysis.approx_ratio(Dictator(0), q, x, "tc")
        rep.close(f"dictator TC ratio n={n}", r.ratio, (n - 1) * rq, tol=1e-6)
    return rep


def case_dictator_mc(seed=None) -> CaseReport:
    rep = CaseReport("dictator_mc")
    q = make_v_shaped(2.0, 1.0)
    rq = q.range_ratio()
    x = LocationProfile([0.0, 0.0, 1.0])
    r = analysis.approx_ratio(Dictator(2), q, x, "mc")
    rep.close("dictator MC ratio", r.ratio, 2 * rq, tol=1e-6)
    return rep


def case_unbounded_interior_phantoms(seed=None) -> CaseReport:
    rep = CaseReport("unbounded_interior_phantoms")
    q, x = fig1_scaling(), LocationProfile([1.0, 1.0, 1.0])
    for obj in ("tc", "mc"):
        r = analysis.approx_ratio(constant_mechanism(0.5), q, x, obj)
        rep.truth(f"{obj.upper()} ratio flagged unbounded", r.unbounded)
        rep.close(f"{obj.upper()} optimum", r.opt_value, 0.0)
        rep.details[obj] = r.to_dict()
    return rep


CASES = {
    "fig1": case_fig1,
    "opt_tc_not_sp": case_opt_tc_not_sp,
    "median_not_sp": case_median_not_sp,
    "phantom_not_sp_case1": case_phantom_not_sp_case1,
    "phantom_not_sp_case2": case_phantom_not_sp_case2,
    "not_single_peaked_linear": case_not_single_peaked_linear,
    "rq_e_bound": case_rq_e_bound,
    "rq_piecewise_bound": case_rq_piecewise_bound,
    "tc_lower_bound": case_tc_lower_bound,
    "mc_lower_bound": case_mc_lower_bound,
    "dictator_tc": case_dictator_tc,
    "dictator_mc": case_dictator_mc,
    "unbounded_interior_phantoms": case_unbounded_interior_phantoms,
}


def reproduce(case_id: str, seed: int | None = None):
    """Run one case, or every case for ``"all"`` (returns a list then)."""
    if case_id == "all":
        return [fn(seed) for fn in CASES.values()]
    try:
        fn = CASES[case_id]
    except KeyError:
        raise KeyError(f"unknown case {case_id!r}; choose from {', '.join(CASES)} or 'all'") from None
    return fn(seed)
