import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scaled_flp import (DiscontinuityError, DomainError, Exponential, NonPositiveError,
                        PiecewiseLinear, ScalingError, check_single_peaked_condition,
                        check_single_peaked_exact, local_minima, make_extremal_piecewise,
                        make_phantom_defeater, make_w_adversarial, range_ratio)
from scaled_flp import scaling
from scaled_flp.analysis import utility_single_peaked
from scaled_flp.families import random_condition_passing, random_piecewise

GRID = np.linspace(0.0, 1.0, 10001)


def grid_range_ratio(q):
    v = q(GRID)
    return v.max() / v.min()


# evaluation ------------------------------------------------------------------

def test_eval_fig1_at_kink(fig1_q):
    assert fig1_q(0.5) == pytest.approx(0.5, abs=1e-12)


def test_eval_constant():
    assert PiecewiseLinear.constant(1.0)(0.37) == 1.0


def test_eval_exponential_at_one():
    assert Exponential(1, 1.0)(1.0) == pytest.approx(2.718281828, abs=1e-9)


def test_eval_vectorized(fig1_q):
    ys = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    np.testing.assert_allclose(fig1_q(ys), [2.0, 1.25, 0.5, 1.25, 2.0], atol=1e-12)


@pytest.mark.parametrize("y", [-1e-9, 1.0000001, 2.0, float("nan")])
def test_eval_outside_domain(fig1_q, y):
    with pytest.raises(DomainError):
        fig1_q(y)


def test_interior_breakpoints_agree(fig1_q):
    for l, r, a, b in fig1_q.segments()[:-1]:
        nxt = [s for s in fig1_q.segments() if s[0] == r][0]
        assert abs((a * r + b) - (nxt[2] * r + nxt[3])) <= 1e-9


# validation ------------------------------------------------------------------

def test_discontinuous_segments_rejected():
    with pytest.raises(DiscontinuityError):
        PiecewiseLinear.from_segments([(0, 0.5, 0, 1.0), (0.5, 1, 0, 0.5)])


def test_nonpositive_rejected():
    with pytest.raises(NonPositiveError):
        PiecewiseLinear.from_points([0, 0.5, 1], [1.0, 0.0, 1.0])
    with pytest.raises(NonPositiveError):
        PiecewiseLinear.linear(-1.0, 1.0)


@pytest.mark.parametrize("bps", [[0, 0.5, 0.5, 1], [0.1, 1], [0, 0.9], [0, 0.6, 0.4, 1]])
def test_bad_tiling_rejected(bps):
    with pytest.raises(ScalingError):
        PiecewiseLinear.from_points(bps, [1.0] * len(bps))


def test_exponential_validation():
    with pytest.raises(ScalingError):
        Exponential(0, 1.0)
    with pytest.raises(NonPositiveError):
        Exponential(1, 0.0)


# range ratio -----------------------------------------------------------------

def test_range_ratio_fig1(fig1_q):
    assert grid_range_ratio(fig1_q) == pytest.approx(4.0, abs=1e-12)
    assert range_ratio(fig1_q) == pytest.approx(4.0, abs=1e-12)


def test_range_ratio_constant():
    assert range_ratio(PiecewiseLinear.constant(3.3)) == 1.0


@pytest.mark.parametrize("sign", [1, -1])
def test_range_ratio_exponential(sign):
    q = Exponential(sign, 0.7)
    assert range_ratio(q) == pytest.approx(math.e, abs=1e-12)
    assert grid_range_ratio(q) == pytest.approx(math.e, abs=1e-9)


def test_range_ratio_matches_grid_scan():
    rng = np.random.default_rng(1)
    for _ in range(100):
        q = random_piecewise(rng)
        # extrema sit on knots; a fine grid that includes the knots must agree
        ys = np.union1d(GRID, q.knots)
        v = q(ys)
        assert range_ratio(q) == pytest.approx(v.max() / v.min(), rel=1e-12)
        assert range_ratio(q) >= 1.0


# local minima ----------------------------------------------------------------

def test_local_minima_fig1(fig1_q):
    assert local_minima(fig1_q) == [0.5]
    v = fig1_q(GRID)
    assert GRID[np.argmin(v)] == pytest.approx(0.5, abs=1e-4)


def test_local_minima_constant_is_leftmost():
    assert local_minima(PiecewiseLinear.constant(2.0)) == [0.0]


def test_local_minima_w():
    assert local_minima(make_w_adversarial(2.0, 1.0)) == [0.25, 0.75]


def test_local_minima_flat_bottom():
    q = PiecewiseLinear.from_points([0, 0.3, 0.6, 1], [2.0, 1.0, 1.0, 2.0])
    assert local_minima(q) == [0.3]


def test_local_minima_monotone():
    assert local_minima(PiecewiseLinear.linear(1.0, 1.0)) == [0.0]
    assert local_minima(PiecewiseLinear.linear(-0.8, 1.0)) == [1.0]


@pytest.mark.parametrize("sign, expected", [(1, [0.0]), (-1, [1.0])])
def test_local_minima_exponential(sign, expected):
    assert local_minima(Exponential(sign, 1.0)) == expected


def test_local_minima_are_grid_local_minima():
    rng = np.random.default_rng(2)
    h = 1e-6
    for _ in range(100):
        q = random_piecewise(rng)
        for p in local_minima(q):
            for nb in (p - h, p + h):
                if 0.0 <= nb <= 1.0:
                    assert q(p) <= q(nb) + 1e-12


# single-peakedness condition --------------------------------------------------

def test_condition_fails_for_y_plus_001():
    rep = check_single_peaked_condition(PiecewiseLinear.linear(1.0, 0.01))
    assert not rep.satisfied
    assert rep.witness is not None
    assert rep.worst_slack == pytest.approx(0.01 - 1.0)


def test_condition_boundary_y_plus_1():
    rep = check_single_peaked_condition(PiecewiseLinear.linear(1.0, 1.0))
    assert rep.satisfied
    assert rep.worst_slack == pytest.approx(0.0, abs=1e-15)


def test_condition_fails_for_median_counterexample(median_q):
    assert not check_single_peaked_condition(median_q).satisfied
    assert not utility_single_peaked(median_q, 0.9, step=1e-4)


def test_condition_exponential():
    rep = check_single_peaked_condition(Exponential(1, 1.0))
    assert rep.satisfied and rep.worst_slack == 0.0


def test_report_satisfied_iff_slack():
    rng = np.random.default_rng(3)
    for _ in range(200):
        rep = check_single_peaked_condition(random_piecewise(rng))
        assert rep.satisfied == (rep.worst_slack >= -1e-12)


def test_condition_is_sufficient():
    rng = np.random.default_rng(4)
    for _ in range(100):
        q = random_condition_passing(rng)
        assert check_single_peaked_condition(q).satisfied
        for xi in np.concatenate([[0.0, 1.0], rng.uniform(0, 1, 8)]):
            assert utility_single_peaked(q, xi)


def test_condition_is_not_necessary():
    # slope 1.5 on [0.5, 1] beats q = 1 there, yet no agent in [0, 1] notices
    q = PiecewiseLinear.from_points([0.0, 0.5, 1.0], [1.0, 1.0, 1.75])
    assert not check_single_peaked_condition(q).satisfied
    assert check_single_peaked_exact(q).satisfied
    for xi in np.linspace(0.0, 1.0, 101):
        assert utility_single_peaked(q, xi, step=1e-3)


def test_exact_condition_matches_extreme_agents():
    # the worst agents sit at 0 and 1, so sampling those decides the question;
    # narrow segments need a fine grid to expose the dip
    rng = np.random.default_rng(5)
    for _ in range(300):
        q = random_piecewise(rng) if rng.random() < 0.5 else random_condition_passing(rng)
        empirical = all(utility_single_peaked(q, xi, step=1e-5, tol=1e-12) for xi in (0.0, 1.0))
        assert check_single_peaked_exact(q).satisfied == empirical


# constructions ---------------------------------------------------------------

def test_w_adversarial_shape():
    q = make_w_adversarial(2.0, 1.0)
    assert q.slopes == (-4.0, 4.0, -4.0, 4.0)
    for y, v in [(0, 2), (0.25, 1), (0.5, 2), (0.75, 1), (1, 2)]:
        assert q(y) == pytest.approx(v, abs=1e-12)
    assert range_ratio(q) == pytest.approx(2.0)


def test_w_adversarial_ratio_8():
    assert range_ratio(make_w_adversarial(4.0, 0.5)) == pytest.approx(8.0, abs=1e-9)


@pytest.mark.parametrize("h, l", [(1.0, 1.0), (0.5, 1.0), (1.0, 0.0)])
def test_w_adversarial_rejects(h, l):
    with pytest.raises(ValueError):
        make_w_adversarial(h, l)


def test_phantom_defeater_endpoints():
    q = make_phantom_defeater(0.0, 1.0)
    # substitute a1=0, a2=1 into the two pieces by hand
    left = lambda y: 3 - (0 + 1) / (1 + 1) - (4 / (0 + 1)) * y
    right = lambda y: (8 / (1 + 1)) * y - (5 * 0 + 3 * 1) / (1 + 1)
    assert q(0.0) == pytest.approx(left(0.0)) == pytest.approx(2.5)
    assert q(0.5) == pytest.approx(0.5, abs=1e-12)
    assert q(1.0) == pytest.approx(right(1.0)) == pytest.approx(2.5)


def test_phantom_defeater_continuity():
    q = make_phantom_defeater(0.2, 0.6)
    (l0, r0, a0, b0), (l1, r1, a1, b1) = q.segments()
    assert r0 == l1 == pytest.approx(0.4)
    assert a0 * r0 + b0 == pytest.approx(0.25, abs=1e-12)
    assert a1 * l1 + b1 == pytest.approx(0.25, abs=1e-12)


@pytest.mark.parametrize("a1, a2", [(0.5, 0.5), (0.7, 0.3), (-0.1, 0.5), (0.0, 0.0)])
def test_phantom_defeater_rejects(a1, a2):
    with pytest.raises(ValueError):
        make_phantom_defeater(a1, a2)


@pytest.mark.parametrize("k, expected", [(1, 2.0), (2, 2.25), (4, 2.44140625), (8, 2.565784513950348)])
def test_extremal_piecewise(k, expected):
    q = make_extremal_piecewise(k)
    assert q.n_segments == k
    assert q(0.0) == 1.0
    assert range_ratio(q) == pytest.approx(expected, abs=1e-9)
    assert range_ratio(q) == pytest.approx((1 + 1 / k) ** k, abs=1e-12)
    rep = check_single_peaked_condition(q)
    assert rep.satisfied and abs(rep.worst_slack) <= 1e-12


def test_extremal_k1_is_y_plus_1():
    q = make_extremal_piecewise(1)
    np.testing.assert_allclose(q(GRID), GRID + 1.0, atol=1e-12)


@pytest.mark.parametrize("k", [0, -2, 1.5])
def test_extremal_rejects(k):
    with pytest.raises(ValueError):
        make_extremal_piecewise(k)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 10.0), st.floats(1.01, 20.0))
def test_w_construction_invariants(low, factor):
    q = make_w_adversarial(low * factor, low)
    assert range_ratio(q) == pytest.approx(factor, abs=1e-9)
    assert np.all(q(np.linspace(0, 1, 10001)) > 0)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 0.98), st.floats(0.005, 1.0))
def test_defeater_construction_invariants(a1, width):
    a2 = min(1.0, a1 + width)
    q = make_phantom_defeater(a1, a2)
    mid = (a1 + a2) / 2
    (_, _, sa, ia), (_, _, sb, ib) = q.segments()
    assert abs((sa * mid + ia) - (sb * mid + ib)) <= 1e-9
    assert abs(q(mid) - (a2 - a1) / (a2 + 1)) <= 1e-9
    assert np.all(q(np.linspace(0, 1, 10001)) > 0)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 40))
def test_extremal_construction_invariants(k):
    q = make_extremal_piecewise(k)
    segs = q.segments()
    for (l0, r0, a0, b0), (l1, r1, a1, b1) in zip(segs, segs[1:]):
        assert abs((a0 * r0 + b0) - (a1 * l1 + b1)) <= 1e-9
    assert np.all(q(np.linspace(0, 1, 10001)) > 0)
    assert range_ratio(q) <= math.e


# bounds on r_q ---------------------------------------------------------------

def test_condition_passing_ratio_bounds():
    rng = np.random.default_rng(6)
    for _ in range(500):
        q = random_condition_passing(rng)
        k = q.n_segments
        assert range_ratio(q) <= math.e + 1e-9
        assert range_ratio(q) <= (1 + 1 / k) ** k + 1e-9


# scaling and JSON ------------------------------------------------------------

def test_scaled_multiplies(fig1_q):
    np.testing.assert_allclose(fig1_q.scaled(3.0)(GRID), 3.0 * fig1_q(GRID), rtol=1e-12)
    assert Exponential(-1, 2.0).scaled(0.5) == Exponential(-1, 1.0)


def test_json_piecewise_roundtrip():
    text = '{"type":"piecewise_linear","breakpoints":[0,0.5,1],"values":[2,0.5,2]}'
    q = scaling.from_json(text)
    assert q.to_dict() == json.loads(text)
    assert scaling.from_json(q.to_json()) == q


def test_json_segments_and_exponential():
    q = scaling.from_dict({"type": "piecewise_linear", "segments": [[0, 0.5, -3, 2], [0.5, 1, 3, -1]]})
    assert q(0.0) == 2.0 and q(1.0) == 2.0
    e = scaling.from_json('{"type":"exponential","sign":-1,"scale":2.0}')
    assert e == Exponential(-1, 2.0)
    assert scaling.from_json(e.to_json()) == e


@pytest.mark.parametrize("bad", [
    {"type": "piecewise_linear", "breakpoints": [0, 1], "values": [1]},
    {"type": "piecewise_linear", "breakpoints": [0, 1]},
    {"type": "spline"},
    [1, 2],
])
def test_json_malformed(bad):
    with pytest.raises(ValueError):
        scaling.from_dict(bad)


def test_single_peaked_without_ratio_bound():
    # the e bound needs the sufficient condition, not single-peakedness itself
    ys = np.linspace(0.0, 1.0, 201)
    q = PiecewiseLinear.from_points(ys, 1.0 / (1.01 - ys))
    assert range_ratio(q) == pytest.approx(101.0)
    assert check_single_peaked_exact(q).satisfied
    assert not check_single_peaked_condition(q).satisfied
    assert all(utility_single_peaked(q, xi, step=1e-4) for xi in np.linspace(0, 1, 41))
