"""Seeded random instance generators used by sweeps and property tests."""
from __future__ import annotations

import numpy as np

from .instance import LocationProfile
from .scaling import PiecewiseLinear, check_single_peaked_condition

MIN_WIDTH = 1e-3


def random_piecewise(rng: np.random.Generator, max_segments: int = 6,
                     low: float = 0.05, high: float = 2.0) -> PiecewiseLinear:
    """Piecewise linear ``q`` with 1..max_segments pieces and knot values in [low, high]."""
    k = int(rng.integers(1, max_segments + 1))
    while True:
        inner = np.sort(rng.uniform(0.0, 1.0, k - 1))
        knots = np.concatenate([[0.0], inner, [1.0]])
        if np.all(np.diff(knots) >= MIN_WIDTH):
            break
    values = rng.uniform(low, high, k + 1)
    return PiecewiseLinear.from_points(knots, values)


def random_condition_passing(rng: np.random.Generator, max_segments: int = 6) -> PiecewiseLinear:
    """Random ``q`` lifted by a constant until ``q - |q'| >= 0`` holds.

    About half of the lifted draws stop exactly on the boundary (zero slack).
    """
    q = random_piecewise(rng, max_segments)
    slack = check_single_peaked_condition(q).worst_slack
    lift = max(0.0, -slack)
    if rng.random() >= 0.5:
        lift += rng.exponential(0.5)
    return q.shifted(lift) if lift > 0 else q


def random_profile(rng: np.random.Generator, max_agents: int = 8,
                   min_agents: int = 1) -> LocationProfile:
    n = int(rng.integers(min_agents, max_agents + 1))
    return LocationProfile(rng.uniform(0.0, 1.0, n))


def random_phantoms(rng: np.random.Generator, n: int, pin_ends: bool = False) -> list[float]:
    ph = np.sort(rng.uniform(0.0, 1.0, n + 1))
    if pin_ends:
        ph[0], ph[-1] = 0.0, 1.0
    return ph.tolist()


def piecewise_family(max_segments: int = 6, max_agents: int = 8):
    def draw(rng):
        return random_piecewise(rng, max_segments), random_profile(rng, max_agents)
    return draw


def condition_family(max_segments: int = 6, max_agents: int = 8):
    def draw(rng):
        return random_condition_passing(rng, max_segments), random_profile(rng, max_agents)
    return draw


FAMILIES = {"piecewise": piecewise_family, "condition": condition_family}
