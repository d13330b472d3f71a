"""
Optimal facility placement
==========================

The total-cost optimum is found by checking a short list of candidate
points; the maximum-cost optimum by minimizing one quadratic per piece.
A brute-force grid scan confirms both.
"""

import numpy as np

from scaled_flp import (LocationProfile, PiecewiseLinear, grid_optimum, max_cost,
                        optimal_mc, optimal_tc, total_cost)
from scaled_flp.optimal import tc_candidates

q = PiecewiseLinear.from_points([0.0, 0.5, 1.0], [2.0, 0.5, 2.0])
x = LocationProfile([0.0, 0.0, 0.6])

# Classic placements ignore q.  The median sits at 0 and pays 1.2.
print("TC at median 0:", total_cost(q, 0.0, x))
print("MC at midpoint 0.3:", max_cost(q, 0.3, x))

# With scaling the cheap middle wins on both objectives.
print("optimal TC:", optimal_tc(q, x))
print("optimal MC:", optimal_mc(q, x))
print("grid TC:   ", grid_optimum(q, x, "tc", 1e-4))

# The candidates are the agents plus the cheaper end of every piece of q.
print("TC candidates:", tc_candidates(q, x))

# Agents and local minima of q alone are not enough: here the best point is
# the kink at 0.5 even though q only has a local minimum at 0.
q2 = PiecewiseLinear.from_points([0.0, 0.5, 1.0], [1.0, 1.005, 6.005])
x2 = [0.0, 0.9, 0.9, 0.9]
print("local minima:", q2.local_minima(), " optimum:", optimal_tc(q2, x2))
for y in (0.0, 0.5, 0.9):
    print(f"  TC({y}) = {total_cost(q2, y, x2):.4f}")

# The cost curves are cheap to tabulate for plotting elsewhere.
ys = np.linspace(0, 1, 11)
for y, tc, mc in zip(ys, total_cost(q, ys, x), max_cost(q, ys, x)):
    print(f"{y:4.1f}  TC {tc:6.3f}  MC {mc:6.3f}")
