"""
Scaling functions
=================

A scaling function ``q`` says how costly distance is near each facility
position.  Here we build a few, look at their range ratio ``r_q`` and check
the single-peakedness condition ``q - |q'| >= 0``.
"""

import numpy as np

from scaled_flp import (Exponential, PiecewiseLinear, check_single_peaked_condition,
                        make_extremal_piecewise, make_w_adversarial, range_ratio)

# The V-shaped function from the introduction: cheap in the middle.
q = PiecewiseLinear.from_points([0.0, 0.5, 1.0], [2.0, 0.5, 2.0])
ys = np.linspace(0, 1, 5)
print("q on", ys, "->", q(ys))
print("r_q =", range_ratio(q), " local minima:", q.local_minima())

# Steep slopes break the condition and the report says where.
print(check_single_peaked_condition(q).to_dict())

# q = e^y sits exactly on the boundary of the condition.
e = Exponential(1, 1.0)
print("e^y:", check_single_peaked_condition(e).to_dict(), " r_q =", range_ratio(e))

# The steepest piecewise-linear function with k pieces that still passes.
for k in (1, 2, 4, 8, 64):
    qk = make_extremal_piecewise(k)
    print(f"k={k:3d}  r_q={range_ratio(qk):.6f}  (1+1/k)^k={(1 + 1 / k) ** k:.6f}")

# The W-shaped function used for lower bounds.
w = make_w_adversarial(2.0, 1.0)
print("W knots", w.knots, "values", w.values, "r_q", range_ratio(w))

# Scaling functions round-trip through JSON, which is what the CLI reads.
print(q.to_json())
