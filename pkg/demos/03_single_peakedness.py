"""
When are preferences single-peaked?
===================================

An agent at ``x`` prefers facilities closer to itself only if ``q`` does not
change too fast.  ``q - |q'| >= 0`` is enough.  It is not necessary: the
exact test only has to protect agents at the ends of the line.
"""

import numpy as np

from scaled_flp import (PiecewiseLinear, agent_cost, check_single_peaked_condition,
                        check_single_peaked_exact)
from scaled_flp.analysis import utility_single_peaked

# q = y + 0.01 grows so fast that an agent at 0.5 prefers the facility at 0
# over one close by.
q = PiecewiseLinear.linear(1.0, 0.01)
for y in (0.0, 0.25, 0.45, 0.5):
    print(f"cost for agent at 0.5 with facility at {y}: {agent_cost(q, y, 0.5):.4f}")
print(check_single_peaked_condition(q).to_dict())

# Flat then rising with slope 1.5: the condition fails on the right piece,
# but no agent in [0, 1] is hurt, and the exact test agrees.
q = PiecewiseLinear.from_points([0.0, 0.5, 1.0], [1.0, 1.0, 1.75])
print("condition:", check_single_peaked_condition(q).satisfied,
      " exact:", check_single_peaked_exact(q).satisfied,
      " sampled:", all(utility_single_peaked(q, xi) for xi in np.linspace(0, 1, 51)))
