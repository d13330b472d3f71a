"""
Manipulating mechanisms
=======================

The falsifier tries every misreport on a fine grid plus the structural
points of the instance and returns the most profitable lie it finds.
"""

import numpy as np

from scaled_flp import (Dictator, OptimalTC, PiecewiseLinear,
                        find_sp_violation, make_phantom_defeater, median_mechanism,
                        phantom_mechanism)
from scaled_flp.families import random_condition_passing, random_phantoms, random_profile
from scaled_flp.reproduce import defeater_case2_instance

# The optimal total-cost placement is not strategyproof.
q = PiecewiseLinear.linear(-0.8, 1.0)
print(find_sp_violation(OptimalTC(), q, [0.3, 0.4, 0.7]))

# Neither is the median once q has a steep valley.
q = PiecewiseLinear.from_points([0.0, 0.5, 1.0], [6.0, 1.0, 6.0])
print(find_sp_violation(median_mechanism(), q, [0.5, 0.7, 0.9]))

# Any two distinct phantom positions can be beaten by a tailored q.
a1, a2 = 0.2, 0.7
phantoms, xs, liar, before, after = defeater_case2_instance(a1, a2, 4)
cert = find_sp_violation(phantom_mechanism(phantoms), make_phantom_defeater(a1, a2), xs)
print(f"liar at {cert.true_position:.3f} reports {cert.misreport:.3f}: "
      f"{cert.cost_before:.4f} -> {cert.cost_after:.4f}")

# A dictator can never be manipulated, whatever q looks like.
print(find_sp_violation(Dictator(1), q, [0.1, 0.6, 0.8]))

# Under the condition phantom mechanisms hold up.
rng = np.random.default_rng(0)
hits = 0
for _ in range(100):
    q = random_condition_passing(rng)
    x = random_profile(rng)
    hits += find_sp_violation(phantom_mechanism(random_phantoms(rng, x.n)), q, x) is not None
print("violations under the condition:", hits, "of 100")
