"""
Approximation ratios
====================

How much worse than optimal is a strategyproof mechanism?  The answer is
governed by ``r_q``, the spread of the scaling function.
"""

from scaled_flp import (Dictator, PiecewiseLinear, approx_ratio,
                        constant_mechanism, make_w_adversarial, median_mechanism,
                        range_ratio, worst_ratio_search)
from scaled_flp.families import condition_family

# On the W instance the median is off by exactly r_q (TC) and 2 r_q (MC).
w = make_w_adversarial(2.0, 1.0)
x = [0.0, 0.0, 0.5, 0.5]
for obj in ("tc", "mc"):
    r = approx_ratio(median_mechanism(), w, x, obj)
    print(f"median {obj}: ratio {r.ratio:g}  (r_q = {range_ratio(w):g})")

# A dictator at the odd one out costs (n-1) r_q on total cost.
q = PiecewiseLinear.from_points([0.0, 0.5, 1.0], [2.0, 0.5, 0.5])
print("dictator tc:", approx_ratio(Dictator(0), q, [0.0, 0.5, 0.5], "tc").ratio)

# Phantoms strictly inside the line can be arbitrarily bad.
print(approx_ratio(constant_mechanism(0.5), q, [1.0, 1.0, 1.0], "tc").to_dict())

# An empirical worst case over random condition-passing instances.
top = worst_ratio_search(median_mechanism(), condition_family(4, 8), 500, "tc", seed=1)
print(f"worst median TC ratio over 500 samples: {top.ratio:.4f} (bound (5/4)^4 = {1.25 ** 4})")
