"""Facility location with a position-dependent scaling of agent costs."""
from .errors import DiscontinuityError, DomainError, NonPositiveError, ScalingError
from .instance import LocationProfile, agent_cost, max_cost, total_cost
from .mechanisms import (AllAt, ConstantPhantoms, Dictator, MedianPolicy, Midpoint,
                         OptimalMC, OptimalTC, PhantomMechanism, constant_mechanism,
                         median_mechanism, median_of_pool, phantom_mechanism, run)
from .optimal import Objective, OptimumResult, grid_optimum, optimal_mc, optimal_tc
from .scaling import (Exponential, PiecewiseLinear, ScalingFunction, SinglePeakedReport,
                      check_single_peaked_condition, check_single_peaked_exact,
                      local_minima, make_extremal_piecewise, make_phantom_defeater,
                      make_w_adversarial, range_ratio)
from .analysis import (DeviationCertificate, RatioReport, approx_ratio, find_sp_violation,
                       worst_ratio_search)
from .reproduce import reproduce

__version__ = "0.1.0"
