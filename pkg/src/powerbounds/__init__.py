"""powerbounds: fundamental limits on total (transmit + decoding) power for
communication links, the matching regular-LDPC achievability curve, and
interference-limited link densities on a triangular grid.
"""

from ._kernels import BACKEND
from .channel import (LinkSpec, RadioEnvironment, awgn_capacity, bsc_capacity,
                      path_gain_weight, qpsk_hard_decision_crossover,
                      received_power, thermal_noise_power)
from .converse import (AwgnBoundQuery, BoundEvaluation, BscBoundQuery,
                       asymptotic_neighborhood, awgn_pe_lower_bound,
                       bsc_pe_lower_bound, kl_curvature_floor,
                       min_neighborhood)
from .density import (DensityPoint, GridScenario, PracticalCode,
                      coded_max_density, grid_density, infinite_power_density,
                      interference_sum, optimal_code_density_upper_bound,
                      practical_code_density_curve, uncoded_max_density,
                      uncoded_pe)
from .errors import (ConfigError, ConvergenceError, DegenerateGeometryError,
                     DomainError, InfeasibleError, NoBracketError,
                     PowerBoundsError)
from .infotheory import (binary_entropy, binary_entropy_inverse, kl_bernoulli,
                         kl_gaussian_variance, q_function)
from .ldpc import (DeTrajectory, LdpcPoint, RegularEnsemble, de_threshold,
                   evolve, gallager_b_step, iterations_to_pe, ldpc_waterslide,
                   optimize_ldpc_transmit_power)
from .power import (BoundPoint, DecoderTech, asymptotic_total_power_objective,
                    capacity_of_transmit_power, decoding_power_lower_bound,
                    iterations_lower_bound, optimize_transmit_power,
                    shannon_limit_transmit_power, stationarity_residual,
                    total_power_lower_bound, waterslide_sweep)
from .solvers import SolverConfig, bisect_monotone, minimize_1d

__version__ = "0.1.0"
