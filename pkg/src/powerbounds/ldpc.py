"""Regular-LDPC achievability over the hard-decision BSC: Gallager-B density
evolution, its convergence threshold, iteration counts to a target error
probability, and the achieved total power with integer iterations.

The infinite-blocklength idealization is used throughout (no error floors);
trajectories switch to a log-domain recursion once the message error drops
below 1e-8, which tracks the decay without underflow to arbitrarily small
targets.
"""

import math
from dataclasses import dataclass, replace
from functools import partial

from . import _kernels
from .channel import (path_gain_weight, qpsk_hard_decision_crossover,
                      received_power, thermal_noise_power)
from .errors import DomainError, InfeasibleError
from .infotheory import q_function
from .parallel import parallel_map

DEFAULT_ITERATION_CAP = 1_000_000
SWEEP_ITERATION_CAP = 50_000


@dataclass(frozen=True)
class RegularEnsemble:
    """A (dv, dc)-regular LDPC ensemble; dv >= 3 keeps the decay fast."""

    variable_degree: int
    check_degree: int

    def __post_init__(self):
        if self.variable_degree < 3:
            raise DomainError("variable degree must be at least 3")
        if self.check_degree <= self.variable_degree:
            raise DomainError("check degree must exceed the variable degree")

    @property
    def design_rate(self):
        return 1.0 - self.variable_degree / self.check_degree

    @property
    def nodes_per_output(self):
        """PEs per channel output: one variable node plus dv/dc check nodes."""
        return 1.0 + self.variable_degree / self.check_degree


@dataclass(frozen=True)
class DeTrajectory:
    """A density-evolution run: the message-error sequence and its verdict."""

    channel_crossover: float
    message_error_sequence: list
    converged: bool
    iterations_to_target: int | None


def gallager_b_step(x, p0, ens):
    """One density-evolution update of the message error probability.

    Check messages are XORs; variable nodes flip the channel bit when a
    strict majority of the dv-1 incoming check messages contradicts it
    (for dv = 3 both incoming messages must).
    """
    if not 0.0 <= x <= 0.5 or not 0.0 <= p0 <= 0.5:
        raise DomainError("message and channel error probabilities must lie in [0, 1/2]")
    return _kernels.gallager_b_step(x, p0, ens.variable_degree, ens.check_degree)


def evolve(p0, ens, max_iter=1000, target_pe=None):
    """Iterate density evolution from x0 = p0, recording the trajectory."""
    seq = [p0]
    x = p0
    hit = None
    if target_pe is not None and p0 <= target_pe:
        hit = 0
    for it in range(1, max_iter + 1):
        x = _kernels.gallager_b_step(x, p0, ens.variable_degree, ens.check_degree)
        seq.append(x)
        if hit is None and target_pe is not None and x <= target_pe:
            hit = it
        if x < 1e-15:
            break
    converged = seq[-1] < 1e-12
    return DeTrajectory(p0, seq, converged, hit)


def de_threshold(ens, tol=1e-6, max_iter=DEFAULT_ITERATION_CAP):
    """Largest channel crossover from which density evolution dies out,
    located by bisection to `tol`."""
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _kernels.gallager_b_limit(mid, ens.variable_degree,
                                     ens.check_degree, max_iter) == 0.0:
            lo = mid
        else:
            hi = mid
    return lo


def iterations_to_pe(p0, target_pe, ens, max_iter=DEFAULT_ITERATION_CAP):
    """Smallest iteration count driving the message error to target_pe."""
    if not 0.0 <= p0 <= 0.5:
        raise DomainError("channel crossover must lie in [0, 1/2]")
    if not 0.0 < target_pe < 1.0:
        raise DomainError("target error probability must lie in (0, 1)")
    if p0 <= target_pe:
        return 0
    count = _kernels.gallager_b_iterations(
        p0, math.log2(target_pe), ens.variable_degree, ens.check_degree, max_iter)
    if count < 0:
        raise InfeasibleError(
            f"crossover {p0:g} is at or above the decoding threshold "
            f"(no convergence within {max_iter} iterations)")
    return count


@dataclass(frozen=True)
class LdpcPoint:
    """One achieved operating point of the regular-LDPC waterslide."""

    target_pe: float
    transmit_power: float
    received_power: float
    crossover: float
    iterations: int
    decode_power: float
    total_power: float
    feasible: bool = True

    @classmethod
    def infeasible(cls, target_pe):
        nan = math.nan
        return cls(target_pe, nan, nan, nan, -1, nan, nan, feasible=False)


def _decode_power(iterations, tech, link, ens):
    """Achieved decoding power: variable plus check PEs per channel output."""
    r_dec = tech.throughput(link)
    return (tech.node_energy * iterations * r_dec / link.spectral_rate
            * ens.nodes_per_output)


def threshold_transmit_power(link, env, ens, threshold=None):
    """Transmit power at which the hard-decision crossover hits the decoding
    threshold; below it the ensemble cannot converge at all."""
    p_th = de_threshold(ens) if threshold is None else threshold
    noise = thermal_noise_power(env)
    xi_t = path_gain_weight(link.distance, env)
    lo, hi = 0.0, 60.0
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        if q_function(mid) > p_th:
            lo = mid
        else:
            hi = mid
    s = 0.5 * (lo + hi)
    return xi_t * noise * s * s


def achieved_total_power(p_t, pe, link, env, tech, ens,
                         max_iter=SWEEP_ITERATION_CAP):
    """Achieved LDPC operating point at a fixed transmit power."""
    p_r = received_power(p_t, link.distance, env)
    xi_t = path_gain_weight(link.distance, env)
    p0 = qpsk_hard_decision_crossover(p_r, env)
    iters = iterations_to_pe(p0, pe, ens, max_iter=max_iter)
    p_d = _decode_power(iters, tech, link, ens)
    return LdpcPoint(
        target_pe=pe,
        transmit_power=p_t,
        received_power=p_r,
        crossover=p0,
        iterations=iters,
        decode_power=p_d,
        total_power=xi_t * p_r + tech.weight_decode * p_d,
        feasible=True,
    )


def optimize_ldpc_transmit_power(pe, link, env, tech, ens, threshold=None,
                                 grid_points=512, span=1e6):
    """Minimize achieved total power over P_T with integer iterations.

    Within one iteration plateau the objective grows linearly in P_T, so
    the optimum sits at a plateau's left edge; a log grid locates the best
    plateau and bisection pins the edges of the neighboring ones.
    """
    if not 0.0 < pe < 0.5:
        raise DomainError("target error probability must lie in (0, 1/2)")
    p_floor = threshold_transmit_power(link, env, ens, threshold)
    lo = math.log(p_floor * (1.0 + 1e-6))
    hi = math.log(p_floor * span)
    step = (hi - lo) / (grid_points - 1)

    def level(log_pt):
        p0 = qpsk_hard_decision_crossover(
            received_power(math.exp(log_pt), link.distance, env), env)
        try:
            return iterations_to_pe(p0, pe, ens, max_iter=SWEEP_ITERATION_CAP)
        except InfeasibleError:
            return None

    best = None
    levels = []
    for i in range(grid_points):
        l_i = level(lo + i * step)
        levels.append(l_i)
        if l_i is None:
            continue
        point = achieved_total_power(math.exp(lo + i * step), pe, link, env,
                                     tech, ens)
        if best is None or point.total_power < best.total_power:
            best = point
    if best is None:
        return LdpcPoint.infeasible(pe)

    # Refine: bisect the left edge of each nearby iteration plateau.
    for target_level in range(max(0, best.iterations - 3), best.iterations + 4):
        a, b = lo, None
        for i, l_i in enumerate(levels):
            if l_i is not None and l_i <= target_level:
                b = lo + i * step
                break
            a = lo + i * step
        if b is None:
            continue
        for _ in range(64):
            mid = 0.5 * (a + b)
            l_mid = level(mid)
            if l_mid is not None and l_mid <= target_level:
                b = mid
            else:
                a = mid
        point = achieved_total_power(math.exp(b), pe, link, env, tech, ens)
        if point.total_power < best.total_power:
            best = point
    return best


def _ldpc_worker(pe, link, env, tech, ens, threshold, grid_points):
    try:
        return optimize_ldpc_transmit_power(
            pe, replace(link, target_pe=pe), env, tech, ens,
            threshold=threshold, grid_points=grid_points)
    except InfeasibleError:
        return LdpcPoint.infeasible(pe)


def ldpc_waterslide(pe_grid, link, env, tech, ens, grid_points=512, jobs=1):
    """Achieved LDPC waterslide: one optimized point per target error rate."""
    if abs(ens.design_rate - link.spectral_rate) > 1e-9:
        raise DomainError(
            f"ensemble design rate {ens.design_rate:g} does not match the "
            f"link spectral rate {link.spectral_rate:g}")
    threshold = de_threshold(ens)
    worker = partial(_ldpc_worker, link=link, env=env, tech=tech, ens=ens,
                     threshold=threshold, grid_points=grid_points)
    return parallel_map(worker, list(pe_grid), jobs)
