"""Total-power lower bounds: neighborhood -> iterations -> decoding power,
joint transmit-power optimization, and the stationarity diagnostic for the
large-neighborhood surrogate objective.
"""

import math
from dataclasses import dataclass, replace
from functools import partial

from .channel import (awgn_capacity, bsc_capacity, path_gain_weight,
                      qpsk_hard_decision_crossover, received_power,
                      thermal_noise_power)
from .converse import (AwgnBoundQuery, BscBoundQuery, awgn_pe_lower_bound,
                       bsc_pe_lower_bound, min_neighborhood)
from .errors import DomainError, InfeasibleError
from .infotheory import binary_entropy_inverse, q_function
from .parallel import parallel_map

LN2 = math.log(2.0)

CHANNEL_KINDS = ("bsc", "awgn")


@dataclass(frozen=True)
class DecoderTech:
    """Decoder implementation parameters.

    node_energy is the energy one processing element burns per iteration;
    max_degree the wiring fan-out limit; weight_decode the multiplier on
    decoding power in the total-power objective; decode_throughput defaults
    to the link data rate when left unset.
    """

    node_energy: float
    max_degree: int = 4
    weight_decode: float = 1.0
    decode_throughput: float | None = None

    def __post_init__(self):
        if self.node_energy <= 0.0:
            raise DomainError("per-node energy must be positive")
        if self.max_degree < 2:
            raise DomainError("processing-element degree must be at least 2")
        if self.weight_decode <= 0.0:
            raise DomainError("decode-power weight must be positive")

    def throughput(self, link):
        return self.decode_throughput if self.decode_throughput else link.data_rate


@dataclass(frozen=True)
class BoundPoint:
    """One evaluated operating point of the total-power lower bound."""

    target_pe: float
    transmit_power: float
    received_power: float
    path_gain_weight: float
    neighborhood: float
    iterations: float
    decode_power: float         # unweighted E_node * l * R_dec / R_ch
    total_power: float          # xi_T P_R + xi_D * decode_power
    gamma: float                # xi_D E_node R_dec / R_ch
    optimizer: float            # converse-optimal atypical channel parameter
    feasible: bool = True

    @classmethod
    def infeasible(cls, target_pe, transmit_power=math.nan):
        nan = math.nan
        return cls(target_pe, transmit_power, nan, nan, nan, nan, nan, nan,
                   nan, nan, feasible=False)


def iterations_lower_bound(n, zeta):
    """Fewest message-passing iterations that can reach n output nodes.

    Fan-out zeta from the root and zeta-1 afterwards gives
    n <= zeta((zeta-1)^l - 1)/(zeta-2) + 1; inverting (and the chain case
    n <= 2l + 1 for zeta = 2) yields the clamped logarithm below.
    """
    if n < 1.0:
        raise DomainError("neighborhood size must be at least 1")
    if zeta < 2:
        raise DomainError("degree must be at least 2")
    if zeta == 2:
        return max(0.0, (n - 1.0) / 2.0)
    arg = (zeta - 2.0) / zeta * n + 2.0 / zeta
    return max(0.0, math.log2(arg) / math.log2(zeta - 1.0))


def decoding_power_lower_bound(iterations, tech, spectral_rate, data_rate=None):
    """Decoding power E_node * l * R_dec / R_ch in watts (unweighted).

    One processing element per channel output, l iterations each, retired
    at R_dec information bits per second over 1/R_ch outputs per bit.
    """
    if iterations < 0.0:
        raise DomainError("iteration count must be nonnegative")
    r_dec = tech.decode_throughput if tech.decode_throughput else data_rate
    if r_dec is None:
        raise DomainError("decode throughput is unset and no data rate was given")
    return tech.node_energy * iterations * r_dec / spectral_rate


def _channel_state(p_t, link, env, channel_kind):
    """Received power, xi_T, and the converse query arguments at this P_T."""
    if channel_kind not in CHANNEL_KINDS:
        raise DomainError(f"unknown channel kind {channel_kind!r}")
    p_r = received_power(p_t, link.distance, env)
    xi_t = path_gain_weight(link.distance, env)
    r_ch = link.spectral_rate
    noise = thermal_noise_power(env)
    if channel_kind == "bsc":
        p = qpsk_hard_decision_crossover(p_r, env)
        feasible = bsc_capacity(min(p, 0.5)) > r_ch and p < 0.5
        return p_r, xi_t, dict(crossover=p, spectral_rate=r_ch), feasible
    snr = p_r / noise
    feasible = awgn_capacity(p_r, noise) > r_ch
    return p_r, xi_t, dict(snr=snr, spectral_rate=r_ch), feasible


def total_power_lower_bound(p_t, link, env, tech, channel_kind, n_hint=None):
    """Evaluate the total-power lower bound at a fixed transmit power."""
    if p_t <= 0.0:
        raise DomainError("transmit power must be positive")
    p_r, xi_t, args, feasible = _channel_state(p_t, link, env, channel_kind)
    if not feasible:
        raise InfeasibleError(
            "channel capacity does not exceed the spectral rate at this transmit power")
    n = min_neighborhood(channel_kind, link.target_pe, hint=n_hint, **args)
    iters = iterations_lower_bound(n, tech.max_degree)
    r_ch = link.spectral_rate
    p_d = decoding_power_lower_bound(iters, tech, r_ch, link.data_rate)
    gamma = tech.weight_decode * tech.node_energy * tech.throughput(link) / r_ch
    if channel_kind == "bsc":
        ev = bsc_pe_lower_bound(BscBoundQuery(args["crossover"], r_ch, n))
    else:
        noise = thermal_noise_power(env)
        ev = awgn_pe_lower_bound(AwgnBoundQuery(p_r, noise, r_ch, n))
    return BoundPoint(
        target_pe=link.target_pe,
        transmit_power=p_t,
        received_power=p_r,
        path_gain_weight=xi_t,
        neighborhood=n,
        iterations=iters,
        decode_power=p_d,
        total_power=xi_t * p_r + tech.weight_decode * p_d,
        gamma=gamma,
        optimizer=ev.optimizer,
        feasible=True,
    )


def shannon_limit_transmit_power(link, env, channel_kind):
    """Transmit power at which the channel capacity equals the spectral rate."""
    r_ch = link.spectral_rate
    if not 0.0 < r_ch < 1.0 and channel_kind == "bsc":
        raise InfeasibleError("BSC spectral rate must lie in (0, 1)")
    noise = thermal_noise_power(env)
    xi_t = path_gain_weight(link.distance, env)
    if channel_kind == "awgn":
        return xi_t * noise * (2.0 ** (2.0 * r_ch) - 1.0)
    p_star = binary_entropy_inverse(1.0 - r_ch)
    lo, hi = 0.0, 60.0
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        if q_function(mid) > p_star:
            lo = mid
        else:
            hi = mid
    s = 0.5 * (lo + hi)
    return xi_t * noise * s * s


def optimize_transmit_power(link, env, tech, channel_kind,
                            grid_points=512, span=1e6):
    """Minimize the total-power bound over transmit power.

    Logarithmic grid from just above the Shannon-limit power across `span`
    decades-worth of headroom, then golden-section refinement in log power.
    """
    p_sh = shannon_limit_transmit_power(link, env, channel_kind)
    lo = math.log(p_sh * (1.0 + 1e-6))
    hi = math.log(p_sh * span)
    step = (hi - lo) / (grid_points - 1)

    hint = None
    best_i, best = None, None
    points = {}
    for i in range(grid_points):
        pt = _eval_log_pt(lo + i * step, link, env, tech, channel_kind, hint)
        if pt is not None:
            hint = pt.neighborhood
            points[i] = pt
            if best is None or pt.total_power < best.total_power:
                best_i, best = i, pt
    if best is None:
        raise InfeasibleError("no feasible transmit power in the search bracket")

    a = lo + max(best_i - 1, 0) * step
    b = lo + min(best_i + 1, grid_points - 1) * step
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    pc = _eval_log_pt(c, link, env, tech, channel_kind, best.neighborhood)
    pd = _eval_log_pt(d, link, env, tech, channel_kind, best.neighborhood)
    fc = pc.total_power if pc else math.inf
    fd = pd.total_power if pd else math.inf
    for _ in range(48):
        if fc < fd:
            b, d, fd, pd = d, c, fc, pc
            c = b - invphi * (b - a)
            pc = _eval_log_pt(c, link, env, tech, channel_kind, best.neighborhood)
            fc = pc.total_power if pc else math.inf
        else:
            a, c, fc, pc = c, d, fd, pd
            d = a + invphi * (b - a)
            pd = _eval_log_pt(d, link, env, tech, channel_kind, best.neighborhood)
            fd = pd.total_power if pd else math.inf
    for cand in (pc, pd):
        if cand is not None and cand.total_power < best.total_power:
            best = cand
    return best


def _eval_log_pt(log_pt, link, env, tech, channel_kind, hint):
    try:
        return total_power_lower_bound(math.exp(log_pt), link, env, tech,
                                       channel_kind, n_hint=hint)
    except InfeasibleError:
        return None


def capacity_of_transmit_power(link, env, channel_kind):
    """Capacity (bits/use) as a function of transmit power, for diagnostics."""
    noise = thermal_noise_power(env)

    def capacity(p_t):
        p_r = received_power(p_t, link.distance, env)
        if channel_kind == "bsc":
            return bsc_capacity(qpsk_hard_decision_crossover(p_r, env))
        return awgn_capacity(p_r, noise)

    return capacity


def stationarity_residual(p_t, gamma, capacity_fn, r_ch, rel_step=1e-6):
    """Residual 1 - (2 gamma / ln 2) C'(P_T) / (C(P_T) - R) of the optimality
    condition for the large-neighborhood surrogate; zero at its minimizer.

    The derivative is a central finite difference with relative step
    `rel_step`, so one implementation serves both channel kinds.
    """
    cap = capacity_fn(p_t)
    if cap <= r_ch:
        raise InfeasibleError("capacity does not exceed the spectral rate")
    if gamma == 0.0:
        return 1.0
    h = p_t * rel_step
    dcap = (capacity_fn(p_t + h) - capacity_fn(p_t - h)) / (2.0 * h)
    return 1.0 - (2.0 * gamma / LN2) * dcap / (cap - r_ch)


def asymptotic_total_power_objective(gamma, capacity_fn, r_ch):
    """The large-neighborhood surrogate P_T - 2 gamma log2(C(P_T) - R).

    Its minimizer satisfies the stationarity condition checked by
    `stationarity_residual` exactly.
    """

    def objective(p_t):
        cap = capacity_fn(p_t)
        if cap <= r_ch:
            return math.inf
        return p_t - 2.0 * gamma * math.log2(cap - r_ch)

    return objective


def _waterslide_worker(pe, link, env, tech, channel_kind, grid_points):
    try:
        return optimize_transmit_power(
            replace(link, target_pe=pe), env, tech, channel_kind,
            grid_points=grid_points)
    except InfeasibleError:
        return BoundPoint.infeasible(pe)


def waterslide_sweep(pe_grid, link, env, tech, channel_kind,
                     grid_points=512, jobs=1):
    """Optimized BoundPoint per target error probability, in grid order.

    Infeasible rows are marked and the sweep continues.
    """
    for pe in pe_grid:
        if not 0.0 < pe < 0.5:
            raise DomainError("error-probability grid values must lie in (0, 1/2)")
    worker = partial(_waterslide_worker, link=link, env=env, tech=tech,
                     channel_kind=channel_kind, grid_points=grid_points)
    return parallel_map(worker, list(pe_grid), jobs)
