"""Neighborhood-size converses: sphere-packing lower bounds on bit-error
probability given the largest decoding neighborhood, their inversion to a
minimum required neighborhood, and the large-neighborhood approximations.

Both bounds are optimized in log domain (the raw objective underflows far
below Pe ~ 1e-300), and both are strictly decreasing in the neighborhood
size, which makes the inversion a clean bisection.
"""

import math
import threading
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .channel import awgn_capacity, bsc_capacity
from .errors import DomainError, InfeasibleError
from .infotheory import binary_entropy_inverse, kl_gaussian_variance

LN2 = math.log(2.0)

# Curvature-floor cache: 4096 nodes, log-spaced in g, interpolated linearly
# in ln g.  Built once per process, guarded for concurrent first use.
_KTABLE_SIZE = 4096
_KTABLE_RANGE = (1e-6, 0.5)
_ktable_lock = threading.Lock()
_ktable = None


def kl_curvature_floor(g):
    """inf over eta in (0, 1-g) of D(g+eta||g)/eta^2, in bits.

    The positive floor governing how fast tail exponents accumulate away
    from crossover g.
    """
    if not 0.0 < g < 1.0:
        raise DomainError("crossover must lie strictly inside (0, 1)")
    return _kernels.kl_curvature_floor(g)


def _curvature_table():
    global _ktable
    if _ktable is None:
        with _ktable_lock:
            if _ktable is None:
                grid = np.geomspace(*_KTABLE_RANGE, _KTABLE_SIZE)
                vals = np.array([_kernels.kl_curvature_floor(g) for g in grid])
                _ktable = (np.log(grid), vals)
    return _ktable


@dataclass(frozen=True)
class BscBoundQuery:
    """Inputs of the BSC converse: crossover, spectral rate, neighborhood."""

    crossover: float
    spectral_rate: float
    neighborhood: float

    def __post_init__(self):
        if not 0.0 <= self.crossover < 0.5:
            raise DomainError("crossover must lie in [0, 1/2)")
        if not 0.0 < self.spectral_rate < 1.0:
            raise DomainError("spectral rate must lie in (0, 1) bits per use")
        if self.neighborhood < 1.0:
            raise DomainError("neighborhood size must be at least 1")
        if bsc_capacity(self.crossover) <= self.spectral_rate:
            raise InfeasibleError(
                f"BSC capacity {bsc_capacity(self.crossover):.6f} does not exceed "
                f"the spectral rate {self.spectral_rate:.6f}")


@dataclass(frozen=True)
class AwgnBoundQuery:
    """Inputs of the AWGN converse: received power, noise, rate, neighborhood."""

    received_power: float
    noise_variance: float
    spectral_rate: float
    neighborhood: float

    def __post_init__(self):
        if self.received_power <= 0.0 or self.noise_variance <= 0.0:
            raise DomainError("received power and noise variance must be positive")
        if self.spectral_rate <= 0.0:
            raise DomainError("spectral rate must be positive")
        if self.neighborhood < 1.0:
            raise DomainError("neighborhood size must be at least 1")
        if awgn_capacity(self.received_power, self.noise_variance) <= self.spectral_rate:
            raise InfeasibleError("AWGN capacity does not exceed the spectral rate")

    @property
    def snr(self):
        return self.received_power / self.noise_variance


@dataclass(frozen=True)
class BoundEvaluation:
    """One evaluated converse point.

    optimizer is the maximizing atypical parameter (crossover g for the BSC,
    absolute atypical noise variance for the AWGN channel); delta the rate
    deficit 1 - C/R at the optimizer; divergence D(optimizer||channel) in
    bits (BSC) or nats (AWGN).  log2_pe stays finite when the linear value
    underflows.
    """

    pe_lower_bound: float
    optimizer: float
    delta: float
    divergence: float
    log2_pe: float


def bsc_pe_lower_bound(query):
    """Largest error probability forced by a neighborhood of size n on a BSC.

    Supremum over atypical crossovers g of
        (h^-1(delta)/2) * 2^(-n D(g||p)) * (p(1-g)/(g(1-p)))^(eps sqrt(n)),
    delta = 1 - C(g)/R and eps = sqrt(log2(2/h^-1(delta)) / K(g)).
    """
    k_log_grid, k_vals = _curvature_table()
    log2_pe, g_opt = _kernels.bsc_converse_log2(
        query.crossover, query.spectral_rate, query.neighborhood,
        k_log_grid, k_vals)
    delta = 1.0 - bsc_capacity(g_opt) / query.spectral_rate
    return BoundEvaluation(
        pe_lower_bound=2.0 ** log2_pe if log2_pe > -1073.0 else 0.0,
        optimizer=g_opt,
        delta=delta,
        divergence=_kernels.kl_bernoulli_bits(g_opt, query.crossover),
        log2_pe=log2_pe,
    )


def awgn_pe_lower_bound(query):
    """Largest error probability forced by a neighborhood of size n on AWGN.

    Supremum over atypical noise variances above the capacity-matching one of
        (h^-1(delta)/2) * exp(-n D - sqrt(n) (3/2 + 2 ln(2/h^-1(delta))) (t-1)),
    t the noise ratio and D the Gaussian variance divergence in nats.
    """
    ln_pe, t_opt = _kernels.awgn_converse_ln(
        query.snr, query.spectral_rate, query.neighborhood)
    sigma_g_sq = t_opt * query.noise_variance
    delta = 1.0 - awgn_capacity(query.received_power, sigma_g_sq) / query.spectral_rate
    log2_pe = ln_pe / LN2
    return BoundEvaluation(
        pe_lower_bound=math.exp(ln_pe) if ln_pe > -744.0 else 0.0,
        optimizer=sigma_g_sq,
        delta=delta,
        divergence=kl_gaussian_variance(sigma_g_sq, query.noise_variance),
        log2_pe=log2_pe,
    )


def _bound_log2_at(kind, n, *, crossover=None, snr=None, spectral_rate=None):
    if kind == "bsc":
        k_log_grid, k_vals = _curvature_table()
        return _kernels.bsc_converse_log2(crossover, spectral_rate, n,
                                          k_log_grid, k_vals)[0]
    ln_pe, _ = _kernels.awgn_converse_ln(snr, spectral_rate, n)
    return ln_pe / LN2


def min_neighborhood(kind, target_pe, *, crossover=None, snr=None,
                     spectral_rate=None, rel_tol=1e-6, hint=None):
    """Smallest (real-valued) neighborhood whose converse meets target_pe.

    Valid because the bounds are monotone decreasing in n; the returned
    value is the feasible end of the final bisection interval, so the bound
    at the result is at or below the target.  Returns 1.0 when a single
    node already suffices.
    """
    if kind not in ("bsc", "awgn"):
        raise DomainError(f"unknown channel kind {kind!r}")
    if not 0.0 < target_pe < 0.5:
        raise DomainError("target error probability must lie in (0, 1/2)")
    _check_feasible(kind, crossover=crossover, snr=snr, spectral_rate=spectral_rate)
    args = dict(crossover=crossover, snr=snr, spectral_rate=spectral_rate)
    log2_target = math.log2(target_pe)
    if _bound_log2_at(kind, 1.0, **args) <= log2_target:
        return 1.0

    lo, hi = 1.0, 2.0
    if hint is not None and hint > 2.0:
        lo_c, hi_c = hint / 2.0, hint * 2.0
        if _bound_log2_at(kind, hi_c, **args) <= log2_target:
            if _bound_log2_at(kind, lo_c, **args) > log2_target:
                lo, hi = lo_c, hi_c
            else:
                hi = lo_c    # hint bracket too high; bisect down from it
        else:
            lo = hi_c        # hint bracket too low; keep doubling from it
    if lo >= hi:
        hi = lo * 2.0
    while _bound_log2_at(kind, hi, **args) > log2_target:
        lo = hi
        hi *= 2.0
        if hi > 1e18:
            raise InfeasibleError("neighborhood bound did not reach the target")
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if _bound_log2_at(kind, mid, **args) > log2_target:
            lo = mid
        else:
            hi = mid
    return hi


def _check_feasible(kind, *, crossover=None, snr=None, spectral_rate=None):
    if kind == "bsc":
        if bsc_capacity(crossover) <= spectral_rate:
            raise InfeasibleError("BSC capacity does not exceed the spectral rate")
    else:
        if 0.5 * math.log2(1.0 + snr) <= spectral_rate:
            raise InfeasibleError("AWGN capacity does not exceed the spectral rate")


def asymptotic_neighborhood(kind, target_pe, *, crossover=None, snr=None,
                            spectral_rate=None):
    """Leading-order neighborhood requirement as the target vanishes.

    AWGN: ln(1/pe) / D(sigma*^2||sigma0^2) with the capacity-matching
    atypical variance; BSC: log2(1/pe) / D(g*||p) likewise.
    """
    if not 0.0 < target_pe <= 1.0:
        raise DomainError("target error probability must lie in (0, 1]")
    _check_feasible(kind, crossover=crossover, snr=snr, spectral_rate=spectral_rate)
    if kind == "bsc":
        g_star = binary_entropy_inverse(1.0 - spectral_rate)
        div = _kernels.kl_bernoulli_bits(g_star, crossover)
        if math.isinf(div):
            return 0.0
        return math.log2(1.0 / target_pe) / div
    t_star = snr / (2.0 ** (2.0 * spectral_rate) - 1.0)
    div = kl_gaussian_variance(t_star, 1.0)
    return math.log(1.0 / target_pe) / div
