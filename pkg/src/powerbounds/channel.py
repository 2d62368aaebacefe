"""Physical-layer models: path loss, thermal noise, channel capacities, and
the hard-decision QPSK-induced binary symmetric channel.

Channel-use accounting: QPSK at complex-symbol rate W yields 2W binary uses
per second, so the spectral rate is R_data/(2W) bits per binary use; the
Gaussian path counts real-dimension uses, also 2W per second, with the
half-log capacity.  Both paths share the same spectral rate.
"""

import math
from dataclasses import dataclass, field

from .errors import DomainError
from .infotheory import binary_entropy, q_function

SPEED_OF_LIGHT = 3.0e8          # m/s
BOLTZMANN = 1.380649e-23        # J/K


@dataclass(frozen=True)
class RadioEnvironment:
    """Carrier, bandwidth, propagation, and thermal-noise parameters."""

    carrier_frequency: float            # Hz
    bandwidth: float                    # Hz
    path_loss_exponent: float
    temperature: float = 300.0          # K
    boltzmann_constant: float = field(default=BOLTZMANN, init=False)

    def __post_init__(self):
        if self.carrier_frequency <= 0.0 or self.bandwidth <= 0.0:
            raise DomainError("carrier frequency and bandwidth must be positive")
        if self.temperature <= 0.0:
            raise DomainError("temperature must be positive")
        if self.path_loss_exponent <= 2.0:
            raise DomainError(
                "path-loss exponent must exceed 2 (interference sums diverge otherwise)")

    @property
    def wavelength(self):
        return SPEED_OF_LIGHT / self.carrier_frequency


@dataclass(frozen=True)
class LinkSpec:
    """A point-to-point link: geometry, throughput, and error-rate target."""

    distance: float                     # m
    data_rate: float                    # bits/s
    target_pe: float
    bandwidth: float                    # Hz, for the spectral-rate accounting

    def __post_init__(self):
        if self.distance <= 0.0:
            raise DomainError("link distance must be positive")
        if self.data_rate <= 0.0:
            raise DomainError("data rate must be positive")
        if not 0.0 < self.target_pe < 0.5:
            raise DomainError("target bit-error probability must lie in (0, 1/2)")
        if self.bandwidth <= 0.0:
            raise DomainError("bandwidth must be positive")

    @property
    def spectral_rate(self):
        """Bits per (binary or real-dimension) channel use: R_data / 2W."""
        return self.data_rate / (2.0 * self.bandwidth)


def received_power(p_t, x, env):
    """Received power min{P_T, P_T (lambda/x)^alpha} at distance x meters."""
    if p_t < 0.0:
        raise DomainError("transmit power must be nonnegative")
    if x <= 0.0:
        raise DomainError("distance must be positive")
    lam = env.wavelength
    return min(p_t, p_t * (lam / x) ** env.path_loss_exponent)


def path_gain_weight(x, env):
    """xi_T = max{1, (x/lambda)^alpha}, so that P_T = xi_T * P_R exactly."""
    if x <= 0.0:
        raise DomainError("distance must be positive")
    return max(1.0, (x / env.wavelength) ** env.path_loss_exponent)


def thermal_noise_power(env, sub_bands=1):
    """Thermal noise power k T W / B in one of B equal sub-bands."""
    if sub_bands < 1:
        raise DomainError("sub-band count must be at least 1")
    return env.boltzmann_constant * env.temperature * env.bandwidth / sub_bands


def awgn_capacity(p_r, noise_variance):
    """Gaussian capacity (1/2) log2(1 + P_R / sigma^2), bits per real use."""
    if noise_variance <= 0.0:
        raise DomainError("noise variance must be strictly positive")
    if p_r < 0.0:
        raise DomainError("received power must be nonnegative")
    return 0.5 * math.log2(1.0 + p_r / noise_variance)


def bsc_capacity(p):
    """BSC capacity 1 - h(p), bits per binary use, for crossover p <= 1/2."""
    if not 0.0 <= p <= 0.5:
        raise DomainError("crossover probability must lie in [0, 1/2]")
    return 1.0 - binary_entropy(p)


def qpsk_hard_decision_crossover(p_r, env, sub_bands=1):
    """Per-rail crossover Q(sqrt(P_R / (kTW/B))) of the hard-decision BSC pair.

    Each QPSK rail carries half the symbol energy against half the noise,
    so the per-rail SNR equals the aggregate P_R/(kTW/B).
    """
    if p_r < 0.0:
        raise DomainError("received power must be nonnegative")
    noise = thermal_noise_power(env, sub_bands)
    return q_function(math.sqrt(p_r / noise))
