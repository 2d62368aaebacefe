"""Scalar information measures: binary entropy and its inverse, Bernoulli and
Gaussian-variance divergences, and the Gaussian tail function.

Entropies and Bernoulli divergences are in bits; the variance divergence is
in nats, matching the exponential form it feeds.
"""

import math

from . import _kernels
from .errors import DomainError


def binary_entropy(p):
    """Entropy of a Bernoulli(p) source in bits, with 0 log 0 = 0."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability {p!r} outside [0, 1]")
    return _kernels.binary_entropy(p)


def binary_entropy_inverse(h):
    """The unique p in [0, 1/2] with binary_entropy(p) = h."""
    if not 0.0 <= h <= 1.0:
        raise DomainError(f"entropy {h!r} outside [0, 1]")
    return _kernels.binary_entropy_inverse(h)


def kl_bernoulli(g, p):
    """D(g || p) = g log2(g/p) + (1-g) log2((1-g)/(1-p)), in bits."""
    if not 0.0 <= g <= 1.0 or not 0.0 <= p <= 1.0:
        raise DomainError("KL arguments must be probabilities")
    val = _kernels.kl_bernoulli_bits(g, p)
    if math.isinf(val):
        raise DomainError(
            f"D({g!r}||{p!r}) is infinite: support mismatch against a point mass")
    return val


def kl_gaussian_variance(sigma_g_sq, sigma_0_sq):
    """D(sigma_G^2 || sigma_0^2) = (t - 1 - ln t)/2 in nats, t the variance ratio."""
    if sigma_g_sq <= 0.0 or sigma_0_sq <= 0.0:
        raise DomainError("variances must be strictly positive")
    t = sigma_g_sq / sigma_0_sq
    return 0.5 * (t - 1.0 - math.log(t))


def q_function(x):
    """Gaussian tail probability Q(x), via the complementary error function."""
    return _kernels.q_function(x)
