"""Kernel backend selection: compiled extension if available, NumPy otherwise.

Set POWERBOUNDS_PURE_PYTHON=1 to force the fallback (used by the benchmark
and the backend-parity tests).
"""

import os

if os.environ.get("POWERBOUNDS_PURE_PYTHON") == "1":
    from . import _pure as _impl
    BACKEND = "pure"
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        from . import _pure as _impl
        BACKEND = "pure"

binary_entropy = _impl.binary_entropy
binary_entropy_inverse = _impl.binary_entropy_inverse
kl_bernoulli_bits = _impl.kl_bernoulli_bits
kl_bernoulli_shift_bits = _impl.kl_bernoulli_shift_bits
q_function = _impl.q_function
kl_curvature_floor = _impl.kl_curvature_floor
bsc_converse_log2 = _impl.bsc_converse_log2
awgn_converse_ln = _impl.awgn_converse_ln
gallager_b_step = _impl.gallager_b_step
gallager_b_iterations = _impl.gallager_b_iterations
gallager_b_limit = _impl.gallager_b_limit
interference_disk_sum = _impl.interference_disk_sum

__all__ = [
    "BACKEND",
    "binary_entropy",
    "binary_entropy_inverse",
    "kl_bernoulli_bits",
    "kl_bernoulli_shift_bits",
    "q_function",
    "kl_curvature_floor",
    "bsc_converse_log2",
    "awgn_converse_ln",
    "gallager_b_step",
    "gallager_b_iterations",
    "gallager_b_limit",
    "interference_disk_sum",
]
