"""One-dimensional solvers: bracketed bisection and grid-seeded golden section.

These are the generic drivers used wherever an operation's own fused kernel
does not apply.  All solvers are pure functions of their arguments.
"""

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError, NoBracketError

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances shared by the 1-D solvers.

    abs_tol is an absolute tolerance on the solution coordinate, rel_tol a
    relative one; an interval is accepted when it is smaller than either.
    grid_points sets the coarse scan used to seed golden-section refinement.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_iterations: int = 200
    grid_points: int = 256

    def __post_init__(self):
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise DomainError("solver tolerances must be strictly positive")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be at least 1")
        if self.grid_points < 3:
            raise DomainError("grid_points must be at least 3")


DEFAULT_SOLVER = SolverConfig()


def _interval_small(lo, hi, cfg):
    width = hi - lo
    return width <= cfg.abs_tol or width <= cfg.rel_tol * max(abs(lo), abs(hi))


def bisect_monotone(f, target, lo, hi, cfg=DEFAULT_SOLVER):
    """Solve f(x) = target for monotone f on [lo, hi] by bisection.

    The endpoint values must straddle the target.  Returns the midpoint of
    the final interval, whose width is below the configured tolerance.
    """
    if not lo < hi:
        raise DomainError("bracket must satisfy lo < hi")
    f_lo = f(lo) - target
    f_hi = f(hi) - target
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise NoBracketError(
            f"f(bracket) does not straddle target: f(lo)-t={f_lo:g}, f(hi)-t={f_hi:g}")
    increasing = f_hi > 0.0
    for _ in range(cfg.max_iterations):
        mid = 0.5 * (lo + hi)
        val = f(mid) - target
        if (val > 0.0) == increasing:
            hi = mid
        else:
            lo = mid
        if _interval_small(lo, hi, cfg):
            return 0.5 * (lo + hi)
    raise ConvergenceError("bisection failed to converge within max_iterations")


def minimize_1d(f, lo, hi, cfg=DEFAULT_SOLVER):
    """Minimize f on [lo, hi]: coarse grid scan, then golden-section refine.

    The grid resolves separated basins; golden section then contracts around
    the best grid point.  Returns (argmin, min).
    """
    if not lo < hi:
        raise DomainError("bracket must satisfy lo < hi")
    n = cfg.grid_points
    step = (hi - lo) / (n - 1)
    best_i, best_v = 0, math.inf
    for i in range(n):
        v = f(lo + i * step)
        if v < best_v:
            best_i, best_v = i, v
    a = lo + max(best_i - 1, 0) * step
    b = lo + min(best_i + 1, n - 1) * step
    x, v = _golden_section(f, a, b, cfg)
    if best_v < v:
        return lo + best_i * step, best_v
    return x, v


def _golden_section(f, a, b, cfg):
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(cfg.max_iterations):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        if _interval_small(a, b, cfg):
            break
    if fc < fd:
        return c, fc
    return d, fd
