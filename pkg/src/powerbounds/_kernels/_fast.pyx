# cython: language_level=3
"""Compiled implementations of the hot kernels.

Mirrors `_pure.py` function for function, with the same algorithmic
constants (grid sizes, bisection/golden iteration counts), so results agree
with the fallback to floating-point noise.
"""

from libc.math cimport (ceil, cos, erfc, exp, expm1, fabs, floor, log,
                        log1p, log2, sin, sqrt)

import numpy as np

cdef double LN2 = log(2.0)
cdef double INVPHI = (sqrt(5.0) - 1.0) / 2.0

cdef int BISECT_ITERS = 64
cdef int GOLDEN_ITERS = 64
cdef int CONVERSE_GRID = 256
cdef int CURVATURE_GRID = 1024

cdef double NEG_INF = float("-inf")


# ---------------------------------------------------------------------------
# scalar information measures
# ---------------------------------------------------------------------------

cdef double _entropy(double p) noexcept nogil:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * log2(p) + (1.0 - p) * log2(1.0 - p))


cdef double _entropy_inverse(double h) noexcept nogil:
    cdef double lo = 0.0, hi = 0.5, mid
    cdef int i
    if h >= 1.0:
        return 0.5
    if h <= 0.0:
        return 0.0
    for i in range(BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if _entropy(mid) < h:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


cdef double _kl_bits(double g, double p) noexcept nogil:
    # log differences rather than log-of-ratio: subnormal p cannot overflow
    cdef double total = 0.0
    if g == p:
        return 0.0
    if g > 0.0:
        total += g * (log2(g) - log2(p))
    if g < 1.0:
        total += (1.0 - g) * (log2(1.0 - g) - log2(1.0 - p))
    return total


cdef double _kl_shift_bits(double g, double eta) noexcept nogil:
    return ((g + eta) * log1p(eta / g)
            + (1.0 - g - eta) * log1p(-eta / (1.0 - g))) / LN2


def binary_entropy(double p):
    """h(p) = -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0."""
    return _entropy(p)


def binary_entropy_inverse(double h):
    """The p in [0, 1/2] with binary_entropy(p) = h, by bisection."""
    return _entropy_inverse(h)


def kl_bernoulli_bits(double g, double p):
    """D(g||p) in bits; +inf when the divergence is infinite."""
    if g == p:
        return 0.0
    if (g > 0.0 and p <= 0.0) or (g < 1.0 and p >= 1.0):
        return float("inf")
    return _kl_bits(g, p)


def kl_bernoulli_shift_bits(double g, double eta):
    """D(g+eta||g) in bits, stable for tiny eta via log1p."""
    return _kl_shift_bits(g, eta)


def q_function(double x):
    """Gaussian tail probability Q(x) = P(N(0,1) > x)."""
    return 0.5 * erfc(x / sqrt(2.0))


# ---------------------------------------------------------------------------
# fast entropy inverse (table-seeded Newton; see the fallback for rationale)
# ---------------------------------------------------------------------------

cdef int HINV_SEED_SIZE = 4097
cdef int HINV_NEWTON_ITERS = 4
cdef double HINV_TINY = 1.0 / (HINV_SEED_SIZE - 1)
cdef double HINV_FLAT = 0.995
cdef double M_E = exp(1.0)

cdef double[::1] _HINV_SEED = np.empty(HINV_SEED_SIZE, dtype=np.float64)


cdef void _build_hinv_seed() noexcept:
    cdef int i, it
    cdef double h, lo, hi, mid
    for i in range(HINV_SEED_SIZE):
        h = i / <double>(HINV_SEED_SIZE - 1)
        lo = 0.0
        hi = 0.5
        for it in range(50):
            mid = 0.5 * (lo + hi)
            if _entropy(mid) < h:
                lo = mid
            else:
                hi = mid
        _HINV_SEED[i] = 0.5 * (lo + hi)
    _HINV_SEED[0] = 0.0
    _HINV_SEED[HINV_SEED_SIZE - 1] = 0.5

_build_hinv_seed()


cdef double _hinv_newton(double h) noexcept nogil:
    cdef double p, d, scaled, w, lo, hi, mid
    cdef int i, it
    if h <= 0.0:
        return 0.0
    if h >= 1.0:
        return 0.5
    if h < HINV_TINY:
        p = h * 0.1
        for it in range(30):
            p = h / log2(M_E / p)
        return p
    scaled = h * (HINV_SEED_SIZE - 1)
    i = <int>scaled
    if i > HINV_SEED_SIZE - 2:
        i = HINV_SEED_SIZE - 2
    if h > HINV_FLAT:
        lo = _HINV_SEED[i]
        hi = _HINV_SEED[i + 1]
        for it in range(BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            if _entropy(mid) < h:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)
    w = scaled - i
    p = _HINV_SEED[i] * (1.0 - w) + _HINV_SEED[i + 1] * w
    for it in range(HINV_NEWTON_ITERS):
        d = log2((1.0 - p) / p)
        p -= (_entropy(p) - h) / d
        if p <= 0.0:
            p = 1e-300
        elif p >= 0.5:
            p = 0.5 - 1e-17
    return p


# ---------------------------------------------------------------------------
# curvature floor
# ---------------------------------------------------------------------------

cdef double _curvature_ratio(double g, double eta) noexcept nogil:
    return _kl_shift_bits(g, eta) / (eta * eta)


def kl_curvature_floor(double g):
    """Smallest normalized divergence growth rate at crossover g."""
    if not 0.0 < g < 1.0:
        raise ValueError("crossover must lie strictly inside (0, 1)")
    cdef double span = 1.0 - g
    cdef double e_lo = span * 1e-7
    cdef double e_hi = span * (1.0 - 1e-9)
    cdef double ratio = (e_hi / e_lo) ** (1.0 / (CURVATURE_GRID - 1))
    cdef double best = 1e308, val, eta = e_lo
    cdef int i, best_i = 0
    for i in range(CURVATURE_GRID):
        val = _curvature_ratio(g, eta)
        if val < best:
            best = val
            best_i = i
        eta *= ratio
    cdef double lo = e_lo * ratio ** (best_i - 1 if best_i > 0 else 0)
    cdef double hi = e_lo * ratio ** (best_i + 1 if best_i < CURVATURE_GRID - 1
                                      else CURVATURE_GRID - 1)
    # golden-section refinement
    cdef double a = lo, b = hi, c, d, fc, fd
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc = _curvature_ratio(g, c)
    fd = _curvature_ratio(g, d)
    for i in range(GOLDEN_ITERS):
        if fc < fd:
            b = d; d = c; fd = fc
            c = b - INVPHI * (b - a)
            fc = _curvature_ratio(g, c)
        else:
            a = c; c = d; fc = fd
            d = a + INVPHI * (b - a)
            fd = _curvature_ratio(g, d)
    cdef double refined = fc if fc < fd else fd
    cdef double limit = 1.0 / (2.0 * LN2 * g * (1.0 - g))
    if refined > best:
        refined = best
    if refined > limit:
        refined = limit
    return refined


# ---------------------------------------------------------------------------
# sphere-packing converse objectives
# ---------------------------------------------------------------------------

cdef double _interp_loglin(double x, double[::1] xg, double[::1] yg) noexcept nogil:
    cdef double lx = log(x)
    cdef Py_ssize_t n = xg.shape[0]
    cdef Py_ssize_t lo = 0, hi = n - 1, mid
    if lx <= xg[0]:
        return yg[0]
    if lx >= xg[n - 1]:
        return yg[n - 1]
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if xg[mid] <= lx:
            lo = mid
        else:
            hi = mid
    cdef double w = (lx - xg[lo]) / (xg[hi] - xg[lo])
    return yg[lo] * (1.0 - w) + yg[hi] * w


cdef double _bsc_objective(double g, double lp, double l1p, double r_ch,
                           double n, double sqrt_n, double[::1] kg_x,
                           double[::1] kg_y) noexcept nogil:
    cdef double lg = log2(g)
    cdef double l1g = log2(1.0 - g)
    cdef double ent = -(g * lg + (1.0 - g) * l1g)
    cdef double delta = 1.0 - (1.0 - ent) / r_ch
    if delta <= 0.0:
        return NEG_INF
    cdef double hinv = _hinv_newton(delta)
    if hinv <= 0.0:
        return NEG_INF
    cdef double kg = _interp_loglin(g, kg_x, kg_y)
    cdef double eps = sqrt(log2(2.0 / hinv) / kg)
    cdef double div = -ent - g * lp - (1.0 - g) * l1p
    cdef double lr = lp + l1g - lg - l1p
    return log2(hinv) - 1.0 - n * div + eps * sqrt_n * lr


def bsc_converse_log2(double p, double r_ch, double n, k_log_grid, k_vals):
    """log2 of the neighborhood-size error lower bound for a BSC.

    Returns (log2_pe, g_opt); see the fallback docstring for the formula.
    """
    if p <= 0.0:
        return float("-inf"), 0.5    # noiseless channel: the bound vanishes
    cdef double[::1] kg_x = np.ascontiguousarray(k_log_grid, dtype=np.float64)
    cdef double[::1] kg_y = np.ascontiguousarray(k_vals, dtype=np.float64)
    cdef double g_star = _entropy_inverse(1.0 - r_ch)
    cdef double g_lo = g_star + (0.5 - g_star) * 1e-12
    cdef double sqrt_n = sqrt(n)
    cdef double lp = log2(p)
    cdef double l1p = log2(1.0 - p)
    cdef double step = (0.5 - g_lo) / (CONVERSE_GRID - 1)
    cdef double best = NEG_INF, val, g
    cdef int i, best_i = 0
    for i in range(CONVERSE_GRID):
        g = g_lo + i * step
        val = _bsc_objective(g, lp, l1p, r_ch, n, sqrt_n, kg_x, kg_y)
        if val > best:
            best = val
            best_i = i
    cdef double a = g_lo + (best_i - 1 if best_i > 0 else 0) * step
    cdef double b = g_lo + (best_i + 1 if best_i < CONVERSE_GRID - 1
                            else CONVERSE_GRID - 1) * step
    cdef double c, d, fc, fd
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc = -_bsc_objective(c, lp, l1p, r_ch, n, sqrt_n, kg_x, kg_y)
    fd = -_bsc_objective(d, lp, l1p, r_ch, n, sqrt_n, kg_x, kg_y)
    for i in range(GOLDEN_ITERS):
        if fc < fd:
            b = d; d = c; fd = fc
            c = b - INVPHI * (b - a)
            fc = -_bsc_objective(c, lp, l1p, r_ch, n, sqrt_n, kg_x, kg_y)
        else:
            a = c; c = d; fc = fd
            d = a + INVPHI * (b - a)
            fd = -_bsc_objective(d, lp, l1p, r_ch, n, sqrt_n, kg_x, kg_y)
    cdef double g_opt = c if fc < fd else d
    cdef double neg = fc if fc < fd else fd
    if -neg >= best:
        return -neg, g_opt
    return best, g_lo + best_i * step


cdef double _awgn_objective(double t, double snr, double r_ch, double n,
                            double sqrt_n) noexcept nogil:
    cdef double cap = 0.5 * log2(1.0 + snr / t)
    cdef double delta = 1.0 - cap / r_ch
    if delta <= 0.0:
        return NEG_INF
    cdef double hinv = _hinv_newton(delta)
    if hinv <= 0.0:
        return NEG_INF
    return (log(hinv / 2.0)
            - n * 0.5 * (t - 1.0 - log(t))
            - sqrt_n * (1.5 + 2.0 * log(2.0 / hinv)) * (t - 1.0))


def awgn_converse_ln(double snr, double r_ch, double n):
    """ln of the neighborhood-size error lower bound for the AWGN channel.

    Returns (ln_pe, t_opt), t the atypical-to-nominal noise ratio.
    """
    cdef double t_min = snr / (2.0 ** (2.0 * r_ch) - 1.0)
    cdef double t_lo = t_min * (1.0 + 1e-12)
    cdef double t_hi = t_min * 2.0
    cdef double sqrt_n = sqrt(n)
    cdef double ratio, t, val, best
    cdef int i, best_i, expansion
    for expansion in range(80):
        ratio = (t_hi / t_lo) ** (1.0 / (CONVERSE_GRID - 1))
        best = NEG_INF
        best_i = 0
        t = t_lo
        for i in range(CONVERSE_GRID):
            val = _awgn_objective(t, snr, r_ch, n, sqrt_n)
            if val > best:
                best = val
                best_i = i
            t *= ratio
        if best_i < CONVERSE_GRID - 1:
            break
        t_hi *= 2.0
    cdef double a = log(t_lo) + (best_i - 1 if best_i > 0 else 0) * log(ratio)
    cdef double b = log(t_lo) + (best_i + 1 if best_i < CONVERSE_GRID - 1
                                 else CONVERSE_GRID - 1) * log(ratio)
    cdef double c, d, fc, fd
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc = -_awgn_objective(exp(c), snr, r_ch, n, sqrt_n)
    fd = -_awgn_objective(exp(d), snr, r_ch, n, sqrt_n)
    for i in range(GOLDEN_ITERS):
        if fc < fd:
            b = d; d = c; fd = fc
            c = b - INVPHI * (b - a)
            fc = -_awgn_objective(exp(c), snr, r_ch, n, sqrt_n)
        else:
            a = c; c = d; fc = fd
            d = a + INVPHI * (b - a)
            fd = -_awgn_objective(exp(d), snr, r_ch, n, sqrt_n)
    cdef double lt_opt = c if fc < fd else d
    cdef double neg = fc if fc < fd else fd
    if -neg >= best:
        return -neg, exp(lt_opt)
    return best, t_lo * ratio ** best_i


# ---------------------------------------------------------------------------
# Gallager-B density evolution
# ---------------------------------------------------------------------------

cdef double _check_error(double x, int dc) noexcept nogil:
    if x >= 0.5:
        return 0.5
    return -expm1((dc - 1) * log1p(-2.0 * x)) / 2.0


cdef double _binom(int n, int k) noexcept nogil:
    cdef double out = 1.0
    cdef int i
    if k < 0 or k > n:
        return 0.0
    for i in range(k):
        out *= (n - i) / <double>(i + 1)
    return out


cdef double _gb_step(double x, double p0, int dv, int dc) noexcept nogil:
    cdef double y = _check_error(x, dc)
    cdef int b = (dv + 1) // 2
    cdef int n = dv - 1
    cdef double stay = 0.0, brk = 0.0
    cdef int j
    for j in range(0, b):
        stay += _binom(n, j) * (1.0 - y) ** j * y ** (n - j)
    for j in range(b, n + 1):
        brk += _binom(n, j) * y ** j * (1.0 - y) ** (n - j)
    return p0 * stay + (1.0 - p0) * brk


cdef double _logsumexp2(double a, double b) noexcept nogil:
    cdef double m = a if a > b else b
    if m == NEG_INF:
        return m
    return m + log(exp(a - m) + exp(b - m))


cdef double _gb_step_ln(double lx, double p0, int dv, int dc) noexcept nogil:
    cdef double ly, l1my
    if lx > log(1e-12):
        ly = log(_check_error(exp(lx), dc))
    else:
        ly = log(dc - 1.0) + lx
    l1my = log1p(-exp(ly)) if ly > -700.0 else 0.0
    cdef int b = (dv + 1) // 2
    cdef int n = dv - 1
    cdef double l_stay = NEG_INF, l_brk = NEG_INF, term
    cdef int j
    for j in range(0, b):
        term = log(_binom(n, j)) + j * l1my + (n - j) * ly
        l_stay = _logsumexp2(l_stay, term)
    for j in range(b, n + 1):
        term = log(_binom(n, j)) + j * ly + (n - j) * l1my
        l_brk = _logsumexp2(l_brk, term)
    return _logsumexp2(log(p0) + l_stay, log1p(-p0) + l_brk)


def gallager_b_step(double x, double p0, int dv, int dc):
    """One density-evolution update of the message error probability."""
    return _gb_step(x, p0, dv, dc)


def gallager_b_iterations(double p0, double log2_target, int dv, int dc,
                          long max_iter):
    """Iterations until the message error drops to 2**log2_target; -1 on cap."""
    cdef double log_switch = log(1e-8)
    cdef double ln_target = log2_target * LN2
    cdef double lx, x
    cdef long it = 0
    if p0 <= 0.0:
        return 0
    lx = log(p0)
    while lx > ln_target:
        if it >= max_iter:
            return -1
        if lx > log_switch:
            x = _gb_step(exp(lx), p0, dv, dc)
            if x <= 0.0:
                return it + 1
            lx = log(x)
        else:
            lx = _gb_step_ln(lx, p0, dv, dc)
        it += 1
    return it


def gallager_b_limit(double p0, int dv, int dc, long max_iter):
    """Approximate limit of density evolution from x0 = p0 (0.0 if it dies)."""
    cdef double x, xn
    cdef long i
    if p0 <= 0.0:
        return 0.0
    x = p0
    for i in range(max_iter):
        xn = _gb_step(x, p0, dv, dc)
        if xn < 1e-13:
            return 0.0
        if fabs(xn - x) < 1e-16:
            return xn
        x = xn
    return x


# ---------------------------------------------------------------------------
# triangular-lattice interference
# ---------------------------------------------------------------------------

def interference_disk_sum(double d, double r, double theta, double alpha,
                          double lam, double radius):
    """Sum of min(1, (lam/s)^alpha) over same-band interferers within `radius`.

    Returns -1.0 if an interferer coincides with the receiver.
    """
    cdef double h = sqrt(3.0) / 2.0 * d
    cdef double ox_even = -r * cos(theta)
    cdef double oy = -r * sin(theta)
    cdef double r2max = radius * radius
    cdef double eps2 = (1e-9 * d) * (1e-9 * d)
    cdef double total = 0.0, y, half, off, x, s2, lam2 = lam * lam
    cdef double half_alpha = 0.5 * alpha
    cdef long j, i, i_lo, i_hi, jmax
    jmax = <long>ceil((radius + fabs(oy)) / h) + 1
    for j in range(-jmax, jmax + 1):
        y = j * h + oy
        if fabs(y) > radius:
            continue
        half = sqrt(max(r2max - y * y, 0.0))
        off = ox_even if j % 2 == 0 else 0.5 * d + ox_even
        i_lo = <long>floor((-half - off) / d) - 1
        i_hi = <long>ceil((half - off) / d) + 1
        for i in range(i_lo, i_hi + 1):
            x = i * d + off
            s2 = x * x + y * y
            if s2 > r2max:
                continue
            if j == 0 and i == 0:
                continue
            if s2 < eps2:
                return -1.0
            if lam2 >= s2:
                total += 1.0
            else:
                total += (lam2 / s2) ** half_alpha
    return total
