"""NumPy fallback implementations of the hot kernels.

The compiled backend (`_fast.pyx`) implements the same functions with the
same algorithmic constants (grid sizes, bisection/golden iteration counts),
so the two backends agree to floating-point noise.  Anything that is called
inside the nested sweep optimizations lives here; higher-level drivers stay
in the plain-Python modules.

Conventions:
  * entropies and Bernoulli divergences are in bits,
  * the Gaussian variance divergence is in nats,
  * probabilities of error are tracked as log2 (BSC converse) or ln (AWGN
    converse) of the bound to stay meaningful far below 1e-300.
"""

import math

import numpy as np

LN2 = math.log(2.0)
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

# Shared algorithmic constants (mirrored in _fast.pyx).
BISECT_ITERS = 64
GOLDEN_ITERS = 64
CONVERSE_GRID = 256
CURVATURE_GRID = 1024


# ---------------------------------------------------------------------------
# scalar information measures
# ---------------------------------------------------------------------------

def binary_entropy(p):
    """h(p) = -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def binary_entropy_inverse(h):
    """The p in [0, 1/2] with binary_entropy(p) = h, by bisection."""
    if h >= 1.0:
        return 0.5
    if h <= 0.0:
        return 0.0
    lo, hi = 0.0, 0.5
    for _ in range(BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < h:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def kl_bernoulli_bits(g, p):
    """D(g||p) in bits; +inf when the divergence is infinite.

    Uses log differences rather than log-of-ratio so subnormal arguments
    cannot overflow the quotient.
    """
    if g == p:
        return 0.0
    total = 0.0
    if g > 0.0:
        if p <= 0.0:
            return math.inf
        total += g * (math.log2(g) - math.log2(p))
    if g < 1.0:
        if p >= 1.0:
            return math.inf
        total += (1.0 - g) * (math.log2(1.0 - g) - math.log2(1.0 - p))
    return total


def kl_bernoulli_shift_bits(g, eta):
    """D(g+eta||g) in bits, stable for tiny eta via log1p."""
    return ((g + eta) * math.log1p(eta / g)
            + (1.0 - g - eta) * math.log1p(-eta / (1.0 - g))) / LN2


def q_function(x):
    """Gaussian tail probability Q(x) = P(N(0,1) > x)."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


# ---------------------------------------------------------------------------
# fast entropy inverse for the bound objectives
#
# The public `binary_entropy_inverse` keeps plain bisection; the objective
# evaluations underneath the converse optimizers use a table-seeded Newton
# iteration instead (identical in both backends): entropy is concave, so
# Newton from below converges monotonically, and two special regions handle
# the vanishing derivative near h = 1 and the vanishing seed near h = 0.
# ---------------------------------------------------------------------------

HINV_SEED_SIZE = 4097
HINV_NEWTON_ITERS = 4
HINV_TINY = 1.0 / (HINV_SEED_SIZE - 1)
HINV_FLAT = 0.995


def _build_hinv_seed():
    h = np.linspace(0.0, 1.0, HINV_SEED_SIZE)
    lo = np.zeros_like(h)
    hi = np.full_like(h, 0.5)
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        below = _entropy_vec(mid) < h
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    seed = 0.5 * (lo + hi)
    seed[0] = 0.0
    seed[-1] = 0.5
    return seed


def _hinv_newton(h):
    """Scalar table-seeded Newton inverse of binary_entropy on [0, 1/2]."""
    if h <= 0.0:
        return 0.0
    if h >= 1.0:
        return 0.5
    if h < HINV_TINY:
        p = h * 0.1
        for _ in range(30):
            p = h / math.log2(math.e / p)
        return p
    scaled = h * (HINV_SEED_SIZE - 1)
    i = min(int(scaled), HINV_SEED_SIZE - 2)
    if h > HINV_FLAT:
        lo, hi = _HINV_SEED[i], _HINV_SEED[i + 1]
        for _ in range(BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            if binary_entropy(mid) < h:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)
    w = scaled - i
    p = _HINV_SEED[i] * (1.0 - w) + _HINV_SEED[i + 1] * w
    for _ in range(HINV_NEWTON_ITERS):
        d = math.log2((1.0 - p) / p)
        p -= (binary_entropy(p) - h) / d
        if p <= 0.0:
            p = 1e-300
        elif p >= 0.5:
            p = 0.5 - 1e-17
    return p


def _hinv_newton_vec(h):
    """Vectorized counterpart of `_hinv_newton` (same arithmetic per lane)."""
    h = np.asarray(h, dtype=np.float64)
    out = np.empty_like(h)
    out[h <= 0.0] = 0.0
    out[h >= 1.0] = 0.5

    tiny = (h > 0.0) & (h < HINV_TINY)
    if np.any(tiny):
        ht = h[tiny]
        p = ht * 0.1
        for _ in range(30):
            p = ht / np.log2(math.e / p)
        out[tiny] = p

    flat = (h > HINV_FLAT) & (h < 1.0)
    if np.any(flat):
        hf = h[flat]
        scaled = hf * (HINV_SEED_SIZE - 1)
        i = np.minimum(scaled.astype(np.int64), HINV_SEED_SIZE - 2)
        lo, hi = _HINV_SEED[i], _HINV_SEED[i + 1]
        for _ in range(BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            below = _entropy_vec(mid) < hf
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        out[flat] = 0.5 * (lo + hi)

    mid_region = (h >= HINV_TINY) & (h <= HINV_FLAT)
    if np.any(mid_region):
        hm = h[mid_region]
        scaled = hm * (HINV_SEED_SIZE - 1)
        i = np.minimum(scaled.astype(np.int64), HINV_SEED_SIZE - 2)
        w = scaled - i
        p = _HINV_SEED[i] * (1.0 - w) + _HINV_SEED[i + 1] * w
        for _ in range(HINV_NEWTON_ITERS):
            d = np.log2((1.0 - p) / p)
            p = p - (_entropy_vec(p) - hm) / d
            p = np.clip(p, 1e-300, 0.5 - 1e-17)
        out[mid_region] = p
    return out


# ---------------------------------------------------------------------------
# curvature floor K(g) = inf over eta in (0, 1-g) of D(g+eta||g)/eta^2
# ---------------------------------------------------------------------------

def kl_curvature_floor(g):
    """Smallest normalized divergence growth rate at crossover g.

    Grid scan (log-spaced toward eta=0) plus golden-section refinement;
    the eta->0 analytic limit 1/(2 ln2 g(1-g)) enters as a candidate since
    the infimum over the open interval may sit at that edge.
    """
    if not 0.0 < g < 1.0:
        raise ValueError("crossover must lie strictly inside (0, 1)")
    span = 1.0 - g
    eta = np.geomspace(span * 1e-7, span * (1.0 - 1e-9), CURVATURE_GRID)
    vals = _kl_shift_ratio_vec(g, eta)
    i = int(np.argmin(vals))
    lo = eta[max(i - 1, 0)]
    hi = eta[min(i + 1, CURVATURE_GRID - 1)]
    best = _golden_min(lambda e: kl_bernoulli_shift_bits(g, e) / (e * e), lo, hi)
    limit = 1.0 / (2.0 * LN2 * g * (1.0 - g))
    return min(best[1], limit, float(vals[i]))


def _kl_shift_ratio_vec(g, eta):
    d = ((g + eta) * np.log1p(eta / g)
         + (1.0 - g - eta) * np.log1p(-eta / (1.0 - g))) / LN2
    return d / (eta * eta)


def _golden_min(f, a, b):
    """Golden-section minimum of f on [a, b]; returns (argmin, min)."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(GOLDEN_ITERS):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    if fc < fd:
        return c, fc
    return d, fd


# ---------------------------------------------------------------------------
# sphere-packing converse objectives
#
# Both objectives are evaluated in log domain with fused logarithms: with
# lg = log2 g and l1g = log2(1-g) in hand, the entropy, the divergence
# D(g||p) = -h(g) - g log2 p - (1-g) log2(1-p), and the likelihood-ratio
# slope all come for free.
# ---------------------------------------------------------------------------

def _entropy_vec(p):
    out = np.zeros_like(p)
    inside = (p > 0.0) & (p < 1.0)
    q = p[inside]
    out[inside] = -(q * np.log2(q) + (1.0 - q) * np.log2(1.0 - q))
    return out


_HINV_SEED = _build_hinv_seed()


def _interp_loglin(x, xg, yg):
    """Linear interpolation of yg over ln(xg); clamps outside the table."""
    return float(np.interp(math.log(x), xg, yg))


def bsc_converse_log2(p, r_ch, n, k_log_grid, k_vals):
    """log2 of the neighborhood-size error lower bound for a BSC.

    Maximizes over atypical crossovers g in (g*, 1/2], g* the crossover at
    which the BSC capacity equals the spectral rate.  `k_log_grid`/`k_vals`
    hold the ln(g)-indexed curvature-floor table.  Returns (log2_pe, g_opt).
    """
    if p <= 0.0:
        return -math.inf, 0.5    # noiseless channel: the bound vanishes
    g_star = binary_entropy_inverse(1.0 - r_ch)
    g_lo = g_star + (0.5 - g_star) * 1e-12
    sqrt_n = math.sqrt(n)
    lp = math.log2(p)
    l1p = math.log2(1.0 - p)

    g = np.linspace(g_lo, 0.5, CONVERSE_GRID)
    lg = np.log2(g)
    l1g = np.log2(1.0 - g)
    ent = -(g * lg + (1.0 - g) * l1g)
    delta = 1.0 - (1.0 - ent) / r_ch
    hinv = _hinv_newton_vec(delta)
    kg = np.interp(lg * LN2, k_log_grid, k_vals)
    with np.errstate(divide="ignore", invalid="ignore"):
        eps = np.sqrt(np.log2(2.0 / hinv) / kg)
        div = -ent - g * lp - (1.0 - g) * l1p
        lr = lp + l1g - lg - l1p
        vals = np.log2(hinv) - 1.0 - n * div + eps * sqrt_n * lr
    vals[~np.isfinite(vals)] = -np.inf
    i = int(np.argmax(vals))

    def obj(x):
        return -_bsc_objective(x, lp, l1p, r_ch, n, sqrt_n, k_log_grid, k_vals)

    lo = g[max(i - 1, 0)]
    hi = g[min(i + 1, CONVERSE_GRID - 1)]
    g_opt, neg = _golden_min(obj, lo, hi)
    if -neg >= vals[i]:
        return -neg, g_opt
    return float(vals[i]), float(g[i])


def _bsc_objective(g, lp, l1p, r_ch, n, sqrt_n, k_log_grid, k_vals):
    lg = math.log2(g)
    l1g = math.log2(1.0 - g)
    ent = -(g * lg + (1.0 - g) * l1g)
    delta = 1.0 - (1.0 - ent) / r_ch
    if delta <= 0.0:
        return -math.inf
    hinv = _hinv_newton(delta)
    if hinv <= 0.0:
        return -math.inf
    kg = _interp_loglin(g, k_log_grid, k_vals)
    eps = math.sqrt(math.log2(2.0 / hinv) / kg)
    div = -ent - g * lp - (1.0 - g) * l1p
    lr = lp + l1g - lg - l1p
    return math.log2(hinv) - 1.0 - n * div + eps * sqrt_n * lr


def awgn_converse_ln(snr, r_ch, n):
    """ln of the neighborhood-size error lower bound for the AWGN channel.

    Maximizes over the atypical-to-nominal noise ratio t > t_min, where
    t_min makes the capacity equal the spectral rate; the upper end of the
    search window doubles until the maximum is interior.
    Returns (ln_pe, t_opt).
    """
    t_min = snr / (2.0 ** (2.0 * r_ch) - 1.0)
    t_lo = t_min * (1.0 + 1e-12)
    t_hi = t_min * 2.0
    sqrt_n = math.sqrt(n)

    for _ in range(80):
        t = np.geomspace(t_lo, t_hi, CONVERSE_GRID)
        cap = 0.5 * np.log2(1.0 + snr / t)
        delta = 1.0 - cap / r_ch
        hinv = _hinv_newton_vec(delta)
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = (np.log(hinv / 2.0)
                    - n * 0.5 * (t - 1.0 - np.log(t))
                    - sqrt_n * (1.5 + 2.0 * np.log(2.0 / hinv)) * (t - 1.0))
        vals[~np.isfinite(vals)] = -np.inf
        i = int(np.argmax(vals))
        if i < CONVERSE_GRID - 1:
            break
        t_hi *= 2.0

    def obj(lt):
        return -_awgn_objective(math.exp(lt), snr, r_ch, n, sqrt_n)

    lo = math.log(t[max(i - 1, 0)])
    hi = math.log(t[min(i + 1, CONVERSE_GRID - 1)])
    lt_opt, neg = _golden_min(obj, lo, hi)
    if -neg >= vals[i]:
        return -neg, math.exp(lt_opt)
    return float(vals[i]), float(t[i])


def _awgn_objective(t, snr, r_ch, n, sqrt_n):
    cap = 0.5 * math.log2(1.0 + snr / t)
    delta = 1.0 - cap / r_ch
    if delta <= 0.0:
        return -math.inf
    hinv = _hinv_newton(delta)
    if hinv <= 0.0:
        return -math.inf
    return (math.log(hinv / 2.0)
            - n * 0.5 * (t - 1.0 - math.log(t))
            - sqrt_n * (1.5 + 2.0 * math.log(2.0 / hinv)) * (t - 1.0))


# ---------------------------------------------------------------------------
# Gallager-B density evolution
# ---------------------------------------------------------------------------

def gallager_b_step(x, p0, dv, dc):
    """One density-evolution update of the message error probability.

    Variable nodes flip the channel bit when a strict majority of the
    dv-1 incoming check messages contradicts it (for dv = 3: both must).
    """
    y = _check_error(x, dc)
    b = (dv + 1) // 2
    n = dv - 1
    stay = 0.0     # channel bit wrong, too few correct messages to flip it
    brk = 0.0      # channel bit right, enough wrong messages to flip it
    for j in range(0, b):
        stay += math.comb(n, j) * (1.0 - y) ** j * y ** (n - j)
    for j in range(b, n + 1):
        brk += math.comb(n, j) * y ** j * (1.0 - y) ** (n - j)
    return p0 * stay + (1.0 - p0) * brk


def _check_error(x, dc):
    """Probability a degree-dc check message is wrong, given message error x."""
    if x >= 0.5:
        return 0.5
    return -math.expm1((dc - 1) * math.log1p(-2.0 * x)) / 2.0


def _gallager_b_step_ln(lx, p0, dv, dc):
    """Log-domain density-evolution update; exact given ln x."""
    if lx > math.log(1e-12):
        ly = math.log(_check_error(math.exp(lx), dc))
    else:
        ly = math.log(dc - 1.0) + lx
    l1my = math.log1p(-math.exp(ly)) if ly > -700.0 else 0.0
    b = (dv + 1) // 2
    n = dv - 1
    stay_terms = [math.log(math.comb(n, j)) + j * l1my + (n - j) * ly
                  for j in range(0, b)]
    brk_terms = [math.log(math.comb(n, j)) + j * ly + (n - j) * l1my
                 for j in range(b, n + 1)]
    l_stay = _logsumexp(stay_terms)
    l_brk = _logsumexp(brk_terms)
    return _logsumexp([math.log(p0) + l_stay, math.log1p(-p0) + l_brk])


def _logsumexp(terms):
    m = max(terms)
    if m == -math.inf:
        return m
    return m + math.log(sum(math.exp(t - m) for t in terms))


_LOG_SWITCH = math.log(1e-8)


def gallager_b_iterations(p0, log2_target, dv, dc, max_iter):
    """Iterations until the message error drops to 2**log2_target; -1 on cap."""
    if p0 <= 0.0:
        return 0
    ln_target = log2_target * LN2
    lx = math.log(p0)
    it = 0
    while lx > ln_target:
        if it >= max_iter:
            return -1
        if lx > _LOG_SWITCH:
            x = gallager_b_step(math.exp(lx), p0, dv, dc)
            if x <= 0.0:
                return it + 1
            lx = math.log(x)
        else:
            lx = _gallager_b_step_ln(lx, p0, dv, dc)
        it += 1
    return it


def gallager_b_limit(p0, dv, dc, max_iter):
    """Approximate limit of density evolution from x0 = p0 (0.0 if it dies)."""
    if p0 <= 0.0:
        return 0.0
    x = p0
    for _ in range(max_iter):
        xn = gallager_b_step(x, p0, dv, dc)
        if xn < 1e-13:
            return 0.0
        if abs(xn - x) < 1e-16:
            return xn
        x = xn
    return x


# ---------------------------------------------------------------------------
# triangular-lattice interference
# ---------------------------------------------------------------------------

def interference_disk_sum(d, r, theta, alpha, lam, radius):
    """Sum of min(1, (lam/s)^alpha) over same-band interferers within `radius`.

    The serving transmitter sits at the lattice origin, the receiver at
    distance r, angle theta from it; the even-row origin term (the serving
    transmitter itself) is excluded.  Returns -1.0 if an interferer
    coincides with the receiver (degenerate geometry).
    """
    h = math.sqrt(3.0) / 2.0 * d
    ox_even = -r * math.cos(theta)
    oy = -r * math.sin(theta)
    r2max = radius * radius
    eps2 = (1e-9 * d) ** 2
    total = 0.0
    jmax = int(math.ceil((radius + abs(oy)) / h)) + 1
    for j in range(-jmax, jmax + 1):
        y = j * h + oy
        if abs(y) > radius:
            continue
        half = math.sqrt(max(r2max - y * y, 0.0))
        off = ox_even if j % 2 == 0 else 0.5 * d + ox_even
        i_lo = int(math.floor((-half - off) / d)) - 1
        i_hi = int(math.ceil((half - off) / d)) + 1
        i = np.arange(i_lo, i_hi + 1)
        x = i * d + off
        s2 = x * x + y * y
        keep = s2 <= r2max
        if j == 0:
            keep &= i != 0
        s2 = s2[keep]
        if s2.size and float(s2.min()) < eps2:
            return -1.0
        if s2.size:
            total += float(np.sum(np.minimum(1.0, (lam * lam / s2) ** (0.5 * alpha))))
    return total
