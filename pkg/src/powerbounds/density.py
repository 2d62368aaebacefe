"""Interference-limited link density on a triangular grid: the lattice
interference sum, maximum supportable density for uncoded QPSK and coded
transmission (ideal, fixed-gap, and a fixed practical code), the
infinite-power limits, and the converse-derived density upper bound.

Same-band transmitters sit on a triangular grid with spacing d; splitting
the band into B equal sub-bands multiplies the pair density by B because
the bands are non-interacting copies of the same grid.  DensityPoint keeps
both the per-band density 2/(sqrt(3) d^2) and the B-weighted total.

Every maximum-density search reduces to the same monotone problem: the
unit-power interference iota(d) = I(P_T=1, d) must not exceed a budget
iota_max derived from the SINR requirement, so one memoized spacing solver
serves the uncoded, coded, practical, and converse-bound searches alike.
"""

import math
from dataclasses import dataclass, replace
from functools import partial

from . import _kernels
from .channel import received_power, thermal_noise_power
from .converse import min_neighborhood
from .errors import DegenerateGeometryError, DomainError, InfeasibleError
from .infotheory import binary_entropy, q_function
from .parallel import parallel_map
from .power import iterations_lower_bound

SQRT3 = math.sqrt(3.0)

# Geometry guard: spacings below this multiple of the link distance (or
# wavelength) saturate the search rather than being probed further.
GUARD_FACTOR = 1e-6
INTERFERENCE_REL_TOL = 1e-7
INTERFERENCE_RADIUS_CAP = 2048.0
# Above this many lattice points per evaluation the grid is effectively a
# continuum near the receiver; the sum switches to its integral form.
LATTICE_POINT_BUDGET = 2.5e7


@dataclass(frozen=True)
class GridScenario:
    """Triangular-grid deployment: geometry, banding, and link parameters.

    spacing is the same-band nearest-transmitter distance; None while an
    operation is still searching for it.
    """

    link_distance: float
    data_rate: float
    env: object
    spacing: float | None = None
    orientation: float = 0.0
    sub_bands: int = 1

    def __post_init__(self):
        if self.link_distance <= 0.0:
            raise DomainError("link distance must be positive")
        if self.data_rate <= 0.0:
            raise DomainError("data rate must be positive")
        if self.spacing is not None and self.spacing <= 0.0:
            raise DomainError("grid spacing must be positive")
        if not 0.0 <= self.orientation < math.pi / 3.0:
            raise DomainError("orientation reduces to [0, pi/3) by lattice symmetry")
        if self.sub_bands < 1:
            raise DomainError("sub-band count must be at least 1")


@dataclass(frozen=True)
class DensityPoint:
    """A feasible (or marked infeasible) deployment density."""

    spacing: float
    density: float              # per-band pair density 2/(sqrt(3) d^2)
    density_total: float        # sub_bands * density
    sub_bands: int
    transmit_power: float
    total_power: float | None = None
    feasible: bool = True
    saturated: bool = False     # spacing pinned at the geometry guard
    sinr: float | None = None
    capacity: float | None = None
    shannon_min_sinr: float | None = None
    neighborhood: float | None = None
    iterations: float | None = None

    @classmethod
    def infeasible(cls, sub_bands, transmit_power=math.nan, total_power=None):
        nan = math.nan
        return cls(nan, nan, nan, sub_bands, transmit_power,
                   total_power=total_power, feasible=False)


@dataclass(frozen=True)
class PracticalCode:
    """A fixed code/decoder: required SINR, rate, and per-iteration energy."""

    required_sinr: float            # linear
    code_rate: float                # bits per channel use
    node_energy: float              # J per PE per iteration
    iterations: int

    def __post_init__(self):
        if self.required_sinr <= 0.0:
            raise DomainError("required SINR must be positive")
        if self.code_rate <= 0.0:
            raise DomainError("code rate must be positive")
        if self.node_energy <= 0.0:
            raise DomainError("node energy must be positive")
        if self.iterations < 1:
            raise DomainError("decoders run at least one iteration")

    def decode_power(self, data_rate):
        """E_node * l * R_dec / R_ch with the decoder retired at data_rate."""
        return self.node_energy * self.iterations * data_rate / self.code_rate


def grid_density(d):
    """Transmitter-pair density 2/(sqrt(3) d^2) of a triangular grid."""
    if d <= 0.0:
        raise DomainError("grid spacing must be positive")
    return 2.0 / (SQRT3 * d * d)


def unit_interference(scenario, d, rel_tol=INTERFERENCE_REL_TOL,
                      min_radius=None):
    """Interference per watt of transmit power at same-band spacing d.

    Lattice terms inside an adaptively doubled disk are summed exactly
    (each clamped at 1 per the received-power law); the remainder enters
    through the closed-form integral tail
    2 pi rho lambda^alpha R^(2-alpha)/(alpha - 2), and doubling stops when
    consecutive corrected totals agree to rel_tol.  When the disk would
    hold more lattice points than the budget allows (spacing far below the
    link scale), the whole sum collapses to its continuum integral
    rho pi lambda^2 alpha/(alpha-2) minus the serving transmitter's term.
    """
    if d <= 0.0:
        raise DomainError("grid spacing must be positive")
    r = scenario.link_distance
    env = scenario.env
    lam = env.wavelength
    alpha = env.path_loss_exponent
    theta = scenario.orientation
    rho = 2.0 / (SQRT3 * d * d)

    radius = max(8.0 * d, 4.0 * (r + d), 8.0 * lam)
    if min_radius is not None:
        radius = max(radius, min_radius)

    if rho * math.pi * radius * radius > LATTICE_POINT_BUDGET:
        whole = rho * math.pi * lam * lam * alpha / (alpha - 2.0)
        serving = min(1.0, (lam / r) ** alpha)
        return max(whole - serving, 0.0)

    def corrected(rad):
        raw = _kernels.interference_disk_sum(d, r, theta, alpha, lam, rad)
        if raw < 0.0:
            raise DegenerateGeometryError(
                "an interfering transmitter coincides with the receiver")
        tail = 2.0 * math.pi * rho * lam ** alpha * rad ** (2.0 - alpha) / (alpha - 2.0)
        return raw + tail

    value = corrected(radius)
    while radius < INTERFERENCE_RADIUS_CAP * d:
        radius *= 2.0
        if rho * math.pi * radius * radius > LATTICE_POINT_BUDGET:
            break
        nxt = corrected(radius)
        if abs(nxt - value) <= rel_tol * abs(nxt):
            return nxt
        value = nxt
    return value


def interference_sum(p_t, scenario, rel_tol=INTERFERENCE_REL_TOL,
                     min_radius=None):
    """Total same-band interference at the receiver, in watts."""
    if p_t < 0.0:
        raise DomainError("transmit power must be nonnegative")
    if scenario.spacing is None:
        raise DomainError("scenario has no grid spacing set")
    if p_t == 0.0:
        return 0.0
    return p_t * unit_interference(scenario, scenario.spacing,
                                   rel_tol=rel_tol, min_radius=min_radius)


class SpacingSolver:
    """Memoized monotone search: smallest spacing with iota(d) <= budget.

    iota is lazily tabulated on an octave grid (8 nodes per doubling); the
    cell containing the crossing is then bisected with exact evaluations.
    Valid in the regime where iota is nonincreasing in d, which holds once
    spacings exceed the link distance (every search edge of interest here).
    """

    STEP = 2.0 ** 0.125
    SEARCH_REL_TOL = 1e-6

    def __init__(self, scenario, rel_tol=1e-6):
        self.scenario = scenario
        self.rel_tol = rel_tol
        self.guard = GUARD_FACTOR * max(scenario.link_distance,
                                        scenario.env.wavelength)
        self.base = max(scenario.link_distance, scenario.env.wavelength)
        self._iota = {}

    def iota(self, d):
        val = self._iota.get(d)
        if val is None:
            try:
                val = unit_interference(self.scenario, d, rel_tol=self.rel_tol)
            except DegenerateGeometryError:
                val = math.inf
            self._iota[d] = val
        return val

    def smallest_spacing(self, iota_max):
        """Minimal d with iota(d) <= iota_max; (d, saturated) or None.

        None means the budget is unmet even at isolated spacings (cannot
        happen for positive budgets, since iota decays like d^-alpha).
        """
        if iota_max <= 0.0:
            return None
        if math.isinf(iota_max) or self.iota(self.guard) <= iota_max:
            return self.guard, True
        k = 0
        while self.iota(self.base * self.STEP ** k) > iota_max:
            k += 1
            if k > 800:
                return None
        lo = self.guard if k == 0 else self.base * self.STEP ** (k - 1)
        hi = self.base * self.STEP ** k
        while hi - lo > self.SEARCH_REL_TOL * hi:
            mid = 0.5 * (lo + hi)
            if self.iota(mid) <= iota_max:
                hi = mid
            else:
                lo = mid
        return hi, False


_solver_cache = {}


def _spacing_solver(scenario):
    key = (scenario.link_distance, scenario.data_rate, scenario.orientation,
           scenario.env.carrier_frequency, scenario.env.bandwidth,
           scenario.env.path_loss_exponent, scenario.env.temperature)
    solver = _solver_cache.get(key)
    if solver is None:
        solver = SpacingSolver(replace(scenario, spacing=None))
        _solver_cache[key] = solver
    return solver


def _uncoded_sub_bands(scenario):
    b = scenario.env.bandwidth / scenario.data_rate
    if b < 1.0:
        raise DomainError(
            "uncoded transmission needs bandwidth at least the data rate")
    return b


def uncoded_pe(p_t, scenario):
    """Bit-error probability Q(sqrt(2 P_R / (kTW/B + I))) of uncoded QPSK.

    The band splits into B = W/R_data sub-bands, each carrying one grid.
    """
    b = _uncoded_sub_bands(scenario)
    env = scenario.env
    p_r = received_power(p_t, scenario.link_distance, env)
    noise = env.boltzmann_constant * env.temperature * env.bandwidth / b
    total_noise = noise + interference_sum(p_t, scenario)
    return q_function(math.sqrt(2.0 * p_r / total_noise))


def _gaussian_tail_inverse(p):
    """x with Q(x) = p, by bisection on [0, 60]."""
    lo, hi = 0.0, 60.0
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        if q_function(mid) > p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _density_point(solver_result, sub_bands, p_t, **extra):
    d, saturated = solver_result
    dens = grid_density(d)
    return DensityPoint(d, dens, sub_bands * dens, int(sub_bands), p_t,
                        saturated=saturated, **extra)


def uncoded_max_density(target_pe, p_t, scenario):
    """Densest uncoded deployment meeting target_pe at transmit power p_t."""
    if not 0.0 < target_pe <= 0.5:
        raise DomainError("target error probability must lie in (0, 1/2]")
    b = _uncoded_sub_bands(scenario)
    env = scenario.env
    p_r = received_power(p_t, scenario.link_distance, env)
    noise = env.boltzmann_constant * env.temperature * env.bandwidth / b
    if target_pe >= 0.5:
        iota_max = math.inf          # the constraint is vacuous
    else:
        snr_req = _gaussian_tail_inverse(target_pe) ** 2 / 2.0
        iota_max = (p_r / snr_req - noise) / p_t
    if iota_max is not math.inf and iota_max <= 0.0:
        return DensityPoint.infeasible(int(b), p_t)
    result = _spacing_solver(scenario).smallest_spacing(iota_max)
    if result is None:
        return DensityPoint.infeasible(int(b), p_t)
    return _density_point(result, b, p_t)


def coded_max_density(target_pe, p_t, scenario, sub_bands=None, gap_db=0.0):
    """Densest coded deployment: per-band Shannon rate (with an SINR gap
    penalty and the bit-error rate correction) must carry the data rate.

    sub_bands=None scans B = 1 .. 8*ceil(W/R_data) and keeps the best
    total density.
    """
    if not 0.0 < target_pe < 0.5:
        raise DomainError("target error probability must lie in (0, 1/2)")
    if gap_db < 0.0:
        raise DomainError("capacity gap must be nonnegative (in dB)")
    env = scenario.env
    if sub_bands is None:
        cap = 8 * max(1, math.ceil(env.bandwidth / scenario.data_rate))
        best = None
        for b in range(1, cap + 1):
            point = coded_max_density(target_pe, p_t, scenario, b, gap_db)
            if point.feasible and (best is None
                                   or point.density_total > best.density_total):
                best = point
        return best if best is not None else DensityPoint.infeasible(1, p_t)

    b = int(sub_bands)
    gap = 10.0 ** (gap_db / 10.0)
    w_band = env.bandwidth / b
    rate_floor = scenario.data_rate * (1.0 - binary_entropy(target_pe))
    p_r = received_power(p_t, scenario.link_distance, env)
    noise = env.boltzmann_constant * env.temperature * env.bandwidth / b
    if rate_floor <= 0.0:
        iota_max = math.inf
    else:
        sinr_req = gap * (2.0 ** (rate_floor / w_band) - 1.0)
        iota_max = (p_r / sinr_req - noise) / p_t
    if iota_max is not math.inf and iota_max <= 0.0:
        return DensityPoint.infeasible(b, p_t)
    result = _spacing_solver(scenario).smallest_spacing(iota_max)
    if result is None:
        return DensityPoint.infeasible(b, p_t)
    return _density_point(result, b, p_t)


def infinite_power_density(target_pe, scenario, mode="coded", sub_bands=None,
                           gap_db=0.0, rel_tol=1e-4):
    """Density limit as every link's transmit power grows without bound.

    Evaluates the finite-power maximum on a decade ladder of transmit
    powers until the density stops changing (relative rel_tol).
    """
    if mode not in ("coded", "uncoded"):
        raise DomainError(f"unknown mode {mode!r}")
    last = None
    p_t = 1.0
    for _ in range(24):
        if mode == "uncoded":
            point = uncoded_max_density(target_pe, p_t, scenario)
        else:
            point = coded_max_density(target_pe, p_t, scenario, sub_bands, gap_db)
        if point.feasible and last is not None and last.feasible:
            if abs(point.density_total - last.density_total) <= rel_tol * point.density_total:
                return point
        last = point
        p_t *= 10.0
    if last is None or not last.feasible:
        raise InfeasibleError("no feasible density at any transmit power")
    return last


def practical_code_density_curve(code, power_grid, scenario, jobs=1):
    """Max density of the fixed practical code per total-power budget.

    The decoder burns its fixed per-link power off the top of each budget;
    the rest is transmit power, and spacing shrinks until the SINR floor
    binds.
    """
    worker = partial(_practical_worker, code=code, scenario=scenario)
    return parallel_map(worker, list(power_grid), jobs)


def _practical_worker(budget, code, scenario):
    env = scenario.env
    b = scenario.sub_bands
    decode = code.decode_power(scenario.data_rate)
    p_t = budget - decode
    if p_t <= 0.0:
        return DensityPoint.infeasible(b, total_power=budget)
    p_r = received_power(p_t, scenario.link_distance, env)
    noise = env.boltzmann_constant * env.temperature * env.bandwidth / b
    iota_max = (p_r / code.required_sinr - noise) / p_t
    if iota_max <= 0.0:
        return DensityPoint.infeasible(b, p_t, total_power=budget)
    result = _spacing_solver(scenario).smallest_spacing(iota_max)
    if result is None:
        return DensityPoint.infeasible(b, p_t, total_power=budget)
    d, _ = result
    sinr = p_r / (noise + p_t * _spacing_solver(scenario).iota(d))
    return replace(_density_point(result, b, p_t, total_power=budget),
                   sinr=sinr, capacity=0.5 * math.log2(1.0 + sinr))


def uncoded_density_curve(target_pe, power_grid, scenario, jobs=1):
    """Uncoded max density per total-power budget (all budget is transmit)."""
    worker = partial(_uncoded_curve_worker, target_pe=target_pe,
                     scenario=scenario)
    return parallel_map(worker, list(power_grid), jobs)


def _uncoded_curve_worker(budget, target_pe, scenario):
    point = uncoded_max_density(target_pe, budget, scenario)
    return replace(point, total_power=budget)


def optimal_code_density_upper_bound(power_grid, scenario, tech, target_pe,
                                     jobs=1):
    """Converse-derived ceiling on any code's density per power budget.

    Treats noise-plus-interference as Gaussian, prices decoding through the
    neighborhood/iteration lower bounds (at least one iteration), and for
    each budget finds the smallest spacing whose cheapest operating point
    fits the budget.  Also records the SINR, its implied capacity, and the
    Shannon-minimum SINR at the optimizer.
    """
    b = scenario.sub_bands
    r_ch = scenario.data_rate * b / (2.0 * scenario.env.bandwidth)
    cheapest = _CheapestOperatingPoint(scenario, tech, target_pe, r_ch)

    d_lo = max(cheapest.solver.guard * 10.0, scenario.link_distance * 1e-3)
    d_hi = max(scenario.link_distance, scenario.env.wavelength) * 4.0
    for _ in range(12):
        here = cheapest(d_hi)
        there = cheapest(d_hi * 8.0)
        if here is not None and there is not None and \
                abs(here[0] - there[0]) <= 1e-6 * there[0]:
            break
        d_hi *= 8.0
    worker = partial(_upper_bound_worker, cheapest=cheapest, d_lo=d_lo,
                     d_hi=d_hi, sub_bands=b)
    return parallel_map(worker, list(power_grid), jobs)


def _upper_bound_worker(budget, cheapest, d_lo, d_hi, sub_bands):
    floor = cheapest(d_hi)
    if floor is None or floor[0] > budget:
        return DensityPoint.infeasible(sub_bands, total_power=budget)
    here = cheapest(d_lo)
    lo, hi = d_lo, d_hi
    if here is not None and here[0] <= budget:
        hi = d_lo          # even the smallest probed spacing fits
    else:
        for _ in range(60):
            mid = math.sqrt(lo * hi)
            val = cheapest(mid)
            if val is not None and val[0] <= budget:
                hi = mid
            else:
                lo = mid
            if hi - lo <= 1e-4 * hi:
                break
    val = cheapest(hi)
    if val is None:
        return DensityPoint.infeasible(sub_bands, total_power=budget)
    dens = grid_density(hi)
    total, p_t, sinr, n_min, iters = val
    return DensityPoint(hi, dens, sub_bands * dens, sub_bands, p_t,
                        total_power=budget, sinr=sinr,
                        capacity=0.5 * math.log2(1.0 + sinr),
                        shannon_min_sinr=cheapest.sinr_floor,
                        neighborhood=n_min, iterations=iters)


class _CheapestOperatingPoint:
    """min over P_T of [P_T + xi_D max(1, l_min) E_node R_dec / R_ch] at a
    given spacing, with the converse neighborhood bound priced in."""

    PT_GRID = 24
    GOLDEN_ITERS = 24

    def __init__(self, scenario, tech, target_pe, r_ch):
        self.scenario = scenario
        self.tech = tech
        self.target_pe = target_pe
        self.r_ch = r_ch
        env = scenario.env
        self.solver = _spacing_solver(scenario)
        self.noise = (env.boltzmann_constant * env.temperature * env.bandwidth
                      / scenario.sub_bands)
        self.gamma = (tech.weight_decode * tech.node_energy
                      * scenario.data_rate / r_ch)
        self.sinr_floor = 2.0 ** (2.0 * r_ch) - 1.0
        self.gain = min(1.0, (env.wavelength / scenario.link_distance)
                        ** env.path_loss_exponent)
        self._memo = {}

    def __call__(self, d):
        result = self._memo.get(d)
        if result is None and d not in self._memo:
            result = self._evaluate(d)
            self._memo[d] = result
        return result

    def _evaluate(self, d):
        unit_i = self.solver.iota(d)
        if math.isinf(unit_i):
            return None
        # SINR saturates at gain/unit_i as transmit power grows.
        if unit_i > 0.0 and self.gain / unit_i <= self.sinr_floor * (1.0 + 1e-9):
            return None
        denom = self.gain - self.sinr_floor * unit_i
        p_sh = self.sinr_floor * self.noise / denom
        lo = math.log(p_sh * (1.0 + 1e-6))
        hi = math.log(p_sh * 1e6)
        step = (hi - lo) / (self.PT_GRID - 1)
        best, best_x, hint = None, lo, None
        for i in range(self.PT_GRID):
            cand = self._total(math.exp(lo + i * step), unit_i, hint)
            if cand is None:
                continue
            hint = cand[3]
            if best is None or cand[0] < best[0]:
                best, best_x = cand, lo + i * step
        if best is None:
            return None
        a, bnd = best_x - step, best_x + step
        invphi = (math.sqrt(5.0) - 1.0) / 2.0
        c = bnd - invphi * (bnd - a)
        dd = a + invphi * (bnd - a)
        fc = self._total(math.exp(c), unit_i, hint)
        fd = self._total(math.exp(dd), unit_i, hint)
        vc = fc[0] if fc else math.inf
        vd = fd[0] if fd else math.inf
        for _ in range(self.GOLDEN_ITERS):
            if vc < vd:
                bnd, dd, vd, fd = dd, c, vc, fc
                c = bnd - invphi * (bnd - a)
                fc = self._total(math.exp(c), unit_i, hint)
                vc = fc[0] if fc else math.inf
            else:
                a, c, vc, fc = c, dd, vd, fd
                dd = a + invphi * (bnd - a)
                fd = self._total(math.exp(dd), unit_i, hint)
                vd = fd[0] if fd else math.inf
        for cand in (fc, fd):
            if cand is not None and cand[0] < best[0]:
                best = cand
        return best

    def _total(self, p_t, unit_i, hint):
        sinr = p_t * self.gain / (self.noise + p_t * unit_i)
        if 0.5 * math.log2(1.0 + sinr) <= self.r_ch:
            return None
        try:
            n_min = min_neighborhood("awgn", self.target_pe, snr=sinr,
                                     spectral_rate=self.r_ch, hint=hint)
        except InfeasibleError:
            return None
        iters = iterations_lower_bound(n_min, self.tech.max_degree)
        total = p_t + self.gamma * max(1.0, iters)
        return total, p_t, sinr, n_min, iters
