"""Command-line front end: parse a scenario config, dispatch a sweep, emit a
CSV table with a stable schema.

Exit codes: 0 success, 2 config validation failure, 3 infeasible scenario
(every row infeasible), 4 I/O failure.  CSVs are written atomically (temp
file + rename), numbers carry 17 significant digits, and identical configs
reproduce byte-identical files; run metadata (including timestamps) goes to
a `<output>.meta.json` sidecar instead.
"""

import argparse
import json
import math
import os
import sys
import time

from . import _kernels
from .config import ScenarioConfig
from .density import (coded_max_density, infinite_power_density,
                      optimal_code_density_upper_bound,
                      practical_code_density_curve, uncoded_density_curve,
                      uncoded_max_density)
from .errors import ConfigError, DomainError, InfeasibleError
from .ldpc import ldpc_waterslide
from .power import (optimize_transmit_power, shannon_limit_transmit_power,
                    waterslide_sweep)

COMMANDS = (
    "waterslide-bsc", "waterslide-awgn", "ldpc-waterslide",
    "density-infinite", "density-finite", "density-practical",
    "density-upper-bound", "point",
)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="powerbounds",
        description="Total-power lower bounds and link-density planning sweeps")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="scenario config path")
    parser.add_argument("--output", help="output CSV path (not used by 'point')")
    parser.add_argument("--override", action="append", default=[],
                        metavar="KEY=VALUE", help="override a config key")
    parser.add_argument("--jobs", type=int, default=None,
                        help="parallel workers (default: POWERBOUNDS_JOBS or 1)")
    args = parser.parse_args(argv)

    jobs = args.jobs
    if jobs is None:
        jobs = int(os.environ.get("POWERBOUNDS_JOBS", "1"))

    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 4

    try:
        cfg = ScenarioConfig.load(text, overrides=args.override,
                                  command=args.command)
    except ConfigError as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return 2

    started = time.time()
    try:
        if args.command == "point":
            return _run_point(cfg)
        header, rows = _run_sweep(args.command, cfg, jobs)
    except InfeasibleError as exc:
        print(f"error: infeasible scenario: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, DomainError) as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return 2

    if not any(_row_feasible(row) for row in rows):
        print("error: infeasible scenario: every sweep row is infeasible",
              file=sys.stderr)
        return 3

    if not args.output:
        print("error: --output is required for sweep commands", file=sys.stderr)
        return 2
    try:
        _write_csv(args.output, args.command, cfg, header, rows)
        _write_sidecar(args.output, args.command, cfg, jobs, started)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 4
    return 0


def _row_feasible(row):
    return not any(isinstance(x, float) and math.isnan(x) for x in row)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _run_point(cfg):
    kind = cfg.values["point.channel"]
    link, env, tech = cfg.link(), cfg.environment(), cfg.decoder_tech()
    try:
        point = optimize_transmit_power(
            link, env, tech, kind, grid_points=cfg.values["solver.pt_grid_points"])
    except InfeasibleError as exc:
        print(f"error: infeasible scenario: {exc}", file=sys.stderr)
        return 3
    shannon = shannon_limit_transmit_power(link, env, kind)
    print(f"channel = {kind}")
    for name, value in (
            ("pe", point.target_pe),
            ("p_t_watts", point.transmit_power),
            ("p_r_watts", point.received_power),
            ("xi_t", point.path_gain_weight),
            ("n_min", point.neighborhood),
            ("l_min", point.iterations),
            ("p_decode_watts", point.decode_power),
            ("p_total_watts", point.total_power),
            ("gamma_watts", point.gamma),
            ("optimizer", point.optimizer),
            ("shannon_p_t_watts", shannon)):
        print(f"{name} = {value:.17g}")
    return 0


def _run_sweep(command, cfg, jobs):
    env = cfg.environment()
    grid_points = cfg.values["solver.pt_grid_points"]
    if command in ("waterslide-bsc", "waterslide-awgn"):
        kind = "bsc" if command.endswith("bsc") else "awgn"
        link, tech = cfg.link(), cfg.decoder_tech()
        points = waterslide_sweep(cfg.pe_grid(), link, env, tech, kind,
                                  grid_points=grid_points, jobs=jobs)
        optimizer_col = "optimizer_g" if kind == "bsc" else "optimizer_sigma_sq"
        header = ["pe", "p_t_watts", "p_r_watts", "n_min", "l_min",
                  "p_decode_watts", "p_total_watts", optimizer_col]
        rows = [[p.target_pe, p.transmit_power, p.received_power,
                 p.neighborhood, p.iterations, p.decode_power, p.total_power,
                 p.optimizer] for p in points]
        return header, rows

    if command == "ldpc-waterslide":
        link, tech, ens = cfg.link(), cfg.decoder_tech(), cfg.ensemble()
        points = ldpc_waterslide(cfg.pe_grid(), link, env, tech, ens,
                                 grid_points=grid_points, jobs=jobs)
        header = ["pe", "p_t_watts", "p_r_watts", "crossover", "iterations",
                  "p_decode_watts", "p_total_watts"]
        rows = [[p.target_pe, p.transmit_power, p.received_power, p.crossover,
                 float(p.iterations), p.decode_power, p.total_power]
                for p in points]
        return header, rows

    if command in ("density-infinite", "density-finite"):
        scenario = cfg.grid_scenario()
        gaps = cfg.values["grid.gaps_db"]
        band_scan = cfg.values["grid.band_scan"]
        sub_bands = None if band_scan else scenario.sub_bands
        fixed_pt = cfg.values["density.transmit_power_w"]
        header = ["pe", "series", "gap_db", "sub_bands", "spacing_m",
                  "density_per_band", "density_total", "p_t_watts", "feasible"]
        rows = []
        for pe in cfg.pe_grid():
            for series, gap in [("uncoded", 0.0)] + [("coded", g) for g in gaps]:
                if command == "density-infinite":
                    try:
                        point = infinite_power_density(
                            pe, scenario, mode=series,
                            sub_bands=sub_bands, gap_db=gap)
                    except InfeasibleError:
                        point = None
                else:
                    if series == "uncoded":
                        point = uncoded_max_density(pe, fixed_pt, scenario)
                    else:
                        point = coded_max_density(pe, fixed_pt, scenario,
                                                  sub_bands, gap_db=gap)
                rows.append(_density_row(pe, series, gap, point))
        return header, rows

    if command == "density-practical":
        scenario = cfg.grid_scenario()
        code = cfg.practical_code()
        target = cfg.values["density.target_pe"]
        budgets = cfg.power_grid()
        unc = uncoded_density_curve(target, budgets, scenario, jobs=jobs)
        prac = practical_code_density_curve(code, budgets, scenario, jobs=jobs)
        header = ["p_budget_watts", "series", "spacing_m", "density_per_band",
                  "density_total", "p_t_watts", "feasible"]
        rows = []
        for budget, u, p in zip(budgets, unc, prac):
            rows.append(_budget_row(budget, "uncoded", u))
            rows.append(_budget_row(budget, "practical", p))
        return header, rows

    if command == "density-upper-bound":
        scenario = cfg.grid_scenario()
        tech = cfg.decoder_tech()
        target = cfg.values["density.target_pe"]
        points = optimal_code_density_upper_bound(
            cfg.power_grid(), scenario, tech, target, jobs=jobs)
        header = ["p_budget_watts", "spacing_m", "density_per_band",
                  "density_total", "p_t_watts", "sinr", "capacity_bits_per_use",
                  "shannon_min_sinr", "n_min", "l_min", "feasible"]
        rows = []
        for point in points:
            rows.append([
                point.total_power, point.spacing, point.density,
                point.density_total, point.transmit_power,
                _opt(point.sinr), _opt(point.capacity),
                _opt(point.shannon_min_sinr), _opt(point.neighborhood),
                _opt(point.iterations), 1.0 if point.feasible else 0.0])
        return header, rows

    raise ConfigError("command", f"unhandled command {command!r}")


def _opt(value):
    return math.nan if value is None else value


def _density_row(pe, series, gap, point):
    if point is None or not point.feasible:
        return [pe, series, gap, point.sub_bands if point else math.nan,
                math.nan, math.nan, math.nan, math.nan, 0.0]
    return [pe, series, gap, point.sub_bands, point.spacing, point.density,
            point.density_total, point.transmit_power, 1.0]


def _budget_row(budget, series, point):
    if not point.feasible:
        return [budget, series, math.nan, math.nan, math.nan, math.nan, 0.0]
    return [budget, series, point.spacing, point.density, point.density_total,
            point.transmit_power, 1.0]


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _format_cell(value):
    if isinstance(value, str):
        return value
    return f"{float(value):.17g}"


def _write_csv(path, command, cfg, header, rows):
    lines = [
        f"# command: {command}",
        f"# config_sha256: {cfg.digest()}",
        ",".join(header),
    ]
    for row in rows:
        lines.append(",".join(_format_cell(cell) for cell in row))
    payload = "\n".join(lines) + "\n"
    tmp = f"{path}.tmp.{os.getpid()}"
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(payload)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def _write_sidecar(path, command, cfg, jobs, started):
    meta = {
        "command": command,
        "config_sha256": cfg.digest(),
        "resolved_config": cfg.canonical_text(),
        "kernel_backend": _kernels.BACKEND,
        "jobs": jobs,
        "started_unix": started,
        "elapsed_seconds": time.time() - started,
    }
    with open(f"{path}.meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    sys.exit(main())
