"""Command-line front end: time series, sweeps, critical-time tables and verification.

Exit codes: 0 success, 1 invalid configuration, 2 numerical guard violation,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import critical, metrics, verify
from .critical import CriticalTimeTable
from .errors import GuardViolation
from .labels import scaled_labels
from .oracle import compare, oracle_samples
from .params import Regime, classify_regime

SCHEMA = 1
EXIT_OK, EXIT_CONFIG, EXIT_GUARD, EXIT_VERIFY = 0, 1, 2, 3

SERIES_COLUMNS = ("t_prime", "Gamma", "theta", "concurrence", "linear_entropy", "abs_alpha", "abs_beta")
ORACLE_COLUMNS = ("concurrence_oracle", "entropy_oracle", "element_dev")
TABLE_COLUMNS = ("Gamma", "kind", "n", "t_prime", "value")

DEFAULTS = {
    "timeseries": dict(gamma_ratio=None, theta=math.pi / 2, omega_ratio=1.0, t_max=10.0,
                       points=201, oracle=False, out="-", format="csv", convention="printed"),
    "sweep": dict(gamma_grid=None, theta=math.pi / 2, t_max=10.0, points=201, maxima_table=False,
                  out="-", format="csv", convention="printed", workers=None),
    "critical": dict(gamma_ratio=None, theta=math.pi / 2, n_max=3, out="-", format="csv",
                     convention="printed"),
    "verify": dict(profile="quick", out="-", tolerance=None),
}


class ConfigError(ValueError):
    """Invalid command-line or config-file input."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def fmt(x) -> str:
    """Shortest round-trip text of ``x`` rounded to 12 significant digits."""
    if isinstance(x, (str, np.str_)):
        return str(x)
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(f"{float(x):.12g}"))


def _round(x):
    if isinstance(x, (str, np.str_)):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(f"{float(x):.12g}")


def parse_grid(text: str) -> np.ndarray:
    """``a:b:step`` inclusive of ``b`` when it lies on the grid."""
    try:
        a, b, step = (float(v) for v in str(text).split(":"))
    except ValueError:
        raise ConfigError(f"grid must be 'start:stop:step', got {text!r}") from None
    if step <= 0 or b < a:
        raise ConfigError(f"grid {text!r} is not increasing")
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    return np.round(a + step * np.arange(count), 12)


def time_grid(t_max: float, points: int) -> np.ndarray:
    if points < 2 or not t_max > 0:
        raise ConfigError("need t_max > 0 and at least 2 points")
    return np.linspace(0.0, t_max, points)


def series_rows(Gamma: float, theta: float, times: np.ndarray, convention: str,
                Omega: float = 1.0) -> list[tuple]:
    conc = metrics.concurrence_closed(times, Gamma, theta, convention)
    ent = metrics.linear_entropy_osc1(times, Gamma, theta, convention)
    alpha, beta = scaled_labels(times, Gamma, Omega)
    return [(t, Gamma, theta, c, e, abs(a), abs(b))
            for t, c, e, a, b in zip(times, conc, ent, alpha, beta)]


def maxima_rows(Gamma: float, theta: float, n_max: int, convention: str) -> list[tuple]:
    """Concurrence maxima and zeros (per-Gamma data behind the maxima curves)."""
    regime = classify_regime(Gamma)
    if regime is Regime.UNDERDAMPED:
        table = critical.conc_maxima_ud(Gamma, theta, n_max, convention).merged(
            critical.conc_zeros_ud(Gamma, n_max, convention, theta))
    elif regime is Regime.OVERDAMPED:
        table = critical.conc_maxima_od(Gamma, theta, convention)
    else:
        table = CriticalTimeTable()
    return [(Gamma, e.kind.value, e.n, e.t_prime, e.value) for e in table.entries]


def critical_rows(Gamma: float, theta: float, n_max: int, convention: str) -> list[tuple]:
    table = CriticalTimeTable()
    regime = classify_regime(Gamma)
    if regime is Regime.UNDERDAMPED:
        table = (critical.conc_zeros_ud(Gamma, n_max, convention, theta)
                 .merged(critical.conc_maxima_ud(Gamma, theta, n_max, convention))
                 .merged(critical.entropy_extrema(Gamma, n_max, convention, theta)))
    else:
        if regime is Regime.OVERDAMPED:
            table = critical.conc_maxima_od(Gamma, theta, convention)
        first = critical.entropy_half_crossing(Gamma, convention)
        value = float(metrics.linear_entropy_osc1(first, Gamma, theta, convention))
        table = table.merged(CriticalTimeTable([
            critical.CriticalTime(critical.Kind.ENTROPY_FIRST_MAX, 0, first, value)]))
    return [(Gamma, e.kind.value, e.n, e.t_prime, e.value) for e in table.entries]


def render(columns, rows, fmt_name: str, meta: dict, footer: list[str] = ()) -> str:
    if fmt_name == "csv":
        lines = [",".join(columns)]
        lines += [",".join(fmt(v) for v in row) for row in rows]
        lines += [f"# {text}" for text in footer]
        return "\n".join(lines) + "\n"
    doc = {"schema": SCHEMA, **meta, "columns": list(columns),
           "rows": [[_round(v) for v in row] for row in rows]}
    if footer:
        doc["notes"] = list(footer)
    return json.dumps(doc, indent=1) + "\n"


def write(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)


def companion_path(path: str, suffix: str) -> str:
    root, ext = os.path.splitext(path)
    return f"{root}.{suffix}{ext or '.csv'}"


def cmd_timeseries(cfg: dict) -> int:
    times = time_grid(cfg["t_max"], cfg["points"])
    G, theta, conv = cfg["gamma_ratio"], cfg["theta"], cfg["convention"]
    rows = series_rows(G, theta, times, conv, cfg["omega_ratio"])
    columns, footer = SERIES_COLUMNS, []
    if cfg["oracle"]:
        samples = oracle_samples(G, theta, times, Omega=cfg["omega_ratio"])
        r = compare(samples, conv)
        rows = [row + extra for row, extra in
                zip(rows, zip(r.concurrence_oracle, samples.entropies, r.element_dev))]
        columns = SERIES_COLUMNS + ORACLE_COLUMNS
        footer = [f"max |C - C_oracle| = {fmt(r.max_concurrence_dev)}",
                  f"max |delta_1 - delta_1_oracle| = {fmt(r.max_entropy_dev)}",
                  f"max element deviation = {fmt(r.max_element_dev)}"]
    write(render(columns, rows, cfg["format"], {"command": "timeseries", "config": _public(cfg)},
                 footer), cfg["out"])
    return EXIT_OK


def cmd_sweep(cfg: dict) -> int:
    gammas = parse_grid(cfg["gamma_grid"])
    times = time_grid(cfg["t_max"], cfg["points"])
    theta, conv = cfg["theta"], cfg["convention"]
    with ThreadPoolExecutor(max_workers=cfg["workers"]) as pool:
        # map preserves grid order whatever the completion order
        blocks = list(pool.map(lambda G: series_rows(float(G), theta, times, conv), gammas))
    rows = [row for block in blocks for row in block]
    meta = {"command": "sweep", "config": _public(cfg)}
    write(render(SERIES_COLUMNS, rows, cfg["format"], meta), cfg["out"])
    if cfg["maxima_table"]:
        table = [row for G in gammas for row in maxima_rows(float(G), theta, 2, conv)]
        path = "-" if cfg["out"] == "-" else companion_path(cfg["out"], "maxima")
        write(render(TABLE_COLUMNS, table, cfg["format"], meta), path)
    return EXIT_OK


def cmd_critical(cfg: dict) -> int:
    rows = critical_rows(cfg["gamma_ratio"], cfg["theta"], cfg["n_max"], cfg["convention"])
    write(render(TABLE_COLUMNS, rows, cfg["format"],
                 {"command": "critical", "config": _public(cfg)}), cfg["out"])
    return EXIT_OK


def cmd_verify(cfg: dict) -> int:
    results = verify.run_all(cfg["profile"], cfg["tolerance"])
    for r in results:
        print(r.line(), file=sys.stderr)
    passed = all(r.passed for r in results)
    report = {"schema": SCHEMA, "command": "verify", "profile": cfg["profile"],
              "passed": passed, "checks": [r.to_dict() for r in results]}
    write(json.dumps(report, indent=1, default=float) + "\n", cfg["out"])
    return EXIT_OK if passed else EXIT_VERIFY


COMMANDS = {"timeseries": cmd_timeseries, "sweep": cmd_sweep, "critical": cmd_critical,
            "verify": cmd_verify}


def _public(cfg: dict) -> dict:
    return {k: v for k, v in cfg.items() if k not in ("out", "config", "workers")}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coupledosc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, out_help="output file, '-' for stdout"):
        p.add_argument("--config", help="JSON file of option values; flags override it")
        p.add_argument("--out", help=out_help)
        p.add_argument("--format", choices=("csv", "json"))

    def physics(p):
        p.add_argument("--theta", type=float, help="initial-state angle, default pi/2")
        p.add_argument("--convention", choices=("printed", "physical"),
                       help="sign convention of the closed forms")

    p = sub.add_parser("timeseries", help="metrics along t' for one Gamma")
    p.add_argument("--gamma-ratio", type=float, help="Gamma = gamma/g")
    p.add_argument("--omega-ratio", type=float, help="Omega = omega/g, default 1")
    p.add_argument("--t-max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--oracle", action="store_true", default=None,
                   help="also integrate the master equation and compare")
    physics(p)
    common(p)

    p = sub.add_parser("sweep", help="metrics over a (t', Gamma) grid")
    p.add_argument("--gamma-grid", help="start:stop:step")
    p.add_argument("--t-max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--maxima-table", action="store_true", default=None,
                   help="write concurrence maxima and zeros to a companion file")
    p.add_argument("--workers", type=int)
    physics(p)
    common(p)

    p = sub.add_parser("critical", help="critical-time table for one Gamma")
    p.add_argument("--gamma-ratio", type=float)
    p.add_argument("--n-max", type=int)
    physics(p)
    common(p)

    p = sub.add_parser("verify", help="acceptance checks as a JSON report")
    p.add_argument("--profile", choices=("quick", "full"))
    p.add_argument("--tolerance", type=float, help="replace every tolerance (negative control)")
    p.add_argument("--config")
    p.add_argument("--out")
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    """Built-in defaults, then the JSON file, then explicit flags."""
    cfg = dict(DEFAULTS[args.command])
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        unknown = set(loaded) - set(cfg)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    cfg.update({k: v for k, v in vars(args).items() if v is not None and k in cfg})
    for key in ("gamma_ratio", "gamma_grid"):
        if key in cfg and cfg[key] is None:
            raise ConfigError(f"--{key.replace('_', '-')} is required")
    if cfg.get("gamma_ratio") is not None and not cfg["gamma_ratio"] >= 0:
        raise ConfigError("Gamma must be nonnegative")
    if "theta" in cfg and not 0 <= cfg["theta"] <= math.pi / 2:
        raise ConfigError("theta must lie in [0, pi/2]")
    if cfg.get("n_max") is not None and cfg["n_max"] < 0:
        raise ConfigError("n_max must be nonnegative")
    return cfg


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GuardViolation as exc:
        print(f"numerical guard violated: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ValueError, OSError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
