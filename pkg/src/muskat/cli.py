"""Batch command-line entry point.

Subcommands: ``run`` (simulate and record a trajectory), ``linear``
(semigroup norm tables), ``bounds`` (majorant sweeps), ``consts``
(admissible small-data constants), ``fit`` (exponent fit on a CSV),
``verify`` (property suites).

Exit codes: 0 ok, 1 suite or monitor failure, 2 configuration error,
3 blow-up.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import config as config_mod
from . import decay, rhs, series, verify
from .errors import BlowUpError, ConfigurationError, MuskatError, PreconditionError
from .evolve import run as run_simulation

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_BLOWUP = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="muskat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate the interface equation")
    p_run.add_argument("--config", help="flat key=value config file")
    p_run.add_argument("--out", default=".", help="output directory")
    p_run.add_argument("--seed", type=int, help="override initial.seed")
    p_run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override any config key (repeatable)")

    p_lin = sub.add_parser("linear", help="semigroup norm table for a radial profile")
    p_lin.add_argument("--d", type=int, default=1, choices=(1, 2))
    p_lin.add_argument("--a", type=float, default=1.0, help="low-frequency exponent")
    p_lin.add_argument("--s", type=float, default=1.0, help="norm exponent")
    p_lin.add_argument("--t-max", type=float, default=1000.0)
    p_lin.add_argument("--points", type=int, default=60)
    p_lin.add_argument("--out", default="linear.csv")

    p_bounds = sub.add_parser("bounds", help="majorant bound sweep on random fields")
    p_bounds.add_argument("--d", type=int, default=1, choices=(1, 2))
    p_bounds.add_argument("--count", type=int, default=25)
    p_bounds.add_argument("--seed", type=int, default=0)
    p_bounds.add_argument("--target", type=float, default=0.15)
    p_bounds.add_argument("--s-list", default="1,2")
    p_bounds.add_argument("--out", default="bounds.csv")

    p_consts = sub.add_parser("consts", help="admissible small-data constants")
    p_consts.add_argument("--dim", type=int, default=3, choices=(2, 3),
                          help="ambient dimension of the fluid problem")
    p_consts.add_argument("--delta", type=float, default=0.01)

    p_fit = sub.add_parser("fit", help="log-log exponent fit on an existing CSV")
    p_fit.add_argument("--csv", required=True)
    p_fit.add_argument("--col", required=True, help="column name to fit, e.g. s=1")
    p_fit.add_argument("--t-col", default="t")
    p_fit.add_argument("--window", nargs=2, type=float, metavar=("LO", "HI"), required=True)
    p_fit.add_argument("--expected", type=float, help="expected slope; gates the exit code")
    p_fit.add_argument("--rtol", type=float, default=0.01)
    p_fit.add_argument("--out", help="write a one-row fit CSV here")
    p_fit.add_argument("--s", type=float, default=float("nan"))
    p_fit.add_argument("--nu", type=float, default=float("nan"))

    p_verify = sub.add_parser("verify", help="run a named property suite")
    p_verify.add_argument("suite", choices=("norms", "rhs", "bounds", "decay", "all"))
    p_verify.add_argument("--seed", type=int, default=0)
    return parser


def _read_table(path: str) -> dict[str, np.ndarray]:
    with open(path) as fh:
        header = [c.strip() for c in fh.readline().strip().split(",")]
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.size == 0:
        raise ConfigurationError(f"empty CSV: {path}")
    return {name: data[:, i] for i, name in enumerate(header)}


def cmd_run(args) -> int:
    values = config_mod.load_config(args.config) if args.config else {}
    values = config_mod.apply_overrides(values, args.set)
    if args.seed is not None:
        values["initial.seed"] = args.seed
    cfg = config_mod.build_simulation_config(values)
    os.makedirs(args.out, exist_ok=True)
    out_path = os.path.join(args.out, "trajectory.csv")
    try:
        record = run_simulation(cfg)
    except BlowUpError as err:
        if err.record is not None and err.record.times.size:
            partial = os.path.join(args.out, "trajectory_partial.csv")
            err.record.write_csv(partial)
            print(f"blow-up: last valid snapshots written to {partial}")
        else:
            print("blow-up before the first snapshot")
        return EXIT_BLOWUP
    record.write_csv(out_path)
    print(f"trajectory: {out_path} ({record.times.size} snapshots)")
    print("monitor summary:")
    failed = 0
    for result in record.monitors.values():
        print(f"  {result}")
        failed += 0 if result.passed else 1
    if failed and cfg.monitor_mode == "warn":
        print(f"warning: {failed} monitor(s) failed; exit forced to 0 by monitor_mode=warn")
        return EXIT_OK
    return EXIT_FAIL if failed else EXIT_OK


def cmd_linear(args) -> int:
    profile = decay.RadialProfile(a=args.a, d=args.d)
    times = np.concatenate([[0.0], np.geomspace(0.1, args.t_max, args.points)])
    with open(args.out, "w") as fh:
        fh.write("t,closed,quadrature\n")
        for t in times:
            closed = decay.semigroup_norm_closed(profile, args.s, t)
            quadv = decay.semigroup_norm_quadrature(profile, args.s, t)
            fh.write(f"{t:.12e},{closed:.12e},{quadv:.12e}\n")
    expected = -(args.s + args.a + args.d)
    print(f"semigroup table: {args.out} (expected log-log slope {expected:g})")
    return EXIT_OK


def cmd_bounds(args) -> int:
    from .grid import GridSpec
    from .spectral import analyze, random_band_field, s_norm

    grid = GridSpec(d=args.d, n=256 if args.d == 1 else 32)
    quad = rhs.QuadratureConfig()
    s_values = [float(p) for p in args.s_list.split(",") if p.strip()]
    rng = np.random.default_rng(args.seed)
    reports = []
    all_hold = True
    for _ in range(args.count):
        band = (1, int(rng.integers(2, grid.n // 4)))
        f = random_band_field(grid, band, int(rng.integers(0, 2**31)))
        f *= args.target / s_norm(analyze(f, grid), 1.0)
        for s in s_values:
            rep = rhs.fourier_bound_report(f, grid, s, quad)
            reports.append(rep)
            all_hold = all_hold and rep.holds
    rhs.append_bounds_csv(args.out, reports)
    print(f"bounds: {len(reports)} checks, all_hold={all_hold}, csv={args.out}")
    return EXIT_OK if all_hold else EXIT_FAIL


def cmd_consts(args) -> int:
    claimed = 0.2 if args.dim == 3 else 1.0 / 3.0
    value, tail = series.admissibility_series(args.dim, claimed, args.delta)
    kstar = series.admissible_constant(args.dim, args.delta)
    admissible = value + tail <= 1.0
    label = "k0" if args.dim == 3 else "c0"
    print(f"dim={args.dim} delta={args.delta}")
    print(f"series value at {label}={claimed:.6f}: {value:.6f} (tail bound {tail:.3e})")
    print(f"bisected maximal constant: {kstar:.6f}")
    print("PASS" if admissible else "FAIL")
    return EXIT_OK if admissible else EXIT_FAIL


def cmd_fit(args) -> int:
    table = _read_table(args.csv)
    if args.col not in table:
        raise ConfigurationError(f"column {args.col!r} not in {sorted(table)}")
    if args.t_col not in table:
        raise ConfigurationError(f"time column {args.t_col!r} not in {sorted(table)}")
    fit = decay.fit_exponent(table[args.t_col], table[args.col], tuple(args.window))
    print(f"slope={fit.slope:.6f} intercept={fit.intercept:.6f} r2={fit.r2:.8f}")
    if args.out:
        expected = args.expected if args.expected is not None else float("nan")
        decay.write_fit_csv(args.out, [(args.s, args.nu, fit, expected)])
        print(f"fit csv: {args.out}")
    if args.expected is not None:
        ok = abs(fit.slope - args.expected) <= args.rtol * abs(args.expected)
        print("PASS" if ok else "FAIL")
        return EXIT_OK if ok else EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = verify.run_suite(args.suite, seed=args.seed)
    failed = 0
    for name, passed, detail in checks:
        print(f"{'PASS' if passed else 'FAIL'} {name} {detail}")
        failed += 0 if passed else 1
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": cmd_run,
        "linear": cmd_linear,
        "bounds": cmd_bounds,
        "consts": cmd_consts,
        "fit": cmd_fit,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except (ConfigurationError, PreconditionError) as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except BlowUpError as err:
        print(f"blow-up: {err}", file=sys.stderr)
        return EXIT_BLOWUP
    except MuskatError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
