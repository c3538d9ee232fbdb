"""
Wronsk Command-Line Interface

    python -m wronsk <solve|scan|critical|wavefunction|oracle> [options]

Potential (one of):
    --builtin NAME --param k=v [--param k=v ...]
    --expr "-5*exp(-x^2)"

Exit codes:
    0  success, including an empty result
    1  numerical failure (overflow, no convergence, state index out of range)
    2  usage error (bad flags, unknown potential, syntax, degenerate input)

Data goes to stdout (or --output); diagnostics go to stderr. Negative
values that are not plain decimals need the `=` form: --range=-5:-1.
"""

import argparse
import logging
import sys
from typing import Callable, Optional

import pandas as pd
from pydantic import ValidationError

from . import __version__
from .config import DEFAULT_JOBS, configure_logging
from .engines.oracle import exact_poschl_teller
from .engines.potential import (
    Parity, Potential, builtin, builtin_family, parse_potential, scaled_family,
)
from .engines.solver import (
    critical_couplings, energy_window, find_bound_states, scan_coupling,
    scan_energy, scan_position, wavefunction,
)
from .errors import DegenerateInputError, ParameterError, StateIndexError, WronskError
from .export import render_csv, render_table, write_output
from .schemas import RunConfig, SolverOptions, StateParity

logger = logging.getLogger("wronsk.cli")

SOLVE_COLUMNS = ["n", "energy", "parity", "B_div", "residual", "bracket_width", "low_confidence"]


# ---------------------------------------------------------------------------
# ARGUMENT PARSING
# ---------------------------------------------------------------------------

def _parse_param(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise ParameterError(f"--param expects key=value, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError:
        raise ParameterError(f"--param {key}: {value!r} is not a number") from None


def _parse_pair(text: str, sep: str, flag: str) -> tuple[float, float]:
    parts = text.split(sep)
    if len(parts) != 2:
        raise ParameterError(f"{flag} expects A{sep}B, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise ParameterError(f"{flag}: {text!r} is not a pair of numbers") from None


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    pot = common.add_argument_group("potential")
    pot.add_argument("--builtin", help="poschl_teller | gaussian | square_well")
    pot.add_argument("--param", action="append", default=[], metavar="K=V",
                     help="Built-in parameter, repeatable (e.g. v0=6)")
    pot.add_argument("--expr", help='Potential expression, e.g. "-5*exp(-x^2)"')

    num = common.add_argument_group("numerics")
    num.add_argument("--h", type=float, default=None, help="RK4 step (default 0.01)")
    num.add_argument("--x-eval", default="auto", help="Read point, or 'auto' (default)")
    num.add_argument("--x0", type=float, default=0.0, help="Matching point (default 0)")
    num.add_argument("--tol", type=float, default=None, help="Bracket tolerance (default 1e-9)")
    num.add_argument("--n-scan", type=int, default=None, help="Scan lattice size (default 400)")
    num.add_argument("--max-iter", type=int, default=None, help="Bisection budget (default 200)")
    num.add_argument("--brent", action="store_true", help="Refine with Brent instead of bisection")
    num.add_argument("--jobs", type=int, default=DEFAULT_JOBS, help="Worker threads for scans")

    rng = common.add_argument_group("ranges")
    rng.add_argument("--emin", type=float, help="Lower energy of the scan window")
    rng.add_argument("--emax", type=float, help="Upper energy of the scan window")
    rng.add_argument("--range", dest="value_range", metavar="LO:HI",
                     help="Coupling range (scan/critical) or x range (scan --mode x)")

    out = common.add_argument_group("output")
    out.add_argument("--output", help="Write here instead of stdout")
    out.add_argument("--format", dest="output_format", choices=["csv", "table"], default="csv")
    out.add_argument("--no-header", dest="header", action="store_false",
                     help="Omit the leading # metadata lines (the results footer is kept)")
    out.add_argument("--verbose", action="store_true", help="Log progress to stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wronsk",
        description="Bound states of 1D potentials by the Wronskian method.",
    )
    parser.add_argument("--version", action="version", version=f"wronsk {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    common = _common_options()

    sub.add_parser("solve", parents=[common], help="Find all bound states")

    scan = sub.add_parser("scan", parents=[common], help="Tabulate quantization conditions")
    scan.add_argument("--mode", choices=["energy", "coupling", "x"], default="energy")
    scan.add_argument("--energy", type=float, help="Fixed energy for --mode x")
    scan.add_argument("--coupling", default="v0", help="Parameter varied in coupling mode")

    crit = sub.add_parser("critical", parents=[common], help="Couplings where a state reaches threshold")
    crit.add_argument("--coupling", default="v0", help="Parameter varied (default v0)")

    wave = sub.add_parser("wavefunction", parents=[common], help="Sample a state's wavefunction")
    wave.add_argument("--energy", type=float, help="Energy to integrate at")
    wave.add_argument("--state", type=int, help="Solve first and take state N")
    wave.add_argument("--mixture", metavar="A,B", help="Coefficients of C and S")

    sub.add_parser("oracle", parents=[common], help="Exact Pöschl–Teller energies for --param v0=")
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    """Namespace → validated RunConfig; raises ParameterError / ValidationError."""
    params = dict(_parse_param(p) for p in args.param)
    x_eval = None if str(args.x_eval).lower() == "auto" else float(args.x_eval)
    solver_kwargs = {
        "x_eval": x_eval,
        "x0": args.x0,
        "eps_floor": args.emin,
        "eps_ceiling": args.emax,
        "method": "brent" if args.brent else "bisect",
        "jobs": args.jobs,
    }
    for key, value in (("h", args.h), ("tol", args.tol), ("n_scan", args.n_scan),
                       ("max_iter", args.max_iter)):
        if value is not None:
            solver_kwargs[key] = value
    mixture = getattr(args, "mixture", None)
    return RunConfig(
        subcommand=args.subcommand,
        builtin=args.builtin,
        params=params,
        expr=args.expr,
        solver=SolverOptions(**solver_kwargs),
        mode=getattr(args, "mode", "energy"),
        emin=args.emin,
        emax=args.emax,
        value_range=_parse_pair(args.value_range, ":", "--range") if args.value_range else None,
        energy=getattr(args, "energy", None),
        state=getattr(args, "state", None),
        coupling=getattr(args, "coupling", "v0"),
        mixture=_parse_pair(mixture, ",", "--mixture") if mixture else None,
        output=args.output,
        output_format=args.output_format,
        header=args.header,
    )


# ---------------------------------------------------------------------------
# HELPERS
# ---------------------------------------------------------------------------

def make_potential(config: RunConfig) -> Potential:
    if config.expr is not None:
        return parse_potential(config.expr)
    return builtin(config.builtin, config.params)


def make_family(config: RunConfig):
    if config.expr is not None:
        return scaled_family(parse_potential(config.expr))
    return builtin_family(config.builtin, config.params, config.coupling)


def metadata(config: RunConfig, p: Optional[Potential] = None) -> dict:
    opts = config.solver
    meta = {
        "wronsk": __version__,
        "command": config.subcommand,
        "potential": config.potential_spec,
    }
    if p is not None:
        meta.update({
            "parity": p.parity.value,
            "v_left_limit": p.v_left_limit,
            "v_right_limit": p.v_right_limit,
        })
    meta.update({
        "h": opts.h,
        "x_eval": "auto" if opts.x_eval is None else opts.x_eval,
        "x0": opts.x0,
        "tol": opts.tol,
        "n_scan": opts.n_scan,
        "method": opts.method,
    })
    return meta


def render(config: RunConfig, df: pd.DataFrame, meta: dict, footer: Optional[dict] = None) -> str:
    writer = render_table if config.output_format == "table" else render_csv
    return writer(df, meta, footer, header=config.header)


# ---------------------------------------------------------------------------
# COMMANDS
# ---------------------------------------------------------------------------

def cmd_solve(config: RunConfig) -> str:
    p = make_potential(config)
    states = find_bound_states(p, config.solver)
    df = pd.DataFrame(
        [
            {
                "n": s.index,
                "energy": s.energy,
                "parity": s.parity.value,
                "B_div": s.residual_divergent,
                "residual": s.wronskian_residual,
                "bracket_width": s.bracket_width,
                "low_confidence": s.low_confidence,
            }
            for s in states
        ],
        columns=SOLVE_COLUMNS,
    )
    return render(config, df, metadata(config, p), {"states": len(states)})


def cmd_scan(config: RunConfig) -> str:
    opts = config.solver
    if config.mode == "coupling":
        if config.value_range is None:
            raise ParameterError("scan --mode coupling needs --range LO:HI")
        lo, hi = config.value_range
        table = scan_coupling(make_family(config), lo, hi, opts.n_scan, opts, name=config.coupling)
        meta = metadata(config)
        meta["energy"] = "threshold"
    elif config.mode == "x":
        if config.energy is None or config.value_range is None:
            raise ParameterError("scan --mode x needs --energy E and --range LO:HI")
        p = make_potential(config)
        lo, hi = config.value_range
        table = scan_position(p, config.energy, lo, hi, opts)
        meta = metadata(config, p)
        meta["energy"] = config.energy
    else:
        p = make_potential(config)
        floor, ceiling = energy_window(p, opts)
        meta = metadata(config, p)
        meta["mode"] = config.mode
        if not floor < ceiling:
            # nothing lies below threshold: header-only table
            names = ["even", "odd"] if p.parity is Parity.EVEN_SYMMETRIC and opts.x0 == 0.0 else ["det"]
            return render(config, pd.DataFrame(columns=["energy", *names]), meta)
        table = scan_energy(p, floor, ceiling, opts.n_scan, opts)
    meta["mode"] = config.mode
    footer = {"skipped": len(table.skipped)} if len(table.skipped) else None
    return render(config, table.to_frame(), meta, footer)


def cmd_critical(config: RunConfig) -> str:
    if config.value_range is None:
        raise ParameterError("critical needs --range LO:HI")
    lo, hi = config.value_range
    found = critical_couplings(make_family(config), lo, hi, config.solver, name=config.coupling)
    df = pd.DataFrame(
        [
            {"index": c.index, config.coupling: c.coupling, "parity": c.parity.value,
             "bracket_width": c.bracket_width}
            for c in found
        ],
        columns=["index", config.coupling, "parity", "bracket_width"],
    )
    meta = metadata(config)
    meta["coupling"] = config.coupling
    return render(config, df, meta, {"critical": len(found)})


def cmd_wavefunction(config: RunConfig) -> str:
    if config.mixture is not None and config.mixture == (0.0, 0.0):
        raise DegenerateInputError("Mixture (0, 0) defines no wavefunction")
    p = make_potential(config)
    mixture, parity = config.mixture, None
    energy = config.energy
    if energy is None:
        n = config.state if config.state is not None else 0
        states = find_bound_states(p, config.solver)
        if n >= len(states):
            raise StateIndexError(
                f"State {n} requested but only {len(states)} bound state(s) found"
            )
        energy = states[n].energy
        parity = states[n].parity if states[n].parity is not StateParity.NONE else None
        if mixture is None:
            mixture = states[n].mixture
    wf = wavefunction(p, energy, mixture=mixture, parity=parity, opts=config.solver)
    meta = metadata(config, p)
    meta["energy"] = wf.energy
    footer = {
        "truncation_x": wf.truncation_x,
        "k": wf.k,
        "B_div": wf.b_div,
        "A_conv": wf.a_conv,
        "x_eval": wf.x_eval,
        "mixture": f"{wf.mixture[0]!r},{wf.mixture[1]!r}",
    }
    if wf.truncation_left is not None:
        footer["truncation_left"] = wf.truncation_left
    return render(config, wf.to_frame(), meta, footer)


def cmd_oracle(config: RunConfig) -> str:
    v0 = config.params["v0"]
    energies = exact_poschl_teller(v0)
    df = pd.DataFrame({"n": range(len(energies)), "energy": energies}, columns=["n", "energy"])
    meta = {"wronsk": __version__, "command": "oracle", "v0": v0}
    return render(config, df, meta, {"states": len(energies)})


COMMANDS: dict[str, Callable[[RunConfig], str]] = {
    "solve": cmd_solve,
    "scan": cmd_scan,
    "critical": cmd_critical,
    "wavefunction": cmd_wavefunction,
    "oracle": cmd_oracle,
}


# ---------------------------------------------------------------------------
# ENTRY POINT
# ---------------------------------------------------------------------------

def main(argv: Optional[list[str]] = None) -> int:
    """Run one command; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    configure_logging("INFO" if args.verbose else None)
    try:
        config = build_config(args)
        text = COMMANDS[config.subcommand](config)
    except ValidationError as exc:
        print(f"wronsk: usage error: {exc}", file=sys.stderr)
        return 2
    except WronskError as exc:
        logger.debug("command failed", exc_info=True)
        print(f"wronsk: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        # float() on --x-eval and similar conversions
        print(f"wronsk: usage error: {exc}", file=sys.stderr)
        return 2

    write_output(text, config.output, sys.stdout)
    return 0
