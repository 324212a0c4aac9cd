"""Command-line front end.

Usage examples::

    qdot-numerov table2 --omega 0.01
    qdot-numerov wavefunction --omega 0.5 --nodes 0 --out ground.csv
    qdot-numerov bound --omega 0.01 --format json
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass

from . import __version__
from .analytic import BOUND_STATE_ETA, TABLE2_WINDOW
from .errors import DomainError, QDotError, ScanError
from .model import Grid, RadialProblem, bound_state_grid, default_grid, spectrum_lower_bound
from .output import FORMATS, SOLVER_SETTINGS, emit_wavefunction, energy, grid_metadata, write_table
from .reproduce import energy_ladder, reproduce_table1, reproduce_table2
from .solver import BOUND_STATE_FLOOR, bracket_eigenvalues, find_bound_state, \
    refine_eigenvalue, scan_spectrum, solve_by_nodes

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_IO = 0, 2, 3, 4
COMMANDS = ("solve", "scan", "nodes", "bound", "table1", "table2", "figure1", "wavefunction")


@dataclass(frozen=True)
class RunConfig:
    command: str
    omega: float = 0.01
    ell: int = 0
    window: tuple[float, float] | None = None
    nodes: int | None = None
    coulomb: bool = True
    r_min: float | None = None
    r_max: float | None = None
    step: float | None = None
    out: str = "-"
    format: str = "csv"

    def validate(self):
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise DomainError(f"unknown format {self.format!r}")
        RadialProblem(self.omega, self.ell, self.coulomb)
        if self.window is not None and not self.window[0] < self.window[1]:
            raise DomainError(f"window must satisfy lo < hi, got {self.window}")
        if self.command in ("solve", "scan") and self.window is None:
            raise DomainError(f"{self.command} needs --window LO HI")
        if self.nodes is not None and self.nodes < 0:
            raise DomainError("--nodes must be >= 0")
        if self.command == "nodes" and self.nodes is None:
            raise DomainError("nodes needs --nodes N")
        for name in ("r_min", "r_max", "step"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise DomainError(f"--{name.replace('_', '-')} must be > 0")

    def metadata(self) -> dict:
        meta = {"artifact_version": __version__}
        for key, value in asdict(self).items():
            if key == "out":
                continue
            if isinstance(value, tuple):
                value = " ".join(f"{v:g}" for v in value)
            meta[f"config.{key}"] = "" if value is None else str(value)
        return meta


def _problem(cfg: RunConfig) -> RadialProblem:
    return RadialProblem(cfg.omega, cfg.ell, cfg.coulomb)


def _grid(cfg: RunConfig, problem: RadialProblem, eta_hi: float) -> Grid:
    """Default grid for ``eta_hi`` with any command-line overrides applied."""
    if cfg.r_min is None and cfg.r_max is None and cfg.step is None:
        return default_grid(problem, eta_hi)
    base = default_grid(problem, eta_hi)
    step = cfg.step if cfg.step is not None else base.step
    r_min = cfg.r_min if cfg.r_min is not None else step
    r_max = cfg.r_max if cfg.r_max is not None else base.r_max
    return Grid.from_bounds(r_min, r_max, step)


def _node_energy_guess(problem, nodes):
    # generous upper estimate used only to size an overridden grid
    return spectrum_lower_bound(problem) + 8.0 * problem.omega * (nodes + 2)


def _status(exc: Exception | None) -> str:
    if exc is None:
        return "ok"
    return f"error {type(exc).__name__}: {exc}".replace(",", ";")


def _state_rows(results):
    return [(r.node_count, energy(r.eta), f"{r.defect_residual:.3e}", r.iterations, "ok")
            for r in results]


STATE_COLUMNS = ("nodes", "eta", "defect_residual", "iterations", "status")


def _scan_like(cfg, meta, first_only=False):
    problem = _problem(cfg)
    lo, hi = cfg.window
    grid = _grid(cfg, problem, hi)
    meta.update(grid_metadata(grid))
    status = EXIT_OK
    if first_only:
        brackets = bracket_eigenvalues(problem, grid, lo, hi, max_states=1)
        results = [refine_eigenvalue(problem, grid, brackets[0])] if brackets else []
        rows = _state_rows(results)
        if not results:
            meta["note"] = "no state in window"
    else:
        try:
            results = scan_spectrum(problem, lo, hi, grid=grid)
            failures = []
        except ScanError as exc:
            results, failures = exc.results, exc.failures
            status = EXIT_SOLVER
        rows = _state_rows(results)
        rows += [(b.node_count, "", "", "", _status(e)) for b, e in failures]
    meta["states_found"] = str(len(results))
    write_table(cfg.out, cfg.format, meta, STATE_COLUMNS, rows)
    return status


def _cmd_solve(cfg, meta):
    return _scan_like(cfg, meta, first_only=True)


def _cmd_scan(cfg, meta):
    return _scan_like(cfg, meta)


def _cmd_nodes(cfg, meta):
    problem = _problem(cfg)
    grid = None
    if cfg.r_min is not None or cfg.r_max is not None or cfg.step is not None:
        grid = _grid(cfg, problem, _node_energy_guess(problem, cfg.nodes))
    result = solve_by_nodes(problem, cfg.nodes, grid=grid)
    meta.update(grid_metadata(result.grid))
    write_table(cfg.out, cfg.format, meta, STATE_COLUMNS, _state_rows([result]))
    return EXIT_OK


def _cmd_wavefunction(cfg, meta):
    problem = _problem(cfg)
    grid = None
    if cfg.r_min is not None or cfg.r_max is not None or cfg.step is not None:
        grid = _grid(cfg, problem, _node_energy_guess(problem, cfg.nodes or 0))
    result = solve_by_nodes(problem, cfg.nodes or 0, grid=grid)
    emit_wavefunction(result, cfg.out, cfg.format, metadata=meta)
    return EXIT_OK


def _cmd_bound(cfg, meta):
    problem = _problem(cfg)
    grid = bound_state_grid(problem, step=cfg.step or 1e-4)
    if cfg.r_min is not None or cfg.r_max is not None:
        grid = Grid.from_bounds(cfg.r_min or grid.step, cfg.r_max or grid.r_max, grid.step)
    floor = cfg.window[0] if cfg.window else BOUND_STATE_FLOOR
    meta.update(grid_metadata(grid))
    meta["eta_floor"] = f"{floor:g}"
    meta["reported_eta"] = f"{BOUND_STATE_ETA:g}"
    meta["note"] = ("ell=0 sits at the critical inverse-square coupling; negative-energy "
                    "states depend on the short-distance regularization (grid above)")
    result = find_bound_state(problem, grid, eta_floor=floor)
    meta["bound_state_found"] = str(result is not None).lower()
    rows = []
    if result is not None:
        rows.append((result.node_count, energy(result.eta), f"{result.defect_residual:.3e}",
                     result.iterations, "ok"))
    write_table(cfg.out, cfg.format, meta, STATE_COLUMNS, rows)
    return EXIT_OK


def _comparison_rows(comparisons, lead):
    rows, failed = [], False
    for c in comparisons:
        ref = c.reference
        if c.result is None:
            failed = True
            rows.append((*lead(ref), energy(ref.eta_analytic), energy(ref.eta_reported),
                         "", "", "", "error: state not found"))
            continue
        rows.append((*lead(ref), energy(ref.eta_analytic), energy(ref.eta_reported),
                     energy(c.eta_numerical), energy(c.abs_diff), c.result.node_count, "ok"))
    return rows, failed


def _cmd_table1(cfg, meta):
    comps = reproduce_table1()
    rows, failed = _comparison_rows(comps, lambda r: (r.n, f"{r.omega:g}"))
    write_table(cfg.out, cfg.format, meta,
                ("n", "omega", "eta_analytic", "eta_reported", "eta_numerical", "abs_diff",
                 "nodes", "status"), rows)
    return EXIT_SOLVER if failed else EXIT_OK


def _cmd_table2(cfg, meta):
    window = cfg.window or TABLE2_WINDOW
    comps = reproduce_table2(omega=cfg.omega, window=window)
    meta["omega"] = f"{cfg.omega:g}"
    rows, failed = _comparison_rows(comps, lambda r: (r.ell, r.n))
    write_table(cfg.out, cfg.format, meta,
                ("ell", "n_reported", "eta_analytic", "eta_reported", "eta_numerical", "abs_diff",
                 "nodes", "status"), rows)
    return EXIT_SOLVER if failed else EXIT_OK


def _cmd_figure1(cfg, meta):
    window = cfg.window or TABLE2_WINDOW
    results, slope = energy_ladder(cfg.omega, cfg.ell, window)
    meta["slope_per_state"] = energy(slope)
    rows = [(i, r.node_count, energy(r.eta)) for i, r in enumerate(results)]
    write_table(cfg.out, cfg.format, meta, ("index", "nodes", "eta"), rows)
    return EXIT_OK


_HANDLERS = {
    "solve": _cmd_solve, "scan": _cmd_scan, "nodes": _cmd_nodes, "bound": _cmd_bound,
    "table1": _cmd_table1, "table2": _cmd_table2, "figure1": _cmd_figure1,
    "wavefunction": _cmd_wavefunction,
}


def _error_record(kind, exc):
    record = {"error": kind, "type": type(exc).__name__, "message": str(exc)}
    sys.stderr.write(json.dumps(record) + "\n")


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        cfg.validate()
    except DomainError as exc:
        _error_record("usage", exc)
        return EXIT_USAGE
    meta = cfg.metadata()
    meta.update(SOLVER_SETTINGS)
    try:
        return _HANDLERS[cfg.command](cfg, meta)
    except OSError as exc:
        _error_record("io", exc)
        return EXIT_IO
    except DomainError as exc:
        _error_record("usage", exc)
        return EXIT_USAGE
    except QDotError as exc:
        _error_record("solver", exc)
        return EXIT_SOLVER


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--omega", type=float, default=0.01, help="confinement frequency (Ha)")
    common.add_argument("--ell", type=int, default=0, help="angular momentum quantum number")
    common.add_argument("--window", type=float, nargs=2, metavar=("LO", "HI"),
                        help="energy window (Ha)")
    common.add_argument("--nodes", type=int, help="radial node count of the target state")
    common.add_argument("--no-coulomb", dest="coulomb", action="store_false",
                        help="drop the 1/r term (pure 2D oscillator)")
    common.add_argument("--r-min", type=float, help="inner grid radius (bohr)")
    common.add_argument("--r-max", type=float, help="outer grid radius (bohr)")
    common.add_argument("--step", type=float, help="grid spacing (bohr)")
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--format", choices=FORMATS, default="csv")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="qdot-numerov",
        description="Numerov shooting solver for the two-electron quantum-dot radial equation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "solve": "lowest state inside --window",
        "scan": "every state inside --window",
        "nodes": "state with --nodes radial nodes",
        "bound": "negative-energy state search (ell=0)",
        "table1": "reproduce the polynomial-frequency comparison table",
        "table2": "reproduce the omega=0.01 table for ell=0,1,2",
        "figure1": "energy ladder and its slope",
        "wavefunction": "emit u(r) of the state with --nodes nodes",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = RunConfig(command=args.command, omega=args.omega, ell=args.ell,
                    window=tuple(args.window) if args.window else None, nodes=args.nodes,
                    coulomb=args.coulomb, r_min=args.r_min, r_max=args.r_max, step=args.step,
                    out=args.out, format=args.format)
    return run(cfg)
