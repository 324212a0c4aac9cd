"""Energy-space search: bracketing, bisection refinement, spectrum scans."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (BoundStateAmbiguityError, BracketingError, GridTooShortError, MatchingError,
                     QDotError, RefinementError, ScanError, StateNotFoundError)
from .model import Grid, RadialProblem, bound_state_grid, default_grid, spectrum_lower_bound
from .numerov import MatchReport, Wavefunction, assemble_wavefunction, match_defect, normalize

log = logging.getLogger(__name__)

SCAN_RESOLUTION = 400
MAX_SUBDIVISION_DEPTH = 16
DEFECT_TOL = 1e-9
ENERGY_RTOL = 1e-10
MAX_BISECTIONS = 200
BOUND_STATE_FLOOR = -200.0


class Bracket(NamedTuple):
    lo: float
    hi: float
    node_count: int


@dataclass(frozen=True, eq=False)
class EigenResult:
    problem: RadialProblem
    eta: float
    node_count: int
    wavefunction: Wavefunction
    defect_residual: float
    grid: Grid
    iterations: int
    bracket: tuple[float, float]
    match_index: int


def _probe(problem, grid, eta, seed, match_index=None) -> MatchReport | None:
    try:
        return match_defect(problem, eta, grid, match_index=match_index, seed=seed)
    except (BracketingError, GridTooShortError, MatchingError):
        return None


def bracket_eigenvalues(problem: RadialProblem, grid: Grid, eta_lo: float, eta_hi: float,
                        max_states: int | None = None, resolution: int = SCAN_RESOLUTION,
                        seed: str = "regular") -> list[Bracket]:
    """Disjoint, ascending energy intervals each holding one eigenvalue.

    The window is sampled at ``resolution`` equal subdivisions.  An interval
    is kept when the defect goes from positive to non-positive while the
    node count is unchanged.  Intervals where the node count jumps in any
    other way than across a single clean pole are bisected locally.
    """
    if not eta_lo < eta_hi:
        raise ValueError(f"need eta_lo < eta_hi, got {eta_lo!r}, {eta_hi!r}")
    etas = np.linspace(eta_lo, eta_hi, resolution + 1)
    probes = [_probe(problem, grid, float(e), seed) for e in etas]
    found: list[Bracket] = []

    def examine(a, pa, b, pb, depth):
        if pa is not None and pb is not None:
            na, nb = pa.node_count, pb.node_count
            if na == nb:
                if pa.defect > 0 >= pb.defect:
                    found.append(Bracket(a, b, na))
                return
            if nb == na + 1 and pa.defect < 0 < pb.defect:
                return
        elif pa is None and pb is None:
            return
        if depth >= MAX_SUBDIVISION_DEPTH:
            if pa is not None and pb is not None:
                log.warning("unresolved node-count jump in [%.9g, %.9g]", a, b)
            return
        mid = 0.5 * (a + b)
        pm = _probe(problem, grid, mid, seed)
        examine(a, pa, mid, pm, depth + 1)
        examine(mid, pm, b, pb, depth + 1)

    for i in range(resolution):
        examine(float(etas[i]), probes[i], float(etas[i + 1]), probes[i + 1], 0)
        if max_states is not None and len(found) >= max_states:
            break
    found.sort()
    return found[:max_states] if max_states is not None else found


def refine_eigenvalue(problem: RadialProblem, grid: Grid, bracket, seed: str = "regular"
                      ) -> EigenResult:
    """Bisect the defect inside ``bracket`` and return the normalized state.

    The matching index is frozen for the whole bisection so the defect is a
    continuous function of the energy.  Bisection stops once the interval is
    narrower than 1e-10*max(1, |eta|) and the residual defect is below 1e-9.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    label = bracket[2] if len(bracket) > 2 else None
    m = None
    for end in (lo, hi):
        p = _probe(problem, grid, end, seed)
        if p is None:
            continue
        plo = _probe(problem, grid, lo, seed, match_index=p.match_index)
        phi = _probe(problem, grid, hi, seed, match_index=p.match_index)
        if plo is not None and phi is not None and plo.defect > 0 >= phi.defect:
            m = p.match_index
            if label is None:
                label = plo.node_count
            break
    if m is None:
        raise RefinementError(
            f"no defect sign change across [{lo:.12g}, {hi:.12g}]; refine the grid")

    iterations = 0
    while True:
        mid = 0.5 * (lo + hi)
        p = _probe(problem, grid, mid, seed, match_index=m)
        iterations += 1
        if p is None or p.node_count != label:
            raise RefinementError(
                f"defect lost its sign change near eta={mid:.12g}; refine the grid")
        width_ok = hi - lo <= ENERGY_RTOL * max(1.0, abs(mid))
        if width_ok and abs(p.defect) <= DEFECT_TOL:
            break
        if iterations >= MAX_BISECTIONS or mid in (lo, hi):
            raise RefinementError(
                f"residual defect {p.defect:.3g} at eta={mid:.12g} did not drop below "
                f"{DEFECT_TOL}; refine the grid")
        if p.defect > 0:
            lo = mid
        else:
            hi = mid

    wf, report = assemble_wavefunction(problem, mid, grid, match_index=m, seed=seed)
    wf = normalize(wf)
    if wf.node_count != label:
        log.warning("converged state at eta=%.9g has %d nodes, bracket labelled %d",
                    mid, wf.node_count, label)
    return EigenResult(problem=problem, eta=mid, node_count=wf.node_count, wavefunction=wf,
                       defect_residual=report.defect, grid=grid, iterations=iterations,
                       bracket=(lo, hi), match_index=m)


def solve_by_nodes(problem: RadialProblem, target_nodes: int, grid: Grid | None = None,
                   seed: str = "regular") -> EigenResult:
    """State with exactly ``target_nodes`` interior nodes."""
    if target_nodes < 0:
        raise ValueError(f"target_nodes must be >= 0, got {target_nodes}")
    lo = spectrum_lower_bound(problem)
    lo -= 1e-9 * max(1.0, abs(lo))
    width = 4.0 * problem.omega * (target_nodes + 2)
    limit = 1e4 * problem.omega
    while True:
        hi = lo + width
        g = grid if grid is not None else default_grid(problem, hi)
        brackets = bracket_eigenvalues(problem, g, lo, hi, seed=seed)
        for b in brackets:
            if b.node_count == target_nodes:
                return refine_eigenvalue(problem, g, b, seed=seed)
        if any(b.node_count > target_nodes for b in brackets):
            raise StateNotFoundError(
                f"node count {target_nodes} skipped in [{lo:.6g}, {hi:.6g}]; refine the grid")
        if width >= limit:
            raise StateNotFoundError(
                f"no state with {target_nodes} nodes below eta={hi:.6g} (window limit 1e4*omega)")
        width = min(2.0 * width, limit)


def scan_spectrum(problem: RadialProblem, eta_lo: float, eta_hi: float, grid: Grid | None = None,
                  seed: str = "regular") -> list[EigenResult]:
    """Every state with eta in [eta_lo, eta_hi], ordered by energy.

    Failed states do not stop the scan; if any occur a :class:`ScanError`
    carrying both the converged results and the failures is raised at the end.
    """
    if grid is None:
        grid = default_grid(problem, eta_hi)
    results, failures = [], []
    for b in bracket_eigenvalues(problem, grid, eta_lo, eta_hi, seed=seed):
        try:
            results.append(refine_eigenvalue(problem, grid, b, seed=seed))
        except QDotError as exc:
            log.warning("state in [%.9g, %.9g] failed: %s", b.lo, b.hi, exc)
            failures.append((b, exc))
    results.sort(key=lambda r: r.eta)
    for a, b in zip(results, results[1:]):
        if b.node_count != a.node_count + 1:
            log.warning("node counts %d -> %d between eta=%.9g and %.9g",
                        a.node_count, b.node_count, a.eta, b.eta)
    if failures:
        raise ScanError(f"{len(failures)} state(s) failed to converge", results, failures)
    return results


def find_bound_state(problem: RadialProblem, grid: Grid | None = None,
                     eta_floor: float = BOUND_STATE_FLOOR, seed: str = "regular"
                     ) -> EigenResult | None:
    """The negative-energy state in [eta_floor, 0), or None if there is none.

    Only ell = 0 is searched; for ell >= 1 the effective potential has no
    attractive part and None is returned immediately.
    """
    if not eta_floor < 0:
        raise ValueError(f"eta_floor must be negative, got {eta_floor!r}")
    if problem.ell != 0:
        return None
    if grid is None:
        grid = bound_state_grid(problem)
    eta_hi = -1e-6 * abs(eta_floor)
    brackets = bracket_eigenvalues(problem, grid, eta_floor, eta_hi, seed=seed)
    if not brackets:
        return None
    if len(brackets) > 1:
        raise BoundStateAmbiguityError(
            f"{len(brackets)} negative-energy brackets found on grid step={grid.step:g}; "
            "this signals a regularization artifact")
    return refine_eigenvalue(problem, grid, brackets[0], seed=seed)


def rayleigh_quotient(problem: RadialProblem, wf: Wavefunction) -> float:
    """Energy expectation value from finite differences, independent of Numerov.

    With u = sqrt(r) w the radial operator takes the quadratic form
    ``int [r w'^2 + ell^2 w^2/r + (c/r + omega^2 r^2) r w^2] dr / int r w^2 dr``,
    which stays finite at the critical ell = 0 centrifugal term.
    """
    r = wf.grid.radii
    w = wf.values / np.sqrt(r)
    dw = np.gradient(w, wf.grid.step, edge_order=2)
    potential = problem.coulomb_strength / r + problem.omega ** 2 * r * r
    integrand = r * dw * dw + problem.ell ** 2 * w * w / r + potential * r * w * w
    return float(np.trapezoid(integrand, r) / np.trapezoid(r * w * w, r))


def relative_residual(problem: RadialProblem, result: EigenResult) -> float:
    rq = rayleigh_quotient(problem, result.wavefunction)
    return abs(rq - result.eta) / max(abs(result.eta), math.ulp(1.0))
