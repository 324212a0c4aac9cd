"""Numerov recursion, two-sided sweeps and log-derivative matching.

Sweeps run in compiled loops (numba when available).  Values that grow past
``RESCALE_THRESHOLD`` are divided back to unit magnitude; the accumulated
logarithm of those factors is kept on the :class:`Sweep` so nothing is lost,
and log-derivatives are unaffected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize

from .errors import (BracketingError, DomainError, GridTooShortError, MatchingError,
                     StepSizeError)
from .model import Grid, RadialProblem, TURNING_POINT_RTOL, effective_potential, k_squared

try:
    from numba import njit
except ImportError:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

RESCALE_THRESHOLD = 1e150
INWARD_SEED = 1e-250
VANISHING_MATCH = 1e-12
MAX_MATCH_SHIFTS = 8
SERIES_MATCH_INDEX = 64
SEED_SCHEMES = ("regular", "power")


def numerov_step(k2_prev, k2_curr, k2_next, u_prev, u_curr, step):
    """Advance one point with the three-term Numerov formula.

    ``[1 + h^2/12 k2_next] u_next = 2[1 - 5h^2/12 k2_curr] u_curr - [1 + h^2/12 k2_prev] u_prev``
    """
    c = step * step / 12.0
    den = 1.0 + c * k2_next
    if den == 0.0:
        raise StepSizeError(
            f"Numerov denominator vanishes (step={step!r}, k2={k2_next!r}); refine the grid")
    return (2.0 * (1.0 - 5.0 * c * k2_curr) * u_curr - (1.0 + c * k2_prev) * u_prev) / den


@njit(cache=True)
def _sweep_up(k2, u, stop, c, big):
    events = 0
    log_scale = 0.0
    for i in range(1, stop):
        den = 1.0 + c * k2[i + 1]
        if den == 0.0:
            return i + 1, events, log_scale
        nxt = (2.0 * (1.0 - 5.0 * c * k2[i]) * u[i] - (1.0 + c * k2[i - 1]) * u[i - 1]) / den
        if not math.isfinite(nxt):
            return i + 1, events, log_scale
        u[i + 1] = nxt
        a = abs(nxt)
        if a > big:
            for j in range(i + 2):
                u[j] /= a
            events += 1
            log_scale += math.log(a)
    return -1, events, log_scale


@njit(cache=True)
def _sweep_down(k2, u, hi, stop, c, big):
    events = 0
    log_scale = 0.0
    for i in range(hi - 1, stop, -1):
        den = 1.0 + c * k2[i - 1]
        if den == 0.0:
            return i - 1, events, log_scale
        nxt = (2.0 * (1.0 - 5.0 * c * k2[i]) * u[i] - (1.0 + c * k2[i + 1]) * u[i + 1]) / den
        if not math.isfinite(nxt):
            return i - 1, events, log_scale
        u[i - 1] = nxt
        a = abs(nxt)
        if a > big:
            for j in range(i - 1, hi + 1):
                u[j] /= a
            events += 1
            log_scale += math.log(a)
    return -1, events, log_scale


@lru_cache(maxsize=16)
def _potential_on_grid(problem: RadialProblem, grid: Grid) -> np.ndarray:
    v = effective_potential(problem, grid.radii)
    v.setflags(write=False)
    return v


def k_squared_on_grid(problem: RadialProblem, eta: float, grid: Grid) -> np.ndarray:
    return eta - _potential_on_grid(problem, grid)


def regular_series(problem: RadialProblem, eta: float, r) -> np.ndarray:
    """Regular Frobenius solution ``r^(ell+1/2) * sum a_k r^k`` with a_0 = 1.

    The coefficients obey ``k(k + 2 ell) a_k = c a_{k-1} - eta a_{k-2} + omega^2 a_{k-4}``
    (c = 1 with the Coulomb term, 0 without).  The series is entire.
    """
    r = np.asarray(r, dtype=float)
    ell, c, w2 = problem.ell, problem.coulomb_strength, problem.omega ** 2
    a = [1.0]
    total = np.ones_like(r)
    power = np.ones_like(r)
    small = 0
    for k in range(1, 4000):
        ak = c * a[k - 1]
        if k >= 2:
            ak -= eta * a[k - 2]
        if k >= 4:
            ak += w2 * a[k - 4]
        ak /= k * (k + 2 * ell)
        a.append(ak)
        power = power * r
        term = ak * power
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            small += 1
            if small >= 4:
                break
        else:
            small = 0
    return r ** (ell + 0.5) * total


@dataclass(frozen=True, eq=False)
class Sweep:
    """One-sided Numerov integration.

    ``values`` spans the whole grid; entries outside the swept range are zero.
    The unscaled solution is ``values * exp(log_scale)``.
    """

    values: np.ndarray
    direction: str
    stop_index: int
    rescale_events: int
    log_scale: float


@dataclass(frozen=True, eq=False)
class Wavefunction:
    """Radial function u(r) sampled on a grid."""

    grid: Grid
    values: np.ndarray
    eta: float
    node_count: int
    normalized: bool = False

    def __post_init__(self):
        if len(self.values) != self.grid.n_points:
            raise DomainError(
                f"{len(self.values)} samples for a grid of {self.grid.n_points} points")

    @property
    def radii(self) -> np.ndarray:
        return self.grid.radii

    def norm_squared(self) -> float:
        return float(np.trapezoid(self.values * self.values, self.grid.radii))


@dataclass(frozen=True)
class MatchReport:
    eta: float
    match_index: int
    match_radius: float
    defect: float
    left_nodes: int
    right_nodes: int
    shifts: int = 0

    @property
    def node_count(self) -> int:
        return self.left_nodes + self.right_nodes


def _check_stop(grid: Grid, stop_index: int):
    if not 0 <= stop_index < grid.n_points:
        raise DomainError(f"stop_index {stop_index} outside grid of {grid.n_points} points")


def outward_seeds(problem: RadialProblem, eta: float, grid: Grid, k2=None,
                  seed: str = "regular") -> tuple[float, float]:
    """Starting values u(r_min), u(r_min + step) for the outward sweep.

    ``"power"`` uses the bare leading behaviour r^(ell+1/2).  ``"regular"``
    (the default) selects the regular solution of the *discrete* recursion:
    for ell >= 1 the Frobenius series is evaluated at the two seed points;
    for ell = 0 both indicial roots coincide and the bare power law excites
    the r^(1/2) ln r branch through the truncation error of the first few
    steps, so the series is evaluated a few dozen steps out and the recursion
    is run backwards to the seed points.
    """
    r = grid.radii
    if seed == "power":
        p = problem.ell + 0.5
        return float(r[0] ** p), float(r[1] ** p)
    if seed != "regular":
        raise DomainError(f"unknown seed scheme {seed!r}; expected one of {SEED_SCHEMES}")
    if problem.ell > 0:
        s = regular_series(problem, eta, r[:2])
        return float(s[0]), float(s[1])
    if k2 is None:
        k2 = k_squared_on_grid(problem, eta, grid)
    m = min(SERIES_MATCH_INDEX, grid.n_points - 2)
    buf = np.zeros(m + 1)
    buf[m - 1:m + 1] = regular_series(problem, eta, r[m - 1:m + 1])
    c = grid.step ** 2 / 12.0
    bad, _, _ = _sweep_down(np.ascontiguousarray(k2[:m + 1]), buf, m, 0, c, np.inf)
    if bad >= 0:
        raise StepSizeError(f"Numerov denominator vanishes near r={r[bad]:.6g}; refine the grid")
    return float(buf[0]), float(buf[1])


def integrate_outward(problem: RadialProblem, eta: float, grid: Grid, stop_index: int,
                      seed: str = "regular", k2=None) -> Sweep:
    """Sweep from r_min outwards, filling indices 0..stop_index."""
    _check_stop(grid, stop_index)
    if k2 is None:
        k2 = k_squared_on_grid(problem, eta, grid)
    u = np.zeros(grid.n_points)
    u[0], u[1] = outward_seeds(problem, eta, grid, k2=k2, seed=seed)
    bad, events, log_scale = _sweep_up(k2, u, stop_index, grid.step ** 2 / 12.0,
                                       RESCALE_THRESHOLD)
    if bad >= 0:
        raise StepSizeError(
            f"outward sweep broke down at r={grid.radii[bad]:.6g}; refine the grid")
    if stop_index == 0:
        u[1] = 0.0
    return Sweep(u, "outward", stop_index, events, log_scale)


def integrate_inward(problem: RadialProblem, eta: float, grid: Grid, stop_index: int,
                     k2=None) -> Sweep:
    """Sweep from r_max inwards, filling indices stop_index..n_points-1.

    Seeds are ``u(r_max) = 1e-250`` and ``u(r_max - h) = u(r_max) exp(omega r_max h)``,
    the ratio of the Gaussian tail.
    """
    _check_stop(grid, stop_index)
    if k2 is None:
        k2 = k_squared_on_grid(problem, eta, grid)
    n = grid.n_points
    if k2[-1] >= 0:
        raise GridTooShortError(
            f"k^2(r_max={grid.r_max:.6g}) = {k2[-1]:.6g} >= 0 at eta={eta:.6g}; extend r_max")
    u = np.zeros(n)
    u[n - 1] = INWARD_SEED
    u[n - 2] = INWARD_SEED * math.exp(problem.omega * grid.r_max * grid.step)
    bad, events, log_scale = _sweep_down(k2, u, n - 1, stop_index, grid.step ** 2 / 12.0,
                                         RESCALE_THRESHOLD)
    if bad >= 0:
        raise StepSizeError(
            f"inward sweep broke down at r={grid.radii[bad]:.6g}; refine the grid")
    if stop_index == n - 1:
        u[n - 2] = 0.0
    return Sweep(u, "inward", stop_index, events, log_scale)


def sign_changes(values) -> int:
    """Strict sign changes between consecutive nonzero samples."""
    s = np.sign(np.asarray(values, dtype=float))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def count_nodes(wf: Wavefunction) -> int:
    if not np.all(np.isfinite(wf.values)):
        raise DomainError("wavefunction contains non-finite samples")
    return sign_changes(wf.values)


def outer_turning_index(problem: RadialProblem, eta: float, grid: Grid, k2=None) -> int:
    """Grid index nearest the outermost classical turning point inside the grid."""
    if k2 is None:
        k2 = k_squared_on_grid(problem, eta, grid)
    allowed = np.flatnonzero(k2 > 0)
    if allowed.size == 0:
        raise BracketingError(f"no classically allowed region on the grid at eta={eta:.6g}")
    i = int(allowed[-1])
    if i >= grid.n_points - 1:
        raise GridTooShortError(f"outer edge classically allowed at eta={eta:.6g}; extend r_max")
    r = grid.radii
    root = optimize.bisect(lambda x: float(k_squared(problem, eta, x)), r[i], r[i + 1],
                           xtol=1e-300, rtol=TURNING_POINT_RTOL, maxiter=400)
    m = i if root - r[i] <= r[i + 1] - root else i + 1
    return min(max(m, 1), grid.n_points - 2)


def _log_derivative(u, m):
    return (u[m + 1] - u[m - 1]) / (2.0 * u[m])


def _match(problem, eta, grid, match_index=None, seed="regular"):
    k2 = k_squared_on_grid(problem, eta, grid)
    if k2[-1] >= 0:
        raise GridTooShortError(
            f"k^2(r_max={grid.r_max:.6g}) >= 0 at eta={eta:.6g}; extend r_max")
    if match_index is None:
        match_index = outer_turning_index(problem, eta, grid, k2=k2)
    for shift in range(MAX_MATCH_SHIFTS + 1):
        m = match_index + shift
        if not 1 <= m <= grid.n_points - 2:
            raise BracketingError(f"matching index {m} is not strictly inside the grid")
        left = integrate_outward(problem, eta, grid, m + 1, seed=seed, k2=k2)
        right = integrate_inward(problem, eta, grid, m - 1, k2=k2)
        ul, ur = left.values, right.values
        if (abs(ul[m]) < VANISHING_MATCH * np.max(np.abs(ul[:m + 2]))
                or abs(ur[m]) < VANISHING_MATCH * np.max(np.abs(ur[m - 1:]))):
            continue
        defect = _log_derivative(ul, m) - _log_derivative(ur, m)
        report = MatchReport(eta=float(eta), match_index=m, match_radius=float(grid.radii[m]),
                             defect=float(defect), left_nodes=sign_changes(ul[:m + 1]),
                             right_nodes=sign_changes(ur[m:]), shifts=shift)
        return report, left, right
    raise MatchingError(
        f"u vanishes at the matching point for {MAX_MATCH_SHIFTS + 1} consecutive indices "
        f"(eta={eta:.6g})")


def match_defect(problem: RadialProblem, eta: float, grid: Grid, match_index: int | None = None,
                 seed: str = "regular") -> MatchReport:
    """Dimensionless log-derivative mismatch ``h (u_L'/u_L - u_R'/u_R)`` at the match point.

    By default the match point is the grid index nearest the outermost
    turning point.  Between eigenvalues the defect decreases strictly with
    eta; it jumps from -inf to +inf where the outward solution vanishes at
    the match point, which also shifts the node count by one.
    """
    return _match(problem, eta, grid, match_index, seed)[0]


def assemble_wavefunction(problem: RadialProblem, eta: float, grid: Grid,
                          match_index: int | None = None, seed: str = "regular"):
    """Join both sweeps at the match point (continuous there); not normalized."""
    report, left, right = _match(problem, eta, grid, match_index, seed)
    m = report.match_index
    u = np.empty(grid.n_points)
    u[:m + 1] = left.values[:m + 1] / left.values[m]
    u[m:] = right.values[m:] / right.values[m]
    wf = Wavefunction(grid=grid, values=u, eta=float(eta), node_count=sign_changes(u))
    return wf, report


def normalize(wf: Wavefunction) -> Wavefunction:
    """Scale to unit trapezoidal norm with u > 0 on the first lobe."""
    v = np.asarray(wf.values, dtype=float)
    norm2 = float(np.trapezoid(v * v, wf.grid.radii))
    if not (math.isfinite(norm2) and norm2 > 0):
        raise DomainError("cannot normalize a wavefunction with zero or non-finite norm")
    v = v / math.sqrt(norm2)
    big = np.flatnonzero(np.abs(v) >= 1e-6 * np.max(np.abs(v)))
    if v[big[0]] < 0:
        v = -v
    return Wavefunction(grid=wf.grid, values=v, eta=wf.eta, node_count=sign_changes(v),
                        normalized=True)
