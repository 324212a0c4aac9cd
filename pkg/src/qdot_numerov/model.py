"""Physics instance, radial grid and effective potential.

The relative-motion radial equation solved throughout the package is

    u''(r) + [eta - 1/r - omega^2 r^2 - (ell^2 - 1/4)/r^2] u(r) = 0

in hartree atomic units, with omega = Omega/2 the relative-coordinate
confinement frequency.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import optimize

from .errors import DomainError

TURNING_POINT_RTOL = 1e-10
DEFAULT_MIN_POINTS = 20_000


@dataclass(frozen=True)
class RadialProblem:
    """One physics instance of the radial equation.

    Parameters
    ----------
    omega : float
        Relative-coordinate confinement frequency in hartree, > 0.
    ell : int
        Angular momentum quantum number, >= 0.
    coulomb_enabled : bool
        When False the repulsive 1/r term is dropped, leaving the exactly
        solvable 2D oscillator.
    """

    omega: float
    ell: int
    coulomb_enabled: bool = True

    def __post_init__(self):
        if isinstance(self.ell, bool) or not isinstance(self.ell, numbers.Integral):
            raise DomainError(f"ell must be an integer, got {self.ell!r}")
        if self.ell < 0:
            raise DomainError(f"ell must be >= 0, got {self.ell}")
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise DomainError(f"omega must be finite and > 0, got {self.omega!r}")
        object.__setattr__(self, "omega", float(self.omega))
        object.__setattr__(self, "ell", int(self.ell))
        object.__setattr__(self, "coulomb_enabled", bool(self.coulomb_enabled))

    @property
    def coulomb_strength(self) -> float:
        return 1.0 if self.coulomb_enabled else 0.0

    @property
    def centrifugal_strength(self) -> float:
        """Coefficient of 1/r^2 in the effective potential, ell^2 - 1/4."""
        return self.ell * self.ell - 0.25


@dataclass(frozen=True)
class Grid:
    """Uniform radial mesh ``r_i = r_min + i*step``, i = 0..n_points-1."""

    r_min: float
    step: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.step) and self.step > 0):
            raise DomainError(f"step must be > 0, got {self.step!r}")
        if not (math.isfinite(self.r_min) and self.r_min > 0):
            raise DomainError(f"r_min must be > 0, got {self.r_min!r}")
        if int(self.n_points) != self.n_points or self.n_points < 16:
            raise DomainError(f"n_points must be an integer >= 16, got {self.n_points!r}")
        object.__setattr__(self, "r_min", float(self.r_min))
        object.__setattr__(self, "step", float(self.step))
        object.__setattr__(self, "n_points", int(self.n_points))

    @classmethod
    def from_bounds(cls, r_min: float, r_max: float, step: float) -> "Grid":
        """Grid covering [r_min, r_max]; r_max is rounded up to a whole step."""
        if not r_max > r_min:
            raise DomainError(f"need r_min < r_max, got {r_min!r}, {r_max!r}")
        n = int(math.ceil((r_max - r_min) / step - 1e-9)) + 1
        return cls(r_min=r_min, step=step, n_points=n)

    @property
    def r_max(self) -> float:
        return self.r_min + (self.n_points - 1) * self.step

    @cached_property
    def radii(self) -> np.ndarray:
        r = self.r_min + self.step * np.arange(self.n_points, dtype=float)
        r.setflags(write=False)
        return r

    def index_of(self, r: float) -> int:
        """Index of the grid point nearest to ``r`` (clipped to the grid)."""
        i = int(round((r - self.r_min) / self.step))
        return min(max(i, 0), self.n_points - 1)


@dataclass(frozen=True)
class EffectivePotentialSample:
    r: float
    v_eff: float


def _check_radius(r):
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise DomainError("radius must be strictly positive")
    return r


def effective_potential(problem: RadialProblem, r):
    """1/r + omega^2 r^2 + (ell^2 - 1/4)/r^2 (Coulomb term optional)."""
    r = _check_radius(r)
    v = problem.omega ** 2 * r * r + problem.centrifugal_strength / (r * r)
    if problem.coulomb_enabled:
        v = v + 1.0 / r
    return v[()] if v.ndim == 0 else v


def sample_potential(problem: RadialProblem, r: float) -> EffectivePotentialSample:
    return EffectivePotentialSample(r=float(r), v_eff=float(effective_potential(problem, r)))


def k_squared(problem: RadialProblem, eta: float, r):
    """Local squared wavenumber ``eta - v_eff(r)``; scalar or array ``r``."""
    return eta - effective_potential(problem, r)


def _default_search_window(eta: float) -> tuple[float, float]:
    # beyond r_hi the oscillator term alone exceeds eta + 1/(4 r^2)
    return 1e-8, 10.0 + 2.0 * math.sqrt(max(eta, 0.0) + 1.0)


def classical_turning_points(problem: RadialProblem, eta: float, search_window=None,
                             samples: int = 20_001) -> list[float]:
    """All radii in ``search_window`` where k^2 changes sign, ascending.

    Sign changes are located on a log-spaced sampling of the window and each
    is refined by bisection to relative tolerance 1e-10.
    """
    if not math.isfinite(eta):
        raise DomainError(f"eta must be finite, got {eta!r}")
    if search_window is None:
        lo, hi = _default_search_window(eta)
        hi = hi / problem.omega
    else:
        lo, hi = (float(x) for x in search_window)
    if not 0 < lo < hi:
        raise DomainError(f"search window must satisfy 0 < lo < hi, got {(lo, hi)}")

    r = np.geomspace(lo, hi, samples)
    positive = k_squared(problem, eta, r) > 0
    flips = np.flatnonzero(positive[1:] != positive[:-1])

    def f(x):
        return float(k_squared(problem, eta, x))

    roots = []
    for i in flips:
        a, b = r[i], r[i + 1]
        if f(a) == 0.0:
            roots.append(float(a))
            continue
        if f(b) == 0.0:
            roots.append(float(b))
            continue
        roots.append(optimize.bisect(f, a, b, xtol=1e-300, rtol=TURNING_POINT_RTOL,
                                     maxiter=400))
    return sorted(roots)


def spectrum_lower_bound(problem: RadialProblem) -> float:
    """Rigorous lower bound on eigenvalues of the regular-boundary problem.

    By the 2D Hardy inequality ``-d^2/dr^2 + (ell^2 - 1/4)/r^2 >= ell^2/r^2``,
    so every eigenvalue exceeds ``min_r [c/r + omega^2 r^2 + ell^2/r^2]``.
    """
    c, w2, l2 = problem.coulomb_strength, problem.omega ** 2, float(problem.ell ** 2)

    def f(x):
        r = math.exp(x)
        return c / r + w2 * r * r + l2 / (r * r)

    if c == 0.0 and l2 == 0.0:
        return 0.0
    res = optimize.minimize_scalar(f, bounds=(-30.0, 30.0), method="bounded",
                                   options={"xatol": 1e-10})
    return float(res.fun)


def default_grid(problem: RadialProblem, eta_max: float,
                 min_points: int = DEFAULT_MIN_POINTS) -> Grid:
    """Uniform grid adequate for all states up to ``eta_max``.

    r_max is 1.5 times the outermost turning point at ``eta_max`` (never less
    than 10/sqrt(omega)); the step is at most 1e-3/sqrt(omega) and gives at
    least ``min_points`` points; r_min equals one step.
    """
    if not math.isfinite(eta_max):
        raise DomainError(f"eta_max must be finite, got {eta_max!r}")
    tps = classical_turning_points(problem, eta_max)
    outer = tps[-1] if tps else 0.0
    r_max = max(1.5 * outer, 10.0 / math.sqrt(problem.omega))
    n = max(min_points, int(math.ceil(r_max * math.sqrt(problem.omega) / 1e-3)))
    step = r_max / n
    return Grid(r_min=step, step=step, n_points=n)


def bound_state_grid(problem: RadialProblem, step: float = 1e-4) -> Grid:
    """Fine grid for the negative-energy search: r_min = step, r_max = 10/sqrt(omega)."""
    r_max = 10.0 / math.sqrt(problem.omega)
    n = int(math.ceil(r_max / step))
    return Grid(r_min=step, step=step, n_points=n)
