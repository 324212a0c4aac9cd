"""Recompute the published comparison tables and the energy ladder."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import (TABLE2_OMEGA, TABLE2_WINDOW, Table1Row, Table2Row, table1_reference,
                       table2_reference)
from .model import Grid, RadialProblem, default_grid, spectrum_lower_bound
from .solver import EigenResult, scan_spectrum


@dataclass(frozen=True, eq=False)
class Comparison:
    reference: Table1Row | Table2Row
    result: EigenResult | None

    @property
    def eta_numerical(self):
        return None if self.result is None else self.result.eta

    @property
    def abs_diff(self):
        if self.result is None:
            return None
        return abs(self.result.eta - self.reference.eta_reported)


def _grid(problem, eta_hi, step_divisor):
    g = default_grid(problem, eta_hi)
    if step_divisor == 1:
        return g
    step = g.step / step_divisor
    return Grid(r_min=step, step=step, n_points=g.n_points * step_divisor)


def reproduce_table1(step_divisor: int = 1) -> list[Comparison]:
    """For each frequency, the ell = 0 state closest to the polynomial energy."""
    out = []
    for row in table1_reference():
        problem = RadialProblem(row.omega, 0)
        hi = 1.5 * row.eta_analytic
        results = scan_spectrum(problem, spectrum_lower_bound(problem), hi,
                                grid=_grid(problem, hi, step_divisor))
        best = min(results, key=lambda r: abs(r.eta - row.eta_analytic), default=None)
        out.append(Comparison(row, best))
    return out


def reproduce_table2(omega: float = TABLE2_OMEGA, window=TABLE2_WINDOW,
                     step_divisor: int = 1) -> list[Comparison]:
    """States of ell = 0, 1, 2 in ``window``, paired in energy order with the table rows."""
    refs = table2_reference()
    out = []
    for ell in sorted({r.ell for r in refs}):
        problem = RadialProblem(omega, ell)
        results = scan_spectrum(problem, *window, grid=_grid(problem, window[1], step_divisor))
        rows = [r for r in refs if r.ell == ell]
        for i, row in enumerate(rows):
            out.append(Comparison(row, results[i] if i < len(results) else None))
    return out


def energy_ladder(omega: float = TABLE2_OMEGA, ell: int = 0, window=TABLE2_WINDOW):
    """States in ``window`` and the least-squares slope of eta against state index."""
    results = scan_spectrum(RadialProblem(omega, ell), *window)
    if len(results) < 2:
        return results, float("nan")
    slope = np.polyfit(np.arange(len(results)), [r.eta for r in results], 1)[0]
    return results, float(slope)
