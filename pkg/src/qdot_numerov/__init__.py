"""Numerov shooting solver for the two-electron quantum-dot radial equation."""

__version__ = "0.1.0"

from .analytic import (HeunParameters, envelope, heun_parameters, oscillator_exact_energy,
                       polynomial_energy, table1_reference, table2_reference)
from .errors import QDotError
from .model import (Grid, RadialProblem, bound_state_grid, classical_turning_points,
                    default_grid, effective_potential, k_squared, spectrum_lower_bound)
from .numerov import (MatchReport, Wavefunction, count_nodes, integrate_inward,
                      integrate_outward, match_defect, normalize, numerov_step)
from .solver import (Bracket, EigenResult, bracket_eigenvalues, find_bound_state,
                     rayleigh_quotient, refine_eigenvalue, scan_spectrum, solve_by_nodes)

__all__ = [
    "Bracket", "EigenResult", "Grid", "HeunParameters", "MatchReport", "QDotError",
    "RadialProblem", "Wavefunction", "bound_state_grid", "bracket_eigenvalues",
    "classical_turning_points", "count_nodes", "default_grid", "effective_potential",
    "envelope", "find_bound_state", "heun_parameters", "integrate_inward",
    "integrate_outward", "k_squared", "match_defect", "normalize", "numerov_step",
    "oscillator_exact_energy", "polynomial_energy", "rayleigh_quotient",
    "refine_eigenvalue", "scan_spectrum", "solve_by_nodes", "spectrum_lower_bound",
    "table1_reference", "table2_reference",
]
