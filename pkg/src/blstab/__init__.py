"""Stability toolkit for a time-evolving Couette boundary layer.

The pipeline runs in stages, one module each:

    interior        interior traveling-wave solution between channel walls
    heat            half-line heat evolution of the wall layer: V(t, Y), V''(t, Y)
    spectral        dense Rayleigh spectrum of the vorticity-form operator
    shooting        Newton-refined eigenpairs by far-field shooting
    orrsommerfeld   viscous correction: residual check and compound-matrix
                    eigenvalues over a nu_hat grid
    cli             command-line front end tying the stages together
"""

from .heat import (CLAIM_LITERAL, CONVENTIONS, HalfLineGrid, HeatSolution,
                   Profile, WALL_ANCHORED, build_profile, eval_duhamel,
                   solve_heat_cn, write_profile_csv)
from .interior import (Mollifier, WaveSetup, default_setup, green_function,
                       green_wall_slope, solve_dirac_coefficients,
                       solve_mollified_coefficients, trace_phi,
                       trace_phi_prime, wall_shear)
from .orrsommerfeld import (ExpansionReport, NU_HATS_DEFAULT, OSProblem,
                            StiffnessError, compound_plan, os_eigen_compound,
                            os_residual, scaling_study, sublayer_profile,
                            wall_determinant, write_expansion_json)
from .shooting import (EigenPair, NewtonDivergenceError, PoleProximityError,
                       ShootingConfig, integrate_shot, newton_refine,
                       validate_farfield, write_eigenpair_csv)
from .spectral import (ALPHA_RAY_DEFAULT, EigensolverError, RayleighProblem,
                       Spectrum, SweepResult, assemble_rayleigh_matrix,
                       compute_spectrum, inverse_helmholtz, most_unstable,
                       sweep_growth, unstable_mode, write_spectrum_csv,
                       write_sweep_csv)

__version__ = "0.1.0"

__all__ = [
    "ALPHA_RAY_DEFAULT", "CLAIM_LITERAL", "CONVENTIONS", "EigenPair",
    "EigensolverError", "ExpansionReport", "HalfLineGrid", "HeatSolution",
    "Mollifier", "NU_HATS_DEFAULT", "NewtonDivergenceError", "OSProblem",
    "PoleProximityError", "Profile", "RayleighProblem", "ShootingConfig",
    "Spectrum", "StiffnessError", "SweepResult", "WALL_ANCHORED", "WaveSetup",
    "assemble_rayleigh_matrix", "build_profile", "compound_plan",
    "compute_spectrum", "default_setup", "eval_duhamel", "green_function",
    "green_wall_slope", "integrate_shot", "inverse_helmholtz",
    "most_unstable", "newton_refine", "os_eigen_compound", "os_residual",
    "scaling_study", "solve_dirac_coefficients",
    "solve_mollified_coefficients", "solve_heat_cn", "sublayer_profile",
    "sweep_growth", "trace_phi", "trace_phi_prime", "unstable_mode",
    "validate_farfield", "wall_determinant", "wall_shear",
    "write_eigenpair_csv", "write_expansion_json", "write_profile_csv",
    "write_spectrum_csv", "write_sweep_csv",
]
