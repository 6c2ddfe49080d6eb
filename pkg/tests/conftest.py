"""Shared fixtures: the reference configuration is t = 7.65, alpha_ray =
sqrt(0.1), wall-anchored profile on h = 0.02, Y0 = 30.  Heavy objects
(profile, dense spectrum, refined eigenpair) are built once per session."""

from pathlib import Path

import numpy as np
import pytest

from blstab import (HalfLineGrid, RayleighProblem, ShootingConfig,
                    assemble_rayleigh_matrix, build_profile, compute_spectrum,
                    most_unstable, newton_refine)

T_REF = 7.65
ALPHA_RAY = float(np.sqrt(0.1))

# filled by the acceptance tests; echoed after the run so every criterion
# leaves one visible pass/fail line
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def grid_ref():
    return HalfLineGrid(Y0=30.0, h=0.02)


@pytest.fixture(scope="session")
def profile_ref(grid_ref):
    return build_profile(T_REF, grid_ref)


@pytest.fixture(scope="session")
def problem_ref(profile_ref):
    return RayleighProblem(profile_ref, ALPHA_RAY)


@pytest.fixture(scope="session")
def matrix_ref(problem_ref):
    return assemble_rayleigh_matrix(problem_ref)


@pytest.fixture(scope="session")
def spectrum_ref(matrix_ref):
    return compute_spectrum(matrix_ref)


@pytest.fixture(scope="session")
def c_matrix_ref(spectrum_ref):
    c = most_unstable(spectrum_ref)
    assert c is not None
    return c


@pytest.fixture(scope="session")
def pair_ref(problem_ref, c_matrix_ref):
    return newton_refine(c_matrix_ref, problem_ref, ShootingConfig())


@pytest.fixture(scope="session")
def acceptance_out():
    """Directory where acceptance runs leave their CSVs for the figure package."""
    out = Path(__file__).resolve().parent.parent / "out" / "acceptance"
    out.mkdir(parents=True, exist_ok=True)
    return out
