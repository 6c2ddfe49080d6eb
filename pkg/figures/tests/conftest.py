"""Shared fixtures for the figure-renderer tests."""

from __future__ import annotations

from pathlib import Path

import pytest

# One human-readable pass/fail line per acceptance criterion, printed after
# the run so the verdicts are visible without scrolling the test log.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("figure acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def acceptance_dir():
    """CSV directory left behind by the numerical toolkit's acceptance run."""
    path = Path(__file__).resolve().parents[2] / "out" / "acceptance"
    if not path.is_dir():
        pytest.skip(
            "no acceptance CSVs at %s; run the numerical toolkit's test "
            "suite first" % (path,)
        )
    return path


@pytest.fixture()
def profile_csv(tmp_path):
    path = tmp_path / "profile.csv"
    path.write_text(
        "# t=7.65 h=0.5 Y0=2 alpha=1 convention=wall-anchored\n"
        "Y,V,Vpp\n"
        "0.0,0.0,1.5\n"
        "0.5,-0.01,1.2\n"
        "1.0,0.3,0.4\n"
        "1.5,0.6,-0.2\n"
        "2.0,0.73,0.0\n"
    )
    return path


@pytest.fixture()
def sweep_csv(tmp_path):
    path = tmp_path / "sweep.csv"
    path.write_text(
        "t,im_c_max\n"
        "1.0,0.0\n"
        "4.0,0.07\n"
        "7.6,0.146\n"
        "12.0,0.03\n"
    )
    return path


@pytest.fixture()
def spectrum_csv(tmp_path):
    path = tmp_path / "spectrum.csv"
    path.write_text(
        "re_c,im_c,class\n"
        "-0.2,0.0,continuous-cluster\n"
        "0.3,0.0,continuous-cluster\n"
        "0.8,0.0,continuous-cluster\n"
        "0.15,0.146,discrete-candidate\n"
        "0.15,-0.146,discrete-candidate\n"
    )
    return path


@pytest.fixture()
def eigenpair_csv(tmp_path):
    path = tmp_path / "eigenpair.csv"
    path.write_text(
        "Y,re_psi,im_psi,re_omega,im_omega\n"
        "0.0,0.0,0.0,0.1,0.05\n"
        "1.0,0.4,-0.2,0.3,0.2\n"
        "2.0,0.9,-0.35,0.1,0.12\n"
        "3.0,0.5,-0.1,0.02,0.01\n"
    )
    return path
