"""Dense spectral discretization of the Rayleigh operator in vorticity form.

The stability operator acting on the mode vorticity is
Ray omega = V omega - V'' A omega, where A inverts d^2/dY^2 - alpha^2 on the
truncated half-line with a Dirichlet condition at the wall and a Neumann
closure at the top.  On the uniform grid the inverse is a tridiagonal solve;
materializing it column by column gives a dense real N x N matrix whose full
spectrum comes from a standard nonsymmetric eigenvalue routine (Hessenberg
reduction plus shifted QR).  Real eigenvalue clusters track the range of V
(the continuous spectrum); a conjugate pair leaving the real axis signals
instability, with growth rate alpha * Im c.
"""

from __future__ import annotations

import multiprocessing
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eig as dense_eig
from scipy.linalg import solveh_banded

from .heat import HalfLineGrid, Profile, build_profile

ALPHA_RAY_DEFAULT = float(np.sqrt(0.1))
IM_THRESHOLD_DEFAULT = 1e-4

DISCRETE = "discrete-candidate"
CONTINUOUS = "continuous-cluster"


class EigensolverError(RuntimeError):
    """Dense QR iteration failed to converge."""


@dataclass
class RayleighProblem:
    """A sampled profile together with the instability wavenumber."""

    profile: Profile
    alpha_ray: float = ALPHA_RAY_DEFAULT

    def __post_init__(self):
        if self.alpha_ray <= 0:
            raise ValueError("alpha_ray must be positive")


@dataclass
class Spectrum:
    """All matrix eigenvalues with a discrete/continuous classification."""

    eigenvalues: np.ndarray
    classes: list[str]
    threshold: float
    meta: dict = field(default_factory=dict)


@dataclass
class SweepResult:
    """Growth-rate curve: max Im c per time, 0 where the spectrum is real."""

    t: np.ndarray
    im_c_max: np.ndarray


def _helmholtz_bands(n, alpha_ray, h):
    """Banded form of -(D^2 - alpha^2): SPD tridiagonal, Neumann row at the top.

    Rows cover nodes 1..N; the wall node is eliminated by psi(0) = 0 and the
    top closure psi_{N+1} = psi_N turns the last diagonal into 1/h^2 + alpha^2.
    """
    inv_h2 = 1.0 / (h * h)
    upper = np.full(n, -inv_h2)
    upper[0] = 0.0
    diag = np.full(n, 2.0 * inv_h2 + alpha_ray ** 2)
    diag[-1] = inv_h2 + alpha_ray ** 2
    return np.vstack([upper, diag])


def inverse_helmholtz(omega, alpha_ray, h):
    """Solve (D^2 - alpha^2) psi = omega on nodes 1..N (wall value pinned to 0).

    Centered second differences with Dirichlet at the wall and the Neumann
    closure at the top; the returned psi matches omega's shape.
    """
    if alpha_ray <= 0:
        raise ValueError("alpha_ray must be positive")
    omega = np.asarray(omega)
    bands = _helmholtz_bands(omega.shape[0], alpha_ray, h)
    # -(D^2 - alpha^2) is SPD, so solve the negated system by banded Cholesky
    if np.iscomplexobj(omega):
        re = solveh_banded(bands, -omega.real)
        im = solveh_banded(bands, -omega.imag)
        return re + 1j * im
    return solveh_banded(bands, -omega)


def assemble_rayleigh_matrix(problem: RayleighProblem) -> np.ndarray:
    """Dense matrix of Ray = diag(V) - diag(V'') A over nodes 1..N."""
    prof = problem.profile
    n = prof.grid.N
    V = prof.V[1:]
    Vpp = prof.Vpp[1:]
    bands = _helmholtz_bands(n, problem.alpha_ray, prof.grid.h)
    A = -solveh_banded(bands, np.eye(n))
    M = -Vpp[:, None] * A
    M[np.diag_indices(n)] += V
    return M


def compute_spectrum(matrix, threshold=IM_THRESHOLD_DEFAULT, meta=None) -> Spectrum:
    """All eigenvalues of the dense real matrix, classified by |Im c|.

    Values with |Im c| > threshold are discrete-candidate; the rest form the
    continuous cluster hugging the real axis.
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("matrix must be square")
    try:
        eigenvalues = np.linalg.eigvals(matrix)
    except np.linalg.LinAlgError as exc:
        # LAPACK reports the first unconverged leading submatrix in its info
        # code, which numpy folds into the message
        raise EigensolverError(f"QR iteration failed on {matrix.shape[0]}x"
                               f"{matrix.shape[0]} matrix: {exc}") from exc
    order = np.argsort(eigenvalues.real, kind="stable")
    eigenvalues = eigenvalues[order]
    classes = [DISCRETE if abs(ev.imag) > threshold else CONTINUOUS
               for ev in eigenvalues]
    return Spectrum(eigenvalues=eigenvalues, classes=classes,
                    threshold=threshold, meta=dict(meta or {}))


def most_unstable(spectrum: Spectrum, threshold=None):
    """Eigenvalue with maximal Im c if above threshold, else None (stable)."""
    thr = spectrum.threshold if threshold is None else threshold
    idx = int(np.argmax(spectrum.eigenvalues.imag))
    c = complex(spectrum.eigenvalues[idx])
    return c if c.imag > thr else None


def unstable_mode(problem: RayleighProblem, threshold=IM_THRESHOLD_DEFAULT):
    """Most unstable eigenvalue with its discrete eigenvector.

    Returns (c, psi, omega) sampled on the full grid (wall node included,
    psi[0] = omega[0] = 0, max |psi| = 1), or None when the spectrum is real.
    The stream function is recovered from the vorticity eigenvector by the
    same tridiagonal inverse used in the matrix assembly.
    """
    M = assemble_rayleigh_matrix(problem)
    try:
        vals, vecs = dense_eig(M)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"QR iteration failed: {exc}") from exc
    idx = int(np.argmax(vals.imag))
    c = complex(vals[idx])
    if c.imag <= threshold:
        return None
    omega_i = vecs[:, idx]
    psi_i = inverse_helmholtz(omega_i, problem.alpha_ray, problem.profile.grid.h)
    omega = np.concatenate([[0.0], omega_i])
    psi = np.concatenate([[0.0], psi_i])
    scale = 1.0 / np.max(np.abs(psi))
    return c, psi * scale, omega * scale


def _sweep_point(args):
    """One sweep sample: build the profile at t, return max Im c (0 if real)."""
    t, alpha_ray, Y0, h, convention, alpha, threshold = args
    try:
        grid = HalfLineGrid(Y0=Y0, h=h)
        prof = build_profile(t, grid, convention=convention, alpha=alpha)
        M = assemble_rayleigh_matrix(RayleighProblem(prof, alpha_ray))
        spec = compute_spectrum(M, threshold=threshold)
        c = most_unstable(spec)
        return 0.0 if c is None else c.imag
    except Exception as exc:  # per-point isolation: the sweep must go on
        warnings.warn(f"sweep point t={t} failed: {exc}")
        return np.nan


def sweep_growth(t_grid, alpha_ray=ALPHA_RAY_DEFAULT, Y0=30.0, h=0.02,
                 convention="wall-anchored", alpha=1.0,
                 threshold=IM_THRESHOLD_DEFAULT, jobs=1) -> SweepResult:
    """Growth-rate curve over t_grid; per-point failures yield NaN, not aborts."""
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid <= 0) or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t values must be positive and increasing")
    argsets = [(float(t), alpha_ray, Y0, h, convention, alpha, threshold)
               for t in t_grid]
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            ims = pool.map(_sweep_point, argsets)
    else:
        ims = [_sweep_point(a) for a in argsets]
    return SweepResult(t=t_grid, im_c_max=np.asarray(ims))


def write_spectrum_csv(spectrum: Spectrum, path):
    """Spectrum export: columns re_c, im_c, class; header records the run."""
    meta = " ".join(f"{k}={v}" for k, v in spectrum.meta.items())
    with open(path, "w") as fh:
        fh.write(f"# {meta}\n" if meta else "#\n")
        fh.write("re_c,im_c,class\n")
        for ev, cls in zip(spectrum.eigenvalues, spectrum.classes):
            fh.write(f"{ev.real:.17g},{ev.imag:.17g},{cls}\n")


def write_sweep_csv(result: SweepResult, path, meta=None):
    """Sweep export: columns t, im_c_max."""
    line = " ".join(f"{k}={v}" for k, v in (meta or {}).items())
    with open(path, "w") as fh:
        fh.write(f"# {line}\n" if line else "#\n")
        fh.write("t,im_c_max\n")
        for t, im in zip(result.t, result.im_c_max):
            fh.write(f"{t:.17g},{im:.17g}\n")
