"""Half-line heat problem driving the shear-layer profile, by two methods.

The layer corrector w solves dw/dt = d^2w/dY^2 on Y > 0 with w(0, .) = 0 and
the moving-wall trace w(t, 0) = phi(t).  Two independent evaluations are
provided: a Crank-Nicolson march on a truncated uniform grid, and the exact
double-layer potential w(t, Y) = int_0^t phi(s) K(Y, t-s) ds with the
Dirichlet kernel K(Y, tau) = Y (4 pi tau^3)^(-1/2) exp(-Y^2/(4 tau)).  The
potential is evaluated after the substitution u = Y/(2 sqrt(t-s)), which
removes the endpoint singularity exactly:

    w(t, Y) = (2/sqrt(pi)) * int_{Y/(2 sqrt(t))}^{inf} phi(t - Y^2/(4 u^2))
              exp(-u^2) du.

The background profile is V(t, Y) = -phi(t) + w(t, Y) in the wall-anchored
convention (V(t, 0) = 0, no-slip) or V = phi(t) + w in the claim-literal
convention; the two differ by the constant 2*phi(t).  The curvature V'' = w''
is evaluated analytically through the heat identity d^2w/dY^2 = dw/dt applied
to the potential, which yields phi(0) K(Y, t) plus the same integral against
phi'.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from .interior import trace_phi, trace_phi_prime
from .quadrature import _gl_rule

U_CUT = 8.0  # exp(-u^2) < 1e-27 beyond this; the tail is numerically zero

WALL_ANCHORED = "wall-anchored"
CLAIM_LITERAL = "claim-literal"
CONVENTIONS = (WALL_ANCHORED, CLAIM_LITERAL)


@dataclass(frozen=True)
class HalfLineGrid:
    """Uniform grid Y_k = k*h, k = 0..N, truncating the half-line at Y0 = N*h."""

    Y0: float = 30.0
    h: float = 0.01

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError("mesh width must be positive")
        n = self.Y0 / self.h
        if abs(n - round(n)) > 1e-9 * max(n, 1.0):
            raise ValueError("Y0/h must be an integer")
        if self.Y0 < 20.0:
            raise ValueError("truncation height must be >= 20 for far-field validity")

    @property
    def N(self) -> int:
        return int(round(self.Y0 / self.h))

    @property
    def Y(self) -> np.ndarray:
        return np.arange(self.N + 1) * self.h


@dataclass
class HeatSolution:
    """Samples of w(t, .) on a grid, tagged with the method that produced them."""

    grid: HalfLineGrid
    t: float
    w: np.ndarray
    dt: float | None
    method: str


@dataclass
class Profile:
    """Sampled background profile V(t, .) and curvature V''(t, .) on a grid."""

    grid: HalfLineGrid
    t: float
    V: np.ndarray
    Vpp: np.ndarray
    convention: str
    far_field: float
    alpha: float = 1.0  # wavenumber of the driving wall trace


def solve_heat_cn(phi, grid: HalfLineGrid, t, dt=1e-3) -> HeatSolution:
    """Crank-Nicolson march of the half-line heat problem up to time t.

    Dirichlet data w = phi(t) at Y = 0 and w = 0 at the truncation height.
    Second order in dt and h.  phi must accept an array of times.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t <= 0:
        raise ValueError("t must be positive")
    nsteps = int(round(t / dt))
    if nsteps == 0 or abs(t - nsteps * dt) > 1e-12:
        raise ValueError(f"t = {t} is not an integer number of steps of dt = {dt}")

    N = grid.N
    h = grid.h
    r = dt / (2.0 * h * h)
    # interior unknowns k = 1..N-1; (1 + 2r - r D^2/...) in banded Cholesky form
    upper = np.full(N - 1, -r)
    upper[0] = 0.0
    diag = np.full(N - 1, 1.0 + 2.0 * r)
    cho = cholesky_banded(np.vstack([upper, diag]))

    times = np.arange(nsteps + 1) * dt
    phis = np.asarray(phi(times), dtype=float)
    if phis.ndim == 0:
        phis = np.full(times.shape, float(phis))
    w = np.zeros(N - 1)
    for n in range(nsteps):
        rhs = (1.0 - 2.0 * r) * w
        rhs[1:] += r * w[:-1]
        rhs[:-1] += r * w[1:]
        rhs[0] += r * (phis[n] + phis[n + 1])
        w = cho_solve_banded((cho, False), rhs)

    full = np.empty(N + 1)
    full[0] = phis[-1]
    full[1:-1] = w
    full[-1] = 0.0
    return HeatSolution(grid=grid, t=float(t), w=full, dt=float(dt), method="CN")


def _u_panels(u0, ucut=U_CUT):
    """Panel breakpoints in u: geometric doubling from u0 up through 1, then width 1/2.

    The substituted integrand varies on the scale of u0 near the lower limit
    (the whole time history is compressed there), so panels double until the
    kernel flattens out.
    """
    breaks = [u0]
    b = u0
    while b < 1.0 and 2.0 * b < ucut:
        b *= 2.0
        breaks.append(b)
    while b + 0.5 < ucut:
        b += 0.5
        breaks.append(b)
    breaks.append(ucut)
    return np.asarray(breaks)


def _panel_points(u0, n=24):
    """All Gauss-Legendre abscissas/weights over the panels covering [u0, U_CUT]."""
    x, wq = _gl_rule(n)
    breaks = _u_panels(u0)
    mid = 0.5 * (breaks[1:] + breaks[:-1])
    half = 0.5 * (breaks[1:] - breaks[:-1])
    pts = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wts = (half[:, None] * wq[None, :]).ravel()
    return pts, wts


def eval_duhamel(phi, Y, t):
    """Double-layer potential w(t, Y) for wall data phi, via the smooth u-form.

    Exact at Y = 0 (returns phi(t)); truncates the u-integral at U_CUT where
    the Gaussian factor is below 1e-27.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    if Y < 0:
        raise ValueError("Y must be >= 0")
    if Y == 0.0:
        return float(phi(t))
    u0 = Y / (2.0 * np.sqrt(t))
    if u0 >= U_CUT:
        return 0.0
    pts, wts = _panel_points(u0)
    s = np.maximum(t - Y * Y / (4.0 * pts * pts), 0.0)
    fvals = np.asarray(phi(s), dtype=float)
    if fvals.ndim == 0:
        fvals = np.full(s.shape, float(fvals))
    return float(2.0 / np.sqrt(np.pi) * wts @ (fvals * np.exp(-pts * pts)))


def _duhamel_with_curvature(phi, phip, phi0, Y, t):
    """(w, w'') at one height by the layer potential and its heat identity."""
    if Y == 0.0:
        return float(phi(t)), float(phip(t))
    u0 = Y / (2.0 * np.sqrt(t))
    if u0 >= U_CUT:
        return 0.0, 0.0
    pts, wts = _panel_points(u0)
    s = np.maximum(t - Y * Y / (4.0 * pts * pts), 0.0)
    gauss = np.exp(-pts * pts)
    w = 2.0 / np.sqrt(np.pi) * wts @ (np.asarray(phi(s), dtype=float) * gauss)
    wpp = 2.0 / np.sqrt(np.pi) * wts @ (np.asarray(phip(s), dtype=float) * gauss)
    # boundary term phi(0) K(Y, t) from moving the time derivative onto phi
    wpp += phi0 * Y / (2.0 * np.sqrt(np.pi) * t ** 1.5) * np.exp(-Y * Y / (4.0 * t))
    return float(w), float(wpp)


def build_profile(t, grid: HalfLineGrid, convention=WALL_ANCHORED, alpha=1.0) -> Profile:
    """Assemble V(t, .) and V''(t, .) on the grid from the layer potential.

    wall-anchored: V = -phi(t) + w (V(0) = 0); claim-literal: V = phi(t) + w.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    phi = lambda s: trace_phi(s, alpha)
    phip = lambda s: trace_phi_prime(s, alpha)
    phi0 = float(trace_phi(0.0, alpha))
    phi_t = float(trace_phi(t, alpha))

    N = grid.N
    w = np.empty(N + 1)
    wpp = np.empty(N + 1)
    for k, Yk in enumerate(grid.Y):
        w[k], wpp[k] = _duhamel_with_curvature(phi, phip, phi0, Yk, t)

    offset = -phi_t if convention == WALL_ANCHORED else phi_t
    V = offset + w
    if convention == WALL_ANCHORED:
        V[0] = 0.0  # exact no-slip; w[0] = phi(t) analytically
    return Profile(grid=grid, t=float(t), V=V, Vpp=wpp,
                   convention=convention, far_field=float(V[-1]), alpha=float(alpha))


def write_profile_csv(profile: Profile, path):
    """Profile export: columns Y, V, Vpp; header records t, h, Y0, convention."""
    g = profile.grid
    with open(path, "w") as fh:
        fh.write(f"# t={profile.t:.17g} h={g.h:.17g} Y0={g.Y0:.17g} "
                 f"alpha={profile.alpha:.17g} convention={profile.convention}\n")
        fh.write("Y,V,Vpp\n")
        for Yk, Vk, Wk in zip(g.Y, profile.V, profile.Vpp):
            fh.write(f"{Yk:.17g},{Vk:.17g},{Wk:.17g}\n")
