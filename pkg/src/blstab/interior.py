"""Linearized Euler dynamics of concentrated vortices in plane Couette flow.

A single horizontal Fourier mode of the perturbation vorticity is advected
by the shear, so a vortex sheet placed at height b picks up the phase
exp(-i*alpha*b*t) while keeping its profile.  The stream function follows by
inverting d^2/dy^2 - alpha^2 between the walls y = -1 and y = +1 with
Dirichlet conditions, which is done exactly through the channel Green
function.  The initial vorticity is a short stack of Dirac masses
(optionally mollified into smooth bumps); their amplitudes are chosen so
that the initial shear stress vanishes at both walls.  The resulting wall
trace phi(t), read along the characteristic of the moving lower wall, is
the Dirichlet datum that drives the boundary-layer heat problem.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quadrature import gl_adaptive


@dataclass(frozen=True)
class WaveSetup:
    """Wave parameters: wavenumber, vortex amplitudes/positions, mollification width."""

    alpha: float
    a: tuple[float, float, float]
    b: tuple[float, float, float] = (-0.5, 0.0, 0.5)
    mu: float = 0.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if not (-1.0 < self.b[0] < self.b[1] < self.b[2] < 1.0):
            raise ValueError("vortex positions must be strictly ordered inside (-1, 1)")
        if self.mu < 0:
            raise ValueError("mollification width must be >= 0")
        if self.mu > 0:
            for bk in self.b:
                if bk - self.mu <= -1.0 or bk + self.mu >= 1.0:
                    raise ValueError("mollifier support leaves the channel")


class Mollifier:
    """Standard C-infinity bump exp(-1/(1-u^2)) on [-1, 1], unit integral.

    Evaluation at a vortex of width mu centered at b is chi((y-b)/mu)/mu.
    """

    _norm_cache = None

    def __init__(self):
        if Mollifier._norm_cache is None:
            Mollifier._norm_cache = float(gl_adaptive(self._raw, -1.0, 1.0, rtol=1e-13).real)
        self._norm = Mollifier._norm_cache

    @staticmethod
    def _raw(u):
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        inside = np.abs(u) < 1.0
        out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
        return out

    def __call__(self, u):
        return self._raw(u) / self._norm

    def scaled(self, y, b, mu):
        """chi((y-b)/mu)/mu, the width-mu bump of unit mass centered at b."""
        return self(np.asarray(y, dtype=float) / mu - b / mu) / mu


def green_function(alpha, y_src, y_obs):
    """Channel Green function of d^2/dy^2 - alpha^2 with Dirichlet walls.

    Normalized by the jump condition [dG/dy] = 1 across y = y_src, giving
    G(y_src, y_obs) = sinh(alpha*(y_> - 1)) * sinh(alpha*(y_< + 1))
                      / (alpha * sinh(2*alpha)).
    Symmetric in its position arguments and nonpositive in the channel.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    y_src = np.asarray(y_src, dtype=float)
    y_obs = np.asarray(y_obs, dtype=float)
    if np.any(np.abs(y_src) > 1.0) or np.any(np.abs(y_obs) > 1.0):
        raise ValueError("positions must lie in [-1, 1]")
    hi = np.maximum(y_src, y_obs)
    lo = np.minimum(y_src, y_obs)
    val = np.sinh(alpha * (hi - 1.0)) * np.sinh(alpha * (lo + 1.0)) / (alpha * np.sinh(2.0 * alpha))
    return val if val.ndim else float(val)


def green_wall_slope(alpha, y_src, side):
    """dG/dy_obs at the wall y_obs = side for a source at y_src.

    side = -1 gives sinh(alpha*(y_src - 1))/sinh(2*alpha), side = +1 gives
    sinh(alpha*(y_src + 1))/sinh(2*alpha).
    """
    if side not in (-1, 1):
        raise ValueError("side must be -1 or +1")
    y_src = np.asarray(y_src, dtype=float)
    val = np.sinh(alpha * (y_src + side)) / np.sinh(2.0 * alpha)
    return val if val.ndim else float(val)


def solve_dirac_coefficients(alpha):
    """Amplitudes (a1, a2, a3) for vortices at (-1/2, 0, 1/2) with zero initial wall shear.

    With a2 = 1/sinh(alpha) fixed, the two wall conditions
    sum_k a_k * dG/dy(b_k, -1) = 0 and sum_k a_k * dG/dy(b_k, +1) = 0
    collapse by symmetry to a1 = a3 = -1/(sinh(alpha/2) + sinh(3*alpha/2)).
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    a13 = -1.0 / (np.sinh(0.5 * alpha) + np.sinh(1.5 * alpha))
    a2 = 1.0 / np.sinh(alpha)
    return (a13, a2, a13)


def default_setup(alpha=1.0, mu=0.0):
    """Canonical three-vortex setup at b = (-1/2, 0, 1/2) with solved amplitudes."""
    return WaveSetup(alpha=alpha, a=solve_dirac_coefficients(alpha), mu=mu)


def _mollified_wall_weight(setup: WaveSetup, chi: Mollifier, k: int, side: int, t: float = 0.0):
    """Quadrature of the width-mu bump at b_k against the wall slope of G.

    For t != 0 the integrand carries the advection phase exp(-i*alpha*y*t).
    """
    alpha, mu, bk = setup.alpha, setup.mu, setup.b[k]

    def f(y):
        val = chi.scaled(y, bk, mu) * green_wall_slope(alpha, y, side)
        if t != 0.0:
            val = val * np.exp(-1j * alpha * y * t)
        return val

    return gl_adaptive(f, bk - mu, bk + mu, rtol=1e-10, atol=1e-14)


def solve_mollified_coefficients(setup: WaveSetup, chi: Mollifier):
    """Amplitudes (a1, a3) cancelling the initial wall shear of the mollified vortices.

    a2 = 1/sinh(alpha) is kept fixed; the two wall conditions become a 2x2
    linear system in (a1, a3) whose coefficients are quadratures of each bump
    against the Green-function wall slope.  As mu -> 0 the solution converges
    to the Dirac amplitudes.
    """
    if setup.mu <= 0:
        raise ValueError("mollified solve requires mu > 0")
    alpha = setup.alpha
    a2 = 1.0 / np.sinh(alpha)
    A = np.empty((2, 2))
    rhs = np.empty(2)
    for row, side in enumerate((-1, 1)):
        A[row, 0] = _mollified_wall_weight(setup, chi, 0, side).real
        A[row, 1] = _mollified_wall_weight(setup, chi, 2, side).real
        rhs[row] = -a2 * _mollified_wall_weight(setup, chi, 1, side).real
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    if abs(det) < 1e-14 * max(abs(A).max() ** 2, 1e-30):
        raise RuntimeError("singular mollified wall-shear system")
    a1, a3 = np.linalg.solve(A, rhs)
    return (float(a1), float(a3))


def wall_shear(t, setup: WaveSetup, side):
    """Complex amplitude of the perturbation shear d(psi)/dy at the wall y = side.

    Each vortex contributes its amplitude times the advection phase
    exp(-i*alpha*b*t) times the Green-function wall slope; mollified vortices
    are integrated against their bump.  Vanishes at t = 0 when the amplitudes
    solve the zero-shear system, and is periodic with period 4*pi/alpha for
    the canonical half-integer positions.
    """
    alpha = setup.alpha
    if setup.mu == 0.0:
        total = 0.0 + 0.0j
        for ak, bk in zip(setup.a, setup.b):
            total += ak * np.exp(-1j * alpha * bk * t) * green_wall_slope(alpha, bk, side)
        return total
    chi = Mollifier()
    total = 0.0 + 0.0j
    for k, ak in enumerate(setup.a):
        total += ak * _mollified_wall_weight(setup, chi, k, side, t=t)
    return complex(total)


def trace_phi(t, alpha=1.0):
    """Wall trace phi(t) of the vortex-driven flow along the moving lower wall.

    Closed form for the canonical setup:
    phi(t) = -cos(alpha*t) - a1*sinh(3*alpha/2)*cos(alpha*t/2)
             - a3*sinh(alpha/2)*cos(3*alpha*t/2),
    with a1 = a3 the zero-shear amplitudes.  phi(0) = 0 by construction.
    Accepts scalar or array t.
    """
    a13, _, _ = solve_dirac_coefficients(alpha)
    t = np.asarray(t, dtype=float)
    val = (-np.cos(alpha * t)
           - a13 * np.sinh(1.5 * alpha) * np.cos(0.5 * alpha * t)
           - a13 * np.sinh(0.5 * alpha) * np.cos(1.5 * alpha * t))
    return val if val.ndim else float(val)


def trace_phi_prime(t, alpha=1.0):
    """Time derivative of trace_phi; sets the wall curvature of the layer profile."""
    a13, _, _ = solve_dirac_coefficients(alpha)
    t = np.asarray(t, dtype=float)
    val = (alpha * np.sin(alpha * t)
           + a13 * np.sinh(1.5 * alpha) * 0.5 * alpha * np.sin(0.5 * alpha * t)
           + a13 * np.sinh(0.5 * alpha) * 1.5 * alpha * np.sin(1.5 * alpha * t))
    return val if val.ndim else float(val)
