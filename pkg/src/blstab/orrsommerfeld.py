"""Viscous correction of the inviscid instability.

The fourth-order problem adds eps*(d^2/dY^2 - alpha^2)^2 psi to the
Rayleigh balance, eps = nu_hat/(i*alpha).  Two quantifications are provided:
a discrete residual of candidate eigenpairs under the full operator, and a
direct eigensolve by compound-matrix shooting that tracks the eigenvalue
c_OS(nu_hat) down to small viscosity.  The distance |c_OS - c_Ray| scales
like sqrt(nu_hat), driven by a wall sublayer of width sqrt(nu_hat)/Re(gamma)
with gamma = sqrt(i*alpha*c_Ray).

The compound-matrix formulation integrates the six 2x2 minors of the two
decaying far-field solutions (rates alpha and the fast viscous rate mu),
which stays well conditioned where naive shooting on the fourth-order
system loses the slow solution to roundoff.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .shooting import NewtonDivergenceError
from .spectral import RayleighProblem

NU_HATS_DEFAULT = (1e-3, 2.5e-4, 6.25e-5)

# Resolution caps for the stiff fast mode: at most MU_STEP_FACTOR per step
# along the fast rate |mu|, and never more than MAX_STEPS steps.
MU_STEP_FACTOR = 0.04
STEP_CAP = 2e-3
MAX_STEPS = 200_000


class StiffnessError(RuntimeError):
    """Fast viscous rate underresolved by the requested step."""

    def __init__(self, step, required, mu_max):
        self.step = step
        self.required = required
        self.mu_max = mu_max
        super().__init__(
            "stiffness: step %.6g underresolves the fast viscous rate "
            "|mu| = %.6g; need step <= %.6g" % (step, mu_max, required))


@dataclass(frozen=True)
class OSProblem:
    """Rayleigh base problem plus the rescaled viscosity nu_hat.

    eps = nu_hat/(i*alpha_ray) multiplies the fourth-order term.  This is
    the dissipative sign: high-wavenumber free-stream and wall modes are
    damped into the lower half c-plane, leaving the unstable mode isolated,
    which is what makes the nu_hat -> 0 continuation to the inviscid
    eigenvalue well posed.  nu_hat = 0 is accepted so the residual operator
    can be evaluated in the inviscid limit; the eigensolve requires
    nu_hat > 0.
    """

    base: RayleighProblem
    nu_hat: float

    def __post_init__(self):
        if not (self.nu_hat >= 0.0 and math.isfinite(self.nu_hat)):
            raise ValueError("nu_hat must be a finite value >= 0, got %r"
                             % (self.nu_hat,))

    @property
    def epsilon(self) -> complex:
        return -1j * self.nu_hat / self.base.alpha_ray


@dataclass(frozen=True)
class ExpansionReport:
    """Scaling study of the viscous eigenvalue against the inviscid one."""

    nu_hats: tuple
    c_os: tuple
    c_ray: complex
    exponent: float       # fitted slope of log|c_OS - c_Ray| vs log nu_hat
    gamma: complex        # sublayer rate sqrt(i*alpha*c_Ray), Re > 0
    widths: tuple         # sublayer width sqrt(nu_hat)/Re(gamma) per value


def os_residual(pair, os: OSProblem) -> float:
    """Max-norm residual of (V-c)w - V''psi - eps*(D^2-a^2)w, w = (D^2-a^2)psi.

    psi is taken from the eigenpair on its own uniform grid; both Helmholtz
    applications use the centered 3-point second difference, so the
    composition is the standard 5-point fourth difference.  Nodes closer
    than 5h to the wall are excluded: the discrete biharmonic is meaningless
    across the Dirichlet corner.
    """
    Y = np.asarray(pair.Y, dtype=float)
    psi = np.asarray(pair.psi, dtype=complex)
    n = Y.size
    if n < 7:
        raise ValueError("grid too coarse for the 5-point stencil")
    h = float(Y[1] - Y[0])
    if not np.allclose(np.diff(Y), h, rtol=1e-8, atol=1e-12):
        raise ValueError("eigenpair grid is not uniform")
    if h > 0.02 + 1e-12:
        raise ValueError("grid spacing %.3g too coarse; need h <= 0.02" % h)

    alpha = os.base.alpha_ray
    prof = os.base.profile
    v_of = CubicSpline(prof.grid.Y, prof.V)
    vpp_of = CubicSpline(prof.grid.Y, prof.Vpp)

    def helmholtz(f):
        return (f[:-2] - 2.0 * f[1:-1] + f[2:]) / (h * h) - alpha**2 * f[1:-1]

    om1 = helmholtz(psi)        # nodes 1 .. n-2
    om2 = helmholtz(om1)        # nodes 2 .. n-3
    idx = np.arange(2, n - 2)
    Yi = Y[idx]
    resid = ((v_of(Yi) - pair.c) * om1[1:-1]
             - vpp_of(Yi) * psi[idx]
             - os.epsilon * om2)
    mask = Yi >= 5.0 * h - 1e-12
    if not mask.any():
        raise ValueError("no interior nodes at distance >= 5h from the wall")
    return float(np.max(np.abs(resid[mask])))


def sublayer_profile(c0: complex, alpha_ray: float, nu_hat: float):
    """Sublayer rate gamma = sqrt(i*alpha*c0), Re > 0, and width in Y units.

    This is the constant-coefficient dominant balance of the fourth-order
    equation at the wall, where V(0) = 0.  When i*alpha*c0 is a negative
    real number both square roots are purely oscillatory and no decaying
    root exists; that degenerate case is reported rather than silently
    picking a sign.
    """
    c0 = complex(c0)
    if c0 == 0:
        raise ValueError("c0 = 0: the sublayer balance has no rate")
    if not nu_hat > 0.0:
        raise ValueError("nu_hat must be > 0 to define a sublayer width")
    gamma = cmath.sqrt(1j * alpha_ray * c0)
    if gamma.real < 0.0:
        gamma = -gamma
    if gamma.real == 0.0:
        raise ValueError(
            "degenerate purely oscillatory sublayer: i*alpha*c0 = %r is a "
            "negative real number, no root with Re > 0 exists" % (gamma**2,))
    width = math.sqrt(nu_hat) / gamma.real
    return gamma, float(width)


class _CompoundPlan:
    """Frozen integration plan for the wall determinant D(c).

    The step, the stage coefficient tables, and the per-step rescaling
    factors are all fixed at construction (rescaling at the seed c), so the
    resulting D(c) is an analytic function of c: Newton and finite-difference
    derivatives act on a single smooth function.
    """

    def __init__(self, os: OSProblem, c_seed: complex, steps=None):
        if os.nu_hat == 0.0:
            raise ValueError("nu_hat = 0: the fourth-order term vanishes; "
                             "use the Rayleigh engines for the inviscid limit")
        prof = os.base.profile
        self.alpha = os.base.alpha_ray
        self.eps = os.epsilon
        self.Y0 = prof.grid.Y0
        c_seed = complex(c_seed)

        v_of = CubicSpline(prof.grid.Y, prof.V)
        vpp_of = CubicSpline(prof.grid.Y, prof.Vpp)

        # Stiffness budget from the fast far-field rate over the whole
        # profile: mu(Y)^2 = alpha^2 + (V(Y) - c)/eps.
        mu_grid = np.sqrt(self.alpha**2 + (prof.V - c_seed) / self.eps)
        mu_max = float(np.max(np.abs(mu_grid)))
        required = MU_STEP_FACTOR / mu_max
        try:
            _, width = sublayer_profile(c_seed, self.alpha, os.nu_hat)
            required = min(required, width / 10.0)
        except ValueError:
            pass
        if steps is None:
            step = min(STEP_CAP, required)
            steps = int(math.ceil(self.Y0 / step))
            if steps > MAX_STEPS:
                raise StiffnessError(self.Y0 / MAX_STEPS, required, mu_max)
        else:
            steps = int(steps)
            if self.Y0 / steps > required:
                raise StiffnessError(self.Y0 / steps, required, mu_max)
        self.steps = steps
        self.h = self.Y0 / steps

        # Stage nodes from Y0 down to 0, half-step spacing for RK4.
        stages = self.Y0 - 0.5 * self.h * np.arange(2 * steps + 1)
        stages[-1] = 0.0
        v_st = v_of(stages)
        vpp_st = vpp_of(stages)

        # A and C are affine in c: precompute the c-independent parts.
        self._a0 = -self.alpha**4 - (v_st * self.alpha**2 + vpp_st) / self.eps
        self._a1 = self.alpha**2 / self.eps
        self._c0 = 2.0 * self.alpha**2 + v_st / self.eps
        self._c1 = -1.0 / self.eps
        self._v_top = complex(v_st[0])

        # Frozen per-step rescaling at the seed: the minors grow backward
        # like exp((alpha + Re mu)(Y0 - Y)).
        self._v_full = v_st[0:-1:2]
        self._damp = None
        self.refreeze(c_seed)

        # The whole minor vector carries one exponential envelope (the
        # common scale of the two tracked solutions), whose c-sensitivity
        # exp(O(Y0/|mu eps|) dc) would swamp Newton.  The determinant is
        # therefore reported as the ratio of the wall minor to a reference
        # component, which cancels the envelope exactly; the reference is
        # the largest wall component at the seed, frozen for analyticity.
        wall = self._integrate(c_seed)
        mags = [abs(v) for v in wall]
        mags[0] = -1.0          # never normalize y12 by itself
        self._ref = mags.index(max(mags))

    def refreeze(self, c_seed: complex):
        """Recompute the per-step rescaling for a new reference c.

        The rescaling multiplies every minor by the same factor, so the
        determinant ratio is entirely independent of it; refreezing only
        keeps the raw vector O(1) in double precision when Newton moves
        far from the original seed.
        """
        mu_full = np.sqrt(self.alpha**2 + (self._v_full - c_seed) / self.eps)
        self._damp = np.exp(-(self.alpha + np.clip(mu_full.real, 0.0, None))
                            * self.h).tolist()

    def determinant(self, c: complex) -> complex:
        """Envelope-free wall determinant: (psi, psi') minor at Y = 0
        normalized by the frozen reference minor."""
        wall = self._integrate(complex(c))
        return wall[0] / wall[self._ref]

    def _integrate(self, c: complex):
        """All six minors at Y = 0 for trial c (damped raw values)."""
        a_st = (self._a0 + c * self._a1).tolist()
        c_st = (self._c0 + c * self._c1).tolist()

        alpha = self.alpha
        mu = np.sqrt(alpha**2 + (self._v_top - c) / self.eps)
        if mu.real < 0.0:
            mu = -mu
        # Minors of the two decaying solutions (1,-a,a^2,-a^3), (1,-m,m^2,-m^3).
        y12 = alpha - mu
        y13 = mu**2 - alpha**2
        y14 = alpha**3 - mu**3
        y23 = -alpha * mu * (mu - alpha)
        y24 = alpha * mu * (mu**2 - alpha**2)
        y34 = alpha**2 * mu**2 * (alpha - mu)
        scale = max(abs(y12), abs(y13), abs(y14), abs(y23), abs(y24), abs(y34))
        y12 /= scale; y13 /= scale; y14 /= scale
        y23 /= scale; y24 /= scale; y34 /= scale

        s = -self.h
        half = 0.5 * s
        sixth = s / 6.0
        damp = self._damp
        for k in range(self.steps):
            i = 2 * k
            aa, cc = a_st[i], c_st[i]
            am, cm = a_st[i + 1], c_st[i + 1]
            ae, ce = a_st[i + 2], c_st[i + 2]

            k12 = y13
            k13 = y14 + y23
            k14 = y24 + cc * y13
            k23 = y24
            k24 = y34 - aa * y12 + cc * y23
            k34 = -aa * y13

            u12 = y12 + half * k12
            u13 = y13 + half * k13
            u14 = y14 + half * k14
            u23 = y23 + half * k23
            u24 = y24 + half * k24
            u34 = y34 + half * k34
            l12 = u13
            l13 = u14 + u23
            l14 = u24 + cm * u13
            l23 = u24
            l24 = u34 - am * u12 + cm * u23
            l34 = -am * u13

            u12 = y12 + half * l12
            u13 = y13 + half * l13
            u14 = y14 + half * l14
            u23 = y23 + half * l23
            u24 = y24 + half * l24
            u34 = y34 + half * l34
            m12 = u13
            m13 = u14 + u23
            m14 = u24 + cm * u13
            m23 = u24
            m24 = u34 - am * u12 + cm * u23
            m34 = -am * u13

            u12 = y12 + s * m12
            u13 = y13 + s * m13
            u14 = y14 + s * m14
            u23 = y23 + s * m23
            u24 = y24 + s * m24
            u34 = y34 + s * m34
            n12 = u13
            n13 = u14 + u23
            n14 = u24 + ce * u13
            n23 = u24
            n24 = u34 - ae * u12 + ce * u23
            n34 = -ae * u13

            d = damp[k]
            y12 = (y12 + sixth * (k12 + 2.0 * (l12 + m12) + n12)) * d
            y13 = (y13 + sixth * (k13 + 2.0 * (l13 + m13) + n13)) * d
            y14 = (y14 + sixth * (k14 + 2.0 * (l14 + m14) + n14)) * d
            y23 = (y23 + sixth * (k23 + 2.0 * (l23 + m23) + n23)) * d
            y24 = (y24 + sixth * (k24 + 2.0 * (l24 + m24) + n24)) * d
            y34 = (y34 + sixth * (k34 + 2.0 * (l34 + m34) + n34)) * d
        return (y12, y13, y14, y23, y24, y34)


def compound_plan(os: OSProblem, c_seed: complex, steps=None) -> _CompoundPlan:
    """Build the frozen integration plan; exposed for determinant studies."""
    return _CompoundPlan(os, c_seed, steps=steps)


def wall_determinant(os: OSProblem, c: complex, c_seed=None, steps=None) -> complex:
    """D(c) with step and reference minor frozen at c_seed (default: c).

    For derivative studies (Cauchy-Riemann checks, Newton) evaluate several
    c against one fixed c_seed so every value comes from the same analytic
    function.
    """
    plan = _CompoundPlan(os, c if c_seed is None else c_seed, steps=steps)
    return plan.determinant(c)


def os_eigen_compound(os: OSProblem, c_seed: complex, steps=None,
                      newton_tol=1e-11, max_iters=30) -> complex:
    """Eigenvalue of the fourth-order problem by Newton on D(c) = 0.

    The derivative is a centered finite difference of the frozen-plan
    determinant; the plan (step, rescaling) is built once at the seed and
    reused for every iterate, which keeps D analytic across the iteration.
    """
    plan = _CompoundPlan(os, c_seed, steps=steps)
    c = complex(c_seed)
    for iteration in range(max_iters):
        # Keep the rescaling anchored at the current iterate so D stays
        # O(1); the Newton step is invariant under the constant rescale.
        plan.refreeze(c)
        d0 = plan.determinant(c)
        delta = 1e-6 * max(1.0, abs(c))
        dprime = (plan.determinant(c + delta)
                  - plan.determinant(c - delta)) / (2.0 * delta)
        if dprime == 0:
            raise NewtonDivergenceError(c, abs(d0), iteration)
        dc = -d0 / dprime
        if abs(dc) > 0.1:
            dc *= 0.1 / abs(dc)
        c = c + dc
        if abs(dc) <= newton_tol * max(1.0, abs(c)):
            return c
    raise NewtonDivergenceError(c, abs(plan.determinant(c)), max_iters)


def scaling_study(problem: RayleighProblem, c_ray: complex,
                  nu_hats=NU_HATS_DEFAULT) -> ExpansionReport:
    """c_OS over a decreasing nu_hat grid, with the fitted scaling exponent.

    Each point is seeded by continuation from the previous converged value,
    extrapolated along the square-root law
    c_ray + (c_prev - c_ray)*sqrt(nu/nu_prev) so the seed tracks the
    perturbed-inviscid branch rather than hopping to a damped wall mode;
    the first point is seeded by c_ray itself.  The exponent is the
    least-squares slope of log|c_OS - c_Ray| against log nu_hat, which the
    sublayer analysis puts at 1/2.
    """
    nu_hats = tuple(float(v) for v in nu_hats)
    if len(nu_hats) < 2:
        raise ValueError("need at least two nu_hat values to fit a slope")
    if any(v <= 0 for v in nu_hats):
        raise ValueError("nu_hat values must be > 0")
    c_ray = complex(c_ray)

    c_values = []
    c_prev, nu_prev = None, None
    for nu in nu_hats:
        if c_prev is None:
            seed = c_ray
        else:
            seed = c_ray + (c_prev - c_ray) * math.sqrt(nu / nu_prev)
        c_os = os_eigen_compound(OSProblem(problem, nu), seed)
        c_values.append(c_os)
        c_prev, nu_prev = c_os, nu

    gaps = np.abs(np.array(c_values) - c_ray)
    if np.any(gaps == 0.0):
        raise RuntimeError("c_OS coincides with c_Ray; no slope to fit")
    exponent = float(np.polyfit(np.log(nu_hats), np.log(gaps), 1)[0])

    gamma, _ = sublayer_profile(c_ray, problem.alpha_ray, nu_hats[0])
    widths = tuple(math.sqrt(nu) / gamma.real for nu in nu_hats)
    return ExpansionReport(nu_hats=nu_hats, c_os=tuple(c_values),
                           c_ray=c_ray, exponent=exponent,
                           gamma=gamma, widths=widths)


def write_expansion_json(report: ExpansionReport, path):
    """Serialize the scaling study; complex values become [re, im] pairs."""
    payload = {
        "nu_hat": list(report.nu_hats),
        "c_os": [[c.real, c.imag] for c in report.c_os],
        "c_ray": [report.c_ray.real, report.c_ray.imag],
        "exponent": report.exponent,
        "gamma": [report.gamma.real, report.gamma.imag],
        "width": list(report.widths),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
