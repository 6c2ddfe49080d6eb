"""Gauss-Legendre quadrature helpers shared by the wave and heat modules."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=16)
def _gl_rule(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def gl_fixed(f, a, b, n=24):
    """Integrate f over [a, b] with a single n-point Gauss-Legendre rule.

    f must accept a numpy array of abscissas; complex values are fine.
    """
    x, w = _gl_rule(n)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * np.sum(w * f(mid + half * x))


def gl_adaptive(f, a, b, rtol=1e-10, atol=1e-13, _depth=0):
    """Adaptive bisection quadrature built on the fixed rule.

    Accepts complex integrands; the error estimate compares one panel
    against its two halves.
    """
    whole = gl_fixed(f, a, b)
    mid = 0.5 * (a + b)
    split = gl_fixed(f, a, mid) + gl_fixed(f, mid, b)
    if abs(split - whole) <= max(atol, rtol * abs(split)):
        return split
    if _depth >= 40:
        raise RuntimeError(f"adaptive quadrature failed to converge on [{a}, {b}]")
    return (gl_adaptive(f, a, mid, rtol, 0.5 * atol, _depth + 1)
            + gl_adaptive(f, mid, b, rtol, 0.5 * atol, _depth + 1))
