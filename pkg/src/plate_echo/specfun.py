"""Cylinder functions and the free-space kernels built from them.

Thin contract layer over scipy.special: arguments are validated (out-of-domain
raises instead of returning NaN), negative integer orders are folded onto
nonnegative ones through the reflection identities

    J_{-n} = (-1)^n J_n,   Y_{-n} = (-1)^n Y_n,   K_{-n} = K_n,   I_{-n} = I_n,

and every family gets a derivative evaluator using the standard recurrence

    f_n'(t) = (f_{n-1}(t) - f_{n+1}(t)) / 2        for f in {J, Y, H^(1)},
    K_n'(t) = -(K_{n-1}(t) + K_{n+1}(t)) / 2,
    I_n'(t) =  (I_{n-1}(t) + I_{n+1}(t)) / 2.

Note the minus sign in the oscillatory-family recurrence; a plus-sign variant
that circulates in some references is incorrect and is deliberately not used.

Intended range: |n| <= 64, t in (0, 1000]; values are accurate to ~1e-12
absolute there. K_n underflows cleanly to 0 for large t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sp

EULER_GAMMA = float(np.euler_gamma)


def _reflect_sign(n: int) -> int:
    return -1 if n < 0 and n % 2 else 1


def bessel_j(n: int, t):
    """Bessel function of the first kind J_n(t), t >= 0."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("bessel_j requires t >= 0")
    return _reflect_sign(n) * sp.jv(abs(n), t)


def bessel_y(n: int, t):
    """Bessel function of the second kind Y_n(t), t > 0."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("bessel_y requires t > 0")
    return _reflect_sign(n) * sp.yv(abs(n), t)


def bessel_i(n: int, t):
    """Modified Bessel function of the first kind I_n(t), t >= 0."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("bessel_i requires t >= 0")
    return sp.iv(abs(n), t)


def bessel_k(n: int, t):
    """Modified Bessel function of the second kind K_n(t), t > 0.

    Strictly positive and strictly decreasing in t; returns 0 once e^{-t}
    underflows (t beyond ~745). Evaluated through the exponentially scaled
    form so accuracy holds all the way down to that limit (plain kv gives up
    around t = 700).
    """
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("bessel_k requires t > 0")
    return sp.kve(abs(n), t) * np.exp(-t)


def hankel1(n: int, t):
    """Hankel function of the first kind H^(1)_n(t) = J_n(t) + i Y_n(t), t > 0."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("hankel1 requires t > 0")
    return _reflect_sign(n) * sp.hankel1(abs(n), t)


def bessel_j_deriv(n: int, t):
    return 0.5 * (bessel_j(n - 1, t) - bessel_j(n + 1, t))


def bessel_y_deriv(n: int, t):
    return 0.5 * (bessel_y(n - 1, t) - bessel_y(n + 1, t))


def hankel1_deriv(n: int, t):
    return 0.5 * (hankel1(n - 1, t) - hankel1(n + 1, t))


def bessel_i_deriv(n: int, t):
    if n == 0:
        return bessel_i(1, t)
    return 0.5 * (bessel_i(n - 1, t) + bessel_i(n + 1, t))


def bessel_k_deriv(n: int, t):
    return -0.5 * (bessel_k(n - 1, t) + bessel_k(n + 1, t))


_FAMILIES = {
    "j": (bessel_j, bessel_j_deriv),
    "y": (bessel_y, bessel_y_deriv),
    "h1": (hankel1, hankel1_deriv),
    "i": (bessel_i, bessel_i_deriv),
    "k": (bessel_k, bessel_k_deriv),
}


@dataclass(frozen=True)
class CylinderFunctionValue:
    """One cylinder-function evaluation: order, argument, value, derivative."""

    order: int
    argument: float
    value: complex
    derivative: complex


def cylinder_value(family: str, n: int, t: float) -> CylinderFunctionValue:
    """Evaluate a cylinder function and its derivative in one call.

    family is one of 'j', 'y', 'h1', 'i', 'k'.
    """
    try:
        fn, dfn = _FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown cylinder family {family!r}") from None
    return CylinderFunctionValue(n, float(t), complex(fn(n, t)), complex(dfn(n, t)))


def fundamental_solution(kind: str, k: float, x, y):
    """Free-space kernel of the scalar 2-D operators at wavenumber k > 0.

    kind='helmholtz': (i/4) H^(1)_0(k |x-y|), the outgoing Helmholtz kernel.
    kind='modified':  (1/2pi) K_0(k |x-y|), the decaying modified-Helmholtz
    kernel (equal to (i/4) H^(1)_0(ik |x-y|)); real and positive.

    x, y are points of shape (..., 2); broadcasting applies. Raises on
    coincident points.
    """
    if k <= 0:
        raise ValueError("fundamental_solution requires k > 0")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = np.linalg.norm(x - y, axis=-1)
    if np.any(r == 0):
        raise ValueError("fundamental_solution is singular at x == y")
    if kind == "helmholtz":
        return 0.25j * sp.hankel1(0, k * r)
    if kind == "modified":
        return sp.kv(0, k * r) / (2.0 * np.pi)
    raise ValueError(f"unknown kernel kind {kind!r}")
