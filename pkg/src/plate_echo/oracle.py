"""Closed-form scattering solution for a clamped circular cavity.

Independent ground truth for the integral-equation solver. For a disk of
radius a centered at the origin and a plane wave exp(ik x.d), expand
everything in angular modes e^{in theta}. The incident wave contributes
c_n J_n(kr) with c_n = i^n e^{-in theta_d}; the scattered field is

    u_scat(r, th) = sum_n [ a_n H^(1)_n(kr) + b_n K_n(kr) ] e^{in th},

the propagating part carried by the Hankel terms and the evanescent part by
the K-Bessel terms. The clamped conditions u = 0 and du/dr = 0 at r = a give
one 2x2 system per mode:

    a_n H_n(ka)  + b_n K_n(ka)  = -c_n J_n(ka)
    a_n H_n'(ka) + b_n K_n'(ka) = -c_n J_n'(ka).

Per mode the ratios a_n/c_n, b_n/c_n are direction independent, so one solve
serves all incident directions.

Far field: with the amplitude normalization fixed by

    u_scat = (e^{i pi/4} / sqrt(8 pi k)) (e^{ik|x|} / sqrt|x|) (u_inf + O(1/|x|)),

the large-argument Hankel asymptotics give a mode-n far-field factor of
-4i (-i)^n, i.e.

    u_inf(xhat, d) = -4i sum_n (a_n/c_n) e^{in (th_x - th_d)}.

The constant was frozen only after passing the large-radius quotient test
(evaluate the series at |x| = 1e4, divide by the prefactor, compare), which
the test suite repeats. The K-Bessel part decays exponentially and never
reaches the far field.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .specfun import (
    bessel_j,
    bessel_j_deriv,
    bessel_k,
    bessel_k_deriv,
    hankel1,
    hankel1_deriv,
)


@dataclass(frozen=True)
class DiskScatteringSolution:
    """Mode coefficients of the clamped-disk scattering problem.

    a_coef/b_coef hold the Hankel/K-Bessel coefficients for modes
    n = -order..order (index n + order); reflect[n] = a_n / c_n is the
    direction-independent mode response shared by all incident directions.
    """

    radius: float
    k: float
    order: int
    direction: tuple
    a_coef: np.ndarray
    b_coef: np.ndarray
    reflect: np.ndarray

    def modes(self):
        return np.arange(-self.order, self.order + 1)


def _mode_ratios(a: float, k: float, order: int):
    """Direction-independent per-mode responses (ra_n, rb_n) = (a_n, b_n)/c_n."""
    z = k * a
    n = np.arange(0, order + 1)
    J = np.array([bessel_j(int(m), z) for m in n])
    Jp = np.array([bessel_j_deriv(int(m), z) for m in n])
    H = np.array([hankel1(int(m), z) for m in n])
    Hp = np.array([hankel1_deriv(int(m), z) for m in n])
    K = np.array([bessel_k(int(m), z) for m in n])
    Kp = np.array([bessel_k_deriv(int(m), z) for m in n])
    det = H * Kp - Hp * K
    if np.any(np.abs(det) == 0.0) or np.any(~np.isfinite(det)):
        raise RuntimeError("singular clamped-disk mode system (determinant underflow)")
    ra = (Jp * K - J * Kp) / det
    rb = (Hp * J - H * Jp) / det
    # Under n -> -n the J/H factors flip sign like (-1)^n while K does not:
    # the ra numerator and the determinant flip coherently (ra even), but the
    # rb numerator flips twice, so rb picks up (-1)^n.
    sign = (-1.0) ** n
    full = np.concatenate([ra[:0:-1], ra])
    fullb = np.concatenate([(sign * rb)[:0:-1], rb])
    return full, fullb, J, H, K


def solve_disk(a: float, k: float, order: int, d) -> DiskScatteringSolution:
    """Solve the clamped-disk problem for incident direction d (unit vector).

    order must be at least ceil(k a) + 20 so the mode tail is negligible;
    raises if the top retained mode still contributes more than 1e-12 on the
    boundary.
    """
    if a <= 0 or k <= 0:
        raise ValueError("solve_disk requires a > 0 and k > 0")
    if order < int(np.ceil(k * a)) + 20:
        raise ValueError("truncation order too small: need order >= ceil(k*a) + 20")
    d = np.asarray(d, dtype=float)
    theta_d = np.arctan2(d[1], d[0])

    ra, rb, J, H, K = _mode_ratios(a, k, order)
    n = np.arange(-order, order + 1)
    c = (1j) ** n * np.exp(-1j * n * theta_d)
    a_coef = c * ra
    b_coef = c * rb

    tail = abs(ra[-1] * H[-1]) + abs(rb[-1] * K[-1])
    if tail > 1e-12:
        raise RuntimeError(
            f"mode tail not converged: top-mode boundary contribution {tail:.3e} > 1e-12"
        )
    return DiskScatteringSolution(
        radius=float(a), k=float(k), order=int(order),
        direction=(float(d[0]), float(d[1])),
        a_coef=a_coef, b_coef=b_coef, reflect=ra,
    )


def scattered_field(sol: DiskScatteringSolution, points, radial_derivative: bool = False):
    """Evaluate the scattered field (or its radial derivative) at r >= radius."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    r = np.hypot(pts[:, 0], pts[:, 1])
    if np.any(r < sol.radius * (1 - 1e-12)):
        raise ValueError("scattered_field is defined for |x| >= radius")
    th = np.arctan2(pts[:, 1], pts[:, 0])
    n = sol.modes()
    out = np.zeros(len(pts), dtype=complex)
    for idx, m in enumerate(n):
        if radial_derivative:
            rad = sol.k * hankel1_deriv(int(m), sol.k * r)
            radk = sol.k * bessel_k_deriv(int(m), sol.k * r)
        else:
            rad = hankel1(int(m), sol.k * r)
            radk = bessel_k(int(m), sol.k * r)
        out += (sol.a_coef[idx] * rad + sol.b_coef[idx] * radk) * np.exp(1j * m * th)
    return out


def disk_far_field(sol: DiskScatteringSolution, xhat):
    """Far-field pattern u_inf(xhat, d) of the disk solution."""
    xhat = np.atleast_2d(np.asarray(xhat, dtype=float))
    th = np.arctan2(xhat[:, 1], xhat[:, 0])
    n = sol.modes()
    phases = np.exp(1j * np.outer(th, n)) * (-1j) ** n
    vals = -4j * phases @ sol.a_coef
    return vals if vals.size > 1 else complex(vals[0])


def disk_far_field_matrix(a: float, k: float, n_dirs: int, order: int | None = None):
    """Multi-static far-field matrix of the clamped disk on uniform directions.

    Entries u_inf(xhat_i, d_j) for theta_i = 2 pi i / n_dirs. Uses the
    direction-independent mode responses, so the cost is one mode solve.
    Returns a forward.FarFieldMatrix.
    """
    from .forward import FarFieldMatrix, uniform_directions

    if order is None:
        order = int(np.ceil(k * a)) + 24
    sol = solve_disk(a, k, order, (1.0, 0.0))
    n = sol.modes()
    mu = -4j * sol.reflect
    theta = 2.0 * np.pi * np.arange(n_dirs) / n_dirs
    U = np.exp(1j * np.outer(theta, n))
    entries = (U * mu) @ U.conj().T
    return FarFieldMatrix(
        k=float(k),
        directions=uniform_directions(n_dirs),
        entries=entries,
        shape_kind="circle",
    )
