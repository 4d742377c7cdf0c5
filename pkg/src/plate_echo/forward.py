"""Nystrom solver for the clamped-plate scattering problem.

The scattered field is sought as (Helmholtz double layer) + (modified-
Helmholtz single layer) with densities (phi1, phi2). Zero Cauchy data on the
boundary plus the jump relations give the 2x2 block system

    [ K  + I    S~     ] [phi1]      [ u_inc      ]
    [ T         K~' - I] [phi2] = -2 [ dnu u_inc  ],

where, with Phi_k = (i/4) H^(1)_0(k|x-y|) and Phi~_k = (1/2pi) K_0(k|x-y|),

    S~ phi  = 2 int Phi~_k(x,y) phi(y) ds(y)
    K phi   = 2 int dnu(y) Phi_k(x,y) phi(y) ds(y)
    K~'phi  = 2 int dnu(x) Phi~_k(x,y) phi(y) ds(y)
    T phi   = 2 int dnu(x) dnu(y) Phi_k(x,y) phi(y) ds(y).

Discretization: 2n equispaced nodes t_j = j pi/n on [0, 2pi). Each kernel is
split as A(t,s) = A1(t,s) ln(4 sin^2((t-s)/2)) + A2(t,s) with analytic A1, A2
and integrated with the trigonometric product quadrature for the log factor
(weights R_j below) plus the trapezoid rule for the smooth factor. The
hypersingular block T is lowered to weakly singular integrals with the
tangential-derivative identity

    T phi = 2 d/ds int Phi_k phi'(s) ds + 2 k^2 int Phi_k (nu.nu) phi ds,

with both tangential derivatives applied through exact Fourier
differentiation of the trigonometric interpolant. All blocks converge
superalgebraically on analytic boundaries.

Diagonal limits of the smooth parts come from the small-argument expansions

    H^(1)_0(z) = J_0(z) + (2i/pi)(ln(z/2) + gamma) J_0(z) + ...
    K_0(z)     = -(ln(z/2) + gamma) I_0(z) + ...
    K_1(z)     = 1/z + ln(z/2) I_1(z) + ...

and from n(t).(x(t)-x(s)) ~ (1/2) n.x'' (t-s)^2 at coincident points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sp
from scipy.linalg import lu_factor, lu_solve

from .geometry import ParametricCurve
from .specfun import EULER_GAMMA

SOLVE_RESIDUAL_TOL = 1e-10


# ---------------------------------------------------------------------------
# data containers
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class BoundaryDiscretization:
    """Equispaced parameter nodes with precomputed boundary frames."""

    curve: ParametricCurve
    n_nodes: int               # 2n, even
    t: np.ndarray              # (2n,)
    x: np.ndarray              # (2n, 2) positions
    speed: np.ndarray          # (2n,) |x'|
    normal: np.ndarray         # (2n, 2) unit outward
    normal_raw: np.ndarray     # (2n, 2) (x2', -x1'), length |x'|
    curvature_term: np.ndarray # (2n,) n.x'' / |x'|^2

    @property
    def half(self) -> int:
        return self.n_nodes // 2


def discretize(curve: ParametricCurve, n_nodes: int, offset: float = 0.0) -> BoundaryDiscretization:
    """Sample the curve at 2n equispaced nodes (optionally phase-shifted)."""
    if n_nodes < 16 or n_nodes % 2:
        raise ValueError("n_nodes must be an even integer >= 16")
    t = offset + np.pi * np.arange(n_nodes) / (n_nodes // 2)
    x = curve.position(t)
    v = curve.velocity(t)
    a = curve.acceleration(t)
    speed = np.hypot(v[:, 0], v[:, 1])
    nraw = np.stack([v[:, 1], -v[:, 0]], axis=-1)
    ndotxpp = nraw[:, 0] * a[:, 0] + nraw[:, 1] * a[:, 1]
    return BoundaryDiscretization(
        curve=curve,
        n_nodes=n_nodes,
        t=t,
        x=x,
        speed=speed,
        normal=nraw / speed[:, None],
        normal_raw=nraw,
        curvature_term=ndotxpp / speed**2,
    )


@dataclass(frozen=True)
class DensityPair:
    """Boundary densities (phi1, phi2) at the nodes for one incident direction."""

    phi1: np.ndarray
    phi2: np.ndarray
    incident_direction: tuple


@dataclass(frozen=True)
class FarFieldMatrix:
    """Multi-static far-field matrix entry(i,j) = u_inf(xhat_i, d_j)."""

    k: float
    directions: np.ndarray     # (N, 2), theta_i = 2 pi i / N
    entries: np.ndarray        # (N, N) complex
    shape_kind: str = ""

    @property
    def n_dirs(self) -> int:
        return self.entries.shape[0]


def uniform_directions(n_dirs: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(n_dirs) / n_dirs
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


# ---------------------------------------------------------------------------
# quadrature ingredients
# ---------------------------------------------------------------------------
def kress_log_weights(half: int) -> np.ndarray:
    """Weights R_j for int_0^2pi ln(4 sin^2((t-s)/2)) f(s) ds at the nodes.

    R_j = -(2 pi/n) sum_{m=1}^{n-1} cos(m j pi/n)/m - (-1)^j pi/n^2, with n the
    half node count; exact for trigonometric polynomials of degree < n.
    """
    n = half
    j = np.arange(2 * n)
    m = np.arange(1, n)
    c = np.cos(np.pi * np.outer(j, m) / n) @ (1.0 / m)
    return -(2.0 * np.pi / n) * c - (np.pi / n**2) * np.cos(np.pi * j)


def fourier_differentiation_matrix(n_nodes: int) -> np.ndarray:
    """Spectral differentiation on 2n equispaced nodes (even count)."""
    i = np.arange(n_nodes)
    diff = i[:, None] - i[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        D = 0.5 * (-1.0) ** diff / np.tan(np.pi * diff / n_nodes)
    np.fill_diagonal(D, 0.0)
    return D


def _pairwise(disc: BoundaryDiscretization):
    """Distances, normal projections and the log-split factor for all node pairs."""
    x = disc.x
    dx = x[:, None, :] - x[None, :, :]
    r = np.hypot(dx[..., 0], dx[..., 1])
    scale = max(disc.curve.diameter(), 1e-30)
    offdiag = ~np.eye(disc.n_nodes, dtype=bool)
    if r[offdiag].min() < 1e-12 * scale:
        raise RuntimeError("degenerate boundary: coincident quadrature nodes")
    np.fill_diagonal(r, 1.0)  # placeholder; diagonals are set explicitly
    dt = disc.t[:, None] - disc.t[None, :]
    lsin = np.log(4.0 * np.sin(dt / 2.0) ** 2, where=offdiag, out=np.zeros_like(r))
    # n_j . (x_i - x_j) and n_i . (x_i - x_j)
    nr = disc.normal_raw
    q_at_src = dx[..., 0] * nr[None, :, 0] + dx[..., 1] * nr[None, :, 1]
    q_at_obs = dx[..., 0] * nr[:, None, 0] + dx[..., 1] * nr[:, None, 1]
    return r, lsin, q_at_src, q_at_obs


def _log_quadrature(weights_log, half, kernel1, kernel2):
    """Combine split kernels: R o A1 + (pi/n) A2."""
    return weights_log * kernel1 + (np.pi / half) * kernel2


# ---------------------------------------------------------------------------
# system assembly
# ---------------------------------------------------------------------------
def assemble_system(disc: BoundaryDiscretization, k: float) -> np.ndarray:
    """Dense Nystrom matrix of the 2x2 block operator (4n x 4n)."""
    if k <= 0:
        raise ValueError("assemble_system requires k > 0")
    m2 = disc.n_nodes
    half = disc.half
    speed = disc.speed
    r, lsin, q_src, q_obs = _pairwise(disc)
    kr = k * r
    Rlog = _as_circulant(kress_log_weights(half))
    diag_idx = np.arange(m2)
    eye = np.eye(m2)

    # --- block (1,1): Helmholtz double layer K + I ---------------------------
    j1 = sp.j1(kr)
    h1 = sp.hankel1(1, kr)
    L1 = -(k / (2.0 * np.pi)) * j1 * q_src / r
    L = (0.5j * k) * h1 * q_src / r
    L2 = L - L1 * lsin
    L1[diag_idx, diag_idx] = 0.0
    L2[diag_idx, diag_idx] = disc.curvature_term / (2.0 * np.pi)
    block_K = _log_quadrature(Rlog, half, L1, L2) + eye

    # --- block (1,2): modified-Helmholtz single layer ------------------------
    i0 = sp.i0(kr)
    k0 = sp.k0(kr)
    M1 = -(1.0 / (2.0 * np.pi)) * i0 * speed[None, :]
    M = (1.0 / np.pi) * k0 * speed[None, :]
    M2 = M - M1 * lsin
    M1[diag_idx, diag_idx] = -(1.0 / (2.0 * np.pi)) * speed
    M2[diag_idx, diag_idx] = -(1.0 / np.pi) * (np.log(0.5 * k * speed) + EULER_GAMMA) * speed
    block_S = _log_quadrature(Rlog, half, M1, M2)

    # --- block (2,2): modified-Helmholtz adjoint double layer - I ------------
    i1 = sp.i1(kr)
    k1 = sp.k1(kr)
    geo = q_obs * speed[None, :] / (speed[:, None] * r)
    P1 = -(k / (2.0 * np.pi)) * i1 * geo
    P = -(k / np.pi) * k1 * geo
    P2 = P - P1 * lsin
    P1[diag_idx, diag_idx] = 0.0
    P2[diag_idx, diag_idx] = disc.curvature_term / (2.0 * np.pi)
    block_Kp = _log_quadrature(Rlog, half, P1, P2) - eye

    # --- block (2,1): hypersingular block through the Maue split -------------
    j0 = sp.j0(kr)
    h0 = sp.hankel1(0, kr)
    G1 = -(1.0 / (4.0 * np.pi)) * j0
    G = 0.25j * h0
    G2 = G - G1 * lsin
    G1[diag_idx, diag_idx] = -(1.0 / (4.0 * np.pi))
    diag_G2 = 0.25j - (1.0 / (2.0 * np.pi)) * (np.log(0.5 * k * speed) + EULER_GAMMA)
    G2[diag_idx, diag_idx] = diag_G2
    A_phi = _log_quadrature(Rlog, half, G1, G2)

    nu = disc.normal
    nunu = nu @ nu.T
    N1 = G1 * nunu * speed[None, :]
    N = G * nunu * speed[None, :]
    N2 = N - N1 * lsin
    N1[diag_idx, diag_idx] = -(1.0 / (4.0 * np.pi)) * speed
    N2[diag_idx, diag_idx] = diag_G2 * speed
    A_nu = _log_quadrature(Rlog, half, N1, N2)

    D = fourier_differentiation_matrix(m2)
    block_T = 2.0 * (D @ A_phi @ D) / speed[:, None] + 2.0 * k**2 * A_nu

    A = np.empty((2 * m2, 2 * m2), dtype=complex)
    A[:m2, :m2] = block_K
    A[:m2, m2:] = block_S
    A[m2:, :m2] = block_T
    A[m2:, m2:] = block_Kp
    return A


def _as_circulant(weights: np.ndarray) -> np.ndarray:
    n = len(weights)
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return weights[idx]


def incident_trace(disc: BoundaryDiscretization, k: float, d) -> np.ndarray:
    """Right-hand side -2 (u_inc, dnu u_inc) at the nodes for direction d."""
    d = np.asarray(d, dtype=float)
    phase = np.exp(1j * k * (disc.x @ d))
    dn = 1j * k * (disc.normal @ d) * phase
    return -2.0 * np.concatenate([phase, dn])


def _backward_error(system, sol, rhs) -> float:
    """Normwise backward error of a linear solve (tiny for a stable solve)."""
    num = np.linalg.norm(system @ sol - rhs)
    den = np.linalg.norm(system) * np.linalg.norm(sol) + np.linalg.norm(rhs)
    return float(num / den)


def solve_densities(system: np.ndarray, disc: BoundaryDiscretization, k: float, d) -> DensityPair:
    """Solve the assembled system for one incident plane-wave direction."""
    rhs = incident_trace(disc, k, d)
    sol = np.linalg.solve(system, rhs)
    resid = _backward_error(system, sol, rhs)
    if not np.all(np.isfinite(sol)) or resid > SOLVE_RESIDUAL_TOL:
        raise RuntimeError(
            f"linear solve failed (relative residual {resid:.3e}); "
            "the discretized system may be singular"
        )
    m2 = disc.n_nodes
    d = np.asarray(d, dtype=float)
    return DensityPair(phi1=sol[:m2], phi2=sol[m2:], incident_direction=(d[0], d[1]))


def far_field(disc: BoundaryDiscretization, k: float, density: DensityPair, xhat):
    """Far-field pattern of the solved field at observation direction(s) xhat.

    u_inf(xhat) = -ik int nu(y).xhat e^{-ik xhat.y} phi1(y) ds(y), evaluated
    with the trapezoid rule; only phi1 enters (the evanescent part carries no
    far field).
    """
    xh = np.atleast_2d(np.asarray(xhat, dtype=float))
    E = _far_field_rows(disc, k, xh)
    vals = E @ density.phi1
    return vals if vals.size > 1 else complex(vals[0])


def _far_field_rows(disc: BoundaryDiscretization, k: float, xh: np.ndarray) -> np.ndarray:
    w = np.pi / disc.half
    proj = xh @ disc.normal_raw.T                  # (M, 2n): n_j . xhat_i
    phase = np.exp(-1j * k * (xh @ disc.x.T))      # (M, 2n)
    return -1j * k * w * proj * phase


def assemble_far_field_matrix(
    curve: ParametricCurve,
    k: float,
    n_dirs: int,
    n_nodes: int,
    node_offset: float = 0.0,
) -> FarFieldMatrix:
    """Build the N x N multi-static matrix: one assembly, N solves, N^2 evaluations."""
    if n_dirs < 4:
        raise ValueError("n_dirs must be >= 4")
    disc = discretize(curve, n_nodes, offset=node_offset)
    A = assemble_system(disc, k)
    lu = lu_factor(A)
    dirs = uniform_directions(n_dirs)
    rhs = np.stack([incident_trace(disc, k, d) for d in dirs], axis=-1)
    sols = lu_solve(lu, rhs)
    resid = _backward_error(A, sols, rhs)
    if not np.all(np.isfinite(sols)) or resid > SOLVE_RESIDUAL_TOL:
        raise RuntimeError(f"linear solve failed (relative residual {resid:.3e})")
    phi1 = sols[: disc.n_nodes, :]
    E = _far_field_rows(disc, k, dirs)
    return FarFieldMatrix(
        k=float(k), directions=dirs, entries=E @ phi1, shape_kind=curve.kind
    )


# ---------------------------------------------------------------------------
# far-field matrix file format
# ---------------------------------------------------------------------------
def save_farfield(ff: FarFieldMatrix, path) -> None:
    """Write the far-field matrix file.

    UTF-8 text: header '# biharmonic-farfield v1 N=<N> k=<k> shape=<kind>',
    then N^2 lines 'i j re im' (1-based indices, row-major, 17 significant
    digits).
    """
    n = ff.n_dirs
    lines = [f"# biharmonic-farfield v1 N={n} k={ff.k:.17g} shape={ff.shape_kind}"]
    for i in range(n):
        for j in range(n):
            v = ff.entries[i, j]
            lines.append(f"{i + 1} {j + 1} {v.real:.17g} {v.imag:.17g}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_farfield(path) -> FarFieldMatrix:
    """Read a far-field matrix file written by save_farfield."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        fields = header.split()
        if fields[:2] != ["#", "biharmonic-farfield"] or fields[2] != "v1":
            raise ValueError(f"not a biharmonic-farfield v1 file: {header!r}")
        meta = dict(f.split("=", 1) for f in fields[3:])
        n = int(meta["N"])
        k = float(meta["k"])
        kind = meta.get("shape", "")
        entries = np.zeros((n, n), dtype=complex)
        count = 0
        for line in fh:
            if not line.strip():
                continue
            i, j, re, im = line.split()
            entries[int(i) - 1, int(j) - 1] = float(re) + 1j * float(im)
            count += 1
    if count != n * n:
        raise ValueError(f"expected {n * n} entries, found {count}")
    return FarFieldMatrix(k=k, directions=uniform_directions(n), entries=entries, shape_kind=kind)
