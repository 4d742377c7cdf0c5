"""Direct-sampling imaging from the multi-static far-field matrix.

For a sampling point z and uniformly spaced directions d_1..d_N, the test
vector is phi_z = (e^{-ik z.d_1}, ..., e^{-ik z.d_N}). The two indicators,
both plain (unweighted) l2 expressions on the data matrix, are

    w_ip(z)   = | (phi_z, F phi_z)_l2 |^rho
    w_norm(z) = ||F phi_z||_l2^rho.

Large values flag the cavity; grids are max-normalized before use. Noise is
multiplicative per entry, F(i,j) (1 + delta R(i,j)), and partial aperture is
modeled by zeroing receiver rows / source columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .forward import FarFieldMatrix


@dataclass(frozen=True)
class NoiseModel:
    """Multiplicative noise level delta in [0, 1) with a reproducing seed."""

    delta: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.delta < 1.0:
            raise ValueError("noise level delta must lie in [0, 1)")


@dataclass(frozen=True)
class ApertureMask:
    """1-based receiver rows / source columns to zero out (subsets of 1..N)."""

    receiver_rows: tuple = ()
    source_cols: tuple = ()

    def is_empty(self) -> bool:
        return not self.receiver_rows and not self.source_cols


def add_noise(ff: FarFieldMatrix, model: NoiseModel) -> FarFieldMatrix:
    """Entrywise F(i,j) (1 + delta R(i,j)), R = U + iV with U, V ~ Unif[-1,1].

    The (re, im) pairs are drawn in row-major entry order from numpy's
    default_rng(seed), so results are reproducible per seed. delta = 0
    returns the input unchanged (bit-identical entries).
    """
    if model.delta == 0.0:
        return replace(ff, entries=ff.entries.copy())
    n = ff.n_dirs
    draws = np.random.default_rng(model.seed).uniform(-1.0, 1.0, size=(n, n, 2))
    R = draws[..., 0] + 1j * draws[..., 1]
    return replace(ff, entries=ff.entries * (1.0 + model.delta * R))


def apply_mask(ff: FarFieldMatrix, mask: ApertureMask) -> FarFieldMatrix:
    """Zero the masked rows/columns; everything else is untouched."""
    n = ff.n_dirs
    for idx in (*mask.receiver_rows, *mask.source_cols):
        if not 1 <= idx <= n:
            raise IndexError(f"mask index {idx} outside 1..{n}")
    entries = ff.entries.copy()
    if mask.receiver_rows:
        entries[np.asarray(mask.receiver_rows) - 1, :] = 0.0
    if mask.source_cols:
        entries[:, np.asarray(mask.source_cols) - 1] = 0.0
    return replace(ff, entries=entries)


def phi_z(k: float, directions: np.ndarray, z) -> np.ndarray:
    """Test vector with components e^{-ik z.d_i}; unit modulus per component."""
    z = np.asarray(z, dtype=float)
    return np.exp(-1j * k * (np.asarray(directions) @ z))


def w_ip(ff: FarFieldMatrix, z, rho: float) -> float:
    """Inner-product indicator |(phi_z, F phi_z)|^rho."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    p = phi_z(ff.k, ff.directions, z)
    return float(np.abs(np.vdot(p, ff.entries @ p)) ** rho)


def w_norm(ff: FarFieldMatrix, z, rho: float) -> float:
    """Norm indicator ||F phi_z||^rho."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    p = phi_z(ff.k, ff.directions, z)
    return float(np.linalg.norm(ff.entries @ p) ** rho)


def indicator_values(ff: FarFieldMatrix, points, rho: float, which: str) -> np.ndarray:
    """Vectorized indicator over an (m, 2) array of sampling points."""
    if which not in ("ip", "norm"):
        raise ValueError("which must be 'ip' or 'norm'")
    if rho <= 0:
        raise ValueError("rho must be positive")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    P = np.exp(-1j * ff.k * (pts @ ff.directions.T))   # (m, N)
    FP = P @ ff.entries.T                              # (m, N): (F phi_z)_i per row
    if which == "ip":
        vals = np.abs(np.einsum("mi,mi->m", P.conj(), FP))
        return vals**rho
    return np.linalg.norm(FP, axis=1) ** rho


@dataclass(frozen=True)
class ImagingGrid:
    """Sampling grid with (max-normalized) indicator values.

    values has shape (ny, nx); values[iy, ix] belongs to (xs[ix], ys[iy]).
    """

    extent: tuple                 # (x_min, x_max, y_min, y_max)
    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray
    normalized: bool = True
    meta: dict = field(default_factory=dict)

    @property
    def resolution(self) -> tuple:
        return (len(self.xs), len(self.ys))

    def points(self) -> np.ndarray:
        """Grid points, row-major over (y, x), shape (nx*ny, 2)."""
        X, Y = np.meshgrid(self.xs, self.ys)
        return np.stack([X.ravel(), Y.ravel()], axis=-1)

    def argmax_point(self) -> np.ndarray:
        iy, ix = np.unravel_index(np.argmax(self.values), self.values.shape)
        return np.array([self.xs[ix], self.ys[iy]])


def evaluate_grid(ff: FarFieldMatrix, extent, resolution, rho: float, which: str) -> ImagingGrid:
    """Evaluate the chosen indicator on the grid, then max-normalize.

    extent = (x_min, x_max, y_min, y_max); resolution = (nx, ny) with
    endpoints included. Raises if the grid is identically zero.
    """
    nx, ny = int(resolution[0]), int(resolution[1])
    if nx < 2 or ny < 2:
        raise ValueError("grid resolution must be >= 2 per axis")
    x_min, x_max, y_min, y_max = (float(v) for v in extent)
    xs = np.linspace(x_min, x_max, nx)
    ys = np.linspace(y_min, y_max, ny)
    X, Y = np.meshgrid(xs, ys)
    pts = np.stack([X.ravel(), Y.ravel()], axis=-1)
    vals = indicator_values(ff, pts, rho, which).reshape(ny, nx)
    peak = vals.max()
    if peak <= 0.0:
        raise ValueError("degenerate imaging grid: indicator vanishes everywhere")
    return ImagingGrid(
        extent=(x_min, x_max, y_min, y_max),
        xs=xs,
        ys=ys,
        values=vals / peak,
        normalized=True,
        meta={"rho": rho, "which": which, "k": ff.k, "n_dirs": ff.n_dirs},
    )


def save_grid_csv(grid: ImagingGrid, path) -> None:
    """CSV export: header 'x,y,value', rows in row-major (y outer, x inner)."""
    lines = ["x,y,value"]
    for iy, y in enumerate(grid.ys):
        for ix, x in enumerate(grid.xs):
            lines.append(f"{x:.17g},{y:.17g},{grid.values[iy, ix]:.17g}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def save_grid_pgm(grid: ImagingGrid, path) -> None:
    """8-bit binary PGM (P5) raster; 255 = indicator value 1, top row = max y."""
    img = np.clip(np.rint(grid.values * 255.0), 0, 255).astype(np.uint8)[::-1, :]
    ny, nx = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{nx} {ny}\n255\n".encode("ascii"))
        fh.write(img.tobytes())
