"""Cavity reconstruction by direct sampling.

Builds far-field data for the star and peanut cavities, perturbs it with
multiplicative noise, evaluates both imaging indicators on a 150x150 grid
over [-4,4]^2, and scores the reconstructions. Writes CSV grids plus PGM
rasters you can view with any image tool; contours are left to external
plotting of the CSV.
"""

import numpy as np
from scipy.stats import spearmanr

from plate_echo import (
    NoiseModel,
    add_noise,
    assemble_far_field_matrix,
    evaluate_grid,
    make_curve,
    reconstruction_overlap,
)
from plate_echo.imaging import save_grid_csv, save_grid_pgm

k = 4.0
extent = (-4.0, 4.0, -4.0, 4.0)
resolution = (150, 150)

for kind, delta in (("star", 0.02), ("peanut", 0.3)):
    curve = make_curve(kind)
    ff = assemble_far_field_matrix(curve, k, 64, 128)
    noisy = add_noise(ff, NoiseModel(delta, seed=0))

    # inner-product indicator at rho=4 and norm indicator at rho=8 share the
    # same decay rate, so their reconstructions look alike
    grid_ip = evaluate_grid(noisy, extent, resolution, rho=4.0, which="ip")
    grid_nm = evaluate_grid(noisy, extent, resolution, rho=8.0, which="norm")

    ax, ay = grid_ip.argmax_point()
    inside = curve.contains(np.array([[ax, ay]]))[0]
    jac = reconstruction_overlap(grid_ip, curve, threshold=0.05)
    rank = spearmanr(grid_ip.values.ravel(), grid_nm.values.ravel()).statistic

    print(f"{kind} (noise {delta:g}):")
    print(f"  indicator peak at ({ax:.2f}, {ay:.2f}), inside cavity: {inside}")
    print(f"  overlap score (threshold 0.05): {jac:.3f}")
    print(f"  rank correlation ip(rho=4) vs norm(rho=8): {rank:.4f}")

    save_grid_csv(grid_ip, f"grid_{kind}_ip.csv")
    save_grid_pgm(grid_ip, f"grid_{kind}_ip.pgm")
    print(f"  wrote grid_{kind}_ip.csv / .pgm")
