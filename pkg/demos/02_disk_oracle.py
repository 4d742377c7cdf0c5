"""Closed-form disk solution as ground truth for the integral-equation solver.

For a circular cavity the clamped scattering problem separates into angular
modes and solves in closed form. This script checks the clamped boundary
conditions mode by mode, verifies the far-field amplitude normalization with
a large-radius quotient, and compares the solver's far-field matrix against
the closed form entry by entry.
"""

import numpy as np

from plate_echo import assemble_far_field_matrix, disk_far_field_matrix, make_curve, solve_disk
from plate_echo.oracle import disk_far_field, scattered_field

a, k = 1.0, 4.0
sol = solve_disk(a, k, order=26, d=(1.0, 0.0))

# clamped conditions: total displacement and its normal derivative vanish
th = 2 * np.pi * np.arange(100) / 100
rim = a * np.stack([np.cos(th), np.sin(th)], axis=-1)
u_inc = np.exp(1j * k * rim[:, 0])
u_total = u_inc + scattered_field(sol, rim)
du_total = 1j * k * np.cos(th) * u_inc + scattered_field(sol, rim, radial_derivative=True)
print(f"boundary residuals: |u| <= {np.abs(u_total).max():.2e}, "
      f"|du/dr| <= {np.abs(du_total).max():.2e}")

# far-field normalization: evaluate the series far away, divide by the
# radiating prefactor, compare with the closed-form far field
R = 1e4
xhat = np.array([np.cos(0.7), np.sin(0.7)])
u_far = scattered_field(sol, (R * xhat)[None, :])[0]
prefactor = np.exp(1j * np.pi / 4) / np.sqrt(8 * np.pi * k) * np.exp(1j * k * R) / np.sqrt(R)
print(f"large-radius quotient vs far field: rel diff "
      f"{abs(u_far / prefactor - disk_far_field(sol, xhat)) / abs(disk_far_field(sol, xhat)):.2e}")

# every far-field mode amplitude lies on the circle |mu - 2i| = 2, the
# per-mode form of the operator identity
mu = -4j * sol.reflect
print(f"mode amplitudes on identity circle: max dev {np.abs(np.abs(mu - 2j) - 2).max():.2e}")

# the two independent solution paths agree entry by entry
bie = assemble_far_field_matrix(make_curve("circle", (a,)), k, 64, 128)
oracle = disk_far_field_matrix(a, k, 64)
rel = np.abs(bie.entries - oracle.entries).max() / np.abs(oracle.entries).max()
print(f"integral-equation vs closed form, entrywise relative: {rel:.2e}")
