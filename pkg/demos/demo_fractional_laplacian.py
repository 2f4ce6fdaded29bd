"""Dual-route check of the fractional Laplacian: the |xi|^eta multiplier
against the principal-value singular integral, on Gaussian inputs."""

import numpy as np

from speclp import (Field, GridSpec, SpectralField, forward_transform,
                    fractional_laplacian_pv, inverse_transform, pv_normalization)

g = GridSpec(1, 16384, 256.0)
x = g.x_axis()
f = Field(g, np.exp(-(x**2) / 2))
F = forward_transform(f)
xi = g.freq_axis()

print(f"{'eta':>5} {'C(eta)':>10} {'rel L2 discrepancy':>20}")
for eta in (0.5, 1.0, 1.5):
    A = inverse_transform(SpectralField(g, -np.abs(xi) ** eta * F.coeffs))
    B = fractional_laplacian_pv(f, eta)
    rel = np.linalg.norm(A.values - B.values) / np.linalg.norm(A.values)
    print(f"{eta:>5} {pv_normalization(1, eta):>10.6f} {rel:>20.3e}")

print()
print("the multiplier route exposes the heavy tail the PV form predicts:")
A = inverse_transform(SpectralField(g, -np.abs(xi) ** 1.0 * F.coeffs)).values.real
Cp = pv_normalization(1, 1.0) * np.sqrt(2 * np.pi)  # C(eta) ||f||_1
for xv in (10.0, 20.0, 40.0, 80.0):
    i = np.argmin(np.abs(x - xv))
    print(f"  x = {xv:5.1f}: value {A[i]:+.5e}   asymptote C||f||_1 x^-2 = "
          f"{Cp / xv**2:+.5e}")
