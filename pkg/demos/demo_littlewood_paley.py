"""Dyadic decomposition: partition of unity, block energies, norms."""

import numpy as np

from speclp import (GridSpec, besov_norm0, block, block_energy_table,
                    build_decomposition, bump_profile, generate_corpus, low_part,
                    lp_norm, sobolev_norm)

grid = GridSpec(1, 1024, 32.0)
D = build_decomposition(grid)
print(f"grid: n={grid.n}, L={grid.half_extent}; active dyadic range "
      f"j in [{D.j_min}, {D.j_max}]")

xi = grid.xi_norm()
total = np.zeros(grid.shape)
for j in D.j_range:
    total += bump_profile(xi * 2.0 ** (-j))
print(f"partition of unity defect on the lattice: "
      f"{np.abs(total[xi > 0] - 1).max():.2e}")

f = generate_corpus(1, grid, "BANDLIMITED_RANDOM", 1, mean_removed=False)[0].field

rec = low_part(f, D).values.copy()
for j in range(1, D.j_max + 1):
    rec += block(f, j, D).values
print(f"reconstruction error: "
      f"{np.linalg.norm(rec - f.values) / np.linalg.norm(f.values):.2e}")

print()
print("dyadic energy profile (j, ||block_j f||_2):")
for j, e in block_energy_table(f, 2.0, D):
    bar = "#" * int(40 * e / lp_norm(f, 2))
    print(f"  j={j:+3d}  {e:10.4e}  {bar}")

print()
print(f"zero-order Besov norm (q=2):  {besov_norm0(f, 2.0, D):.6f}")
print(f"L2 norm:                      {lp_norm(f, 2):.6f}")
print(f"Sobolev norm (alpha=1, p=2):  {sobolev_norm(f, 1.0, 2.0):.6f}")
