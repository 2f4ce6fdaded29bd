"""Dyadic frequency decomposition, block operators, and Besov/Sobolev norms.

The radial cutoff chi is 1 on [0, 1], 0 on [2, inf), and in between equals
g(2 - rho) / (g(2 - rho) + g(rho - 1)) with g(u) = exp(-1/u) for u > 0 and 0
otherwise.  The bump is Phi(xi) = chi(|xi|) - chi(2|xi|), which is supported
exactly in {1/2 <= |xi| <= 2}, is nonnegative, and telescopes:

    sum_{j=m}^{M} Phi(2^-j xi) = chi(2^-M |xi|) - chi(2^(1-m) |xi|),

identically 1 for 2^m <= |xi| <= 2^M.  The low-frequency part is implemented
as the single multiplier chi(|xi|) (equal to the tail sum of blocks, with the
zero mode passed through).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import Field, GridSpec, SpectralField, forward_transform, inverse_transform, lp_norm

__all__ = [
    "DyadicDecomposition",
    "build_decomposition",
    "chi_profile",
    "bump_profile",
    "block",
    "block_multiplier",
    "low_part",
    "besov_norm0",
    "sobolev_norm",
    "block_energy_table",
]


def _g(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def chi_profile(rho) -> np.ndarray:
    """Smooth radial cutoff: 1 on [0,1], 0 on [2,inf), exponential ratio between."""
    rho = np.asarray(rho, dtype=float)
    a = _g(2.0 - rho)
    b = _g(rho - 1.0)
    mid = (rho > 1.0) & (rho < 2.0)
    out = np.where(rho <= 1.0, 1.0, 0.0)
    out[mid] = a[mid] / (a[mid] + b[mid])
    return out


def bump_profile(rho) -> np.ndarray:
    """Phi as a function of radius: chi(rho) - chi(2 rho)."""
    rho = np.asarray(rho, dtype=float)
    return chi_profile(rho) - chi_profile(2.0 * rho)


@dataclass(frozen=True, eq=False)
class DyadicDecomposition:
    """Active dyadic range for one grid, with the fixed radial profiles."""

    grid: GridSpec
    j_min: int
    j_max: int

    @property
    def j_range(self):
        return range(self.j_min, self.j_max + 1)

    @property
    def chi(self):
        return chi_profile

    @property
    def phi(self):
        return bump_profile


def build_decomposition(grid: GridSpec) -> DyadicDecomposition:
    """Choose the dyadic range covering [min nonzero |xi|, max lattice |xi|]."""
    xi_lo = grid.min_freq
    xi_hi = np.sqrt(grid.dim) * grid.nyquist
    j_min = int(np.floor(np.log2(xi_lo) + 1e-12))
    j_max = int(np.ceil(np.log2(xi_hi) - 1e-12))
    return DyadicDecomposition(grid=grid, j_min=j_min, j_max=j_max)


def block_multiplier(D: DyadicDecomposition, j: int) -> np.ndarray:
    return bump_profile(D.grid.xi_norm() * 2.0 ** (-j))


def _apply_real_aware(f: Field, mult: np.ndarray) -> Field:
    F = forward_transform(f)
    out = inverse_transform(SpectralField(f.grid, F.coeffs * mult))
    if np.abs(f.values.imag).max() == 0.0:
        scale = np.abs(out.values).max()
        if scale == 0.0 or np.abs(out.values.imag).max() <= 1e-10 * scale:
            return out.real_field()
    return out


def block(f: Field, j: int, D: DyadicDecomposition) -> Field:
    """Dyadic block: inverse transform of Phi(2^-j xi) * F(f)."""
    if j < D.j_min or j > D.j_max:
        raise ValueError(f"j={j} outside active range [{D.j_min}, {D.j_max}]")
    if f.grid != D.grid:
        raise ValueError("field and decomposition grids do not match")
    return _apply_real_aware(f, block_multiplier(D, j))


def low_part(f: Field, D: DyadicDecomposition) -> Field:
    """Low-frequency part: multiplier chi(|xi|); passes the zero mode through."""
    if f.grid != D.grid:
        raise ValueError("field and decomposition grids do not match")
    return _apply_real_aware(f, chi_profile(f.grid.xi_norm()))


def besov_norm0(f: Field, q: float, D: DyadicDecomposition) -> float:
    """Zero-order Besov norm ||S0 f||_q + (sum_{j>=1} ||block_j f||_q^q)^(1/q)."""
    if not q >= 1:
        raise ValueError(f"q must be >= 1, got {q}")
    low = lp_norm(low_part(f, D), q)
    hi = 0.0
    for j in range(max(1, D.j_min), D.j_max + 1):
        hi += lp_norm(block(f, j, D), q) ** q
    return low + hi ** (1.0 / q)


def sobolev_norm(f: Field, alpha: float, p: float) -> float:
    """|| (1 - Laplacian)^(alpha/2) f ||_p via the (1 + |xi|^2)^(alpha/2) multiplier."""
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    mult = (1.0 + f.grid.xi_norm() ** 2) ** (alpha / 2.0)
    return lp_norm(_apply_real_aware(f, mult), p)


def block_energy_table(f: Field, q: float, D: DyadicDecomposition):
    """Rows (j, ||block_j f||_q) across the active range, for CSV export."""
    return [(j, lp_norm(block(f, j, D), q)) for j in D.j_range]


def export_block_energy_csv(f: Field, q: float, D: DyadicDecomposition, path) -> None:
    with open(path, "w") as fh:
        fh.write("j,block_norm\n")
        for j, e in block_energy_table(f, q, D):
            fh.write(f"{j},{e!r}\n")
