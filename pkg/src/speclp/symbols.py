"""Frequency symbols of multiplier operators and their numerical audits.

A symbol is a function psi(t, xi) -> C together with certificate parameters
(kappa, mu, gamma, n_cert):

* ellipticity:      Re psi(t, xi) <= -kappa |xi|^gamma,
* derivative decay: |d^alpha_xi psi(t, xi)| <= mu |xi|^(gamma - |alpha|)
  for every multi-index with |alpha| <= n_cert, off the coordinate
  hyperplanes.

The audits below are falsifiers over finite sample sets, not proofs: they
search for the worst violation of each certificate on the supplied (t, xi)
samples and report it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import AuditError, SymbolEvalError

__all__ = [
    "SymbolSpec",
    "AuditReport",
    "eval_symbol",
    "audit_s1",
    "audit_s2",
    "check_homogeneity",
    "get_symbol",
    "heat_symbol",
    "poisson_symbol",
    "power_symbol",
    "power_t_symbol",
    "frac_lap_symbol",
    "BUILTIN_NAMES",
]

S1_DEFAULT_TOL = 1e-6  # absolute
S2_DEFAULT_TOL = 1e-3  # relative; finite-difference noise dominates
S2_DEFAULT_STEP = 1e-4  # step factor: h = step * max(|xi|, 1) per axis
HOMOGENEITY_DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class SymbolSpec:
    """A symbol psi(t, xi) with its certificate parameters.

    ``eval_fn(t, xi)`` takes a scalar time and an array whose first axis
    indexes the d frequency components; it returns an array of the remaining
    shape.  Symbols must be defined at xi = 0 (built-ins use psi(t, 0) = 0,
    the limit of the power families).
    """

    name: str
    eval_fn: Callable[[float, np.ndarray], np.ndarray]
    kappa: float
    mu: float
    gamma: float
    n_cert: int
    dim_hint: int = 1
    time_constant: bool = False
    homogeneous: bool = False

    def __post_init__(self):
        if not (self.kappa > 0 and self.mu > 0 and self.gamma > 0):
            raise ValueError("kappa, mu, gamma must be positive")
        if self.n_cert < math.floor(self.dim_hint / 2) + 1:
            raise ValueError("n_cert must be at least floor(d/2) + 1")

    def __call__(self, t: float, xi) -> np.ndarray:
        return eval_symbol(self, t, xi)


def eval_symbol(spec: SymbolSpec, t: float, xi):
    """Evaluate psi(t, xi); raises SymbolEvalError on non-finite output.

    ``xi`` may be a single point of shape (d,) (returns a complex scalar) or
    a stacked array of shape (d, ...) (returns an array).
    """
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    arr = np.atleast_1d(np.asarray(xi, dtype=float))
    single = arr.ndim == 1
    pts = arr[:, None] if single else arr
    out = np.asarray(spec.eval_fn(float(t), pts), dtype=np.complex128)
    if not np.all(np.isfinite(out)):
        bad = tuple(np.argwhere(~np.isfinite(out))[0])
        where = tuple(pts[(slice(None),) + bad])
        raise SymbolEvalError(f"symbol {spec.name!r} non-finite at t={t}, xi={where}")
    return complex(out.reshape(-1)[0]) if single else out


@dataclass(frozen=True)
class AuditReport:
    """Outcome of one certificate audit over a finite sample set."""

    condition: str  # "S1" | "S2" | "HOMOGENEITY"
    worst_violation: float
    worst_point: tuple  # (t, xi, multi-index or None)
    sample_count: int
    passed: bool
    tolerance: float


def _check_samples(xi_samples, dim=None, off_hyperplanes=False):
    pts = [np.atleast_1d(np.asarray(x, dtype=float)) for x in xi_samples]
    if not pts:
        raise ValueError("empty frequency sample set")
    d = pts[0].size if dim is None else dim
    for x in pts:
        if x.size != d:
            raise ValueError("inconsistent sample dimensions")
        if np.linalg.norm(x) == 0.0:
            raise ValueError("samples must avoid xi = 0")
        if off_hyperplanes and np.any(x == 0.0):
            raise ValueError("samples must avoid the coordinate hyperplanes")
    return pts


def audit_s1(spec: SymbolSpec, t_samples: Sequence[float], xi_samples,
             tolerance: float = S1_DEFAULT_TOL) -> AuditReport:
    """Worst signed defect of Re psi(t, xi) + kappa |xi|^gamma over the samples."""
    if len(t_samples) == 0:
        raise ValueError("empty time sample set")
    pts = _check_samples(xi_samples)
    worst = -np.inf
    worst_pt = None
    count = 0
    for t in t_samples:
        for x in pts:
            defect = float((eval_symbol(spec, t, x)).real + spec.kappa * np.linalg.norm(x) ** spec.gamma)
            count += 1
            if defect > worst:
                worst, worst_pt = defect, (float(t), tuple(x), None)
    return AuditReport("S1", worst, worst_pt, count, worst <= tolerance, tolerance)


def _fd_partial(spec, t, xi, alpha, h):
    # nested central differences, one axis at a time
    for i, a in enumerate(alpha):
        if a > 0:
            step = np.zeros_like(xi)
            step[i] = h[i]
            lower = tuple(a - 1 if j == i else b for j, b in enumerate(alpha))
            return (_fd_partial(spec, t, xi + step, lower, h)
                    - _fd_partial(spec, t, xi - step, lower, h)) / (2.0 * h[i])
    return eval_symbol(spec, t, xi)


def _multi_indices(d, max_order):
    for order in range(max_order + 1):
        for combo in itertools.product(range(order + 1), repeat=d):
            if sum(combo) == order:
                yield combo


def audit_s2(spec: SymbolSpec, max_order: int, t_samples: Sequence[float], xi_samples,
             tolerance: float = S2_DEFAULT_TOL, step: float = S2_DEFAULT_STEP) -> AuditReport:
    """Audit |d^alpha psi| <= mu |xi|^(gamma-|alpha|) for |alpha| <= max_order.

    Derivatives are estimated with nested central differences with per-axis
    step h = step * max(|xi|, 1).  The reported worst_violation is the
    largest absolute defect |est| - bound; the pass decision compares each
    defect against ``tolerance`` relative to its bound.
    """
    if max_order > spec.n_cert:
        raise ValueError(f"max_order {max_order} exceeds certified depth {spec.n_cert}")
    if len(t_samples) == 0:
        raise ValueError("empty time sample set")
    pts = _check_samples(xi_samples, off_hyperplanes=True)
    d = pts[0].size
    worst = -np.inf
    worst_pt = None
    passed = True
    count = 0
    for alpha in _multi_indices(d, max_order):
        order = sum(alpha)
        for t in t_samples:
            for x in pts:
                r = np.linalg.norm(x)
                h = np.full(d, step * max(r, 1.0))
                if np.any(x + h == x) or np.any(x - h == x):
                    raise AuditError(f"finite-difference step underflow at xi={tuple(x)}")
                est = abs(_fd_partial(spec, t, x, alpha, h))
                bound = spec.mu * r ** (spec.gamma - order)
                defect = est - bound
                count += 1
                if defect > tolerance * max(bound, 1e-300):
                    passed = False
                if defect > worst:
                    worst, worst_pt = defect, (float(t), tuple(x), alpha)
    return AuditReport("S2", worst, worst_pt, count, passed, tolerance)


def check_homogeneity(spec: SymbolSpec, lambdas: Sequence[float], xi_samples,
                      tolerance: float = HOMOGENEITY_DEFAULT_TOL,
                      eps_floor: float = 1e-30) -> AuditReport:
    """Relative defect of psi(lambda xi) = lambda^gamma psi(xi)."""
    if not spec.time_constant:
        raise ValueError("homogeneity check requires a time-constant symbol")
    if len(lambdas) == 0:
        raise ValueError("empty lambda sample set")
    pts = _check_samples(xi_samples)
    worst = -np.inf
    worst_pt = None
    count = 0
    for lam in lambdas:
        if not lam > 0:
            raise ValueError("lambdas must be positive")
        for x in pts:
            ref = lam**spec.gamma * eval_symbol(spec, 0.0, x)
            viol = abs(eval_symbol(spec, 0.0, lam * x) - ref) / (abs(ref) + eps_floor)
            count += 1
            if viol > worst:
                worst, worst_pt = viol, (float(lam), tuple(x), None)
    return AuditReport("HOMOGENEITY", worst, worst_pt, count, worst <= tolerance, tolerance)


# --- built-in families ------------------------------------------------------

def _radial_norm(xi: np.ndarray) -> np.ndarray:
    return np.sqrt((xi**2).sum(axis=0))


def _power_mu(gamma: float, scale: float = 1.0) -> float:
    # generous derivative-constant certificate for -c|xi|^gamma, orders <= 3,
    # d <= 3: 3 * max falling-factorial magnitude
    k1 = abs(gamma)
    k2 = abs(gamma * (gamma - 1.0))
    k3 = abs(gamma * (gamma - 1.0) * (gamma - 2.0))
    return 3.0 * scale * max(1.0, k1, k2, k3)


def power_symbol(gamma: float, name: Optional[str] = None) -> SymbolSpec:
    """psi(t, xi) = -|xi|^gamma; time-constant and homogeneous of degree gamma."""
    if not gamma > 0:
        raise ValueError("gamma must be positive")

    def fn(t, xi):
        return -_radial_norm(xi) ** gamma

    return SymbolSpec(
        name=name or f"power:{gamma:g}",
        eval_fn=fn,
        kappa=1.0,
        mu=_power_mu(gamma),
        gamma=gamma,
        n_cert=8,
        time_constant=True,
        homogeneous=True,
    )


def heat_symbol() -> SymbolSpec:
    return power_symbol(2.0, name="heat")


def poisson_symbol() -> SymbolSpec:
    return power_symbol(1.0, name="poisson")


def frac_lap_symbol(eta: float) -> SymbolSpec:
    """-|xi|^eta, the multiplier magnitude of the order-eta fractional Laplacian."""
    return power_symbol(eta, name=f"frac-lap:{eta:g}")


def power_t_symbol(gamma: float, kappa: float = 1.0,
                   k: Optional[Callable[[float], float]] = None,
                   k_bound: float = 4.0, name: Optional[str] = None) -> SymbolSpec:
    """psi(t, xi) = -(kappa + k(t)) |xi|^gamma with nonnegative bounded k.

    Default k(t) = t; the mu certificate covers t in [0, k_bound].
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    kfun = k if k is not None else (lambda t: t)

    def fn(t, xi):
        c = kfun(t)
        if c < 0:
            raise ValueError(f"k(t) must be nonnegative, got k({t})={c}")
        return -(kappa + c) * _radial_norm(xi) ** gamma

    return SymbolSpec(
        name=name or f"power-t:{gamma:g}",
        eval_fn=fn,
        kappa=kappa,
        mu=_power_mu(gamma, scale=kappa + k_bound),
        gamma=gamma,
        n_cert=8,
        time_constant=False,
        homogeneous=False,
    )


BUILTIN_NAMES = ("heat", "poisson", "power:<gamma>", "power-t:<gamma>", "frac-lap:<eta>")


def get_symbol(name: str) -> SymbolSpec:
    """Resolve a registry name: heat, poisson, power:g, power-t:g, frac-lap:e."""
    key = name.strip()
    if key == "heat":
        return heat_symbol()
    if key == "poisson":
        return poisson_symbol()
    for prefix, factory in (("power-t:", power_t_symbol),
                            ("power:", power_symbol),
                            ("frac-lap:", frac_lap_symbol)):
        if key.startswith(prefix):
            try:
                value = float(key[len(prefix):])
            except ValueError:
                raise ValueError(f"cannot parse symbol parameter in {name!r}") from None
            return factory(value)
    raise ValueError(f"unknown symbol {name!r}; built-ins: {', '.join(BUILTIN_NAMES)}")
