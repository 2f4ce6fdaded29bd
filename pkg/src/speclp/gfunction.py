"""Square functions with singular time weight and their L^p ratio statistics.

For a pair of symbols (psi1, psi2) and exponents q >= 1 the square function is

    G(f)(x) = ( int_s^(s+a) (t-s)^(q g1/g2 - 1) |psi1(l,.) T_psi2(t,s) f(x)|^q dt )^(1/q),

where g1, g2 are the symbol orders.  The singular weight is absorbed exactly
by the substitution u = (t-s)^(q g1/g2); the u-integral is then evaluated by
Gauss-Legendre on dyadic panels so that every decay scale present on the
frequency lattice is resolved.

For a = inf the integral is truncated at the time where the slowest nonzero
lattice mode has decayed below 1e-16, which requires a spectral gap: the
zero mode must be projected out of f first.  Infinite windows are legal only
for q = 2 or for time-constant homogeneous pairs.
"""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import roots_legendre

from .errors import WindowError
from .evolution import TimeIntegralRule, integrate_symbol
from .spectral import Field, forward_transform, lp_norm, refine_field
from .symbols import SymbolSpec

__all__ = [
    "INF",
    "TimeWindow",
    "build_time_window",
    "g_function",
    "ratio_report",
    "RatioReport",
    "explicit_q2_constant",
    "check_infinite_window_legal",
]

INF = float("inf")
_TRUNCATION_LOG = math.log(1e16)


@dataclass(frozen=True, eq=False)
class TimeWindow:
    """Quadrature for int_s^(s+a) (t-s)^(weight_exponent) (.) dt.

    ``nodes`` are t values (strictly increasing, inside the window) and
    ``weights`` include the singular factor: sum_i weights_i * g(nodes_i)
    approximates the weighted integral of g.
    """

    s: float
    a: float  # may be INF
    q: float
    gamma1: float
    gamma2: float
    kappa2: float
    weight_exponent: float
    nodes: np.ndarray
    weights: np.ndarray
    truncation_t: float  # effective duration of integration

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.a)


def build_time_window(s: float, a: float, q: float, gamma1: float, gamma2: float,
                      n_nodes: int = 16, *, kappa2: float = 1.0,
                      xi_min: Optional[float] = None,
                      xi_max: Optional[float] = None) -> TimeWindow:
    """Build the singular-weight quadrature window.

    Parameters beyond the window geometry:

    kappa2
        Ellipticity constant of the evolution symbol; sets the a = inf
        truncation time.
    xi_min
        Smallest nonzero frequency magnitude of the target lattice; required
        when a = inf (no spectral gap means the zero mode never decays, so
        the caller must remove the mean and provide the gap).
    xi_max
        Largest lattice frequency; when given, the dyadic panel depth is
        chosen so the fastest-decaying mode is resolved.
    """
    if not q >= 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if not (gamma1 > 0 and gamma2 > 0 and kappa2 > 0):
        raise ValueError("gamma1, gamma2, kappa2 must be positive")
    if not a > 0:
        raise ValueError("a must be positive (possibly inf)")
    if s < 0:
        raise ValueError("s must be nonnegative")

    omega = q * gamma1 / gamma2
    if math.isinf(a):
        if xi_min is None or not xi_min > 0:
            raise WindowError(
                "infinite window needs a spectral gap: remove the mean of the "
                "input and pass the smallest nonzero lattice frequency as xi_min")
        T = _TRUNCATION_LOG / (kappa2 * xi_min**gamma2)
    else:
        T = float(a)
    u_max = T**omega

    if xi_max is not None and xi_max > 0:
        t_fast = 1.0 / (2.0 * kappa2 * xi_max**gamma2)
        u_floor = (t_fast / 8.0) ** omega
        n_panels = int(np.clip(math.ceil(math.log2(u_max / u_floor)), 24, 120))
    else:
        n_panels = 60

    z, w = roots_legendre(n_nodes)
    edges = [0.0] + [u_max * 2.0 ** (-k) for k in range(n_panels, -1, -1)]
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        u = mid + half * z
        nodes.append(s + u ** (1.0 / omega))
        weights.append(half * w / omega)
    t_nodes = np.concatenate(nodes)
    t_weights = np.concatenate(weights)
    return TimeWindow(
        s=float(s), a=float(a), q=float(q), gamma1=float(gamma1), gamma2=float(gamma2),
        kappa2=float(kappa2), weight_exponent=omega - 1.0,
        nodes=t_nodes, weights=t_weights, truncation_t=T,
    )


def check_infinite_window_legal(psi1: SymbolSpec, psi2: SymbolSpec, q: float) -> None:
    """Infinite windows require q = 2 or a time-constant homogeneous pair."""
    if q == 2:
        return
    if psi1.time_constant and psi2.time_constant and psi1.homogeneous and psi2.homogeneous:
        return
    raise WindowError(
        "infinite time window is only supported for q = 2 or for a "
        "time-constant homogeneous symbol pair; "
        f"got q={q}, pair=({psi1.name}, {psi2.name})")


def _validate_pairing(psi1: SymbolSpec, psi2: SymbolSpec, window: TimeWindow, q: float) -> None:
    if q != window.q:
        raise ValueError(f"q={q} does not match window q={window.q}")
    if psi1.gamma != window.gamma1 or psi2.gamma != window.gamma2:
        raise ValueError(
            f"window built for orders ({window.gamma1}, {window.gamma2}) but pair has "
            f"({psi1.gamma}, {psi2.gamma})")
    if window.is_infinite and window.kappa2 > psi2.kappa * (1.0 + 1e-12):
        raise WindowError(
            f"window truncation assumed kappa2={window.kappa2} but symbol certifies "
            f"only {psi2.kappa}; rebuild the window")


def g_function(f: Field, psi1: SymbolSpec, l: float, psi2: SymbolSpec,
               window: TimeWindow, q: float,
               rule: Optional[TimeIntegralRule] = None) -> Field:
    """Pointwise windowed q-norm of psi1(l,.) T_psi2(t, s) f over the window."""
    _validate_pairing(psi1, psi2, window, q)
    if window.is_infinite:
        check_infinite_window_legal(psi1, psi2, q)
    F = forward_transform(f)
    if window.is_infinite:
        scale = np.abs(F.coeffs).max()
        zero = abs(F.coeffs[(0,) * f.grid.dim])
        if scale > 0.0 and zero > 1e-9 * scale:
            raise WindowError("infinite window requires a mean-removed input; "
                              "project out the zero mode first")
    grid = f.grid
    xi = grid.xi_stack()
    pre = np.asarray(psi1(l, xi), dtype=np.complex128)
    acc = np.zeros(grid.shape, dtype=float)
    if psi2.time_constant:
        base = np.asarray(psi2(0.0, xi), dtype=np.complex128)
        for t, w in zip(window.nodes, window.weights):
            mult = pre * np.exp((t - window.s) * base)
            g = np.fft.ifftn(F.coeffs * mult)
            acc += w * np.abs(g) ** q
    else:
        rule = rule or TimeIntegralRule.gauss_legendre(16, adaptive=False)
        rs = np.concatenate([[window.s], window.nodes])
        Q = np.zeros(grid.shape, dtype=np.complex128)
        for lo, hi, w in zip(rs[:-1], rs[1:], window.weights):
            Q = Q + integrate_symbol(psi2, lo, hi, xi, rule)
            g = np.fft.ifftn(F.coeffs * (pre * np.exp(Q)))
            acc += w * np.abs(g) ** q
    # the ifftn above omits the (2 pi)^(d/2)/spacing^d factor of the full
    # inverse; restore it on the accumulated q-th powers
    scale = ((2.0 * np.pi) ** (grid.dim / 2.0) / grid.cell_measure) ** q
    G = np.fft.fftshift((scale * acc) ** (1.0 / q))
    return Field(grid, G.astype(np.complex128))


def explicit_q2_constant(mu1: float, kappa2: float, gamma1: float, gamma2: float) -> float:
    """Closed-form bound on ||G||_2^2 / ||f||_2^2 for q = 2, a = inf windows.

    Equals mu1^2 * Gamma(2 g1/g2) * (2 kappa2)^(-2 g1/g2); attained with
    equality by the exact power families.
    """
    if not (mu1 > 0 and kappa2 > 0 and gamma1 > 0 and gamma2 > 0):
        raise ValueError("all parameters must be positive")
    e = 2.0 * gamma1 / gamma2
    return mu1**2 * float(gamma_fn(e)) * (2.0 * kappa2) ** (-e)


@dataclass(frozen=True)
class RatioReport:
    """Per-field ratios ||G(f)||_p / ||f||_p plus refinement drift of the max."""

    pair: tuple
    p: float
    q: float
    s: float
    a: float
    n: int
    per_field: List[float]
    max_ratio: float
    median_ratio: float
    refinement_drift: Optional[float]

    def to_json_dict(self) -> dict:
        return {
            "schema_version": "1",
            "pair": list(self.pair),
            "p": self.p,
            "q": self.q,
            "s": self.s,
            "a": "inf" if math.isinf(self.a) else self.a,
            "n": self.n,
            "per_field": self.per_field,
            "max": self.max_ratio,
            "median": self.median_ratio,
            "refinement_drift": self.refinement_drift,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def ratio_report(corpus: Sequence[Field], p: float, q: float,
                 psi1: SymbolSpec, l: float, psi2: SymbolSpec, window: TimeWindow,
                 refine: bool = True, workers: int = 1) -> RatioReport:
    """Ratio statistics over a corpus, with grid-refinement drift of the max.

    Fields are independent, so ``workers`` > 1 fans them out over a thread
    pool (the FFT work releases the GIL); results keep corpus order either way.
    """
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    if len(corpus) == 0:
        raise ValueError("empty corpus")

    def one(f):
        G = g_function(f, psi1, l, psi2, window, q)
        return lp_norm(G, p) / lp_norm(f, p)

    def ratios(fields):
        if workers > 1:
            from concurrent.futures import ThreadPoolExecutor
            with ThreadPoolExecutor(max_workers=workers) as ex:
                return list(ex.map(one, fields))
        return [one(f) for f in fields]

    per = ratios(corpus)
    drift = None
    if refine:
        fine = [refine_field(f, 2) for f in corpus]
        m2 = max(ratios(fine))
        drift = abs(m2 - max(per)) / max(per)
    return RatioReport(
        pair=(getattr(psi1, "name", "?"), getattr(psi2, "name", "?")),
        p=float(p), q=float(q), s=window.s, a=window.a, n=corpus[0].grid.n,
        per_field=per, max_ratio=max(per), median_ratio=float(statistics.median(per)),
        refinement_drift=drift,
    )
