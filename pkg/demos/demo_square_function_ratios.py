"""Square-function norm ratios: exact constants and window-length studies.

For q = 2 and an infinite window the squared ratio ||G(f)||_2^2 / ||f||_2^2
has a closed form for the exact power families, attained with equality; the
measured per-field ratios reproduce it to quadrature precision.  For finite
windows the theory guarantees boundedness, not a value, so we report
measured maxima and how they move with the window length.
"""

import math

import numpy as np

from speclp import (INF, GridSpec, build_time_window, explicit_q2_constant, g_function,
                    generate_corpus, get_symbol, lp_norm, ratio_report)

grid = GridSpec(1, 1024, 32.0)
corpus = [e.field for e in generate_corpus(7, grid, "GAUSSIAN_MIX", 8)]


def window_for(psi1, psi2, q, a=INF):
    return build_time_window(0.0, a, q, psi1.gamma, psi2.gamma, kappa2=psi2.kappa,
                             xi_min=grid.min_freq, xi_max=grid.nyquist)


print("q = 2, infinite window: measured ratio vs closed form")
print(f"{'pair':<22} {'measured max':>13} {'sqrt(constant)':>15}")
for n1, n2 in (("heat", "heat"), ("poisson", "poisson"), ("power:2", "poisson")):
    p1, p2 = get_symbol(n1), get_symbol(n2)
    w = window_for(p1, p2, 2.0)
    ratios = [lp_norm(g_function(f, p1, 0.0, p2, w, 2.0), 2) / lp_norm(f, 2)
              for f in corpus]
    target = math.sqrt(explicit_q2_constant(1.0, p2.kappa, p1.gamma, p2.gamma))
    print(f"{n1 + ' / ' + n2:<22} {max(ratios):>13.6f} {target:>15.6f}")

print()
print("finite windows, heat pair: measured max ratio as the window grows")
print("(boundedness is the claim; no growth law is asserted)")
heat = get_symbol("heat")
for p, q in ((1.5, 2.0), (3.0, 2.0), (4.0, 4.0)):
    row = []
    for a in (0.25, 1.0, 4.0):
        w = window_for(heat, heat, q, a=a)
        rep = ratio_report(corpus, p, q, heat, 0.0, heat, w, refine=False)
        row.append(rep.max_ratio)
    print(f"  p={p}, q={q}: a=1/4 -> {row[0]:.4f}   a=1 -> {row[1]:.4f}   "
          f"a=4 -> {row[2]:.4f}")
