"""Audit the built-in symbol families against their certificates.

Each family registers ellipticity (kappa), derivative-decay (mu), order
(gamma), and a certified depth; the audits hunt for counterexamples on a
log-spaced frequency sample set.
"""

import numpy as np

from speclp import audit_s1, audit_s2, check_homogeneity, get_symbol

rng = np.random.default_rng(0)
ts = [0.0, 0.5, 1.0, 3.0]
xis = []
for mag in np.geomspace(0.1, 32.0, 10):
    v = rng.uniform(0.3, 1.0, size=2) * rng.choice([-1.0, 1.0], size=2)
    xis.append(mag * v / np.linalg.norm(v))

print(f"{'symbol':<12} {'check':<12} {'worst defect':>14}  verdict")
print("-" * 52)
for name in ("heat", "poisson", "power:1.5", "power-t:2", "frac-lap:0.5"):
    sym = get_symbol(name)
    reports = {
        "ellipticity": audit_s1(sym, ts, xis),
        "derivatives": audit_s2(sym, 2, ts, xis),
    }
    if sym.time_constant:
        reports["homogeneity"] = check_homogeneity(sym, [0.5, 2.0, 7.0], xis)
    for label, rep in reports.items():
        verdict = "pass" if rep.passed else "FAIL"
        print(f"{name:<12} {label:<12} {rep.worst_violation:>14.3e}  {verdict}")

print()
print("A deliberately under-certified symbol is caught:")
import dataclasses

weak = dataclasses.replace(get_symbol("poisson"), mu=0.5)
rep = audit_s2(weak, 0, ts, xis)
print(f"  poisson with mu=0.5 -> worst defect {rep.worst_violation:.3f}, "
      f"passed={rep.passed}")
