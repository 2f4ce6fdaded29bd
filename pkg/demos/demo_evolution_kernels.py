"""Evolution multipliers, closed-form kernels, and the composition law."""

import numpy as np

from speclp import (Field, GridSpec, TimeIntegralRule, apply_evolution, build_multiplier,
                    get_symbol, kernel_field, verify_composition)

heat = get_symbol("heat")
poisson = get_symbol("poisson")

# --- closed-form kernels ----------------------------------------------------
g = GridSpec(1, 1024, 32.0)
x = g.x_axis()
K = kernel_field(None, heat, 0.0, 1.0, g)
exact = (4 * np.pi) ** -0.5 * np.exp(-(x**2) / 4)
print(f"heat kernel vs (4 pi)^(-1/2) exp(-x^2/4): sup err = "
      f"{np.abs(K.values.real - exact).max():.2e}")

gp = GridSpec(1, 65536, 1024.0)
xp = gp.x_axis()
Kp = kernel_field(None, poisson, 0.0, 1.0, gp)
exact_p = 1.0 / (np.pi * (1 + xp**2))
print(f"Poisson kernel vs 1/(pi (1+x^2)):         sup err = "
      f"{np.abs(Kp.values.real - exact_p).max():.2e}")

# --- semigroup action on closed-form profiles --------------------------------
f = Field(g, np.exp(-(x**2) / 2))
out = apply_evolution(f, build_multiplier(heat, 0.0, 1.0, g))
print(f"heat flow of exp(-x^2/2) at t=1 vs 3^(-1/2) exp(-x^2/6): sup err = "
      f"{np.abs(out.values - 3**-0.5 * np.exp(-x**2 / 6)).max():.2e}")

cauchy = lambda a: a / (np.pi * (a**2 + xp**2))
outp = apply_evolution(Field(gp, cauchy(1.0)), build_multiplier(poisson, 0.0, 1.0, gp))
print(f"Poisson flow of the Cauchy density (a=1 -> a=2):          sup err = "
      f"{np.abs(outp.values - cauchy(2.0)).max():.2e}")

# --- composition law ---------------------------------------------------------
print()
print("two-parameter composition M(t,s) = M(t,r) M(r,s), max relative defect:")
for name in ("heat", "poisson", "power:1.5"):
    err = verify_composition(get_symbol(name), 0.0, 0.4, 1.3, g)
    print(f"  {name:<12} exact time integral      {err:.2e}")
pt = get_symbol("power-t:2")
err = verify_composition(pt, 0.0, 0.4, 1.3, g, TimeIntegralRule.gauss_legendre(8))
print(f"  {'power-t:2':<12} Gauss-Legendre(8)        {err:.2e}")
