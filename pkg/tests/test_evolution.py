import numpy as np
import pytest

from speclp import (Field, GridSpec, TimeIntegralRule, apply_evolution, build_multiplier,
                    get_symbol, kernel_field, multiplier_values, verify_composition)
from speclp.acceptance import _scaling_identity_error
from speclp.corpus import generate_corpus

HEAT = get_symbol("heat")
POISSON = get_symbol("poisson")


@pytest.fixture
def unit_freq_grid():
    # half extent 8 pi puts xi = k/8 on the lattice: |xi| = 1 at k = 8
    return GridSpec(1, 256, 8.0 * np.pi)


def test_multiplier_time_constant_value(unit_freq_grid):
    mult = build_multiplier(HEAT, 0.0, 1.0, unit_freq_grid)
    assert mult.values[8] == pytest.approx(np.exp(-1.0), rel=1e-12)


def test_multiplier_time_dependent_value(unit_freq_grid):
    pt = get_symbol("power-t:2")  # -(1 + r)|xi|^2, integral over [0,1] is 3/2
    mult = build_multiplier(pt, 0.0, 1.0, unit_freq_grid)
    assert mult.values[8] == pytest.approx(np.exp(-1.5), rel=1e-10)


def test_multiplier_with_pre_symbol(unit_freq_grid):
    mult = build_multiplier(HEAT, 0.0, 1.0, unit_freq_grid, pre=(POISSON, 5.0))
    # |xi| = 2 at k = 16: value (-2) e^(-4)
    assert mult.values[16] == pytest.approx(-2.0 * np.exp(-4.0), rel=1e-12)


def test_multiplier_rejects_bad_interval(unit_freq_grid):
    with pytest.raises(ValueError):
        build_multiplier(HEAT, 1.0, 1.0, unit_freq_grid)
    with pytest.raises(ValueError):
        build_multiplier(HEAT, 1.0, 0.5, unit_freq_grid)
    with pytest.raises(ValueError):
        build_multiplier(HEAT, -0.5, 1.0, unit_freq_grid)


def test_exact_rule_needs_time_constant(unit_freq_grid):
    with pytest.raises(ValueError):
        build_multiplier(get_symbol("power-t:2"), 0.0, 1.0, unit_freq_grid,
                         rule=TimeIntegralRule.exact())


def test_heat_evolution_of_gaussian():
    g = GridSpec(1, 1024, 32.0)
    x = g.x_axis()
    f = Field(g, np.exp(-(x**2) / 2))
    out = apply_evolution(f, build_multiplier(HEAT, 0.0, 1.0, g))
    exact = 3.0**-0.5 * np.exp(-(x**2) / 6.0)
    assert np.abs(out.values - exact).max() <= 1e-6
    assert np.abs(out.values.imag).max() == 0.0  # real in, real out


def test_poisson_evolution_of_cauchy():
    g = GridSpec(1, 65536, 1024.0)
    x = g.x_axis()
    cauchy = lambda a: a / (np.pi * (a**2 + x**2))
    out = apply_evolution(Field(g, cauchy(1.0)), build_multiplier(POISSON, 0.0, 1.0, g))
    assert np.abs(out.values - cauchy(2.0)).max() <= 1e-6


def test_identity_limit():
    g = GridSpec(1, 512, 16.0)
    x = g.x_axis()
    f = Field(g, np.exp(-(x**2) / 2))
    out = apply_evolution(f, build_multiplier(HEAT, 0.0, 1e-8, g))
    assert np.abs(out.values - f.values).max() <= 1e-5 * np.abs(f.values).max()


def test_grid_mismatch_rejected():
    g1, g2 = GridSpec(1, 512, 16.0), GridSpec(1, 512, 17.0)
    f = Field(g1, np.zeros(512))
    with pytest.raises(ValueError):
        apply_evolution(f, build_multiplier(HEAT, 0.0, 1.0, g2))


def test_heat_kernel_closed_form():
    g = GridSpec(1, 1024, 32.0)
    x = g.x_axis()
    K = kernel_field(None, HEAT, 0.0, 1.0, g)
    exact = (4.0 * np.pi) ** -0.5 * np.exp(-(x**2) / 4.0)
    assert np.abs(K.values - exact).max() <= 1e-8


def test_kernel_zero_mode_identity():
    g = GridSpec(1, 1024, 32.0)
    plain = kernel_field(None, HEAT, 0.0, 1.0, g)
    assert plain.values.sum().real * g.spacing == pytest.approx(1.0, abs=1e-12)
    pre = kernel_field((POISSON, 0.0), HEAT, 0.0, 1.0, g)
    assert abs(pre.values.sum() * g.spacing) <= 1e-12


def test_composition_time_constant_roundoff():
    g = GridSpec(1, 256, 64.0)  # modest frequencies keep exponents small
    for sym in (HEAT, POISSON, get_symbol("power:1.5")):
        assert verify_composition(sym, 0.0, 0.4, 1.0, g) <= 1e-14
    assert verify_composition(HEAT, 0.5, 0.5, 1.2, g) <= 1e-15  # degenerate r = s


def test_composition_time_dependent_gl8():
    g = GridSpec(1, 256, 64.0)
    rule = TimeIntegralRule.gauss_legendre(8, adaptive=False)
    err = verify_composition(get_symbol("power-t:2"), 0.0, 0.4, 1.0, g, rule)
    assert err <= 1e-12


def test_multiplier_ellipticity_envelope():
    g = GridSpec(1, 512, 16.0)
    xi = g.xi_norm()
    for name in ("heat", "poisson", "power:1.5", "power-t:2"):
        sym = get_symbol(name)
        vals = multiplier_values(sym, 0.2, 1.4, g)
        bound = np.exp(-sym.kappa * 1.2 * xi**sym.gamma)
        assert np.all(np.abs(vals) <= bound * (1.0 + 1e-12))


def test_composition_adaptive_converges_tightly():
    g = GridSpec(1, 512, 16.0)
    err = verify_composition(get_symbol("power-t:1.5"), 0.1, 0.9, 2.0, g,
                             TimeIntegralRule.gauss_legendre(8, tolerance=1e-12))
    assert err <= 1e-10


def test_scaling_identity_field_level():
    g = GridSpec(1, 1024, 32.0)
    f = generate_corpus(42, g, "GAUSSIAN_MIX", 1, mean_removed=True)[0].field
    for sym in (HEAT, POISSON):
        for b in (2.0, 4.0):
            assert _scaling_identity_error(f, sym, sym, b, s=0.3, t=0.7) <= 1e-6


def test_dump_multiplier_and_kernel(tmp_path):
    import json

    from speclp import dump_kernel, dump_multiplier, load_field

    g = GridSpec(1, 512, 16.0)
    mult = build_multiplier(HEAT, 0.0, 1.0, g, pre=(POISSON, 0.5))
    mp = tmp_path / "mult.splf"
    dump_multiplier(mult, mp)
    loaded = load_field(mp)
    assert np.abs(loaded.values - mult.values).max() <= 1e-6 * np.abs(mult.values).max()
    meta = json.loads((tmp_path / "mult.splf.json").read_text())
    assert meta["psi2"] == "heat" and meta["pre"] == "poisson" and meta["l"] == 0.5

    kp = tmp_path / "kernel.splf"
    K = dump_kernel(None, HEAT, 0.0, 1.0, g, kp)
    assert np.abs(load_field(kp).values - K.values).max() <= 1e-6
    kmeta = json.loads((tmp_path / "kernel.splf.json").read_text())
    assert kmeta["kind"] == "kernel" and kmeta["s"] == 0.0
