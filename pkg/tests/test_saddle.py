import math

import numpy as np
import pytest

from meinardus.counting import coeffs_convolution
from meinardus.model import Kind, WeightFunction, parse_preset, preset_lspec
from meinardus.saddle import cauchy_count, phi, phi_eval, rho_asymptotic, solve_saddle


def test_phi_against_truncated_product():
    w = parse_preset("plane")
    z = 0.7
    direct = -sum(m * math.log1p(-math.exp(-m * z)) for m in range(1, 400))
    assert phi(w, z) == pytest.approx(direct, rel=1e-13)


def test_phi_derivative_by_differences():
    w = parse_preset("so5")
    z, h = 0.3, 1e-5
    fd = (phi(w, z + h) - phi(w, z - h)) / (2 * h)
    assert float(np.real(phi(w, z, 1))) == pytest.approx(float(np.real(fd)), rel=1e-7)


def test_phi_domain():
    with pytest.raises(ValueError):
        phi_eval(parse_preset("ones"), -0.1)
    with pytest.raises(ValueError):
        phi_eval(parse_preset("ones"), 0.5, k=7)


@pytest.mark.parametrize("preset", ["ones", "plane", "polygonal:3", "so5", "su3"])
def test_saddle_solves_equation(preset):
    w = parse_preset(preset)
    r = solve_saddle(w, 5000, preset_lspec(w))
    assert -float(np.real(phi(w, r.rho, 1))) == pytest.approx(5000, rel=1e-8)
    # the closed-form expansion approaches the numerical root
    assert abs(r.rho_asym / r.rho - 1) < 1e-3


def test_saddle_expansion_improves_with_n():
    w = parse_preset("so5")
    spec = preset_lspec(w)
    gaps = [abs(rho_asymptotic(spec, n) / solve_saddle(w, n).rho - 1) for n in (100, 1000, 10_000)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_saddle_explicit_weight():
    w = WeightFunction(Kind.EXPLICIT, table=(1, 1, 1), tail=lambda n: 1)
    r = solve_saddle(w, 200)
    assert r.rho_asym is None
    assert r.rho == pytest.approx(solve_saddle(parse_preset("ones"), 200).rho, rel=1e-9)


@pytest.mark.parametrize("preset", ["plane", "su3"])
def test_cauchy_large_n(preset):
    w = parse_preset(preset)
    exact = coeffs_convolution(w, 250)
    for n in (150, 250):
        r = cauchy_count(w, n)
        assert r.nearest == exact[n]
        assert r.err_estimate < 0.5


def test_cauchy_range():
    with pytest.raises(ValueError):
        cauchy_count(parse_preset("ones"), 0)
