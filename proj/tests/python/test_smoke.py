import math

import numpy as np
import pytest

import stablefrac as sf


def test_canonical_symbol():
    m = sf.rotational_model(1.5, 2)
    assert m.sigma_alpha([3.0, 4.0]) == pytest.approx(5.0 / 2 ** (1 / 1.5), rel=1e-12)


def test_bad_alpha_raises():
    with pytest.raises(sf.StablefracError):
        sf.product_model(2.0, [1.0])


def test_json_round_trip():
    m = sf.product_model(1.5, [0.5, 0.5])
    back = sf.model_from_json(m.to_json())
    assert back.sigma_alpha([1.0, -2.0]) == pytest.approx(m.sigma_alpha([1.0, -2.0]), rel=1e-14)


def test_semigroup_conserves_mass_and_contracts():
    g = sf.Grid(2, 64, 6.0)
    m = sf.product_model(1.5, [0.5, 0.5])
    f = sf.gaussian_bump(g, 0.8)
    pf = sf.semigroup(m, g, f, 0.5)
    assert pf.shape == (64, 64)
    assert pf.sum() == pytest.approx(f.sum(), rel=1e-12)
    assert np.abs(pf).max() <= np.abs(f).max()


def test_fractional_gradient_shape():
    g = sf.Grid(2, 32, 6.0)
    d = sf.frac_gradient(sf.rotational_model(1.5, 2), g, sf.gaussian_bump(g, 1.0))
    assert d.shape == (2, 32, 32)


def test_grid_shape_mismatch():
    g = sf.Grid(2, 32, 6.0)
    with pytest.raises(sf.StablefracError):
        sf.semigroup(sf.rotational_model(1.5, 2), g, np.zeros((16, 16)), 0.1)


def test_density_and_moment():
    assert sf.density_1d(1.5, 0.0) == pytest.approx(math.gamma(5 / 3) / math.pi, rel=1e-8)
    assert sf.abs_moment(1.5, 1.0) == pytest.approx(2 * math.gamma(1 / 3) / math.pi, rel=1e-12)


def test_inequality_report():
    g = sf.Grid(1, 512, 16.0)
    r = sf.evaluate_inequality("pseudo_poincare_frac", sf.product_model(1.5, [1.0]), g, seed=7)
    assert r["name"] == "pseudo_poincare_frac"
    assert r["verdict"] == "pass"
    assert "pseudo_poincare_frac" in sf.registry_names()


def test_minimizer_summary():
    g = sf.Grid(2, 64, 8.0)
    summary, f = sf.minimize_sobolev(sf.rotational_model(1.5, 2), g)
    assert f.shape == (64, 64)
    assert summary["S_estimate"] > 0
    assert sf.rayleigh_quotient(sf.rotational_model(1.5, 2), g, f, 2.0) == pytest.approx(
        summary["S_estimate"], rel=1e-10
    )


def test_cli_usage_exit_code():
    assert sf.run_cli() == 2
