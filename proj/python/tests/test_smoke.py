import math

import numpy as np
import pytest

import stablerisk as sr


def test_closed_form_laws():
    cauchy = sr.StableParams(1.0)
    x = np.array([-3.0, 0.0, 0.5, 10.0])
    assert np.allclose(sr.cdf(cauchy, x), 0.5 + np.arctan(x) / math.pi, atol=1e-12)
    assert np.allclose(sr.pdf(cauchy, x), 1.0 / (math.pi * (1.0 + x * x)), rtol=1e-10)
    gauss = sr.StableParams(2.0)
    assert sr.quantile(gauss, np.array([0.95]))[0] == pytest.approx(math.sqrt(2) * 1.6448536269514722, rel=1e-10)
    assert sr.pdf(sr.StableParams(1.3, -0.4), np.array([0.7]))[0] == pytest.approx(0.285365655934205248, rel=1e-9)


def test_quantile_inverts_cdf():
    p = sr.StableParams(0.7, 0.5)
    u = np.linspace(0.001, 0.999, 41)
    assert np.allclose(sr.cdf(p, sr.quantile(p, u)), u, atol=1e-10)


def test_sampling_is_reproducible():
    p = sr.StableParams(1.5)
    a = sr.sample(p, 1000, seed=3)
    b = sr.sample(p, 1000, seed=3)
    assert a.shape == (1000,)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sr.sample(p, 1000, seed=3, stream=1))


def test_sum_params():
    s = sr.iid_sum_params(sr.StableParams(1.0), sr.StableParams(1.0))
    assert s.gamma == pytest.approx(2.0)


def test_copulas():
    c = sr.Copula.clayton(1.0)
    assert c.cdf(0.5, 0.5) == pytest.approx(1.0 / 3.0)
    assert c.conditional_cdf(0.5, 0.5) == pytest.approx(4.0 / 9.0)
    assert c.tau == pytest.approx(1.0 / 3.0)
    assert c.tail_dependence[0] == pytest.approx(0.5)
    g = sr.Copula.from_tau(sr.CopulaFamily.GAUSSIAN, 0.3)
    assert g.parameter == pytest.approx(math.sin(0.15 * math.pi))
    r = sr.Copula.from_tau(sr.CopulaFamily.CLAYTON_R90, -0.3)
    assert r.tau == pytest.approx(-0.3)
    uv = sr.Copula.gumbel(2.0).sample(20000, seed=1)
    assert uv.shape == (20000, 2)
    assert ((uv > 0) & (uv < 1)).all()
    with pytest.raises(ValueError):
        sr.Copula.gumbel(0.5)


def test_convolution():
    cauchy = sr.StableParams(1.0)
    d = sr.ConvolvedDistribution(cauchy, cauchy, sr.Copula.independence())
    assert d.quantile(0.75) == pytest.approx(2.0, rel=1e-9)
    t = np.array([-5.0, 0.0, 3.0])
    assert np.allclose(d.cdf(t), 0.5 + np.arctan(t / 2.0) / math.pi, atol=1e-6)


def test_risk_measures():
    losses = np.arange(10000, 0, -1, dtype=float)
    var, se = sr.empirical_var(losses, 0.05)
    assert var == 9500.0
    assert se > 0
    assert sr.analytic_var(sr.StableParams(1.0), 0.05) == pytest.approx(math.tan(0.45 * math.pi))
    assert sr.sr_analytic_independent(0.5, 0.05) == pytest.approx(2.0)
    cell = sr.super_additivity_ratio(1.0, sr.Copula.comonotone(), n_draws=20000, engine="cconv")
    assert cell["sr"] == pytest.approx(1.0, abs=1e-9)
    cell = sr.super_additivity_ratio(0.5, sr.Copula.independence(), n_draws=200000, seed=5)
    assert abs(cell["sr"] - 2.0) < 4 * cell["sr_se"]
    with pytest.raises(ValueError):
        sr.super_additivity_ratio(1.0, sr.Copula.independence(), q=0.7)


def test_run_spec(tmp_path):
    spec = tmp_path / "mini.ini"
    spec.write_text("name = mini\nalphas = 0.8, 1.6\nn_draws = 10000\n\n[g]\nfamily = gaussian\ntau = 0, 0.5\n")
    out = sr.run(str(spec), output=str(tmp_path / "out"))
    assert out["failed"] == 0
    assert len(out["cells"]) == 4
    header = open(out["csv_files"][0]).readline().strip()
    assert header.startswith("family,theta,tau,alpha,q,sr")
    assert "table1" in sr.preset_names()
    with pytest.raises(sr.SpecError):
        sr.run("no_such_file.ini")
