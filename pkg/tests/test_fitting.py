import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fulldisp.harness.fitting import FlooredError, fit_power_law, fit_slope, fit_slope_detail

XS = np.array([0.05, 0.1, 0.2, 0.4, 0.8])


def test_exact_power_law():
    s, c, r2 = fit_slope(XS, 3 * XS**2)
    assert s == pytest.approx(2.0, abs=1e-12)
    assert c == pytest.approx(np.log(3), abs=1e-12)
    assert r2 == pytest.approx(1.0, abs=1e-12)


def test_constant_has_zero_slope():
    s, _, r2 = fit_slope(XS, np.full(5, 7.0))
    assert s == pytest.approx(0.0, abs=1e-12) and r2 == 1.0


def test_noisy_three_halves():
    rng = np.random.default_rng(0)
    xs = np.geomspace(0.01, 1, 12)
    ys = xs**1.5 * (1 + 0.01 * rng.standard_normal(xs.size))
    f = fit_slope_detail(xs, ys)
    assert 1.4 <= f.slope <= 1.6
    assert f.band95 < 0.05 and f.npoints == 12


def test_floored_and_short_inputs():
    with pytest.raises(FlooredError):
        fit_slope(XS, [1e-3, 1e-4, 0.0, 1e-6, 1e-7])
    with pytest.raises(FlooredError):
        fit_slope([0.0, 1, 2, 3], [1, 2, 3, 4])
    with pytest.raises(ValueError):
        fit_slope(XS[:3], XS[:3])
    with pytest.raises(ValueError):
        fit_slope(XS, [1, 2, np.nan, 4, 5])


def test_plane_fit_recovers_exponents():
    m, e = np.meshgrid([0.05, 0.1, 0.2, 0.4], [0.05, 0.1, 0.2, 0.4])
    y = 0.7 * m.ravel() ** 2 * e.ravel()
    f = fit_power_law(m.ravel(), e.ravel(), y)
    assert f.slope_mu == pytest.approx(2, abs=1e-10)
    assert f.slope_eps == pytest.approx(1, abs=1e-10)
    assert f.r2 == pytest.approx(1.0) and f.npoints == 16


@given(st.floats(-3, 3), st.floats(1e-3, 1e3))
def test_slope_is_scale_invariant(p, c):
    s, _, _ = fit_slope(XS, c * XS**p)
    assert s == pytest.approx(p, abs=1e-9)
    s2, _, _ = fit_slope(10 * XS, c * XS**p)
    assert s2 == pytest.approx(p, abs=1e-9)
