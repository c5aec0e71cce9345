import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fulldisp import DomainError, Grid1D, MultiplierError, Params
from fulldisp.multipliers import eval_F1

from conftest import smooth_random


def test_grid_validation():
    for n in (6, 7, 9, 0):
        with pytest.raises(DomainError):
            Grid1D(n)
    with pytest.raises(DomainError):
        Grid1D(16, length=-1.0)
    g = Grid1D(16, length=3.0)
    k = np.fft.fftfreq(16, 1 / 16)
    k[8] = 8
    np.testing.assert_array_equal(g.wavenumbers, 2 * np.pi / 3.0 * k)
    assert g.wavenumbers[0] == 0


def test_to_spectral_constant_and_single_mode():
    g = Grid1D(16)
    c = g.to_spectral(np.full(16, 2.5))
    assert c[0] == pytest.approx(2.5)
    assert np.max(np.abs(c[1:])) < 1e-15
    c = g.to_spectral(np.cos(g.x))
    assert c[1] == pytest.approx(0.5) and c[-1] == pytest.approx(0.5)
    mask = np.ones(16, bool)
    mask[[1, -1]] = False
    assert np.max(np.abs(c[mask])) < 1e-15


def test_round_trip_and_hermitian(rng):
    g = Grid1D(64)
    f = rng.standard_normal(64)
    c = g.to_spectral(f)
    assert np.max(np.abs(g.to_real(c) - f)) < 1e-13 * np.max(np.abs(f))
    np.testing.assert_allclose(c[1:32], np.conj(c[-1:-32:-1]), atol=1e-15)


def test_derivatives():
    g = Grid1D(64)
    assert np.max(np.abs(g.dx1(np.sin(3 * g.x)) - 3 * np.cos(3 * g.x))) < 1e-12
    assert np.max(np.abs(g.derivative(np.full(64, 4.0), 3))) < 1e-13
    # exp(sin x)'' = (cos^2 x - sin x) exp(sin x)
    f = np.exp(np.sin(g.x))
    exact = (np.cos(g.x) ** 2 - np.sin(g.x)) * f
    assert np.max(np.abs(g.dx2(f) - exact)) < 1e-10


def test_odd_derivative_drops_nyquist():
    g = Grid1D(16)
    nyq = np.cos(8 * g.x)
    assert np.max(np.abs(g.dx1(nyq))) < 1e-13
    assert np.max(np.abs(g.dx2(nyq) + 64 * nyq)) < 1e-11


def test_multiplier_examples():
    g = Grid1D(32)
    f = np.sin(2 * g.x)
    np.testing.assert_allclose(g.apply_multiplier(f, lambda xi: np.ones_like(xi)), f, atol=1e-15)
    np.testing.assert_allclose(g.apply_multiplier(f, lambda xi: -(xi**2)), -4 * f, atol=1e-13)
    out = g.apply_multiplier(np.sin(g.x), lambda xi: eval_F1(xi, Params(1.0, 0.0)))
    np.testing.assert_allclose(out, np.tanh(1.0) * np.sin(g.x), atol=1e-15)


def test_multiplier_rejects_nonfinite():
    g = Grid1D(16)
    with pytest.raises(MultiplierError) as info, np.errstate(divide="ignore"):
        g.apply_multiplier(np.sin(g.x), lambda xi: 1.0 / (xi - 3.0))
    assert info.value.wavenumber == 3.0


def test_dealias_examples(rng):
    g = Grid1D(48)
    lo = g.band_limited(rng.standard_normal(48), 16)
    np.testing.assert_allclose(g.dealias_field(lo), lo, atol=1e-14)
    assert np.max(np.abs(g.dealias_field(np.cos(24 * g.x)))) < 1e-15


def test_dealiased_product_matches_convolution(rng):
    # power-of-two n: n/3 is not an integer, so no product mode aliases onto the kept band edge
    g = Grid1D(64)
    a = g.band_limited(rng.standard_normal(64), 21)
    b = g.band_limited(rng.standard_normal(64), 21)
    ca, cb = g.to_spectral(a), g.to_spectral(b)
    k = np.fft.fftfreq(64, 1 / 64).astype(int)
    full = {}
    for i, ki in enumerate(k):
        for j, kj in enumerate(k):
            full[ki + kj] = full.get(ki + kj, 0) + ca[i] * cb[j]
    want = np.array([full.get(kk, 0) if abs(kk) <= 21 else 0 for kk in k])
    got = g.to_spectral(g.mul(a, b))
    np.testing.assert_allclose(got, want, atol=1e-14)


def test_integrate_examples():
    g = Grid1D(32, length=5.0)
    assert g.integrate(np.full(32, 3.0)) == pytest.approx(15.0)
    g = Grid1D(32)
    assert abs(g.integrate(np.sin(g.x))) < 1e-15
    assert g.integrate((1 + np.cos(g.x)) ** 2) == pytest.approx(3 * np.pi, rel=1e-14)


@given(st.integers(0, 2**32 - 1), st.sampled_from([16, 32, 64]))
def test_parseval(seed, n):
    g = Grid1D(n)
    f = np.random.default_rng(seed).standard_normal(n)
    c = g.to_spectral(f)
    assert g.integrate(f * f) == pytest.approx(g.length * np.sum(np.abs(c) ** 2), rel=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_derivative_composition(seed):
    g = Grid1D(32)
    f = np.random.default_rng(seed).standard_normal(32)
    f = f - np.cos(16 * g.x) * g.to_spectral(f)[16].real  # remove the Nyquist mode
    np.testing.assert_allclose(g.dx1(g.dx1(f)), g.dx2(f), atol=1e-11 * np.max(np.abs(g.dx2(f))))


@given(st.integers(0, 2**32 - 1), st.floats(0.01, 4.0))
def test_multiplier_composition(seed, mu):
    g = Grid1D(32)
    f = np.random.default_rng(seed).standard_normal(32)
    s1 = lambda xi: eval_F1(xi, Params(mu, 0))
    s2 = lambda xi: 1 + xi**2
    c1 = g.to_spectral(g.apply_multiplier(g.apply_multiplier(f, s1), s2))
    c2 = g.to_spectral(g.apply_multiplier(f, lambda xi: s1(xi) * s2(xi)))
    assert np.max(np.abs(c1 - c2)) < 1e-14 * max(1.0, np.max(np.abs(c2)))


@given(st.integers(0, 2**32 - 1))
def test_band_limit_projection_is_idempotent(seed):
    g = Grid1D(32)
    f = smooth_random(g, np.random.default_rng(seed), kmax=12)
    once = g.band_limited(f, 5)
    np.testing.assert_allclose(g.band_limited(once, 5), once, atol=1e-15)
