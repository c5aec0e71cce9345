import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fulldisp import DomainError, Grid1D, Params
from fulldisp.conserved import (
    diagnostics,
    energy,
    hamiltonian_app1,
    hamiltonian_app2,
    hamiltonian_wb,
    hamiltonian_ww,
    mass,
    momentum,
    random_directions,
    variational_check,
)
from fulldisp.models import Model, ModelKind, PsiState
from fulldisp.multipliers import eval_F1
from fulldisp.strip import StripGrid, SurfaceData

from conftest import smooth_random


def state(g):
    return PsiState(0.5 * np.cos(g.x) + 0.2 * np.sin(2 * g.x), np.sin(g.x) + 0.3 * np.cos(2 * g.x))


def test_flat_water_waves_energy_closed_form():
    strip = StripGrid(Grid1D(64), 24)
    g = strip.horizontal
    mu = 0.7
    zeta = np.zeros(64)
    psi = np.sin(2 * g.x)
    H = hamiltonian_ww(SurfaceData(zeta, psi, Params(mu, 0.0)), strip)
    # (1/2mu) int psi |D| tanh(sqrt(mu)|D|)/sqrt(mu)... = (1/2) int xi^2 F1 psi^2 over the mode
    expected = 0.5 * 4 * float(eval_F1(2, Params(mu, 0.0))) * np.pi
    assert H == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("which", ["app1", "app2", "wb", "mass", "momentum"])
def test_variational_derivatives(which):
    g = Grid1D(64)
    err = variational_check(which, state(g), Params(0.3, 0.2), g)
    assert err < 1e-6


def test_quadratic_case_is_tight():
    g = Grid1D(64)
    err = variational_check("app1", state(g), Params(0.3, 0.0), g, h_fd=1e-2)
    assert err < 1e-10
    with pytest.raises(DomainError):
        variational_check("wb", state(g), Params(0.3, 0.0), g, h_fd=0)


def test_random_directions_are_smooth_and_normalised():
    g = Grid1D(64)
    dirs = random_directions(g, 3, seed=4)
    assert len(dirs) == 3
    for d in dirs:
        assert np.max(np.abs(d)) == pytest.approx(1.0)
        assert np.max(np.abs(np.fft.rfft(d)[17:])) < 1e-12
    np.testing.assert_array_equal(dirs[0], random_directions(g, 1, seed=4)[0])


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1), st.floats(0.01, 2.0), st.floats(0.0, 0.4), st.integers(0, 63))
def test_energies_nonnegative_and_translation_invariant(seed, mu, eps, shift):
    g = Grid1D(64)
    rng = np.random.default_rng(seed)
    P = Params(mu, eps)
    s = PsiState(smooth_random(g, rng, kmax=5, amplitude=1.0), smooth_random(g, rng, kmax=10))
    t = PsiState(np.roll(s.zeta, shift), np.roll(s.psi, shift))
    for H in (hamiltonian_app1, hamiltonian_app2):
        a, b = H(s, P, g), H(t, P, g)
        assert a >= 0
        assert a == pytest.approx(b, rel=1e-10, abs=1e-13)
    a, b = hamiltonian_wb(s, P, g), hamiltonian_wb(t, P, g)
    assert a == pytest.approx(b, rel=1e-10, abs=1e-13)
    assert mass(s.zeta, g) == pytest.approx(mass(t.zeta, g), abs=1e-12)
    assert momentum(*s, g) == pytest.approx(momentum(*t, g), abs=1e-12)


def test_energy_dispatch_and_diagnostics():
    g = Grid1D(32)
    P = Params(0.3, 0.1)
    z, p = 0.3 * np.cos(g.x), np.sin(g.x)
    for kind in ModelKind:
        m = Model(kind, g, P, nz=12)
        s = m.make_state(z, p)
        d = diagnostics(m, s, 1.5)
        assert d.time == 1.5 and d.energy == energy(m, s) and d.energy > 0
        assert (d.momentum is None) == kind.v_form
        assert set(d.as_row()) == {"t", "mass", "momentum", "energy"}


def test_rest_has_zero_energy():
    strip = StripGrid(Grid1D(32), 12)
    g = strip.horizontal
    P = Params(0.3, 0.2)
    z = PsiState(np.zeros(32), np.zeros(32))
    assert hamiltonian_ww(SurfaceData(*z, P), strip) == 0
    for H in (hamiltonian_app1, hamiltonian_app2, hamiltonian_wb):
        assert H(z, P, g) == 0


@pytest.mark.parametrize("mu", [0.1, 1.0])
def test_approximate_energies_exact_on_flat_bottom(mu):
    strip = StripGrid(Grid1D(64), 24)
    g = strip.horizontal
    P = Params(mu, 0.0)
    s = state(g)
    ref = hamiltonian_ww(SurfaceData(*s, P), strip)
    for H in (hamiltonian_app1, hamiltonian_app2, hamiltonian_wb):
        assert abs(H(s, P, g) - ref) < 1e-12 * max(1.0, ref)
