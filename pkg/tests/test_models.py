import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fulldisp import DomainError, Grid1D, Params
from fulldisp.multipliers import eval_F3
from fulldisp.models import (
    Model,
    ModelKind,
    PsiState,
    apply_I,
    apply_I_dit,
    apply_T,
    consistency_residual,
    measured_omega2,
    omega2_exact,
    omega2_model,
    solve_I,
    solve_I_dit,
)
from fulldisp.strip import StripGrid, SurfaceData

from conftest import smooth_random

ALL = list(ModelKind)
FULL = [k for k in ModelKind if not k.classical]


def test_kind_properties():
    assert ModelKind("GN2-classical").base is ModelKind.FDGN2
    assert ModelKind.FDGN_DIT.v_form and not ModelKind.WB.v_form
    assert ModelKind.WB_CLASSICAL.classical and not ModelKind.WB.classical
    with pytest.raises(ValueError):
        ModelKind("KdV")


@pytest.mark.parametrize("kind", ALL)
def test_rest_is_steady(kind):
    g = Grid1D(32)
    m = Model(kind, g, Params(0.3, 0.2), nz=12)
    out = m.rhs(m.make_state(np.zeros(32), np.zeros(32)))
    assert all(np.max(np.abs(f)) == 0 for f in out)
    # flat surface with constant potential is also at rest
    out = m.rhs(m.make_state(np.zeros(32), np.full(32, 2.0)))
    assert all(np.max(np.abs(f)) < 1e-13 for f in out)


@pytest.mark.parametrize("kind", FULL)
def test_linear_dispersion_is_exact(kind):
    g = Grid1D(32)
    P = Params(0.5, 0.1)
    m = Model(kind, g, P, nz=16)
    for k in (1, 3, 7):
        w2 = measured_omega2(m, k)
        assert w2 == pytest.approx(float(omega2_exact(k, P)), rel=1e-6)


@pytest.mark.parametrize("kind", [k for k in ModelKind if k.classical])
def test_classical_dispersion(kind):
    g = Grid1D(32)
    P = Params(0.05, 0.1)
    m = Model(kind, g, P)
    for k in (1, 2, 5):
        assert measured_omega2(m, k) == pytest.approx(float(omega2_model(kind, k, P)), rel=1e-6)
    # visible departure from the exact relation once sqrt(mu) k = 3
    mu = (3 / 3) ** 2
    P = Params(mu, 0.1)
    dev = abs(omega2_model(kind, 3, P) - omega2_exact(3, P)) / omega2_exact(3, P)
    assert dev > 0.05


def test_measured_omega_rejects_bad_mode():
    m = Model("WB", Grid1D(16), Params(0.1, 0.1))
    with pytest.raises(DomainError):
        measured_omega2(m, 8)


def test_T_and_I_symbols_on_flat_bottom():
    g = Grid1D(64)
    P = Params(0.4, 0.0)
    h = np.ones(64)
    for k in (1, 4, 11):
        v = np.sin(k * g.x)
        sym = k**2 * float(eval_F3(k, P)) / 3
        np.testing.assert_allclose(apply_T(h, v, P, g), sym * v, atol=1e-12)
        np.testing.assert_allclose(apply_I(h, v, P, g), (1 + P.mu * sym) * v, atol=1e-12)
        np.testing.assert_allclose(apply_I_dit(h, v, P, g), (1 + P.mu * sym) * v, atol=1e-12)
        np.testing.assert_allclose(solve_I(h, v, P, g), v / (1 + P.mu * sym), atol=1e-12)


def test_solve_round_trip_and_symmetry(rng):
    g = Grid1D(64)
    P = Params(0.3, 0.2)
    h = 1 + P.eps * smooth_random(g, rng, kmax=4, amplitude=0.5)
    W = smooth_random(g, rng, kmax=20)
    V = solve_I(h, W, P, g)
    assert g.norm(apply_I(h, V, P, g) - h * W) < 1e-10 * g.norm(W)
    Vd = solve_I_dit(h, W, P, g)
    assert g.norm(apply_I_dit(h, Vd, P, g) - h * W) < 1e-10 * g.norm(W)
    a, b = smooth_random(g, rng, kmax=20), smooth_random(g, rng, kmax=20)
    assert g.inner(apply_I(h, a, P, g), b) == pytest.approx(g.inner(a, apply_I(h, b, P, g)), rel=1e-12)


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1), st.floats(0.01, 2.0), st.floats(0.0, 0.5))
def test_dit_operator_is_coercive(seed, mu, eps):
    g = Grid1D(32)
    rng = np.random.default_rng(seed)
    P = Params(mu, eps)
    h = 1 + eps * smooth_random(g, rng, kmax=4, amplitude=1.0)
    v = smooth_random(g, rng, kmax=10)
    assert g.inner(apply_I_dit(h, v, P, g), v) >= (h.min() - 1e-12) * g.inner(v, v)


@pytest.mark.parametrize("kind", [ModelKind.FDGN1, ModelKind.WB, ModelKind.FDGN2, ModelKind.FDGN_DIT])
@settings(max_examples=10)
@given(seed=st.integers(0, 2**32 - 1))
def test_mass_tendency_integrates_to_zero(kind, seed):
    g = Grid1D(32)
    rng = np.random.default_rng(seed)
    m = Model(kind, g, Params(0.3, 0.2))
    s = m.make_state(smooth_random(g, rng, kmax=5, amplitude=0.5), smooth_random(g, rng, kmax=5))
    zt = m.rhs(s)[0]
    assert abs(g.integrate(zt)) < 1e-12 * max(1.0, g.norm(zt))


def test_classical_rhs_approaches_full_as_mu_shrinks():
    g = Grid1D(64)
    zeta = 0.25 * np.cos(g.x)
    psi = np.sin(g.x) + 0.2 * np.cos(2 * g.x)
    gaps = []
    mus = (0.0125, 0.025, 0.05, 0.1)
    for mu in mus:
        P = Params(mu, 0.2)
        full = Model("FDGN1", g, P).rhs(PsiState(zeta, psi))
        cl = Model("GN1-classical", g, P).rhs(PsiState(zeta, psi))
        gaps.append(g.norm(full[0] - cl[0]) + g.norm(full[1] - cl[1]))
    slope = np.polyfit(np.log(mus), np.log(gaps), 1)[0]
    assert slope >= 1.0


def test_consistency_ordering():
    strip = StripGrid(Grid1D(64), 24)
    g = strip.horizontal
    d = SurfaceData(0.25 * np.cos(g.x), np.sin(g.x), Params(0.3, 0.2))
    r = {k: consistency_residual(k, d, strip).total for k in ("FDGN1", "FDGN2", "FDGN-DIT", "WB")}
    for k in ("FDGN1", "FDGN2", "FDGN-DIT"):
        assert r[k] < r["WB"]
    assert consistency_residual("WW-ref", d, strip).total == 0.0
    res = consistency_residual("FDGN2", d, strip)
    assert set(res.residuals) == {"R1", "R2"} and not res.differencing_flag


def test_cavitation_is_refused():
    g = Grid1D(16)
    m = Model("FDGN1", g, Params(0.1, 1.0))
    with pytest.raises(DomainError):
        m.check(PsiState(-0.95 * np.ones(16), np.zeros(16)))
