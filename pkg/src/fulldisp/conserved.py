"""Invariants: mass, momentum, the water-waves Hamiltonian and its
approximations, and a finite-difference check of functional derivatives.

Energies use plain pointwise products (no truncation) so that their exact
discrete gradients are the formulas below evaluated without dealiasing.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .models import (
    Model,
    ModelKind,
    PsiState,
    VState,
    rhs_fdgn1,
    rhs_wb,
    solve_I,
    symbols,
)
from .multipliers import Params
from .spectral import Grid1D
from .strip import StripGrid, SurfaceData, compute_dtn


@dataclass
class Diagnostics:
    time: float
    mass: float
    momentum: Optional[float]
    energy: float

    def as_row(self):
        return {
            "t": self.time,
            "mass": self.mass,
            "momentum": np.nan if self.momentum is None else self.momentum,
            "energy": self.energy,
        }


def mass(zeta, grid: Grid1D):
    return grid.integrate(zeta)


def momentum(zeta, psi, grid: Grid1D):
    """``int zeta psi_x`` (potential-form states only)."""
    return grid.inner(zeta, grid.dx1(psi))


def hamiltonian_ww(data: SurfaceData, strip: StripGrid, tol=1e-12):
    """``1/2 int zeta^2 + (1/2mu) int psi G psi``."""
    g = strip.horizontal
    G = compute_dtn(data, strip, tol=tol)
    return 0.5 * g.inner(data.zeta, data.zeta) + 0.5 / data.params.mu * g.inner(data.psi, G)


def hamiltonian_app1(state: PsiState, params: Params, grid: Grid1D, classical=False):
    """``1/2 int zeta^2 + 1/2 int h psi_x^2 + (mu/6) int d_x(h^3 F2 psi_xx) psi_x``."""
    zeta, psi = state
    h = 1 + params.eps * zeta
    F2 = symbols(grid, params.mu, classical).f2
    px = grid.dx1(psi)
    disp = grid.dx1(h**3 * grid.apply_multiplier(grid.dx2(psi), F2))
    return 0.5 * grid.inner(zeta, zeta) + 0.5 * grid.inner(h, px * px) + params.mu / 6 * grid.inner(disp, px)


def hamiltonian_app2(state: PsiState, params: Params, grid: Grid1D, tol=1e-13, classical=False):
    """``1/2 int zeta^2 + 1/2 int h I[h]^{-1}(h psi_x) psi_x``."""
    zeta, psi = state
    h = 1 + params.eps * zeta
    px = grid.dx1(psi)
    V = solve_I(h, px, params, grid, tol=tol, classical=classical)
    return 0.5 * grid.inner(zeta, zeta) + 0.5 * grid.inner(h * V, px)


def hamiltonian_wb(state: PsiState, params: Params, grid: Grid1D, classical=False):
    """``1/2 int zeta^2 + 1/2 int psi_x F1 psi_x + (eps/2) int zeta (F1 psi_x)^2``."""
    zeta, psi = state
    F1 = symbols(grid, params.mu, classical).f1
    px = grid.dx1(psi)
    f1px = grid.apply_multiplier(px, F1)
    return 0.5 * grid.inner(zeta, zeta) + 0.5 * grid.inner(px, f1px) + params.eps / 2 * grid.inner(zeta, f1px**2)


def hamiltonian_vform(state: VState, model: Model):
    """``1/2 int zeta^2 + 1/2 int h Vbar w`` for the velocity-form systems."""
    g = model.grid
    h = 1 + model.params.eps * state.zeta
    V = model.velocity(state)
    return 0.5 * g.inner(state.zeta, state.zeta) + 0.5 * g.inner(h * V, state.w)


def energy(model: Model, state):
    k = model.kind
    if k is ModelKind.WW_REF:
        return hamiltonian_ww(SurfaceData(state.zeta, state.psi, model.params), model.strip, model.tol)
    if k.base is ModelKind.FDGN1:
        return hamiltonian_app1(state, model.params, model.grid, k.classical)
    if k.base is ModelKind.WB:
        return hamiltonian_wb(state, model.params, model.grid, k.classical)
    return hamiltonian_vform(state, model)


def diagnostics(model: Model, state, t=0.0) -> Diagnostics:
    g = model.grid
    mom = None if model.kind.v_form else momentum(state.zeta, state.psi, g)
    return Diagnostics(time=float(t), mass=mass(state.zeta, g), momentum=mom, energy=float(energy(model, state)))


# ---------------------------------------------------------------------------
# functional derivatives

def gradient_app1(state: PsiState, params: Params, grid: Grid1D, classical=False):
    """``(delta_zeta H, delta_psi H)`` of :func:`hamiltonian_app1`; the FDGN1 RHS is ``(dpsi, -dzeta)``."""
    g = grid.with_dealias(False)
    zeta_t, psi_t = rhs_fdgn1(state, params, g, classical)
    return -psi_t, zeta_t


def gradient_wb(state: PsiState, params: Params, grid: Grid1D, classical=False):
    g = grid.with_dealias(False)
    zeta_t, psi_t = rhs_wb(state, params, g, classical)
    return -psi_t, zeta_t


def gradient_app2(state: PsiState, params: Params, grid: Grid1D, tol=1e-13, classical=False):
    """Gradient of :func:`hamiltonian_app2` with ``V = I[h]^{-1}(h psi_x)``.

    ``delta_psi H = -d_x(h V)`` and
    ``delta_zeta H = zeta + eps psi_x V - (eps/2) V^2 - (mu eps/2) h^2 V_x F3[V_x]``.
    """
    zeta, psi = state
    mu, eps = params.mu, params.eps
    h = 1 + eps * zeta
    px = grid.dx1(psi)
    V = solve_I(h, px, params, grid, tol=tol, classical=classical)
    Vx = grid.dx1(V)
    f3Vx = grid.apply_multiplier(Vx, symbols(grid, mu, classical).f3)
    d_zeta = zeta + eps * px * V - eps / 2 * V * V - mu * eps / 2 * h * h * Vx * f3Vx
    d_psi = -grid.dx1(h * V)
    return d_zeta, d_psi


def random_directions(grid: Grid1D, count, seed=0, kmax=None):
    """Smooth random fields band-limited to ``|k| <= n/4`` with unit max norm."""
    rng = np.random.default_rng(seed)
    kmax = grid.n // 4 if kmax is None else kmax
    out = []
    for _ in range(count):
        c = np.zeros(grid.n // 2 + 1, dtype=complex)
        kk = np.arange(1, kmax + 1)
        c[1 : kmax + 1] = (rng.standard_normal(kmax) + 1j * rng.standard_normal(kmax)) / kk
        c[0] = rng.standard_normal()
        f = np.fft.irfft(c, n=grid.n)
        out.append(f / np.max(np.abs(f)))
    return out


_FUNCTIONALS = {
    "app1": (hamiltonian_app1, gradient_app1),
    "app2": (hamiltonian_app2, gradient_app2),
    "wb": (hamiltonian_wb, gradient_wb),
    "mass": (
        lambda s, p, g: mass(s.zeta, g),
        lambda s, p, g: (np.ones_like(s.zeta), np.zeros_like(s.psi)),
    ),
    "momentum": (
        lambda s, p, g: momentum(s.zeta, s.psi, g),
        lambda s, p, g: (g.dx1(s.psi), -g.dx1(s.zeta)),
    ),
}


def variational_check(which, state: PsiState, params: Params, grid: Grid1D, directions=None,
                      h_fd=1e-5, n_directions=5, seed=0):
    """Worst relative gap between ``<delta H, v>`` and a centred difference of ``H``.

    Each direction is applied to ``zeta`` and to ``psi`` separately, so
    ``2 * n_directions`` pairings are checked.
    """
    if h_fd <= 0:
        raise DomainError("h_fd must be positive")
    H, grad = _FUNCTIONALS[which]
    if directions is None:
        directions = random_directions(grid, n_directions, seed)
    dz, dp = grad(state, params, grid)
    worst = 0.0
    for v in directions:
        for slot, g_ in ((0, dz), (1, dp)):
            plus = list(state)
            minus = list(state)
            plus[slot] = plus[slot] + h_fd * v
            minus[slot] = minus[slot] - h_fd * v
            fd = (H(PsiState(*plus), params, grid) - H(PsiState(*minus), params, grid)) / (2 * h_fd)
            an = grid.inner(g_, v)
            scale = max(abs(fd), abs(an), 1e-14 * grid.norm(g_) * grid.norm(v), 1e-300)
            worst = max(worst, abs(fd - an) / scale)
    return worst
