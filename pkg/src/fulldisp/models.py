"""Evolution systems: full-dispersion Green-Naghdi (two forms plus the
symmetrised variant), Whitham-Boussinesq, their classical counterparts and
the water-waves reference.

States are ``PsiState(zeta, psi)`` for models written in the surface
potential and ``VState(zeta, w)`` for models evolving
``w = (Id + mu T[h]) Vbar``.  Classical baselines reuse the same code with
``F2`` and ``F3`` replaced by the identity (so ``F1 = 1 - (x^2/3) F2``
becomes ``1 - x^2/3``).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import NamedTuple

import numpy as np
import scipy.sparse.linalg as spla

from .errors import BlowUpError, DomainError, InvertibilityError
from .multipliers import Params, f2_of_x, f3_of_x, tanhc
from .spectral import Grid1D
from .strip import StripGrid, SurfaceData, compute_vbar, dtn_from_vbar, solve_potential

log = logging.getLogger(__name__)


class ModelKind(str, Enum):
    WW_REF = "WW-ref"
    FDGN1 = "FDGN1"
    FDGN2 = "FDGN2"
    FDGN_DIT = "FDGN-DIT"
    WB = "WB"
    GN1_CLASSICAL = "GN1-classical"
    GN2_CLASSICAL = "GN2-classical"
    WB_CLASSICAL = "WB-classical"

    @property
    def classical(self) -> bool:
        return self.value.endswith("-classical")

    @property
    def base(self) -> "ModelKind":
        """Full-dispersion system that shares this model's equations."""
        return {
            ModelKind.GN1_CLASSICAL: ModelKind.FDGN1,
            ModelKind.GN2_CLASSICAL: ModelKind.FDGN2,
            ModelKind.WB_CLASSICAL: ModelKind.WB,
        }.get(self, self)

    @property
    def v_form(self) -> bool:
        return self.base in (ModelKind.FDGN2, ModelKind.FDGN_DIT)


class PsiState(NamedTuple):
    zeta: np.ndarray
    psi: np.ndarray


class VState(NamedTuple):
    zeta: np.ndarray
    w: np.ndarray


# ---------------------------------------------------------------------------
# multiplier tables on the half spectrum

@dataclass(frozen=True)
class Symbols:
    f1: np.ndarray
    f2: np.ndarray
    f3: np.ndarray
    sqrt_f3: np.ndarray


@lru_cache(maxsize=128)
def symbols(grid: Grid1D, mu: float, classical: bool = False) -> Symbols:
    x = np.sqrt(mu) * grid.xi_half
    if classical:
        one = np.ones_like(x)
        return Symbols(f1=1 - x**2 / 3, f2=one, f3=one, sqrt_f3=one)
    f3 = f3_of_x(x)
    return Symbols(f1=tanhc(x), f2=f2_of_x(x), f3=f3, sqrt_f3=np.sqrt(f3))


def _check_depth(h, params: Params):
    hmin = float(np.min(h))
    if hmin < params.h_min:
        raise DomainError(f"non-cavitation violated: min h = {hmin:.4g} < h_min = {params.h_min}")


# ---------------------------------------------------------------------------
# psi-form systems

def rhs_fdgn1(state: PsiState, params: Params, grid: Grid1D, classical=False):
    """Hamilton equations of the first full-dispersion Green-Naghdi energy."""
    zeta, psi = state
    mu, eps = params.mu, params.eps
    F2 = symbols(grid, mu, classical).f2
    m = grid.mul
    h = 1 + eps * zeta
    h3 = m(h, h, h)
    psi_x = grid.dx1(psi)
    psi_xx = grid.dx2(psi)
    f2_lap = grid.apply_multiplier(psi_xx, F2)
    disp = grid.dx2(grid.apply_multiplier(m(h3, psi_xx), F2)) + grid.dx2(m(h3, f2_lap))
    zeta_t = -grid.dx1(m(h, psi_x)) - mu / 6 * disp
    psi_t = -zeta - eps / 2 * m(psi_x, psi_x) + mu * eps / 2 * m(h, h, f2_lap, psi_xx)
    return zeta_t, psi_t


def rhs_wb(state: PsiState, params: Params, grid: Grid1D, classical=False):
    """Whitham-Boussinesq system with the exact linear dispersion carried by ``F1``."""
    zeta, psi = state
    eps = params.eps
    F1 = symbols(grid, params.mu, classical).f1
    f1_px = grid.apply_multiplier(grid.dx1(psi), F1)
    zeta_t = -grid.apply_multiplier(grid.dx2(psi), F1) - eps * grid.apply_multiplier(
        grid.dx1(grid.mul(zeta, f1_px)), F1
    )
    psi_t = -zeta - eps / 2 * grid.mul(f1_px, f1_px)
    return zeta_t, psi_t


def rhs_ww_ref(state: PsiState, params: Params, strip: StripGrid, tol=1e-12, max_iter=200,
               return_vbar=False):
    """Water-waves equations with the DtN map from the strip solver."""
    zeta, psi = state
    grid = strip.horizontal
    mu, eps = params.mu, params.eps
    data = SurfaceData(zeta, psi, params)
    phi = solve_potential(data, strip, tol=tol, max_iter=max_iter)
    vbar = compute_vbar(phi, data)
    G = dtn_from_vbar(vbar, data, grid)
    zx = grid.dx1(zeta)
    psi_x = grid.dx1(psi)
    m = grid.mul
    B = G + eps * mu * m(zx, psi_x)
    denom = 1 + eps**2 * mu * zx * zx
    zeta_t = G / mu
    psi_t = -zeta - eps / 2 * m(psi_x, psi_x) + eps / (2 * mu) * m(B, B, 1 / denom)
    if return_vbar:
        return (zeta_t, psi_t), vbar
    return zeta_t, psi_t


# ---------------------------------------------------------------------------
# the T[h] / I[h] operators and their symmetrised variant
#
# Products inside these linear-in-V operators are taken pointwise without
# truncation: that keeps I[h] exactly symmetric in the discrete L2 pairing and
# keeps it invertible (a 2/3 truncation would annihilate the top third).

def apply_T(h, V, params: Params, grid: Grid1D, classical=False):
    """``T[h] V = -(1/6h) (d_x(h^3 F3 V_x) + d_x F3(h^3 V_x))``."""
    F3 = symbols(grid, params.mu, classical).f3
    h3 = h**3
    Vx = grid.dx1(V)
    q = grid.dx1(h3 * grid.apply_multiplier(Vx, F3)) + grid.dx1(grid.apply_multiplier(h3 * Vx, F3))
    return -q / (6 * h)


def apply_I(h, V, params: Params, grid: Grid1D, classical=False):
    """``I[h] V = h (V + mu T[h] V)``, symmetric in the discrete L2 pairing."""
    return h * V + params.mu * h * apply_T(h, V, params, grid, classical)


def apply_I_dit(h, V, params: Params, grid: Grid1D, classical=False):
    """``h V - (mu/3) d_x sqrt(F3) h^3 sqrt(F3) V_x`` (symmetric positive definite)."""
    S = symbols(grid, params.mu, classical).sqrt_f3
    inner = h**3 * grid.apply_multiplier(grid.dx1(V), S)
    return h * V - params.mu / 3 * grid.dx1(grid.apply_multiplier(inner, S))


def symmetrization_gap(h, V, params: Params, grid: Grid1D):
    """``2 sqrt(F3)[h^3 sqrt(F3) V] - (h^3 F3 V + F3[h^3 V])``."""
    sym = symbols(grid, params.mu)
    h3 = h**3
    a = 2 * grid.apply_multiplier(h3 * grid.apply_multiplier(V, sym.sqrt_f3), sym.sqrt_f3)
    b = h3 * grid.apply_multiplier(V, sym.f3) + grid.apply_multiplier(h3 * V, sym.f3)
    return a - b


@dataclass
class KrylovInfo:
    iterations: int = 0
    residual: float = 0.0
    method: str = "cg"


class _Indefinite(Exception):
    pass


def _pcg(apply_A, b, precond, tol, maxiter):
    x = np.zeros_like(b)
    r = b.copy()
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return x, 0, 0.0
    z = precond(r)
    p = z.copy()
    rz = r @ z
    for it in range(1, maxiter + 1):
        Ap = apply_A(p)
        pAp = p @ Ap
        if not pAp > 0:
            raise _Indefinite()
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        res = np.linalg.norm(r) / bnorm
        if res <= tol:
            return x, it, res
        z = precond(r)
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise _Indefinite()


def _solve_weighted(op, h, W, params, grid, tol, maxiter, classical, info, dit):
    """Solve ``op(h, V) = h W`` by preconditioned CG, falling back to GMRES."""
    W = np.asarray(W, dtype=float)
    b = h * W
    sym = symbols(grid, params.mu, classical)
    hbar = float(np.mean(h))
    xi2 = grid.xi_half**2
    f = sym.f3 if not dit else sym.sqrt_f3**2
    prec_symbol = 1.0 / (hbar + params.mu * hbar**3 * xi2 / 3 * f)

    def A(v):
        return op(h, v, params, grid, classical)

    def M(v):
        return grid.apply_multiplier(v, prec_symbol)

    try:
        V, it, res = _pcg(A, b, M, tol, maxiter)
        if info is not None:
            info.iterations, info.residual, info.method = it, res, "cg"
        return V
    except _Indefinite:
        log.info("CG lost positivity or stalled; retrying with GMRES")
    n = grid.n
    lin = spla.LinearOperator((n, n), matvec=A, dtype=float)
    prec = spla.LinearOperator((n, n), matvec=M, dtype=float)
    V, code = spla.gmres(lin, b, rtol=tol, atol=0.0, restart=min(n, 60), maxiter=maxiter, M=prec)
    res = np.linalg.norm(A(V) - b) / max(np.linalg.norm(b), 1e-300)
    if code != 0 or not np.isfinite(res) or res > 10 * tol:
        raise InvertibilityError(
            "dispersive operator could not be inverted",
            mu=params.mu, eps=params.eps, zeta_max=float(np.max(np.abs((h - 1) / max(params.eps, 1e-300)))),
        )
    if info is not None:
        info.iterations, info.residual, info.method = code, res, "gmres"
    return V


def solve_I(h, W, params: Params, grid: Grid1D, tol=1e-12, maxiter=500, classical=False, info=None):
    """Return ``V`` with ``(Id + mu T[h]) V = W``.

    Works on the symmetric form ``I[h] V = h W`` with conjugate gradients,
    preconditioned by the constant-depth operator.  Falls back to GMRES when
    CG detects a non-positive curvature, and raises
    :class:`InvertibilityError` if that fails as well.
    """
    _check_depth(h, params)
    return _solve_weighted(apply_I, h, W, params, grid, tol, maxiter, classical, info, dit=False)


def solve_I_dit(h, W, params: Params, grid: Grid1D, tol=1e-12, maxiter=500, info=None):
    """Return ``V`` with ``V - (mu/3h) d_x sqrt(F3) h^3 sqrt(F3) V_x = W`` (CG on an SPD form)."""
    _check_depth(h, params)
    return _solve_weighted(apply_I_dit, h, W, params, grid, tol, maxiter, False, info, dit=True)


def w_from_vbar(kind, zeta, V, params: Params, grid: Grid1D):
    """Prognostic variable of a V-form model from a velocity ``V``."""
    kind = ModelKind(kind)
    h = 1 + params.eps * np.asarray(zeta)
    if kind.base is ModelKind.FDGN_DIT:
        return apply_I_dit(h, V, params, grid) / h
    if kind.base is ModelKind.FDGN2:
        return V + params.mu * apply_T(h, V, params, grid, kind.classical)
    raise DomainError(f"{kind.value} is not a V-form model")


# ---------------------------------------------------------------------------
# V-form systems

def fdgn2_tendency(zeta, V, params: Params, grid: Grid1D, classical=False):
    """Right-hand side of the second Green-Naghdi system given the velocity ``V``."""
    mu, eps = params.mu, params.eps
    F3 = symbols(grid, mu, classical).f3
    m = grid.mul
    h = 1 + eps * zeta
    h3 = m(h, h, h)
    Vx = grid.dx1(V)
    f3_Vx = grid.apply_multiplier(Vx, F3)
    q = grid.dx1(m(h3, f3_Vx) + grid.apply_multiplier(m(h3, Vx), F3))
    zeta_t = -grid.dx1(m(h, V))
    w_t = (
        -grid.dx1(zeta)
        - eps / 2 * grid.dx1(m(V, V))
        + mu * eps / 6 * grid.dx1(m(1 / h, V, q))
        + mu * eps / 2 * grid.dx1(m(h, h, f3_Vx, Vx))
    )
    return zeta_t, w_t


def dit_tendency(zeta, V, params: Params, grid: Grid1D):
    """Right-hand side of the symmetrised variant given the velocity ``V``."""
    mu, eps = params.mu, params.eps
    sym = symbols(grid, mu)
    m = grid.mul
    h = 1 + eps * zeta
    h3 = m(h, h, h)
    Vx = grid.dx1(V)
    q = grid.dx1(grid.apply_multiplier(m(h3, grid.apply_multiplier(Vx, sym.sqrt_f3)), sym.sqrt_f3))
    zeta_t = -grid.dx1(m(h, V))
    w_t = (
        -grid.dx1(zeta)
        - eps / 2 * grid.dx1(m(V, V))
        + mu * eps / 3 * grid.dx1(m(1 / h, V, q))
        + mu * eps / 2 * grid.dx1(m(h, h, grid.apply_multiplier(Vx, sym.f3), Vx))
    )
    return zeta_t, w_t


def rhs_fdgn2(state: VState, params: Params, grid: Grid1D, tol=1e-12, classical=False):
    h = 1 + params.eps * state.zeta
    V = solve_I(h, state.w, params, grid, tol=tol, classical=classical)
    return fdgn2_tendency(state.zeta, V, params, grid, classical)


def rhs_fdgn_dit(state: VState, params: Params, grid: Grid1D, tol=1e-12):
    h = 1 + params.eps * state.zeta
    V = solve_I_dit(h, state.w, params, grid, tol=tol)
    return dit_tendency(state.zeta, V, params, grid)


# ---------------------------------------------------------------------------
# model objects used by the integrator and the harness

class Model:
    """A system of equations bound to a grid and regime parameters.

    Parameters
    ----------
    kind : ModelKind or str
    grid : Grid1D
    params : Params
    nz : int
        Chebyshev points for the water-waves reference.
    tol : float
        Tolerance of the inner linear solves (strip iteration or Krylov).
    """

    def __init__(self, kind, grid: Grid1D, params: Params, nz=24, tol=1e-12, strip_max_iter=200):
        self.kind = ModelKind(kind)
        self.grid = grid
        self.params = params
        self.tol = tol
        self.strip = StripGrid(grid, nz)
        self.strip_max_iter = strip_max_iter

    def __repr__(self):
        p = self.params
        return f"Model({self.kind.value}, n={self.grid.n}, mu={p.mu}, eps={p.eps})"

    @property
    def state_type(self):
        return VState if self.kind.v_form else PsiState

    def make_state(self, zeta, psi):
        """Build the model's state from surface data; V-form models start from ``w = psi_x``."""
        zeta = np.asarray(zeta, dtype=float)
        psi = np.asarray(psi, dtype=float)
        if self.kind.v_form:
            return VState(zeta, self.grid.dx1(psi))
        return PsiState(zeta, psi)

    def check(self, state, t=None):
        for f in state:
            if not np.all(np.isfinite(f)):
                raise BlowUpError(f"non-finite values at t={t}", t=t)
        _check_depth(1 + self.params.eps * state[0], self.params)

    def velocity(self, state):
        """``Vbar`` recovered from a V-form state."""
        h = 1 + self.params.eps * state.zeta
        if self.kind.base is ModelKind.FDGN_DIT:
            return solve_I_dit(h, state.w, self.params, self.grid, tol=self.tol)
        return solve_I(h, state.w, self.params, self.grid, tol=self.tol, classical=self.kind.classical)

    def rhs(self, state):
        k, p, g = self.kind, self.params, self.grid
        if k is ModelKind.WW_REF:
            out = rhs_ww_ref(state, p, self.strip, tol=self.tol, max_iter=self.strip_max_iter)
        elif k.base is ModelKind.FDGN1:
            out = rhs_fdgn1(state, p, g, classical=k.classical)
        elif k.base is ModelKind.WB:
            out = rhs_wb(state, p, g, classical=k.classical)
        elif k.base is ModelKind.FDGN2:
            out = rhs_fdgn2(state, p, g, tol=self.tol, classical=k.classical)
        else:
            out = rhs_fdgn_dit(state, p, g, tol=self.tol)
        return self.state_type(*out)

    def tendency_from_velocity(self, zeta, V):
        """V-form right-hand side evaluated at a given velocity (no inversion)."""
        if self.kind.base is ModelKind.FDGN_DIT:
            return dit_tendency(zeta, V, self.params, self.grid)
        return fdgn2_tendency(zeta, V, self.params, self.grid, self.kind.classical)


# ---------------------------------------------------------------------------
# linear dispersion

def omega2_exact(xi, params: Params):
    """Water-waves dispersion ``omega^2 = xi^2 F1``."""
    xi = np.asarray(xi, dtype=float)
    return xi**2 * tanhc(np.sqrt(params.mu) * np.abs(xi))


def omega2_model(kind, xi, params: Params):
    """Analytic linear dispersion of each system (negative means ill-posed at that ``xi``)."""
    kind = ModelKind(kind)
    xi = np.asarray(xi, dtype=float)
    if not kind.classical:
        return omega2_exact(xi, params)
    if kind is ModelKind.GN2_CLASSICAL:
        return xi**2 / (1 + params.mu * xi**2 / 3)
    # GN1 and WB with F2 -> Id both reduce to xi^2 (1 - mu xi^2 / 3)
    return xi**2 * (1 - params.mu * xi**2 / 3)


def measured_omega2(model: Model, k: int, delta=1e-8):
    """Linearised ``omega^2`` of mode ``k`` read off the numerical right-hand side.

    Builds the 4x4 Jacobian of the RHS restricted to ``{cos kx, sin kx}`` in
    both variables from perturbations of size ``delta`` about rest, and
    returns ``-mean(lambda^2)`` over its eigenvalues (``omega^2`` for a
    neutral pair, negative for a growing pair).
    """
    g = model.grid
    if not (1 <= k < g.n // 2):
        raise DomainError(f"mode index must lie in [1, n/2), got {k}")
    kx = 2 * np.pi * k / g.length * g.x
    basis = [np.cos(kx), np.sin(kx)]
    zero = np.zeros(g.n)
    J = np.zeros((4, 4))
    col = 0
    for which in range(2):
        for b in basis:
            fields = [zero, zero]
            fields[which] = delta * b
            out = model.rhs(model.state_type(*fields))
            row = 0
            for comp in out:
                for bb in basis:
                    J[row, col] = 2.0 / g.n * (comp @ bb) / delta
                    row += 1
            col += 1
    lam = np.linalg.eigvals(J)
    return float(-np.mean((lam**2).real))


# ---------------------------------------------------------------------------
# consistency with the water-waves equations

@dataclass
class ConsistencyResult:
    """L2 norms of the residuals left when water-waves time derivatives are fed to a model."""

    kind: ModelKind
    residuals: dict
    total: float
    delta_t: float = 0.0
    differencing_flag: bool = False
    notes: list = field(default_factory=list)


def consistency_residual(kind, data: SurfaceData, strip: StripGrid, delta_t=1e-4, tol=1e-13):
    """Residuals of ``kind`` on the exact water-waves tendency at ``data``.

    For potential-form systems the water-waves ``(zeta_t, psi_t)`` are
    substituted directly.  For velocity-form systems the exact ``Vbar`` is
    used, and the time derivative of ``w = (Id + mu T[h]) Vbar`` is taken by
    centred differences along the water-waves tendency with step
    ``delta_t`` (repeated with ``delta_t/2``; a change above 10% sets
    ``differencing_flag``).
    """
    kind = ModelKind(kind)
    p = data.params
    grid = strip.horizontal
    state = PsiState(data.zeta, data.psi)
    (zt, pt), vbar = rhs_ww_ref(state, p, strip, tol=tol, return_vbar=True)
    model = Model(kind, grid, p, nz=strip.nz, tol=tol)
    if kind is ModelKind.WW_REF:
        return ConsistencyResult(kind, {"R1": 0.0, "R2": 0.0}, 0.0)
    if not kind.v_form:
        mz, mp = model.rhs(state)
        r1 = grid.norm(zt - mz)
        r2 = grid.norm(pt - mp)
        return ConsistencyResult(kind, {"R1": r1, "R2": r2}, float(np.hypot(r1, r2)))

    def w_exact(z, s):
        d = SurfaceData(z, s, p)
        v = compute_vbar(solve_potential(d, strip, tol=tol), d)
        return w_from_vbar(kind, z, v, p, grid)

    def dw_dt(dt):
        plus = w_exact(data.zeta + dt * zt, data.psi + dt * pt)
        minus = w_exact(data.zeta - dt * zt, data.psi - dt * pt)
        return (plus - minus) / (2 * dt)

    mz, mw = model.tendency_from_velocity(data.zeta, vbar)
    r_zeta = grid.norm(zt - mz)
    r_full = grid.norm(dw_dt(delta_t) - mw)
    r_half = grid.norm(dw_dt(delta_t / 2) - mw)
    flag = abs(r_full - r_half) > 0.1 * max(r_full, 1e-300)
    notes = ["time-differencing error comparable to the residual"] if flag else []
    if flag:
        log.warning("%s: residual moved by more than 10%% when delta_t was halved", kind.value)
    return ConsistencyResult(
        kind, {"R1": r_zeta, "R2": r_half}, float(np.hypot(r_zeta, r_half)), delta_t, flag, notes
    )
