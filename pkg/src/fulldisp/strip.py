"""Potential flow in the flat strip and the Dirichlet-to-Neumann map.

The fluid domain ``{-1 + eps*zeta > ...}`` is straightened onto the strip
``T_L x [-1, 0]`` by the trivial vertical diffeomorphism.  The potential then
solves ``div_mu (P grad_mu phi) = 0`` with ``phi = psi`` on ``z = 0`` and
``d_z phi = 0`` on ``z = -1``, where ``grad_mu = (sqrt(mu) d_x, d_z)`` and

    P = [[h, -sqrt(mu) eps (z+1) zeta_x],
         [-sqrt(mu) eps (z+1) zeta_x, (1 + mu eps^2 (z+1)^2 zeta_x^2) / h]].

Multiplying by ``h`` splits the operator into the flat part
``d_z^2 + mu d_x^2`` plus ``mu eps A[phi]``; the solver iterates on that
splitting, inverting the flat part mode by mode with Chebyshev collocation
in ``z``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.interpolate import BarycentricInterpolator

from .errors import DomainError, NonConvergenceError
from .multipliers import Params, f0_of_x, eval_F1, eval_F2, eval_F3
from .spectral import Grid1D

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Chebyshev machinery on [-1, 0]

def cheb_nodes(nz):
    """Gauss-Lobatto nodes mapped to ``[-1, 0]``; ``z[0] = 0`` (surface), ``z[-1] = -1``."""
    t = np.cos(np.pi * np.arange(nz) / (nz - 1))
    return 0.5 * (t - 1.0)


def cheb_diff_matrix(nz):
    """First-derivative collocation matrix on :func:`cheb_nodes` (d/dz, not d/dt)."""
    N = nz - 1
    t = np.cos(np.pi * np.arange(nz) / N)
    c = np.ones(nz)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(nz)
    T = np.tile(t, (nz, 1)).T
    dT = T - T.T
    D = np.outer(c, 1.0 / c) / (dT + np.eye(nz))
    # negative-sum trick for the diagonal keeps rows summing to zero
    D -= np.diag(D.sum(axis=1))
    return 2.0 * D  # dz = dt / 2


def clenshaw_curtis_weights(nz):
    """Quadrature weights for ``int_{-1}^{0}`` on :func:`cheb_nodes`."""
    N = nz - 1
    theta = np.pi * np.arange(nz) / N
    w = np.zeros(nz)
    v = np.ones(N - 1)
    inner = slice(1, N)
    if N % 2 == 0:
        w[0] = w[N] = 1.0 / (N**2 - 1)
        for k in range(1, N // 2):
            v -= 2 * np.cos(2 * k * theta[inner]) / (4 * k * k - 1)
        v -= np.cos(N * theta[inner]) / (N**2 - 1)
    else:
        w[0] = w[N] = 1.0 / N**2
        for k in range(1, (N - 1) // 2 + 1):
            v -= 2 * np.cos(2 * k * theta[inner]) / (4 * k * k - 1)
    w[inner] = 2 * v / N
    return 0.5 * w


@dataclass(frozen=True)
class StripGrid:
    """Tensor grid: Fourier in ``x`` (``horizontal``) times Chebyshev in ``z``."""

    horizontal: Grid1D
    nz: int = 24

    def __post_init__(self):
        if self.nz < 8:
            raise DomainError(f"need at least 8 Chebyshev points, got {self.nz}")

    @cached_property
    def z(self):
        return cheb_nodes(self.nz)

    @cached_property
    def Dz(self):
        return cheb_diff_matrix(self.nz)

    @cached_property
    def D2z(self):
        return self.Dz @ self.Dz

    @cached_property
    def weights(self):
        return clenshaw_curtis_weights(self.nz)

    def integrate_z(self, f):
        """``int_{-1}^0 f dz`` for an ``(nz, n)`` array."""
        return self.weights @ f

    def integrate(self, f):
        """Integral over the whole strip."""
        return self.horizontal.integrate(self.integrate_z(f))


@dataclass(frozen=True, eq=False)
class SurfaceData:
    """Surface elevation, surface potential trace and regime parameters."""

    zeta: np.ndarray
    psi: np.ndarray
    params: Params

    def __post_init__(self):
        zeta = np.asarray(self.zeta, dtype=float)
        psi = np.asarray(self.psi, dtype=float)
        if zeta.shape != psi.shape or zeta.ndim != 1:
            raise DomainError("zeta and psi must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(zeta)) and np.all(np.isfinite(psi))):
            raise DomainError("surface data contain non-finite values")
        hmin = 1 + self.params.eps * zeta.min()
        if hmin < self.params.h_min:
            raise DomainError(
                f"non-cavitation violated: min h = {hmin:.4g} < h_min = {self.params.h_min}"
            )
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "psi", psi)

    @property
    def h(self):
        return 1 + self.params.eps * self.zeta


@dataclass(frozen=True, eq=False)
class StripField:
    """Potential samples ``values[m, j] = phi(x_j, z_m)``."""

    grid: StripGrid
    values: np.ndarray
    iterations: int = 0
    residual: float = 0.0

    @property
    def surface(self):
        return self.values[0]


# ---------------------------------------------------------------------------
# flat inverse and the perturbation operator

@lru_cache(maxsize=64)
def _flat_operator(strip: StripGrid, mu: float):
    """Batched collocation matrices for ``u'' - mu xi^2 u`` with the two boundary rows."""
    xi = strip.horizontal.xi_half
    nz = strip.nz
    M = np.repeat(strip.D2z[None, :, :], xi.size, axis=0).astype(float)
    M -= mu * xi[:, None, None] ** 2 * np.eye(nz)[None]
    M[:, 0, :] = 0.0
    M[:, 0, 0] = 1.0  # Dirichlet at z = 0
    M[:, -1, :] = strip.Dz[-1]  # Neumann at z = -1
    return M


def flat_solve(strip: StripGrid, mu: float, rhs, top):
    """Solve ``(d_z^2 + mu d_x^2) u = rhs``, ``u(z=0) = top``, ``u_z(z=-1) = 0``."""
    M = _flat_operator(strip, float(mu))
    R = np.fft.rfft(rhs, axis=-1)
    R[0] = np.fft.rfft(top)
    R[-1] = 0.0
    U = np.linalg.solve(M, R.T[:, :, None])[:, :, 0].T
    return np.fft.irfft(U, n=strip.horizontal.n, axis=-1)


def perturbation(phi, data: SurfaceData, strip: StripGrid):
    """The operator ``A[phi]`` with ``h div_mu P grad_mu = d_z^2 + mu d_x^2 + mu eps A``."""
    g = strip.horizontal
    eps = data.params.eps
    zeta, h = data.zeta, data.h
    zx = g.dx1(zeta)
    zp1 = (strip.z + 1.0)[:, None]
    phi_x = g.dx1(phi)
    phi_z = strip.Dz @ phi
    out = g.dx1(zeta * phi_x)
    out += zeta * g.dx1(h * phi_x)
    out += eps * zx**2 * (strip.Dz @ (zp1**2 * phi_z))
    out -= h * zp1 * g.dx1(zx * phi_z)
    out -= h * zx * (strip.Dz @ (zp1 * phi_x))
    return out


def operator_residual(phi, data: SurfaceData, strip: StripGrid):
    """Strip L2 norm of ``h div_mu P grad_mu phi`` over the interior nodes."""
    mu, eps = data.params.mu, data.params.eps
    r = strip.D2z @ phi + mu * strip.horizontal.dx2(phi) + mu * eps * perturbation(phi, data, strip)
    r[0] = 0.0
    r[-1] = 0.0
    return float(np.sqrt(abs(strip.integrate(r * r))))


def solve_potential(data: SurfaceData, strip: StripGrid, tol=1e-12, max_iter=200, theta=1.0,
                    initial=None):
    """Solve the straightened Laplace problem by fixed-point iteration.

    Each sweep solves ``(d_z^2 + mu d_x^2) phi_new = -mu eps A[phi]`` with the
    surface trace and bottom Neumann condition, then relaxes
    ``phi <- phi + theta (phi_new - phi)``.  Iteration stops when the update,
    relative to ``max|psi|``, falls below ``tol``.  If updates stop shrinking
    (ratio above 0.9 three times in a row) the sweep restarts from the best
    iterate with ``theta = 0.7``.

    Returns
    -------
    StripField
        ``residual`` holds the final relative update.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    if data.psi.shape[0] != strip.horizontal.n:
        raise DomainError("surface data and strip grid disagree on n")
    mu, eps = data.params.mu, data.params.eps
    scale = float(np.max(np.abs(data.psi)))
    phi = flat_solve(strip, mu, np.zeros((strip.nz, strip.horizontal.n)), data.psi)
    if scale == 0.0 or eps == 0.0:
        return StripField(strip, phi, iterations=1, residual=0.0)
    if initial is not None:
        phi = np.array(initial, dtype=float)
    best = (np.inf, phi)
    prev = np.inf
    slow = 0
    rel = np.inf
    for it in range(1, max_iter + 1):
        new = flat_solve(strip, mu, -mu * eps * perturbation(phi, data, strip), data.psi)
        upd = float(np.max(np.abs(new - phi)))
        if not np.isfinite(upd):
            raise NonConvergenceError("strip iteration produced non-finite values", rel, it)
        rel = upd / scale
        phi = phi + theta * (new - phi)
        if rel <= tol:
            return StripField(strip, phi, iterations=it, residual=rel)
        if upd < best[0]:
            best = (upd, phi)
        slow = slow + 1 if upd > 0.9 * prev else 0
        prev = upd
        if slow >= 3 and theta > 0.7:
            log.info("strip iteration stalling at it=%d (update %.2e); relaxing to 0.7", it, rel)
            theta = 0.7
            phi = best[1]
            prev = np.inf
            slow = 0
    raise NonConvergenceError("strip fixed-point iteration did not reach tolerance", rel, max_iter)


# ---------------------------------------------------------------------------
# derived surface quantities

def compute_vbar(phi: StripField, data: SurfaceData):
    """Depth-averaged horizontal velocity ``(1/h) int [h phi_x - eps (z+1) zeta_x phi_z] dz``."""
    strip = phi.grid
    g = strip.horizontal
    eps = data.params.eps
    phi_x = g.dx1(phi.values)
    integrand = phi_x
    if eps != 0.0:
        phi_z = strip.Dz @ phi.values
        zx = g.dx1(data.zeta)
        integrand = phi_x - eps * (strip.z + 1.0)[:, None] * (zx / data.h) * phi_z
    return strip.integrate_z(integrand)


def dtn_from_vbar(vbar, data: SurfaceData, grid: Grid1D):
    return -data.params.mu * grid.dx1(data.h * vbar)


def compute_dtn(data: SurfaceData, strip: StripGrid, tol=1e-12, max_iter=200):
    """Dirichlet-to-Neumann map ``G psi = -mu d_x (h Vbar)``."""
    phi = solve_potential(data, strip, tol=tol, max_iter=max_iter)
    return dtn_from_vbar(compute_vbar(phi, data), data, strip.horizontal)


def flat_dtn_symbol(xi, mu):
    """``sqrt(mu)|xi| tanh(sqrt(mu)|xi|)``, the DtN symbol over a flat surface."""
    x = np.sqrt(mu) * np.abs(xi)
    return x * np.tanh(x)


# ---------------------------------------------------------------------------
# explicit approximations of the potential

def _f0_table(strip: StripGrid, mu):
    x = np.sqrt(mu) * strip.horizontal.xi_half
    return np.stack([f0_of_x(z, x) for z in strip.z])


def phi0(data: SurfaceData, strip: StripGrid):
    """Flat-bottom potential ``F0 psi`` (exact when eps = 0)."""
    F0 = _f0_table(strip, data.params.mu)
    vals = np.fft.irfft(F0 * np.fft.rfft(data.psi)[None, :], n=strip.horizontal.n, axis=-1)
    return StripField(strip, vals)


def phi_app(data: SurfaceData, strip: StripGrid):
    """``F0 psi - mu eps zeta (1 + h) (z^2/2 + z) psi_xx``."""
    g = strip.horizontal
    mu, eps = data.params.mu, data.params.eps
    base = phi0(data, strip).values
    z = strip.z[:, None]
    corr = g.mul(data.zeta, 1 + data.h, g.dx2(data.psi))
    return StripField(strip, base - mu * eps * (z * z / 2 + z) * corr)


def phi_tilde_app(data: SurfaceData, strip: StripGrid):
    """``psi + h^2 (F0 - 1) psi``."""
    base = phi0(data, strip).values
    psi = data.psi[None, :]
    return StripField(strip, psi + data.h**2 * (base - psi))


def grad_mu_norm(u, strip: StripGrid, mu):
    """``|| (sqrt(mu) u_x, u_z) ||`` in L2 of the strip."""
    u = u.values if isinstance(u, StripField) else np.asarray(u)
    ux = strip.horizontal.dx1(u)
    uz = strip.Dz @ u
    return float(np.sqrt(strip.integrate(mu * ux**2 + uz**2)))


# ---------------------------------------------------------------------------
# explicit approximations of Vbar

class VbarKind(str, Enum):
    F1GRAD = "F1grad"
    VAPP = "Vapp"
    VTILDE_APP = "VtildeApp"


def vbar_approx(kind, data: SurfaceData, grid: Grid1D):
    """Closed-form approximations of ``Vbar`` from the surface data.

    ``F1grad``: ``F1 psi_x`` (error of size ``mu eps``).
    ``Vapp``: adds ``(mu eps / 3) [h zeta_x psi_xx + d_x(zeta (1+h) psi_xx)]``.
    ``VtildeApp``: ``psi_x + (mu / 3h) d_x(h^3 F2 psi_xx)``.
    """
    kind = VbarKind(kind)
    p = data.params
    mu, eps = p.mu, p.eps
    psi_x = grid.dx1(data.psi)
    if kind is VbarKind.F1GRAD:
        return grid.apply_multiplier(psi_x, lambda xi: eval_F1(xi, p))
    psi_xx = grid.dx2(data.psi)
    h = data.h
    if kind is VbarKind.VAPP:
        base = grid.apply_multiplier(psi_x, lambda xi: eval_F1(xi, p))
        zx = grid.dx1(data.zeta)
        corr = grid.mul(h, zx, psi_xx) + grid.dx1(grid.mul(data.zeta, 1 + h, psi_xx))
        return base + mu * eps / 3 * corr
    f2 = grid.apply_multiplier(psi_xx, lambda xi: eval_F2(xi, p))
    return psi_x + mu / 3 * grid.mul(1 / h, grid.dx1(grid.mul(h**3, f2)))


def gradpsi_from_vbar(vbar, zeta, params: Params, grid: Grid1D):
    """Recover ``psi_x`` from ``Vbar``: ``Vbar - (mu / 3h) d_x(h^3 F3 d_x Vbar)``."""
    h = 1 + params.eps * np.asarray(zeta)
    f3 = grid.apply_multiplier(grid.dx1(vbar), lambda xi: eval_F3(xi, params))
    return vbar - params.mu / 3 * grid.mul(1 / h, grid.dx1(grid.mul(h**3, f3)))


# ---------------------------------------------------------------------------
# independent finite-difference solve of the same boundary-value problem

@dataclass
class FDSolution:
    x: np.ndarray
    z: np.ndarray
    values: np.ndarray  # (len(z), len(x)), z ascending from -1 to 0


def _fourier_resample(f, n_out):
    """Trigonometric interpolation of a periodic sample vector onto ``n_out`` points."""
    n = f.size
    c = np.fft.rfft(f)
    out = np.zeros(n_out // 2 + 1, dtype=complex)
    out[: c.size] = c
    if n % 2 == 0 and n_out > n:
        out[n // 2] *= 0.5  # split the Nyquist coefficient between +/- n/2
    return np.fft.irfft(out, n=n_out) * (n_out / n)


def solve_potential_fd(data: SurfaceData, grid: Grid1D, nx: int, nz_intervals: int) -> FDSolution:
    """Second-order finite differences for ``div_mu (P grad_mu phi) = 0`` in conservative form.

    Uniform periodic grid in ``x`` (``nx`` points), uniform grid in ``z``
    (``nz_intervals`` cells).  The bottom Neumann condition uses an even ghost
    layer; the surface row carries the Dirichlet data.  The sparse system is
    solved directly.  Surface data are interpolated trigonometrically from
    ``grid``.
    """
    mu, eps = data.params.mu, data.params.eps
    L = grid.length
    dx = L / nx
    M = nz_intervals
    dz = 1.0 / M
    x = np.arange(nx) * dx
    z = -1.0 + dz * np.arange(M + 1)
    zeta = _fourier_resample(data.zeta, nx)
    zx = _fourier_resample(grid.dx1(data.zeta), nx)
    psi = _fourier_resample(data.psi, nx)
    h = 1 + eps * zeta
    h_half = 0.5 * (h + np.roll(h, -1))  # h at x_{i+1/2}

    def q(zv):  # P22 evaluated at height zv for every column
        zv = np.asarray(zv)[..., None]
        return (1 + mu * eps**2 * (zv + 1) ** 2 * zx**2) / h

    def s(zv):  # (z+1) zeta_x, analytic in z so the ghost layer is consistent
        return (np.asarray(zv)[..., None] + 1) * zx

    m = np.arange(M)[:, None] * np.ones((1, nx), dtype=int)
    i = np.ones((M, 1), dtype=int) * np.arange(nx)[None, :]
    zm = z[:M]
    rows, cols, vals = [], [], []
    rhs = np.zeros((M, nx))

    def add(coef, dm, di):
        coef = np.broadcast_to(coef, (M, nx))
        mm = m + dm
        ii = (i + di) % nx
        mm = np.where(mm < 0, -mm, mm)  # even reflection across z = -1
        top = mm == M
        rhs[top] -= (coef * psi[ii])[top]
        keep = ~top
        rows.append((m * nx + i)[keep])
        cols.append((mm * nx + ii)[keep])
        vals.append(coef[keep])

    # mu d_x (h u_x)
    cxp = mu * np.roll(h_half, 0)[None, :] / dx**2
    cxm = mu * np.roll(h_half, 1)[None, :] / dx**2
    add(cxp, 0, 1)
    add(cxm, 0, -1)
    add(-(cxp + cxm), 0, 0)
    # d_z (q u_z)
    qp = q(zm + dz / 2) / dz**2
    qm = q(zm - dz / 2) / dz**2
    add(qp, 1, 0)
    add(qm, -1, 0)
    add(-(qp + qm), 0, 0)
    # -mu eps d_x (s u_z)
    c = -mu * eps / (4 * dx * dz)
    sc = s(zm)
    add(c * np.roll(sc, -1, axis=1), 1, 1)
    add(-c * np.roll(sc, -1, axis=1), -1, 1)
    add(-c * np.roll(sc, 1, axis=1), 1, -1)
    add(c * np.roll(sc, 1, axis=1), -1, -1)
    # -mu eps d_z (s u_x)
    sp_up = s(zm + dz)
    sp_dn = s(zm - dz)
    add(c * sp_up, 1, 1)
    add(-c * sp_up, 1, -1)
    add(-c * sp_dn, -1, 1)
    add(c * sp_dn, -1, -1)

    A = sp.csc_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(M * nx, M * nx)
    )
    u = spla.spsolve(A, rhs.ravel()).reshape(M, nx)
    values = np.vstack([u, psi[None, :]])
    return FDSolution(x=x, z=z, values=values)


def fd_gap(phi: StripField, fd: FDSolution):
    """Max difference between a spectral solve and an FD solve on the shared ``x`` columns."""
    n = phi.grid.horizontal.n
    nx = fd.x.size
    if nx % n:
        raise DomainError("FD resolution must be a multiple of the spectral grid size")
    step = nx // n
    interp = BarycentricInterpolator(phi.grid.z, phi.values)
    spec_on_fd = interp(fd.z)  # (len(fd.z), n)
    return float(np.max(np.abs(fd.values[:, ::step] - spec_on_fd)))
