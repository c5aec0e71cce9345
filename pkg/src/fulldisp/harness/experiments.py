"""Verification experiments behind the CLI subcommands and the acceptance suite.

Each experiment returns an :class:`Outcome`: named tables (lists of dict rows,
written to CSV by the CLI) and a list of :class:`Check` verdicts.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..conserved import random_directions, variational_check
from ..models import (
    Model,
    ModelKind,
    PsiState,
    apply_I,
    apply_I_dit,
    consistency_residual,
    measured_omega2,
    omega2_exact,
    omega2_model,
    solve_I,
    symmetrization_gap,
)
from ..multipliers import Params, check_taylor_bounds, f2_of_x, f3_bound_residual, f3_of_x, \
    f3_sharp_bound_residual, f0_of_x, tanhc
from ..spectral import Grid1D
from ..strip import (
    StripGrid,
    SurfaceData,
    VbarKind,
    compute_dtn,
    compute_vbar,
    fd_gap,
    flat_dtn_symbol,
    grad_mu_norm,
    gradpsi_from_vbar,
    phi_tilde_app,
    solve_potential,
    solve_potential_fd,
    vbar_approx,
)
from ..timeint import StepperConfig, integrate, self_convergence_order
from .fitting import FlooredError, PlaneFit, fit_power_law

log = logging.getLogger(__name__)


@dataclass
class Check:
    name: str
    passed: bool
    measured: str
    target: str
    table: str = ""  # name of the table holding the evidence

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.measured} (target {self.target})"


@dataclass
class Outcome:
    tables: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    def __post_init__(self):
        self.tag()

    def tag(self, table=None):
        """Point untagged checks at ``table`` (default: the first table)."""
        table = table or next(iter(self.tables), "")
        for c in self.checks:
            if not c.table:
                c.table = table
        return self

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def merge(self, other: "Outcome"):
        self.tables.update(other.tables)
        self.checks.extend(other.checks)
        return self


@dataclass(frozen=True)
class SlopeTarget:
    """Accepted slope interval ``[lo, hi]``."""

    lo: float
    hi: float

    @classmethod
    def around(cls, value, tol):
        return cls(value - tol, value + tol)

    @classmethod
    def at_least(cls, value):
        return cls(value, np.inf)

    def __contains__(self, s):
        return self.lo <= s <= self.hi

    def __str__(self):
        if np.isinf(self.hi):
            return f">= {self.lo:g}"
        return f"{(self.lo + self.hi) / 2:g} +/- {(self.hi - self.lo) / 2:g}"


@dataclass
class SweepReport:
    """Per-point error table of a (mu, eps) sweep and its log-log plane fits.

    ``expected[name] = (mu_target, eps_target)``; a ``None`` target is
    measured and reported but not asserted.
    """

    name: str
    points: list  # (mu, eps, err_name, value)
    expected: dict
    fits: dict = field(default_factory=dict)
    floored: list = field(default_factory=list)

    def __post_init__(self):
        for err in self.names():
            mus, epss, vals = self.series(err)
            try:
                self.fits[err] = fit_power_law(mus, epss, vals)
            except FlooredError:
                self.floored.append(err)
                self.fits[err] = None

    def names(self):
        return list(dict.fromkeys(p[2] for p in self.points))

    def series(self, err):
        rows = [p for p in self.points if p[2] == err]
        return (np.array([r[0] for r in rows]), np.array([r[1] for r in rows]), np.array([r[3] for r in rows]))

    def value(self, mu, eps, err):
        for p in self.points:
            if p[0] == mu and p[1] == eps and p[2] == err:
                return p[3]
        raise KeyError((mu, eps, err))

    def checks(self):
        out = []
        for err, targets in self.expected.items():
            fit: Optional[PlaneFit] = self.fits.get(err)
            for axis, tgt in zip(("mu", "eps"), targets):
                if tgt is None:
                    continue
                name = f"{self.name} {err} slope in {axis}"
                if fit is None:
                    out.append(Check(name, False, "floored (errors hit solver tolerance)", str(tgt)))
                    continue
                s = fit.slope_mu if axis == "mu" else fit.slope_eps
                band = fit.band_mu if axis == "mu" else fit.band_eps
                out.append(Check(name, s in tgt, f"{s:.3f} (95% band +/-{band:.3f}, R2 {fit.r2:.4f})", str(tgt)))
        return out

    @property
    def slug(self):
        return self.name.replace(" ", "_")

    def outcome(self) -> Outcome:
        pts, fits = f"{self.slug}_points", f"{self.slug}_fits"
        return Outcome({pts: self.point_rows(), fits: self.fit_rows()}, self.checks()).tag(fits)

    def point_rows(self):
        return [{"mu": m, "eps": e, "err_name": n, "value": v} for m, e, n, v in self.points]

    def fit_rows(self):
        rows = []
        for err, fit in self.fits.items():
            tg = self.expected.get(err, (None, None))
            if fit is None:
                rows.append({"err_name": err, "status": "floored"})
                continue
            rows.append({
                "err_name": err, "status": "ok",
                "slope_mu": fit.slope_mu, "band_mu": fit.band_mu, "expected_mu": str(tg[0] or "-"),
                "slope_eps": fit.slope_eps, "band_eps": fit.band_eps, "expected_eps": str(tg[1] or "-"),
                "r2": fit.r2, "npoints": fit.npoints,
            })
        return rows


def _pool_map(fn, items, jobs):
    """Map preserving input order, in a process pool when ``jobs > 1``."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _grid(points):
    return [(mu, eps) for mu in points[0] for eps in points[1]]


# ---------------------------------------------------------------------------
# strip solver: flat oracle, FD oracle, velocity approximations

def flat_test_function(grid: Grid1D):
    x = 2 * np.pi / grid.length * grid.x
    return np.sin(x) + 0.3 * np.cos(3 * x) + np.exp(np.cos(x))


def flat_dtn_check(mus=(0.01, 0.1, 1.0), n=128, nz=24, tol=1e-10, time_budget=1.0) -> Outcome:
    g = Grid1D(n)
    s = StripGrid(g, nz)
    psi = flat_test_function(g)
    out = Outcome()
    rows = []
    for mu in mus:
        d = SurfaceData(np.zeros(n), psi, Params(mu, 0.0))
        t0 = time.perf_counter()
        G = compute_dtn(d, s)
        dt = time.perf_counter() - t0
        exact = g.apply_multiplier(psi, lambda xi: flat_dtn_symbol(xi, mu))
        err = float(np.max(np.abs(G - exact)) / np.max(np.abs(exact)))
        rows.append({"mu": mu, "rel_err": err, "seconds": dt})
        out.checks.append(Check(f"flat DtN mu={mu:g}", err <= tol and dt < time_budget,
                                f"rel err {err:.2e}, {dt * 1e3:.1f} ms", f"<= {tol:g} in < {time_budget:g} s"))
    out.tables["dtn_flat"] = rows
    return out.tag()


def fd_oracle_check(mu=0.3, eps=0.1, n=64, nz=24, amplitude=0.5,
                    resolutions=((128, 64), (256, 128), (512, 256)), target=(2.0, 0.3)) -> Outcome:
    """Spectral strip solution against three second-order FD solves on refined grids."""
    g = Grid1D(n)
    s = StripGrid(g, nz)
    d = SurfaceData(amplitude * np.cos(g.x), np.sin(g.x), Params(mu, eps))
    phi = solve_potential(d, s)
    rows = []
    for nx, nzi in resolutions:
        t0 = time.perf_counter()
        fd = solve_potential_fd(d, g, nx, nzi)
        rows.append({"nx": nx, "nz_intervals": nzi, "dx": g.length / nx, "gap": fd_gap(phi, fd),
                     "seconds": time.perf_counter() - t0})
    dx = np.array([r["dx"] for r in rows])
    gap = np.array([r["gap"] for r in rows])
    order = float(np.polyfit(np.log(dx), np.log(gap), 1)[0])
    lo, hi = target[0] - target[1], target[0] + target[1]
    return Outcome({"dtn_fd_oracle": rows}, [
        Check("FD oracle mutual convergence order", lo <= order <= hi,
              f"{order:.3f} (gaps {', '.join(f'{v:.2e}' for v in gap)})", f"{target[0]} +/- {target[1]}")
    ])


def _vbar_point(args):
    mu, eps, n, nz, amp = args
    g = Grid1D(n)
    s = StripGrid(g, nz)
    P = Params(mu, eps)
    d = SurfaceData(amp * np.cos(g.x), np.sin(g.x), P)
    phi = solve_potential(d, s)
    vb = compute_vbar(phi, d)
    return {
        "Vbar-F1grad": g.norm(vb - vbar_approx(VbarKind.F1GRAD, d, g)),
        "Vbar-Vapp": g.norm(vb - vbar_approx(VbarKind.VAPP, d, g)),
        "Vbar-VtildeApp": g.norm(vb - vbar_approx(VbarKind.VTILDE_APP, d, g)),
        "gradpsi-recovery": g.norm(gradpsi_from_vbar(vb, d.zeta, P, g) - g.dx1(d.psi)),
        "phi-phiTildeApp": grad_mu_norm(phi.values - phi_tilde_app(d, s).values, s, mu),
    }


def vbar_sweep(mus, epss, n=64, nz=24, amplitude=0.25, tol=0.3, jobs=1) -> SweepReport:
    pts = _grid((mus, epss))
    res = _pool_map(_vbar_point, [(m, e, n, nz, amplitude) for m, e in pts], jobs)
    points = [(m, e, k, v) for (m, e), r in zip(pts, res) for k, v in r.items()]
    one, two = SlopeTarget.around(1, tol), SlopeTarget.around(2, tol)
    expected = {
        "Vbar-F1grad": (one, one),
        "Vbar-Vapp": (two, one),
        "Vbar-VtildeApp": (two, one),
        "gradpsi-recovery": (two, one),
    }
    return SweepReport("velocity approximation", points, expected)


# ---------------------------------------------------------------------------
# consistency residuals

def _consistency_point(args):
    mu, eps, n, nz, amp, kinds = args
    g = Grid1D(n)
    s = StripGrid(g, nz)
    d = SurfaceData(amp * np.cos(g.x), np.sin(g.x), Params(mu, eps))
    out, flags = {}, []
    for k in kinds:
        r = consistency_residual(k, d, s)
        out[k.value] = r.total
        out[f"{k.value}.R1"] = r.residuals["R1"]
        out[f"{k.value}.R2"] = r.residuals["R2"]
        if r.differencing_flag:
            flags.append(k.value)
    return out, flags


# consistency orders (mu, eps) of each system; classical GN1 is only O(mu^2)
CONSISTENCY_ORDERS = {
    ModelKind.FDGN1: (2, 1),
    ModelKind.FDGN2: (2, 1),
    ModelKind.FDGN_DIT: (2, 1),
    ModelKind.WB: (1, 1),
}


def consistency_sweep(models, mus, epss, n=64, nz=24, amplitude=0.25, tol=0.3, jobs=1,
                      ordering_mu_min=0.2) -> tuple[SweepReport, Outcome]:
    """Residual slopes per model, plus the strict FDGN1 < GN1-classical ordering."""
    kinds = [ModelKind(m) for m in models]
    pts = _grid((mus, epss))
    res = _pool_map(_consistency_point, [(m, e, n, nz, amplitude, kinds) for m, e in pts], jobs)
    points, flag_rows = [], []
    for (m, e), (vals, flags) in zip(pts, res):
        points.extend((m, e, k, v) for k, v in vals.items())
        flag_rows.extend({"mu": m, "eps": e, "model": f} for f in flags)
    expected = {}
    for k in kinds:
        if k in CONSISTENCY_ORDERS:
            a, b = CONSISTENCY_ORDERS[k]
            expected[k.value] = (SlopeTarget.around(a, tol), SlopeTarget.around(b, tol))
    rep = SweepReport("consistency", points, expected)
    extra = Outcome({"consistency_differencing_flags": flag_rows})
    if ModelKind.FDGN1 in kinds and ModelKind.GN1_CLASSICAL in kinds:
        rows, ok = [], True
        for m, e in pts:
            if m < ordering_mu_min:
                continue
            a, b = rep.value(m, e, "FDGN1"), rep.value(m, e, "GN1-classical")
            ok &= a < b
            rows.append({"mu": m, "eps": e, "FDGN1": a, "GN1-classical": b, "ratio": a / b})
        worst = max((r["ratio"] for r in rows), default=np.nan)
        extra.tables["consistency_ordering"] = rows
        extra.checks.append(Check(f"FDGN1 residual < GN1-classical at every point with mu >= {ordering_mu_min:g}",
                                  ok and bool(rows), f"worst ratio {worst:.3f} over {len(rows)} points", "< 1",
                                  table="consistency_ordering"))
    return rep, extra


# ---------------------------------------------------------------------------
# Hamiltonians

def hamiltonian_state(grid: Grid1D, amplitude=0.05):
    """Reference state for Hamiltonian comparisons.

    The second harmonic in ``zeta`` gives the cubic part of the energy a
    nonzero overlap with ``psi = sin x`` (with a first harmonic it vanishes by
    parity and the eps-dependence of the error degenerates).
    """
    x = 2 * np.pi / grid.length * grid.x
    return -amplitude * np.cos(2 * x), np.sin(x)


def _hamiltonian_point(args):
    from ..conserved import hamiltonian_app1, hamiltonian_app2, hamiltonian_ww

    mu, eps, n, nz, amp = args
    g = Grid1D(n)
    s = StripGrid(g, nz)
    P = Params(mu, eps)
    z, p = hamiltonian_state(g, amp)
    hw = hamiltonian_ww(SurfaceData(z, p, P), s)
    st = PsiState(z, p)
    return {"H_app1-H_ww": abs(hamiltonian_app1(st, P, g) - hw), "H_app2-H_ww": abs(hamiltonian_app2(st, P, g) - hw)}


def hamiltonian_sweep(mus, epss, n=64, nz=24, amplitude=0.05, tol=0.3, jobs=1,
                      flat_mu=0.3, flat_tol=1e-12) -> tuple[SweepReport, Outcome]:
    pts = _grid((mus, epss))
    res = _pool_map(_hamiltonian_point, [(m, e, n, nz, amplitude) for m, e in pts], jobs)
    points = [(m, e, k, v) for (m, e), r in zip(pts, res) for k, v in r.items()]
    tgt = (SlopeTarget.around(2, tol), SlopeTarget.around(1, tol))
    rep = SweepReport("hamiltonian", points, {"H_app1-H_ww": tgt, "H_app2-H_ww": tgt})
    flat = _hamiltonian_point((flat_mu, 0.0, n, nz, 10 * amplitude))
    extra = Outcome({"hamiltonian_flat": [{"mu": flat_mu, **flat}]})
    for k, v in flat.items():
        extra.checks.append(Check(f"{k} at eps=0", v <= flat_tol, f"{v:.2e}", f"<= {flat_tol:g}"))
    return rep, extra


# ---------------------------------------------------------------------------
# dispersion and linear operators

def dispersion_check(models, n=64, mu=0.3, nz=24, kmax=0, delta=1e-8, tol=1e-6, classical_dev=0.05,
                     length=2 * np.pi) -> Outcome:
    """Linearised frequencies read off each model's RHS against ``omega = |xi| sqrt(F1)``.

    Full-dispersion models (and the water-waves reference) must match to
    ``tol`` at every mode ``1..kmax``; classical baselines must deviate by more
    than ``classical_dev`` at ``sqrt(mu)|xi| = 3`` (mode 3 at ``mu = (3/xi_3)^2``).
    """
    g = Grid1D(n, length)
    kmax = kmax or n // 3
    P = Params(mu, 0.0)
    rows, checks = [], []
    xi3 = 2 * np.pi / length * 3
    Pc = Params((3 / xi3) ** 2, 0.0, mu_max=max(4.0, (3 / xi3) ** 2))
    for kind in map(ModelKind, models):
        m = Model(kind, g, P, nz=nz)
        worst = 0.0
        for k in range(1, kmax + 1):
            xi = 2 * np.pi / length * k
            w2 = measured_omega2(m, k, delta)
            w2_an = float(omega2_model(kind, xi, P))
            w2_ex = float(omega2_exact(xi, P))
            w_m = np.sqrt(complex(w2))
            err_an = abs(w_m - np.sqrt(complex(w2_an))) / abs(np.sqrt(complex(w2_an)))
            dev_ex = abs(w_m - np.sqrt(w2_ex)) / np.sqrt(w2_ex)
            rows.append({"model": kind.value, "mu": mu, "k": k, "xi": xi, "omega2_measured": w2,
                         "omega2_model": w2_an, "omega2_exact": w2_ex, "rel_err_vs_model": err_an,
                         "rel_dev_vs_exact": dev_ex})
            worst = max(worst, err_an if kind.classical else dev_ex)
        if kind.classical:
            checks.append(Check(f"{kind.value} matches its own analytic dispersion", worst <= tol,
                                f"max rel err {worst:.2e}", f"<= {tol:g}"))
            mc = Model(kind, g, Pc, nz=nz)
            w_m = np.sqrt(complex(measured_omega2(mc, 3, delta)))
            w_ex = np.sqrt(omega2_exact(xi3, Pc))
            dev = float(abs(w_m - w_ex) / w_ex)
            rows.append({"model": kind.value, "mu": Pc.mu, "k": 3, "xi": xi3, "omega2_measured": (w_m**2).real,
                         "omega2_model": float(omega2_model(kind, xi3, Pc)), "omega2_exact": float(w_ex**2),
                         "rel_err_vs_model": np.nan, "rel_dev_vs_exact": dev})
            checks.append(Check(f"{kind.value} deviates from exact dispersion at sqrt(mu)|xi|=3", dev > classical_dev,
                                f"{100 * dev:.1f}%", f"> {100 * classical_dev:g}%"))
        else:
            checks.append(Check(f"{kind.value} omega matches |xi| sqrt(F1)", worst <= tol,
                                f"max rel err {worst:.2e} over k=1..{kmax}", f"<= {tol:g}"))
    return Outcome({"dispersion": rows}, checks)


def _smooth_fields(grid, count, seed):
    return random_directions(grid, count, seed=seed, kmax=grid.n // 4)


def operator_algebra_check(n=64, mu=0.3, eps=0.2, seed=0, tol=1e-12, gap_mus=(0.05, 0.1, 0.2, 0.4),
                           sym_tol=1e-9, h_min=0.1) -> Outcome:
    """Symmetry and invertibility of ``I[h]``, positivity of the symmetrised operator,
    and the mu-scaling of the gap between the two symmetrisations."""
    g = Grid1D(n)
    x = g.x
    zeta = 0.5 * np.cos(x) + 0.2 * np.sin(2 * x)
    h = 1 + eps * zeta
    P = Params(mu, eps, h_min=h_min)
    u, v, w = _smooth_fields(g, 3, seed)
    checks, rows = [], []

    Iu, Iv = apply_I(h, u, P, g), apply_I(h, v, P, g)
    asym = abs(g.inner(Iu, v) - g.inner(u, Iv)) / (g.norm(Iu) * g.norm(v))
    rows.append({"quantity": "I symmetry defect", "value": asym})
    checks.append(Check("I[h] discrete symmetry", asym <= sym_tol, f"{asym:.2e}", f"<= {sym_tol:g}"))

    V = solve_I(h, w, P, g, tol=tol)
    rt = g.norm(apply_I(h, V, P, g) - h * w) / g.norm(h * w)
    rows.append({"quantity": "solve_I round trip", "value": rt})
    checks.append(Check("solve_I round trip", rt <= 10 * tol, f"{rt:.2e}", f"<= {10 * tol:g}"))

    # assemble the symmetrised operator column by column
    A = np.column_stack([apply_I_dit(h, e, P, g) for e in np.eye(n)])
    sym_dev = float(np.max(np.abs(A - A.T)) / np.max(np.abs(A)))
    lam_min = float(np.linalg.eigvalsh(0.5 * (A + A.T)).min())
    rows.append({"quantity": "DIT asymmetry", "value": sym_dev})
    rows.append({"quantity": "DIT min Rayleigh quotient", "value": lam_min})
    rows.append({"quantity": "min h", "value": float(h.min())})
    checks.append(Check("DIT operator SPD", lam_min >= h_min and sym_dev <= sym_tol,
                        f"min Rayleigh quotient {lam_min:.4f} (min h {h.min():.3f}), asymmetry {sym_dev:.1e}",
                        f">= h_min = {h_min:g}"))

    # a smooth (analytic) field: broadband noise puts most of its energy where
    # F3 has already saturated and the gap no longer scales with mu
    smooth = np.exp(np.sin(x))
    gaps = []
    for m in gap_mus:
        gv = g.norm(symmetrization_gap(h, smooth, Params(m, eps), g)) / g.norm(smooth)
        gaps.append(gv)
        rows.append({"quantity": f"symmetrization gap mu={m:g}", "value": gv})
    slope = float(np.polyfit(np.log(gap_mus), np.log(gaps), 1)[0])
    rows.append({"quantity": "symmetrization gap slope in mu", "value": slope})
    checks.append(Check("symmetrization gap slope in mu", slope >= 1, f"{slope:.3f}", ">= 1"))
    # eps-dependence is measured and tabulated but not asserted
    eps_axis = (0.05, 0.1, 0.2, 0.4)
    egaps = [g.norm(symmetrization_gap(1 + e * zeta, smooth, Params(mu, e), g)) / g.norm(smooth) for e in eps_axis]
    rows.append({"quantity": f"symmetrization gap slope in eps (mu={mu:g}, recorded only)",
                 "value": float(np.polyfit(np.log(eps_axis), np.log(egaps), 1)[0])})
    return Outcome({"operators": rows}, checks)


# ---------------------------------------------------------------------------
# multipliers

def multiplier_check(mus=(0.01, 0.1, 1.0, 4.0), xi_max=20.0, n_samples=200, identity_tol=1e-13,
                     tanh4_range=(0.08, 0.14), seed=0) -> Outcome:
    rng = np.random.default_rng(seed)
    x = np.concatenate([np.logspace(-8, 3, 4001), rng.uniform(0, 50, 2000)])
    F1, F2, F3 = tanhc(x), f2_of_x(x), f3_of_x(x)
    id213 = float(np.max(np.abs(F1 - (1 - x * x / 3 * F2))))
    id216 = float(np.max(np.abs(F3 * F1 - F2) / F2))
    checks = [
        Check("tanh(x)/x = 1 - (x^2/3) F2", id213 <= identity_tol, f"{id213:.2e}", f"<= {identity_tol:g}"),
        Check("F3 F1 = F2", id216 <= identity_tol, f"{id216:.2e} (relative)", f"<= {identity_tol:g}"),
    ]
    bound_rows = []
    worst_third, worst_sharp = -np.inf, -np.inf
    xi_log = np.logspace(-6, 4, 2001)
    for mu in mus:
        P = Params(mu, 0.0)
        r1 = float(np.max(f3_bound_residual(xi_log, P)))
        r2 = float(np.max(f3_sharp_bound_residual(xi_log, P)))
        worst_third, worst_sharp = max(worst_third, r1), max(worst_sharp, r2)
        bound_rows.append({"mu": mu, "F3_bound_residual_max": r1, "F3_sharp_bound_residual_max": r2})
    checks.append(Check("F3 <= 1/(1 + sqrt(mu)|xi|/3) on the log grid", worst_third <= 0,
                        f"max residual {worst_third:.3f}", "<= 0", table="multiplier_f3_bounds"))
    checks.append(Check("F3 <= 3/(1 + sqrt(mu)|xi|) on the log grid", worst_sharp <= 0,
                        f"max residual {worst_sharp:.2e}", "<= 0", table="multiplier_f3_bounds"))
    taylor_rows = []
    all_stable = True
    tanh4 = []
    for mu in mus:
        rep = check_taylor_bounds(Params(mu, 0.0), xi_max=min(xi_max, 1 / np.sqrt(mu)), n_samples=n_samples)
        all_stable &= rep.passed
        tanh4.append(rep.constants["tanh_order4"])
        for k in rep.constants:
            taylor_rows.append({"mu": mu, "bound": k, "constant": rep.constants[k],
                                "constant_doubled": rep.constants_doubled[k], "rel_change": rep.relative_change[k]})
    worst_change = max(r["rel_change"] for r in taylor_rows)
    checks.append(Check("small-x expansion constants finite and stable under doubling", all_stable,
                        f"worst change {100 * worst_change:.2f}%", "< 5%", table="multiplier_taylor"))
    lo, hi = tanh4_range
    ok4 = all(lo <= c <= hi for c in tanh4)
    checks.append(Check("fourth-order tanh constant", ok4, ", ".join(f"{c:.4f}" for c in tanh4), f"in [{lo}, {hi}]",
                        table="multiplier_taylor"))

    xi = np.linspace(0, xi_max, 401)
    P = Params(mus[len(mus) // 2], 0.0)
    xs = np.sqrt(P.mu) * xi
    symbols_rows = [{"xi": a, "F1": b, "F2": c, "F3": d, "sqrtF3": np.sqrt(d), "F0(z=-1)": e, "mu": P.mu}
                    for a, b, c, d, e in zip(xi, tanhc(xs), f2_of_x(xs), f3_of_x(xs), f0_of_x(-1.0, xs))]
    return Outcome({"multiplier_symbols": symbols_rows, "multiplier_f3_bounds": bound_rows,
                    "multiplier_taylor": taylor_rows}, checks)


# ---------------------------------------------------------------------------
# conservation, gradients, time-step convergence

def relative_mass_drift(m0, m1, zeta0, grid):
    """Mass change normalised by ``max(|int zeta|, int |zeta|)`` (zero-mean data has zero mass)."""
    scale = max(abs(m0), grid.integrate(np.abs(zeta0)))
    return abs(m1 - m0) / scale


def conservation_check(kind=ModelKind.FDGN1, n=128, mu=0.3, eps=0.1, dt=1e-3, steps=1000, amplitude=0.5,
                       mass_tol=1e-12, energy_tol=1e-8, nz=24) -> Outcome:
    g = Grid1D(n)
    m = Model(kind, g, Params(mu, eps), nz=nz)
    z0, p0 = amplitude * np.cos(g.x), amplitude * np.sin(g.x)
    s0 = m.make_state(z0, p0)
    t0 = time.perf_counter()
    _, rows = integrate(m, s0, StepperConfig(dt, dt * steps, record_every=max(steps // 20, 1)))
    secs = time.perf_counter() - t0
    md = max(relative_mass_drift(rows[0].mass, r.mass, z0, g) for r in rows)
    ed = max(abs(r.energy - rows[0].energy) / abs(rows[0].energy) for r in rows)
    table = [r.as_row() for r in rows]
    return Outcome({f"conservation_{kind.value}": table}, [
        Check(f"{kind.value} mass drift over {steps} steps", md < mass_tol, f"{md:.2e}", f"< {mass_tol:g}"),
        Check(f"{kind.value} energy drift over {steps} steps", ed < energy_tol, f"{ed:.2e} ({secs:.1f} s)",
              f"< {energy_tol:g}"),
    ])


def variational_suite(n=64, mu=0.3, eps=0.2, h_fd=1e-5, n_directions=5, seed=0, tol=1e-6) -> Outcome:
    g = Grid1D(n)
    x = g.x
    st = PsiState(0.5 * np.cos(x) + 0.2 * np.sin(2 * x), np.sin(x) + 0.3 * np.cos(2 * x))
    P = Params(mu, eps)
    rows, checks = [], []
    for which in ("app1", "app2", "wb", "mass", "momentum"):
        err = variational_check(which, st, P, g, h_fd=h_fd, n_directions=n_directions, seed=seed)
        rows.append({"functional": which, "mu": mu, "eps": eps, "rel_err": err})
        checks.append(Check(f"gradient of {which}", err < tol, f"{err:.2e}", f"< {tol:g}"))
    # quadratic functional: the centred difference is exact for any step, so a
    # large one keeps roundoff out of the comparison
    err0 = variational_check("app1", st, Params(mu, 0.0), g, h_fd=1e-2, n_directions=n_directions, seed=seed)
    rows.append({"functional": "app1", "mu": mu, "eps": 0.0, "rel_err": err0})
    checks.append(Check("gradient of app1 at eps=0 (quadratic)", err0 < 1e-10, f"{err0:.2e}", "< 1e-10"))
    return Outcome({"variational": rows}, checks)


def convergence_suite(models=tuple(ModelKind), n=32, nz=16, dt=0.1, t_end=0.8, mu=0.3, mu_classical=0.01,
                      eps=0.2, target=(4.0, 0.2), jobs=1) -> Outcome:
    """RK4 order from dt-halving triples.

    Classical baselines run at ``mu_classical``: their ``1 - mu xi^2/3``
    multiplier turns negative above ``xi = sqrt(3/mu)`` and the resulting
    growing modes would swamp the time-stepping error on this grid.
    """
    items = [(ModelKind(k), n, nz, dt, t_end, mu_classical if ModelKind(k).classical else mu, eps) for k in models]
    res = _pool_map(_convergence_point, items, jobs)
    rows, checks = [], []
    lo, hi = target[0] - target[1], target[0] + target[1]
    for (kind, *_rest), (order, e1, e2, m) in zip(items, res):
        rows.append({"model": kind.value, "mu": m, "order": order, "diff_dt": e1, "diff_dt2": e2})
        checks.append(Check(f"{kind.value} RK4 self-convergence order", lo <= order <= hi, f"{order:.3f}",
                            f"{target[0]} +/- {target[1]}"))
    return Outcome({"self_convergence": rows}, checks)


def _convergence_point(args):
    kind, n, nz, dt, t_end, mu, eps = args
    g = Grid1D(n)
    m = Model(kind, g, Params(mu, eps), nz=nz)
    s0 = m.make_state(0.5 * np.cos(g.x), 0.5 * np.sin(g.x))
    order, e1, e2 = self_convergence_order(m, s0, dt, t_end)
    return order, e1, e2, mu


def mass_all_models(models=tuple(ModelKind), n=32, nz=16, steps=200, dt=1e-2, mu=0.3, mu_classical=0.01,
                    eps=0.1, tol=1e-12) -> Outcome:
    rows, checks = [], []
    for kind in map(ModelKind, models):
        g = Grid1D(n)
        m = Model(kind, g, Params(mu_classical if kind.classical else mu, eps), nz=nz)
        z0 = 0.5 * np.cos(g.x) + 0.1
        s0 = m.make_state(z0, 0.5 * np.sin(g.x))
        s, _ = integrate(m, s0, StepperConfig(dt, dt * steps), diagnose=False)
        md = relative_mass_drift(g.integrate(z0), g.integrate(s.zeta), z0, g)
        row = {"model": kind.value, "steps": steps, "mass_drift": md}
        if kind.v_form:
            # int h Vbar has no known conservation law here, so the drift is only recorded
            a, b = (g.integrate((1 + m.params.eps * q.zeta) * m.velocity(q)) for q in (s0, s))
            row["int_hV_drift"] = abs(b - a) / max(abs(a), 1e-300)
        rows.append(row)
        checks.append(Check(f"{kind.value} mass drift over {steps} steps", md < tol, f"{md:.2e}", f"< {tol:g}"))
    return Outcome({"mass_all_models": rows}, checks)
