"""Log-log least-squares fits for convergence and scaling studies."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..errors import FulldispError


class FlooredError(FulldispError, ValueError):
    """A measured error is zero or negative: it hit solver tolerance, so no slope exists."""


def _logs(values, name):
    v = np.asarray(values, dtype=float)
    if np.any(~np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite values")
    if np.any(v <= 0):
        raise FlooredError(f"{name} has non-positive entries (floored at solver tolerance?)")
    return np.log(v)


@dataclass
class SlopeFit:
    slope: float
    intercept: float
    r2: float
    band95: float  # half-width of the 95% confidence interval on the slope
    npoints: int

    def within(self, expected, tol):
        return abs(self.slope - expected) <= tol


def fit_slope_detail(xs, ys) -> SlopeFit:
    lx = _logs(xs, "xs")
    ly = _logs(ys, "ys")
    if lx.size < 4 or lx.size != ly.size:
        raise ValueError("slope fits need at least 4 paired points")
    res = stats.linregress(lx, ly)
    dof = lx.size - 2
    band = float(stats.t.ppf(0.975, dof) * res.stderr)
    r2 = float(res.rvalue**2) if np.ptp(ly) > 0 else 1.0
    return SlopeFit(float(res.slope), float(res.intercept), r2, band, int(lx.size))


def fit_slope(xs, ys):
    """Least-squares slope of ``log ys`` against ``log xs``.

    Returns
    -------
    (slope, intercept, r2)
    """
    f = fit_slope_detail(xs, ys)
    return f.slope, f.intercept, f.r2


@dataclass
class PlaneFit:
    """``log y = c + p log mu + q log eps`` fitted jointly over a 2-D sweep."""

    slope_mu: float
    slope_eps: float
    intercept: float
    band_mu: float
    band_eps: float
    r2: float
    npoints: int


def fit_power_law(mus, epss, ys) -> PlaneFit:
    lm = _logs(mus, "mu")
    le = _logs(epss, "eps")
    ly = _logs(ys, "errors")
    if ly.size < 4:
        raise ValueError("need at least 4 points")
    A = np.column_stack([np.ones_like(lm), lm, le])
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - A @ coef
    dof = max(ly.size - 3, 1)
    s2 = float(resid @ resid) / dof
    cov = s2 * np.linalg.pinv(A.T @ A)
    tq = stats.t.ppf(0.975, dof)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1 - float(resid @ resid) / ss_tot if ss_tot > 0 else 1.0
    return PlaneFit(
        slope_mu=float(coef[1]),
        slope_eps=float(coef[2]),
        intercept=float(coef[0]),
        band_mu=float(tq * np.sqrt(cov[1, 1])),
        band_eps=float(tq * np.sqrt(cov[2, 2])),
        r2=r2,
        npoints=int(ly.size),
    )
