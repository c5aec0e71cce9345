"""Dispersive Fourier multipliers and their pointwise bounds.

All symbols are functions of ``x = sqrt(mu) * |xi|``:

* ``F1 = tanh(x) / x``
* ``F2 = (3 / x^2) (1 - tanh(x) / x)``, so that ``1 - F1 = (x^2 / 3) F2``
* ``F3 = F2 / F1 = (3 / x^2) (x / tanh(x) - 1)``
* ``F0(z) = cosh((z + 1) x) / cosh(x)`` for ``z`` in ``[-1, 0]``

Differences such as ``1 - tanh(x)/x`` lose every significant digit as
``x -> 0``.  They are evaluated through ``g(x) = x cosh x - sinh x``, whose
Taylor series has only positive terms, so no branch suffers cancellation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
import numpy as np

from .errors import DomainError

TAYLOR_SWITCH = 1e-4  # below this x the 4-term Taylor polynomials are used
SERIES_SWITCH = 1.0  # below this x, g(x) comes from its power series
_G_TERMS = 14


@dataclass(frozen=True)
class Params:
    """Regime parameters.

    Parameters
    ----------
    mu : float
        Shallowness, ``0 < mu <= mu_max``.
    eps : float
        Nonlinearity, ``0 <= eps <= 1``.
    h_min : float
        Floor for the water depth ``h = 1 + eps * zeta``.
    """

    mu: float
    eps: float
    h_min: float = 0.1
    mu_max: float = 4.0

    def __post_init__(self):
        if not (0 < self.mu <= self.mu_max):
            raise DomainError(f"mu must lie in (0, {self.mu_max}], got {self.mu}")
        if not (0 <= self.eps <= 1):
            raise DomainError(f"eps must lie in [0, 1], got {self.eps}")
        if not (0 < self.h_min < 1):
            raise DomainError(f"h_min must lie in (0, 1), got {self.h_min}")

    @property
    def sqrt_mu(self) -> float:
        return float(np.sqrt(self.mu))


class SymbolKind(str, Enum):
    F0 = "F0"
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    SQRT_F3 = "SqrtF3"
    P = "P"
    INV_F1 = "InvF1"


# ---------------------------------------------------------------------------
# scalar kernels in x = sqrt(mu) |xi|

def _g_series(x):
    """``x cosh x - sinh x = sum_k 2k x^(2k+1) / (2k+1)!`` (all terms positive)."""
    x2 = x * x
    term = x**3 / 6.0
    out = 2.0 * term
    for k in range(2, _G_TERMS):
        term = term * x2 / ((2 * k) * (2 * k + 1))
        out = out + 2 * k * term
    return out


def _split(x):
    x = np.abs(np.asarray(x, dtype=float))
    tiny = x < TAYLOR_SWITCH
    mid = (~tiny) & (x < SERIES_SWITCH)
    big = x >= SERIES_SWITCH
    return x, tiny, mid, big


def tanhc(x):
    """``tanh(x) / x`` with the removable singularity filled in."""
    x, tiny, _, _ = _split(x)
    out = np.empty_like(x)
    t = x[tiny] ** 2
    out[tiny] = 1 - t / 3 + 2 * t**2 / 15 - 17 * t**3 / 315
    xs = x[~tiny]
    out[~tiny] = np.tanh(xs) / xs
    return out


def f2_of_x(x):
    """``(3 / x^2) (1 - tanh(x) / x)``."""
    x, tiny, mid, big = _split(x)
    out = np.empty_like(x)
    t = x[tiny] ** 2
    out[tiny] = 1 - 2 * t / 5 + 17 * t**2 / 105 - 62 * t**3 / 945
    xm = x[mid]
    # 1 - tanh(x)/x = g(x) / (x cosh x)
    out[mid] = 3 * _g_series(xm) / (xm**3 * np.cosh(xm))
    xb = x[big]
    out[big] = 3 / xb**2 * (1 - np.tanh(xb) / xb)
    return out


def f3_of_x(x):
    """``(3 / x^2) (x / tanh(x) - 1)``."""
    x, tiny, mid, big = _split(x)
    out = np.empty_like(x)
    t = x[tiny] ** 2
    out[tiny] = 1 - t / 15 + 2 * t**2 / 315 - t**3 / 1575
    xm = x[mid]
    # x coth x - 1 = g(x) / sinh x
    out[mid] = 3 * _g_series(xm) / (xm**2 * np.sinh(xm))
    xb = x[big]
    out[big] = 3 / xb**2 * (xb / np.tanh(xb) - 1)
    return out


def f0_of_x(z, x):
    """``cosh((z+1) x) / cosh(x)`` without overflow."""
    z = float(z)
    if not (-1.0 <= z <= 0.0):
        raise DomainError(f"vertical coordinate must lie in [-1, 0], got {z}")
    x = np.abs(np.asarray(x, dtype=float))
    return np.exp(z * x) * (1 + np.exp(-2 * (z + 1) * x)) / (1 + np.exp(-2 * x))


def one_minus_f0_of_x(z, x):
    """``1 - F0``, written as a product of sinh terms so it keeps full relative precision."""
    z = float(z)
    if not (-1.0 <= z <= 0.0):
        raise DomainError(f"vertical coordinate must lie in [-1, 0], got {z}")
    x = np.abs(np.asarray(x, dtype=float))
    # cosh x - cosh((z+1)x) = 2 sinh(a) sinh(b)
    a = 0.5 * (2 + z) * x
    b = -0.5 * z * x
    # a + b = x, so the exponential prefactors cancel
    return np.expm1(-2 * a) * np.expm1(-2 * b) / (1 + np.exp(-2 * x))


# ---------------------------------------------------------------------------
# public symbol evaluators (functions of xi and the regime parameters)

def _x(xi, params):
    mu = params.mu if isinstance(params, Params) else float(params)
    return np.sqrt(mu) * np.abs(np.asarray(xi, dtype=float))


def eval_F1(xi, params):
    return tanhc(_x(xi, params))


def eval_F2(xi, params):
    return f2_of_x(_x(xi, params))


def eval_F3(xi, params):
    return f3_of_x(_x(xi, params))


def eval_sqrtF3(xi, params):
    return np.sqrt(f3_of_x(_x(xi, params)))


def eval_F0(z, xi, params):
    return f0_of_x(z, _x(xi, params))


def eval_invF1(xi, params):
    return 1.0 / tanhc(_x(xi, params))


def eval_P(xi, params):
    """Diagnostic symbol ``|xi| / (1 + sqrt(mu)|xi|)^(1/2)``."""
    xi = np.abs(np.asarray(xi, dtype=float))
    return xi / np.sqrt(1 + _x(xi, params))


def symbol(kind, params, z=None):
    """Return a vectorised callable ``xi -> value`` for use with ``Grid1D.apply_multiplier``."""
    kind = SymbolKind(kind)
    if kind is SymbolKind.F0:
        if z is None:
            raise DomainError("F0 needs a vertical coordinate z")
        f0_of_x(z, 0.0)  # validates z eagerly
        return lambda xi: eval_F0(z, xi, params)
    table = {
        SymbolKind.F1: eval_F1,
        SymbolKind.F2: eval_F2,
        SymbolKind.F3: eval_F3,
        SymbolKind.SQRT_F3: eval_sqrtF3,
        SymbolKind.P: eval_P,
        SymbolKind.INV_F1: eval_invF1,
    }
    fn = table[kind]
    return lambda xi: fn(xi, params)


# ---------------------------------------------------------------------------
# pointwise bound checks

def f3_bound_residual(xi, params):
    """``F3 (1 + x/3) - 1``; the bound ``F3 <= 1/(1 + x/3)`` holds where this is <= 0 (it fails near x = 2.45)."""
    x = _x(xi, params)
    return f3_of_x(x) * (1 + x / 3) - 1


def f3_sharp_bound_residual(xi, params):
    """``F3 (1 + x) / 3 - 1``, nonpositive for every x (``(1+x) F3`` increases to 3)."""
    x = _x(xi, params)
    return f3_of_x(x) * (1 + x) / 3 - 1


def _taylor_residuals(x, z_levels):
    """Scaled residuals ``|r(x)| / x^order`` of the small-x expansions."""
    x2 = x * x
    f2 = f2_of_x(x)
    out = {
        # tanh(x)/x - 1 = -(x^2/3) F2
        "tanh_order2": (x2 / 3) * f2 / x2,
        "F2_order2": np.abs(f2 - 1) / x2,
        "F3_order2": np.abs(f3_of_x(x) - 1) / x2,
        # tanh(x)/x - 1 + x^2/3 = (x^2/3)(1 - F2)
        "tanh_order4": np.abs(1 - f2) / (3 * x2),
    }
    f0a = np.zeros_like(x)
    f0b = np.zeros_like(x)
    for z in z_levels:
        om = one_minus_f0_of_x(z, x)
        f0a = np.maximum(f0a, np.abs(om / x2 + z * z / 2 + z) / x2)
        # 1 - (z+1)^2 F0 + z^2 + 2z = (z+1)^2 (1 - F0)
        f0b = np.maximum(f0b, np.abs((z + 1) ** 2 * om) / x2)
    out["F0_order2"] = f0a
    out["F0_weighted_order2"] = f0b
    return out


@dataclass
class TaylorReport:
    """Fitted constants ``sup |residual| / x^order`` for each small-x bound."""

    constants: dict
    constants_doubled: dict
    relative_change: dict
    f3_bound_max: float
    f3_sharp_bound_max: float
    passed: bool
    notes: list = field(default_factory=list)


def check_taylor_bounds(params, xi_max, n_samples=200, z_levels=(-1.0, -0.75, -0.5, -0.25)):
    """Fit the constants of the small-x multiplier expansions.

    Samples ``xi`` uniformly in ``(0, xi_max]`` (``x = sqrt(mu) xi``) and
    reports ``sup |r| / x^order`` for each expansion. A constant passes when
    it is finite and moves by less than 5% when the sample count doubles.
    """
    if xi_max <= 0:
        raise DomainError("xi_max must be positive")
    if n_samples < 100:
        raise DomainError("n_samples must be at least 100")

    def sup(n):
        xi = np.linspace(xi_max / n, xi_max, n)
        res = _taylor_residuals(_x(xi, params), z_levels)
        return {k: float(np.max(v)) for k, v in res.items()}

    c1 = sup(n_samples)
    c2 = sup(2 * n_samples)
    change = {k: abs(c2[k] - c1[k]) / max(abs(c1[k]), 1e-300) for k in c1}
    ok = all(np.isfinite(c1[k]) and np.isfinite(c2[k]) and change[k] < 0.05 for k in c1)
    xi_log = np.logspace(-6, 4, 2001)
    return TaylorReport(
        constants=c1,
        constants_doubled=c2,
        relative_change=change,
        f3_bound_max=float(np.max(f3_bound_residual(xi_log, params))),
        f3_sharp_bound_max=float(np.max(f3_sharp_bound_residual(xi_log, params))),
        passed=bool(ok),
    )


def taylor_residuals_at_zero():
    """Every expansion residual evaluated at ``x = 0``."""
    x = np.zeros(1)
    out = {
        "tanh": tanhc(x)[0] - 1,
        "F2": f2_of_x(x)[0] - 1,
        "F3": f3_of_x(x)[0] - 1,
    }
    for z in (-1.0, -0.5, 0.0):
        out[f"F0(z={z})"] = float(one_minus_f0_of_x(z, x)[0])
    return out
