"""Classical fourth-order Runge-Kutta stepping with diagnostics."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .conserved import Diagnostics, diagnostics
from .errors import BlowUpError, DomainError
from .models import Model, omega2_model

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StepperConfig:
    dt: float
    t_end: float
    record_every: int = 1
    scheme: str = "RK4"

    def __post_init__(self):
        if not self.dt > 0:
            raise DomainError(f"dt must be positive, got {self.dt}")
        if not self.t_end >= 0:
            raise DomainError(f"t_end must be non-negative, got {self.t_end}")
        if self.record_every < 1:
            raise DomainError("record_every must be >= 1")
        if self.scheme.upper() != "RK4":
            raise DomainError(f"unknown scheme {self.scheme!r}; only RK4 is available")


def default_dt(model: Model, cfl=0.5):
    """``cfl / omega_max`` over the resolved wavenumbers."""
    xi = model.grid.xi_half[1:]
    w2 = np.abs(omega2_model(model.kind, xi, model.params))
    return cfl / float(np.sqrt(w2.max()))


def _axpy(state, a, k):
    return type(state)(*(s + a * d for s, d in zip(state, k)))


def step(model: Model, state, dt, t=0.0):
    """One RK4 step. Raises :class:`BlowUpError` on non-finite stages."""
    k1 = model.rhs(state)
    k2 = model.rhs(_axpy(state, dt / 2, k1))
    k3 = model.rhs(_axpy(state, dt / 2, k2))
    k4 = model.rhs(_axpy(state, dt, k3))
    for k in (k1, k2, k3, k4):
        if not all(np.all(np.isfinite(f)) for f in k):
            raise BlowUpError(f"non-finite stage in step starting at t={t:.6g}", t=t)
    new = type(state)(*(s + dt / 6 * (a + 2 * b + 2 * c + d) for s, a, b, c, d in zip(state, k1, k2, k3, k4)))
    model.check(new, t + dt)
    return new


def integrate(model: Model, state0, cfg: StepperConfig,
              sink: Optional[Callable[[Diagnostics], None]] = None, diagnose=True):
    """Advance ``state0`` to ``cfg.t_end``.

    The last step is shortened to land exactly on ``t_end``.  Diagnostics are
    emitted at ``t = 0``, every ``record_every`` steps and at the final time.
    On failure the raised :class:`BlowUpError` carries the rows recorded so far
    in ``partial``.

    Returns
    -------
    state, list of Diagnostics
    """
    model.check(state0, 0.0)
    rows = []

    def emit(s, t):
        if not diagnose:
            return
        d = diagnostics(model, s, t)
        rows.append(d)
        if sink is not None:
            sink(d)

    emit(state0, 0.0)
    nsteps = int(np.ceil(cfg.t_end / cfg.dt - 1e-12)) if cfg.t_end > 0 else 0
    state, t = state0, 0.0
    for i in range(1, nsteps + 1):
        dt = min(cfg.dt, cfg.t_end - t) if i == nsteps else cfg.dt
        try:
            state = step(model, state, dt, t)
        except (BlowUpError, DomainError) as exc:
            log.error("integration stopped at t=%.6g: %s", t, exc)
            exc.partial = rows
            raise
        t = cfg.t_end if i == nsteps else t + dt
        if i % cfg.record_every == 0 or i == nsteps:
            emit(state, t)
    return state, rows


def self_convergence_order(model: Model, state0, dt, t_end):
    """Observed order from runs at ``dt``, ``dt/2``, ``dt/4`` (max-norm differences)."""
    finals = []
    for m in (1, 2, 4):
        s, _ = integrate(model, state0, StepperConfig(dt / m, t_end), diagnose=False)
        finals.append(np.concatenate(s))
    e1 = np.max(np.abs(finals[0] - finals[1]))
    e2 = np.max(np.abs(finals[1] - finals[2]))
    return float(np.log2(e1 / e2)), float(e1), float(e2)
