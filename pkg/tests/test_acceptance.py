"""Acceptance criteria, one test and one PASS/FAIL line each.

The lines are printed as each test runs (visible with ``-s``) and again in a
summary section at the end of the pytest session.  Running this file as a
script prints them directly.
"""
import time

import numpy as np
import pytest

from fulldisp.harness import experiments as ex
from fulldisp.models import ModelKind

from conftest import ACCEPTANCE_LINES

SWEEP = (0.05, 0.1, 0.2, 0.4)
FULL = (ModelKind.FDGN1, ModelKind.FDGN2, ModelKind.FDGN_DIT, ModelKind.WB)


def report(number, title, outcomes, started):
    checks = [c for oc in outcomes for c in oc.checks]
    failed = [c for c in checks if not c.passed]
    secs = time.perf_counter() - started
    verdict = "PASS" if not failed else "FAIL"
    detail = f"{len(checks) - len(failed)}/{len(checks)} checks, {secs:.1f} s"
    if failed:
        detail += "; failing: " + "; ".join(f"{c.name} = {c.measured} (target {c.target})" for c in failed)
    line = f"{verdict}  criterion {number:2d} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failed, line


def test_01_flat_dtn_oracle():
    t = time.perf_counter()
    report(1, "flat DtN oracle", [ex.flat_dtn_check((0.01, 0.1, 1.0), n=128, nz=24, tol=1e-10, time_budget=1.0)], t)


def test_02_fd_oracle_order():
    t = time.perf_counter()
    report(2, "FD oracle mutual convergence", [ex.fd_oracle_check(0.3, 0.1, n=64, nz=24, amplitude=0.5)], t)


def test_03_velocity_approximation_slopes():
    t = time.perf_counter()
    rep = ex.vbar_sweep(SWEEP, SWEEP, n=64, nz=24, amplitude=0.25, tol=0.3)
    assert time.perf_counter() - t < 300
    report(3, "velocity approximation slopes", [rep.outcome()], t)


def test_04_consistency_slopes():
    t = time.perf_counter()
    models = FULL + (ModelKind.GN1_CLASSICAL,)
    rep, extra = ex.consistency_sweep(models, SWEEP, SWEEP, n=64, nz=24, amplitude=0.25, tol=0.3)
    report(4, "consistency slopes and FDGN1 < GN1-classical", [rep.outcome(), extra], t)


def test_05_dispersion_exactness():
    t = time.perf_counter()
    models = FULL + (ModelKind.GN1_CLASSICAL, ModelKind.GN2_CLASSICAL, ModelKind.WB_CLASSICAL)
    report(5, "linear dispersion", [ex.dispersion_check(models, n=64, mu=0.3, delta=1e-8, tol=1e-6)], t)


def test_06_conservation_and_rk4_order():
    t = time.perf_counter()
    report(6, "conservation and RK4 order", [
        ex.conservation_check(ModelKind.FDGN1, n=128, mu=0.3, eps=0.1, dt=1e-3, steps=1000,
                              mass_tol=1e-12, energy_tol=1e-8),
        ex.convergence_suite(tuple(ModelKind)),
    ], t)


def test_07_gradient_check():
    t = time.perf_counter()
    out = ex.variational_suite(n=64, mu=0.3, eps=0.2, h_fd=1e-5, tol=1e-6)
    out.checks = [c for c in out.checks if c.name in ("gradient of app1", "gradient of app2")]
    report(7, "variational derivatives of H_app1 and H_app2", [out], t)


def test_08_multiplier_suite():
    t = time.perf_counter()
    report(8, "multiplier identities, F3 bound, Taylor constants", [ex.multiplier_check()], t)


def test_09_operator_algebra():
    t = time.perf_counter()
    report(9, "operator algebra", [ex.operator_algebra_check(n=64, mu=0.3, eps=0.2)], t)


def test_10_hamiltonian_order():
    t = time.perf_counter()
    rep, flat = ex.hamiltonian_sweep(SWEEP, SWEEP, n=64, nz=24, amplitude=0.05, tol=0.3, flat_tol=1e-12)
    report(10, "Hamiltonian approximation order", [rep.outcome(), flat], t)


if __name__ == "__main__":
    import sys

    code = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                code = 1
    sys.exit(code)
