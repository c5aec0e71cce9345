"""Command-line entry point.

Exit codes: 0 when every declared check passes, 1 when a check fails or a run
aborts, 2 for configuration or input-file errors.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from .. import __version__
from ..errors import BlowUpError, ConfigError, DomainError, FulldispError, SnapshotError
from ..models import Model, ModelKind
from ..multipliers import Params
from ..spectral import Grid1D
from ..timeint import StepperConfig, default_dt, integrate
from . import experiments as ex
from .config import RunConfig, defaults, load_config, validate
from .initial import make_initial
from .output import CsvSink, gnuplot_script, write_table
from .snapshot import check_resume, read_snapshot, write_snapshot

log = logging.getLogger("fulldisp")

LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _setup_logging():
    raw = os.environ.get("FULLDISP_LOG", "error").strip().lower()
    level = LOG_LEVELS.get(raw)
    logging.basicConfig(level=level or logging.ERROR, format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr, force=True)
    if level is None:
        log.error("FULLDISP_LOG=%r is not one of %s; using 'error'", raw, ", ".join(LOG_LEVELS))


# ---------------------------------------------------------------------------
# subcommands; each returns a list of Outcomes

def _sweep_axes(cfg: RunConfig):
    return cfg["sweep"]["mu"], cfg["sweep"]["eps"]


def cmd_simulate(cfg: RunConfig, out: Path, jobs: int, gnuplot: bool):
    g_ = cfg["grid"]
    p_ = cfg["params"]
    grid = Grid1D(g_["n"], g_["L"], dealias=g_["dealias"])
    params = Params(p_["mu"], p_["eps"], h_min=p_["h_min"], mu_max=p_["mu_max"])
    kind = cfg.model
    so = cfg["solver"]
    model = Model(kind, grid, params, nz=g_["nz"], tol=so["tol"], strip_max_iter=so["strip_max_iter"])
    ini = cfg["initial"]
    t0 = 0.0
    if ini["family"] == "snapshot":
        snap = read_snapshot(ini["path"])
        check_resume(snap, kind, grid.n, params.mu, params.eps)
        want = "w" if kind.v_form else "psi"
        if snap.second_name != want:
            raise SnapshotError(f"{ini['path']}: second column is {snap.second_name!r}, model needs {want!r}")
        state = model.state_type(snap.zeta, snap.second)
        t0 = snap.t
    else:
        zeta, psi = make_initial(grid, ini)
        state = model.make_state(zeta, psi)
    st = cfg["stepper"]
    dt = st["dt"] if st["dt"] is not None else default_dt(model, st["cfl"])
    duration = st["t_end"] - t0
    if duration < 0:
        raise ConfigError([f"[stepper] t_end = {st['t_end']} precedes the snapshot time {t0}"])
    prefix = cfg["output"]["prefix"]
    diag_path = out / f"{prefix}_diagnostics.csv"
    sink = CsvSink(diag_path, ["t", "mass", "momentum", "energy"], time_offset=t0)
    log.info("simulating %r with dt=%.3g from t=%.3g to %.3g", model, dt, t0, st["t_end"])
    checks = []
    started = time.perf_counter()
    try:
        final, rows = integrate(model, state, StepperConfig(dt, duration, st["record_every"], st["scheme"]), sink)
    except (BlowUpError, DomainError) as exc:
        # cavitation is a domain error; either way the diagnostics written so far are kept
        sink.close()
        t_stop = exc.partial[-1].time if getattr(exc, "partial", None) else 0.0
        checks.append(ex.Check("run reached t_end", False, f"stopped after t={t0 + t_stop:.6g}: {exc}",
                               f"t = {st['t_end']:g}", table=diag_path.stem))
        return [ex.Outcome(checks=checks)]
    sink.close()
    secs = time.perf_counter() - started
    second = final.w if kind.v_form else final.psi
    snap_path = write_snapshot(out / f"{prefix}_final.csv", grid.x, final.zeta, second, {
        "model": kind.value, "n": grid.n, "nz": g_["nz"], "L": grid.length, "mu": params.mu, "eps": params.eps,
        "t": st["t_end"], "dt": dt,
    }, second_name="w" if kind.v_form else "psi")
    log.info("final state written to %s", snap_path)
    md = ex.relative_mass_drift(rows[0].mass, rows[-1].mass, state.zeta, grid)
    # roundoff accumulates with the step count; the budget is per 1000 steps
    tol = cfg["energy"]["mass_tol"] * max(1.0, duration / dt / 1000)
    checks.append(ex.Check("run reached t_end", True, f"{duration / dt:.0f} steps in {secs:.2f} s",
                           f"t = {st['t_end']:g}", table=diag_path.stem))
    checks.append(ex.Check("mass drift", md < tol, f"{md:.2e}", f"< {tol:.1e}", table=diag_path.stem))
    if gnuplot:
        gnuplot_script(diag_path, "t", ["energy", "mass"], title=f"{kind.value} diagnostics")
    return [ex.Outcome(checks=checks)]


def cmd_dtn_check(cfg: RunConfig, out: Path, jobs: int, gnuplot: bool):
    d = cfg["dtn"]
    g = cfg["grid"]
    res = [
        ex.flat_dtn_check(d["flat_mu"], n=d["flat_n"], nz=g["nz"], tol=d["flat_tol"]),
        ex.fd_oracle_check(d["fd_mu"], d["fd_eps"], n=g["n"], nz=g["nz"], amplitude=cfg["initial"]["a"],
                           resolutions=d["fd_resolutions"]),
    ]
    if d["sweep"]:
        mus, epss = _sweep_axes(cfg)
        rep = ex.vbar_sweep(mus, epss, n=g["n"], nz=g["nz"], amplitude=cfg["sweep"]["amplitude"],
                            tol=cfg["sweep"]["slope_tol"], jobs=jobs)
        res.append(rep.outcome())
    return res


def cmd_consistency(cfg: RunConfig, out: Path, jobs: int, gnuplot: bool):
    mus, epss = _sweep_axes(cfg)
    g = cfg["grid"]
    rep, extra = ex.consistency_sweep(cfg["sweep"]["models"], mus, epss, n=g["n"], nz=g["nz"],
                                      amplitude=cfg["sweep"]["amplitude"], tol=cfg["sweep"]["slope_tol"], jobs=jobs)
    return [rep.outcome(), extra.tag()]


def cmd_dispersion(cfg: RunConfig, out: Path, jobs: int, gnuplot: bool):
    d = cfg["dispersion"]
    g, p = cfg["grid"], cfg["params"]
    return [
        ex.dispersion_check(d["models"], n=g["n"], mu=p["mu"], nz=g["nz"], kmax=d["kmax"], delta=d["delta"],
                            tol=d["tol"], length=g["L"]),
        ex.operator_algebra_check(n=g["n"], mu=p["mu"], eps=max(p["eps"], 0.2), seed=cfg["run"]["seed"],
                                  h_min=p["h_min"]),
    ]


def cmd_multiplier(cfg: RunConfig, out: Path, jobs: int, gnuplot: bool):
    m = cfg["multiplier"]
    return [ex.multiplier_check(xi_max=m["xi_max"], n_samples=m["n_samples"], identity_tol=m["identity_tol"],
                                seed=cfg["run"]["seed"])]


def cmd_energy(cfg: RunConfig, out: Path, jobs: int, gnuplot: bool):
    e, p, g, so = cfg["energy"], cfg["params"], cfg["grid"], cfg["solver"]
    mus, epss = _sweep_axes(cfg)
    rep, flat = ex.hamiltonian_sweep(mus, epss, n=g["n"], nz=g["nz"], amplitude=cfg["sweep"]["hamiltonian_amplitude"],
                                     tol=cfg["sweep"]["slope_tol"], jobs=jobs)
    return [
        ex.conservation_check(ModelKind.FDGN1, n=e["n"], mu=p["mu"],
                              eps=p["eps"], dt=e["dt"], steps=e["steps"], mass_tol=e["mass_tol"],
                              energy_tol=e["energy_tol"], nz=g["nz"]),
        ex.variational_suite(mu=e["var_mu"], eps=e["var_eps"], h_fd=so["h_fd"], n_directions=so["n_directions"],
                             seed=cfg["run"]["seed"]),
        ex.convergence_suite(e["convergence_models"], n=e["convergence_n"], nz=e["convergence_nz"],
                             dt=e["convergence_dt"], t_end=e["convergence_t_end"], mu=e["convergence_mu"],
                             mu_classical=e["convergence_mu_classical"], eps=e["convergence_eps"], jobs=jobs),
        ex.mass_all_models(e["convergence_models"], n=e["convergence_n"], nz=e["convergence_nz"],
                           mu=e["convergence_mu"], mu_classical=e["convergence_mu_classical"],
                           tol=e["mass_tol"]),
        rep.outcome(),
        flat.tag(),
    ]


COMMANDS = {
    "simulate": (cmd_simulate, "time integration with a diagnostics CSV and a final snapshot"),
    "dtn-check": (cmd_dtn_check, "strip-solver oracles and velocity-approximation slopes"),
    "consistency-sweep": (cmd_consistency, "consistency residual slopes of every model"),
    "dispersion-check": (cmd_dispersion, "linearised frequencies and linear-operator algebra"),
    "multiplier-check": (cmd_multiplier, "multiplier identities, bounds and small-x constants"),
    "energy-check": (cmd_energy, "conservation drift, gradient checks, RK4 order, Hamiltonian slopes"),
}

_GNUPLOT = {
    "dispersion": dict(x="xi", ys=["omega2_measured", "omega2_exact"], filter_col="model"),
    "dtn_fd_oracle": dict(x="dx", ys=["gap"], logscale=True),
    "multiplier_symbols": dict(x="xi", ys=["F1", "F2", "F3", "sqrtF3"]),
}


def _emit_gnuplot(path: Path, name: str, rows):
    spec = _GNUPLOT.get(name)
    if name.endswith("_points"):
        names = list(dict.fromkeys(r["err_name"] for r in rows))
        gnuplot_script(path, "mu", ["value"], logscale=True, filter_col=("err_name", names))
    elif spec:
        spec = dict(spec)
        if "filter_col" in spec:
            spec["filter_col"] = (spec["filter_col"], list(dict.fromkeys(r[spec["filter_col"]] for r in rows)))
        gnuplot_script(path, **spec)


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config_pos", nargs="?", metavar="config", help="INI configuration file")
    common.add_argument("--config", dest="config_opt", metavar="PATH", help="INI configuration file")
    common.add_argument("--out", metavar="DIR", help="output directory (overrides [output] dir)")
    common.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes for sweeps")
    common.add_argument("--emit-gnuplot", action="store_true", help="write a .gp script next to each table")
    ap = argparse.ArgumentParser(prog="fulldisp", description="Full-dispersion shallow-water models and checks.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, helptext) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=helptext, description=helptext)
    return ap


def main(argv=None) -> int:
    _setup_logging()
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:  # --help/--version exit 0, usage errors exit 2
        return 0 if not exc.code else 2
    if args.config_pos and args.config_opt and args.config_pos != args.config_opt:
        print(f"error: two different configs given ({args.config_pos}, {args.config_opt})", file=sys.stderr)
        return 2
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return 2
    path = args.config_pos or args.config_opt
    try:
        if path:
            cfg = load_config(path)
        else:
            cfg = defaults()
            problems = validate(cfg)
            if problems:
                raise ConfigError(problems)
    except ConfigError as exc:
        print(f"configuration error ({len(exc.problems)} problem(s)):", file=sys.stderr)
        for p in exc.problems:
            print(f"  {p}", file=sys.stderr)
        return 2

    out = Path(args.out or cfg["output"]["dir"])
    out.mkdir(parents=True, exist_ok=True)
    fn, _ = COMMANDS[args.command]
    try:
        outcomes = fn(cfg, out, args.jobs, args.emit_gnuplot)
    except (ConfigError, SnapshotError) as exc:
        msgs = exc.problems if isinstance(exc, ConfigError) else [str(exc)]
        for m in msgs:
            print(f"input error: {m}", file=sys.stderr)
        return 2
    except FulldispError as exc:
        print(f"FAIL  {args.command} aborted: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1

    paths = {}
    for oc in outcomes:
        for name, rows in oc.tables.items():
            p = write_table(out / f"{name}.csv", rows)
            paths[name] = p
            if args.emit_gnuplot and rows:
                _emit_gnuplot(p, name, rows)
    lines = []
    failed = []
    for oc in outcomes:
        oc.tag()
        for c in oc.checks:
            lines.append(c.line())
            if not c.passed:
                failed.append(c)
    summary = out / f"{args.command}_summary.txt"
    summary.write_text("\n".join(lines) + "\n")
    for ln in lines:
        print(ln)
    for c in failed:
        where = paths.get(c.table) or (out / f"{c.table}.csv")
        print(f"  failing table for '{c.name}': {where}", file=sys.stderr)
    verdict = "PASS" if not failed else f"FAIL ({len(failed)} of {len(lines)} checks)"
    print(f"{args.command}: {verdict}; tables in {out}")
    return 0 if not failed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
