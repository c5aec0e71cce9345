"""INI run configuration with line-anchored, aggregated validation.

Every section and key is optional; omitted keys fall back to the defaults in
``SCHEMA``.  Unknown sections or keys are errors, so a typo cannot silently
leave a default in place.
"""
from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np

from ..errors import ConfigError
from ..models import ModelKind

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _bool(s):
    v = s.strip().lower()
    if v in _TRUE:
        return True
    if v in _FALSE:
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _floats(s):
    items = [t for t in re.split(r"[,\s]+", s.strip()) if t]
    if not items:
        raise ValueError("expected a comma-separated list of numbers")
    return [float(t) for t in items]


def _models(s):
    out = [ModelKind(t.strip()) for t in s.split(",") if t.strip()]
    if not out:
        raise ValueError("expected at least one model tag")
    return out


def _model(s):
    return ModelKind(s.strip())


def _dt(s):
    return None if s.strip().lower() == "auto" else float(s)


def _str(s):
    return s.strip()


def _resolutions(s):
    """``128x64, 256x128`` -> [(128, 64), (256, 128)]."""
    out = []
    for tok in s.split(","):
        a, _, b = tok.strip().lower().partition("x")
        out.append((int(a), int(b)))
    return out


# section -> key -> (parser, default)
SCHEMA: dict[str, dict[str, tuple[Callable[[str], Any], Any]]] = {
    "run": {"model": (_model, ModelKind.FDGN1), "seed": (int, 0)},
    "grid": {"n": (int, 64), "nz": (int, 24), "L": (float, 2 * np.pi), "dealias": (_bool, True)},
    "params": {"mu": (float, 0.3), "eps": (float, 0.1), "h_min": (float, 0.1), "mu_max": (float, 4.0)},
    "initial": {
        "family": (_str, "cosine"),
        "a": (float, 0.5),
        "k": (int, 1),
        "b": (float, 0.5),
        "m": (int, 1),
        "phase": (float, 0.0),
        "width": (float, 0.5),
        "center": (float, np.pi),
        "kmax": (float, -1.0),
        "path": (_str, ""),
    },
    "stepper": {"dt": (_dt, None), "t_end": (float, 1.0), "record_every": (int, 10), "scheme": (_str, "RK4"),
                "cfl": (float, 0.5)},
    "solver": {"tol": (float, 1e-12), "strip_max_iter": (int, 200), "delta_t": (float, 1e-4),
               "h_fd": (float, 1e-5), "n_directions": (int, 5)},
    "output": {"dir": (_str, "fulldisp-out"), "prefix": (_str, "run")},
    "sweep": {
        "mu": (_floats, [0.05, 0.1, 0.2, 0.4]),
        "eps": (_floats, [0.05, 0.1, 0.2, 0.4]),
        "models": (_models, [ModelKind.FDGN1, ModelKind.FDGN2, ModelKind.FDGN_DIT, ModelKind.WB,
                             ModelKind.GN1_CLASSICAL]),
        "amplitude": (float, 0.25),
        "hamiltonian_amplitude": (float, 0.05),
        "slope_tol": (float, 0.3),
    },
    "dtn": {
        "flat_mu": (_floats, [0.01, 0.1, 1.0]),
        "flat_n": (int, 128),
        "flat_tol": (float, 1e-10),
        "fd_mu": (float, 0.3),
        "fd_eps": (float, 0.1),
        "fd_resolutions": (_resolutions, [(128, 64), (256, 128), (512, 256)]),
        "sweep": (_bool, True),
    },
    "dispersion": {"models": (_models, list(ModelKind)), "kmax": (int, 0), "delta": (float, 1e-8),
                   "tol": (float, 1e-6)},
    "multiplier": {"xi_max": (float, 20.0), "n_samples": (int, 200), "identity_tol": (float, 1e-13)},
    "energy": {
        "n": (int, 128),
        "steps": (int, 1000),
        "dt": (float, 1e-3),
        "mass_tol": (float, 1e-12),
        "energy_tol": (float, 1e-8),
        "var_mu": (float, 0.3),
        "var_eps": (float, 0.2),
        "convergence_models": (_models, list(ModelKind)),
        "convergence_n": (int, 32),
        "convergence_nz": (int, 16),
        "convergence_dt": (float, 0.1),
        "convergence_t_end": (float, 0.8),
        "convergence_mu": (float, 0.3),
        "convergence_mu_classical": (float, 0.01),
        "convergence_eps": (float, 0.2),
    },
}


@dataclass
class RunConfig:
    """Parsed configuration: ``values[section][key]`` plus the source line of each key."""

    values: dict
    lines: dict = field(default_factory=dict)
    source: Optional[str] = None

    def __getitem__(self, section):
        return self.values[section]

    def line_of(self, section, key):
        return self.lines.get((section, key))

    @property
    def model(self) -> ModelKind:
        return self.values["run"]["model"]


def defaults() -> RunConfig:
    return RunConfig({s: {k: (list(v) if isinstance(v, list) else v) for k, (_, v) in keys.items()}
                      for s, keys in SCHEMA.items()})


_SECTION = re.compile(r"^\s*\[([^\]]+)\]")
_KEY = re.compile(r"^\s*([^=:#;\s\[][^=:]*?)\s*[=:]")


def _line_map(text):
    out = {}
    section = None
    for i, line in enumerate(text.splitlines(), start=1):
        m = _SECTION.match(line)
        if m:
            section = m.group(1).strip()
            out.setdefault((section, None), i)
            continue
        m = _KEY.match(line)
        if m and section is not None:
            out[(section, m.group(1).strip())] = i
    return out


def _where(lines, section, key=None, source=None):
    ln = lines.get((section, key)) or lines.get((section, None))
    prefix = f"{source}:" if source else ""
    return f"{prefix}{ln}: " if ln else prefix + ("" if not prefix else " ")


def parse_config(text: str, source: Optional[str] = None) -> RunConfig:
    """Parse INI text; raises :class:`ConfigError` listing every problem found."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    cp.optionxform = str  # keep "L" distinct from "l"
    try:
        cp.read_string(text, source=source or "<config>")
    except configparser.Error as exc:
        ln = getattr(exc, "lineno", None)
        msg = f"{source or '<config>'}:{ln}: {exc.message}" if ln else str(exc)
        raise ConfigError([msg]) from None
    lines = _line_map(text)
    cfg = defaults()
    cfg.lines = lines
    cfg.source = source
    problems = []
    for section in cp.sections():
        if section not in SCHEMA:
            problems.append(f"{_where(lines, section, None, source)}unknown section [{section}]")
            continue
        for key, raw in cp.items(section):
            if key not in SCHEMA[section]:
                problems.append(f"{_where(lines, section, key, source)}unknown key '{key}' in [{section}]")
                continue
            parser, _ = SCHEMA[section][key]
            try:
                cfg.values[section][key] = parser(raw)
            except (ValueError, TypeError) as exc:
                problems.append(f"{_where(lines, section, key, source)}[{section}] {key} = {raw!r}: {exc}")
    problems.extend(validate(cfg))
    if problems:
        raise ConfigError(problems)
    return cfg


def load_config(path) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError([f"{path}: cannot read config ({exc.strerror})"]) from None
    return parse_config(text, source=str(p))


def validate(cfg: RunConfig) -> list:
    """Check module preconditions up front; returns a list of messages (empty when valid)."""
    v, problems = cfg.values, []

    def bad(section, key, msg):
        problems.append(f"{_where(cfg.lines, section, key, cfg.source)}[{section}] {key}: {msg}")

    g = v["grid"]
    if g["n"] < 8 or g["n"] % 2:
        bad("grid", "n", f"must be an even integer >= 8, got {g['n']}")
    if g["nz"] < 4:
        bad("grid", "nz", f"must be >= 4, got {g['nz']}")
    if not g["L"] > 0:
        bad("grid", "L", "must be positive")
    p = v["params"]
    if not 0 < p["mu"] <= p["mu_max"]:
        bad("params", "mu", f"must lie in (0, {p['mu_max']}], got {p['mu']}")
    if not p["eps"] >= 0:
        bad("params", "eps", f"must be non-negative, got {p['eps']}")
    if not 0 < p["h_min"] < 1:
        bad("params", "h_min", f"must lie in (0, 1), got {p['h_min']}")
    ini = v["initial"]
    if ini["family"] not in ("cosine", "gaussian-periodic", "snapshot"):
        bad("initial", "family", f"unknown family {ini['family']!r} (cosine, gaussian-periodic, snapshot)")
    if ini["family"] == "snapshot" and not ini["path"]:
        bad("initial", "path", "required when family = snapshot")
    if ini["family"] == "gaussian-periodic" and not ini["width"] > 0:
        bad("initial", "width", "must be positive")
    if ini["family"] in ("cosine", "gaussian-periodic") and p["eps"] * abs(ini["a"]) >= 1 - p["h_min"]:
        # cosine and the normalised Gaussian both peak at |a|
        bad("initial", "a", f"depth 1 - eps*|a| = {1 - p['eps'] * abs(ini['a']):.3g} violates h_min = {p['h_min']}")
    st = v["stepper"]
    if st["dt"] is not None and not st["dt"] > 0:
        bad("stepper", "dt", "must be positive or 'auto'")
    if not st["t_end"] >= 0:
        bad("stepper", "t_end", "must be non-negative")
    if st["record_every"] < 1:
        bad("stepper", "record_every", "must be >= 1")
    if st["scheme"].upper() != "RK4":
        bad("stepper", "scheme", "only RK4 is available")
    so = v["solver"]
    if not 0 < so["tol"] < 1:
        bad("solver", "tol", "must lie in (0, 1)")
    for key in ("delta_t", "h_fd"):
        if not so[key] > 0:
            bad("solver", key, "must be positive")
    sw = v["sweep"]
    for axis in ("mu", "eps"):
        vals = sw[axis]
        if len(vals) < 4:
            bad("sweep", axis, f"slope fits need at least 4 values, got {len(vals)}")
        if any(not x > 0 for x in vals):
            bad("sweep", axis, "values must be positive")
    if any(not m <= p["mu_max"] for m in sw["mu"]):
        bad("sweep", "mu", f"values must not exceed mu_max = {p['mu_max']}")
    if max(sw["eps"], default=0) * sw["amplitude"] >= 1 - p["h_min"]:
        bad("sweep", "amplitude", "largest eps * amplitude violates h_min")
    if not sw["slope_tol"] > 0:
        bad("sweep", "slope_tol", "must be positive")
    d = v["dtn"]
    if any(not 0 < m <= p["mu_max"] for m in d["flat_mu"]):
        bad("dtn", "flat_mu", "values must lie in (0, mu_max]")
    if len(d["fd_resolutions"]) < 3:
        bad("dtn", "fd_resolutions", "need three FD resolutions")
    if v["dispersion"]["kmax"] < 0 or v["dispersion"]["kmax"] >= g["n"] // 2:
        bad("dispersion", "kmax", f"must lie in [0, n/2) (0 selects n/3), got {v['dispersion']['kmax']}")
    if not v["multiplier"]["xi_max"] > 0:
        bad("multiplier", "xi_max", "must be positive")
    if v["multiplier"]["n_samples"] < 100:
        bad("multiplier", "n_samples", "must be >= 100")
    e = v["energy"]
    if e["steps"] < 1 or not e["dt"] > 0:
        bad("energy", "steps", "steps must be >= 1 and dt positive")
    if e["n"] < 8 or e["n"] % 2:
        bad("energy", "n", "must be an even integer >= 8")
    for key in ("var_mu", "convergence_mu", "convergence_mu_classical"):
        if not 0 < e[key] <= p["mu_max"]:
            bad("energy", key, f"must lie in (0, {p['mu_max']}]")
    if e["convergence_n"] < 8 or e["convergence_n"] % 2:
        bad("energy", "convergence_n", "must be an even integer >= 8")
    return problems
