"""Plain-text state snapshots: ``#key=value`` header lines, then three CSV columns."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import SnapshotError

SCHEMA_VERSION = "1"
REQUIRED_KEYS = ("model", "n", "nz", "L", "mu", "eps", "t", "schema-version")


@dataclass
class Snapshot:
    x: np.ndarray
    zeta: np.ndarray
    second: np.ndarray  # psi for potential-form models, w for velocity-form ones
    meta: dict
    second_name: str = "psi"

    @property
    def mu(self) -> float:
        return float(self.meta["mu"])

    @property
    def t(self) -> float:
        return float(self.meta["t"])


def write_snapshot(path, x, zeta, second, meta: dict, second_name="psi"):
    """Write a snapshot; ``meta`` must carry every key in ``REQUIRED_KEYS`` except the schema version."""
    meta = {**meta, "schema-version": SCHEMA_VERSION}
    missing = [k for k in REQUIRED_KEYS if k not in meta]
    if missing:
        raise SnapshotError(f"snapshot metadata lacks {', '.join(missing)}")
    cols = np.column_stack([np.asarray(c, dtype=float) for c in (x, zeta, second)])
    if not np.all(np.isfinite(cols)):
        raise SnapshotError("refusing to write non-finite samples")
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w") as fh:
        for k in REQUIRED_KEYS:
            fh.write(f"#{k}={_fmt(meta[k])}\n")
        for k, v in meta.items():
            if k not in REQUIRED_KEYS:
                fh.write(f"#{k}={_fmt(v)}\n")
        fh.write(f"x,zeta,{second_name}\n")
        for row in cols:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    return p


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(getattr(v, "value", v))


def read_snapshot(path) -> Snapshot:
    """Inverse of :func:`write_snapshot`; errors name the offending line."""
    p = Path(path)
    try:
        lines = p.read_text().splitlines()
    except OSError as exc:
        raise SnapshotError(f"{path}: cannot read ({exc.strerror})") from None
    meta, header_at, rows = {}, None, []
    for i, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            if header_at is not None:
                raise SnapshotError(f"{path}:{i}: metadata line after the data began")
            key, sep, val = line[1:].partition("=")
            if not sep:
                raise SnapshotError(f"{path}:{i}: metadata line is not key=value")
            meta[key.strip()] = val.strip()
            continue
        if header_at is None:
            header_at = i
            names = [c.strip() for c in line.split(",")]
            if len(names) != 3 or names[:2] != ["x", "zeta"]:
                raise SnapshotError(f"{path}:{i}: expected column header 'x,zeta,<psi|w>', got {line!r}")
            second_name = names[2]
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise SnapshotError(f"{path}:{i}: expected 3 columns, found {len(parts)}")
        try:
            vals = [float(s) for s in parts]
        except ValueError:
            raise SnapshotError(f"{path}:{i}: unparsable number in {line!r}") from None
        if not all(np.isfinite(vals)):
            raise SnapshotError(f"{path}:{i}: non-finite value")
        rows.append(vals)
    missing = [k for k in REQUIRED_KEYS if k not in meta]
    if missing:
        raise SnapshotError(f"{path}: header lacks required key(s) {', '.join(missing)}")
    if meta["schema-version"] != SCHEMA_VERSION:
        raise SnapshotError(f"{path}: schema-version {meta['schema-version']} is not supported "
                            f"(expected {SCHEMA_VERSION})")
    if header_at is None:
        raise SnapshotError(f"{path}: no column header")
    try:
        n = int(meta["n"])
    except ValueError:
        raise SnapshotError(f"{path}: header n={meta['n']!r} is not an integer") from None
    if len(rows) != n:
        raise SnapshotError(f"{path}: header says n={n} but {len(rows)} data rows follow")
    arr = np.array(rows, dtype=float).reshape(-1, 3)
    return Snapshot(arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy(), meta, second_name)


def check_resume(snap: Snapshot, model, n, mu, eps):
    """Refuse to resume a run whose configuration disagrees with the snapshot."""
    problems = []
    if str(snap.meta["model"]) != str(getattr(model, "value", model)):
        problems.append(f"model {snap.meta['model']} != {getattr(model, 'value', model)}")
    if int(snap.meta["n"]) != int(n):
        problems.append(f"n {snap.meta['n']} != {n}")
    if float(snap.meta["mu"]) != float(mu):
        problems.append(f"mu {snap.meta['mu']} != {mu}")
    if float(snap.meta["eps"]) != float(eps):
        problems.append(f"eps {snap.meta['eps']} != {eps}")
    if problems:
        raise SnapshotError("cannot resume from snapshot: " + "; ".join(problems))
