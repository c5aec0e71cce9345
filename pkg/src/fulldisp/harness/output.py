"""CSV tables and optional gnuplot scripts."""
from __future__ import annotations

import csv
from pathlib import Path


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    return str(getattr(v, "value", v))


def write_table(path, rows):
    """Write dict rows as CSV; the header is the union of keys in first-seen order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fields = list(dict.fromkeys(k for r in rows for k in r))
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(fields)
        for r in rows:
            w.writerow([_cell(r.get(k, "")) for k in fields])
    return path


class CsvSink:
    """Append-only diagnostics writer, flushed after every row."""

    def __init__(self, path, columns, time_offset=0.0):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = self.path.open("w", newline="")
        self._w = csv.writer(self._fh)
        self._w.writerow(columns)
        self.columns = columns
        self.offset = time_offset

    def __call__(self, diag):
        row = diag.as_row()
        row["t"] += self.offset
        self._w.writerow([_cell(float(row[c])) for c in self.columns])
        self._fh.flush()

    def close(self):
        self._fh.close()


def gnuplot_script(csv_path, x, ys, logscale=False, title=None, filter_col=None):
    """A standalone ``.gp`` script plotting columns ``ys`` against ``x`` by header name.

    With ``filter_col=(column, values)`` one curve is drawn per value (long-format tables).
    """
    csv_path = Path(csv_path)
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set title '{title or csv_path.stem}'",
        "set terminal pngcairo size 900,600",
        f"set output '{csv_path.with_suffix('.png').name}'",
    ]
    if logscale:
        lines.append("set logscale xy")
    if filter_col:
        col, values = filter_col
        plots = [
            f"'{csv_path.name}' using (column('{x}')):(strcol('{col}') eq '{v}' ? column('{y}') : 1/0) "
            f"with points title '{v}'"
            for v in values for y in ys
        ]
    else:
        plots = [f"'{csv_path.name}' using (column('{x}')):(column('{y}')) with linespoints title '{y}'" for y in ys]
    lines.append("plot " + ", \\\n     ".join(plots))
    gp = csv_path.with_suffix(".gp")
    gp.write_text("\n".join(lines) + "\n")
    return gp
