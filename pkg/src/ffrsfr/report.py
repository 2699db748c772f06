"""
Result tables, their CSV form and declarative plot specs.

CSV dialect: comma separated, '.' decimal point, UTF-8, LF line endings.
Leading '#' lines carry metadata; the header names columns as name(unit).
Floats are written with 12 significant digits, so identical inputs give
identical bytes.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import __version__


@dataclass
class ResultTable:
    """Named columns with units, row-major records and metadata."""

    name: str
    columns: list            # [(name, unit), ...]
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"{self.name}: expected {len(self.columns)} values, got {len(values)}")
        for (col, _), v in zip(self.columns, values):
            if isinstance(v, (float, np.floating)) and not math.isfinite(v):
                raise ValueError(f"{self.name}: non-finite value in column {col}")
        self.rows.append(tuple(values))

    def column(self, name):
        i = [c for c, _ in self.columns].index(name)
        return [r[i] for r in self.rows]

    def to_csv(self) -> str:
        lines = [f"# {k}: {v}" for k, v in self.meta.items()]
        lines.append(",".join(f"{c}({u})" for c, u in self.columns))
        for row in self.rows:
            lines.append(",".join(_fmt(v) for v in row))
        return "\n".join(lines) + "\n"

    def write(self, out_dir: str) -> str:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, f"{self.name}.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())
        return path


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        s = f"{float(v):.12g}"
        return "0" if s == "-0" else s
    return str(v)


def read_csv(path: str):
    """(meta, header, rows) of a CSV written by :meth:`ResultTable.write`;
    numeric cells come back as floats."""
    meta, header, rows = {}, None, []
    with open(path, encoding="utf-8") as fh:
        for line in fh.read().splitlines():
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition(":")
                meta[key.strip()] = val.strip()
            elif header is None:
                header = line.split(",")
            else:
                rows.append([_parse(x) for x in line.split(",")])
    return meta, header, rows


def _parse(x):
    try:
        return float(x)
    except ValueError:
        return x


def metadata(command: str, config_digest: str, seed: int, **extra) -> dict:
    meta = {"tool": f"ffrsfr {__version__}", "command": command,
            "config_sha256": config_digest, "seed": seed}
    meta.update(extra)
    return meta


def plot_spec(table: ResultTable, x: str, y: list, title: str, xlabel: str, ylabel: str,
              kind: str = "line", group: str | None = None, hlines=()) -> dict:
    """Declarative description of one figure drawn from ``table``'s CSV."""
    return {"title": title, "data": f"{table.name}.csv", "kind": kind, "x": x, "y": list(y),
            "group": group, "xlabel": xlabel, "ylabel": ylabel, "hlines": list(hlines)}


def write_plot_spec(spec: dict, out_dir: str, name: str) -> str:
    path = os.path.join(out_dir, f"{name}.plot.json")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(spec, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
