"""
Render a ``*.plot.json`` spec written by the CLI.

    python3 -m ffrsfr.plotting out/cdf_ffr_r5pd.plot.json [--save fig.png]

Needs matplotlib (``pip install artifact[plot]``); nothing else in the
package does.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .report import read_csv


def _column(header, name):
    for i, h in enumerate(header):
        if h.split("(")[0] == name:
            return i
    raise KeyError(name)


def render(spec_path: str, save: str | None = None):
    import matplotlib
    if save:
        matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with open(spec_path, encoding="utf-8") as fh:
        spec = json.load(fh)
    _, header, rows = read_csv(os.path.join(os.path.dirname(spec_path), spec["data"]))
    xi = _column(header, spec["x"])
    fig, ax = plt.subplots()
    groups = {None: rows}
    if spec.get("group"):
        gi = _column(header, spec["group"])
        groups = {}
        for r in rows:
            groups.setdefault(r[gi], []).append(r)
    for key, part in groups.items():
        for y in spec["y"]:
            yi = _column(header, y)
            label = y if key is None else f"{y} {spec['group']}={key:g}"
            draw = ax.step if spec["kind"] == "step" else ax.plot
            draw([r[xi] for r in part], [r[yi] for r in part], label=label)
    for level in spec.get("hlines", []):
        ax.axhline(level, ls=":", c="k")
    ax.set_title(spec["title"])
    ax.set_xlabel(spec["xlabel"])
    ax.set_ylabel(spec["ylabel"])
    ax.grid(True, alpha=0.3)
    ax.legend()
    if save:
        fig.savefig(save, dpi=150)
    else:
        plt.show()


def main(argv=None):
    p = argparse.ArgumentParser(prog="python3 -m ffrsfr.plotting")
    p.add_argument("spec")
    p.add_argument("--save")
    args = p.parse_args(argv)
    render(args.spec, args.save)
    return 0


if __name__ == "__main__":
    sys.exit(main())
