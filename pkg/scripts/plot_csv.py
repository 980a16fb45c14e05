#!/usr/bin/env python3
"""Render photonmol sweep CSVs: 1-D curves and 2-D maps.

Untested convenience, not part of the package surface.

    python scripts/plot_csv.py fig4_plus.csv --log10 -o fig4.png
    python scripts/plot_csv.py map_plus.csv --log10        # 2-D -> pcolormesh
"""

import argparse
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def load(path):
    provenance = {}
    rows = []
    with open(path, newline="") as handle:
        for line in handle:
            if line.startswith("# "):
                key, _, value = line[2:].strip().partition("=")
                provenance[key] = value
            else:
                rows.append(line)
    reader = csv.reader(rows)
    header = next(reader)
    data = list(reader)
    return provenance, header, data


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv_path")
    parser.add_argument("--log10", action="store_true", help="plot log10 of the value")
    parser.add_argument("-o", "--out", help="output image (default <csv>.png)")
    args = parser.parse_args()

    provenance, header, data = load(args.csv_path)
    status_col = header.index("status")
    value_col = status_col - 1
    n_axes = 2 if "axis2" in provenance else 1

    ok = [row for row in data if row[status_col] == "ok"]
    if not ok:
        sys.exit("no ok points to plot")
    values = np.array([float(row[value_col]) for row in ok])
    if args.log10:
        values = np.log10(values)
    label = header[value_col] + (" (log10)" if args.log10 else "")

    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    if n_axes == 2:
        x = np.array([float(row[0]) for row in ok])
        y = np.array([float(row[1]) for row in ok])
        xs, ys = np.unique(x), np.unique(y)
        grid = np.full((len(xs), len(ys)), np.nan)
        ix = np.searchsorted(xs, x)
        iy = np.searchsorted(ys, y)
        grid[ix, iy] = values
        mesh = ax.pcolormesh(xs, ys, grid.T, shading="nearest", cmap="viridis")
        fig.colorbar(mesh, ax=ax, label=label)
        ax.set_xlabel(header[0])
        ax.set_ylabel(header[1])
    else:
        x = np.array([float(row[0]) for row in ok])
        ax.plot(x, values, lw=1.2)
        ax.set_xlabel(header[0])
        ax.set_ylabel(label)
        ax.grid(alpha=0.3)

    ax.set_title(provenance.get("observable", ""), fontsize=10)
    out = args.out or args.csv_path.rsplit(".", 1)[0] + ".png"
    fig.tight_layout()
    fig.savefig(out, dpi=160)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
