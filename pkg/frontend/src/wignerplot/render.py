"""Render Wigner-grid CSV files into heatmap images.

Consumes the documented CSV schema: '#'-prefixed metadata lines
('# key: value', one of them '# convention: ...'), a header row 'x,p,w',
then one row per grid point with W(x, p) in column w.  The color scale is
a diverging map clipped symmetrically at +-max|W| so that white is exactly
W = 0 and negativity is visually unambiguous.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

REQUIRED_META = ("N", "alpha_magnitude")


class PlotError(Exception):
    """Raised for malformed input CSV or missing required metadata."""


@dataclass(frozen=True)
class Grid:
    x_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray
    convention: str
    meta: dict = field(default_factory=dict)


def load_grid(path: str) -> Grid:
    """Parse a Wigner-grid CSV; raise PlotError on any structural defect."""
    meta: dict = {}
    convention = ""
    rows = []
    try:
        fh = open(path)
    except OSError as exc:
        raise PlotError(f"cannot read {path}: {exc}") from exc
    with fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                body = line[1:].strip()
                if ":" in body:
                    key, _, val = body.partition(":")
                    if key.strip() == "convention":
                        convention = val.strip()
                    else:
                        meta[key.strip()] = val.strip()
                continue
            if not line.strip() or line.startswith("x,"):
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise PlotError(f"malformed data row: {line!r}")
            try:
                rows.append(tuple(float(t) for t in parts))
            except ValueError as exc:
                raise PlotError(f"non-numeric data row: {line!r}") from exc
    if not rows:
        raise PlotError("no data rows found")
    if not convention:
        raise PlotError("missing '# convention:' metadata line")
    for key in REQUIRED_META:
        if key not in meta:
            raise PlotError(f"missing required metadata key {key!r}")
    xs = sorted({r[0] for r in rows})
    ps = sorted({r[1] for r in rows})
    if len(rows) != len(xs) * len(ps):
        raise PlotError("data rows do not form a complete rectangular grid")
    vals = np.empty((len(xs), len(ps)))
    xi = {x: i for i, x in enumerate(xs)}
    pi = {p: i for i, p in enumerate(ps)}
    for x, p, w in rows:
        vals[xi[x], pi[p]] = w
    return Grid(np.asarray(xs), np.asarray(ps), vals, convention, meta)


def render(grid: Grid, out_path: str, contours: bool = False) -> None:
    """Write a heatmap image of the grid; never touches the input file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    lim = max(float(np.abs(grid.values).max()), 1e-300)
    fig, ax = plt.subplots(figsize=(6.4, 5.2))
    mesh = ax.pcolormesh(
        grid.x_axis,
        grid.p_axis,
        grid.values.T,
        cmap="RdBu_r",
        vmin=-lim,
        vmax=lim,
        shading="nearest",
    )
    if contours:
        ax.contour(
            grid.x_axis, grid.p_axis, grid.values.T,
            levels=9, colors="k", linewidths=0.4,
        )
    ax.set_xlabel("x")
    ax.set_ylabel("p")
    ax.set_aspect("equal")
    title = f"W(x, p)  N={grid.meta['N']}, |alpha|={grid.meta['alpha_magnitude']}"
    ax.set_title(f"{title}\n{grid.convention}", fontsize=9)
    fig.colorbar(mesh, ax=ax, label="W")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="wigner-plot", description="Render a Wigner-grid CSV into a heatmap image."
    )
    parser.add_argument("--in", dest="input", required=True, help="input Wigner-grid CSV")
    parser.add_argument("--out", required=True, help="output image path (png, pdf, ...)")
    parser.add_argument(
        "--contours", action="store_true", help="overlay contour lines on the heatmap"
    )
    args = parser.parse_args(argv)
    try:
        grid = load_grid(args.input)
        render(grid, args.out, contours=args.contours)
    except PlotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
