"""Render figures from the stability toolkit's CSV outputs.

Five figure kinds, one per CSV schema: the boundary-layer velocity profile,
the growth-rate sweep, the eigenvalue scatter, and the vorticity and
streamfunction components of an exported eigenpair.  The renderer never
computes mathematics; every plotted array is a column of the input file,
read back verbatim.  Schema validation is exact (names and order), so a
file produced for one kind cannot be rendered silently as another.

Complex-valued curves follow a fixed color convention: real part in blue,
imaginary part in red.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

REAL_COLOR = "tab:blue"
IMAG_COLOR = "tab:red"
CLUSTER_COLOR = "0.55"

PROFILE = "profile"
SWEEP = "sweep"
SPECTRUM = "spectrum"
VORTICITY = "vorticity"
EIGENFUNCTION = "eigenfunction"

KINDS = (PROFILE, SWEEP, SPECTRUM, VORTICITY, EIGENFUNCTION)

# Exact column schema per kind; vorticity and eigenfunction both read the
# eigenpair export and differ only in which column pair they draw.
SCHEMAS = {
    PROFILE: ("Y", "V", "Vpp"),
    SWEEP: ("t", "im_c_max"),
    SPECTRUM: ("re_c", "im_c", "class"),
    VORTICITY: ("Y", "re_psi", "im_psi", "re_omega", "im_omega"),
    EIGENFUNCTION: ("Y", "re_psi", "im_psi", "re_omega", "im_omega"),
}

# The spectrum classifier's labels; any other value in the class column is
# drawn as a discrete candidate so unknown labels stay visible.
CLUSTER_LABEL = "continuous-cluster"

FIGSIZE = (6.4, 4.2)
DPI = 150


class SchemaError(ValueError):
    """Input CSV columns do not match the requested kind's schema."""


@dataclass(frozen=True)
class FigureSpec:
    """One figure request: kind, input CSV, output image path."""

    kind: str
    csv_path: Path
    out_path: Path

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(
                "unknown figure kind %r (choose from %s)"
                % (self.kind, ", ".join(KINDS))
            )
        object.__setattr__(self, "csv_path", Path(self.csv_path))
        object.__setattr__(self, "out_path", Path(self.out_path))


def _column_diff(expected, found):
    missing = [name for name in expected if name not in found]
    unexpected = [name for name in found if name not in expected]
    if missing or unexpected:
        return "missing columns %s, unexpected columns %s" % (missing, unexpected)
    return "column order must be %s" % (",".join(expected))


def read_table(path, kind):
    """Read one CSV into {column: array}, validating the kind's schema.

    Leading '#' lines carry run metadata and are skipped.  The header row
    must equal the schema exactly (names and order); numeric columns parse
    as float64 and the spectrum's class column stays as strings.  A header
    with no data rows is an error: every figure needs at least one point.
    """
    if kind not in KINDS:
        raise ValueError("unknown figure kind %r" % (kind,))
    expected = SCHEMAS[kind]
    lines = Path(path).read_text().splitlines()
    rows = [line for line in lines if line.strip() and not line.startswith("#")]
    if not rows:
        raise SchemaError("%s: no header row" % (path,))
    found = tuple(cell.strip() for cell in rows[0].split(","))
    if found != expected:
        raise SchemaError(
            "%s: schema mismatch for kind %r: %s (expected %s; found %s)"
            % (path, kind, _column_diff(expected, found),
               ",".join(expected), ",".join(found))
        )
    if len(rows) == 1:
        raise ValueError("%s: no data rows" % (path,))

    columns = {name: [] for name in expected}
    for lineno, line in enumerate(rows[1:], start=2):
        cells = [cell.strip() for cell in line.split(",")]
        if len(cells) != len(expected):
            raise ValueError(
                "%s: row %d has %d fields, expected %d"
                % (path, lineno, len(cells), len(expected))
            )
        for name, cell in zip(expected, cells):
            if name == "class":
                columns[name].append(cell)
            else:
                try:
                    columns[name].append(float(cell))
                except ValueError:
                    raise ValueError(
                        "%s: row %d, column %r: cannot parse %r as float"
                        % (path, lineno, name, cell)
                    ) from None
    return {
        name: np.asarray(vals) if name == "class" else np.asarray(vals, dtype=float)
        for name, vals in columns.items()
    }


def _draw_profile(ax, table):
    ax.plot(table["Y"], table["V"], color=REAL_COLOR, lw=1.5)
    ax.axhline(0.0, color="0.8", lw=0.8, zorder=0)
    ax.set_xlabel("Y")
    ax.set_ylabel("V")
    ax.set_title("Velocity profile")


def _draw_sweep(ax, table):
    ax.plot(table["t"], table["im_c_max"], color=REAL_COLOR, lw=1.5)
    ax.axhline(0.0, color="0.8", lw=0.8, zorder=0)
    ax.set_xlabel("t")
    ax.set_ylabel("max Im c")
    ax.set_title("Growth rate of the most unstable mode")


def _draw_spectrum(ax, table):
    cluster = table["class"] == CLUSTER_LABEL
    ax.plot(
        table["re_c"][cluster], table["im_c"][cluster],
        ".", color=CLUSTER_COLOR, ms=3, label="continuous cluster",
    )
    if not cluster.all():
        ax.plot(
            table["re_c"][~cluster], table["im_c"][~cluster],
            "x", color=IMAG_COLOR, ms=7, mew=1.5, label="discrete candidates",
        )
    ax.axhline(0.0, color="0.8", lw=0.8, zorder=0)
    ax.set_xlabel("Re c")
    ax.set_ylabel("Im c")
    ax.set_title("Spectrum")
    ax.legend(loc="best", fontsize=8)


def _draw_pair(ax, table, re_name, im_name, ylabel, title):
    ax.plot(table["Y"], table[re_name], color=REAL_COLOR, lw=1.5, label="real part")
    ax.plot(table["Y"], table[im_name], color=IMAG_COLOR, lw=1.5, label="imaginary part")
    ax.axhline(0.0, color="0.8", lw=0.8, zorder=0)
    ax.set_xlabel("Y")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)


def render(spec):
    """Render one figure and return the output path.

    Reads and validates the CSV before any drawing, so a bad input never
    leaves a partial image behind.  Output is a raster PNG with pinned
    size, resolution, and styling: re-rendering the same CSV reproduces
    the same byte stream under a fixed renderer version.
    """
    table = read_table(spec.csv_path, spec.kind)
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    try:
        if spec.kind == PROFILE:
            _draw_profile(ax, table)
        elif spec.kind == SWEEP:
            _draw_sweep(ax, table)
        elif spec.kind == SPECTRUM:
            _draw_spectrum(ax, table)
        elif spec.kind == VORTICITY:
            _draw_pair(ax, table, "re_omega", "im_omega", "omega", "Mode vorticity")
        else:
            _draw_pair(ax, table, "re_psi", "im_psi", "psi", "Mode streamfunction")
        ax.grid(True, alpha=0.25)
        fig.tight_layout()
        spec.out_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.out_path)
    finally:
        plt.close(fig)
    return spec.out_path
