"""
SVG rendering of sweep tables

Line plots for frequency sweeps and filled contours for mesh sweeps. Output is
byte-stable: the SVG id salt is pinned and no creation date is written.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from figures.sweeps import SweepTable  # noqa: E402

logger = logging.getLogger(__name__)

matplotlib.rcParams["svg.hashsalt"] = "lorentz-dispersion"
matplotlib.rcParams["svg.fonttype"] = "none"


@dataclass
class PlotSpec:
    """What to draw from one table"""

    name: str
    table: str
    x: str
    ys: List[str] = field(default_factory=list)
    kind: str = "line"  # "line" or "contour"
    logy: bool = False
    logx: bool = False
    xlabel: str = ""
    ylabel: str = ""
    title: str = ""
    z: Optional[str] = None  # contour value column
    shape: Optional[Tuple[int, int]] = None  # contour grid (rows, columns) in table order
    y: Optional[str] = None  # contour y column


def _positive(values: np.ndarray) -> np.ndarray:
    out = values.copy()
    out[~(out > 0)] = np.nan
    return out


def _line(ax, spec: PlotSpec, table: SweepTable) -> None:
    x = table.column(spec.x)
    for name in spec.ys:
        y = table.column(name)
        if spec.logy:
            y = _positive(y)
        ax.plot(x, y, label=name, linewidth=1.2)
    if spec.logy:
        ax.set_yscale("log")
    if spec.logx:
        ax.set_xscale("log")
    if len(spec.ys) > 1:
        ax.legend(loc="best", fontsize="small")


def _contour(fig, ax, spec: PlotSpec, table: SweepTable) -> None:
    rows, columns = spec.shape
    x = table.column(spec.x).reshape(rows, columns)
    y = table.column(spec.y).reshape(rows, columns)
    z = _positive(table.column(spec.z)).reshape(rows, columns)
    levels = np.log10(z)
    finite = levels[np.isfinite(levels)]
    if finite.size == 0:
        logger.warning(f"⚠️ {spec.name}: nothing finite to contour")
        return
    lo, hi = math.floor(finite.min()), math.ceil(finite.max())
    filled = ax.contourf(x, y, levels, levels=np.linspace(lo, hi, max(2, 2 * (hi - lo)) + 1))
    fig.colorbar(filled, ax=ax, label=f"log10 {spec.z}")


def render_plot(spec: PlotSpec, table: SweepTable, path: Path) -> Path:
    """
    Draw one plot to an SVG file

    Args:
        spec: Plot description
        table: Table the columns come from
        path: Output file

    Returns:
        The written path
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    try:
        if spec.kind == "contour":
            _contour(fig, ax, spec, table)
        else:
            _line(ax, spec, table)
        ax.set_xlabel(spec.xlabel or spec.x)
        ax.set_ylabel(spec.ylabel or (spec.y if spec.kind == "contour" else ""))
        if spec.title:
            ax.set_title(spec.title)
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    logger.debug(f"Plot {spec.name} -> {path}")
    return path
