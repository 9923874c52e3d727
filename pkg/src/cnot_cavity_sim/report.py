"""Figure rendering for sweep results.

Kept separate from the sweep module so that array computation and CSV/PGM
serialization never import a plotting backend; everything here draws through
matplotlib's file-only Agg backend and writes PNGs next to the data files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .sweep import SweepGrid, locate_max


def render_heatmap(grid: SweepGrid, destination: str | Path, dpi: int = 150) -> None:
    """Render the average-fidelity surface to an image file.

    Axes are the sweep's coupling ratios on log scales, one cell per grid
    point, with the best cell marked.  The output format follows the file
    extension (PNG for ``.png`` and so on, per matplotlib).
    """
    best = locate_max(grid)
    fig, ax = plt.subplots(figsize=(6.4, 5.2))
    try:
        mesh = ax.pcolormesh(
            grid.config.g_ratios,
            grid.config.kappa_s_ratios,
            grid.values,
            shading="nearest",
            vmin=0.0,
            vmax=1.0,
        )
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel(r"$g/\kappa$")
        ax.set_ylabel(r"$\kappa_s/\kappa$")
        ax.set_title(
            f"average CNOT fidelity "
            rf"($\rho/\kappa$={grid.config.rho_ratio:g}, "
            rf"$F_{{UC}}$={grid.config.f_uc:.4g})"
        )
        ax.plot(best.g_ratio, best.kappa_s_ratio, marker="*", markersize=12,
                color="white", markeredgecolor="black")
        fig.colorbar(mesh, ax=ax, label="average fidelity")
        fig.tight_layout()
        try:
            fig.savefig(destination, dpi=dpi)
        except OSError as exc:
            raise OSError(f"cannot write figure to {destination}: {exc}") from exc
    finally:
        plt.close(fig)
