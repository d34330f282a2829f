"""Matplotlib rendering of replay and evaluation outputs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .flow import IofResult  # noqa: E402
from .process import ProcessPath  # noqa: E402

# deterministic output: no Software/date chunks in the PNG
_SAVEFIG_KW = {"dpi": 120, "metadata": {"Software": None}}


def render_replay(path: ProcessPath, result: IofResult, out_file: str | Path,
                  title: str = "", epsilon: float | None = None) -> None:
    """Dominance path with on-fire shading and the win probability."""
    minutes = [t * path.grid_r for t in path.times]
    fig, ax = plt.subplots(figsize=(9, 4.5))
    ax.plot(minutes, path.mt, color="tab:blue", lw=1.6, label="dominance level")
    for lo, hi in result.intervals:
        ax.axvspan(lo * path.grid_r, hi * path.grid_r, color="purple", alpha=0.18)
    ax.set_xlabel("time (grid steps)")
    ax.set_ylabel("dominance level")
    ax.grid(True, alpha=0.3)

    ax2 = ax.twinx()
    ax2.plot(minutes, path.pw, color="tab:red", ls="--", lw=1.4,
             label="win probability")
    ax2.set_ylabel("win probability")
    ax2.set_ylim(0.0, 1.0)
    ax2.axhline(0.5, color="gray", lw=0.8, ls=":")
    if path.pw:
        ax2.axhline(path.pw[0], color="tab:red", lw=0.8, ls=":", alpha=0.6)
    if epsilon is not None:
        ax2.axhline(epsilon, color="darkred", lw=0.8, ls=":", alpha=0.8)

    lines, labels = ax.get_legend_handles_labels()
    lines2, labels2 = ax2.get_legend_handles_labels()
    ax.legend(lines + lines2, labels + labels2, loc="lower left", fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_file, **_SAVEFIG_KW)
    plt.close(fig)


def render_player_table(totals: dict[str, float], out_file: str | Path,
                        title: str = "") -> None:
    """Horizontal bar chart of per-player season totals."""
    players = sorted(totals, key=totals.get)
    values = [totals[p] for p in players]
    fig, ax = plt.subplots(figsize=(7, 0.4 * max(len(players), 4) + 1.2))
    ax.barh(players, values, color="tab:blue")
    ax.set_xlabel("player total score")
    ax.grid(True, axis="x", alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_file, **_SAVEFIG_KW)
    plt.close(fig)
