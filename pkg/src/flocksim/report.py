"""Render run figures to files alongside the CSV output."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .simulator import Trajectory
from .state import Variant

DPI = 150
VARIANT_COLORS = {
    Variant.VELOCITY_BASED.value: "tab:blue",
    Variant.POSITION_THRESHOLD.value: "tab:red",
    Variant.POSITION_NO_THRESHOLD.value: "tab:green",
}


def _metric_panels(axes, rows):
    t = [r.time for r in rows]

    def series(attr):
        return [getattr(r, attr) if getattr(r, attr) is not None else np.nan
                for r in rows]

    axes[0].plot(t, series("gamma"), color="tab:red")
    axes[0].set_ylabel("alignment")
    axes[0].set_ylim(-1.05, 1.05)
    axes[1].plot(t, series("dist_mean"), color="tab:blue", label="mean")
    axes[1].fill_between(t, series("dist_min"), series("dist_max"),
                         color="tab:blue", alpha=0.2, label="min-max")
    axes[1].set_ylabel("neighbor distance [m]")
    axes[1].legend(loc="best", fontsize=8)
    axes[2].plot(t, series("speed_mean"), color="tab:green")
    axes[2].set_ylabel("mean speed [m/s]")
    axes[3].plot(t, series("cohesion_radius"), color="tab:purple",
                 label="cohesion radius [m]")
    axes[3].plot(t, series("pairwise_dist_variance"), color="tab:orange",
                 label="pairwise variance [m$^2$]")
    axes[3].legend(loc="best", fontsize=8)
    for ax in axes:
        ax.grid(alpha=0.3)
        ax.set_xlabel("t [s]")


def save_metrics_figure(rows, path: Path) -> Path:
    fig, axes = plt.subplots(2, 2, figsize=(10, 7))
    _metric_panels(axes.ravel(), rows)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def _plot_paths(ax, positions):
    # positions: (frames, agents, 2)
    for i in range(positions.shape[1]):
        ax.plot(positions[:, i, 0], positions[:, i, 1], lw=0.8, alpha=0.7)
    ax.scatter(positions[0, :, 0], positions[0, :, 1], s=12, c="k",
               marker="o", label="start", zorder=3)
    ax.scatter(positions[-1, :, 0], positions[-1, :, 1], s=18, c="tab:red",
               marker="^", label="end", zorder=3)
    ax.set_aspect("equal")
    ax.grid(alpha=0.3)
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.legend(loc="best", fontsize=8)


def save_trajectory_figure(trajectory: Trajectory, path: Path) -> Path:
    positions = np.array([state.positions[:, :2] for _, state in trajectory])
    fig, ax = plt.subplots(figsize=(7, 7))
    _plot_paths(ax, positions)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def save_run_figures(trajectory: Trajectory, rows, out: Path) -> dict[str, Path]:
    return {
        "metrics_figure": save_metrics_figure(rows, out / "metrics.png"),
        "trajectory_figure": save_trajectory_figure(trajectory, out / "trajectory.png"),
    }


def save_comparison_figure(report, out: Path) -> dict[str, Path]:
    fig, (ax_g, ax_d) = plt.subplots(1, 2, figsize=(12, 4.5))
    seen = set()
    for cell in report.cells:
        if not cell.rows:
            continue
        t = [r.time for r in cell.rows]
        color = VARIANT_COLORS[cell.variant]
        label = cell.variant if cell.variant not in seen else None
        seen.add(cell.variant)
        ax_g.plot(t, [np.nan if r.gamma is None else r.gamma for r in cell.rows],
                  color=color, alpha=0.45, lw=0.9, label=label)
        ax_d.plot(t, [np.nan if r.dist_mean is None else r.dist_mean
                      for r in cell.rows], color=color, alpha=0.45, lw=0.9,
                  label=label)
    ax_g.set_xlabel("t [s]")
    ax_g.set_ylabel("alignment")
    ax_g.set_ylim(-1.05, 1.05)
    ax_d.set_xlabel("t [s]")
    ax_d.set_ylabel("mean neighbor distance [m]")
    for ax in (ax_g, ax_d):
        ax.grid(alpha=0.3)
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    path = out / "comparison.png"
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return {"comparison_figure": path}


def save_replay_figures(result, out: Path) -> dict[str, Path]:
    files = {"metrics_figure": save_metrics_figure(result.metrics,
                                                   out / "metrics.png")}
    fig, ax = plt.subplots(figsize=(7, 5))
    _plot_paths(ax, result.positions)
    from .unicycle import ARENA_HALF_EXTENTS
    hx, hy = ARENA_HALF_EXTENTS
    ax.plot([-hx, hx, hx, -hx, -hx], [-hy, -hy, hy, hy, -hy],
            "k--", lw=1, alpha=0.6)
    fig.tight_layout()
    path = out / "trajectory.png"
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    files["trajectory_figure"] = path
    return files
