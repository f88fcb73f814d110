"""SVG figures for traces: distance metrics, trajectories and snapshots."""
import logging
import os
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Circle, Polygon  # noqa: E402

logger = logging.getLogger(__name__)

# Fixed ids and no date stamp keep SVG bytes stable between runs.
plt.rcParams["svg.hashsalt"] = "tubeswarm"
plt.rcParams["svg.fonttype"] = "path"
SAVE_METADATA = {"Date": None}


def _save(fig, path: str):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    fig.savefig(path, format="svg", metadata=SAVE_METADATA)
    plt.close(fig)
    logger.info(f"Saved figure {path}")


def _draw_tube(ax, bases: np.ndarray):
    bases = np.asarray(bases, dtype=float)
    outline = np.vstack([bases[:, 0], bases[::-1, 1]])
    ax.add_patch(Polygon(outline, closed=True, fill=False, edgecolor="black", linewidth=1.2))
    for base in bases[1:-1]:
        ax.plot(base[:, 0], base[:, 1], color="grey", linewidth=0.6, linestyle=":")
    ax.plot(bases[-1][:, 0], bases[-1][:, 1], color="tab:green", linewidth=1.5, label="finishing line")


def plot_distances(metrics: np.ndarray, r_s: float, path: str):
    """Two panels: min pairwise distance over 2 r_s, min boundary distance over r_s."""
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    t = metrics[:, 0]

    pair = np.where(np.isfinite(metrics[:, 1]), metrics[:, 1], np.nan)
    top.plot(t, pair, color="tab:blue", linewidth=1.2, label="min distance between agents")
    top.axhline(2.0 * r_s, color="tab:red", linestyle="--", label="2 r_s")
    top.set_ylabel("distance (m)")
    top.legend(loc="upper right")
    top.grid(True)

    wall = np.where(np.isfinite(metrics[:, 2]), metrics[:, 2], np.nan)
    bottom.plot(t, wall, color="tab:orange", linewidth=1.2, label="min distance to tube boundary")
    bottom.axhline(r_s, color="tab:red", linestyle="--", label="r_s")
    bottom.set_xlabel("time (s)")
    bottom.set_ylabel("distance (m)")
    bottom.legend(loc="upper right")
    bottom.grid(True)

    fig.tight_layout()
    _save(fig, path)


def plot_trajectories(trajectory: np.ndarray, bases: np.ndarray, path: str):
    fig, ax = plt.subplots(figsize=(8, 6))
    _draw_tube(ax, bases)
    ids = trajectory[:, 1].astype(int)
    for agent in np.unique(ids):
        rows = trajectory[ids == agent]
        ax.plot(rows[:, 2], rows[:, 3], linewidth=0.9)
        ax.plot(rows[0, 2], rows[0, 3], marker="o", markersize=3, color="black")
    ax.set_aspect("equal")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_title("Agent trajectories")
    ax.legend(loc="upper left")
    ax.grid(True)
    fig.tight_layout()
    _save(fig, path)


def plot_snapshot(positions: np.ndarray, arrived: Sequence[bool], bases: np.ndarray, r_s: float, r_a: float,
                  t: float, path: str, trail: Optional[np.ndarray] = None):
    fig, ax = plt.subplots(figsize=(8, 6))
    _draw_tube(ax, bases)
    if trail is not None:
        for i in range(trail.shape[1]):
            ax.plot(trail[:, i, 0], trail[:, i, 1], color="lightgrey", linewidth=0.6)
    for p, done in zip(positions, arrived):
        color = "grey" if done else "tab:blue"
        ax.add_patch(Circle(p, r_s, fill=True, alpha=0.35, color=color))
        ax.add_patch(Circle(p, r_a, fill=False, linestyle="--", linewidth=0.6, edgecolor=color))
    ax.autoscale_view()
    ax.set_aspect("equal")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_title(f"t = {t:.2f} s")
    fig.tight_layout()
    _save(fig, path)
