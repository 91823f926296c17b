"""Deterministic figure rendering.

Each renderer returns PNG bytes so the caller controls file placement
and can hash the result. Rendering strips the PNG Software field and
pins the dpi; two runs with identical inputs produce identical bytes.
"""

from __future__ import annotations

import io

__all__ = [
    "render_component_curves",
    "render_measure_decay",
    "render_staircase",
]

_DPI = 110
_PNG_META = {"Software": None}
_FIGSIZE = (7.0, 4.4)


def _new_figure():
    import matplotlib

    matplotlib.use("Agg", force=False)
    from matplotlib.figure import Figure

    return Figure(figsize=_FIGSIZE)


def _to_png(fig) -> bytes:
    buf = io.BytesIO()
    fig.savefig(buf, format="png", dpi=_DPI, metadata=_PNG_META)
    return buf.getvalue()


def render_component_curves(curves, index: int, title: str) -> bytes:
    """Plot one state component against t for several trajectories.

    curves: list of (label, trajectory) pairs; component `index` of each
    trajectory's states is drawn against its own t grid.
    """
    fig = _new_figure()
    ax = fig.add_subplot(111)
    for label, traj in curves:
        ax.plot(traj.t, traj.states[:, index], label=label, linewidth=1.2)
    ax.set_xlabel("t")
    ax.set_ylabel(f"x{index + 1}")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return _to_png(fig)


def render_staircase(stair, n_points: int = 2001) -> bytes:
    """Plot the integral staircase over the carrier interval."""
    import numpy as np

    fig = _new_figure()
    ax = fig.add_subplot(111)
    xs = np.linspace(stair.spec.c1, stair.spec.c2, n_points)
    ax.plot(xs, stair.eval(xs), linewidth=1.0, color="tab:blue")
    ax.set_xlabel("x")
    ax.set_ylabel("S(x)")
    ax.set_title(f"integral staircase, alpha={stair.alpha:g}")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return _to_png(fig)


def render_measure_decay(rows) -> bytes:
    """Plot coarse measure against depth, one line per alpha.

    rows: iterable of (depth, alpha, mu) triples; plotted on a log scale
    so the plateau at the right exponent stands out against growth or
    decay at the wrong one.
    """
    fig = _new_figure()
    ax = fig.add_subplot(111)
    by_alpha: dict = {}
    for depth, alpha, mu in rows:
        by_alpha.setdefault(alpha, []).append((depth, mu))
    for alpha in sorted(by_alpha):
        pairs = sorted(by_alpha[alpha])
        ax.plot(
            [p[0] for p in pairs],
            [p[1] for p in pairs],
            marker="o",
            markersize=3,
            linewidth=1.0,
            label=f"alpha={alpha:g}",
        )
    ax.set_yscale("log")
    ax.set_xlabel("depth")
    ax.set_ylabel("coarse measure")
    ax.set_title("measure against refinement depth")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return _to_png(fig)
