"""SVG rendering of traced inflection curves with a JSON graph dump alongside."""
from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
from matplotlib import pyplot as plt  # noqa: E402

from .ratfun import RationalFunction  # noqa: E402
from .tracer import CurveGraph, Trajectory  # noqa: E402

VIEW_WIDTH = 1024  # SVG user units across the window

CURVE_COLOR = "#d62728"
TRAJECTORY_COLOR = "#9a9a9a"


def render_svg(
    graph: CurveGraph,
    R: RationalFunction,
    path: str | Path,
    trajectories: list[Trajectory] = (),
    *,
    title: str | None = None,
) -> tuple[Path, Path]:
    """Write ``path`` (SVG) and the graph dump next to it (same stem, .json).

    The window maps onto a viewBox 1024 units wide with y pointing down.
    Curve pieces carry ids ``component-<n>`` and pole markers ``pole-<k>``.
    """
    path = Path(path)
    w = graph.window
    xmin, xmax, ymin, ymax = w.bounds
    height = VIEW_WIDTH * w.half_height / w.half_width
    # 72 dpi makes one SVG point equal to one viewBox unit
    fig = plt.figure(figsize=(VIEW_WIDTH / 72, height / 72), dpi=72)
    ax = fig.add_axes([0, 0, 1, 1])
    ax.set_xlim(xmin, xmax)
    ax.set_ylim(ymin, ymax)
    ax.set_axis_off()
    ax.set_aspect("auto")

    for tr in trajectories:
        ax.plot(tr.points.real, tr.points.imag, color=TRAJECTORY_COLOR, lw=0.6, zorder=1)

    edge_comp = {}
    for cid, comp in enumerate(graph.components):
        for eid in comp.edges:
            edge_comp[eid] = cid
    for eid, e in enumerate(graph.edges):
        (line,) = ax.plot(e.points.real, e.points.imag, color=CURVE_COLOR, lw=1.6, zorder=2)
        line.set_gid(f"component-{edge_comp.get(eid, -1)}-edge-{eid}")

    for k, (a, _) in enumerate(R.poles):
        (dot,) = ax.plot([a.real], [a.imag], "o", color="black", ms=6, zorder=4)
        dot.set_gid(f"pole-{k}")
    for k, (a, _) in enumerate(R.zeros):
        (ring,) = ax.plot([a.real], [a.imag], "o", mfc="white", mec="black", ms=6, mew=1.2, zorder=4)
        ring.set_gid(f"zero-{k}")
    if title:
        ax.text(0.01, 0.99, title, transform=ax.transAxes, va="top", ha="left", fontsize=10)

    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg")
    plt.close(fig)

    dump = path.with_suffix(".json")
    dump.write_text(json.dumps(graph.to_json(), indent=1))
    return path, dump
