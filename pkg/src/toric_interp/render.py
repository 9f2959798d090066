"""SVG drawings of subdivisions in the style of hatched degeneration figures."""

from __future__ import annotations

import io
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle, Polygon  # noqa: E402

from .lattice import Point  # noqa: E402
from .subdivision import Subdivision  # noqa: E402

_STYLE = {
    "svg.hashsalt": "toric-interp",
    "svg.fonttype": "none",
    "path.simplify": False,
}


def render_svg(S: Subdivision, marked: Sequence[int] = (), uncovered: Sequence[Point] = (), title: str | None = None) -> str:
    """Lattice dots, cell edges, hatched marked cells and circled uncovered points.

    Patches carry the SVG ids cell-<i>, marked-<i> and uncovered-<k>.
    """
    x0, y0, x1, y1 = S.region.bbox
    w, h = x1 - x0, y1 - y0
    scale = 0.45
    marked_set = set(marked)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(max(w, 1) * scale + 0.8, max(h, 1) * scale + 0.8))
        for i, cell in enumerate(S.cells):
            special = i in marked_set
            ax.add_patch(
                Polygon(
                    cell.polygon.vertices,
                    closed=True,
                    facecolor="0.85" if special else "none",
                    hatch="///" if special else None,
                    edgecolor="black",
                    linewidth=1.4 if special else 0.6,
                    zorder=2 if special else 1,
                    gid=f"marked-{i}" if special else f"cell-{i}",
                )
            )
        xs = [p[0] for p in S.region.points]
        ys = [p[1] for p in S.region.points]
        ax.scatter(xs, ys, s=9, color="black", zorder=3)
        for k, p in enumerate(uncovered):
            ax.add_patch(Circle(p, 0.28, fill=False, edgecolor="black", linewidth=1.0, zorder=4, gid=f"uncovered-{k}"))
        ax.set_xlim(x0 - 0.5, x1 + 0.5)
        ax.set_ylim(y0 - 0.5, y1 + 0.5)
        ax.set_aspect("equal")
        ax.axis("off")
        if title:
            ax.set_title(title, fontsize=9)
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None}, bbox_inches="tight")
        plt.close(fig)
    return buf.getvalue()


def render_certificate(cert, title: str | None = None) -> str:
    return render_svg(cert.subdivision, cert.marked, cert.uncovered, title if title is not None else cert.meta.get("name"))
