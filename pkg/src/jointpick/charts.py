"""SVG renderings of figure datasets (matplotlib, fonts embedded as paths).

Charts are conveniences; the CSV datasets are what the checks read.
"""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_RC = {"svg.hashsalt": "jointpick", "svg.fonttype": "path", "font.size": 9}


def _to_svg(fig) -> str:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    return buf.getvalue()


def line_chart(rows, x: str, y: str, group: str, baseline: float | None = None,
               title: str = "", ylabel: str = "P(best item chosen)") -> str:
    """One line per distinct ``group`` value, with an optional horizontal reference."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for g in sorted({r[group] for r in rows}):
            pts = sorted((r[x], r[y]) for r in rows if r[group] == g)
            ax.plot(*zip(*pts), marker="o", label=f"{group}={g:g}")
        if baseline is not None:
            ax.axhline(baseline, color="black", lw=1.2, label="algorithm alone")
        ax.set_xlabel(x)
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.legend(fontsize=7)
        fig.tight_layout()
        return _to_svg(fig)


def heatmap(rows, x: str, y: str, value: str, mask: str,
            overlays: dict[str, str] | None = None, title: str = "") -> str:
    """Filled contour of ``value`` over the ``(x, y)`` grid with boolean-column outlines."""
    xs = np.array(sorted({r[x] for r in rows}))
    ys = np.array(sorted({r[y] for r in rows}))
    lookup = {(r[x], r[y]): r for r in rows}

    def grid(col, cast=float):
        return np.array([[cast(lookup[(xv, yv)][col]) for xv in xs] for yv in ys])

    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 4.2))
        cs = ax.contourf(xs, ys, grid(value), levels=12, cmap="viridis")
        fig.colorbar(cs, ax=ax, label=value)
        layers = {mask: "tab:blue", **(overlays or {})}
        for col, color in layers.items():
            g = grid(col, lambda v: 1.0 if v else 0.0)
            if g.max() > 0 and g.min() < 1:
                ax.contour(xs, ys, g, levels=[0.5], colors=[color], linewidths=1.6)
            ax.plot([], [], color=color, label=col)
        lo, hi = max(xs.min(), ys.min()), min(xs.max(), ys.max())
        ax.plot([lo, hi], [lo, hi], color="red", lw=0.8, ls="--", label="y = x")
        ax.set_xlabel(x)
        ax.set_ylabel(y)
        ax.set_title(title)
        ax.legend(fontsize=6, loc="lower right")
        fig.tight_layout()
        return _to_svg(fig)
