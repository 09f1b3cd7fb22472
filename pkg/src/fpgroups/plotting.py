"""Report figures: enumeration traces and derived-series levels.

Rendering goes through the Agg backend with PNG metadata stripped, so the
bytes depend only on the data.
"""

from __future__ import annotations

import io
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .coset_enum import EnumStats  # noqa: E402

_RC = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def _png(fig) -> bytes:
    buf = io.BytesIO()
    fig.savefig(buf, format="png", dpi=120, metadata={"Software": None})
    plt.close(fig)
    return buf.getvalue()


def enumeration_trace(stats: EnumStats, title: str = "", bound: int | None = None) -> bytes:
    """Active cosets against cosets defined so far."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 3.2))
        pts = stats.trace or ((stats.total_defined, stats.active),)
        xs = [a for a, _ in pts]
        ys = [b for _, b in pts]
        ax.plot(xs, ys, lw=1.2, color="#1f5f8b")
        if bound is not None and 2 * stats.max_active >= bound:
            ax.axhline(bound, ls="--", lw=0.8, color="#b03a2e", label=f"bound {bound}")
            ax.legend(frameon=False, loc="upper left")
        ax.set_xlabel("cosets defined")
        ax.set_ylabel("active cosets")
        ax.set_title(title or f"max active {stats.max_active}, final {stats.active}")
        fig.tight_layout()
        return _png(fig)


def derived_levels(labels: Sequence[str], ngens: Sequence[int], indices: Sequence[int | None], title: str = "") -> bytes:
    """Generator count per level, annotated with the abelianization and next index."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 3.2))
        xs = range(len(ngens))
        ax.bar(xs, ngens, color="#7a9e7e", width=0.6)
        for x, n, lab, idx in zip(xs, ngens, labels, indices):
            text = lab if idx is None else f"{lab}\nindex {idx}"
            ax.annotate(text, (x, n), ha="center", va="bottom", fontsize=8,
                        xytext=(0, 2), textcoords="offset points")
        ax.set_xticks(list(xs), [f"G({i})" if i else "G" for i in xs])
        ax.set_ylabel("generators after simplification")
        ax.set_ylim(0, max(ngens + [1]) * 1.35)
        if title:
            ax.set_title(title)
        fig.tight_layout()
        return _png(fig)


def scan_orders(labels: Sequence[str], orders: Sequence[int | None], bound: int) -> bytes:
    """Quotient order per scanned relator; overflow drawn at the coset bound."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(max(4, 0.45 * len(labels) + 1.5), 3.4))
        xs = range(len(labels))
        heights = [bound if o is None else o for o in orders]
        colors = ["#b03a2e" if o is None else "#1f5f8b" for o in orders]
        ax.bar(xs, heights, color=colors, width=0.6)
        ax.set_yscale("log")
        ax.set_xticks(list(xs), labels, rotation=60, ha="right", fontsize=7)
        ax.set_ylabel("quotient order (red: overflow)")
        fig.tight_layout()
        return _png(fig)
