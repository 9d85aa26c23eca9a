"""Render canonical documents as epidemic-curve figures.

The report path writes a matplotlib figure next to a canonical delimited
copy of the same data, so a human gets the curve and a machine gets the
rows from one command. Unknown values never draw as zero-height bars; they
are left as gaps and tallied in the legend.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.dates as mdates  # noqa: E402
import matplotlib.pyplot as plt  # noqa: E402

from .containers import CanonicalDocument, write_canonical  # noqa: E402
from .series import UNKNOWN, SeriesContext  # noqa: E402

FIGSIZE = (9, 4.5)
BAR_ALPHA = 0.75


def _context_label(context: SeriesContext, unknowns: int) -> str:
    label = f"{context.location} {context.case_type}"
    if context.demographic != "all":
        label += f" ({context.demographic})"
    if unknowns:
        label += f" [{unknowns} unknown]"
    return label


def render_epi_curve(
    doc: CanonicalDocument,
    path: str | Path,
    *,
    title: str | None = None,
    dpi: int = 150,
) -> Path:
    """Draw one bar per observation interval, grouped by series context."""
    groups: dict[SeriesContext, list] = {}
    for obs in doc.observations:
        groups.setdefault(obs.context, []).append(obs)

    fig, ax = plt.subplots(figsize=FIGSIZE)
    for context in sorted(groups, key=lambda c: (c.location, c.case_type, c.demographic)):
        xs, widths, heights = [], [], []
        unknowns = 0
        for obs in groups[context]:
            if obs.value is UNKNOWN:
                unknowns += 1
                continue
            xs.append(mdates.date2num(obs.interval.start.instant))
            widths.append(obs.interval.duration.total_seconds() / 86400.0)
            heights.append(obs.value)
        ax.bar(
            xs, heights, width=widths, align="edge",
            alpha=BAR_ALPHA, edgecolor="white", linewidth=0.5,
            label=_context_label(context, unknowns),
        )

    ax.set_ylabel("cases")
    ax.xaxis_date()
    locator = mdates.AutoDateLocator()
    ax.xaxis.set_major_locator(locator)
    ax.xaxis.set_major_formatter(mdates.ConciseDateFormatter(locator))
    if title is None:
        title = doc.metadata.case_definition or "case counts"
    ax.set_title(title)
    if groups:
        ax.legend(fontsize=8)
    ax.margins(x=0.01)
    fig.tight_layout()

    out = Path(path)
    fig.savefig(out, dpi=dpi)
    plt.close(fig)
    return out


def write_report(
    doc: CanonicalDocument,
    out_dir: str | Path,
    stem: str,
    *,
    kind: str = "csv",
    title: str | None = None,
) -> tuple[Path, Path]:
    """Write <stem>.<kind> (canonical data) and <stem>.png side by side."""
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    data_path = directory / f"{stem}.{kind}"
    data_path.write_text(write_canonical(doc, kind), "utf-8")
    figure_path = render_epi_curve(doc, directory / f"{stem}.png", title=title)
    return data_path, figure_path
