"""Ranked recall-initiator reports and their renderers.

Rankings sort by descending case count with lexicographic tie-breaks and
carry each entry's share of the clustered total. Renderers are pure
functions from a report model to bytes, in markdown, CSV, JSON, or a
dependency-free SVG bar chart.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .dataset import RecallRecord
from .errors import ContractError, DataError, UsageError

FORMATS = ("markdown", "csv", "json", "svg-bars")
SCHEMA_VERSION = 1

UNSPECIFIED = "(unspecified)"


@dataclass(frozen=True)
class RankedEntry:
    """One ranked row: member labels, case count and share of the total."""

    rank: int
    members: tuple[str, ...]
    count: int
    share: float

    @property
    def display_label(self) -> str:
        if len(self.members) == 1:
            return self.members[0]
        return str(list(self.members))


@dataclass
class RankedReport:
    """A titled ranking plus the denominator its shares were computed from."""

    title: str
    entries: list[RankedEntry]
    total_count: int
    grouped: bool = False
    metadata: dict = field(default_factory=dict)


@dataclass
class ComparisonReport:
    """Side-by-side top-k of two rankings."""

    title: str
    before: RankedReport
    after: RankedReport
    k: int = 10


def _coerce_item(item) -> tuple[tuple[str, ...], int]:
    if hasattr(item, "members"):
        return tuple(item.members), int(item.total_count)
    if hasattr(item, "label"):
        return (str(item.label),), int(item.count)
    members, count = item
    if isinstance(members, str):
        members = (members,)
    return tuple(members), int(count)


def rank_initiators(items: Sequence) -> list[RankedEntry]:
    """Rank cluster summaries or aggregated groups by descending count.

    Shares use the summed input count as denominator (noise is already
    excluded upstream). Ties order lexicographically by first member label;
    ranks are contiguous from 1.
    """
    pairs = [_coerce_item(item) for item in items]
    if not pairs:
        raise DataError("nothing to rank: empty input")
    total = sum(count for _, count in pairs)
    pairs.sort(key=lambda pc: (-pc[1], pc[0][0]))
    return [
        RankedEntry(rank=i, members=members, count=count, share=count / total)
        for i, (members, count) in enumerate(pairs, start=1)
    ]


def _counted_ranking(values: Iterable[str], k: int) -> list[RankedEntry]:
    if k < 1:
        raise ContractError(f"k must be >= 1, got {k}")
    counts: dict[str, int] = {}
    total = 0
    for value in values:
        key = value if value else UNSPECIFIED
        counts[key] = counts.get(key, 0) + 1
        total += 1
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [
        RankedEntry(rank=i, members=(name,), count=count, share=count / total)
        for i, (name, count) in enumerate(ordered[:k], start=1)
    ]


def top_firms(records: Sequence[RecallRecord], k: int = 10) -> list[RankedEntry]:
    """Firms ranked by recall-record count; blank firms bucket as (unspecified)."""
    return _counted_ranking((r.recalling_firm for r in records), k)


def top_devices(records: Sequence[RecallRecord], k: int = 10) -> list[RankedEntry]:
    """Device names ranked by recall-record count; blanks bucket as (unspecified)."""
    return _counted_ranking((r.device_name for r in records), k)


# ---------------------------------------------------------------------------
# Renderers
# ---------------------------------------------------------------------------


def _md_escape(s: str) -> str:
    return s.replace("|", "\\|")


def _report_markdown(report: RankedReport) -> str:
    lines = [f"## {report.title}", ""]
    for key in sorted(report.metadata):
        lines.append(f"- {key}: {report.metadata[key]}")
    if report.metadata:
        lines.append("")
    lines.append("| Rank | Initiator | Cases | Share |")
    lines.append("|-----:|-----------|------:|------:|")
    for e in report.entries:
        lines.append(
            f"| {e.rank} | {_md_escape(e.display_label)} | {e.count} | {e.share:.2%} |"
        )
    lines.append("")
    return "\n".join(lines)


def _report_csv(report: RankedReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["rank", "initiator", "cases", "share"])
    for e in report.entries:
        writer.writerow([e.rank, e.display_label, e.count, f"{e.share:.6f}"])
    return buf.getvalue()


def _report_json_dict(report: RankedReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "title": report.title,
        "grouped": report.grouped,
        "total_count": report.total_count,
        "metadata": report.metadata,
        "entries": [
            {
                "rank": e.rank,
                "members": list(e.members),
                "count": e.count,
                "share": e.share,
            }
            for e in report.entries
        ],
    }


def _svg_escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _report_svg(report: RankedReport) -> str:
    """Horizontal bar chart: counts as bar lengths, labels as axis text."""
    width, left, right, top, row_h = 960, 340, 80, 56, 26
    entries = report.entries
    height = top + row_h * max(1, len(entries)) + 24
    plot_w = width - left - right
    max_count = max((e.count for e in entries), default=1)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
        f'<text x="16" y="28" font-family="sans-serif" font-size="18" font-weight="bold">'
        f"{_svg_escape(report.title)}</text>",
    ]
    for i, e in enumerate(entries):
        y = top + i * row_h
        bar_w = plot_w * e.count / max_count
        label = e.display_label
        if len(label) > 44:
            label = label[:43] + "…"
        parts.append(
            f'<text x="{left - 8}" y="{y + 14}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12">{_svg_escape(label)}</text>'
        )
        parts.append(
            f'<rect x="{left}" y="{y}" width="{bar_w:.1f}" height="{row_h - 7}" fill="#31688e"/>'
        )
        parts.append(
            f'<text x="{left + bar_w + 6:.1f}" y="{y + 14}" '
            f'font-family="sans-serif" font-size="12">{e.count}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _comparison_rows(comparison: ComparisonReport) -> list[tuple[str, str, str]]:
    before = comparison.before.entries[: comparison.k]
    after = comparison.after.entries[: comparison.k]
    rows = []
    for i in range(max(len(before), len(after))):
        b = before[i].display_label if i < len(before) else ""
        a = str(list(after[i].members)) if i < len(after) else ""
        rows.append((str(i + 1), b, a))
    return rows


def _comparison_markdown(comparison: ComparisonReport) -> str:
    k = comparison.k
    lines = [
        f"## {comparison.title}",
        "",
        f"| Rank | Top {k} before aggregation | Top {k} after aggregation |",
        "|-----:|---------------------------|---------------------------|",
    ]
    for rank, b, a in _comparison_rows(comparison):
        lines.append(f"| {rank} | {_md_escape(b)} | {_md_escape(a)} |")
    lines.append("")
    return "\n".join(lines)


def _comparison_csv(comparison: ComparisonReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["rank", "before_aggregation", "after_aggregation"])
    for row in _comparison_rows(comparison):
        writer.writerow(row)
    return buf.getvalue()


def _comparison_json_dict(comparison: ComparisonReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "title": comparison.title,
        "k": comparison.k,
        "before": _report_json_dict(comparison.before),
        "after": _report_json_dict(comparison.after),
    }


def render(model: RankedReport | ComparisonReport, fmt: str) -> bytes:
    """Render a report model to bytes; deterministic for a given model."""
    if fmt not in FORMATS:
        raise UsageError(f"unsupported format {fmt!r}; choose one of {', '.join(FORMATS)}")
    if isinstance(model, RankedReport):
        if fmt == "markdown":
            text = _report_markdown(model)
        elif fmt == "csv":
            text = _report_csv(model)
        elif fmt == "json":
            text = json.dumps(_report_json_dict(model), indent=2, ensure_ascii=False) + "\n"
        else:
            text = _report_svg(model)
        return text.encode("utf-8")
    if isinstance(model, ComparisonReport):
        if fmt == "markdown":
            text = _comparison_markdown(model)
        elif fmt == "csv":
            text = _comparison_csv(model)
        elif fmt == "json":
            text = json.dumps(_comparison_json_dict(model), indent=2, ensure_ascii=False) + "\n"
        else:
            raise UsageError("svg-bars does not apply to comparison reports")
        return text.encode("utf-8")
    raise UsageError(f"cannot render object of type {type(model).__name__}")
