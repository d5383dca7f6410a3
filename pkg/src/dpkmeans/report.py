"""Serialize experiment reports as JSON, CSV, markdown tables and SVG charts."""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import fields
from html import escape
from pathlib import Path

from .errors import EmptyReport, UnknownFormat
from .harness import CellResult
from .ingest import REGISTRY


class Format(str, enum.Enum):
    JSON = "json"
    CSV = "csv"
    MARKDOWN = "markdown_table"
    SVG = "svg_bar_chart"

    @classmethod
    def parse(cls, value):
        try:
            return cls(value)
        except ValueError:
            raise UnknownFormat(f"unknown format {value!r}; choose from {', '.join(f.value for f in cls)}") from None


EXTENSIONS = {Format.JSON: ".json", Format.CSV: ".csv", Format.MARKDOWN: ".md", Format.SVG: ".svg"}

CSV_FIELDS = [f.name for f in fields(CellResult)]
_INT_FIELDS = {"k", "iterations", "empty_cluster_events"}
_FLOAT_FIELDS = {"sse_model_space", "sse_raw_space", "distance_sum_model_space", "distance_sum_raw_space"}


def render_json(report, include_run_metadata=True):
    # json writes floats via repr: shortest decimal string that round-trips
    return json.dumps(report.to_dict(include_run_metadata), indent=2, allow_nan=False) + "\n"


def render_csv(report):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for cell in report.cells:
        row = {name: getattr(cell, name) for name in CSV_FIELDS}
        row = {k: ("" if v is None else repr(float(v)) if isinstance(v, float) else v) for k, v in row.items()}
        writer.writerow(row)
    return buf.getvalue()


def parse_csv_report(text):
    """Inverse of ``render_csv``: returns a list of CellResult."""
    cells = []
    for row in csv.DictReader(io.StringIO(text)):
        for name in _INT_FIELDS:
            row[name] = int(row[name])
        for name in _FLOAT_FIELDS:
            row[name] = float(row[name])
        row["seed"] = int(row["seed"]) if row["seed"] else None
        cells.append(CellResult(**row))
    return cells


def _title(dataset):
    return REGISTRY[dataset].title if dataset in REGISTRY else dataset


def _best_values(report, metric):
    """{(init, dataset, k): (value, space)} with random collapsed to its best seed."""
    best = {}
    for c in report.cells:
        key = (c.init, c.dataset, c.k)
        v = c.value(metric)
        if key not in best or v < best[key][0]:
            best[key] = (v, c.space)
    return best


def _ordered(items):
    seen = []
    for it in items:
        if it not in seen:
            seen.append(it)
    return seen


def render_markdown(report, metric="sse"):
    """One methods x datasets table per k, each method in its own space."""
    best = _best_values(report, metric)
    inits = _ordered(c.init for c in report.cells)
    datasets = _ordered(c.dataset for c in report.cells)
    lines = []
    for k in sorted({c.k for c in report.cells}):
        lines.append(f"### {metric.upper().replace('_', ' ')}, k = {k}")
        lines.append("")
        lines.append("| Method | " + " | ".join(_title(d) for d in datasets) + " |")
        lines.append("|---|" + "---:|" * len(datasets))
        for init in inits:
            vals, spaces = [], set()
            for d in datasets:
                hit = best.get((init, d, k))
                if hit is None:
                    vals.append("n/a")
                else:
                    vals.append(f"{hit[0]:.3f}")
                    spaces.add(hit[1])
            space = "/".join(sorted(s.replace("_space", "") for s in spaces))
            label = f"{init} ({space})" if space else init
            lines.append(f"| {label} | " + " | ".join(vals) + " |")
        lines.append("")
    if report.failed:
        lines.append(f"{len(report.failed)} cell(s) failed; see the JSON report for details.")
        lines.append("")
    return "\n".join(lines)


PALETTE = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948"]


def render_svg(report, metric="sse"):
    """Grouped bars, one panel per dataset (each with its own y scale).

    Within a panel bars are grouped by k, one bar per initializer; random
    shows its best seed.
    """
    best = _best_values(report, metric)
    inits = _ordered(c.init for c in report.cells)
    datasets = _ordered(c.dataset for c in report.cells)
    ks = sorted({c.k for c in report.cells})

    bar_w, gap, group_gap = 22, 4, 26
    panel_h, top, bottom, left = 220, 40, 40, 60
    group_w = len(inits) * (bar_w + gap) - gap
    panel_w = left + len(ks) * (group_w + group_gap) + 20
    width = max(panel_w * len(datasets), 360)
    height = top + panel_h + bottom + 30

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<text x="10" y="18" font-size="14" font-weight="bold">{escape(metric.upper())} by initializer '
        f'(lower is better)</text>',
    ]
    for p, ds in enumerate(datasets):
        x0 = p * panel_w
        vals = [best[(i, ds, k)][0] for i in inits for k in ks if (i, ds, k) in best]
        vmax = max(vals) if vals and max(vals) > 0 else 1.0
        base_y = top + panel_h
        out.append(f'<text x="{x0 + left}" y="{top - 8}" font-weight="bold">{escape(_title(ds))}</text>')
        out.append(f'<line x1="{x0 + left}" y1="{top}" x2="{x0 + left}" y2="{base_y}" stroke="#333"/>')
        out.append(f'<line x1="{x0 + left}" y1="{base_y}" x2="{x0 + panel_w - 20}" y2="{base_y}" stroke="#333"/>')
        out.append(f'<text x="{x0 + left - 4}" y="{top + 4}" text-anchor="end">{vmax:.4g}</text>')
        out.append(f'<text x="{x0 + left - 4}" y="{base_y}" text-anchor="end">0</text>')
        for g, k in enumerate(ks):
            gx = x0 + left + group_gap / 2 + g * (group_w + group_gap)
            out.append(f'<text x="{gx + group_w / 2:.1f}" y="{base_y + 16}" text-anchor="middle">k = {k}</text>')
            for b, init in enumerate(inits):
                hit = best.get((init, ds, k))
                if hit is None:
                    continue
                h = panel_h * hit[0] / vmax
                bx = gx + b * (bar_w + gap)
                out.append(
                    f'<rect x="{bx:.1f}" y="{base_y - h:.1f}" width="{bar_w}" height="{h:.1f}" '
                    f'fill="{PALETTE[b % len(PALETTE)]}"><title>{escape(init)} {ds} k={k}: {hit[0]!r}</title></rect>'
                )
                out.append(f'<text x="{bx + bar_w / 2:.1f}" y="{base_y - h - 3:.1f}" text-anchor="middle" '
                           f'font-size="8">{hit[0]:.3g}</text>')
    ly = height - 12
    for b, init in enumerate(inits):
        lx = 10 + b * 110
        out.append(f'<rect x="{lx}" y="{ly - 9}" width="10" height="10" fill="{PALETTE[b % len(PALETTE)]}"/>')
        out.append(f'<text x="{lx + 14}" y="{ly}">{escape(init)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(report, fmt, metric="sse"):
    fmt = Format.parse(fmt)
    if not report.cells:
        raise EmptyReport("report has no successful cells to emit")
    if fmt is Format.JSON:
        return render_json(report)
    if fmt is Format.CSV:
        return render_csv(report)
    if fmt is Format.MARKDOWN:
        return render_markdown(report, metric)
    return render_svg(report, metric)


def emit_report(report, fmt, path, metric="sse"):
    """Write ``report`` to ``path`` in the given format; returns the path."""
    text = render(report, fmt, metric)
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    return path
