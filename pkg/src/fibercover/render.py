"""Report container and its three renderings: plain text, long-format CSV, SVG sketch.

CSV columns are always ``record,index,field,value``: one row per scalar
fact, ``record`` names the table (``component``, ``singular_point``, ...),
``index`` numbers rows within it.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from fibercover import __version__
from fibercover.claims import COUNTEREXAMPLE, CheckResult

CSV_HEADER = ("record", "index", "field", "value")


def fmt_real(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        return str(x)
    return f"{x + 0.0:.10g}"


def fmt_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return fmt_real(z.real)
    if z.real == 0:
        return f"{fmt_real(z.imag)}j"
    sign = "+" if z.imag >= 0 else "-"
    return f"{fmt_real(z.real)}{sign}{fmt_real(abs(z.imag))}j"


def fmt_points(zs) -> str:
    return "[" + ", ".join(fmt_complex(z) for z in zs) + "]"


@dataclass
class Sketch:
    points: list[complex] = field(default_factory=list)
    labels: list[str] = field(default_factory=list)
    badges: list[str] = field(default_factory=list)
    paths: list[list[complex]] = field(default_factory=list)
    connect_points: bool = True


@dataclass
class Report:
    command: str
    input_doc: dict | None
    lines: list[str] = field(default_factory=list)
    records: list[tuple[str, int, str, str]] = field(default_factory=list)
    checks: list[CheckResult] = field(default_factory=list)
    sketch: Sketch = field(default_factory=Sketch)

    def add(self, line: str = "") -> None:
        self.lines.append(line)

    def record(self, name: str, index: int, **values) -> None:
        for k, v in values.items():
            self.records.append((name, index, k, v if isinstance(v, str) else _cell(v)))

    @property
    def has_counterexample(self) -> bool:
        return any(c.verdict == COUNTEREXAMPLE for c in self.checks)


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, complex):
        return fmt_complex(v)
    if isinstance(v, float):
        return fmt_real(v)
    return str(v)


def render_text(report: Report, elapsed: float | None = None) -> str:
    out = [f"fibercover {__version__} report", f"command: {report.command}"]
    if report.input_doc is not None:
        out.append("input: " + json.dumps(report.input_doc, sort_keys=True, separators=(",", ":")))
    out.append("")
    out.extend(report.lines)
    if report.checks:
        out.append("")
        out.append("claim checks:")
        for c in report.checks:
            out.append(f"  [{c.verdict}] {c.name}: {c.detail}")
        bad = [c.name for c in report.checks if c.verdict == COUNTEREXAMPLE]
        out.append(f"status: {'counterexample-candidate in ' + ', '.join(bad) if bad else 'no counterexample'}")
    if elapsed is not None:
        out.append(f"elapsed: {elapsed:.3f} s")
    return "\n".join(out) + "\n"


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in report.records:
        w.writerow(row)
    for k, c in enumerate(report.checks):
        w.writerow(("claim_check", k, "name", c.name))
        w.writerow(("claim_check", k, "verdict", c.verdict))
        w.writerow(("claim_check", k, "detail", c.detail))
    return buf.getvalue()


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_svg(report: Report, width: int = 480, height: int = 360) -> str:
    """Static sketch: branch points numbered in loop order, optional paths, summary badges."""
    sk = report.sketch
    every = list(sk.points) + [z for p in sk.paths for z in p]
    if every:
        xs = [z.real for z in every]
        ys = [z.imag for z in every]
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    else:
        x0 = x1 = y0 = y1 = 0.0
    span = max(x1 - x0, y1 - y0, 1.0)
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    plot_top = 30 + 16 * len(sk.badges)
    plot_h = height - plot_top - 20
    scale = 0.8 * min(width - 40, plot_h) / span

    def pos(z: complex) -> tuple[str, str]:
        x = width / 2 + (z.real - cx) * scale
        y = plot_top + plot_h / 2 - (z.imag - cy) * scale
        return f"{x:.2f}", f"{y:.2f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="10" y="18" font-family="monospace" font-size="13">{_esc(report.command)}</text>',
    ]
    for k, b in enumerate(sk.badges):
        out.append(f'<text x="10" y="{34 + 16 * k}" font-family="monospace" font-size="11">{_esc(b)}</text>')
    for p in sk.paths:
        pts = " ".join(",".join(pos(z)) for z in p)
        out.append(f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="1"/>')
    if sk.connect_points and len(sk.points) > 1:
        pts = " ".join(",".join(pos(z)) for z in sk.points)
        out.append(f'<polyline points="{pts}" fill="none" stroke="gray" stroke-dasharray="4 3"/>')
    for k, z in enumerate(sk.points):
        x, y = pos(z)
        label = sk.labels[k] if k < len(sk.labels) else str(k)
        out.append(f'<circle cx="{x}" cy="{y}" r="4" fill="crimson"/>')
        out.append(f'<text x="{x}" y="{y}" dx="6" dy="-6" font-family="monospace" font-size="11">{_esc(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
