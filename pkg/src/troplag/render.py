"""Deterministic SVG output for fans, tropical multi-sections and point clouds.

Every number goes through ``num`` (6 significant digits) and elements are
emitted in a fixed order, so identical input gives byte-identical files.
"""
from __future__ import annotations

import math
from typing import Iterable, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

import numpy as np

from .errors import EmptySubject
from .fan import Fan
from .multisection import GenericityReport, TropicalMultiSection, genericity_count

SIZE = 480
SHEET_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def num(x: float) -> str:
    s = f"{float(x):.6g}"
    return "0" if s == "-0" else s


class SvgDoc:
    def __init__(self, width: int = SIZE, height: int = SIZE, title: str = ""):
        self.width, self.height = width, height
        self.items: List[str] = []
        if title:
            self.items.append(f"<title>{escape(title)}</title>")
        self.items.append(f'<rect width="{width}" height="{height}" fill="#fff"/>')

    def line(self, x1, y1, x2, y2, cls: str, stroke: str = "#000", width: float = 1.5):
        self.items.append(f'<line class="{cls}" x1="{num(x1)}" y1="{num(y1)}" x2="{num(x2)}" y2="{num(y2)}" '
                          f'stroke="{stroke}" stroke-width="{num(width)}"/>')

    def circle(self, cx, cy, r, cls: str, fill: str = "#000", stroke: str = "none"):
        self.items.append(f'<circle class="{cls}" cx="{num(cx)}" cy="{num(cy)}" r="{num(r)}" '
                          f'fill="{fill}" stroke="{stroke}"/>')

    def text(self, x, y, s: str, cls: str, size: int = 12, anchor: str = "middle"):
        self.items.append(f'<text class="{cls}" x="{num(x)}" y="{num(y)}" font-size="{size}" '
                          f'font-family="sans-serif" text-anchor="{anchor}">{escape(s)}</text>')

    def cross(self, cx, cy, h, cls: str, stroke: str = "#000"):
        self.items.append(f'<path class="{cls}" d="M{num(cx - h)} {num(cy - h)}L{num(cx + h)} {num(cy + h)}'
                          f'M{num(cx - h)} {num(cy + h)}L{num(cx + h)} {num(cy - h)}" stroke="{stroke}" '
                          f'stroke-width="2" fill="none"/>')

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" '
                f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">')
        return "\n".join([head] + self.items + ["</svg>", ""])


def _to_screen(x: float, y: float, scale: float) -> Tuple[float, float]:
    c = SIZE / 2
    return c + scale * x, c - scale * y


def _draw_fan(doc: SvgDoc, fan: Fan, labels: Optional[Sequence[str]] = None):
    scale = SIZE * 0.4
    rays = fan.ray_vectors
    for j, v in enumerate(rays):
        n = math.hypot(v.x, v.y)
        x, y = _to_screen(v.x / n, v.y / n, scale)
        doc.line(SIZE / 2, SIZE / 2, x, y, "ray")
        lx, ly = _to_screen(1.08 * v.x / n, 1.08 * v.y / n, scale)
        doc.text(lx, ly + 4, f"({v.x},{v.y})", "ray-label", 11)
    for j in range(fan.n):
        a = rays[j]
        b = rays[(j + 1) % fan.n]
        mx = a.x / math.hypot(a.x, a.y) + b.x / math.hypot(b.x, b.y)
        my = a.y / math.hypot(a.x, a.y) + b.y / math.hypot(b.x, b.y)
        m = math.hypot(mx, my) or 1.0
        if a.cross(b) < 0 or m < 1e-9:  # reflex or straight cone: bisect the other way
            mx, my = -mx, -my
            m = math.hypot(mx, my) or 1.0
        x, y = _to_screen(0.55 * mx / m, 0.55 * my / m, scale)
        doc.text(x, y, f"cone {j}", "cone-label", 12)
        if labels is not None:
            doc.text(x, y + 14, labels[j], "lift-label", 10)


def render_fan(fan: Fan) -> str:
    doc = SvgDoc(title="fan")
    _draw_fan(doc, fan)
    return doc.render()


def render_tropical(ts: TropicalMultiSection, report: Optional[GenericityReport] = None) -> str:
    report = genericity_count(ts) if report is None else report
    labels = []
    for j in range(ts.fan.n):
        lifts = sorted(ts.lifts_over(j), key=lambda l: l.sheet)
        labels.append(" ".join(f"{l.sheet}:({l.slope.x},{l.slope.y})" for l in lifts))
    doc = SvgDoc(title=f"tropical multi-section ({ts.kind}, r={ts.r})")
    _draw_fan(doc, ts.fan, labels)
    scale = SIZE * 0.4
    for c in sorted(report.crossings, key=lambda c: (c.psi, c.arc_id)):
        n = math.hypot(c.direction.x, c.direction.y)
        x, y = _to_screen(0.8 * c.direction.x / n, 0.8 * c.direction.y / n, scale)
        doc.cross(x, y, 6, "crossing", "#d62728")
    n_txt = "Fail" if not report.ok else str(report.N)
    doc.text(12, 20, f"N = {n_txt}", "genericity", 14, "start")
    return doc.render()


def render_cloud(xi: np.ndarray, sheet: np.ndarray, immersed: Iterable[Tuple[float, float]] = (),
                 branch_points: Iterable[Tuple[float, float]] = (), max_points: int = 20_000) -> str:
    xi = np.asarray(xi, dtype=complex)
    sheet = np.asarray(sheet, dtype=int)
    if xi.size == 0:
        raise EmptySubject("point cloud is empty")
    if xi.size > max_points:
        step = int(math.ceil(xi.size / max_points))
        xi, sheet = xi[::step], sheet[::step]
    extent = float(np.max(np.abs(np.concatenate([xi.real, xi.imag])))) or 1.0
    scale = SIZE * 0.45 / extent
    doc = SvgDoc(title="Lagrangian point cloud, xi projection")
    for b in sorted(set(sheet.tolist())):
        doc.items.append(f'<g class="sheet" data-sheet="{b}">')
        for z in xi[sheet == b]:
            x, y = _to_screen(z.real, z.imag, scale)
            doc.circle(x, y, 1.0, "pt", SHEET_COLORS[b % len(SHEET_COLORS)])
        doc.items.append("</g>")
    for p in sorted(branch_points):
        x, y = _to_screen(p[0], p[1], scale)
        doc.circle(x, y, 5, "branch", "none", "#000")
    for p in sorted(immersed):
        x, y = _to_screen(p[0], p[1], scale)
        doc.cross(x, y, 6, "immersed", "#000")
    return doc.render()


def render_svg(subject, **style) -> str:
    """Dispatch on the subject: Fan, TropicalMultiSection or a point cloud (anything with .xi and .sheet)."""
    if subject is None:
        raise EmptySubject("nothing to render")
    if isinstance(subject, TropicalMultiSection):
        return render_tropical(subject, style.get("report"))
    if isinstance(subject, Fan):
        return render_fan(subject)
    if hasattr(subject, "xi") and hasattr(subject, "sheet"):
        return render_cloud(subject.xi, subject.sheet, style.get("immersed", ()), style.get("branch_points", ()))
    raise EmptySubject(f"cannot render {type(subject).__name__}")
