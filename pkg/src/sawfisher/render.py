"""Static SVG and DOT figures.

Layouts are fixed: periodic lattices use their cell embedding, the tree is
drawn radially by depth, and gasket iterates use the affine triangle
embedding.  Apart from the version banner comment, output depends only on
the inputs.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from . import __version__
from .errors import UnsupportedKind
from .lattice import BLACK, TRIANGLE, BallGraph, ball_to_dot

KINDS = ("lattice_ball", "fisher_image", "gasket", "convergence_plot", "series_plot")
SIZE = 640
MARGIN = 24


def _f(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


class _Canvas:
    def __init__(self, width: int = SIZE, height: int = SIZE, title: str = ""):
        self.width = width
        self.height = height
        self.parts: list[str] = []
        self.title = title

    def add(self, element: str) -> None:
        self.parts.append(element)

    def line(self, a, b, stroke="#000", width=1.0, dash: str | None = None) -> None:
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.add(
            f'<line x1="{_f(a[0])}" y1="{_f(a[1])}" x2="{_f(b[0])}" y2="{_f(b[1])}" '
            f'stroke="{stroke}" stroke-width="{width}"{extra}/>'
        )

    def circle(self, c, r, fill="#fff", stroke="#000") -> None:
        self.add(f'<circle cx="{_f(c[0])}" cy="{_f(c[1])}" r="{_f(r)}" fill="{fill}" stroke="{stroke}"/>')

    def polyline(self, pts, stroke="#000", width=1.5) -> None:
        coords = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
        self.add(f'<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="{width}"/>')

    def text(self, p, s, size=11, anchor="start") -> None:
        self.add(
            f'<text x="{_f(p[0])}" y="{_f(p[1])}" font-size="{size}" '
            f'font-family="sans-serif" text-anchor="{anchor}">{escape(s)}</text>'
        )

    def render(self) -> str:
        head = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f"<!-- sawfisher {__version__} -->",
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">',
        ]
        if self.title:
            head.append(f"<title>{escape(self.title)}</title>")
        head.append(f'<rect width="{self.width}" height="{self.height}" fill="#fff"/>')
        return "\n".join(head + self.parts + ["</svg>"]) + "\n"


def _fit(points: list[tuple[float, float]], size: int = SIZE):
    """Map world coordinates into the canvas, y pointing up, aspect kept."""
    xs = [p[0] for p in points] or [0.0]
    ys = [p[1] for p in points] or [0.0]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-9)
    scale = (size - 2 * MARGIN) / span
    ox = MARGIN + ((size - 2 * MARGIN) - (x1 - x0) * scale) / 2
    oy = MARGIN + ((size - 2 * MARGIN) - (y1 - y0) * scale) / 2

    def to(p):
        return (ox + (p[0] - x0) * scale, size - (oy + (p[1] - y0) * scale))

    return to, scale


def _radial_layout(ball: BallGraph) -> list[tuple[float, float]]:
    rings: dict[int, list[int]] = {}
    for i, d in enumerate(ball.dist):
        rings.setdefault(int(d), []).append(i)
    pos = [(0.0, 0.0)] * len(ball.vertices)
    for d, members in rings.items():
        for k, i in enumerate(members):
            if d == 0 and len(members) == 1:
                pos[i] = (0.0, 0.0)
                continue
            a = 2 * math.pi * (k + 0.5) / len(members)
            pos[i] = (d * math.cos(a), d * math.sin(a))
    return pos


def _ball_positions(ball: BallGraph) -> list[tuple[float, float]]:
    pos = [ball.spec.position(v) for v in ball.vertices]
    if any(p is None for p in pos):
        return _radial_layout(ball)
    return pos


def ball_svg(ball: BallGraph) -> str:
    """Ball drawing: black vertices filled, triangle-origin edges in red."""
    world = _ball_positions(ball)
    to, scale = _fit(world)
    pts = [to(p) for p in world]
    cv = _Canvas(title=f"{ball.spec.name}, radius {ball.radius}")
    for me in ball.edges:
        a, b = ball.index[me.u], ball.index[me.v]
        if me.origin == TRIANGLE:
            cv.line(pts[a], pts[b], stroke="#c0392b", width=1.5)
        else:
            cv.line(pts[a], pts[b])
    r = max(1.5, min(5.0, 0.12 * scale))
    for i, v in enumerate(ball.vertices):
        fill = "#000" if ball.spec.colour(v.local) == BLACK else "#fff"
        cv.circle(pts[i], r, fill=fill)
    return cv.render()


def gasket_svg(gasket) -> str:
    world = list(gasket.positions) + [p for _, p in gasket.stubs]
    to, scale = _fit(world)
    pts = [to(p) for p in gasket.positions]
    cv = _Canvas(title=f"gasket iterate, {gasket.n_vertices} vertices")
    for a, b in gasket.edges:
        cv.line(pts[a], pts[b])
    for v, end in gasket.stubs:
        cv.line(pts[v], to(end), dash="3,3")
    r = max(1.0, min(4.0, 0.08 * scale))
    for p in pts:
        cv.circle(p, r, fill="#000")
    return cv.render()


def gasket_dot(gasket) -> str:
    lines = ['graph "gasket" {', "  node [shape=point];"]
    for i, (x, y) in enumerate(gasket.positions):
        lines.append(f'  n{i} [pos="{x:.4f},{y:.4f}!"];')
    for k, (v, (x, y)) in enumerate(gasket.stubs):
        lines.append(f'  s{k} [shape=none, label="", pos="{x:.4f},{y:.4f}!"];')
        lines.append(f"  n{v} -- s{k} [style=dashed];")
    for a, b in gasket.edges:
        lines.append(f"  n{a} -- n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _plot(xs: list[float], series: list[tuple[str, list[float], str]], title: str, xlabel: str,
          hlines: list[tuple[float, str]] = ()) -> str:
    """Minimal line chart with axes, tick labels and optional horizontal guides."""
    width, height = SIZE, 420
    left, right, top, bottom = 70, 20, 30, 50
    ys = [y for _, vals, _ in series for y in vals] + [y for y, _ in hlines]
    y0, y1 = min(ys), max(ys)
    if y1 - y0 < 1e-12:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    x0, x1 = min(xs), max(xs)
    if x1 == x0:
        x1 = x0 + 1

    def to(x, y):
        px = left + (x - x0) / (x1 - x0) * (width - left - right)
        py = top + (y1 - y) / (y1 - y0) * (height - top - bottom)
        return px, py

    cv = _Canvas(width, height, title)
    cv.text((width / 2, 18), title, size=13, anchor="middle")
    cv.line(to(x0, y0), to(x1, y0))
    cv.line(to(x0, y0), to(x0, y1))
    for k in range(6):
        y = y0 + (y1 - y0) * k / 5
        p = to(x0, y)
        cv.line((p[0] - 4, p[1]), p)
        cv.text((p[0] - 6, p[1] + 4), f"{y:.4g}", size=10, anchor="end")
    step = max(1, int(math.ceil((x1 - x0) / 10)))
    x = math.ceil(x0)
    while x <= x1:
        p = to(x, y0)
        cv.line(p, (p[0], p[1] + 4))
        cv.text((p[0], p[1] + 16), f"{x:g}", size=10, anchor="middle")
        x += step
    cv.text((width / 2, height - 10), xlabel, size=11, anchor="middle")
    for y, label in hlines:
        a, b = to(x0, y), to(x1, y)
        cv.line(a, b, stroke="#888", dash="5,4")
        cv.text((b[0] - 4, b[1] - 4), label, size=10, anchor="end")
    for k, (label, vals, colour) in enumerate(series):
        pts = [to(x, y) for x, y in zip(xs, vals)]
        cv.polyline(pts, stroke=colour)
        for p in pts:
            cv.circle(p, 2.5, fill=colour, stroke=colour)
        cv.text((left + 10, top + 14 + 14 * k), label, size=10)
    return cv.render()


def convergence_svg(trace) -> str:
    """``1/mu_k`` against ``k`` with the golden-mean asymptote."""
    xs = list(range(len(trace.iterates)))
    vals = [float(v) for v in trace.iterates]
    target = (math.sqrt(5) - 1) / 2
    return _plot(
        xs,
        [(f"1/mu_k ({trace.direction})", vals, "#1f5fa8")],
        "fixed-point iteration",
        "k",
        [(target, "1/phi = 0.6180339887")],
    )


def series_svg(series) -> str:
    """Root estimates ``c_n^(1/n)`` and ratio estimates ``c_{n+1}/c_n``."""
    ns = [n for n, c in enumerate(series.counts) if n >= 1 and c > 0]
    if len(ns) < 2:
        raise UnsupportedKind("UnsupportedKind: series_plot needs at least two positive counts")
    roots = [math.exp(math.log(series.counts[n]) / n) for n in ns]
    ratios = [series.counts[n] / series.counts[n - 1] if series.counts[n - 1] else roots[0] for n in ns]
    return _plot(
        ns,
        [("c_n^(1/n)", roots, "#1f5fa8"), ("c_n / c_(n-1)", ratios, "#c0392b")],
        f"growth estimates, {series.graph_id}",
        "n",
    )


def render_figure(kind: str, data, fmt: str = "svg") -> str:
    """Dispatch on ``kind``; ``data`` is the object the matching module produced."""
    if kind not in KINDS:
        raise UnsupportedKind(f"UnsupportedKind: {kind!r}; choose from {', '.join(KINDS)}")
    if fmt not in ("svg", "dot"):
        raise UnsupportedKind(f"UnsupportedKind: format {fmt!r} for figures")
    if kind in ("lattice_ball", "fisher_image"):
        return ball_to_dot(data) if fmt == "dot" else ball_svg(data)
    if kind == "gasket":
        return gasket_dot(data) if fmt == "dot" else gasket_svg(data)
    if fmt == "dot":
        raise UnsupportedKind(f"UnsupportedKind: {kind} has no DOT form")
    if kind == "convergence_plot":
        return convergence_svg(data)
    return series_svg(data)
