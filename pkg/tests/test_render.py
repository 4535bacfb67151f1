import re
import xml.etree.ElementTree as ET

import pytest

from sawfisher.analysis import iterate_mu
from sawfisher.errors import UnsupportedKind
from sawfisher.fisher import fisher_black, gasket_iterate
from sawfisher.lattice import build_ball, builtin, seed_vertices
from sawfisher.render import render_figure
from sawfisher.saw import count_from_vertices

NS = "{http://www.w3.org/2000/svg}"


def _parse(svg):
    return ET.fromstring(svg.split("\n", 1)[1])


def _strip_banner(svg):
    return re.sub(r"<!-- sawfisher [^>]* -->", "", svg)


def test_gasket_svg_vertex_count():
    svg = render_figure("gasket", gasket_iterate(3))
    root = _parse(svg)
    assert len(root.findall(f"{NS}circle")) == 2 * 27
    # full edges plus dashed stubs
    g = gasket_iterate(3)
    assert len(root.findall(f"{NS}line")) == len(g.edges) + 4


def test_fisher_image_svg():
    ball = build_ball(fisher_black(builtin("hexagonal")).transformed, 4)
    root = _parse(render_figure("fisher_image", ball))
    circles = root.findall(f"{NS}circle")
    assert len(circles) == len(ball.vertices)
    filled = [c for c in circles if c.get("fill") == "#000"]
    assert 0 < len(filled) < len(circles)
    red = [e for e in root.findall(f"{NS}line") if e.get("stroke") == "#c0392b"]
    assert len(red) == sum(1 for e in ball.edges if e.origin == "triangle")


def test_convergence_plot():
    trace = iterate_mu(0.5, 40, 1e-12)
    svg = render_figure("convergence_plot", trace)
    assert "0.6180339887" in svg
    root = _parse(svg)
    (curve,) = root.findall(f"{NS}polyline")
    ys = [float(p.split(",")[1]) for p in curve.get("points").split()]
    # screen y grows downward, so an increasing curve has falling y
    assert all(a >= b for a, b in zip(ys, ys[1:]))


def test_series_plot():
    spec = builtin("ladder")
    s = count_from_vertices(build_ball(spec, 11), [seed_vertices(spec)[0]], 10)
    root = _parse(render_figure("series_plot", s))
    assert len(root.findall(f"{NS}polyline")) == 2


def test_lattice_ball_dot_and_tree_layout():
    dot = render_figure("lattice_ball", build_ball(builtin("hexagonal"), 2), "dot")
    assert dot.startswith('graph "hexagonal"')
    svg = render_figure("lattice_ball", build_ball(builtin("tree3"), 3))
    assert len(_parse(svg).findall(f"{NS}circle")) == 22


def test_deterministic_up_to_banner():
    a = render_figure("gasket", gasket_iterate(2))
    b = render_figure("gasket", gasket_iterate(2))
    assert a == b
    assert "<!-- sawfisher" in a
    assert _strip_banner(a) == _strip_banner(b)


def test_unsupported():
    with pytest.raises(UnsupportedKind):
        render_figure("histogram", None)
    with pytest.raises(UnsupportedKind):
        render_figure("convergence_plot", iterate_mu(0.5, 3, 1e-3), "dot")
