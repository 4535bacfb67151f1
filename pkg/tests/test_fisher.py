import json

import pytest

from sawfisher.errors import BlackNotCubic, InvalidSpec, NotBipartite, NotCubic, NotSimple, ResourceLimit
from sawfisher.fisher import (
    composed_edge_map,
    contract_triangles,
    fisher_black,
    fisher_full,
    gasket_iterate,
    iterate_fisher,
)
from sawfisher.lattice import (
    BLACK,
    ORIGINAL,
    TRIANGLE,
    WHITE,
    VertexId,
    _edge_key,
    builtin,
    load_spec,
    validate_structure,
)

CUBIC = ("hexagonal", "ladder", "square_octagon")


def _two_colour_path():
    return load_spec(json.dumps({
        "name": "bw-line", "dimension": 1,
        "vertices": [{"local": 0, "colour": "black"}, {"local": 1, "colour": "white"}],
        "edges": [{"u": 0, "v": 1, "offset": [0]}, {"u": 1, "v": 0, "offset": [1]}],
        "domain": [0, 1],
    }))


def test_full_hexagonal_sizes():
    res = fisher_full(builtin("hexagonal"))
    spec = res.transformed
    assert len(spec.vertices) == 6
    assert len(spec.edges) == 9
    rep = validate_structure(spec)
    assert rep.is_cubic and rep.is_simple


def test_full_twice():
    spec = fisher_full(fisher_full(builtin("hexagonal")).transformed).transformed
    assert len(spec.vertices) == 18
    assert len(spec.edges) == 27


def test_full_rejects_line():
    with pytest.raises(NotCubic):
        fisher_full(builtin("line"))


def test_full_rejects_multigraph():
    with pytest.raises(NotSimple):
        fisher_full(builtin("loop3"))


def test_full_rejects_tree():
    with pytest.raises(InvalidSpec):
        fisher_full(builtin("tree3"))


def test_black_hexagonal():
    res = fisher_black(builtin("hexagonal"))
    spec = res.transformed
    assert len(spec.vertices) == 4
    assert len(spec.edges) == 6
    colours = sorted(cv.colour for cv in spec.vertices)
    assert colours == [BLACK, BLACK, BLACK, WHITE]
    origins = [e.origin for e in spec.edges]
    assert origins.count(ORIGINAL) == 3 and origins.count(TRIANGLE) == 3
    for cv in spec.vertices:
        assert spec.degree(cv.local) == 3


def test_black_needs_colouring():
    with pytest.raises(NotBipartite):
        fisher_black(builtin("ladder"))


def test_black_needs_cubic_black_vertices():
    with pytest.raises(BlackNotCubic):
        fisher_black(_two_colour_path())


def test_black_keeps_white_degree():
    spec = builtin("hexagonal")
    res = fisher_black(spec)
    white = [cv.local for cv in spec.vertices if cv.colour == WHITE]
    for w in white:
        (image,) = res.vertex_map[w]
        assert res.transformed.degree(image) == spec.degree(w)


@pytest.mark.parametrize("name", CUBIC)
def test_triangles_are_three_cycles(name):
    res = fisher_full(builtin(name))
    spec = res.transformed
    for old, news in res.vertex_map.items():
        assert len(news) == 3
        tri = [spec.edges[j] for j in res.triangle_edges if spec.edges[j].u in news]
        assert len(tri) == 3
        ends = sorted(x for e in tri for x in (e.u, e.v))
        assert ends == sorted(news * 2)
        assert all(not any(e.offset) for e in tri)


@pytest.mark.parametrize("name", CUBIC)
def test_edge_map_injective_onto_original(name):
    res = fisher_full(builtin(name))
    assert len(set(res.edge_map)) == len(res.edge_map)
    orig = {j for j, e in enumerate(res.transformed.edges) if e.origin == ORIGINAL}
    assert set(res.edge_map) == orig
    for i, j in enumerate(res.edge_map):
        assert res.transformed.edges[j].offset == res.source.edges[i].offset


@pytest.mark.parametrize("name", CUBIC)
def test_contraction_recovers_source(name):
    res = fisher_full(builtin(name))
    back = sorted(_edge_key(e) for e in contract_triangles(res))
    assert back == sorted(_edge_key(e) for e in res.source.edges)


def test_iterate_base_case():
    spec = builtin("hexagonal")
    (only,) = iterate_fisher(spec, 1)
    assert only.transformed == fisher_full(spec).transformed


def test_iterate_cell_sizes_and_maps():
    chain = iterate_fisher(builtin("hexagonal"), 3)
    assert [len(r.transformed.vertices) for r in chain] == [6, 18, 54]
    for r in chain:
        assert validate_structure(r.transformed).is_cubic
    composed = composed_edge_map(chain)
    assert len(set(composed)) == len(composed) == 3


def test_iterate_cap():
    with pytest.raises(ResourceLimit):
        iterate_fisher(builtin("hexagonal"), 12)


@pytest.mark.parametrize("name", CUBIC)
def test_translation_commutes(name):
    # neighbours of a translated vertex are the translated neighbours
    spec = fisher_full(builtin(name)).transformed
    shift = (1,) + (0,) * (spec.dimension - 1)
    for cv in spec.vertices:
        v = VertexId((0,) * spec.dimension, cv.local)
        w = VertexId(shift, cv.local)
        moved = sorted(VertexId(tuple(a + b for a, b in zip(x.cell, shift)), x.local) for x, _ in spec.neighbours(v))
        assert moved == sorted(x for x, _ in spec.neighbours(w))


def test_to_dict_has_maps():
    d = fisher_black(builtin("hexagonal")).to_dict()
    assert d["name"] == "Fb(hexagonal)"
    assert len(d["maps"]["edge_map"]) == 3
    assert load_spec(json.dumps(d)).has_origin_tags


def test_gasket_seed():
    g = gasket_iterate(0)
    assert g.n_vertices == 2 and len(g.edges) == 1 and len(g.stubs) == 4


def test_gasket_first_step():
    g = gasket_iterate(1)
    assert g.n_vertices == 6
    assert len(g.edges) == 7
    degrees = [0] * 6
    for a, b in g.edges:
        degrees[a] += 1
        degrees[b] += 1
    for v, _ in g.stubs:
        degrees[v] += 1
    assert degrees == [3] * 6


def test_gasket_growth():
    assert [gasket_iterate(k).n_vertices for k in range(5)] == [2, 6, 18, 54, 162]
    assert all(len(gasket_iterate(k).stubs) == 4 for k in range(5))
