"""Fisher transformation on periodic lattice specs.

Every expanded vertex ``u`` with incident edge ends ``e_0, e_1, e_2`` (in
neighbour-table order) becomes three new vertices; new vertex ``k`` takes
over end ``e_k`` and the three are joined in a triangle.  Image edges keep
their offsets, so the translation group is unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BlackNotCubic, InvalidSpec, NotBipartite, NotCubic, NotSimple, ResourceLimit
from .lattice import (
    BLACK,
    NONE,
    ORIGINAL,
    TRIANGLE,
    CellEdge,
    CellVertex,
    LatticeSpec,
    validate_structure,
)

TRIANGLE_INSET = 0.3
MAX_CELL_VERTICES = 50_000


@dataclass(frozen=True)
class FisherResult:
    source: LatticeSpec
    transformed: LatticeSpec
    edge_map: tuple[int, ...]
    triangle_edges: tuple[int, ...]
    vertex_map: dict[int, tuple[int, ...]]

    def to_dict(self) -> dict:
        from .lattice import spec_to_dict

        d = spec_to_dict(self.transformed)
        d["maps"] = {
            "source": self.source.name,
            "edge_map": [[i, j] for i, j in enumerate(self.edge_map)],
            "triangle_edges": list(self.triangle_edges),
            "vertex_map": [[u, list(vs)] for u, vs in sorted(self.vertex_map.items())],
        }
        return d


def _require_periodic(spec: LatticeSpec) -> None:
    if spec.aperiodic:
        raise InvalidSpec("periodic", f"{spec.name} has no periodic cell to transform")


def _transform(spec: LatticeSpec, expand: set[int], name: str, bipartite: bool) -> FisherResult:
    table = spec.neighbour_table
    new_local: dict[int, tuple[int, ...]] = {}
    slot: dict[tuple[int, int], int] = {}
    vertices: list[CellVertex] = []
    for cv in spec.vertices:
        u = cv.local
        if u in expand:
            ids = tuple(range(len(vertices), len(vertices) + 3))
            new_local[u] = ids
            for k, (nbr, off, i, side) in enumerate(table[u]):
                slot[(i, side)] = ids[k]
                pos = _inset(spec, cv, nbr, off)
                vertices.append(CellVertex(ids[k], BLACK if bipartite else NONE, pos))
        else:
            nid = len(vertices)
            new_local[u] = (nid,)
            vertices.append(CellVertex(nid, cv.colour if bipartite else NONE, cv.pos))

    edges: list[CellEdge] = []
    for i, e in enumerate(spec.edges):
        a = slot.get((i, 0), new_local[e.u][0])
        b = slot.get((i, 1), new_local[e.v][0])
        edges.append(CellEdge(a, b, e.offset, ORIGINAL))
    edge_map = tuple(range(len(spec.edges)))
    zero = (0,) * spec.dimension
    triangle_edges = []
    for u in sorted(expand):
        a, b, c = new_local[u]
        for x, y in ((a, b), (b, c), (a, c)):
            triangle_edges.append(len(edges))
            edges.append(CellEdge(x, y, zero, TRIANGLE))

    domain = tuple(sorted(x for d in spec.domain for x in new_local[d]))
    transformed = LatticeSpec(
        name=name,
        dimension=spec.dimension,
        vertices=tuple(vertices),
        edges=tuple(edges),
        domain=domain,
        basis=spec.basis,
    )
    return FisherResult(spec, transformed, edge_map, tuple(triangle_edges), new_local)


def _inset(spec: LatticeSpec, cv: CellVertex, nbr: int, off: tuple[int, ...]):
    """Triangle corner placed a fixed fraction along the incident edge."""
    if cv.pos is None or spec.basis is None:
        return None
    q = spec.vertices[nbr].pos
    if q is None:
        return None
    qx, qy = q
    for c, (bx, by) in zip(off, spec.basis):
        qx += c * bx
        qy += c * by
    px, py = cv.pos
    return (px + TRIANGLE_INSET * (qx - px), py + TRIANGLE_INSET * (qy - py))


def fisher_full(spec: LatticeSpec) -> FisherResult:
    """Replace every vertex of a cubic simple lattice by a triangle."""
    _require_periodic(spec)
    report = validate_structure(spec)
    if not report.is_cubic:
        raise NotCubic(f"NotCubic: {spec.name} is not cubic")
    if not report.is_simple:
        raise NotSimple(f"NotSimple: {spec.name} has parallel edges")
    return _transform(spec, set(range(len(spec.vertices))), f"F({spec.name})", bipartite=False)


def fisher_black(spec: LatticeSpec) -> FisherResult:
    """Replace only the black vertices of a 2-coloured bipartite lattice."""
    _require_periodic(spec)
    report = validate_structure(spec)
    if not report.is_bipartite_coloured:
        raise NotBipartite(f"NotBipartite: {spec.name} lacks a proper black/white colouring")
    if not report.black_cubic:
        raise BlackNotCubic(f"BlackNotCubic: {spec.name} has a black vertex of degree != 3")
    if not report.is_simple:
        raise NotSimple(f"NotSimple: {spec.name} has parallel edges")
    black = {cv.local for cv in spec.vertices if cv.colour == BLACK}
    return _transform(spec, black, f"Fb({spec.name})", bipartite=True)


def iterate_fisher(spec: LatticeSpec, k: int, cap: int = MAX_CELL_VERTICES) -> list[FisherResult]:
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(spec.vertices) * 3**k > cap:
        raise ResourceLimit(
            f"ResourceLimit: cell of {len(spec.vertices)}*3^{k} vertices exceeds cap {cap}"
        )
    out = []
    current = spec
    for _ in range(k):
        res = fisher_full(current)
        out.append(res)
        current = res.transformed
    return out


def composed_edge_map(chain: list[FisherResult]) -> tuple[int, ...]:
    """Map from cell edges of the first source to cell edges of the last image."""
    current = tuple(range(len(chain[0].source.edges)))
    for res in chain:
        current = tuple(res.edge_map[i] for i in current)
    return current


def contract_triangles(result: FisherResult) -> list[CellEdge]:
    """Shrink each Fisher triangle back to its vertex; returns the cell edges."""
    back = {new: old for old, news in result.vertex_map.items() for new in news}
    tri = set(result.triangle_edges)
    out = []
    for j, e in enumerate(result.transformed.edges):
        if j in tri:
            continue
        out.append(CellEdge(back[e.u], back[e.v], e.offset, ORIGINAL))
    return out


# ---------------------------------------------------------------------------
# Sierpinski iterates


@dataclass
class GasketGraph:
    """Finite iterate of the single-edge seed.

    Each vertex is drawn at the centroid of the small triangle it stands
    for; ``stubs`` are dangling half-edges kept at degree 1.
    """

    positions: list[tuple[float, float]]
    edges: list[tuple[int, int]]
    stubs: list[tuple[int, tuple[float, float]]]

    @property
    def n_vertices(self) -> int:
        return len(self.positions)


def gasket_iterate(k: int, cap: int = 2_000_000) -> GasketGraph:
    if k < 0:
        raise ValueError("k must be >= 0")
    if 2 * 3**k > cap:
        raise ResourceLimit(f"ResourceLimit: gasket iterate {k} exceeds {cap} vertices")
    h = math.sqrt(3.0) / 2
    gap = 0.5
    # each vertex: three corners and the attachment held by each corner;
    # attachments are ("e", edge id) or ("s", stub id)
    corners = [
        [(0.0, 0.0), (-1.5, h), (-1.5, -h)],
        [(gap, 0.0), (gap + 1.5, h), (gap + 1.5, -h)],
    ]
    attach = [[("e", 0), ("s", 0), ("s", 1)], [("e", 0), ("s", 2), ("s", 3)]]
    n_edges = 1
    for _ in range(k):
        new_corners, new_attach = [], []
        for cs, at in zip(corners, attach):
            base = len(new_corners)
            for i in range(3):
                j, l = (i + 1) % 3, (i + 2) % 3
                ci, cj, cl = cs[i], cs[j], cs[l]
                new_corners.append([ci, _mid(ci, cj), _mid(ci, cl)])
                new_attach.append([at[i], None, None])
            for i, j in ((0, 1), (1, 2), (0, 2)):
                eid = n_edges
                n_edges += 1
                # corner 1 of child i faces child i+1, corner 2 faces child i+2
                si = 1 if j == (i + 1) % 3 else 2
                sj = 1 if i == (j + 1) % 3 else 2
                new_attach[base + i][si] = ("e", eid)
                new_attach[base + j][sj] = ("e", eid)
        corners, attach = new_corners, new_attach
    positions = [_centroid(cs) for cs in corners]
    ends: dict[int, list[int]] = {}
    stubs = []
    for v, at in enumerate(attach):
        for c, (kind, ident) in enumerate(at):
            if kind == "e":
                ends.setdefault(ident, []).append(v)
            else:
                stubs.append((v, corners[v][c]))
    edges = sorted(tuple(sorted(vs)) for vs in ends.values())
    return GasketGraph(positions, edges, stubs)


def _mid(a, b):
    return ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)


def _centroid(cs):
    return (sum(c[0] for c in cs) / 3, sum(c[1] for c in cs) / 3)
