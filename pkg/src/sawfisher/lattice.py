"""Periodic lattice descriptions and their finite balls.

A lattice is given by a finite cell of vertices and a list of edges labelled
by translation offsets; an edge ``(u, v, offset)`` joins ``(c, u)`` to
``(c + offset, v)`` for every cell ``c``.  The 3-regular tree has no such
description and is special-cased through an adjacency oracle.
"""

from __future__ import annotations

import json
import math
import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import InvalidSpec, NotInGraph, ParseError, ResourceLimit, UnknownLattice

WHITE, BLACK, NONE = "white", "black", "none"
COLOURS = (WHITE, BLACK, NONE)
ORIGINAL, TRIANGLE = "original", "triangle"
ORIGINS = (ORIGINAL, TRIANGLE)

DEFAULT_MAX_VERTICES = 2_000_000


def max_vertices() -> int:
    """Ball size cap, overridable through ``SAW_MAX_VERTICES``."""
    raw = os.environ.get("SAW_MAX_VERTICES")
    if not raw:
        return DEFAULT_MAX_VERTICES
    try:
        return int(raw)
    except ValueError:
        raise ResourceLimit(f"SAW_MAX_VERTICES is not an integer: {raw!r}") from None


@dataclass(frozen=True, order=True)
class VertexId:
    cell: tuple[int, ...]
    local: int

    def label(self) -> str:
        return ",".join(str(c) for c in self.cell) + "/" + str(self.local)


@dataclass(frozen=True, order=True)
class MidEdge:
    """An edge instance, oriented canonically from its ``u``-side endpoint.

    ``tag`` is the index of the generating cell edge, which tells parallel
    edges apart.
    """

    u: VertexId
    v: VertexId
    tag: int
    origin: str = ORIGINAL

    @property
    def endpoints(self) -> frozenset[VertexId]:
        return frozenset((self.u, self.v))


@dataclass(frozen=True)
class CellVertex:
    local: int
    colour: str = NONE
    pos: tuple[float, float] | None = None


@dataclass(frozen=True)
class CellEdge:
    u: int
    v: int
    offset: tuple[int, ...]
    origin: str = ORIGINAL


@dataclass(frozen=True)
class LatticeSpec:
    name: str
    dimension: int
    vertices: tuple[CellVertex, ...]
    edges: tuple[CellEdge, ...]
    domain: tuple[int, ...]
    multigraph: bool = False
    aperiodic: str | None = None
    basis: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        _check_invariants(self)

    @cached_property
    def neighbour_table(self) -> tuple[tuple[tuple[int, tuple[int, ...], int, int], ...], ...]:
        """Per local vertex: ``(neighbour local, offset, edge index, side)``.

        ``side`` is 0 when the vertex is the edge's ``u`` end, 1 for ``v``.
        Order follows the edge list, ``u`` end before ``v`` end.
        """
        table: list[list] = [[] for _ in self.vertices]
        for i, e in enumerate(self.edges):
            table[e.u].append((e.v, e.offset, i, 0))
            neg = tuple(-x for x in e.offset)
            table[e.v].append((e.u, neg, i, 1))
        return tuple(tuple(t) for t in table)

    def degree(self, local: int) -> int:
        if self.aperiodic == "tree3":
            return 3
        return len(self.neighbour_table[local])

    def colour(self, local: int) -> str:
        return self.vertices[local].colour

    @property
    def has_origin_tags(self) -> bool:
        return any(e.origin == TRIANGLE for e in self.edges)

    def neighbours(self, v: VertexId) -> list[tuple[VertexId, MidEdge]]:
        """Neighbours of ``v`` in the infinite graph, in deterministic order."""
        if self.aperiodic == "tree3":
            return _tree_neighbours(v)
        out = []
        for nbr, off, i, side in self.neighbour_table[v.local]:
            cell = tuple(a + b for a, b in zip(v.cell, off))
            w = VertexId(cell, nbr)
            edge = self.edges[i]
            if side == 0:
                me = MidEdge(v, w, i, edge.origin)
            else:
                me = MidEdge(w, v, i, edge.origin)
            out.append((w, me))
        return out

    def position(self, v: VertexId) -> tuple[float, float] | None:
        if self.basis is None or self.aperiodic:
            return None
        p = self.vertices[v.local].pos
        if p is None:
            return None
        x, y = p
        for c, (bx, by) in zip(v.cell, self.basis):
            x += c * bx
            y += c * by
        return (x, y)


def _tree_neighbours(v: VertexId) -> list[tuple[VertexId, MidEdge]]:
    word = v.cell
    out = []
    if word:
        parent = VertexId(word[:-1], 0)
        out.append((parent, MidEdge(parent, v, 0)))
    branches = range(3) if not word else range(2)
    for b in branches:
        child = VertexId(word + (b,), 0)
        out.append((child, MidEdge(v, child, 0)))
    return out


def _check_invariants(spec: LatticeSpec) -> None:
    if spec.dimension < 0:
        raise InvalidSpec("dimension", "must be >= 0")
    locals_ = [cv.local for cv in spec.vertices]
    if locals_ != list(range(len(locals_))):
        raise InvalidSpec("vertex-indices", "local indices must be 0..k-1 in order")
    if not locals_:
        raise InvalidSpec("vertex-indices", "cell has no vertices")
    for cv in spec.vertices:
        if cv.colour not in COLOURS:
            raise InvalidSpec("colour", f"unknown colour {cv.colour!r}")
    if not spec.domain:
        raise InvalidSpec("domain", "fundamental domain is empty")
    if any(d not in range(len(locals_)) for d in spec.domain):
        raise InvalidSpec("domain", "fundamental domain not contained in cell vertices")
    if spec.aperiodic is not None:
        if spec.aperiodic != "tree3":
            raise InvalidSpec("aperiodic", f"unknown adjacency oracle {spec.aperiodic!r}")
        if spec.edges:
            raise InvalidSpec("aperiodic", "oracle lattices take no cell edges")
        return
    seen = set()
    for e in spec.edges:
        if e.u not in range(len(locals_)) or e.v not in range(len(locals_)):
            raise InvalidSpec("edge-endpoints", f"edge {e} references a missing vertex")
        if len(e.offset) != spec.dimension:
            raise InvalidSpec("offset-length", f"edge {e} offset length != dimension")
        if e.origin not in ORIGINS:
            raise InvalidSpec("origin", f"unknown edge origin {e.origin!r}")
        if e.u == e.v and not any(e.offset):
            raise InvalidSpec("no-loops", f"edge {e} is a loop")
        key = _edge_key(e)
        if key in seen and not spec.multigraph:
            raise InvalidSpec("simple-graph", f"duplicate edge {e} without multigraph flag")
        seen.add(key)
    if not spec.edges:
        raise InvalidSpec("connected", "cell has no edges")
    _check_connected(spec)


def _edge_key(e: CellEdge) -> tuple:
    neg = tuple(-x for x in e.offset)
    return min((e.u, e.v, e.offset), (e.v, e.u, neg))


def _check_connected(spec: LatticeSpec) -> None:
    """Exact connectivity test for the periodic graph.

    The quotient graph must be connected and the cycle voltages must generate
    the whole translation group.
    """
    n = len(spec.vertices)
    pot: list[tuple[int, ...] | None] = [None] * n
    pot[0] = (0,) * spec.dimension
    queue = deque([0])
    table = spec.neighbour_table
    while queue:
        u = queue.popleft()
        for v, off, _, _ in table[u]:
            if pot[v] is None:
                pot[v] = tuple(a + b for a, b in zip(pot[u], off))
                queue.append(v)
    if any(p is None for p in pot):
        raise InvalidSpec("connected", "quotient graph is disconnected")
    voltages = []
    for e in spec.edges:
        volt = tuple(a + b - c for a, b, c in zip(pot[e.u], e.offset, pot[e.v]))
        if any(volt):
            voltages.append(volt)
    if not _generates_full_lattice(voltages, spec.dimension):
        raise InvalidSpec("connected", "translations split the graph into several components")


def _generates_full_lattice(vectors: list[tuple[int, ...]], d: int) -> bool:
    rows = [list(v) for v in vectors]
    r = 0
    for col in range(d):
        while True:
            live = [i for i in range(r, len(rows)) if rows[i][col] != 0]
            if not live:
                return False
            best = min(live, key=lambda i: abs(rows[i][col]))
            rows[r], rows[best] = rows[best], rows[r]
            clean = True
            for i in range(r + 1, len(rows)):
                if rows[i][col]:
                    q = rows[i][col] // rows[r][col]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    clean = clean and rows[i][col] == 0
            if clean:
                break
        if abs(rows[r][col]) != 1:
            return False
        r += 1
    return True


# ---------------------------------------------------------------------------
# built-in lattices

_S3 = math.sqrt(3.0)
_R2 = math.sqrt(2.0)


def _cv(local, colour=NONE, pos=None):
    return CellVertex(local, colour, pos)


def _ce(u, v, *offset, origin=ORIGINAL):
    return CellEdge(u, v, tuple(offset), origin)


def _hexagonal() -> LatticeSpec:
    return LatticeSpec(
        name="hexagonal",
        dimension=2,
        vertices=(_cv(0, BLACK, (0.0, 0.0)), _cv(1, WHITE, (0.0, 1.0))),
        edges=(_ce(0, 1, 0, 0), _ce(0, 1, 0, -1), _ce(0, 1, 1, -1)),
        domain=(0, 1),
        basis=((_S3, 0.0), (_S3 / 2, 1.5)),
    )


def _ladder() -> LatticeSpec:
    return LatticeSpec(
        name="ladder",
        dimension=1,
        vertices=(_cv(0, pos=(0.0, 0.0)), _cv(1, pos=(0.0, 1.0))),
        edges=(_ce(0, 1, 0), _ce(0, 0, 1), _ce(1, 1, 1)),
        domain=(0, 1),
        basis=((1.0, 0.0),),
    )


def _loop3() -> LatticeSpec:
    return LatticeSpec(
        name="loop3",
        dimension=1,
        vertices=(_cv(0, pos=(0.0, 0.0)), _cv(1, pos=(1.0, 0.0))),
        edges=(_ce(0, 1, 0), _ce(1, 0, 1), _ce(1, 0, 1)),
        domain=(0, 1),
        multigraph=True,
        basis=((2.0, 0.0),),
    )


def _square_octagon() -> LatticeSpec:
    s = 1 / _R2
    return LatticeSpec(
        name="square_octagon",
        dimension=2,
        vertices=(
            _cv(0, pos=(s, 0.0)),
            _cv(1, pos=(0.0, s)),
            _cv(2, pos=(-s, 0.0)),
            _cv(3, pos=(0.0, -s)),
        ),
        edges=(
            _ce(0, 1, 0, 0),
            _ce(1, 2, 0, 0),
            _ce(2, 3, 0, 0),
            _ce(3, 0, 0, 0),
            _ce(0, 2, 1, 0),
            _ce(1, 3, 0, 1),
        ),
        domain=(0, 1, 2, 3),
        basis=((1 + _R2, 0.0), (0.0, 1 + _R2)),
    )


def _tree3() -> LatticeSpec:
    return LatticeSpec(
        name="tree3",
        dimension=0,
        vertices=(_cv(0),),
        edges=(),
        domain=(0,),
        aperiodic="tree3",
    )


def _line() -> LatticeSpec:
    return LatticeSpec(
        name="line",
        dimension=1,
        vertices=(_cv(0, pos=(0.0, 0.0)),),
        edges=(_ce(0, 0, 1),),
        domain=(0,),
        basis=((1.0, 0.0),),
    )


_BUILTINS = {
    "hexagonal": _hexagonal,
    "ladder": _ladder,
    "loop3": _loop3,
    "square_octagon": _square_octagon,
    "tree3": _tree3,
    "line": _line,
}

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin(name: str) -> LatticeSpec:
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise UnknownLattice(f"unknown lattice {name!r}; choose from {', '.join(BUILTIN_NAMES)}") from None
    return factory()


# ---------------------------------------------------------------------------
# spec files


def spec_to_dict(spec: LatticeSpec) -> dict:
    d: dict = {
        "name": spec.name,
        "dimension": spec.dimension,
        "multigraph": spec.multigraph,
        "vertices": [],
        "edges": [],
        "domain": list(spec.domain),
    }
    for cv in spec.vertices:
        entry: dict = {"local": cv.local, "colour": cv.colour}
        if cv.pos is not None:
            entry["pos"] = list(cv.pos)
        d["vertices"].append(entry)
    for e in spec.edges:
        entry = {"u": e.u, "v": e.v, "offset": list(e.offset)}
        if e.origin != ORIGINAL:
            entry["origin"] = e.origin
        d["edges"].append(entry)
    if spec.aperiodic:
        d["aperiodic"] = spec.aperiodic
    if spec.basis is not None:
        d["basis"] = [list(b) for b in spec.basis]
    return d


def dump_spec(spec: LatticeSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2, sort_keys=True) + "\n"


def spec_from_dict(d: dict) -> LatticeSpec:
    try:
        vertices = tuple(
            CellVertex(
                int(v["local"]),
                v.get("colour", NONE),
                tuple(float(x) for x in v["pos"]) if v.get("pos") is not None else None,
            )
            for v in d["vertices"]
        )
        edges = tuple(
            CellEdge(int(e["u"]), int(e["v"]), tuple(int(x) for x in e["offset"]), e.get("origin", ORIGINAL))
            for e in d["edges"]
        )
        basis = d.get("basis")
        return LatticeSpec(
            name=str(d["name"]),
            dimension=int(d["dimension"]),
            vertices=vertices,
            edges=edges,
            domain=tuple(int(x) for x in d["domain"]),
            multigraph=bool(d.get("multigraph", False)),
            aperiodic=d.get("aperiodic"),
            basis=tuple(tuple(float(x) for x in b) for b in basis) if basis is not None else None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed spec: {exc!r}") from None


def load_spec(text: str) -> LatticeSpec:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"spec is not valid JSON: {exc}") from None
    if not isinstance(d, dict):
        raise ParseError("spec must be a JSON object")
    return spec_from_dict(d)


# ---------------------------------------------------------------------------
# structure


@dataclass(frozen=True)
class StructureReport:
    is_cubic: bool
    is_bipartite_coloured: bool
    black_cubic: bool
    is_simple: bool


def validate_structure(spec: LatticeSpec) -> StructureReport:
    if spec.aperiodic == "tree3":
        return StructureReport(True, False, True, True)
    n = len(spec.vertices)
    degrees = [spec.degree(u) for u in range(n)]
    colours = [cv.colour for cv in spec.vertices]
    bip = all(c != NONE for c in colours) and all(
        colours[e.u] != colours[e.v] for e in spec.edges
    )
    keys = [_edge_key(e) for e in spec.edges]
    return StructureReport(
        is_cubic=all(d == 3 for d in degrees),
        is_bipartite_coloured=bip,
        black_cubic=all(d == 3 for d, c in zip(degrees, colours) if c == BLACK),
        is_simple=len(set(keys)) == len(keys),
    )


# ---------------------------------------------------------------------------
# balls


@dataclass(frozen=True, eq=False)
class BallGraph:
    spec: LatticeSpec
    radius: int
    seeds: tuple[VertexId, ...]
    vertices: tuple[VertexId, ...]
    edges: tuple[MidEdge, ...]
    dist: np.ndarray
    adj: tuple[tuple[tuple[int, int], ...], ...]
    index: dict = field(repr=False)
    edge_index: dict = field(repr=False)

    @property
    def boundary(self) -> frozenset[VertexId]:
        return frozenset(v for v, d in zip(self.vertices, self.dist) if d == self.radius)

    def neighbours(self, v: VertexId) -> list[tuple[VertexId, MidEdge]]:
        if v not in self.index:
            raise NotInGraph(f"vertex {v.label()} not in ball")
        return [(self.vertices[w], self.edges[e]) for w, e in self.adj[self.index[v]]]

    def degree(self, v: VertexId) -> int:
        return len(self.neighbours(v))

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(ptr, adj_vertex, adj_edge)`` arrays for the enumeration kernels."""
        ptr = np.zeros(len(self.vertices) + 1, dtype=np.int64)
        for i, row in enumerate(self.adj):
            ptr[i + 1] = ptr[i] + len(row)
        av = np.fromiter((w for row in self.adj for w, _ in row), dtype=np.int64, count=int(ptr[-1]))
        ae = np.fromiter((e for row in self.adj for _, e in row), dtype=np.int64, count=int(ptr[-1]))
        return ptr, av, ae

    @cached_property
    def colour_codes(self) -> np.ndarray:
        """0 white/none, 1 black."""
        return np.array(
            [1 if self.spec.colour(v.local) == BLACK else 0 for v in self.vertices], dtype=np.int64
        )

    @cached_property
    def origin_codes(self) -> np.ndarray:
        """0 original, 1 triangle."""
        return np.array([1 if e.origin == TRIANGLE else 0 for e in self.edges], dtype=np.int64)

    @property
    def has_origin_tags(self) -> bool:
        return self.spec.has_origin_tags

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        me = self.edges[e]
        return self.index[me.u], self.index[me.v]

    def interior_ok(self) -> bool:
        """Degree invariant: every non-boundary vertex has its full degree."""
        for i, v in enumerate(self.vertices):
            if self.dist[i] < self.radius and len(self.adj[i]) != self.spec.degree(v.local):
                return False
        return True


def seed_vertices(spec: LatticeSpec) -> tuple[VertexId, ...]:
    origin = (0,) * spec.dimension
    if spec.aperiodic == "tree3":
        return (VertexId((), 0),)
    return tuple(VertexId(origin, d) for d in sorted(spec.domain))


def build_ball(spec: LatticeSpec, radius: int, cap: int | None = None) -> BallGraph:
    if radius < 0:
        raise ValueError("radius must be >= 0")
    cap = max_vertices() if cap is None else cap
    seeds = seed_vertices(spec)
    dist: dict[VertexId, int] = {s: 0 for s in seeds}
    queue = deque(seeds)
    while queue:
        v = queue.popleft()
        d = dist[v]
        if d == radius:
            continue
        for w, _ in spec.neighbours(v):
            if w not in dist:
                dist[w] = d + 1
                if len(dist) > cap:
                    raise ResourceLimit(
                        f"ResourceLimit: ball of radius {radius} on {spec.name} exceeds {cap} vertices"
                    )
                queue.append(w)
    vertices = tuple(sorted(dist))
    index = {v: i for i, v in enumerate(vertices)}
    edge_set: set[MidEdge] = set()
    raw_adj = []
    for v in vertices:
        row = []
        for w, me in spec.neighbours(v):
            if w in index:
                row.append((w, me))
                edge_set.add(me)
        raw_adj.append(row)
    edges = tuple(sorted(edge_set))
    edge_index = {e: i for i, e in enumerate(edges)}
    adj = tuple(tuple((index[w], edge_index[me]) for w, me in row) for row in raw_adj)
    return BallGraph(
        spec=spec,
        radius=radius,
        seeds=seeds,
        vertices=vertices,
        edges=edges,
        dist=np.array([dist[v] for v in vertices], dtype=np.int64),
        adj=adj,
        index=index,
        edge_index=edge_index,
    )


def _vertex_bfs(ball: BallGraph, sources: Iterable[int]) -> np.ndarray:
    out = np.full(len(ball.vertices), -1, dtype=np.int64)
    queue = deque()
    for s in sources:
        out[s] = 0
        queue.append(s)
    while queue:
        v = queue.popleft()
        for w, _ in ball.adj[v]:
            if out[w] < 0:
                out[w] = out[v] + 1
                queue.append(w)
    return out


def midedge_half_distances(ball: BallGraph, e0: int) -> np.ndarray:
    """Half-edge distances from mid-edge ``e0`` to every mid-edge of the ball.

    Every path leaving a mid-edge passes through one of its endpoints, so a
    vertex ``x`` sits at ``1 + 2 d(x)`` half-edges with ``d`` measured from
    the endpoint set, and another mid-edge one half-edge further.
    """
    a, b = ball.edge_endpoints(e0)
    dv = _vertex_bfs(ball, (a, b))
    hv = np.where(dv >= 0, 2 * dv + 1, -1)
    out = np.empty(len(ball.edges), dtype=np.int64)
    for i, me in enumerate(ball.edges):
        x, y = ball.index[me.u], ball.index[me.v]
        out[i] = min(hv[x], hv[y]) + 1
    out[e0] = 0
    return out


def bfs_distance(ball: BallGraph, source: VertexId | MidEdge) -> dict:
    """Graph distances from ``source``.

    A vertex source yields ``{VertexId: edges}``.  A mid-edge source is
    measured in the subdivision graph and yields half-edge distances to both
    vertices and mid-edges.
    """
    if isinstance(source, VertexId):
        if source not in ball.index:
            raise NotInGraph(f"vertex {source.label()} not in ball")
        d = _vertex_bfs(ball, (ball.index[source],))
        return {v: int(x) for v, x in zip(ball.vertices, d) if x >= 0}
    if isinstance(source, MidEdge):
        if source not in ball.edge_index:
            raise NotInGraph(f"mid-edge {source} not in ball")
        e0 = ball.edge_index[source]
        a, b = ball.edge_endpoints(e0)
        dv = _vertex_bfs(ball, (a, b))
        out: dict = {v: int(2 * x + 1) for v, x in zip(ball.vertices, dv) if x >= 0}
        he = midedge_half_distances(ball, e0)
        out.update({me: int(x) for me, x in zip(ball.edges, he) if x >= 0})
        return out
    raise NotInGraph(f"unsupported source {source!r}")


def domain_midedges(ball: BallGraph, origin: str | None = None) -> list[MidEdge]:
    """Mid-edges incident to the seed set, optionally restricted by origin tag."""
    out = set()
    for s in ball.seeds:
        for _, me in ball.neighbours(s):
            if origin is None or me.origin == origin:
                out.add(me)
    return sorted(out)


def ball_to_dot(ball: BallGraph) -> str:
    lines = [f'graph "{ball.spec.name}" {{', "  node [shape=circle, fontsize=8];"]
    for i, v in enumerate(ball.vertices):
        attrs = [f'label="{v.label()}"']
        colour = ball.spec.colour(v.local)
        if colour == BLACK:
            attrs.append("style=filled, fillcolor=black, fontcolor=white")
        pos = ball.spec.position(v)
        if pos is not None:
            attrs.append(f'pos="{pos[0]:.4f},{pos[1]:.4f}!"')
        lines.append(f"  n{i} [{', '.join(attrs)}];")
    for me in ball.edges:
        a, b = ball.index[me.u], ball.index[me.v]
        style = " [style=dashed]" if me.origin == TRIANGLE else ""
        lines.append(f"  n{a} -- n{b}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
