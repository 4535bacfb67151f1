"""Brute-force walk enumeration used to cross-check the DFS engine.

Adjacency is rebuilt here straight from the raw cell edges (or the tree
rule), every walk of the requested length is generated with backtracking
allowed, and the self-intersecting ones are thrown away afterwards.  Nothing
is shared with the ball builder or the kernels.
"""

from __future__ import annotations

from ..lattice import LatticeSpec
from .counts import Walk


def _adjacent(spec: LatticeSpec, vertex):
    """``[(neighbour, edge_key, origin)]`` of a ``(cell, local)`` pair."""
    cell, local = vertex
    if spec.aperiodic == "tree3":
        out = []
        if cell:
            out.append(((cell[:-1], 0), cell, "original"))
        for b in range(3 if not cell else 2):
            child = cell + (b,)
            out.append(((child, 0), child, "original"))
        return out
    out = []
    for i, e in enumerate(spec.edges):
        if e.u == local:
            nb = tuple(c + o for c, o in zip(cell, e.offset))
            out.append(((nb, e.v), (cell, i), e.origin))
        if e.v == local:
            nb = tuple(c - o for c, o in zip(cell, e.offset))
            out.append(((nb, e.u), (nb, i), e.origin))
    return out


def all_vertex_walks(spec: LatticeSpec, start, n: int) -> list[Walk]:
    """All n-step walks (not necessarily self-avoiding) from ``start``."""
    walks = [((start,), ())]
    for _ in range(n):
        walks = [
            (vs + (w,), es + (key,))
            for vs, es in walks
            for w, key, _ in _adjacent(spec, vs[-1])
        ]
    return [Walk(vs, es, False) for vs, es in walks]


def vertex_saw_counts(spec: LatticeSpec, start, n_max: int) -> list[int]:
    out = []
    for n in range(n_max + 1):
        walks = all_vertex_walks(spec, start, n)
        out.append(sum(1 for w in walks if len(set(w.vertices)) == len(w.vertices)))
    return out


def midedge_endpoints(spec: LatticeSpec, key):
    """The two endpoints of the edge instance ``key``."""
    if spec.aperiodic == "tree3":
        child = key
        return (child[:-1], 0), (child, 0)
    cell, i = key
    e = spec.edges[i]
    return (cell, e.u), (tuple(c + o for c, o in zip(cell, e.offset)), e.v)


def all_midedge_walks(spec: LatticeSpec, start_key, n: int) -> list[Walk]:
    """All walks of length n (vertices visited) leaving mid-edge ``start_key``."""
    if n == 0:
        return [Walk((), (start_key,), True)]
    origin = _origin_of(spec, start_key)
    a, b = midedge_endpoints(spec, start_key)
    partial = [((a,), (start_key,), (origin,)), ((b,), (start_key,), (origin,))]
    for _ in range(n - 1):
        partial = [
            (vs + (w,), es + (key,), os + (org,))
            for vs, es, os in partial
            for w, key, org in _adjacent(spec, vs[-1])
        ]
    walks = []
    for vs, es, os in partial:
        for _, key, org in _adjacent(spec, vs[-1]):
            walks.append(Walk(vs, es + (key,), True))
    return walks


def _origin_of(spec: LatticeSpec, key) -> str:
    if spec.aperiodic == "tree3":
        return "original"
    return spec.edges[key[1]].origin


def is_self_avoiding(w: Walk) -> bool:
    return len(set(w.vertices)) == len(w.vertices) and len(set(w.edges)) == len(w.edges)


def midedge_saws(spec: LatticeSpec, start_keys, n: int) -> list[Walk]:
    return [w for k in start_keys for w in all_midedge_walks(spec, k, n) if is_self_avoiding(w)]


def midedge_saw_counts(spec: LatticeSpec, start_keys, n_max: int, end_origin: str | None = None) -> list[int]:
    out = []
    for n in range(n_max + 1):
        walks = midedge_saws(spec, start_keys, n)
        if end_origin is not None:
            walks = [w for w in walks if _origin_of(spec, w.edges[-1]) == end_origin]
        out.append(len(walks))
    return out


def domain_keys(spec: LatticeSpec, origin: str | None = None) -> list:
    """Edge keys of the mid-edges incident to the fundamental domain at the origin."""
    if spec.aperiodic == "tree3":
        return sorted({(b,) for b in range(3)})
    zero = (0,) * spec.dimension
    keys = set()
    for d in spec.domain:
        for _, key, org in _adjacent(spec, (zero, d)):
            if origin is None or org == origin:
                keys.add(key)
    return sorted(keys)


def step_origins(spec: LatticeSpec, w: Walk) -> list[tuple[str, str]]:
    """(in-origin, out-origin) of each vertex step of a mid-edge walk."""
    orgs = [_origin_of(spec, k) for k in w.edges]
    return list(zip(orgs[:-1], orgs[1:]))
