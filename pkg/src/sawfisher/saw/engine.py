"""Depth-first SAW enumeration kernels.

Two kernels share one work-splitting scheme: the search tree is cut at
``split_depth``; the nodes at that depth are dealt round-robin to
``n_units`` units, and unit 0 alone records everything shallower.  Each
unit therefore owns a disjoint set of walks, and summing unit results in
any order gives the same totals.

The kernels are compiled with numba (``nogil``) when the counts provably
fit in int64; otherwise the same source runs as plain Python over object
arrays, which keeps counts exact at any size.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

DEFAULT_SPLIT_DEPTH = 8
INT64_SAFE = 2**62


def _vertex_kernel(ptr, adj_v, v0, n_max, target_slot, split_depth, unit, n_units, out, out_tp):
    """Vertex-start walks from ``v0``; ``out[n]`` counts n-step SAWs.

    ``out_tp[n, s]`` counts those ending at the vertex with target slot ``s``.
    """
    nv = ptr.shape[0] - 1
    visited = np.zeros(nv, dtype=np.uint8)
    sv = np.zeros(n_max + 2, dtype=np.int64)
    sp = np.zeros(n_max + 2, dtype=np.int64)
    if unit == 0:
        out[0] += 1
        if target_slot[v0] >= 0:
            out_tp[0, target_slot[v0]] += 1
    elif split_depth == 0:
        return
    counter = 0
    visited[v0] = 1
    sv[0] = v0
    sp[0] = ptr[v0]
    d = 0
    while d >= 0:
        v = sv[d]
        k = sp[d]
        if k == ptr[v + 1] or d == n_max:
            visited[v] = 0
            d -= 1
            continue
        sp[d] = k + 1
        w = adj_v[k]
        if visited[w]:
            continue
        nd = d + 1
        if nd == split_depth:
            counter += 1
            if (counter - 1) % n_units != unit:
                continue
        # shallow nodes are walked by every unit but recorded by unit 0 only
        if nd >= split_depth or unit == 0:
            out[nd] += 1
            s = target_slot[w]
            if s >= 0:
                out_tp[nd, s] += 1
        visited[w] = 1
        sv[nd] = w
        sp[nd] = ptr[w]
        d = nd


def _midedge_kernel(
    ptr, adj_v, adj_e, vcol, eorig, table, end_ok, edist, a0, e0,
    n_max, split_depth, unit, n_units, out, out_sq,
):
    """Mid-edge walks entering vertex ``a0`` from start mid-edge ``e0``.

    A walk of length n visits n vertices and stops on a mid-edge.  The step
    at a vertex is classified by ``table[colour, in-origin, out-origin]``
    into 0, 1 or 2; ``out[n, c1, c2]`` counts walks with ``c1`` class-1 and
    ``c2`` class-2 steps.  ``out_sq[n]`` accumulates ``edist[end]**2``.
    """
    nv = ptr.shape[0] - 1
    ne = eorig.shape[0]
    visited = np.zeros(nv, dtype=np.uint8)
    used = np.zeros(ne, dtype=np.uint8)
    sv = np.zeros(n_max + 2, dtype=np.int64)
    se = np.zeros(n_max + 2, dtype=np.int64)
    sp = np.zeros(n_max + 2, dtype=np.int64)
    s1 = np.zeros(n_max + 2, dtype=np.int64)
    s2 = np.zeros(n_max + 2, dtype=np.int64)
    if n_max < 1:
        return
    counter = 0
    if split_depth <= 1:
        counter += 1
        if (counter - 1) % n_units != unit:
            return
    used[e0] = 1
    visited[a0] = 1
    sv[1] = a0
    se[1] = e0
    sp[1] = ptr[a0]
    d = 1
    while d >= 1:
        v = sv[d]
        k = sp[d]
        if k == ptr[v + 1]:
            visited[v] = 0
            used[se[d]] = 0
            d -= 1
            continue
        sp[d] = k + 1
        e = adj_e[k]
        if used[e]:
            continue
        cls = table[vcol[v], eorig[se[d]], eorig[e]]
        n1 = s1[d]
        n2 = s2[d]
        if cls == 1:
            n1 += 1
        elif cls == 2:
            n2 += 1
        if end_ok[e] and (d >= split_depth or unit == 0):
            out[d, n1, n2] += 1
            x = edist[e]
            out_sq[d] += x * x
        w = adj_v[k]
        if d == n_max or visited[w]:
            continue
        nd = d + 1
        if nd == split_depth:
            counter += 1
            if (counter - 1) % n_units != unit:
                continue
        visited[w] = 1
        used[e] = 1
        sv[nd] = w
        se[nd] = e
        sp[nd] = ptr[w]
        s1[nd] = n1
        s2[nd] = n2
        d = nd


if numba is not None:
    _vertex_jit = numba.njit(nogil=True, cache=True)(_vertex_kernel)
    _midedge_jit = numba.njit(nogil=True, cache=True)(_midedge_kernel)
else:  # pragma: no cover
    _vertex_jit = _vertex_kernel
    _midedge_jit = _midedge_kernel


def default_workers() -> int:
    return max(1, os.cpu_count() or 1)


def _n_units(workers: int) -> int:
    return 1 if workers <= 1 else 8 * workers


def _run(jobs, workers):
    if workers <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: job(), jobs))


def _sum_arrays(parts, shape):
    total = np.zeros(shape, dtype=object)
    total[...] = 0
    for p in parts:
        total += p.astype(object)
    return total


def vertex_walks(ball, starts, n_max, targets=(), workers=1, split_depth=DEFAULT_SPLIT_DEPTH):
    """Totals over ``starts`` (vertex indices) of n-step SAW counts.

    Returns ``(counts, per_target)`` as object arrays of Python ints; the
    second has one column per entry of ``targets``.
    """
    ptr, adj_v, _ = ball.csr
    nv = len(ball.vertices)
    target_slot = np.full(nv, -1, dtype=np.int64)
    for s, t in enumerate(targets):
        target_slot[t] = s
    nt = max(1, len(targets))
    maxdeg = int(np.max(np.diff(ptr))) if nv else 0
    bound = max(1, maxdeg) * max(1, maxdeg - 1) ** max(0, n_max - 1)
    fast = numba is not None and bound < INT64_SAFE
    dtype = np.int64 if fast else object
    kernel = _vertex_jit if fast else _vertex_kernel
    units = _n_units(workers)

    def make(v0, unit):
        def job():
            out = np.zeros(n_max + 1, dtype=dtype)
            tp = np.zeros((n_max + 1, nt), dtype=dtype)
            if dtype is object:
                out[...] = 0
                tp[...] = 0
            kernel(ptr, adj_v, v0, n_max, target_slot, split_depth, unit, units, out, tp)
            return out, tp

        return job

    jobs = [make(int(v0), u) for v0 in starts for u in range(units)]
    results = _run(jobs, workers)
    counts = _sum_arrays([r[0] for r in results], n_max + 1)
    tp = _sum_arrays([r[1] for r in results], (n_max + 1, nt))
    return counts, tp[:, : len(targets)]


def midedge_walks(
    ball, starts, n_max, table, end_ok, shape, with_distance=False, workers=1,
    split_depth=DEFAULT_SPLIT_DEPTH,
):
    """Mid-edge SAW counts from the start mid-edges ``starts`` (edge indices).

    ``shape`` gives the class dimensions ``(k1, k2)`` of the output.  The
    length-0 term is included for starts passing ``end_ok``.  Returns
    ``(counts[n, c1, c2], sum_sq[n])`` as object arrays.
    """
    from ..lattice import midedge_half_distances

    ptr, adj_v, adj_e = ball.csr
    vcol = ball.colour_codes
    eorig = ball.origin_codes
    k1, k2 = shape
    maxdeg = int(np.max(np.diff(ptr))) if len(ptr) > 1 else 0
    bound = 2 * max(1, maxdeg - 1) ** max(1, n_max)
    if with_distance:
        bound *= (2 * n_max + 2) ** 2
    fast = numba is not None and bound < INT64_SAFE
    dtype = np.int64 if fast else object
    kernel = _midedge_jit if fast else _midedge_kernel
    units = _n_units(workers)
    end_ok = np.asarray(end_ok, dtype=np.uint8)
    table = np.asarray(table, dtype=np.int64)
    zero_dist = np.zeros(len(ball.edges), dtype=np.int64 if fast else object)

    dist_cache = {}

    def edist_for(e0):
        if not with_distance:
            return zero_dist
        if e0 not in dist_cache:
            dist = midedge_half_distances(ball, e0)
            dist_cache[e0] = dist if fast else dist.astype(object)
        return dist_cache[e0]

    def make(e0, a0, unit, edist):
        def job():
            out = np.zeros((n_max + 1, k1, k2), dtype=dtype)
            sq = np.zeros(n_max + 1, dtype=dtype)
            if dtype is object:
                out[...] = 0
                sq[...] = 0
            kernel(
                ptr, adj_v, adj_e, vcol, eorig, table, end_ok, edist, a0, e0,
                n_max, split_depth, unit, units, out, sq,
            )
            return out, sq

        return job

    jobs = []
    for e0 in starts:
        e0 = int(e0)
        edist = edist_for(e0)
        for a0 in ball.edge_endpoints(e0):
            for u in range(units):
                jobs.append(make(e0, a0, u, edist))
    results = _run(jobs, workers)
    counts = _sum_arrays([r[0] for r in results], (n_max + 1, k1, k2))
    sq = _sum_arrays([r[1] for r in results], n_max + 1)
    for e0 in starts:
        if end_ok[int(e0)]:
            counts[0, 0, 0] += 1
    return counts, sq
