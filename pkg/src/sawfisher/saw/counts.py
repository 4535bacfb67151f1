"""Exact SAW counts on finite balls.

All public operations refuse to run on a ball that is too small for the
requested length instead of silently undercounting near the boundary.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from math import comb

import numpy as np

from ..errors import InsufficientRadius, NoOriginTags, NotBipartite, WrongSeriesKind
from ..lattice import ORIGINAL, BallGraph, MidEdge, VertexId, validate_structure
from . import engine

ANY = "any"
ORIGINAL_E = "midedge_of_original_E"
ENDPOINT_SET = "endpoint_set"

# step classes: table[colour, in-origin, out-origin]
_PLAIN = np.zeros((2, 2, 2), dtype=np.int64)
_BLACK_WHITE = np.array([[[0, 0], [0, 0]], [[1, 1], [1, 1]]], dtype=np.int64)
# class 0 = r (both halves original), 1 = p (both triangle), 2 = q (mixed)
_PQR = np.array([[[0, 2], [2, 1]], [[0, 2], [2, 1]]], dtype=np.int64)


@dataclass
class CountSeries:
    counts: list[int]
    start_mode: str
    start_set: list[str]
    end_filter: str
    graph_id: str
    single_vertex: bool = False
    valid_upto: int | None = None

    @property
    def n_max(self) -> int:
        return len(self.counts) - 1

    @property
    def exact_upto(self) -> int:
        return self.n_max if self.valid_upto is None else self.valid_upto

    def to_dict(self) -> dict:
        return {
            "graph_id": self.graph_id,
            "start_mode": self.start_mode,
            "start_set": self.start_set,
            "end_filter": self.end_filter,
            "n_max": self.n_max,
            "valid_upto": self.exact_upto,
            "counts": [str(c) for c in self.counts],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CountSeries":
        return cls(
            counts=[int(c) for c in d["counts"]],
            start_mode=d["start_mode"],
            start_set=list(d["start_set"]),
            end_filter=d["end_filter"],
            graph_id=d["graph_id"],
            valid_upto=d.get("valid_upto"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "count"])
        for n, c in enumerate(self.counts):
            w.writerow([n, c])
        return buf.getvalue()


@dataclass
class WeightedCounts:
    """Counts indexed by step-type tuples.

    ``black_white`` keys are ``(b, w)``; ``pqr`` keys are ``(i, j, k)`` for
    p-, q- and r-steps.
    """

    mode: str
    counts: dict[tuple[int, ...], int]
    n_max: int
    graph_id: str = ""

    def total_by_length(self) -> list[int]:
        out = [0] * (self.n_max + 1)
        for key, c in self.counts.items():
            out[sum(key)] += c
        return out

    def evaluate(self, *weights):
        total = 0
        for key, c in self.counts.items():
            term = c
            for x, k in zip(weights, key):
                term *= x**k
            total += term
        return total

    def even_part(self) -> dict[tuple[int, int], int]:
        """The even-length sub-series (``b == w``) of a black/white count."""
        if self.mode != "black_white":
            raise WrongSeriesKind("even_part needs black_white counts")
        return {k: c for k, c in self.counts.items() if k[0] == k[1]}

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "graph_id": self.graph_id,
            "n_max": self.n_max,
            "counts": {",".join(map(str, k)): str(c) for k, c in sorted(self.counts.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "count"])
        for k, c in sorted(self.counts.items()):
            w.writerow([" ".join(map(str, k)), c])
        return buf.getvalue()


@dataclass
class DisplacementSeries:
    counts: list[int]
    sum_sq: list[int]
    graph_id: str = ""

    @property
    def n_max(self) -> int:
        return len(self.counts) - 1

    def mean_sq(self) -> list[float]:
        return [s / c if c else float("nan") for c, s in zip(self.counts, self.sum_sq)]

    def to_dict(self) -> dict:
        return {
            "graph_id": self.graph_id,
            "counts": [str(c) for c in self.counts],
            "sum_sq": [str(s) for s in self.sum_sq],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "count", "sum_sq"])
        for n, (c, s) in enumerate(zip(self.counts, self.sum_sq)):
            w.writerow([n, c, s])
        return buf.getvalue()


@dataclass(frozen=True)
class Walk:
    """Alternating vertices and mid-edges; ``edges`` is empty for vertex walks
    shorter than one step and has ``len(vertices) + 1`` entries for mid-edge walks."""

    vertices: tuple = ()
    edges: tuple = ()
    midedge: bool = False

    @property
    def length(self) -> int:
        return len(self.vertices) if self.midedge else len(self.vertices) - 1


# ---------------------------------------------------------------------------
# guards


def required_radius_vertices(ball: BallGraph, starts: list[VertexId], n_max: int) -> int:
    return max(int(ball.dist[ball.index[s]]) for s in starts) + n_max + 1


def required_radius_midedges(ball: BallGraph, starts: list[MidEdge], n_max: int) -> int:
    worst = 0
    for me in starts:
        worst = max(worst, int(ball.dist[ball.index[me.u]]), int(ball.dist[ball.index[me.v]]))
    return worst + n_max


def _check_radius(ball: BallGraph, required: int) -> None:
    if ball.radius < required:
        raise InsufficientRadius(required, ball.radius)


def _vertex_indices(ball, starts):
    from ..errors import NotInGraph

    out = []
    for s in starts:
        if s not in ball.index:
            raise NotInGraph(f"vertex {s.label()} not in ball")
        out.append(ball.index[s])
    return out


def _edge_indices(ball, starts):
    from ..errors import NotInGraph

    out = []
    for me in starts:
        if me not in ball.edge_index:
            raise NotInGraph(f"mid-edge {me} not in ball")
        out.append(ball.edge_index[me])
    return out


def _labels(items) -> list[str]:
    out = []
    for it in items:
        if isinstance(it, VertexId):
            out.append(it.label())
        else:
            out.append(f"{it.u.label()}~{it.v.label()}#{it.tag}")
    return out


# ---------------------------------------------------------------------------
# operations


def count_from_vertices(
    ball: BallGraph, starts: list[VertexId], n_max: int, workers: int = 1,
    split_depth: int = engine.DEFAULT_SPLIT_DEPTH,
) -> CountSeries:
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    starts = sorted(starts)
    idx = _vertex_indices(ball, starts)
    _check_radius(ball, required_radius_vertices(ball, starts, n_max))
    counts, _ = engine.vertex_walks(ball, idx, n_max, workers=workers, split_depth=split_depth)
    return CountSeries(
        counts=[int(c) for c in counts],
        start_mode="vertex",
        start_set=_labels(starts),
        end_filter=ANY,
        graph_id=ball.spec.name,
        single_vertex=len(starts) == 1,
    )


def _end_mask(ball: BallGraph, end_filter: str) -> np.ndarray:
    if end_filter == ANY:
        return np.ones(len(ball.edges), dtype=np.uint8)
    if end_filter == ORIGINAL_E:
        if not ball.has_origin_tags:
            raise NoOriginTags(f"NoOriginTags: {ball.spec.name} is not a Fisher image")
        return (ball.origin_codes == 0).astype(np.uint8)
    raise ValueError(f"unknown end filter {end_filter!r}")


def count_from_midedges(
    ball: BallGraph, start_midedges: list[MidEdge], n_max: int, end_filter: str = ANY,
    workers: int = 1, split_depth: int = engine.DEFAULT_SPLIT_DEPTH,
) -> CountSeries:
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    starts = sorted(start_midedges)
    idx = _edge_indices(ball, starts)
    mask = _end_mask(ball, end_filter)
    _check_radius(ball, required_radius_midedges(ball, starts, n_max))
    counts, _ = engine.midedge_walks(
        ball, idx, n_max, _PLAIN, mask, (1, 1), workers=workers, split_depth=split_depth
    )
    return CountSeries(
        counts=[int(c) for c in counts[:, 0, 0]],
        start_mode="midedge",
        start_set=_labels(starts),
        end_filter=end_filter,
        graph_id=ball.spec.name,
    )


def two_point_table(
    ball: BallGraph, v: VertexId, targets: list[VertexId], n_max: int, workers: int = 1
) -> dict[VertexId, list[int]]:
    """Endpoint-resolved counts from ``v`` to each target in one pass."""
    (vi,) = _vertex_indices(ball, [v])
    tidx = _vertex_indices(ball, targets)
    _check_radius(ball, required_radius_vertices(ball, [v], n_max))
    _, tp = engine.vertex_walks(ball, [vi], n_max, targets=tidx, workers=workers)
    return {t: [int(x) for x in tp[:, s]] for s, t in enumerate(targets)}


def two_point_series(ball: BallGraph, v: VertexId, w: VertexId, n_max: int, workers: int = 1) -> CountSeries:
    counts = two_point_table(ball, v, [w], n_max, workers)[w]
    return CountSeries(
        counts=counts,
        start_mode="vertex",
        start_set=_labels([v]),
        end_filter=ENDPOINT_SET,
        graph_id=ball.spec.name,
    )


def displacement_series(
    ball: BallGraph, start_midedges: list[MidEdge], n_max: int, workers: int = 1
) -> DisplacementSeries:
    """Counts and summed squared end-to-end distances (half-edge units)."""
    starts = sorted(start_midedges)
    idx = _edge_indices(ball, starts)
    _check_radius(ball, required_radius_midedges(ball, starts, n_max))
    mask = np.ones(len(ball.edges), dtype=np.uint8)
    counts, sq = engine.midedge_walks(
        ball, idx, n_max, _PLAIN, mask, (1, 1), with_distance=True, workers=workers
    )
    return DisplacementSeries(
        counts=[int(c) for c in counts[:, 0, 0]],
        sum_sq=[int(s) for s in sq],
        graph_id=ball.spec.name,
    )


def weighted_black_white(
    ball: BallGraph, start_midedges: list[MidEdge], n_max: int, workers: int = 1
) -> WeightedCounts:
    if not validate_structure(ball.spec).is_bipartite_coloured:
        raise NotBipartite(f"NotBipartite: {ball.spec.name} is not black/white coloured")
    starts = sorted(start_midedges)
    idx = _edge_indices(ball, starts)
    _check_radius(ball, required_radius_midedges(ball, starts, n_max))
    mask = np.ones(len(ball.edges), dtype=np.uint8)
    counts, _ = engine.midedge_walks(
        ball, idx, n_max, _BLACK_WHITE, mask, (n_max + 1, 1), workers=workers
    )
    out = {}
    for n in range(n_max + 1):
        for b in range(n + 1):
            c = int(counts[n, b, 0])
            if c:
                out[(b, n - b)] = c
    return WeightedCounts("black_white", out, n_max, ball.spec.name)


def weighted_pqr(
    ball: BallGraph, start_midedges: list[MidEdge], n_max: int, workers: int = 1
) -> WeightedCounts:
    """Walks from original mid-edges to original mid-edges, by p/q/r steps."""
    if not ball.has_origin_tags:
        raise NoOriginTags(f"NoOriginTags: {ball.spec.name} is not a Fisher image")
    starts = sorted(start_midedges)
    if any(me.origin != ORIGINAL for me in starts):
        raise ValueError("pqr walks must start on original mid-edges")
    idx = _edge_indices(ball, starts)
    _check_radius(ball, required_radius_midedges(ball, starts, n_max))
    mask = _end_mask(ball, ORIGINAL_E)
    counts, _ = engine.midedge_walks(
        ball, idx, n_max, _PQR, mask, (n_max + 1, n_max + 1), workers=workers
    )
    out = {}
    nz = np.argwhere(counts.astype(bool))
    for n, i, j in nz:
        out[(int(i), int(j), int(n - i - j))] = int(counts[n, i, j])
    return WeightedCounts("pqr", out, n_max, ball.spec.name)


def substitute_series(series0: CountSeries, rule: str = "x_to_x2_1px") -> CountSeries:
    """Coefficients of ``sum_n c_n (x^2 (1 + x))^n``.

    ``out[m]`` needs every ``n`` with ``2n <= m <= 3n``; with input known up
    to ``N`` that holds exactly for ``m <= 2N + 1``, recorded as
    ``valid_upto``.
    """
    if rule != "x_to_x2_1px":
        raise WrongSeriesKind(f"unknown substitution rule {rule!r}")
    if series0.start_mode != "midedge" or series0.end_filter != ANY:
        raise WrongSeriesKind("WrongSeriesKind: substitution needs an unfiltered mid-edge series")
    n_top = series0.n_max
    out = [0] * (3 * n_top + 1)
    for n, c in enumerate(series0.counts):
        if not c:
            continue
        for extra in range(n + 1):
            out[2 * n + extra] += c * comb(n, extra)
    return CountSeries(
        counts=out,
        start_mode="midedge",
        start_set=list(series0.start_set),
        end_filter=ORIGINAL_E,
        graph_id=f"subst({series0.graph_id})",
        valid_upto=min(3 * n_top, 2 * n_top + 1),
    )
