from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sawfisher.errors import InsufficientRadius, NoOriginTags, NotBipartite, WrongSeriesKind
from sawfisher.fisher import fisher_black, fisher_full
from sawfisher.lattice import (
    BUILTIN_NAMES,
    ORIGINAL,
    TRIANGLE,
    VertexId,
    build_ball,
    builtin,
    domain_midedges,
    seed_vertices,
)
from sawfisher.saw import (
    ANY,
    ORIGINAL_E,
    CountSeries,
    count_from_midedges,
    count_from_vertices,
    displacement_series,
    substitute_series,
    two_point_series,
    two_point_table,
    weighted_black_white,
    weighted_pqr,
)
from sawfisher.saw import engine, oracle

# single-vertex counts, frozen after agreeing with the brute-force oracle
# (n <= 12) and, for the honeycomb, with the published series
HEX_SIGMA = [
    1, 3, 6, 12, 24, 48, 90, 174, 336, 648, 1218, 2328, 4416, 8388, 15780, 29892,
    56268, 106200, 199350, 375504, 704304,
]
LADDER_SIGMA = [1, 3, 6, 12, 20, 36, 58, 100, 160, 268, 430, 708, 1140]
SQUARE_OCTAGON_SIGMA = [1, 3, 6, 12, 22, 42, 80, 152, 284, 536, 988, 1848]
LOOP3_SIGMA = [1, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128]

# walks from the mid-edges incident to the fundamental domain
HEX_DOMAIN = [5, 20, 40, 80, 160, 320, 620, 1200, 2320, 4480, 8540]
LADDER_DOMAIN = [5, 20, 40, 80, 148, 264, 460, 768, 1300, 2120, 3516]
SQUARE_OCTAGON_DOMAIN = [8, 32, 64, 128, 248, 464, 896, 1696, 3208, 6032, 11280]
# on the full and the black substitution of the honeycomb, from original
# domain mid-edges to original mid-edges
HEX_FULL_STAR = [5, 0, 20, 20, 40, 80, 120, 240, 400, 720, 1280]
HEX_BLACK_STAR = [5, 10, 10, 50, 80, 80, 240, 520, 640, 1260, 2940]


def vertex_counts(spec, n):
    s = seed_vertices(spec)[0]
    return count_from_vertices(build_ball(spec, n + 1), [s], n).counts


def domain_counts(spec, n, origin=None, end_filter=ANY):
    ball = build_ball(spec, n + 1)
    return count_from_midedges(ball, domain_midedges(ball, origin), n, end_filter).counts


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_vertex_counts_match_oracle(name):
    spec = builtin(name)
    s = seed_vertices(spec)[0]
    assert vertex_counts(spec, 8) == oracle.vertex_saw_counts(spec, (s.cell, s.local), 8)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_midedge_counts_match_oracle(name):
    spec = builtin(name)
    assert domain_counts(spec, 7) == oracle.midedge_saw_counts(spec, oracle.domain_keys(spec), 7)


@pytest.mark.parametrize("build", [fisher_full, fisher_black])
def test_filtered_counts_match_oracle(build):
    spec = build(builtin("hexagonal")).transformed
    got = domain_counts(spec, 7, ORIGINAL, ORIGINAL_E)
    want = oracle.midedge_saw_counts(spec, oracle.domain_keys(spec, ORIGINAL), 7, end_origin=ORIGINAL)
    assert got == want


def test_frozen_single_vertex_counts():
    assert vertex_counts(builtin("hexagonal"), 20) == HEX_SIGMA
    assert vertex_counts(builtin("ladder"), 12) == LADDER_SIGMA
    assert vertex_counts(builtin("square_octagon"), 11) == SQUARE_OCTAGON_SIGMA
    assert vertex_counts(builtin("loop3"), 12) == LOOP3_SIGMA
    assert vertex_counts(builtin("line"), 12) == [1] + [2] * 12


def test_frozen_domain_counts():
    assert domain_counts(builtin("hexagonal"), 10) == HEX_DOMAIN
    assert domain_counts(builtin("ladder"), 10) == LADDER_DOMAIN
    assert domain_counts(builtin("square_octagon"), 10) == SQUARE_OCTAGON_DOMAIN
    hexagonal = builtin("hexagonal")
    assert domain_counts(fisher_full(hexagonal).transformed, 10, ORIGINAL, ORIGINAL_E) == HEX_FULL_STAR
    assert domain_counts(fisher_black(hexagonal).transformed, 10, ORIGINAL, ORIGINAL_E) == HEX_BLACK_STAR


def test_small_hexagonal_values():
    c = vertex_counts(builtin("hexagonal"), 6)
    assert c[1] == 3 and c[2] == 6
    # 3 * 2^5 minus the 6 closed hexagons through the start
    assert c[6] == 96 - 6


def test_tree_counts_are_exact_powers():
    assert vertex_counts(builtin("tree3"), 10) == [1] + [3 * 2 ** (n - 1) for n in range(1, 11)]


@pytest.mark.parametrize("name", ["hexagonal", "ladder", "square_octagon", "loop3", "tree3"])
def test_cubic_bound(name):
    c = vertex_counts(builtin(name), 10)
    assert all(c[n] <= 3 * 2 ** (n - 1) for n in range(1, 11))


@pytest.mark.parametrize("name", ["hexagonal", "ladder", "tree3", "line"])
def test_submultiplicative(name):
    c = vertex_counts(builtin(name), 12)
    for m in range(1, 12):
        for n in range(1, 13 - m):
            assert c[m + n] <= c[m] * c[n]


def test_radius_independence():
    spec = builtin("square_octagon")
    s = seed_vertices(spec)[0]
    r = 9
    a = count_from_vertices(build_ball(spec, r), [s], r - 1).counts
    b = count_from_vertices(build_ball(spec, r + 2), [s], r - 1).counts
    assert a == b


def test_radius_guard_reports_minimum():
    ball = build_ball(builtin("hexagonal"), 10)
    with pytest.raises(InsufficientRadius) as err:
        count_from_vertices(ball, [seed_vertices(ball.spec)[0]], 20)
    assert err.value.required == 21 and err.value.actual == 10
    with pytest.raises(InsufficientRadius):
        count_from_midedges(ball, domain_midedges(ball), 12)


def test_empty_walk_counts():
    ball = build_ball(builtin("hexagonal"), 2)
    me = domain_midedges(ball)[0]
    assert count_from_midedges(ball, [me], 0).counts == [1]


def test_filter_needs_origin_tags():
    ball = build_ball(builtin("hexagonal"), 4)
    with pytest.raises(NoOriginTags):
        count_from_midedges(ball, domain_midedges(ball), 2, ORIGINAL_E)
    with pytest.raises(NoOriginTags):
        weighted_pqr(ball, domain_midedges(ball), 2)


def test_triangle_routes_counted():
    # from an original mid-edge of F(G), one triangle is crossed in 2 steps
    # (short way) or 3 steps (long way), for each of the 2 exits
    spec = fisher_full(builtin("hexagonal")).transformed
    ball = build_ball(spec, 5)
    me = domain_midedges(ball, ORIGINAL)[0]
    c = count_from_midedges(ball, [me], 3, ORIGINAL_E).counts
    # both endpoints of the start lead into a triangle: 2 sides x 2 exits
    assert c[:4] == [1, 0, 4, 4]


def test_two_point_basics():
    spec = builtin("hexagonal")
    ball = build_ball(spec, 10)
    v = VertexId((0, 0), 0)
    w = VertexId((1, 0), 0)
    assert two_point_series(ball, v, v, 6).counts == [1, 0, 0, 0, 0, 0, 0]
    assert two_point_series(ball, v, w, 0).counts == [0]


def test_two_point_symmetric():
    spec = builtin("hexagonal")
    ball = build_ball(spec, 12)
    v = VertexId((0, 0), 0)
    for w in (VertexId((1, 0), 0), VertexId((0, 0), 1), VertexId((1, -1), 1)):
        assert two_point_series(ball, v, w, 8).counts == two_point_series(ball, w, v, 8).counts


def test_endpoint_partition():
    spec = builtin("ladder")
    ball = build_ball(spec, 8)
    v = seed_vertices(spec)[0]
    targets = [x for x in ball.vertices if ball.dist[ball.index[x]] <= 7]
    table = two_point_table(ball, v, targets, 7)
    totals = [sum(table[t][n] for t in targets) for n in range(8)]
    assert totals == count_from_vertices(ball, [v], 7).counts


def test_line_displacement():
    ball = build_ball(builtin("line"), 12)
    starts = domain_midedges(ball)
    d = displacement_series(ball, starts, 10)
    assert d.sum_sq[0] == 0
    for n in range(1, 11):
        assert d.sum_sq[n] == d.counts[n] * 4 * n * n


def test_displacement_bounds_and_growth():
    ball = build_ball(builtin("hexagonal"), 13)
    d = displacement_series(ball, domain_midedges(ball), 12)
    for n in range(13):
        assert d.sum_sq[n] <= d.counts[n] * (2 * n + 2) ** 2
    msd = d.mean_sq()
    assert all(a <= b for a, b in zip(msd, msd[1:]))


def test_black_white_classes():
    spec = builtin("hexagonal")
    ball = build_ball(spec, 9)
    starts = domain_midedges(ball)
    bw = weighted_black_white(ball, starts, 8)
    assert {k for k, c in bw.counts.items() if sum(k) == 1} == {(1, 0), (0, 1)}
    assert all(abs(b - w) <= 1 for b, w in bw.counts)
    assert bw.total_by_length() == count_from_midedges(ball, starts, 8).counts
    assert all(b == w for b, w in bw.even_part())


def test_black_white_needs_colouring():
    ball = build_ball(builtin("ladder"), 4)
    with pytest.raises(NotBipartite):
        weighted_black_white(ball, domain_midedges(ball), 2)


def _oracle_pqr(spec, n_max):
    out = Counter()
    keys = oracle.domain_keys(spec, ORIGINAL)
    for n in range(n_max + 1):
        for w in oracle.midedge_saws(spec, keys, n):
            if oracle._origin_of(spec, w.edges[-1]) != ORIGINAL:
                continue
            cls = Counter()
            for a, b in oracle.step_origins(spec, w):
                cls["r" if a == b == ORIGINAL else "p" if a == b == TRIANGLE else "q"] += 1
            out[(cls["p"], cls["q"], cls["r"])] += 1
    return dict(out)


def _oracle_bw(spec, n_max):
    out = Counter()
    keys = oracle.domain_keys(spec)
    for n in range(n_max + 1):
        for w in oracle.midedge_saws(spec, keys, n):
            b = sum(1 for (_, local) in w.vertices if spec.colour(local) == "black")
            out[(b, n - b)] += 1
    return dict(out)


def test_pqr_matches_oracle():
    spec = fisher_black(builtin("hexagonal")).transformed
    ball = build_ball(spec, 8)
    got = weighted_pqr(ball, domain_midedges(ball, ORIGINAL), 7)
    assert got.counts == _oracle_pqr(spec, 7)


def test_black_white_matches_oracle():
    spec = builtin("hexagonal")
    ball = build_ball(spec, 8)
    assert weighted_black_white(ball, domain_midedges(ball), 7).counts == _oracle_bw(spec, 7)


def test_pqr_crossing_weights():
    spec = fisher_black(builtin("hexagonal")).transformed
    ball = build_ball(spec, 5)
    z = weighted_pqr(ball, domain_midedges(ball, ORIGINAL), 3)
    assert z.counts[(0, 2, 0)] > 0  # short way through a triangle
    assert z.counts[(1, 2, 0)] > 0  # long way
    assert z.counts[(0, 0, 1)] > 0  # straight through a white vertex
    assert z.total_by_length() == domain_counts(spec, 3, ORIGINAL, ORIGINAL_E)


def test_substitution_examples():
    base = dict(start_mode="midedge", start_set=[], end_filter=ANY, graph_id="g")
    assert substitute_series(CountSeries([1], **base)).counts == [1]
    assert substitute_series(CountSeries([0, 7], **base)).counts == [0, 0, 7, 7]
    s = substitute_series(CountSeries([5, 20, 40], **base))
    assert s.valid_upto == 5
    with pytest.raises(WrongSeriesKind):
        substitute_series(CountSeries([1], "vertex", [], ANY, "g"))


@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=8))
def test_substitution_total_is_two_power_sum(counts):
    series = CountSeries(counts, "midedge", [], ANY, "g")
    out = substitute_series(series)
    assert sum(out.counts) == sum(c * 2**n for n, c in enumerate(counts))


@given(st.integers(2, 4), st.integers(0, 6))
def test_parallel_matches_serial(workers, split_depth):
    spec = builtin("hexagonal")
    ball = build_ball(spec, 11)
    s = seed_vertices(spec)[0]
    one = count_from_vertices(ball, [s], 10, workers=1)
    many = count_from_vertices(ball, [s], 10, workers=workers, split_depth=split_depth)
    assert one.counts == many.counts
    starts = domain_midedges(ball)
    a = count_from_midedges(ball, starts, 9, workers=1)
    b = count_from_midedges(ball, starts, 9, workers=workers, split_depth=split_depth)
    assert a.counts == b.counts


def test_object_fallback_matches_compiled(monkeypatch):
    spec = builtin("square_octagon")
    ball = build_ball(spec, 9)
    starts = domain_midedges(ball)
    fast = count_from_midedges(ball, starts, 8).counts
    fast_d = displacement_series(ball, starts, 8).sum_sq
    monkeypatch.setattr(engine, "INT64_SAFE", 0)
    assert count_from_midedges(ball, starts, 8).counts == fast
    assert displacement_series(ball, starts, 8).sum_sq == fast_d
    assert vertex_counts(spec, 8) == SQUARE_OCTAGON_SIGMA[:9]


def test_counts_serialise():
    ball = build_ball(builtin("hexagonal"), 4)
    s = count_from_vertices(ball, [seed_vertices(ball.spec)[0]], 3)
    again = CountSeries.from_dict(s.to_dict())
    assert again.counts == s.counts and again.start_set == s.start_set
    assert s.to_csv().splitlines()[:2] == ["n,count", "0,1"]
    assert '"3"' in s.to_json()
