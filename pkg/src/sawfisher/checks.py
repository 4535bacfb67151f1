"""End-to-end identity runs: build the balls, enumerate both sides, compare.

Each run starts from an untransformed spec ``G`` and builds the smallest
balls that keep every count exact.
"""

from __future__ import annotations

from .analysis.identities import (
    IdentityReport,
    _bw_length_needed,
    verify_bipartite_substitution,
    verify_fisher_identity,
    verify_sandwich,
    verify_two_power,
)
from .fisher import fisher_black, fisher_full
from .lattice import ORIGINAL, LatticeSpec, build_ball, domain_midedges
from .saw.counts import (
    ANY,
    ORIGINAL_E,
    CountSeries,
    count_from_midedges,
    weighted_black_white,
    weighted_pqr,
)


def midedge_radius(n_max: int) -> int:
    """Radius that covers every walk of length ``n_max`` from a domain mid-edge.

    Domain mid-edges have both endpoints within distance 1 of the seeds.
    """
    return n_max + 1


def domain_series(
    spec: LatticeSpec, n_max: int, origin: str | None = None, end_filter: str = ANY, workers: int = 1
) -> CountSeries:
    """Walks from the mid-edges incident to the fundamental domain."""
    ball = build_ball(spec, midedge_radius(n_max))
    starts = domain_midedges(ball, origin)
    return count_from_midedges(ball, starts, n_max, end_filter, workers=workers)


def fisher_identity_run(spec: LatticeSpec, N: int, workers: int = 1) -> IdentityReport:
    n0 = max(1, (N + 1) // 2)
    series0 = domain_series(spec, n0, workers=workers)
    image = fisher_full(spec).transformed
    series1 = domain_series(image, N, origin=ORIGINAL, end_filter=ORIGINAL_E, workers=workers)
    return verify_fisher_identity(series0, series1, N)


def sandwich_run(kind: str, spec: LatticeSpec, N: int, workers: int = 1) -> IdentityReport:
    """``full_fisher`` compares all walks on F(G) from its domain against walks
    from the images of the original domain edges ending on original edges;
    ``bipartite`` does the same on the black-vertex substitution."""
    image = (fisher_full(spec) if kind == "full_fisher" else fisher_black(spec)).transformed
    upper = domain_series(image, N, workers=workers)
    lower = domain_series(image, N, origin=ORIGINAL, end_filter=ORIGINAL_E, workers=workers)
    return verify_sandwich(kind, upper, lower, len(spec.domain), N)


def bipartite_run(spec: LatticeSpec, N: int, workers: int = 1) -> IdentityReport:
    n_bw = _bw_length_needed(N)
    ball0 = build_ball(spec, midedge_radius(n_bw))
    zbw = weighted_black_white(ball0, domain_midedges(ball0), n_bw, workers=workers)
    image = fisher_black(spec).transformed
    ball1 = build_ball(image, midedge_radius(N))
    zpqr = weighted_pqr(ball1, domain_midedges(ball1, ORIGINAL), N, workers=workers)
    return verify_bipartite_substitution(zbw, zpqr, N)


def two_power_run(spec: LatticeSpec, N: int, workers: int = 1) -> IdentityReport:
    series0 = domain_series(spec, N, workers=workers)
    image = fisher_full(spec).transformed
    ball1 = build_ball(image, midedge_radius(3 * N))
    zpqr = weighted_pqr(ball1, domain_midedges(ball1, ORIGINAL), 3 * N, workers=workers)
    return verify_two_power(series0, zpqr, N)
