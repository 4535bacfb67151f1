"""Coefficient-wise checks of the generating-function relations.

Every comparison is between exact integers; a report names the first
degree at which a check fails together with both sides.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

from ..errors import DegreeUnavailable, WrongSeriesKind
from ..saw.counts import ANY, ORIGINAL_E, CountSeries, WeightedCounts, substitute_series


@dataclass
class IdentityReport:
    name: str
    max_degree: int
    passed: bool
    first_mismatch: int | None = None
    left: int | None = None
    right: int | None = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "max_degree": self.max_degree,
            "passed": self.passed,
            "first_mismatch": self.first_mismatch,
            "left": None if self.left is None else str(self.left),
            "right": None if self.right is None else str(self.right),
            "detail": self.detail,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _need(series: CountSeries, degree: int, what: str) -> None:
    if series.exact_upto < degree:
        raise DegreeUnavailable(
            f"DegreeUnavailable: {what} is exact only up to degree {series.exact_upto}, need {degree}"
        )


def verify_fisher_identity(series0: CountSeries, series1star: CountSeries, N: int) -> IdentityReport:
    """Substituting ``x -> x^2 (1 + x)`` in the walk series of ``G`` gives the
    series of walks on ``F(G)`` between original mid-edges."""
    if series1star.end_filter != ORIGINAL_E:
        raise WrongSeriesKind("WrongSeriesKind: right side must be end-filtered to original mid-edges")
    predicted = substitute_series(series0)
    _need(predicted, N, "substituted series")
    _need(series1star, N, "transformed series")
    for m in range(N + 1):
        a, b = predicted.counts[m], series1star.counts[m]
        if a != b:
            return IdentityReport("fisher_substitution", N, False, m, a, b)
    return IdentityReport("fisher_substitution", N, True)


def _poly_mul(a: list[int], b: list[int], top: int) -> list[int]:
    out = [0] * (top + 1)
    for i, x in enumerate(a[: top + 1]):
        if x:
            for j, y in enumerate(b[: top + 1 - i]):
                out[i + j] += x * y
    return out


def verify_sandwich(
    kind: str, upper_series: CountSeries, lower_series: CountSeries, domain_size: int, N: int
) -> IdentityReport:
    """Two-sided bounds between all walks and walks between original mid-edges.

    ``full_fisher``: ``Z1* <= Z1 <= (1 + 2x + 2x^2 + 2x^3)^2 Z1* + 6|W|(1 + x + x^2)``.
    ``bipartite``: ``c_n <= s_n <= c_n + 4c_{n-1} + 8c_{n-2} + 12c_{n-3} + 18|W|``.

    The verdict always uses the bound exactly as written.  For ``full_fisher``
    a failing report also says whether the bound holds once the 0-step
    reduced walks get their true extension factor
    ``(1 + 4x + 4x^2 + 4x^3)^2``: a walk sitting on a single mid-edge can be
    extended toward either endpoint at each end.
    """
    _need(upper_series, N, "upper series")
    _need(lower_series, N, "lower series")
    s = upper_series.counts
    c = lower_series.counts
    corrected = None
    if kind == "full_fisher":
        ext = _poly_mul([1, 2, 2, 2], [1, 2, 2, 2], 6)
        bound = _poly_mul(ext, c, N)
        for m in range(min(3, N + 1)):
            bound[m] += 6 * domain_size
        ext0 = _poly_mul([1, 4, 4, 4], [1, 4, 4, 4], 6)
        corrected = [
            b + c[0] * ((ext0[m] if m < len(ext0) else 0) - (ext[m] if m < len(ext) else 0))
            for m, b in enumerate(bound)
        ]
    elif kind == "bipartite":
        bound = []
        for n in range(N + 1):
            get = lambda k: c[k] if k >= 0 else 0  # noqa: E731
            bound.append(get(n) + 4 * get(n - 1) + 8 * get(n - 2) + 12 * get(n - 3) + 18 * domain_size)
    else:
        raise WrongSeriesKind(f"unknown sandwich kind {kind!r}")
    name = f"sandwich_{kind}"
    slack = []
    for m in range(N + 1):
        if c[m] > s[m]:
            return IdentityReport(name, N, False, m, c[m], s[m], {"side": "lower"})
        if s[m] > bound[m]:
            detail = {"side": "upper"}
            if corrected is not None:
                over = [k for k in range(N + 1) if s[k] > bound[k]]
                detail["failing_degrees"] = over
                detail["holds_with_two_sided_empty_walks"] = all(
                    s[k] <= corrected[k] for k in range(N + 1)
                )
            return IdentityReport(name, N, False, m, s[m], bound[m], detail)
        slack.append(str(bound[m] - s[m]))
    return IdentityReport(name, N, True, detail={"upper_slack": slack})


def substituted_bipartite(zbw: WeightedCounts, N: int) -> dict[tuple[int, int, int], int]:
    """Expand ``Z(q^2 (1 + p), r)`` as a polynomial in ``p, q, r`` up to total degree N."""
    out: dict[tuple[int, int, int], int] = {}
    for (b, w), cnt in zbw.counts.items():
        for i in range(b + 1):
            if i + 2 * b + w > N:
                break
            key = (i, 2 * b, w)
            out[key] = out.get(key, 0) + cnt * comb(b, i)
    return out


def _bw_length_needed(N: int) -> int:
    best = 0
    for b in range(N + 1):
        for w in range(max(0, b - 1), b + 2):
            if 2 * b + w <= N:
                best = max(best, b + w)
    return best


def verify_bipartite_substitution(zbw: WeightedCounts, zpqr: WeightedCounts, N: int) -> IdentityReport:
    if zbw.mode != "black_white" or zpqr.mode != "pqr":
        raise WrongSeriesKind("WrongSeriesKind: need black_white and pqr weighted counts")
    if zbw.n_max < _bw_length_needed(N):
        raise DegreeUnavailable(
            f"DegreeUnavailable: black/white counts reach length {zbw.n_max}, need {_bw_length_needed(N)}"
        )
    if zpqr.n_max < N:
        raise DegreeUnavailable(f"DegreeUnavailable: pqr counts reach degree {zpqr.n_max}, need {N}")
    predicted = substituted_bipartite(zbw, N)
    observed = {k: v for k, v in zpqr.counts.items() if sum(k) <= N}
    for key in sorted(set(predicted) | set(observed), key=lambda k: (sum(k), k)):
        a, b = predicted.get(key, 0), observed.get(key, 0)
        if a != b:
            return IdentityReport(
                "bipartite_substitution", N, False, sum(key), a, b, {"monomial": list(key)}
            )
    return IdentityReport("bipartite_substitution", N, True, detail={"monomials": len(observed)})


def verify_two_power(series0: CountSeries, zpqr_full: WeightedCounts, N: int) -> IdentityReport:
    """Each n-step walk on ``G`` lifts to exactly ``2^n`` walks on ``F(G)``.

    On a full substitution every vertex step is a triangle step, and a walk
    crossing ``t`` triangles has exactly ``2t`` mixed steps; grouping the
    transformed walks by ``t`` recovers the original counts times ``2^t``.
    """
    if series0.start_mode != "midedge" or series0.end_filter != ANY:
        raise WrongSeriesKind("WrongSeriesKind: need an unfiltered mid-edge series")
    _need(series0, N, "original series")
    if zpqr_full.n_max < 3 * N:
        raise DegreeUnavailable(f"DegreeUnavailable: lifted counts reach {zpqr_full.n_max}, need {3 * N}")
    lifted = [0] * (N + 1)
    for (i, j, k), cnt in zpqr_full.counts.items():
        if k or j % 2:
            return IdentityReport("two_power", N, False, i + j + k, cnt, 0, {"monomial": [i, j, k]})
        t = j // 2
        if t <= N:
            lifted[t] += cnt
    for t in range(N + 1):
        expect = series0.counts[t] * 2**t
        if lifted[t] != expect:
            return IdentityReport("two_power", N, False, t, lifted[t], expect)
    total = sum(lifted)
    expect = sum(c * 2**n for n, c in enumerate(series0.counts[: N + 1]))
    return IdentityReport(
        "two_power", N, total == expect, detail={"lifted_total": str(total), "expected_total": str(expect)}
    )
