"""High-precision maps relating connective constants across transformations.

``g(x) = x^2 + x^3`` links a cubic graph to its full triangle substitution
and ``h(x) = x^3 + x^4`` links a bipartite graph to its black-vertex
substitution.  Work precision is at least 50 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import mpmath
from mpmath import mp, mpf

from ..errors import OutOfDomain

MIN_DPS = 50
DEFAULT_DPS = 60


def _dps(precision: int | None) -> int:
    return max(MIN_DPS, precision or DEFAULT_DPS)


def g_eval(x):
    return x * x + x * x * x


def h_eval(x):
    return x**3 + x**4


def g_prime(x):
    return 2 * x + 3 * x * x


def phi_inverse(precision: int | None = None) -> mpf:
    with mp.workdps(_dps(precision)):
        return (mpmath.sqrt(5) - 1) / 2


def _increasing_root(f, fprime, lo, hi, dps):
    """Root of an increasing function on ``[lo, hi]``: bisection, then Newton."""
    lo, hi = mpf(lo), mpf(hi)
    for _ in range(60):
        mid = (lo + hi) / 2
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    x = (lo + hi) / 2
    tiny = mpf(10) ** (-(dps - 5))
    for _ in range(100):
        step = f(x) / fprime(x)
        x -= step
        if abs(step) < tiny:
            break
    return x


def g_inverse(y, precision: int | None = None) -> mpf:
    """Unique root in ``[0, 1]`` of ``x^2 + x^3 = y`` for ``y`` in ``[0, 2]``."""
    dps = _dps(precision)
    with mp.workdps(dps):
        y = mpf(y)
        if y < 0 or y > 2:
            raise OutOfDomain(f"OutOfDomain: g_inverse needs y in [0, 2], got {mpmath.nstr(y, 12)}")
        if y == 0:
            return mpf(0)
        return +_increasing_root(lambda x: g_eval(x) - y, g_prime, 0, 1, dps)


@dataclass
class FixedPointTrace:
    iterates: list
    errors: list
    ratios: list
    direction: str
    converged: bool
    precision: int

    @property
    def final(self):
        return self.iterates[-1]

    @property
    def trailing_ratio(self):
        return self.ratios[-1] if self.ratios else None

    def to_dict(self, digits: int = 30) -> dict:
        s = lambda v: mpmath.nstr(v, digits)  # noqa: E731
        return {
            "direction": self.direction,
            "converged": self.converged,
            "precision": self.precision,
            "iterates": [s(v) for v in self.iterates],
            "errors": [s(v) for v in self.errors],
            "ratios": [s(v) for v in self.ratios],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self, digits: int = 30) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "iterate", "error", "ratio"])
        for k, (x, e) in enumerate(zip(self.iterates, self.errors)):
            r = mpmath.nstr(self.ratios[k - 1], digits) if 0 < k <= len(self.ratios) else ""
            w.writerow([k, mpmath.nstr(x, digits), mpmath.nstr(e, digits), r])
        return buf.getvalue()


def iterate_mu(mu0_inv, k_max: int = 60, tol=1e-12, precision: int | None = None) -> FixedPointTrace:
    """Iterate ``x_{k+1} = g^{-1}(x_k)`` from ``x_0 = 1 / mu_0``.

    Stops once ``|x_k - 1/phi| < tol`` or after ``k_max`` steps.  Ratios are
    successive error quotients, taken only while the error is nonzero.
    """
    dps = _dps(precision)
    with mp.workdps(dps):
        x = mpf(mu0_inv)
        if x < mpf(1) / 2 or x > 1:
            raise OutOfDomain(f"OutOfDomain: 1/mu_0 must lie in [1/2, 1], got {mpmath.nstr(x, 12)}")
        target = phi_inverse(dps)
        tol = mpf(tol)
        iterates = [x]
        errors = [abs(x - target)]
        while errors[-1] >= tol and len(iterates) <= k_max:
            x = g_inverse(x, dps)
            iterates.append(x)
            errors.append(abs(x - target))
        ratios = [b / a for a, b in zip(errors, errors[1:]) if a != 0]
        steps = [b - a for a, b in zip(iterates, iterates[1:])]
        if not steps or all(s == 0 for s in steps):
            direction = "constant"
        elif all(s > 0 for s in steps):
            direction = "increasing"
        elif all(s < 0 for s in steps):
            direction = "decreasing"
        else:
            direction = "mixed"
        return FixedPointTrace(iterates, errors, ratios, direction, errors[-1] < tol, dps)


def asymptotic_ratio(precision: int | None = None) -> mpf:
    """Contraction factor of ``g^{-1}`` at the golden-mean fixed point."""
    with mp.workdps(_dps(precision)):
        return 2 / (7 - mpmath.sqrt(5))


def solve_mu_tilde(mu, precision: int | None = None) -> mpf:
    """Connective constant after black-vertex substitution: ``1/x`` where
    ``x^3 + x^4 = mu^-2``."""
    dps = _dps(precision)
    with mp.workdps(dps):
        mu = mpf(mu)
        if mu <= 1 or mu > 2:
            raise OutOfDomain(f"OutOfDomain: mu must lie in (1, 2], got {mpmath.nstr(mu, 12)}")
        target = 1 / mu**2
        x = _increasing_root(lambda t: h_eval(t) - target, lambda t: 3 * t**2 + 4 * t**3, 0, 1, dps)
        return +(1 / x)


def hexagonal_mu(precision: int | None = None) -> mpf:
    with mp.workdps(_dps(precision)):
        return mpmath.sqrt(2 + mpmath.sqrt(2))
