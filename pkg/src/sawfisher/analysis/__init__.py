"""Identity checks, fixed-point maps and series diagnostics."""

from .estimates import (
    DiagnosticsReport,
    MuEstimate,
    estimate_mu,
    exponent_diagnostics,
    truncated_v,
    truncated_y,
    two_point_decay,
)
from .fixedpoint import (
    FixedPointTrace,
    asymptotic_ratio,
    g_eval,
    g_inverse,
    g_prime,
    h_eval,
    hexagonal_mu,
    iterate_mu,
    phi_inverse,
    solve_mu_tilde,
)
from .identities import (
    IdentityReport,
    verify_bipartite_substitution,
    verify_fisher_identity,
    verify_sandwich,
    verify_two_power,
)

__all__ = [
    "DiagnosticsReport",
    "FixedPointTrace",
    "IdentityReport",
    "MuEstimate",
    "asymptotic_ratio",
    "estimate_mu",
    "exponent_diagnostics",
    "g_eval",
    "g_inverse",
    "g_prime",
    "h_eval",
    "hexagonal_mu",
    "iterate_mu",
    "phi_inverse",
    "solve_mu_tilde",
    "truncated_v",
    "truncated_y",
    "two_point_decay",
    "verify_bipartite_substitution",
    "verify_fisher_identity",
    "verify_sandwich",
    "verify_two_power",
]
