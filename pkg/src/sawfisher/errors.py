"""Exception hierarchy shared by every module.

Each error carries a short name of the precondition it reports so the CLI
can echo it verbatim and pick an exit code.
"""


class SawError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class UnknownLattice(SawError):
    pass


class ParseError(SawError):
    pass


class InvalidSpec(SawError):
    def __init__(self, rule: str, detail: str = ""):
        self.rule = rule
        super().__init__(f"{rule}: {detail}" if detail else rule)


class ResourceLimit(SawError):
    exit_code = 3


class NotInGraph(SawError):
    pass


class NotCubic(SawError):
    pass


class NotSimple(SawError):
    pass


class NotBipartite(SawError):
    pass


class BlackNotCubic(SawError):
    pass


class InsufficientRadius(SawError):
    def __init__(self, required: int, actual: int):
        self.required = required
        self.actual = actual
        super().__init__(
            f"InsufficientRadius: ball radius {actual} too small, need at least {required}"
        )


class NoOriginTags(SawError):
    pass


class WrongSeriesKind(SawError):
    pass


class OutOfDomain(SawError):
    pass


class DegreeUnavailable(SawError):
    pass


class EmptySeries(SawError):
    pass


class InsufficientData(SawError):
    pass


class UnsupportedKind(SawError):
    pass
