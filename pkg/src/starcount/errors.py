"""Exception hierarchy shared across the package."""


class StarCountError(Exception):
    """Base class for every error raised by starcount."""


class InvalidArgumentError(StarCountError, ValueError):
    """An argument is outside the domain an operation accepts."""


class EmptySourceError(StarCountError, ValueError):
    """Sampling was requested from a graph or table with zero weight."""


class ConstraintError(InvalidArgumentError):
    """A generator parameter set violates a named structural constraint."""

    def __init__(self, constraint, message=None):
        self.constraint = constraint
        super().__init__(message or f"constraint violated: {constraint}")


class RatioViolationError(StarCountError):
    """A vertex breaks the in/out degree ratio bound the sampler relies on."""

    def __init__(self, vertex, in_degree, out_degree, r):
        self.vertex = vertex
        self.in_degree = in_degree
        self.out_degree = out_degree
        self.r = r
        super().__init__(
            f"vertex {vertex} violates ratio bound r={r}: "
            f"in-degree {in_degree}, out-degree {out_degree}"
        )


class ParseError(StarCountError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}".strip())
