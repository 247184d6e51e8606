"""Exception types shared across the package."""

from __future__ import annotations


class DigraphError(ValueError):
    """Base class for invalid-input errors raised by the library."""


class SelfLoop(DigraphError):
    def __init__(self, u: int):
        super().__init__(f"self-loop at vertex {u}")
        self.u = u


class TwoCycle(DigraphError):
    def __init__(self, u: int, v: int):
        super().__init__(f"arcs {u}->{v} and {v}->{u} both present (not oriented)")
        self.u = u
        self.v = v


class OutOfRange(DigraphError):
    def __init__(self, v: int, n: int):
        super().__init__(f"vertex {v} out of range for n={n}")
        self.v = v
        self.n = n


class EmptyGraph(DigraphError):
    def __init__(self, what: str = "operation"):
        super().__init__(f"{what} requires at least one vertex")


class BadParam(DigraphError):
    pass


class HypothesisViolated(DigraphError):
    """A lemma checker was called on an input that does not meet the lemma's hypotheses."""


class ParseError(DigraphError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class Unsupported(DigraphError):
    pass
