"""Seymour second-neighbourhood tools for k-anti-transitive, m-free oriented graphs."""

__version__ = "0.1.0"

from .core import Digraph, Path, VertexSet, build
from .errors import (
    BadParam,
    DigraphError,
    EmptyGraph,
    HypothesisViolated,
    OutOfRange,
    ParseError,
    SelfLoop,
    TwoCycle,
    Unsupported,
)

__all__ = [
    "BadParam",
    "Digraph",
    "DigraphError",
    "EmptyGraph",
    "HypothesisViolated",
    "OutOfRange",
    "ParseError",
    "Path",
    "SelfLoop",
    "TwoCycle",
    "Unsupported",
    "VertexSet",
    "build",
]
