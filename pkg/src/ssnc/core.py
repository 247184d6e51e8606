"""Immutable oriented digraphs over vertices ``0..n-1`` with bit-set rows.

Row ``u`` of a :class:`Digraph` is a Python ``int`` whose bit ``v`` is set iff
the arc ``u -> v`` is present.  Most hot loops in the package work on these raw
masks; the :class:`VertexSet` wrapper is what the public API hands out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import BadParam, EmptyGraph, OutOfRange, SelfLoop, TwoCycle

MAX_VERTICES = 1024


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bit(mask: int) -> int:
    """Index of the lowest set bit, or -1 for an empty mask."""
    return (mask & -mask).bit_length() - 1


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class VertexSet:
    """A subset of ``0..n-1`` stored as a bit mask."""

    __slots__ = ("bits", "n")

    def __init__(self, bits: int, n: int):
        if bits < 0 or bits >> n:
            raise BadParam(f"bit mask has bits outside 0..{n - 1}")
        self.bits = bits
        self.n = n

    @classmethod
    def of(cls, n: int, vertices: Iterable[int] = ()) -> "VertexSet":
        vertices = list(vertices)
        for v in vertices:
            if not 0 <= v < n:
                raise OutOfRange(v, n)
        return cls(mask_of(vertices), n)

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls((1 << n) - 1, n)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < self.n and bool(self.bits >> v & 1)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, VertexSet):
            return self.bits == other.bits and self.n == other.n
        if isinstance(other, (set, frozenset)):
            return set(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.bits, self.n))

    def _check(self, other: "VertexSet") -> None:
        if self.n != other.n:
            raise BadParam(f"vertex sets over different ground sets ({self.n} vs {other.n})")

    def __and__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.bits & other.bits, self.n)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.bits | other.bits, self.n)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.bits & ~other.bits, self.n)

    def complement(self) -> "VertexSet":
        return VertexSet(((1 << self.n) - 1) & ~self.bits, self.n)

    def to_list(self) -> list[int]:
        return list(iter_bits(self.bits))

    def __repr__(self) -> str:
        return "{" + ", ".join(map(str, self)) + "}"


@dataclass(frozen=True)
class Path:
    """A simple directed path ``v0 -> v1 -> ... -> vl``."""

    vertices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def is_valid_in(self, D: "Digraph") -> bool:
        vs = self.vertices
        if not vs or len(set(vs)) != len(vs):
            return False
        if any(not 0 <= x < D.n for x in vs):
            return False
        return all(D.has_arc(a, b) for a, b in zip(vs, vs[1:]))

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return "Path(" + " ".join(map(str, self.vertices)) + ")"


class Digraph:
    """Immutable oriented graph.

    Construct through :func:`build` (validating) or :meth:`from_rows`
    (validating, mask input).  ``_trusted`` skips validation and is reserved for
    generators that produce oriented rows by construction.
    """

    __slots__ = ("n", "rows", "m_arcs", "_in_rows", "_apsp")

    def __init__(self, n: int, rows: Sequence[int], *, _trusted: bool = False):
        if not _trusted:
            _validate_rows(n, rows)
        self.n = n
        self.rows: tuple[int, ...] = tuple(rows)
        self.m_arcs = sum(r.bit_count() for r in self.rows)
        self._in_rows: tuple[int, ...] | None = None
        self._apsp: list[list[int]] | None = None

    @classmethod
    def from_rows(cls, n: int, rows: Sequence[int]) -> "Digraph":
        return cls(n, rows)

    # -- basic queries -------------------------------------------------

    def check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or not 0 <= v < self.n:
            raise OutOfRange(v, self.n)

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    @property
    def in_rows(self) -> tuple[int, ...]:
        if self._in_rows is None:
            cols = [0] * self.n
            for u, row in enumerate(self.rows):
                bit = 1 << u
                for v in iter_bits(row):
                    cols[v] |= bit
            self._in_rows = tuple(cols)
        return self._in_rows

    def arcs(self) -> list[tuple[int, int]]:
        """All arcs in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self.rows[u])]

    def second_out_mask(self, v: int) -> int:
        rows = self.rows
        first = rows[v]
        reach = 0
        for u in iter_bits(first):
            reach |= rows[u]
        return reach & ~first & ~(1 << v)

    def out_degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def in_degrees(self) -> list[int]:
        return [c.bit_count() for c in self.in_rows]

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def all_pairs_distances(self) -> list[list[int]]:
        """Opt-in BFS distance table; ``-1`` marks unreachable pairs.  Cached."""
        if self._apsp is None:
            self._apsp = [_bfs_layers(self, s) for s in range(self.n)]
        return self._apsp

    # -- dunder --------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, arcs={self.arcs()})"


def _validate_rows(n: int, rows: Sequence[int]) -> None:
    if not 0 <= n <= MAX_VERTICES:
        raise BadParam(f"vertex count {n} outside 0..{MAX_VERTICES}")
    if len(rows) != n:
        raise BadParam(f"expected {n} rows, got {len(rows)}")
    for u, row in enumerate(rows):
        if row < 0:
            raise BadParam(f"row {u} is negative")
        if row >> n:
            raise OutOfRange(row.bit_length() - 1, n)
        if row >> u & 1:
            raise SelfLoop(u)
    for u, row in enumerate(rows):
        for v in iter_bits(row):
            if rows[v] >> u & 1:
                raise TwoCycle(min(u, v), max(u, v))


def _bfs_layers(D: Digraph, s: int) -> list[int]:
    dist = [-1] * D.n
    dist[s] = 0
    seen = 1 << s
    frontier = 1 << s
    d = 0
    rows = D.rows
    while frontier:
        d += 1
        nxt = 0
        for u in iter_bits(frontier):
            nxt |= rows[u]
        nxt &= ~seen
        for w in iter_bits(nxt):
            dist[w] = d
        seen |= nxt
        frontier = nxt
    return dist


# -- public operations -------------------------------------------------


def build(n: int, arcs: Iterable[tuple[int, int]]) -> Digraph:
    """Build an oriented graph from an arc list.

    Duplicate arcs are ignored.  Self-loops, opposite arc pairs and endpoints
    outside ``0..n-1`` raise.
    """
    if not isinstance(n, int) or not 0 <= n <= MAX_VERTICES:
        raise BadParam(f"vertex count {n!r} outside 0..{MAX_VERTICES}")
    rows = [0] * n
    for u, v in arcs:
        for x in (u, v):
            if not isinstance(x, int) or not 0 <= x < n:
                raise OutOfRange(x, n)
        if u == v:
            raise SelfLoop(u)
        if rows[v] >> u & 1:
            raise TwoCycle(min(u, v), max(u, v))
        rows[u] |= 1 << v
    return Digraph(n, rows, _trusted=True)


def out_nbrs(D: Digraph, v: int) -> VertexSet:
    D.check_vertex(v)
    return VertexSet(D.rows[v], D.n)


def second_out_nbrs(D: Digraph, v: int) -> VertexSet:
    """Vertices at directed distance exactly two from ``v``."""
    D.check_vertex(v)
    return VertexSet(D.second_out_mask(v), D.n)


def out_deg(D: Digraph, v: int) -> int:
    D.check_vertex(v)
    return D.rows[v].bit_count()


def second_out_deg(D: Digraph, v: int) -> int:
    D.check_vertex(v)
    return D.second_out_mask(v).bit_count()


def min_out_deg_vertex(D: Digraph) -> tuple[int, int]:
    """Return ``(v, delta)`` with ``v`` the smallest-index vertex of minimum out-degree."""
    if D.n == 0:
        raise EmptyGraph("min_out_deg_vertex")
    best_v, best_d = 0, D.rows[0].bit_count()
    for v in range(1, D.n):
        d = D.rows[v].bit_count()
        if d < best_d:
            best_v, best_d = v, d
    return best_v, best_d


def induced(D: Digraph, S: VertexSet | Iterable[int]) -> tuple[Digraph, dict[int, int]]:
    """Subdigraph induced by ``S``, relabelled ``0..|S|-1`` in increasing order.

    Returns the digraph and the old -> new vertex map.
    """
    if isinstance(S, VertexSet):
        keep = S.bits
    else:
        keep = 0
        for v in S:
            D.check_vertex(v)
            keep |= 1 << v
    if keep >> D.n:
        raise OutOfRange(keep.bit_length() - 1, D.n)
    old = list(iter_bits(keep))
    new_of = {u: i for i, u in enumerate(old)}
    rows = []
    for u in old:
        r = 0
        for w in iter_bits(D.rows[u] & keep):
            r |= 1 << new_of[w]
        rows.append(r)
    return Digraph(len(old), rows, _trusted=True), new_of


def dist(D: Digraph, u: int, v: int) -> int | None:
    """Length of a shortest directed ``u -> v`` path; ``None`` when unreachable."""
    D.check_vertex(u)
    D.check_vertex(v)
    if D._apsp is not None:
        d = D._apsp[u][v]
        return None if d < 0 else d
    if u == v:
        return 0
    rows = D.rows
    seen = 1 << u
    frontier = 1 << u
    target = 1 << v
    d = 0
    while frontier:
        d += 1
        nxt = 0
        for x in iter_bits(frontier):
            nxt |= rows[x]
        nxt &= ~seen
        if nxt & target:
            return d
        seen |= nxt
        frontier = nxt
    return None


def restricted_out_deg(D: Digraph, v: int, S: VertexSet | int) -> int:
    """``|N+(v) & S|``; ``S`` may be a VertexSet or a raw mask."""
    D.check_vertex(v)
    bits = S.bits if isinstance(S, VertexSet) else S
    return (D.rows[v] & bits).bit_count()
