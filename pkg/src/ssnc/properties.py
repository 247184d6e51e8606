"""Class recognizers: girth / m-freeness, exact-length simple paths,
k-anti-transitivity, k-(quasi-)transitivity and transitive triangles.

"Path" always means a simple path (distinct vertices).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Digraph, Path, iter_bits, lowest_bit
from .errors import BadParam


@dataclass(frozen=True)
class AntiTransitivityWitness:
    """An arc ``u -> v`` together with a simple ``u -> v`` path of length ``k``.

    The pair forms a C(k,1): a (k+1)-cycle with exactly one arc reversed.
    """

    u: int
    v: int
    path: Path

    @property
    def k(self) -> int:
        return self.path.length

    @property
    def arc(self) -> tuple[int, int]:
        return (self.u, self.v)

    def is_valid_in(self, D: Digraph) -> bool:
        p = self.path
        return (
            p.is_valid_in(D)
            and p.start == self.u
            and p.end == self.v
            and D.has_arc(self.u, self.v)
        )

    def to_dict(self) -> dict:
        return {"u": self.u, "v": self.v, "k": self.k, "path": list(self.path.vertices)}


@dataclass(frozen=True)
class PathWitness:
    """Violation of k-(quasi-)transitivity: a length-k path whose endpoints lack the forced arc."""

    u: int
    v: int
    path: Path

    def to_dict(self) -> dict:
        return {"u": self.u, "v": self.v, "path": list(self.path.vertices)}


@dataclass(frozen=True)
class ClassProfile:
    oriented: bool
    girth: int | None  # None: acyclic
    anti_transitive_for: dict[int, AntiTransitivityWitness | None] = field(default_factory=dict)
    transitive_triangle_free: bool = True

    @property
    def acyclic(self) -> bool:
        return self.girth is None

    @property
    def max_m_free(self) -> int | None:
        """Largest m with the digraph m-free; ``None`` means every m (acyclic)."""
        return None if self.girth is None else self.girth - 1

    def is_anti_transitive(self, k: int) -> bool:
        return self.anti_transitive_for[k] is None

    def to_dict(self) -> dict:
        return {
            "oriented": self.oriented,
            "girth": self.girth,
            "acyclic": self.acyclic,
            "max_m_free": self.max_m_free,
            "transitive_triangle_free": self.transitive_triangle_free,
            "anti_transitive": [
                {
                    "k": k,
                    "holds": w is None,
                    "witness": None if w is None else w.to_dict(),
                }
                for k, w in sorted(self.anti_transitive_for.items())
            ],
        }


def girth(D: Digraph) -> int | None:
    """Length of a shortest directed cycle, or ``None`` if ``D`` is acyclic.

    One BFS per vertex ``s``: the shortest cycle through ``s`` closes at the
    first BFS layer holding an in-neighbour of ``s``.
    """
    rows = D.rows
    in_rows = D.in_rows
    best = None
    for s in range(D.n):
        preds = in_rows[s]
        if not preds:
            continue
        seen = frontier = 1 << s
        d = 0
        while frontier and (best is None or d + 2 < best):
            d += 1
            nxt = 0
            for x in iter_bits(frontier):
                nxt |= rows[x]
            nxt &= ~seen
            if nxt & preds:
                best = d + 1
                break
            seen |= nxt
            frontier = nxt
    return best


def is_m_free(D: Digraph, m: int) -> bool:
    """True iff ``D`` has no directed cycle of length at most ``m``."""
    if m < 1:
        raise BadParam(f"m must be >= 1, got {m}")
    g = girth(D)
    return g is None or g > m


def _find_path(D: Digraph, u: int, v: int, k: int, avoid: int = 0) -> tuple[int, ...] | None:
    """Lexicographically first simple ``u -> v`` path with exactly ``k`` arcs.

    ``avoid`` is a mask of vertices the path may not touch.
    """
    rows = D.rows
    in_v = D.in_rows[v]
    vbit = 1 << v
    path = [u]

    def dfs(x: int, used: int, r: int) -> bool:
        if r == 1:
            if rows[x] & vbit:
                path.append(v)
                return True
            return False
        if r == 2:
            mid = rows[x] & in_v & ~used
            if mid:
                path.append(lowest_bit(mid))
                path.append(v)
                return True
            return False
        cand = rows[x] & ~used
        while cand:
            low = cand & -cand
            cand ^= low
            y = low.bit_length() - 1
            path.append(y)
            if dfs(y, used | low, r - 1):
                return True
            path.pop()
        return False

    # v is only allowed as the final vertex
    if dfs(u, (1 << u) | vbit | avoid, k):
        return tuple(path)
    return None


def exists_path_of_length(D: Digraph, u: int, v: int, k: int) -> Path | None:
    """Some simple directed ``u -> v`` path with exactly ``k`` arcs, or ``None``.

    The returned path is the lexicographically smallest one.
    """
    D.check_vertex(u)
    D.check_vertex(v)
    if u == v:
        raise BadParam("endpoints must differ")
    if k < 1:
        raise BadParam(f"k must be >= 1, got {k}")
    if k > D.n - 1:
        return None
    found = _find_path(D, u, v, k)
    return None if found is None else Path(found)


def _check_k(k: int) -> None:
    if not isinstance(k, int) or k < 2:
        raise BadParam(f"k must be an integer >= 2, got {k!r}")


def find_anti_transitivity_witness(D: Digraph, k: int) -> AntiTransitivityWitness | None:
    """First arc (lexicographic order) closing a C(k,1), or ``None``."""
    _check_k(k)
    if k > D.n - 1:
        return None
    for u in range(D.n):
        for v in iter_bits(D.rows[u]):
            p = _find_path(D, u, v, k)
            if p is not None:
                return AntiTransitivityWitness(u, v, Path(p))
    return None


def is_k_anti_transitive(D: Digraph, k: int) -> bool:
    return find_anti_transitivity_witness(D, k) is None


def _first_unforced_path(D: Digraph, k: int, forced) -> PathWitness | None:
    if k > D.n - 1:
        return None
    for u in range(D.n):
        for v in range(D.n):
            if u == v or forced(u, v):
                continue
            p = _find_path(D, u, v, k)
            if p is not None:
                return PathWitness(u, v, Path(p))
    return None


def find_k_transitivity_violation(D: Digraph, k: int) -> PathWitness | None:
    """A length-k ``u -> v`` path whose endpoints lack the arc ``u -> v``."""
    _check_k(k)
    return _first_unforced_path(D, k, D.has_arc)


def find_k_quasi_transitivity_violation(D: Digraph, k: int) -> PathWitness | None:
    """A length-k ``u -> v`` path with no arc between ``u`` and ``v`` at all."""
    _check_k(k)
    return _first_unforced_path(D, k, lambda a, b: D.has_arc(a, b) or D.has_arc(b, a))


def is_k_transitive(D: Digraph, k: int) -> bool:
    return find_k_transitivity_violation(D, k) is None


def is_k_quasi_transitive(D: Digraph, k: int) -> bool:
    return find_k_quasi_transitivity_violation(D, k) is None


def find_transitive_triangle(D: Digraph) -> tuple[int, int, int] | None:
    """Some ``(x, y, z)`` with ``x -> y -> z`` and ``x -> z``, lexicographically first."""
    rows = D.rows
    for x in range(D.n):
        rx = rows[x]
        for y in iter_bits(rx):
            common = rows[y] & rx
            if common:
                return (x, y, lowest_bit(common))
    return None


def is_oriented(D: Digraph) -> bool:
    rows = D.rows
    for u in range(D.n):
        if rows[u] >> u & 1:
            return False
        for v in iter_bits(rows[u]):
            if rows[v] >> u & 1:
                return False
    return True


def profile(D: Digraph, k_range) -> ClassProfile:
    ks = sorted(set(k_range))
    if not ks:
        raise BadParam("k_range must be nonempty")
    for k in ks:
        _check_k(k)
    return ClassProfile(
        oriented=is_oriented(D),
        girth=girth(D),
        anti_transitive_for={k: find_anti_transitivity_witness(D, k) for k in ks},
        transitive_triangle_free=find_transitive_triangle(D) is None,
    )


__all__ = [
    "AntiTransitivityWitness",
    "ClassProfile",
    "PathWitness",
    "exists_path_of_length",
    "find_anti_transitivity_witness",
    "find_k_quasi_transitivity_violation",
    "find_k_transitivity_violation",
    "find_transitive_triangle",
    "girth",
    "is_k_anti_transitive",
    "is_k_quasi_transitive",
    "is_k_transitive",
    "is_m_free",
    "is_oriented",
    "profile",
]
