"""Seymour-vertex detection and the lemma checkers used by the prover.

The lemma checkers do not assume the lemmas: each one recomputes the claimed
inequality on the given instance and reports what it saw.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .core import Digraph, Path, VertexSet, iter_bits, min_out_deg_vertex
from .errors import BadParam, EmptyGraph, HypothesisViolated


def is_seymour_vertex(D: Digraph, v: int) -> bool:
    D.check_vertex(v)
    return D.rows[v].bit_count() <= D.second_out_mask(v).bit_count()


def seymour_mask(D: Digraph) -> int:
    """Bit mask of all Seymour vertices (fast path for sweeps)."""
    rows = D.rows
    out = 0
    for v in range(D.n):
        first = rows[v]
        reach = 0
        for u in iter_bits(first):
            reach |= rows[u]
        if first.bit_count() <= (reach & ~first & ~(1 << v)).bit_count():
            out |= 1 << v
    return out


@dataclass(frozen=True)
class VertexRecord:
    v: int
    out_deg: int
    second_out_deg: int

    @property
    def slack(self) -> int:
        return self.second_out_deg - self.out_deg

    @property
    def is_seymour(self) -> bool:
        return self.out_deg <= self.second_out_deg


@dataclass(frozen=True)
class SeymourReport:
    n: int
    records: tuple[VertexRecord, ...]

    @property
    def seymour_vertices(self) -> VertexSet:
        return VertexSet.of(self.n, (r.v for r in self.records if r.is_seymour))

    @property
    def has_seymour_vertex(self) -> bool:
        return any(r.is_seymour for r in self.records)

    @property
    def max_ratio(self) -> Fraction | None:
        """Max of d++/d+ over vertices with d+ > 0; ``None`` if every vertex is a sink."""
        ratios = [Fraction(r.second_out_deg, r.out_deg) for r in self.records if r.out_deg]
        return max(ratios) if ratios else None

    @property
    def min_slack(self) -> int:
        return min(r.slack for r in self.records)

    @property
    def max_slack(self) -> int:
        return max(r.slack for r in self.records)

    def to_dict(self) -> dict:
        ratio = self.max_ratio
        return {
            "vertices": [
                {
                    "v": r.v,
                    "out_deg": r.out_deg,
                    "second_out_deg": r.second_out_deg,
                    "is_seymour": r.is_seymour,
                }
                for r in self.records
            ],
            "seymour_vertices": self.seymour_vertices.to_list(),
            "max_ratio": None if ratio is None else str(ratio),
            "min_slack": self.min_slack,
            "max_slack": self.max_slack,
        }


def seymour_report(D: Digraph) -> SeymourReport:
    if D.n == 0:
        raise EmptyGraph("seymour_report")
    recs = tuple(
        VertexRecord(v, D.rows[v].bit_count(), D.second_out_mask(v).bit_count())
        for v in range(D.n)
    )
    return SeymourReport(D.n, recs)


# -- sink criterion ------------------------------------------------------


@dataclass(frozen=True)
class SinkResult:
    v: int
    sink: int | None
    v_is_seymour: bool

    @property
    def found(self) -> bool:
        return self.sink is not None


def _require_min_degree(D: Digraph, v: int) -> int:
    D.check_vertex(v)
    _, delta = min_out_deg_vertex(D)
    if D.rows[v].bit_count() != delta:
        raise HypothesisViolated(
            f"vertex {v} has out-degree {D.rows[v].bit_count()}, minimum is {delta}"
        )
    return delta


def find_sink_in(D: Digraph, S: int) -> int | None:
    """Smallest vertex of mask ``S`` with no out-neighbour inside ``S``."""
    rows = D.rows
    for x in iter_bits(S):
        if not rows[x] & S:
            return x
    return None


def check_sink_lemma(D: Digraph, v: int) -> SinkResult:
    """Look for a sink of ``D[N+(v)]`` at a minimum out-degree vertex ``v``.

    An empty out-neighbourhood gives ``sink=None``; such a ``v`` is Seymour anyway.
    """
    _require_min_degree(D, v)
    x = find_sink_in(D, D.rows[v])
    return SinkResult(v, x, is_seymour_vertex(D, v))


# -- longest path in an out-neighbourhood --------------------------------


def longest_path_in(D: Digraph, S: int) -> tuple[int, ...]:
    """Longest simple path of ``D[S]``; lexicographically smallest among ties.

    Returns ``()`` for an empty ``S``.  Exhaustive DFS, meant for small ``S``.
    """
    rows = D.rows
    best: list[int] = []
    path: list[int] = []
    size = S.bit_count()

    def dfs(x: int, used: int) -> bool:
        nonlocal best
        if len(path) > len(best):
            best = path.copy()
            if len(best) == size:
                return True
        cand = rows[x] & S & ~used
        while cand:
            low = cand & -cand
            cand ^= low
            path.append(low.bit_length() - 1)
            if dfs(low.bit_length() - 1, used | low):
                return True
            path.pop()
        return False

    for s in iter_bits(S):
        path.append(s)
        if dfs(s, 1 << s):
            break
        path.pop()
    return tuple(best)


def longest_path_in_out_nbhd(D: Digraph, v: int) -> tuple[int, Path | None]:
    """``(l, path)``: a longest directed path inside ``D[N+(v)]``.

    ``l`` counts arcs; ``path`` is ``None`` only when ``N+(v)`` is empty.
    """
    D.check_vertex(v)
    p = longest_path_in(D, D.rows[v])
    if not p:
        return 0, None
    return len(p) - 1, Path(p)


def check_path_bound_lemma(D: Digraph, k: int) -> bool:
    """Every out-neighbourhood of a k-anti-transitive ``D`` spans only paths of length <= k-2."""
    from .properties import is_k_anti_transitive

    if k < 2:
        raise BadParam(f"k must be >= 2, got {k}")
    if not is_k_anti_transitive(D, k):
        raise HypothesisViolated(f"digraph is not {k}-anti-transitive")
    return all(longest_path_in_out_nbhd(D, v)[0] <= k - 2 for v in range(D.n))


# -- common out-neighbourhoods outside R ----------------------------------


def common_out_mask(D: Digraph, R: int, vs) -> int:
    out = ~R & D.full_mask
    for r in vs:
        out &= D.rows[r]
    return out


def common_out_nbrs_outside(D: Digraph, R: VertexSet, vs) -> VertexSet:
    """Common out-neighbours of ``vs`` that lie outside ``R``."""
    vs = list(vs)
    if len(vs) not in (2, 3) or len(set(vs)) != len(vs):
        raise BadParam("vs must hold 2 or 3 distinct vertices")
    for r in vs:
        D.check_vertex(r)
        if r not in R:
            raise BadParam(f"vertex {r} is not in R")
    return VertexSet(common_out_mask(D, R.bits, vs), D.n)


@dataclass(frozen=True)
class Lemma3Violation:
    vertices: tuple[int, ...]
    size: int
    bound: int


@dataclass
class Lemma3Report:
    v: int
    delta: int
    pairs_checked: int = 0
    triples_checked: int = 0
    violations: list[Lemma3Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def lemma3_hypotheses_hold(D: Digraph, v: int) -> bool:
    d = D.rows[v].bit_count()
    _, delta = min_out_deg_vertex(D)
    return d == delta and D.second_out_mask(v).bit_count() <= delta - 1


def check_lemma3(D: Digraph, v: int) -> Lemma3Report:
    """Check both common-neighbourhood lower bounds over every pair and triple of ``N+(v)``.

    Hypotheses: ``d+(v)`` is minimum and ``d++(v) <= delta - 1``.
    """
    delta = _require_min_degree(D, v)
    if D.second_out_mask(v).bit_count() > delta - 1:
        raise HypothesisViolated(f"d++({v}) >= delta = {delta}")
    rows = D.rows
    R = rows[v]
    outside = D.full_mask & ~R
    members = list(iter_bits(R))
    dR = {r: (rows[r] & R).bit_count() for r in members}
    nbar = {r: rows[r] & outside for r in members}
    rep = Lemma3Report(v, delta)
    for a, b in combinations(members, 2):
        rep.pairs_checked += 1
        size = (nbar[a] & nbar[b]).bit_count()
        bound = delta + 1 - dR[a] - dR[b]
        if size < bound:
            rep.violations.append(Lemma3Violation((a, b), size, bound))
    for a, b, c in combinations(members, 3):
        rep.triples_checked += 1
        size = (nbar[a] & nbar[b] & nbar[c]).bit_count()
        bound = delta + 2 - dR[a] - dR[b] - dR[c]
        if size < bound:
            rep.violations.append(Lemma3Violation((a, b, c), size, bound))
    return rep


# -- the lambda ratio ----------------------------------------------------


def _cubic(x: Fraction) -> Fraction:
    return 2 * x**3 + x**2 - 1


@dataclass(frozen=True)
class LambdaConstant:
    """Root of ``2x^3 + x^2 - 1`` in (0, 1), held as a rational enclosure ``[lo, hi]``."""

    lo: Fraction
    hi: Fraction

    @property
    def value(self) -> float:
        return float((self.lo + self.hi) / 2)


@lru_cache(maxsize=None)
def lambda_constant(tol: Fraction = Fraction(1, 10**13)) -> LambdaConstant:
    lo, hi = Fraction(0), Fraction(1)
    # the cubic is increasing on (0, 1): -1 at 0, +2 at 1
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if _cubic(mid) < 0:
            lo = mid
        else:
            hi = mid
    return LambdaConstant(lo, hi)


LAMBDA = lambda_constant()


@dataclass(frozen=True)
class LambdaCheck:
    max_ratio: Fraction | None
    passes: bool
    marginal: bool
    witness: int | None


def lambda_ratio_check(D: Digraph, lam: LambdaConstant = LAMBDA) -> LambdaCheck:
    """Is there a vertex with ``d++ >= lambda * d+``?

    Passing requires ``d++ >= hi * d+`` for the upper end of the enclosure, so a
    pass never depends on rounding.  ``marginal`` flags instances decided only
    inside the enclosure.
    """
    if D.n == 0:
        raise EmptyGraph("lambda_ratio_check")
    rows = D.rows
    best_ratio = None
    witness = None
    marginal = False
    for v in range(D.n):
        d1 = rows[v].bit_count()
        d2 = D.second_out_mask(v).bit_count()
        if d1 == 0:
            if witness is None:
                witness = v
            continue
        ratio = Fraction(d2, d1)
        if best_ratio is None or ratio > best_ratio:
            best_ratio = ratio
        if witness is None:
            if ratio >= lam.hi:
                witness = v
            elif ratio >= lam.lo:
                marginal = True
    passes = witness is not None
    return LambdaCheck(best_ratio, passes, marginal and not passes, witness)


def lambda_passes(D: Digraph, lam: LambdaConstant = LAMBDA) -> bool:
    """Fast boolean form of :func:`lambda_ratio_check` for sweeps."""
    rows = D.rows
    num, den = lam.hi.numerator, lam.hi.denominator
    for v in range(D.n):
        d1 = rows[v].bit_count()
        if d1 == 0:
            return True
        if D.second_out_mask(v).bit_count() * den >= num * d1:
            return True
    return False


__all__ = [
    "LAMBDA",
    "LambdaCheck",
    "LambdaConstant",
    "Lemma3Report",
    "Lemma3Violation",
    "SeymourReport",
    "SinkResult",
    "VertexRecord",
    "check_lemma3",
    "check_path_bound_lemma",
    "check_sink_lemma",
    "common_out_nbrs_outside",
    "is_seymour_vertex",
    "lambda_constant",
    "lambda_passes",
    "lambda_ratio_check",
    "lemma3_hypotheses_hold",
    "longest_path_in_out_nbhd",
    "seymour_report",
]
