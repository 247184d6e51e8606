"""Instance sources: exhaustive labeled enumeration, seeded random models,
circulants, filtered streams and counterexample hunts.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Callable, Iterator

from .core import Digraph
from .errors import BadParam
from .rng import SplitMix64, splitmix_at

log = logging.getLogger(__name__)

MAX_EXHAUSTIVE_N = 6


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def enumerate_labeled(n: int, start: int = 0, stop: int | None = None) -> Iterator[Digraph]:
    """All labeled oriented graphs on ``n`` vertices, ``3**(n*(n-1)/2)`` of them.

    Pairs ``(i, j)``, ``i < j``, are taken in lexicographic order and each one
    cycles through the states none, ``i -> j``, ``j -> i``; the last pair turns
    fastest, like an odometer.  ``start``/``stop`` select an index range so the
    sweep can be sharded.
    """
    if not isinstance(n, int) or n < 0 or n > MAX_EXHAUSTIVE_N:
        raise BadParam(f"exhaustive enumeration supports 0 <= n <= {MAX_EXHAUSTIVE_N}, got {n}")
    pairs = _pairs(n)
    total = 3 ** len(pairs)
    stop = total if stop is None else min(stop, total)
    if start == 0 and stop == total:
        states = product((0, 1, 2), repeat=len(pairs))
    else:
        states = (_digits(idx, len(pairs)) for idx in range(start, stop))
    bits = [((1 << j), (1 << i)) for i, j in pairs]
    for state in states:
        rows = [0] * n
        for (i, j), s, (bj, bi) in zip(pairs, state, bits):
            if s == 1:
                rows[i] |= bj
            elif s == 2:
                rows[j] |= bi
        yield Digraph(n, rows, _trusted=True)


def _digits(idx: int, width: int) -> tuple[int, ...]:
    out = [0] * width
    for p in range(width - 1, -1, -1):
        idx, out[p] = divmod(idx, 3)
    return tuple(out)


def labeled_count(n: int) -> int:
    return 3 ** (n * (n - 1) // 2)


def random_oriented(n: int, p_arc: float, seed: int) -> Digraph:
    """Each pair in lexicographic order gets an arc with probability ``p_arc``;
    when it does, a second draw picks the direction with a fair coin."""
    if not 0.0 <= p_arc <= 1.0:
        raise BadParam(f"p_arc must be in [0, 1], got {p_arc}")
    if n < 0:
        raise BadParam(f"n must be >= 0, got {n}")
    rng = SplitMix64(seed)
    rows = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p_arc:
                if rng.coin():
                    rows[j] |= 1 << i
                else:
                    rows[i] |= 1 << j
    return Digraph(n, rows, _trusted=True)


def random_tournament(n: int, seed: int) -> Digraph:
    if n < 1:
        raise BadParam(f"n must be >= 1, got {n}")
    return random_oriented(n, 1.0, seed)


def planted_min_degree(n: int, delta: int, seed: int, p_extra: float = 0.3) -> Digraph:
    """Random digraph in which vertex 0 has minimum out-degree ``delta`` and
    ``d++(0) <= delta - 1``.

    ``R = 1..delta`` carries a random Hamiltonian cycle plus extra arcs, and
    every arc leaving ``R`` lands in the pool ``Y = delta+1 .. 2*delta-1``.
    All other vertices get out-degree at least ``delta``.  Used to reach the
    common-neighbourhood lemma's hypotheses, which uniform sampling almost
    never hits.
    """
    if delta < 3:
        raise BadParam(f"delta must be >= 3 (smaller values force a sink), got {delta}")
    if n < 3 * delta:
        raise BadParam(f"n must be >= 3*delta = {3 * delta}, got {n}")
    rng = SplitMix64(seed)
    rows = [0] * n

    def add(a: int, b: int) -> bool:
        if a == b or rows[b] >> a & 1:
            return False
        rows[a] |= 1 << b
        return True

    R = list(range(1, delta + 1))
    Y = list(range(delta + 1, 2 * delta))
    for r in R:
        add(0, r)
    order = R[:]
    for i in range(len(order) - 1, 0, -1):
        j = rng.below(i + 1)
        order[i], order[j] = order[j], order[i]
    for i, r in enumerate(order):
        add(r, order[(i + 1) % delta])
    for i in range(delta):
        for j in range(i + 1, delta):
            a, b = R[i], R[j]
            if rng.random() < p_extra:
                if rng.coin():
                    a, b = b, a
                if rows[a].bit_count() < delta:
                    add(a, b)
    for r in R:
        pool = [y for y in Y if not rows[r] >> y & 1]
        while rows[r].bit_count() < delta:
            add(r, pool.pop(rng.below(len(pool))))
    others = list(range(delta + 1, n))
    for x in others:
        for y in range(n):
            if y != x and rng.random() < p_extra:
                add(x, y)
        free = [y for y in range(n) if y != x and not rows[x] >> y & 1 and not rows[y] >> x & 1]
        while rows[x].bit_count() < delta:
            if not free:
                raise BadParam("could not reach the requested minimum degree; raise n")
            add(x, free.pop(rng.below(len(free))))
    return Digraph(n, rows)


def check_connection_set(n: int, S) -> frozenset[int]:
    S = frozenset(S)
    for s in S:
        if not isinstance(s, int) or not 1 <= s <= n - 1:
            raise BadParam(f"connection element {s!r} outside 1..{n - 1}")
        if (n - s) in S:
            raise BadParam(f"connection set holds both {s} and {n - s}: not oriented")
    return S


def circulant(n: int, S) -> Digraph:
    """Arcs ``i -> i+s (mod n)`` for every ``s`` in ``S``."""
    S = check_connection_set(n, S)
    rows = []
    for i in range(n):
        r = 0
        for s in S:
            r |= 1 << ((i + s) % n)
        rows.append(r)
    return Digraph(n, rows, _trusted=True)


# -- filtered streams ----------------------------------------------------


class Kind(str, Enum):
    EXHAUSTIVE = "exhaustive"
    RANDOM_ORIENTED = "random"
    TOURNAMENT = "tournament"
    CIRCULANT = "circulant"
    PLANTED = "planted"


@dataclass(frozen=True)
class Filter:
    """A membership predicate; ``name`` is one of ``k_anti_transitive``,
    ``m_free``, ``min_out_deg``."""

    name: str
    value: int

    def __call__(self, D: Digraph) -> bool:
        from .properties import is_k_anti_transitive, is_m_free

        if self.name == "k_anti_transitive":
            return is_k_anti_transitive(D, self.value)
        if self.name == "m_free":
            return is_m_free(D, self.value)
        if self.name == "min_out_deg":
            return D.n > 0 and min(D.out_degrees()) >= self.value
        raise BadParam(f"unknown filter {self.name!r}")

    @classmethod
    def parse(cls, text: str) -> "Filter":
        """``"k_anti_transitive=7"`` and friends."""
        name, _, value = text.partition("=")
        name = name.strip().replace("-", "_")
        if name not in ("k_anti_transitive", "m_free", "min_out_deg") or not value:
            raise BadParam(f"bad filter spec {text!r}")
        return cls(name, int(value))

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value}


@dataclass(frozen=True)
class GenSpec:
    kind: Kind
    n: int
    seed: int = 0
    p_arc: float = 0.5
    connection_set: tuple[int, ...] = ()
    filters: tuple[Filter, ...] = ()
    limit: int | None = None
    max_attempts: int | None = None
    delta: int = 3

    def __post_init__(self):
        if not 0.0 <= self.p_arc <= 1.0:
            raise BadParam(f"p_arc must be in [0, 1], got {self.p_arc}")
        if self.n < 0:
            raise BadParam("n must be >= 0")
        if self.kind is Kind.EXHAUSTIVE and self.n > MAX_EXHAUSTIVE_N:
            raise BadParam(f"exhaustive enumeration supports n <= {MAX_EXHAUSTIVE_N}")
        if self.kind is Kind.CIRCULANT:
            check_connection_set(self.n, self.connection_set)
        if self.kind is Kind.PLANTED and (self.delta < 3 or self.n < 3 * self.delta):
            raise BadParam("planted streams need delta >= 3 and n >= 3*delta")
        if self.kind in (Kind.RANDOM_ORIENTED, Kind.TOURNAMENT, Kind.PLANTED) and self.limit is None:
            raise BadParam("random streams need a limit")

    def instance_seed(self, index: int) -> int:
        """Per-instance seed; instance ``i`` is reproducible without generating ``0..i-1``."""
        return splitmix_at(self.seed, index)

    def base_stream(self) -> Iterator[Digraph]:
        if self.kind is Kind.EXHAUSTIVE:
            yield from enumerate_labeled(self.n)
        elif self.kind is Kind.CIRCULANT:
            yield circulant(self.n, self.connection_set)
        else:
            p = 1.0 if self.kind is Kind.TOURNAMENT else self.p_arc
            cap = self.max_attempts if self.max_attempts is not None else 1000 * max(self.limit, 1)
            for i in range(cap):
                if self.kind is Kind.PLANTED:
                    yield planted_min_degree(self.n, self.delta, self.instance_seed(i), p)
                else:
                    yield random_oriented(self.n, p, self.instance_seed(i))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "n": self.n,
            "seed": self.seed,
            "p_arc": self.p_arc,
            "connection_set": list(self.connection_set),
            "filters": [f.to_dict() for f in self.filters],
            "limit": self.limit,
            "max_attempts": self.max_attempts,
            "delta": self.delta,
        }


class FilteredStream:
    """Iterator over base instances passing every filter, with acceptance telemetry."""

    def __init__(self, spec: GenSpec):
        self.spec = spec
        self.scanned = 0
        self.accepted = 0

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.scanned if self.scanned else 0.0

    def __iter__(self) -> Iterator[Digraph]:
        spec = self.spec
        if spec.limit is not None and spec.limit <= 0:
            return
        for D in spec.base_stream():
            self.scanned += 1
            if all(f(D) for f in spec.filters):
                self.accepted += 1
                yield D
                if spec.limit is not None and self.accepted >= spec.limit:
                    return
            if spec.max_attempts is not None and self.scanned >= spec.max_attempts:
                return


def filtered_stream(spec: GenSpec) -> FilteredStream:
    return FilteredStream(spec)


# -- hunts ---------------------------------------------------------------


class Target(str, Enum):
    SSNC = "ssnc"
    CACCETTA = "caccetta"
    LEMMA3 = "lemma3"


@dataclass
class HuntReport:
    target: Target
    spec: GenSpec
    scanned: int = 0
    accepted: int = 0
    tested: int = 0
    counterexamples: list[dict] = field(default_factory=list)
    min_slack_histogram: Counter = field(default_factory=Counter)
    max_slack_histogram: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def merge(self, other: "HuntReport") -> "HuntReport":
        if other.target is not self.target:
            raise BadParam("cannot merge hunts over different targets")
        return HuntReport(
            self.target,
            self.spec,
            self.scanned + other.scanned,
            self.accepted + other.accepted,
            self.tested + other.tested,
            self.counterexamples + other.counterexamples,
            self.min_slack_histogram + other.min_slack_histogram,
            self.max_slack_histogram + other.max_slack_histogram,
        )

    def summary(self) -> str:
        return (
            f"{self.scanned} scanned, {self.accepted} accepted, {self.tested} tested, "
            f"{len(self.counterexamples)} counterexamples"
        )

    def to_dict(self) -> dict:
        return {
            "target": self.target.value,
            "spec": self.spec.to_dict(),
            "scanned": self.scanned,
            "accepted": self.accepted,
            "tested": self.tested,
            "acceptance_rate": self.accepted / self.scanned if self.scanned else 0.0,
            "counterexamples": self.counterexamples,
            "min_slack_histogram": {str(k): v for k, v in sorted(self.min_slack_histogram.items())},
            "max_slack_histogram": {str(k): v for k, v in sorted(self.max_slack_histogram.items())},
        }


def _ssnc_check(D: Digraph, rep: HuntReport) -> dict | None:
    from .seymour import seymour_report

    if D.n == 0:
        return None
    sr = seymour_report(D)
    rep.tested += 1
    rep.min_slack_histogram[sr.min_slack] += 1
    rep.max_slack_histogram[sr.max_slack] += 1
    if not sr.has_seymour_vertex:
        return {"reason": "no Seymour vertex", "seymour": sr.to_dict()}
    return None


def _caccetta_check(D: Digraph, rep: HuntReport) -> dict | None:
    from .prover import check_caccetta_instance

    verdict = check_caccetta_instance(D)
    if verdict.hypothesis_met:
        rep.tested += 1
    if not verdict.consistent:
        return {"reason": "degree hypothesis met, Seymour vertex present, no directed triangle",
                "verdict": verdict.to_dict()}
    return None


def _lemma3_check(D: Digraph, rep: HuntReport) -> dict | None:
    from .seymour import check_lemma3

    if D.n == 0:
        return None
    rows = D.rows
    delta = min(r.bit_count() for r in rows)
    found = None
    for v in range(D.n):
        if rows[v].bit_count() != delta or D.second_out_mask(v).bit_count() > delta - 1:
            continue
        rep.tested += 1
        res = check_lemma3(D, v)
        if not res.ok and found is None:
            found = {
                "reason": "common out-neighbourhood bound violated",
                "v": v,
                "violations": [
                    {"vertices": list(x.vertices), "size": x.size, "bound": x.bound}
                    for x in res.violations
                ],
            }
    return found


_CHECKS: dict[Target, Callable[[Digraph, HuntReport], dict | None]] = {
    Target.SSNC: _ssnc_check,
    Target.CACCETTA: _caccetta_check,
    Target.LEMMA3: _lemma3_check,
}


def hunt_counterexamples(
    spec: GenSpec,
    target: Target,
    progress: Callable[[HuntReport], None] | None = None,
    progress_every: int = 10000,
) -> HuntReport:
    """Scan ``filtered_stream(spec)`` for violations of ``target``.

    Counterexamples are stored with their digraph6 encoding (edge list above
    62 vertices) so they can be replayed through the CLI.
    """
    from .formats import emit_digraph6, emit_edgelist

    target = Target(target)
    check = _CHECKS[target]
    rep = HuntReport(target, spec)
    stream = filtered_stream(spec)
    for D in stream:
        found = check(D, rep)
        if found is not None:
            found["digraph6" if D.n <= 62 else "edgelist"] = (
                emit_digraph6(D) if D.n <= 62 else emit_edgelist(D)
            )
            log.warning("counterexample candidate: %s", found)
            rep.counterexamples.append(found)
        if progress is not None and stream.scanned % progress_every == 0:
            rep.scanned, rep.accepted = stream.scanned, stream.accepted
            progress(rep)
    rep.scanned, rep.accepted = stream.scanned, stream.accepted
    return rep


def enumerate_tournaments(n: int) -> Iterator[Digraph]:
    """All ``2**(n*(n-1)/2)`` labeled tournaments, same pair order as :func:`enumerate_labeled`."""
    if not isinstance(n, int) or n < 1 or n > 8:
        raise BadParam(f"tournament enumeration supports 1 <= n <= 8, got {n}")
    pairs = _pairs(n)
    for state in product((0, 1), repeat=len(pairs)):
        rows = [0] * n
        for (i, j), s in zip(pairs, state):
            if s:
                rows[j] |= 1 << i
            else:
                rows[i] |= 1 << j
        yield Digraph(n, rows, _trusted=True)
