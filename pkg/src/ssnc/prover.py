"""Constructive Seymour-vertex finder for k-anti-transitive, (k-4)-free oriented
graphs, plus the directed-triangle (Caccetta-Haggkvist) checks.

The finder walks the case analysis of the existence proof on a concrete
instance.  Every intermediate fact the argument relies on is evaluated and
recorded in the trace; a fact that fails on an input meeting the hypotheses
stops the run with a ``PROOF_DIVERGENCE`` error carrying the full context.
Branches whose justification is an external theorem (small minimum degree,
large girth, k = 6) fall back to brute force, which is sound because those
theorems guarantee a Seymour vertex exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .core import Digraph, VertexSet, iter_bits, lowest_bit, min_out_deg_vertex
from .errors import BadParam, EmptyGraph
from .properties import find_anti_transitivity_witness, girth, is_oriented
from .seymour import find_sink_in, is_seymour_vertex, longest_path_in

SMALL_DELTA = 6


class Branch(str, Enum):
    SMALL_DELTA = "SmallDelta"
    LARGE_M = "LargeM"
    SINK = "Sink"
    V_SEYMOUR = "VSeymour"
    CASE1 = "Case1"
    CASE2A = "Case2a"
    CASE2B = "Case2b"
    CASE3A = "Case3a"
    CASE3B = "Case3b"


class TraceErrorKind(str, Enum):
    PRECONDITION_VIOLATED = "PreconditionViolated"
    PROOF_DIVERGENCE = "ProofDivergence"
    FALLBACK_EXHAUSTED = "FallbackExhausted"


@dataclass(frozen=True)
class Assertion:
    text: str
    holds: bool
    vertices: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"text": self.text, "holds": self.holds, "vertices": list(self.vertices)}

    @classmethod
    def from_dict(cls, d: dict) -> "Assertion":
        return cls(d["text"], d["holds"], tuple(d["vertices"]))


def _set_list(mask: int | None) -> list[int] | None:
    return None if mask is None else list(iter_bits(mask))


def _list_mask(xs) -> int | None:
    if xs is None:
        return None
    m = 0
    for x in xs:
        m |= 1 << x
    return m


@dataclass
class ProofTrace:
    k: int
    n: int
    v: int | None = None
    delta: int | None = None
    branch: Branch | None = None
    R: int | None = None
    subpath: tuple[int, ...] = ()
    B: int | None = None
    X: int | None = None
    z_chain: list[int] = field(default_factory=list)
    steps: list[str] = field(default_factory=list)
    relabelings: list[str] = field(default_factory=list)
    assertions: list[Assertion] = field(default_factory=list)
    result: int | None = None

    @property
    def m(self) -> int:
        return self.k - 4

    @property
    def ell(self) -> int | None:
        return len(self.subpath) - 1 if self.subpath else None

    def vertex_set(self, mask: int | None) -> VertexSet | None:
        return None if mask is None else VertexSet(mask, self.n)

    @property
    def ok(self) -> bool:
        return self.result is not None and all(a.holds for a in self.assertions)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "n": self.n,
            "v": self.v,
            "delta": self.delta,
            "branch": None if self.branch is None else self.branch.value,
            "R": _set_list(self.R),
            "subpath": list(self.subpath),
            "ell": self.ell,
            "B": _set_list(self.B),
            "X": _set_list(self.X),
            "z_chain": list(self.z_chain),
            "steps": list(self.steps),
            "relabelings": list(self.relabelings),
            "assertions": [a.to_dict() for a in self.assertions],
            "result": self.result,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProofTrace":
        return cls(
            k=d["k"],
            n=d["n"],
            v=d["v"],
            delta=d["delta"],
            branch=None if d["branch"] is None else Branch(d["branch"]),
            R=_list_mask(d["R"]),
            subpath=tuple(d["subpath"]),
            B=_list_mask(d["B"]),
            X=_list_mask(d["X"]),
            z_chain=list(d["z_chain"]),
            steps=list(d["steps"]),
            relabelings=list(d["relabelings"]),
            assertions=[Assertion.from_dict(a) for a in d["assertions"]],
            result=d["result"],
        )


class TraceError(Exception):
    """The finder could not produce a verified Seymour vertex.

    ``trace`` holds everything recorded up to the failure.
    """

    def __init__(
        self,
        kind: TraceErrorKind,
        message: str,
        trace: ProofTrace | None = None,
        vertices: tuple[int, ...] = (),
        detail: dict | None = None,
    ):
        super().__init__(f"{kind.value}: {message}")
        self.kind = kind
        self.message = message
        self.trace = trace
        self.vertices = tuple(vertices)
        self.detail = detail or {}

    @property
    def branch(self) -> Branch | None:
        return None if self.trace is None else self.trace.branch

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "message": self.message,
            "branch": None if self.branch is None else self.branch.value,
            "vertices": list(self.vertices),
            "detail": self.detail,
            "trace": None if self.trace is None else self.trace.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TraceError":
        trace = None if d["trace"] is None else ProofTrace.from_dict(d["trace"])
        return cls(TraceErrorKind(d["kind"]), d["message"], trace, tuple(d["vertices"]), d["detail"])


class _Divergence(Exception):
    def __init__(self, text: str, vertices: tuple[int, ...]):
        super().__init__(text)
        self.text = text
        self.vertices = vertices


class _Done(Exception):
    """Raised internally once a branch has settled on its Seymour vertex."""


# -- brute force and triangles --------------------------------------------


def brute_force_seymour(D: Digraph) -> int | None:
    """Smallest-index Seymour vertex, or ``None`` (which would refute the conjecture)."""
    if D.n == 0:
        raise EmptyGraph("brute_force_seymour")
    for v in range(D.n):
        if D.rows[v].bit_count() <= D.second_out_mask(v).bit_count():
            return v
    return None


def find_directed_triangle(D: Digraph) -> tuple[int, int, int] | None:
    """Some directed triangle ``x -> y -> z -> x``, scanning arcs ``x -> y`` in order."""
    rows, in_rows = D.rows, D.in_rows
    for x in range(D.n):
        back = in_rows[x]
        if not back:
            continue
        for y in iter_bits(rows[x]):
            closing = rows[y] & back
            if closing:
                return (x, y, lowest_bit(closing))
    return None


@dataclass(frozen=True)
class CaccettaVerdict:
    n: int
    min_out_deg: int
    min_in_deg: int
    hypothesis_met: bool
    has_seymour_vertex: bool
    triangle: tuple[int, int, int] | None

    @property
    def consistent(self) -> bool:
        """False only for a degree-hypothesis instance with a Seymour vertex and no triangle."""
        return not (self.hypothesis_met and self.has_seymour_vertex and self.triangle is None)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "min_out_deg": self.min_out_deg,
            "min_in_deg": self.min_in_deg,
            "hypothesis_met": self.hypothesis_met,
            "has_seymour_vertex": self.has_seymour_vertex,
            "triangle": None if self.triangle is None else list(self.triangle),
            "consistent": self.consistent,
        }


def check_caccetta_instance(D: Digraph) -> CaccettaVerdict:
    n = D.n
    if n == 0:
        return CaccettaVerdict(0, 0, 0, False, False, None)
    dout = min(D.out_degrees())
    din = min(D.in_degrees())
    met = 3 * dout >= n and 3 * din >= n
    return CaccettaVerdict(
        n,
        dout,
        din,
        met,
        brute_force_seymour(D) is not None,
        find_directed_triangle(D),
    )


# -- the case engine -------------------------------------------------------


class _Engine:
    """State for one run of the case analysis.

    ``r(i)`` names the i-th vertex of the current longest path in ``D[R]``.
    """

    def __init__(self, D: Digraph, k: int, trace: ProofTrace):
        self.D = D
        self.rows = D.rows
        self.k = k
        self.m = k - 4
        self.t = trace
        self.full = D.full_mask
        self.path: list[int] = []

    # bookkeeping

    def check(self, text: str, holds: bool, *vertices: int) -> None:
        holds = bool(holds)
        self.t.assertions.append(Assertion(text, holds, tuple(vertices)))
        if not holds:
            raise _Divergence(text, tuple(vertices))

    def step(self, text: str) -> None:
        self.t.steps.append(text)

    def r(self, i: int) -> int:
        if not 0 <= i < len(self.path):
            raise _Divergence(f"proof refers to r_{i} but the path has {len(self.path)} vertices", ())
        return self.path[i]

    def name(self, x: int) -> str:
        if x in self.path:
            return f"r_{self.path.index(x)}"
        if x in self.t.z_chain:
            return f"z_{self.t.z_chain.index(x) + 1}"
        return f"vertex {x}"

    # neighbourhood helpers

    def arc(self, a: int, b: int) -> bool:
        return bool(self.rows[a] >> b & 1)

    def NR(self, x: int) -> int:
        return self.rows[x] & self.R

    def Nbar(self, x: int) -> int:
        return self.rows[x] & self.Rbar

    def dR(self, x: int) -> int:
        return (self.rows[x] & self.R).bit_count()

    def d(self, x: int) -> int:
        return self.rows[x].bit_count()

    def second(self, x: int) -> int:
        return self.D.second_out_mask(x)

    def idx_mask(self, *idx: int) -> int:
        m = 0
        for i in idx:
            m |= 1 << self.r(i)
        return m

    def lemma3(self, *idx: int) -> int:
        """Common out-neighbours outside R of the named path vertices, with the
        lower bound from the common-neighbourhood lemma checked."""
        vs = [self.r(i) for i in idx]
        common = self.Rbar
        for x in vs:
            common &= self.rows[x]
        bound = self.delta + len(vs) - 1 - sum(self.dR(x) for x in vs)
        label = ", ".join(f"r_{i}" for i in idx)
        self.check(
            f"|N+_Rbar({label})| = {common.bit_count()} >= delta + {len(vs) - 1} - sum d+_R = {bound}",
            common.bit_count() >= bound,
            *vs,
        )
        self.check(f"N+_Rbar({label}) is nonempty", common != 0, *vs)
        return common

    def pick_z(self, mask: int, text: str) -> int:
        self.check(text, mask != 0)
        z = lowest_bit(mask)
        self.t.z_chain.append(z)
        return z

    def not_arc(self, a: int, b: int) -> None:
        self.check(f"{self.name(a)} -/-> {self.name(b)}", not self.arc(a, b), a, b)

    def no_arc_into(self, z: int, targets: int, label: str) -> None:
        self.check(
            f"{self.name(z)} -/-> any vertex of {label}",
            not self.rows[z] & targets,
            z,
        )

    def conclude(self, w: int, z: int, X: int, extras: tuple[int, ...], bound: int) -> None:
        """Close a branch: ``N+(z) - X`` plus ``extras`` sit inside ``N++(w)``."""
        t = self.t
        t.X = X
        outside = self.rows[z] & ~X
        sec = self.second(w)
        self.check(
            f"|N+(z) \\ X| >= {bound} for z = {self.name(z)}",
            outside.bit_count() >= bound,
            z,
        )
        self.check(
            f"N+({self.name(z)}) \\ X is contained in N++({self.name(w)})",
            outside & ~sec == 0,
            z,
            w,
        )
        for e in extras:
            self.check(f"{self.name(e)} in N++({self.name(w)})", sec >> e & 1, e, w)
            self.check(f"{self.name(e)} not in N+({self.name(z)})", not self.arc(z, e), z, e)
        self.check(
            f"{self.name(w)} is a Seymour vertex (d+ = {self.d(w)}, d++ = {sec.bit_count()})",
            self.d(w) <= sec.bit_count(),
            w,
        )
        t.result = w
        raise _Done

    def sink_result(self, w: int, z: int, X: int) -> None:
        """Sink-criterion close: ``z`` is a sink of ``D[X]`` with ``X = N+(w)``."""
        self.check(f"d+_X({self.name(z)}) = 0", not self.rows[z] & X, z)
        self.conclude(w, z, X, (), self.delta)

    # main entry

    def run(self, v: int, delta: int) -> None:
        D, t = self.D, self.t
        self.v = v
        self.delta = delta
        self.R = self.rows[v]
        self.Rbar = self.full & ~self.R
        t.R = self.R
        m = self.m

        self.check(
            "d++(v) <= delta - 1 (otherwise v is already a Seymour vertex)",
            self.second(v).bit_count() <= delta - 1,
            v,
        )
        self.check("every r in R has d+_R(r) >= 1", find_sink_in(D, self.R) is None)

        self.path = list(longest_path_in(D, self.R))
        t.subpath = tuple(self.path)
        ell = len(self.path) - 1
        self.check(f"longest path in D[R] has length >= m = {m} (got {ell})", ell >= m)
        self.check(f"longest path in D[R] has length <= k - 2 = m + 2 (got {ell})", ell <= m + 2)

        if ell == m:
            t.branch = Branch.CASE1
            self.case1()
        elif ell == m + 1:
            self.t.B = self.idx_mask(*range(m + 2))
            self.check(
                "N+_R(r_{m+1}) is contained in {r_0, r_1}",
                self.NR(self.r(m + 1)) & ~self.idx_mask(0, 1) == 0,
                self.r(m + 1),
            )
            if self.arc(self.r(m + 1), self.r(0)):
                t.branch = Branch.CASE2A
                self.case2a()
            else:
                t.branch = Branch.CASE2B
                self.case2b()
        else:
            self.t.B = self.idx_mask(*range(m + 3))
            self.check(
                "N+_R(r_{m+2}) is contained in {r_0, r_1, r_2}",
                self.NR(self.r(m + 2)) & ~self.idx_mask(0, 1, 2) == 0,
                self.r(m + 2),
            )
            if self.arc(self.r(m + 2), self.r(0)):
                t.branch = Branch.CASE3A
                self.case3a()
            else:
                t.branch = Branch.CASE3B
                self.case3b()
        raise _Divergence("case analysis ended without naming a Seymour vertex", ())

    # -- l = m ------------------------------------------------------------

    def case1(self) -> None:
        m, delta = self.m, self.delta
        r = self.r
        B = self.idx_mask(*range(m + 1))
        self.t.B = B
        self.check("N+_R(r_m) = {r_0}", self.NR(r(m)) == 1 << r(0), r(m))
        for i in range(m):
            self.check(f"N+_R(r_{i}) = {{r_{i + 1}}}", self.NR(r(i)) == 1 << r(i + 1), r(i))
        for i in range(m + 1):
            self.check(f"d+(r_{i}) = delta", self.d(r(i)) == delta, r(i))
        base = self.Nbar(r(0))
        for i in range(1, m + 1):
            self.check(f"N+_Rbar(r_{i}) = N+_Rbar(r_0)", self.Nbar(r(i)) == base, r(i))
        X = self.Nbar(r(m))
        self.t.X = X
        self.step("X = N+_Rbar(r_m); looking for a sink of D[X]")
        rows = self.rows
        z1 = self.pick_z(X, "X is nonempty")
        z = z1
        if rows[z1] & X:
            z2 = self.pick_z(rows[z1] & X, "z_1 has an out-neighbour z_2 in X")
            z = z2
            if rows[z2] & X:
                z3 = self.pick_z(rows[z2] & X, "z_2 has an out-neighbour z_3 in X")
                self.not_arc(z3, z1)
                self.no_arc_into(z3, X, "X (a length-k path r_0..r_m z_1 z_2 z_3 z_4 would end in N+(r_0))")
                z = z3
        self.check(f"d+_X({self.name(z)}) = 0", not rows[z] & X, z)
        self.conclude(r(m), z, X, (), delta)

    # -- l = m + 1 --------------------------------------------------------

    def _rotate(self, new_last: int, cycle_len: int) -> None:
        """Rotate the closed path ``r_0 .. r_{L-1} r_0`` so position ``new_last`` becomes last."""
        old = self.path
        start = (new_last + 1) % cycle_len
        self.path = old[start:] + old[:start]
        self.t.subpath = tuple(self.path)
        self.t.relabelings.append(
            f"rotated the cycle so that old r_{new_last} (vertex {old[new_last]}) is r_{cycle_len - 1}"
        )

    def case2a(self) -> None:
        m, delta = self.m, self.delta
        L = m + 2
        r = self.r
        B = self.t.B
        for i in range(m + 1):
            self.check(f"r_{i} has no out-neighbour in R \\ B", self.NR(r(i)) & ~B == 0, r(i))
        for i in range(L):
            allowed = self.idx_mask((i + 1) % L, (i + 2) % L)
            self.check(
                f"N+_R(r_{i}) is contained in {{r_{(i + 1) % L}, r_{(i + 2) % L}}}",
                self.NR(r(i)) & ~allowed == 0,
                r(i),
            )
        ones = [i for i in range(L) if (self.rows[r(i)] & B).bit_count() == 1]
        self.check("some r_i in B has d+_B(r_i) = 1", bool(ones))
        if (m + 1) not in ones:
            self._rotate(ones[0], L)
        r = self.r
        last = r(m + 1)
        self.check("N+_R(r_{m+1}) = {r_0}", self.NR(last) == 1 << r(0), last)
        self.check("d+(r_{m+1}) = delta", self.d(last) == delta, last)
        T = self.lemma3(1, m, m + 1)
        z1 = self.pick_z(T, "z_1 in N+_Rbar(r_1, r_m, r_{m+1})")
        X = self.rows[last]
        self.t.X = X
        if (self.rows[z1] & X).bit_count() <= 1:
            self.step("d+_X(z_1) <= 1")
            self.conclude(last, z1, X, (r(1),), delta - 1)
        self.step("d+_X(z_1) >= 2")
        z2 = self.pick_z(self.rows[z1] & self.Nbar(last), "z_1 -> z_2 for some z_2 in N+_Rbar(r_{m+1})")
        self.no_arc_into(z2, self.Nbar(last), "N+_Rbar(r_{m+1})")
        self.not_arc(z2, r(0))
        self.sink_result(last, z2, X)

    def case2b(self) -> None:
        m, delta = self.m, self.delta
        r = self.r
        B = self.t.B
        last = r(m + 1)
        self.check("N+_R(r_{m+1}) = {r_1}", self.NR(last) == 1 << r(1), last)
        self.check("d+(r_{m+1}) = delta", self.d(last) == delta, last)
        X = self.rows[last]
        S = self.NR(r(m)) & ~B
        if S:
            self.step("claim: r_m has an out-neighbour r_{m+2} in R \\ B")
            self.path.append(lowest_bit(S))
            self.t.relabelings.append(f"r_{m + 2} := vertex {self.path[-1]} (extra vertex of R \\ B)")
            extra = r(m + 2)
            self.not_arc(extra, r(0))
            self.check("N+_R(r_{m+2}) = {r_1}", self.NR(extra) == 1 << r(1), extra)
            T = self.lemma3(m, m + 1, m + 2)
            z1 = self.pick_z(T, "z_1 in N+_Rbar(r_m, r_{m+1}, r_{m+2})")
            self.not_arc(z1, r(2))
            self.check("r_2 in N++(r_{m+1})", self.second(last) >> r(2) & 1, r(2))
            if (self.rows[z1] & X).bit_count() <= 1:
                self.step("d+_X(z_1) <= 1")
                self.conclude(last, z1, X, (r(2),), delta - 1)
            self.step("d+_X(z_1) >= 2")
            z2 = self.pick_z(self.rows[z1] & self.Nbar(last), "z_1 -> z_2 for some z_2 in N+_Rbar(r_{m+1})")
            self.no_arc_into(z2, self.Nbar(last), "N+_Rbar(r_{m+1})")
            self.not_arc(z2, r(1))
            self.sink_result(last, z2, X)
        self.step("claim: N+_{R\\B}(r_m) is empty")
        self.check(
            "N+_R(r_m) is contained in {r_0, r_{m+1}}",
            self.NR(r(m)) & ~self.idx_mask(0, m + 1) == 0,
            r(m),
        )
        self.check("r_0, r_{m+1} not in N+_R(r_1)", not self.rows[r(1)] & self.idx_mask(0, m + 1), r(1))
        T = self.lemma3(1, m, m + 1)
        z1 = self.pick_z(T, "z_1 in N+_Rbar(r_1, r_m, r_{m+1})")
        self.check("r_2 in N++(r_{m+1})", self.second(last) >> r(2) & 1, r(2))
        self.not_arc(z1, r(2))
        if (self.rows[z1] & X).bit_count() <= 1:
            self.step("d+_X(z_1) <= 1")
            self.conclude(last, z1, X, (r(2),), delta - 1)
        self.step("d+_X(z_1) >= 2")
        z2 = self.pick_z(self.rows[z1] & self.Nbar(last), "z_1 -> z_2 for some z_2 in N+_Rbar(r_{m+1})")
        if not self.rows[z2] & X:
            self.step("d+_X(z_2) = 0")
            self.sink_result(last, z2, X)
        self.not_arc(z2, r(1))
        z3 = self.pick_z(self.rows[z2] & self.Nbar(last), "z_2 -> z_3 for some z_3 in N+_Rbar(r_{m+1})")
        self.no_arc_into(z3, self.Nbar(last), "N+_Rbar(r_{m+1})")
        self.not_arc(z3, r(1))
        self.sink_result(last, z3, X)

    # -- l = m + 2 --------------------------------------------------------

    def case3a(self) -> None:
        m, delta = self.m, self.delta
        L = m + 3
        r = self.r
        B = self.t.B
        for i in range(m + 2):
            self.check(f"r_{i} has no out-neighbour in R \\ B", self.NR(r(i)) & ~B == 0, r(i))
        small = [i for i in range(L) if (self.rows[r(i)] & B).bit_count() <= 2]
        self.check("some r_i in B has d+_B(r_i) <= 2", bool(small))
        if (m + 2) not in small:
            self._rotate(small[0], L)
        r = self.r
        last = r(m + 2)
        self.check("d+_R(r_{m+2}) <= 2", self.dR(last) <= 2, last)
        self.check("d+(r_{m+2}) <= delta + 1", self.d(last) <= delta + 1, last)
        sec = self.second(last)
        self.check(
            "{r_1, r_2} meets N++(r_{m+2})",
            sec & self.idx_mask(1, 2) != 0,
            last,
        )
        T = self.lemma3(1, m + 1, m + 2)
        z1 = self.pick_z(T, "z_1 in N+_Rbar(r_1, r_{m+1}, r_{m+2})")
        X = self.rows[last]
        self.no_arc_into(z1, self.Nbar(last), "N+_Rbar(r_{m+2})")
        self.not_arc(z1, r(0))
        self.not_arc(z1, r(2))
        self.not_arc(z1, r(1))
        self.check("d+_X(z_1) = 0", not self.rows[z1] & X, z1)
        w = r(1) if sec >> r(1) & 1 else r(2)
        self.conclude(last, z1, X, (w,), delta)

    def case3b(self) -> None:
        m = self.m
        r = self.r
        last = r(m + 2)
        self.check(
            "N+_R(r_{m+2}) is contained in {r_1, r_2}",
            self.NR(last) & ~self.idx_mask(1, 2) == 0,
            last,
        )
        self.claim2()
        self.claim3()
        self.finish3b()

    def claim2(self) -> None:
        m, delta = self.m, self.delta
        r = self.r
        B = self.t.B
        S = self.NR(r(m + 1)) & ~B
        if not S:
            self.step("claim: N+_{R\\B}(r_{m+1}) is empty")
            self.check(
                "N+_R(r_{m+1}) is contained in {r_0, r_1, r_{m+2}}",
                self.NR(r(m + 1)) & ~self.idx_mask(0, 1, m + 2) == 0,
                r(m + 1),
            )
            return
        self.step("claim: r_{m+1} has an out-neighbour in R \\ B")
        for s in iter_bits(S):
            self.not_arc(s, r(0))
            self.check(
                f"N+_R({s}) is contained in {{r_1, r_2}}",
                self.NR(s) & ~self.idx_mask(1, 2) == 0,
                s,
            )
        candidates = self.NR(r(m + 1)) & ~(1 << r(0))
        into_r1 = [x for x in iter_bits(candidates) if self.arc(x, r(1))]
        if into_r1:
            if not self.arc(r(m + 2), r(1)):
                swap = into_r1[0]
                old = r(m + 2)
                self.path[m + 2] = swap
                self.t.subpath = tuple(self.path)
                self.t.B = B = self.idx_mask(*range(m + 3))
                self.path.append(old)
                self.t.relabelings.append(
                    f"swapped r_{m + 2} to vertex {swap} (it reaches r_1); old r_{m + 2} = vertex {old} becomes r_{m + 3}"
                )
            else:
                self.path.append(lowest_bit(S))
                self.t.relabelings.append(f"r_{m + 3} := vertex {self.path[-1]}")
            last = r(m + 2)
            self.check("r_{m+2} -> r_1", self.arc(last, r(1)), last)
            self.check("d+(r_{m+2}) <= delta + 1", self.d(last) <= delta + 1, last)
            X = self.rows[last]
            T = self.lemma3(m + 2, m + 3)
            z1 = self.pick_z(T, "z_1 in N+_Rbar(r_{m+2}, r_{m+3})")
            w = r(2) if not self.arc(last, r(2)) else r(3)
            self.check(f"{self.name(w)} in N++(r_{{m+2}})", self.second(last) >> w & 1, w)
            for i in (1, 2, 3):
                self.not_arc(z1, r(i))
            self.no_arc_into(z1, self.Nbar(last), "N+_Rbar(r_{m+2})")
            self.check("d+_X(z_1) = 0", not self.rows[z1] & X, z1)
            self.conclude(last, z1, X, (w,), delta)
        self.step("no out-neighbour of r_{m+1} other than r_0 reaches r_1")
        for x in iter_bits(candidates):
            self.check(f"N+_R({x}) = {{r_2}}", self.NR(x) == 1 << r(2), x)
        self.path.append(lowest_bit(S))
        self.t.relabelings.append(f"r_{m + 3} := vertex {self.path[-1]}")
        last = r(m + 2)
        self.check("d+(r_{m+2}) = delta", self.d(last) == delta, last)
        self.check("d+_R(r_{m+1}) <= delta - 2", self.dR(r(m + 1)) <= delta - 2, r(m + 1))
        X = self.rows[last]
        T = self.lemma3(m + 1, m + 2, m + 3)
        z1 = self.pick_z(T, "z_1 in N+_Rbar(r_{m+1}, r_{m+2}, r_{m+3})")
        self.not_arc(z1, r(3))
        self.check("r_3 in N++(r_{m+2})", self.second(last) >> r(3) & 1, r(3))
        if (self.rows[z1] & X).bit_count() <= 1:
            self.step("d+_X(z_1) <= 1")
            self.conclude(last, z1, X, (r(3),), delta - 1)
        self.step("d+_X(z_1) >= 2")
        z2 = self.pick_z(self.rows[z1] & self.Nbar(last), "z_1 -> z_2 for some z_2 in N+_Rbar(r_{m+2})")
        self.no_arc_into(z2, self.Nbar(last), "N+_Rbar(r_{m+2})")
        self.check("d+_X(z_2) <= 1", (self.rows[z2] & X).bit_count() <= 1, z2)
        self.not_arc(z2, r(3))
        self.conclude(last, z2, X, (r(3),), delta - 1)

    def claim3(self) -> None:
        m, delta = self.m, self.delta
        r = self.r
        B = self.t.B
        S = self.NR(r(2)) & ~B
        if not S:
            self.step("claim: N+_{R\\B}(r_2) is empty")
            return
        self.step("claim: r_2 has an out-neighbour r_{m+3} in R \\ B")
        self.path.append(lowest_bit(S))
        self.t.relabelings.append(f"r_{m + 3} := vertex {self.path[-1]}")
        last, extra = r(m + 2), r(m + 3)
        self.check("d+(r_{m+2}) <= delta + 1", self.d(last) <= delta + 1, last)
        self.not_arc(extra, r(2))
        self.not_arc(extra, r(0))
        self.not_arc(extra, r(3))
        self.check("d+_R(r_{m+3}) <= delta - 4", self.dR(extra) <= delta - 4, extra)
        T = self.lemma3(m + 1, m + 2, m + 3)
        z1 = self.pick_z(T, "z_1 in N+_Rbar(r_{m+1}, r_{m+2}, r_{m+3})")
        X = self.rows[last]
        nbar = self.Nbar(last)
        if self.arc(last, r(2)):
            self.step("r_{m+2} -> r_2")
            sec = self.second(last)
            self.check("r_3, r_{m+3} in N++(r_{m+2})", sec >> r(3) & 1 and sec >> extra & 1, r(3), extra)
            self.not_arc(z1, extra)
            self.not_arc(z1, r(3))
            if (self.rows[z1] & X).bit_count() <= 1:
                self.step("d+_X(z_1) <= 1")
                self.conclude(last, z1, X, (r(3), extra), delta - 1)
            self.step("d+_X(z_1) >= 2")
            self.not_arc(z1, r(1))
            z2 = self.pick_z(self.rows[z1] & nbar, "z_1 -> z_2 for some z_2 in N+_Rbar(r_{m+2})")
            self.not_arc(z2, extra)
            if not self.rows[z2] & X:
                self.step("d+_X(z_2) = 0")
                self.conclude(last, z2, X, (extra,), delta)
            self.not_arc(z2, r(1))
            self.not_arc(z2, r(2))
            z3 = self.pick_z(self.rows[z2] & nbar, "z_2 -> z_3 for some z_3 in N+_Rbar(r_{m+2})")
            self.not_arc(z3, r(1))
            self.not_arc(z3, r(2))
            self.no_arc_into(z3, nbar, "N+_Rbar(r_{m+2})")
            self.check("d+_X(z_3) = 0", not self.rows[z3] & X, z3)
            self.not_arc(z3, r(3))
            self.conclude(last, z3, X, (r(3),), delta)
        self.step("r_{m+2} -/-> r_2")
        self.check("N+_R(r_{m+2}) = {r_1}", self.NR(last) == 1 << r(1), last)
        self.check("d+(r_{m+2}) = delta", self.d(last) == delta, last)
        if not self.rows[z1] & X:
            self.step("d+_X(z_1) = 0")
            self.sink_result(last, z1, X)
        self.not_arc(z1, r(1))
        z2 = self.pick_z(self.rows[z1] & nbar, "z_1 -> z_2 for some z_2 in N+_Rbar(r_{m+2})")
        self.not_arc(z2, r(1))
        self.no_arc_into(z2, nbar, "N+_Rbar(r_{m+2})")
        self.sink_result(last, z2, X)

    def finish3b(self) -> None:
        m, delta = self.m, self.delta
        r = self.r
        last = r(m + 2)
        self.check(
            "N+_R(r_2) is contained in {r_3, r_4, r_5}",
            self.NR(r(2)) & ~self.idx_mask(3, 4, 5) == 0,
            r(2),
        )
        T = self.lemma3(2, m + 1, m + 2)
        z1 = self.pick_z(T, "z_1 in N+_Rbar(r_2, r_{m+1}, r_{m+2})")
        dRl = self.dR(last)
        self.check("d+_R(r_{m+2}) in {1, 2}", dRl in (1, 2), last)
        if dRl == 1:
            self.check("d+(r_{m+2}) = delta", self.d(last) == delta, last)
            X = self.rows[last]
            nbar = self.Nbar(last)
            if self.arc(last, r(1)):
                self.step("N+_R(r_{m+2}) = {r_1}")
                self.check("r_2 in N++(r_{m+2})", self.second(last) >> r(2) & 1, r(2))
                if (self.rows[z1] & X).bit_count() <= 1:
                    self.step("d+_X(z_1) <= 1")
                    self.not_arc(z1, r(2))
                    self.conclude(last, z1, X, (r(2),), delta - 1)
                self.step("d+_X(z_1) >= 2")
                z2 = self.pick_z(self.rows[z1] & nbar, "z_1 -> z_2 for some z_2 in N+_Rbar(r_{m+2})")
                self.no_arc_into(z2, nbar, "N+_Rbar(r_{m+2})")
                self.not_arc(z2, r(1))
                self.sink_result(last, z2, X)
            self.step("N+_R(r_{m+2}) = {r_2}")
            self.check("r_3 in N++(r_{m+2})", self.second(last) >> r(3) & 1, r(3))
            if (self.rows[z1] & X).bit_count() <= 1:
                self.step("d+_X(z_1) <= 1")
                self.not_arc(z1, r(3))
                self.conclude(last, z1, X, (r(3),), delta - 1)
            self.step("d+_X(z_1) >= 2")
            z2 = self.pick_z(self.rows[z1] & nbar, "z_1 -> z_2 for some z_2 in N+_Rbar(r_{m+2})")
            self.not_arc(z2, r(3))
            if (self.rows[z2] & X).bit_count() <= 1:
                self.step("d+_X(z_2) <= 1")
                self.conclude(last, z2, X, (r(3),), delta - 1)
            self.step("d+_X(z_2) >= 2")
            z3 = self.pick_z(self.rows[z2] & nbar, "z_2 -> z_3 for some z_3 in N+_Rbar(r_{m+2})")
            self.no_arc_into(z3, nbar, "N+_Rbar(r_{m+2})")
            self.not_arc(z3, r(2))
            self.sink_result(last, z3, X)
        self.step("N+_R(r_{m+2}) = {r_1, r_2}")
        self.check("N+_R(r_{m+2}) = {r_1, r_2}", self.NR(last) == self.idx_mask(1, 2), last)
        self.not_arc(r(2), r(4))
        self.not_arc(r(2), r(5))
        self.check("N+_R(r_2) = {r_3}", self.NR(r(2)) == 1 << r(3), r(2))
        self.check("d+(r_2) = delta", self.d(r(2)) == delta, r(2))
        X = self.rows[r(2)]
        nbar = self.Nbar(r(2))
        self.not_arc(z1, r(3))
        if not self.rows[z1] & X:
            self.step("d+_X(z_1) = 0")
            self.sink_result(r(2), z1, X)
        z2 = self.pick_z(self.rows[z1] & nbar, "z_1 -> z_2 for some z_2 in N+_Rbar(r_2)")
        self.not_arc(z2, r(3))
        if not self.rows[z2] & X:
            self.step("d+_X(z_2) = 0")
            self.sink_result(r(2), z2, X)
        z3 = self.pick_z(self.rows[z2] & nbar, "z_2 -> z_3 for some z_3 in N+_Rbar(r_2)")
        self.no_arc_into(z3, nbar, "N+_Rbar(r_2)")
        self.not_arc(z3, r(3))
        self.sink_result(r(2), z3, X)


# -- public entry point ------------------------------------------------------


def _brute(D: Digraph, trace: ProofTrace, branch: Branch, why: str) -> ProofTrace:
    trace.branch = branch
    trace.steps.append(why)
    w = brute_force_seymour(D)
    if w is None:
        raise TraceError(
            TraceErrorKind.FALLBACK_EXHAUSTED,
            "brute-force search found no Seymour vertex",
            trace,
        )
    trace.result = w
    return trace


def check_preconditions(D: Digraph, k: int) -> None:
    """Raise ``PRECONDITION_VIOLATED`` unless ``D`` is oriented, k-anti-transitive and (k-4)-free."""
    if not is_oriented(D):
        raise TraceError(TraceErrorKind.PRECONDITION_VIOLATED, "digraph is not oriented")
    w = find_anti_transitivity_witness(D, k)
    if w is not None:
        raise TraceError(
            TraceErrorKind.PRECONDITION_VIOLATED,
            f"digraph is not {k}-anti-transitive",
            vertices=w.path.vertices,
            detail={"anti_transitivity_witness": w.to_dict()},
        )
    g = girth(D)
    if g is not None and g <= k - 4:
        raise TraceError(
            TraceErrorKind.PRECONDITION_VIOLATED,
            f"digraph is not {k - 4}-free (girth {g})",
            detail={"girth": g},
        )


def _divergence(trace: ProofTrace, div: _Divergence) -> TraceError:
    return TraceError(TraceErrorKind.PROOF_DIVERGENCE, div.text, trace, vertices=div.vertices)


def _verify(D: Digraph, trace: ProofTrace) -> ProofTrace:
    w = trace.result
    ok = w is not None and is_seymour_vertex(D, w)
    trace.assertions.append(
        Assertion(f"result {w} verified as a Seymour vertex", ok, () if w is None else (w,))
    )
    if not ok:
        raise TraceError(
            TraceErrorKind.PROOF_DIVERGENCE,
            f"returned vertex {w} is not a Seymour vertex",
            trace,
            vertices=() if w is None else (w,),
        )
    return trace


def _from_vertex(D: Digraph, k: int, v: int, trace: ProofTrace) -> None:
    delta = D.rows[v].bit_count()
    trace.v, trace.delta, trace.R = v, delta, D.rows[v]
    sink = find_sink_in(D, D.rows[v])
    if sink is not None:
        trace.branch = Branch.SINK
        trace.steps.append(f"D[R] has the sink {sink}; v is Seymour")
        trace.result = v
    elif D.second_out_mask(v).bit_count() >= delta:
        trace.branch = Branch.V_SEYMOUR
        trace.steps.append("d++(v) >= delta")
        trace.result = v
    else:
        try:
            _Engine(D, k, trace).run(v, delta)
        except _Done:
            pass


def analyse_from(D: Digraph, k: int, v: int) -> ProofTrace:
    """Run the sink / d++ / case steps from ``v``, skipping the fallback gates.

    ``delta`` is taken to be ``d+(v)``.  Diagnostic entry point: it lets the
    case analysis be exercised on instances whose minimum degree is below
    the fallback threshold.  The result is re-verified as usual.
    """
    if not isinstance(k, int) or k < 7:
        raise BadParam(f"the case analysis needs k >= 7, got {k!r}")
    D.check_vertex(v)
    trace = ProofTrace(k=k, n=D.n)
    try:
        _from_vertex(D, k, v, trace)
    except _Divergence as div:
        raise _divergence(trace, div) from None
    return _verify(D, trace)


def find_seymour_constructive(D: Digraph, k: int, skip_precheck: bool = False) -> ProofTrace:
    """Return a :class:`ProofTrace` whose ``result`` is a verified Seymour vertex.

    Raises :class:`TraceError` on precondition failure, on a failed proof step,
    or if a brute-force fallback comes up empty.
    """
    if not isinstance(k, int) or k < 6:
        raise BadParam(f"k must be an integer >= 6, got {k!r}")
    if D.n == 0:
        raise EmptyGraph("find_seymour_constructive")
    if not skip_precheck:
        check_preconditions(D, k)
    trace = ProofTrace(k=k, n=D.n)
    v, delta = min_out_deg_vertex(D)
    trace.v, trace.delta = v, delta
    m = k - 4
    if delta <= SMALL_DELTA:
        _brute(D, trace, Branch.SMALL_DELTA, f"delta = {delta} <= {SMALL_DELTA}: brute-force search")
    elif k == 6:
        _brute(D, trace, Branch.SMALL_DELTA, "k = 6: brute-force search")
    elif m >= delta - 1:
        _brute(D, trace, Branch.LARGE_M, f"m = {m} >= delta - 1 = {delta - 1}: brute-force search")
    else:
        try:
            _from_vertex(D, k, v, trace)
        except _Divergence as div:
            raise _divergence(trace, div) from None
    return _verify(D, trace)


__all__ = [
    "Assertion",
    "Branch",
    "CaccettaVerdict",
    "ProofTrace",
    "TraceError",
    "TraceErrorKind",
    "analyse_from",
    "brute_force_seymour",
    "check_caccetta_instance",
    "check_preconditions",
    "find_directed_triangle",
    "find_seymour_constructive",
]
