"""Edge-list and digraph6 text formats."""

from __future__ import annotations

from .core import Digraph, build, iter_bits
from .errors import OutOfRange, ParseError, SelfLoop, TwoCycle, Unsupported

DIGRAPH6_MAX_N = 62


def parse_edgelist(text: str) -> Digraph:
    """First non-comment line is ``n``; every later line ``u v`` is an arc ``u -> v``.

    ``#`` starts a comment, blank lines are ignored.  Errors carry 1-based line
    numbers; constructor errors (self-loop, two-cycle) are re-raised as the
    original exception type with the line attached as ``.line``.
    """
    n = None
    rows: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 1:
                raise ParseError(f"expected vertex count, got {line!r}", lineno)
            n = _int(fields[0], lineno)
            if n < 0:
                raise ParseError(f"negative vertex count {n}", lineno)
            rows = [0] * n
            continue
        if len(fields) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        u, v = _int(fields[0], lineno), _int(fields[1], lineno)
        err = None
        if not (0 <= u < n and 0 <= v < n):
            err = OutOfRange(u if not 0 <= u < n else v, n)
        elif u == v:
            err = SelfLoop(u)
        elif rows[v] >> u & 1:
            err = TwoCycle(min(u, v), max(u, v))
        if err is not None:
            err.line = lineno
            err.args = (f"line {lineno}: {err}",)
            raise err
        rows[u] |= 1 << v
    if n is None:
        raise ParseError("missing vertex count")
    return Digraph(n, rows, _trusted=True)


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok, 10)
    except ValueError:
        raise ParseError(f"not a decimal integer: {tok!r}", lineno) from None


def emit_edgelist(D: Digraph) -> str:
    lines = [str(D.n)]
    lines.extend(f"{u} {v}" for u, v in D.arcs())
    return "\n".join(lines) + "\n"


def emit_digraph6(D: Digraph) -> str:
    """``&``, ``chr(n+63)``, then the row-major n*n adjacency bits packed
    big-endian into 6-bit groups (zero padded), each group offset by 63."""
    n = D.n
    if n > DIGRAPH6_MAX_N:
        raise Unsupported(f"digraph6 output limited to n <= {DIGRAPH6_MAX_N}")
    nbits = n * n
    acc = 0
    for u in range(n):
        row = D.rows[u]
        # bit v of the row is matrix column v; column 0 is the most significant
        for v in range(n):
            acc = (acc << 1) | (row >> v & 1)
    groups = -(-nbits // 6)
    acc <<= groups * 6 - nbits
    out = ["&", chr(n + 63)]
    for g in range(groups - 1, -1, -1):
        out.append(chr(((acc >> (6 * g)) & 0x3F) + 63))
    return "".join(out)


def parse_digraph6(text: str) -> Digraph:
    s = text.strip()
    if s.startswith(">>digraph6<<"):
        s = s[len(">>digraph6<<"):]
    if not s.startswith("&"):
        raise ParseError("digraph6 string must start with '&'")
    if len(s) < 2:
        raise ParseError("digraph6 string missing the size byte")
    for ch in s[1:]:
        if not 63 <= ord(ch) <= 126:
            raise ParseError(f"byte {ch!r} outside 63..126")
    if s[1] == "~":
        raise Unsupported(f"multi-byte sizes (n > {DIGRAPH6_MAX_N}) are not supported")
    n = ord(s[1]) - 63
    nbits = n * n
    groups = -(-nbits // 6)
    payload = s[2:]
    if len(payload) != groups:
        raise ParseError(f"expected {groups} payload bytes for n={n}, got {len(payload)}")
    acc = 0
    for ch in payload:
        acc = (acc << 6) | (ord(ch) - 63)
    pad = groups * 6 - nbits
    if acc & ((1 << pad) - 1):
        raise ParseError("nonzero padding bits")
    acc >>= pad
    arcs = []
    for idx in iter_bits(acc):
        pos = nbits - 1 - idx
        arcs.append((pos // n, pos % n))
    return build(n, arcs)


def sniff_format(text: str) -> str:
    s = text.lstrip()
    return "digraph6" if s.startswith("&") or s.startswith(">>digraph6<<") else "edgelist"


def parse_any(text: str, fmt: str | None = None) -> Digraph:
    fmt = fmt or sniff_format(text)
    if fmt == "digraph6":
        return parse_digraph6(text)
    if fmt == "edgelist":
        return parse_edgelist(text)
    raise ParseError(f"unknown format {fmt!r}")


def emit(D: Digraph, fmt: str) -> str:
    if fmt == "digraph6":
        return emit_digraph6(D) + "\n"
    if fmt == "edgelist":
        return emit_edgelist(D)
    raise ParseError(f"unknown format {fmt!r}")
