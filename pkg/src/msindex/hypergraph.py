"""r-uniform hypergraphs: construction, colex enumeration, text format.

Vertices are 0-based internally and 1-based in the text format; the
parser/serializer is the only place the two conventions meet.  Edges are
kept as ascending vertex tuples in ascending colexicographic order (A < B
iff the largest element of the symmetric difference lies in B), which makes
structural equality a plain tuple comparison.
"""

import math

import numpy as np

__all__ = [
    "Hypergraph",
    "HypergraphParseError",
    "parse_hypergraph",
    "serialize_hypergraph",
    "colex_segment",
    "complete_graph",
    "colex_rank",
    "colex_unrank",
]


class HypergraphParseError(ValueError):
    """Malformed hypergraph text; carries the 1-based offending line number."""

    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _colex_key(edge):
    return tuple(reversed(edge))


class Hypergraph:
    """Immutable r-uniform hypergraph on vertices 0..n-1."""

    __slots__ = ("r", "n", "edges", "_edge_array")

    def __init__(self, r: int, n: int, edges):
        if r < 2:
            raise ValueError("uniformity r must be >= 2")
        if n < 0:
            raise ValueError("vertex count must be >= 0")
        canon = []
        for e in edges:
            tup = tuple(sorted(int(v) for v in e))
            if len(tup) != r:
                raise ValueError(f"edge {tup} does not have {r} vertices")
            if len(set(tup)) != r:
                raise ValueError(f"edge {tup} repeats a vertex")
            if tup[0] < 0 or tup[-1] >= n:
                raise ValueError(f"edge {tup} out of range for n={n}")
            canon.append(tup)
        canon.sort(key=_colex_key)
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise ValueError(f"duplicate edge {a}")
        self.r = r
        self.n = n
        self.edges = tuple(canon)
        self._edge_array = None

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edge_array(self) -> np.ndarray:
        """Edges as an (m, r) int array; cached."""
        if self._edge_array is None:
            arr = np.array(self.edges, dtype=np.intp).reshape(self.m, self.r)
            arr.setflags(write=False)
            self._edge_array = arr
        return self._edge_array

    def subgraph(self, vertices) -> "Hypergraph":
        """Induced subgraph on the given vertices, relabeled to 0..len-1."""
        keep = sorted(set(int(v) for v in vertices))
        relabel = {v: i for i, v in enumerate(keep)}
        kept = [
            tuple(relabel[v] for v in e)
            for e in self.edges
            if all(v in relabel for v in e)
        ]
        return Hypergraph(self.r, len(keep), kept)

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.r, self.n, self.edges) == (other.r, other.n, other.edges)

    def __hash__(self):
        return hash((self.r, self.n, self.edges))

    def __repr__(self):
        return f"Hypergraph(r={self.r}, n={self.n}, m={self.m})"


def parse_hypergraph(text: str) -> Hypergraph:
    """Parse the text format: header line ``r n m``, then m edge lines of r
     1-based vertex indices.  Blank lines and ``#`` comments are ignored.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        rows.append((lineno, stripped))
    if not rows:
        raise HypergraphParseError("missing header", 1)

    lineno, header = rows[0]
    fields = header.split()
    if len(fields) != 3:
        raise HypergraphParseError("header must be 'r n m'", lineno)
    try:
        r, n, m = (int(f) for f in fields)
    except ValueError:
        raise HypergraphParseError("header must hold three integers", lineno) from None
    if r < 2 or n < 0 or m < 0:
        raise HypergraphParseError(f"bad header values r={r} n={n} m={m}", lineno)

    if len(rows) - 1 != m:
        bad = rows[m + 1][0] if len(rows) - 1 > m else rows[-1][0]
        raise HypergraphParseError(
            f"expected {m} edge lines, found {len(rows) - 1}", bad
        )

    seen = {}
    edges = []
    for lineno, line in rows[1:]:
        fields = line.split()
        if len(fields) != r:
            raise HypergraphParseError(f"edge needs {r} vertices", lineno)
        try:
            verts = [int(f) for f in fields]
        except ValueError:
            raise HypergraphParseError("edge vertices must be integers", lineno) from None
        for v in verts:
            if v < 1 or v > n:
                raise HypergraphParseError(f"vertex {v} out of range 1..{n}", lineno)
        edge = tuple(sorted(v - 1 for v in verts))
        if len(set(edge)) != r:
            raise HypergraphParseError("repeated vertex in edge", lineno)
        if edge in seen:
            raise HypergraphParseError(
                f"duplicate edge (first seen on line {seen[edge]})", lineno
            )
        seen[edge] = lineno
        edges.append(edge)
    return Hypergraph(r, n, edges)


def serialize_hypergraph(g: Hypergraph) -> str:
    """Emit the text format: edges in colex order, 1-based, one per line."""
    lines = [f"{g.r} {g.n} {g.m}"]
    for e in g.edges:
        lines.append(" ".join(str(v + 1) for v in e))
    return "\n".join(lines) + "\n"


def colex_rank(edge) -> int:
    """Position of an ascending r-set of 0-based vertices in colex order."""
    return sum(math.comb(v, i + 1) for i, v in enumerate(sorted(edge)))


def colex_unrank(rank: int, r: int) -> tuple:
    """The r-set of 0-based vertices at the given colex position."""
    if rank < 0 or r < 1:
        raise ValueError("rank must be >= 0 and r >= 1")
    out = []
    rem = rank
    for j in range(r, 0, -1):
        c = j - 1
        while math.comb(c + 1, j) <= rem:
            c += 1
        out.append(c)
        rem -= math.comb(c, j)
    return tuple(reversed(out))


def colex_segment(r: int, m: int) -> Hypergraph:
    """The first m r-sets of the positive integers in colex order.

    Generated by the O(r) colex-successor step, so segments of 10^6 edges
    are cheap.  The vertex count is the largest vertex used (0 for m = 0).
    """
    if r < 2:
        raise ValueError("r must be >= 2")
    if m < 0:
        raise ValueError("m must be >= 0")
    edges = []
    cur = list(range(r))
    for _ in range(m):
        edges.append(tuple(cur))
        j = 0
        while j + 1 < r and cur[j] + 1 == cur[j + 1]:
            j += 1
        cur[j] += 1
        for i in range(j):
            cur[i] = i
    n = edges[-1][-1] + 1 if edges else 0
    return Hypergraph(r, n, edges)


def complete_graph(r: int, t: int) -> Hypergraph:
    """The complete r-graph on t vertices: all C(t, r) edges."""
    if r < 2:
        raise ValueError("r must be >= 2")
    if t < r:
        raise ValueError("t must be >= r")
    import itertools

    return Hypergraph(r, t, list(itertools.combinations(range(t), r)))
