"""Dense simple graphs over [n] with bit-row adjacency.

Each vertex u owns one Python integer whose bit v is set iff u ~ v, so
codegree / booksize reduce to big-int AND plus popcount.  Graphs are
immutable after construction and every operation here is pure; instances
may be shared freely across threads.

Also implements graph6 reading and writing (the standard bit-packed
upper-triangle interchange encoding) for both the short (n <= 62) and
long (n <= 258047) vertex-count forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ParseError

GRAPH6_HEADER = ">>graph6<<"


def vertex_mask(vertices: Iterable[int]) -> int:
    """Bitmask with one bit per vertex index."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits_of(mask: int) -> Iterator[int]:
    """Yield set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class BookCertificate:
    """Witness that a graph contains a book of the stated size.

    ``pages`` is exactly the common neighborhood of the base endpoints,
    so ``size == len(pages)`` and every page forms a triangle with the
    base edge.
    """

    base: tuple[int, int]
    pages: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.pages)

    @classmethod
    def from_base(cls, g: "Graph", u: int, v: int) -> "BookCertificate":
        if not g.has_edge(u, v):
            raise ValueError(f"base ({u},{v}) is not an edge")
        common = g.rows[u] & g.rows[v]
        return cls(base=(min(u, v), max(u, v)), pages=frozenset(bits_of(common)))

    def validate(self, g: "Graph") -> None:
        u, v = self.base
        if not g.has_edge(u, v):
            raise ValueError("certificate base is not an edge")
        for w in self.pages:
            if not (g.has_edge(u, w) and g.has_edge(v, w)):
                raise ValueError(f"page {w} is not adjacent to both base endpoints")


class Graph:
    """Immutable dense simple graph on vertex set {0, ..., n-1}."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: Sequence[int]):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        if len(rows) != n:
            raise ValueError(f"expected {n} adjacency rows, got {len(rows)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", tuple(rows))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    # ---------------------------------------------------------------- build

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [0] * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << u) for u in range(n)])

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows)

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> "Graph":
        left = vertex_mask(range(a))
        right = vertex_mask(range(a, a + b))
        rows = [right] * a + [left] * b
        return cls(a + b, rows)

    @classmethod
    def from_rows(cls, n: int, rows: Sequence[int], validate: bool = True) -> "Graph":
        g = cls(n, rows)
        if validate:
            g.validate()
        return g

    def validate(self) -> None:
        """Check symmetry, irreflexivity, and row width."""
        full = (1 << self.n) - 1
        for u, row in enumerate(self.rows):
            if row & ~full:
                raise ValueError(f"row {u} has bits beyond vertex range")
            if row >> u & 1:
                raise ValueError(f"loop at vertex {u}")
            for v in bits_of(row):
                if not self.rows[v] >> u & 1:
                    raise ValueError(f"adjacency not symmetric at ({u},{v})")

    # ---------------------------------------------------------------- query

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return bool(self.rows[u] >> v & 1)

    def degree(self, u: int) -> int:
        self._check_vertex(u)
        return self.rows[u].bit_count()

    def neighbors(self, u: int) -> Iterator[int]:
        self._check_vertex(u)
        return bits_of(self.rows[u])

    def edges(self) -> Iterator[tuple[int, int]]:
        """All edges (u, v) with u < v, lexicographically ordered."""
        for u in range(self.n):
            row = self.rows[u] >> (u + 1) << (u + 1)
            for v in bits_of(row):
                yield (u, v)

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    def _check_vertex(self, u: int) -> None:
        if not 0 <= u < self.n:
            raise ValueError(f"vertex {u} out of range for n={self.n}")

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count()})"

    # ------------------------------------------------------------ operations

    def codegree(self, u: int, v: int) -> int:
        """Number of common neighbors of two distinct vertices."""
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise ValueError("codegree requires two distinct vertices")
        return (self.rows[u] & self.rows[v]).bit_count()

    def booksize(self) -> tuple[int, BookCertificate | None]:
        """Largest book size together with a witnessing certificate.

        Returns (0, None) for an edgeless graph.  Ties are broken toward
        the lexicographically least base edge, so output is deterministic.
        """
        best = -1
        best_base = None
        for u, v in self.edges():
            c = (self.rows[u] & self.rows[v]).bit_count()
            if c > best:
                best = c
                best_base = (u, v)
        if best_base is None:
            return 0, None
        return best, BookCertificate.from_base(self, *best_base)

    def mean_book_size(self, bases: Iterable[tuple[int, int]]) -> Fraction:
        """Exact average codegree over a set of base edges.

        Kept rational so theorem-backed inequalities can be compared
        without floating-point slack.
        """
        total = 0
        count = 0
        for u, v in bases:
            if not self.has_edge(u, v):
                raise ValueError(f"base ({u},{v}) is not an edge")
            total += self.codegree(u, v)
            count += 1
        if count == 0:
            raise ValueError("mean_book_size requires a nonempty base set")
        return Fraction(total, count)

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, [row ^ full ^ (1 << u) for u, row in enumerate(self.rows)])

    def cut_and_induced_counts(
        self, X: Iterable[int], Y: Iterable[int]
    ) -> tuple[int, int, int]:
        """(e(X), e(Y), e(X,Y)) for disjoint vertex sets X, Y."""
        mx = vertex_mask(X)
        my = vertex_mask(Y)
        if mx & my:
            raise ValueError("X and Y must be disjoint")
        ex = sum((self.rows[u] & mx).bit_count() for u in bits_of(mx)) // 2
        ey = sum((self.rows[u] & my).bit_count() for u in bits_of(my)) // 2
        exy = sum((self.rows[u] & my).bit_count() for u in bits_of(mx))
        return ex, ey, exy

    def edges_within(self, X: Iterable[int]) -> int:
        mx = vertex_mask(X)
        return sum((self.rows[u] & mx).bit_count() for u in bits_of(mx)) // 2

    def min_degree_induced(self, U: Iterable[int]) -> int:
        """Minimum degree of the subgraph induced by a nonempty set U."""
        mu = vertex_mask(U)
        if mu == 0:
            raise ValueError("min_degree_induced requires a nonempty set")
        return min((self.rows[u] & mu).bit_count() for u in bits_of(mu))

    # ------------------------------------------------------------- numpy I/O

    def to_bool_matrix(self) -> np.ndarray:
        """Adjacency as an (n, n) uint8 0/1 matrix."""
        n = self.n
        nbytes = (n + 7) // 8
        buf = b"".join(row.to_bytes(nbytes, "little") for row in self.rows)
        bits = np.unpackbits(
            np.frombuffer(buf, dtype=np.uint8).reshape(n, nbytes),
            axis=1,
            bitorder="little",
        )
        return np.ascontiguousarray(bits[:, :n])

    @classmethod
    def from_bool_matrix(cls, m: np.ndarray) -> "Graph":
        m = np.asarray(m, dtype=np.uint8)
        n = m.shape[0]
        if m.shape != (n, n):
            raise ValueError("adjacency matrix must be square")
        packed = np.packbits(m, axis=1, bitorder="little")
        rows = [int.from_bytes(packed[u].tobytes(), "little") for u in range(n)]
        g = cls(n, rows)
        g.validate()
        return g

    # ---------------------------------------------------------------- graph6

    def to_graph6(self) -> str:
        """Encode in graph6 format (no header, no trailing newline)."""
        n = self.n
        if n <= 62:
            prefix = chr(n + 63)
        elif n <= 258047:
            prefix = "~" + "".join(
                chr(((n >> shift) & 63) + 63) for shift in (12, 6, 0)
            )
        else:
            raise ValueError("graph6 supports at most 258047 vertices here")
        bits = []
        for j in range(1, n):
            col = self.rows[j]
            for i in range(j):
                bits.append(col >> i & 1)
        chars = []
        for k in range(0, len(bits), 6):
            group = bits[k : k + 6]
            group += [0] * (6 - len(group))
            val = 0
            for b in group:
                val = val << 1 | b
            chars.append(chr(val + 63))
        return prefix + "".join(chars)

    @classmethod
    def from_graph6(cls, text: str, line: int = 1) -> "Graph":
        """Decode one graph6 line; tolerates the optional format header."""
        s = text.strip()
        if s.startswith(GRAPH6_HEADER):
            s = s[len(GRAPH6_HEADER) :]
        if not s:
            raise ParseError("empty graph6 string", line=line)
        vals = []
        for pos, ch in enumerate(s):
            v = ord(ch) - 63
            if not 0 <= v <= 63:
                raise ParseError(f"invalid graph6 character {ch!r}", line=line, offset=pos)
            vals.append(v)
        if vals[0] < 63:
            n = vals[0]
            data = vals[1:]
        else:
            if len(vals) < 4 or vals[1] == 63:
                raise ParseError("truncated graph6 vertex count", line=line, offset=0)
            n = vals[1] << 12 | vals[2] << 6 | vals[3]
            data = vals[4:]
        nbits = n * (n - 1) // 2
        if len(data) != (nbits + 5) // 6:
            raise ParseError(
                f"graph6 data length {len(data)} does not match n={n}",
                line=line,
                offset=len(s),
            )
        rows = [0] * n
        k = 0
        for j in range(1, n):
            for i in range(j):
                if data[k // 6] >> (5 - k % 6) & 1:
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
                k += 1
        while k < 6 * len(data):
            if data[k // 6] >> (5 - k % 6) & 1:
                raise ParseError("nonzero padding bits in graph6 data", line=line, offset=len(s))
            k += 1
        return cls(n, rows)


def read_graph6_file(path) -> Graph:
    """Read the first graph6 graph from a file."""
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            s = raw.strip()
            if s:
                return Graph.from_graph6(s, line=lineno)
    raise ParseError("no graph6 data found", line=1)


def write_graph6_file(path, g: Graph) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(g.to_graph6() + "\n")
