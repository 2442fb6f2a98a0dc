"""Red/blue edge colorings of complete graphs and two lower-bound constructions.

A coloring is stored as its blue graph; the red graph is the complement.
Large-book statistics for the randomized tripartite construction are
computed with exact rational means so expectation formulas can be checked
without float slack.

Interchange format BRC1: a header line ``BRC1 <n>`` followed by the blue
edge indicator bits in colex order (edge (i, j) with i < j sits at index
j(j-1)/2 + i), packed four bits per lowercase hex character, first bit in
the high bit of the nibble, zero-padded at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ParseError
from .graphs import BookCertificate, Graph
from .numbers import as_fraction
from .rng import bernoulli_block, probability_threshold

BRC1_MAGIC = "BRC1"


def edge_index(i: int, j: int) -> int:
    """Colex index of edge (i, j), i < j."""
    if i == j:
        raise ValueError("no loops")
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


def edge_endpoints(k: int) -> tuple[int, int]:
    """Inverse of edge_index."""
    if k < 0:
        raise ValueError("negative edge index")
    j = int((1 + math.isqrt(1 + 8 * k)) // 2)
    while j * (j - 1) // 2 > k:
        j -= 1
    while (j + 1) * j // 2 <= k:
        j += 1
    return k - j * (j - 1) // 2, j


@dataclass(frozen=True)
class TwoColoring:
    """A 2-coloring of E(K_n), held as its blue graph."""

    n: int
    blue: Graph

    def __post_init__(self):
        if self.blue.n != self.n:
            raise ValueError("blue graph order does not match n")

    @property
    def red(self) -> Graph:
        return self.blue.complement()

    def bk_blue(self) -> tuple[int, BookCertificate | None]:
        return self.blue.booksize()

    def bk_red(self) -> tuple[int, BookCertificate | None]:
        return self.red.booksize()

    # ----------------------------------------------------------- bit vector

    def blue_bits(self) -> np.ndarray:
        """Blue indicators over all C(n, 2) edges in colex order."""
        m = self.n * (self.n - 1) // 2
        bits = np.zeros(m, dtype=bool)
        for i, j in self.blue.edges():
            bits[edge_index(i, j)] = True
        return bits

    @classmethod
    def from_blue_bits(cls, n: int, bits: np.ndarray) -> "TwoColoring":
        m = n * (n - 1) // 2
        if len(bits) != m:
            raise ValueError(f"expected {m} edge bits, got {len(bits)}")
        adj = np.zeros((n, n), dtype=np.uint8)
        for j in range(1, n):
            s = j * (j - 1) // 2
            adj[:j, j] = bits[s : s + j]
        adj |= adj.T
        return cls(n, Graph.from_bool_matrix(adj))

    @classmethod
    def from_blue_index(cls, n: int, index: int) -> "TwoColoring":
        """Coloring whose blue bit k equals bit k of ``index``."""
        m = n * (n - 1) // 2
        if not 0 <= index < 1 << m:
            raise ValueError("index outside the coloring range")
        bits = np.array([index >> k & 1 for k in range(m)], dtype=bool)
        return cls.from_blue_bits(n, bits)

    def blue_index(self) -> int:
        out = 0
        for k, b in enumerate(self.blue_bits()):
            if b:
                out |= 1 << k
        return out

    # ----------------------------------------------------------------- BRC1

    def to_brc1(self) -> str:
        bits = self.blue_bits()
        hexpart = pack_bits_hex(bits)
        return f"{BRC1_MAGIC} {self.n}\n{hexpart}\n"

    @classmethod
    def from_brc1(cls, text: str) -> "TwoColoring":
        lines = text.splitlines()
        if not lines:
            raise ParseError("empty coloring file", line=1)
        head = lines[0].split()
        if len(head) != 2 or head[0] != BRC1_MAGIC:
            raise ParseError(f"expected header '{BRC1_MAGIC} <n>'", line=1)
        try:
            n = int(head[1])
        except ValueError:
            raise ParseError(f"bad vertex count {head[1]!r}", line=1) from None
        if n < 0:
            raise ParseError("negative vertex count", line=1)
        payload = "".join(lines[1:]).translate({ord(c): None for c in " \t"})
        m = n * (n - 1) // 2
        bits = unpack_bits_hex(payload, m, line=2)
        return cls.from_blue_bits(n, bits)


def pack_bits_hex(bits: np.ndarray) -> str:
    """Pack a bit vector into lowercase hex, first bit high in each nibble."""
    nchars = (len(bits) + 3) // 4
    packed = np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="big")
    return packed.tobytes().hex()[:nchars]


def unpack_bits_hex(payload: str, nbits: int, line: int = 1) -> np.ndarray:
    nchars = (nbits + 3) // 4
    if len(payload) != nchars:
        raise ParseError(
            f"expected {nchars} hex characters for {nbits} edge bits, got {len(payload)}",
            line=line,
        )
    for pos, ch in enumerate(payload):
        if ch not in "0123456789abcdefABCDEF":
            raise ParseError(f"invalid hex character {ch!r}", line=line, offset=pos)
    if nchars % 2:
        payload = payload + "0"
    raw = np.frombuffer(bytes.fromhex(payload), dtype=np.uint8)
    bits = np.unpackbits(raw, bitorder="big")
    if bits[nbits:].any():
        raise ParseError("nonzero padding bits", line=line, offset=nchars - 1)
    return bits[:nbits].astype(bool)


def read_coloring_file(path) -> TwoColoring:
    with open(path, "r", encoding="ascii") as fh:
        return TwoColoring.from_brc1(fh.read())


def write_coloring_file(path, c: TwoColoring) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(c.to_brc1())


# ------------------------------------------------------------- constructions


def two_cliques(q: int) -> TwoColoring:
    """Blue = two disjoint K_{q+1}; the classical lower-bound coloring.

    On n = 2q + 2 vertices the largest blue book has q - 1 pages and the
    red graph is complete bipartite, hence triangle-free.
    """
    if q < 1:
        raise ValueError("q must be at least 1")
    n = 2 * q + 2
    blue = Graph.from_edges(
        n,
        [(u, v) for u in range(q + 1) for v in range(u + 1, q + 1)]
        + [(u, v) for u in range(q + 1, n) for v in range(u + 1, n)],
    )
    return TwoColoring(n, blue)


@dataclass(frozen=True)
class ConstructionParams:
    """Parameters of the randomized tripartite coloring.

    ``delta`` defaults to the coupling delta = 8.25 * epsilon; passing it
    explicitly decouples the two for exploration (including degenerate
    settings used only in tests).
    """

    n: int
    epsilon: Fraction
    seed: int = 0
    delta: Fraction = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        eps = as_fraction(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        d = Fraction(33, 4) * eps if self.delta is None else as_fraction(self.delta)
        object.__setattr__(self, "delta", d)
        if eps <= 0:
            raise ValueError("epsilon must be positive")
        if abs(d) > Fraction(1, 2):
            raise ValueError("delta outside [-1/2, 1/2] gives no probability")

    @property
    def p(self) -> Fraction:
        return Fraction(1, 2) - self.delta

    @property
    def q_prob(self) -> Fraction:
        return Fraction(1, 2) + self.delta

    def validate(self) -> None:
        """Reject parameters whose positivity margins fail."""
        if self.n % 3:
            raise ValueError("order must be divisible by 3")
        k1, k2 = margins(self)
        if k1 <= 0 or k2 <= 0:
            raise ValueError(f"margins not positive: k1={k1}, k2={k2}")


def margins(params: ConstructionParams) -> tuple[Fraction, Fraction]:
    """Exact (k1, k2) = (2(d - d^2)/3 - 5e, 3e - (d + d^2)/3)."""
    e, d = params.epsilon, params.delta
    k1 = Fraction(2, 3) * (d - d * d) - 5 * e
    k2 = 3 * e - (d + d * d) / 3
    return k1, k2


def expected_book_sizes(params: ConstructionParams) -> tuple[Fraction, Fraction, Fraction]:
    """Expected codegrees (red intra, blue cross, red cross), exact.

    red intra:  n/3 - 2 + (2n/3) p^2
    blue cross: (n/3) q^2
    red cross:  (n/3) p^2 + (2n/3 - 2) p
    """
    n3 = Fraction(params.n, 3)
    p, q = params.p, params.q_prob
    red_intra = n3 - 2 + 2 * n3 * p * p
    blue_cross = n3 * q * q
    red_cross = n3 * p * p + (2 * n3 - 2) * p
    return red_intra, blue_cross, red_cross


def chernoff_tail(n_trials: int, k) -> float:
    """Tail bound 2 exp(-2 k^2 n) on deviating kn from a binomial mean."""
    if n_trials < 1:
        raise ValueError("need at least one trial")
    kf = float(as_fraction(k))
    if kf < 0:
        raise ValueError("deviation fraction must be nonnegative")
    return 2.0 * math.exp(-2.0 * kf * kf * n_trials)


def tripartite_random(params: ConstructionParams, check_margins: bool = True) -> TwoColoring:
    """Random coloring: thirds A_1, A_2, A_3 all-red inside, cross edges
    red with probability p = 1/2 - delta.

    Each edge consults a counter-based value at its colex index, so the
    output depends only on (params, seed), not on evaluation order.
    """
    n = params.n
    if n % 3:
        raise ValueError("order must be divisible by 3")
    if check_margins:
        params.validate()
    t = n // 3
    thr = probability_threshold(params.p)
    bits = np.zeros(n * (n - 1) // 2, dtype=bool)
    for j in range(1, n):
        s = j * (j - 1) // 2
        cross = np.arange(j) // t != j // t
        red = bernoulli_block(params.seed, s, j, thr)
        bits[s : s + j] = cross & ~red
    return TwoColoring.from_blue_bits(n, bits)


def tripartite_parts(n: int) -> tuple[list[int], list[int], list[int]]:
    """The contiguous equal thirds used by tripartite_random."""
    if n % 3:
        raise ValueError("order must be divisible by 3")
    t = n // 3
    return list(range(t)), list(range(t, 2 * t)), list(range(2 * t, n))


# ---------------------------------------------------------------- statistics


def _codegree_matrix(adj: np.ndarray, cols: np.ndarray | None = None) -> np.ndarray:
    # float32 matmul is exact for 0/1 counts below 2**24 and is summation-
    # order independent in value, so results are thread-count deterministic
    a = adj.astype(np.float32)
    b = a if cols is None else a[:, cols]
    return np.rint(b @ b.T).astype(np.int64)


def _mean_over(values: np.ndarray, mask: np.ndarray) -> Fraction | None:
    cnt = int(mask.sum())
    if cnt == 0:
        return None
    return Fraction(int(values[mask].sum()), cnt)


def construction_statistics(c: TwoColoring, parts) -> dict:
    """Codegree statistics of a coloring against a 3-part split.

    Means are exact rationals; the red cross class is additionally split
    by page origin (third part vs the two endpoint parts) so the two
    terms of its expectation can be checked separately.
    """
    n = c.n
    p1, p2, p3 = (list(p) for p in parts)
    if sorted(p1 + p2 + p3) != list(range(n)):
        raise ValueError("parts do not partition the vertex set")
    if not len(p1) == len(p2) == len(p3):
        raise ValueError("parts must be equal thirds")

    pid = np.empty(n, dtype=np.int64)
    for k, part in enumerate((p1, p2, p3)):
        pid[part] = k

    blue = c.blue.to_bool_matrix().astype(bool)
    red = c.red.to_bool_matrix().astype(bool)
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    same = pid[:, None] == pid[None, :]

    cr = _codegree_matrix(red)
    cb = _codegree_matrix(blue)
    # red codegrees split by the part the page lives in
    cr_by_part = [_codegree_matrix(red, np.flatnonzero(pid == k)) for k in range(3)]

    intra_red = upper & same & red
    cross_blue = upper & ~same & blue
    cross_red = upper & ~same & red

    # for a cross red edge, its endpoints' parts vs the remaining part
    third = np.zeros((n, n), dtype=np.int64)
    own = np.zeros((n, n), dtype=np.int64)
    for a in range(3):
        for b in range(3):
            if a == b:
                continue
            k = 3 - a - b
            sel = (pid[:, None] == a) & (pid[None, :] == b)
            third[sel] = cr_by_part[k][sel]
            own[sel] = (cr_by_part[a] + cr_by_part[b])[sel]

    bk_red = int(cr[upper & red].max()) if red.any() else 0
    bk_blue = int(cb[upper & blue].max()) if blue.any() else 0

    return {
        "n": n,
        "part_sizes": [len(p1), len(p2), len(p3)],
        "red_intra": {"edges": int(intra_red.sum()), "mean_codegree": _mean_over(cr, intra_red)},
        "blue_cross": {"edges": int(cross_blue.sum()), "mean_codegree": _mean_over(cb, cross_blue)},
        "red_cross": {
            "edges": int(cross_red.sum()),
            "mean_codegree": _mean_over(cr, cross_red),
            "mean_pages_third_part": _mean_over(third, cross_red),
            "mean_pages_own_parts": _mean_over(own, cross_red),
        },
        "bk_red": bk_red,
        "bk_blue": bk_blue,
        "bk_red_over_n": Fraction(bk_red, n),
        "bk_blue_over_n": Fraction(bk_blue, n),
    }
