"""Vertex classification around an induced bipartite subgraph, with the
book bounds it forces, and the three-way structure check.

The blue graph g is analyzed against a candidate induced bipartite
subgraph G0 on independent parts U1, U2.  Outside vertices split by
which parts they touch; two exact lower bounds follow: a red-book bound
from averaging over base pairs inside U2, and a blue-book bound from
averaging |Gamma(v) cap U_i| over the vertices seeing both parts.  Both
are instance-level theorems (max >= mean plus inclusion-exclusion), so
tests treat any violation as a bug, never as noise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graphs import Graph, bits_of, vertex_mask
from .numbers import as_fraction
from .rng import subset_sampler


@dataclass(frozen=True)
class VertexClassification:
    """Partition of [n] induced by the parts U1, U2.

    V1 sees U1 only, V2 sees U2 only, V3 sees both, V_iso sees neither.
    """

    U1: tuple[int, ...]
    U2: tuple[int, ...]
    V1: tuple[int, ...]
    V2: tuple[int, ...]
    V3: tuple[int, ...]
    V_iso: tuple[int, ...]

    def parts(self) -> dict[str, tuple[int, ...]]:
        return {
            "U1": self.U1,
            "U2": self.U2,
            "V1": self.V1,
            "V2": self.V2,
            "V3": self.V3,
            "V_iso": self.V_iso,
        }


def _check_independent(g: Graph, part, name: str) -> None:
    m = vertex_mask(part)
    for v in part:
        if g.rows[v] & m:
            raise ValueError(f"{name} is not independent: vertex {v} has a neighbor inside")


def classify(g: Graph, U1, U2) -> VertexClassification:
    """Split all vertices outside U1, U2 by their neighbor pattern.

    Vertices adjacent to neither part land in V_iso; an empty V_iso is
    what makes the three-class outside split exhaustive, so callers that
    rely on it should check.
    """
    U1, U2 = tuple(sorted(U1)), tuple(sorted(U2))
    m1, m2 = vertex_mask(U1), vertex_mask(U2)
    if m1 & m2:
        raise ValueError("U1 and U2 overlap")
    _check_independent(g, U1, "U1")
    _check_independent(g, U2, "U2")
    v1, v2, v3, viso = [], [], [], []
    inside = m1 | m2
    for u in range(g.n):
        if inside >> u & 1:
            continue
        has1 = bool(g.rows[u] & m1)
        has2 = bool(g.rows[u] & m2)
        if has1 and has2:
            v3.append(u)
        elif has1:
            v1.append(u)
        elif has2:
            v2.append(u)
        else:
            viso.append(u)
    return VertexClassification(U1, U2, tuple(v1), tuple(v2), tuple(v3), tuple(viso))


def induced_min_degree(g: Graph, cls: VertexClassification) -> int:
    """Minimum degree of the induced bipartite graph on U1 and U2 (0 when empty)."""
    Un = (*cls.U1, *cls.U2)
    if not Un:
        return 0
    return g.min_degree_induced(Un)


def red_book_bound(g: Graph, cls: VertexClassification) -> Fraction:
    """Average red codegree over base pairs inside U2, as an exact bound.

    Every pair of U2 is a red base; counting red pages in U2, all of V1,
    and the V3 vertices missed by both endpoints gives

        |U2| - 2 + |V1| + |V3| - 2 e(U2, V3) / |U2|

    and the complement's booksize is at least this value.
    """
    if len(cls.U2) < 2:
        raise ValueError("need at least two vertices in U2")
    m3 = vertex_mask(cls.V3)
    e23 = sum((g.rows[u] & m3).bit_count() for u in cls.U2)
    u2 = len(cls.U2)
    return u2 - 2 + len(cls.V1) + len(cls.V3) - Fraction(2 * e23, u2)


def blue_book_bound(g: Graph, cls: VertexClassification) -> Fraction:
    """Averaged blue-book bound from V3, the larger of the two forms.

    Some v in V3 meets U_i in at least e(V3, U_i)/|V3| vertices and has a
    neighbor u in the other part; u keeps at least delta(G0) neighbors in
    U_i, so the blue base (v, u) carries at least

        e(V3, U_i)/|V3| + delta(G0) - |U_i|

    common neighbors, with the measured minimum degree of G0.
    """
    if not cls.V3:
        raise ValueError("V3 is empty")
    delta = induced_min_degree(g, cls)
    n3 = len(cls.V3)
    best = None
    for part in (cls.U1, cls.U2):
        mp = vertex_mask(part)
        e3p = sum((g.rows[v] & mp).bit_count() for v in cls.V3)
        val = Fraction(e3p, n3) + delta - len(part)
        if best is None or val > best:
            best = val
    return best


def classification_report(g: Graph, cls: VertexClassification) -> dict:
    """Exact side data: part sizes, delta(G0), and the zero cross counts.

    e(U1, V2) and e(U2, V1) vanish by definition of V1 and V2; they are
    recomputed here as a self-check rather than assumed.
    """
    m_v1, m_v2 = vertex_mask(cls.V1), vertex_mask(cls.V2)
    e_u1_v2 = sum((g.rows[u] & m_v2).bit_count() for u in cls.U1)
    e_u2_v1 = sum((g.rows[u] & m_v1).bit_count() for u in cls.U2)
    m3 = vertex_mask(cls.V3)
    e_u_v3 = sum((g.rows[u] & m3).bit_count() for u in (*cls.U1, *cls.U2))
    return {
        "sizes": {k: len(v) for k, v in cls.parts().items()},
        "delta_G0": induced_min_degree(g, cls),
        "e_U1_V2": e_u1_v2,
        "e_U2_V1": e_u2_v1,
        "e_U_V3": e_u_v3,
    }


# ------------------------------------------------------------- extraction


def _local_max_cut(g: Graph, side: list[bool], order: list[int]) -> None:
    # flip vertices while the cut grows; terminates since the cut is bounded
    masks = [0, 0]
    for v in range(g.n):
        masks[side[v]] |= 1 << v
    improved = True
    while improved:
        improved = False
        for v in order:
            s = side[v]
            own = (g.rows[v] & masks[s]).bit_count()
            other = (g.rows[v] & masks[1 - s]).bit_count()
            if own > other:
                masks[s] ^= 1 << v
                masks[1 - s] |= 1 << v
                side[v] = not s
                improved = True


def bipartite_extract(g: Graph, xi, seed: int = 0, restarts: int = 10):
    """Heuristic hunt for a large induced bipartite subgraph.

    Each restart: random sides, single-vertex max-cut local search,
    greedy deletion of the worst conflicted vertex until both parts are
    independent, then re-insertion sweeps.  Restarts are scored by
    (order, induced min degree) and ties go to the earliest restart, so
    the result is a pure function of (g, seed).  Returned parts are
    exactly independent; the xi thresholds are the caller's to judge.
    """
    as_fraction(xi)  # validated for interface symmetry; thresholds live upstream
    if g.n == 0:
        return None
    best = None
    best_score = None
    for r in range(restarts):
        rng = subset_sampler(seed, stream=r)
        side = [bool(b) for b in rng.integers(0, 2, size=g.n)]
        order = [int(v) for v in rng.permutation(g.n)]
        _local_max_cut(g, side, order)
        masks = [0, 0]
        for v in range(g.n):
            masks[side[v]] |= 1 << v
        # delete the most conflicted vertex until both sides are independent
        alive = (1 << g.n) - 1
        while True:
            worst_v, worst_c = -1, 0
            for s in (0, 1):
                for v in bits_of(masks[s] & alive):
                    c = (g.rows[v] & masks[s] & alive).bit_count()
                    if c > worst_c:
                        worst_v, worst_c = v, c
            if worst_v < 0:
                break
            alive ^= 1 << worst_v
        # try to re-insert deleted vertices, preferring the emptier side
        changed = True
        while changed:
            changed = False
            for v in range(g.n):
                if alive >> v & 1:
                    continue
                free = [
                    s
                    for s in (0, 1)
                    if not g.rows[v] & masks[s] & alive
                ]
                if free:
                    s = min(
                        free, key=lambda s: (masks[s] & alive).bit_count()
                    )
                    masks[s] |= 1 << v
                    masks[1 - s] &= ~(1 << v)
                    alive |= 1 << v
                    changed = True
        U1 = tuple(bits_of(masks[0] & alive))
        U2 = tuple(bits_of(masks[1] & alive))
        total = len(U1) + len(U2)
        mind = g.min_degree_induced((*U1, *U2)) if total else 0
        score = (total, mind, -r)
        if best_score is None or score > best_score:
            best, best_score = (U1, U2), score
    _check_independent(g, best[0], "U1")
    _check_independent(g, best[1], "U2")
    return best


# -------------------------------------------------------------- trichotomy


def trichotomy_check(g: Graph, xi, candidate=None, seed: int = 0) -> dict:
    """Evaluate the three structure branches exactly.

    (i)  complement booksize exceeds n/2;
    (ii) booksize exceeds (1/12 - 1e-6 xi^6) n;
    (iii) some induced bipartite subgraph has order >= (1 - xi) n with
          induced min degree > (1/2 - 2 xi) n.

    (iii) is checked against the given candidate parts, else against the
    heuristic extractor's best find; since the heuristic proves nothing
    when it fails, the branch reports "unknown" instead of False in that
    case.  Side data includes a compared-not-asserted cross-count
    inequality e(U, V3) vs (1 - 2 xi) |V3| n / 4 for the classification
    in play.
    """
    xi = as_fraction(xi)
    if not 0 < xi < 1:
        raise ValueError("xi must lie in (0, 1)")
    n = g.n
    bk_blue, _ = g.booksize()
    bk_red, _ = g.complement().booksize()
    thr_ii = (Fraction(1, 12) - xi**6 * Fraction(1, 10**6)) * n

    if candidate is not None:
        U1, U2 = candidate
        source = "candidate"
    else:
        found = bipartite_extract(g, xi, seed=seed)
        U1, U2 = found if found is not None else ((), ())
        source = "extractor"
    cls = classify(g, U1, U2)
    order = len(cls.U1) + len(cls.U2)
    delta = induced_min_degree(g, cls)
    iii_holds = order >= (1 - xi) * n and delta > (Fraction(1, 2) - 2 * xi) * n
    iii: bool | str
    if iii_holds:
        iii = True
    elif candidate is not None:
        iii = False
    else:
        iii = "unknown"

    m3 = vertex_mask(cls.V3)
    e_u_v3 = sum((g.rows[u] & m3).bit_count() for u in (*cls.U1, *cls.U2))
    return {
        "i": bk_red > Fraction(n, 2),
        "ii": bk_blue > thr_ii,
        "iii": iii,
        "bk_blue": bk_blue,
        "bk_red": bk_red,
        "threshold_ii": thr_ii,
        "G0_source": source,
        "G0_order": order,
        "delta_G0": delta,
        "order_floor": (1 - xi) * n,
        "delta_floor": (Fraction(1, 2) - 2 * xi) * n,
        "e_U_V3": e_u_v3,
        "e_U_V3_reference": (1 - 2 * xi) * len(cls.V3) * Fraction(n, 4),
    }
