"""Uniform-pair machinery: exact oracle, counting bounds, pair labels.

A pair (A, B) is eps-uniform when every X in A, Y in B with |X| >= ceil(eps
|A|), |Y| >= ceil(eps |B|) has |d(X, Y) - d(A, B)| <= eps; a witness to the
contrary must violate the deviation strictly.  The size floor and the strict
deviation are fixed conventions here, chosen so the oracle and all bound
validators agree with each other.

All densities and bounds are exact rationals; "count >= bound" comparisons
carry no floating-point tolerance.  Deviation tests inside the oracle are
cleared of denominators up front and run on plain integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .colorings import TwoColoring
from .errors import CapacityError
from .graphs import BookCertificate, Graph, bits_of, vertex_mask
from .numbers import as_fraction
from .rng import subset_sampler

ORACLE_SIDE_CAP = 16


@dataclass(frozen=True)
class BipartitePairView:
    """Two disjoint vertex sets of a host graph with their cross edges."""

    host: Graph
    A: tuple[int, ...]
    B: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(self.A))
        object.__setattr__(self, "B", tuple(self.B))
        if not self.A or not self.B:
            raise ValueError("both sides must be nonempty")
        ma, mb = vertex_mask(self.A), vertex_mask(self.B)
        if ma & mb:
            raise ValueError("sides must be disjoint")
        for v in (*self.A, *self.B):
            if not 0 <= v < self.host.n:
                raise ValueError(f"vertex {v} outside the host graph")
        if len(set(self.A)) != len(self.A) or len(set(self.B)) != len(self.B):
            raise ValueError("repeated vertex in a side")

    def edge_count(self) -> int:
        mb = vertex_mask(self.B)
        return sum((self.host.rows[a] & mb).bit_count() for a in self.A)

    @property
    def density(self) -> Fraction:
        return Fraction(self.edge_count(), len(self.A) * len(self.B))

    def degrees_into_A(self) -> list[int]:
        """For each b in B (in order), its edge count into A."""
        ma = vertex_mask(self.A)
        return [(self.host.rows[b] & ma).bit_count() for b in self.B]

    def b_rows(self) -> list[int]:
        """For each b in B, the bitmask of its neighbors over A positions."""
        out = []
        for b in self.B:
            row = self.host.rows[b]
            out.append(sum(1 << k for k, a in enumerate(self.A) if row >> a & 1))
        return out


@dataclass(frozen=True)
class UniformityVerdict:
    uniform: bool
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None

    def __post_init__(self):
        if self.uniform == (self.witness is not None):
            raise ValueError("witness present iff not uniform")


def _size_floor(eps: Fraction, side: int) -> int:
    return max(1, -((-eps.numerator * side) // eps.denominator))  # ceil(eps*side)


def _deviates(e: int, s: int, sy: int, enum: int, na: int, nb: int, eps: Fraction) -> bool:
    # |e/(s*sy) - enum/(na*nb)| > eps, cleared of denominators
    lhs = abs(e * na * nb - enum * s * sy) * eps.denominator
    return lhs > eps.numerator * s * sy * na * nb


def uniformity_oracle(pair: BipartitePairView, eps) -> UniformityVerdict:
    """Exhaustive uniformity check over all floor-respecting subset pairs.

    Sides are capped at 16 vertices: larger inputs belong to
    nonuniformity_search.  For each X the extreme cross counts at every
    |Y| are read off sorted degree prefixes, so a 16x16 pair costs about
    2^16 * 16 integer operations instead of 2^32 subset pairs.  The
    returned witness is the first (X bitmask, Y bitmask) in increasing
    numeric order over the given side orderings.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    na, nb = len(pair.A), len(pair.B)
    if na > ORACLE_SIDE_CAP or nb > ORACLE_SIDE_CAP:
        raise CapacityError(f"oracle sides capped at {ORACLE_SIDE_CAP} vertices")
    a0, b0 = _size_floor(eps, na), _size_floor(eps, nb)
    if a0 > na or b0 > nb:
        return UniformityVerdict(uniform=True, witness=None)
    rows = pair.b_rows()
    enum = pair.edge_count()

    for X in range(1, 1 << na):
        s = X.bit_count()
        if s < a0:
            continue
        degs = sorted((r & X).bit_count() for r in rows)
        lo = hi = 0
        found = False
        for sy in range(1, nb + 1):
            lo += degs[sy - 1]
            hi += degs[nb - sy]
            if sy >= b0 and (
                _deviates(lo, s, sy, enum, na, nb, eps)
                or _deviates(hi, s, sy, enum, na, nb, eps)
            ):
                found = True
                break
        if not found:
            continue
        # locate the least Y bitmask; subset-sum DP over B masks
        deg_of = [(r & X).bit_count() for r in rows]
        esum = [0] * (1 << nb)
        for Y in range(1, 1 << nb):
            low = Y & -Y
            esum[Y] = esum[Y ^ low] + deg_of[low.bit_length() - 1]
        for Y in range(1, 1 << nb):
            sy = Y.bit_count()
            if sy >= b0 and _deviates(esum[Y], s, sy, enum, na, nb, eps):
                wx = tuple(pair.A[k] for k in bits_of(X))
                wy = tuple(pair.B[k] for k in bits_of(Y))
                return UniformityVerdict(uniform=False, witness=(wx, wy))
        raise AssertionError("prefix scan found a deviation but mask scan did not")
    return UniformityVerdict(uniform=True, witness=None)


def check_witness(pair: BipartitePairView, eps, X: Iterable[int], Y: Iterable[int]) -> bool:
    """Exact re-validation of a claimed non-uniformity witness."""
    eps = as_fraction(eps)
    X, Y = sorted(set(X)), sorted(set(Y))
    if not set(X) <= set(pair.A) or not set(Y) <= set(pair.B):
        return False
    if len(X) < _size_floor(eps, len(pair.A)) or len(Y) < _size_floor(eps, len(pair.B)):
        return False
    my = vertex_mask(Y)
    e = sum((pair.host.rows[x] & my).bit_count() for x in X)
    dxy = Fraction(e, len(X) * len(Y))
    return abs(dxy - pair.density) > eps


def nonuniformity_search(pair: BipartitePairView, eps, samples: int = 1000, seed: int = 0):
    """Heuristic witness hunt for pairs beyond the oracle cap.

    Degree-threshold prefixes of A are tried first, then neighborhoods of
    single B vertices, then seeded random subsets; for each candidate X
    the most extreme Y of every admissible size is examined.  A returned
    witness is exactly re-validated; None certifies nothing.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    na, nb = len(pair.A), len(pair.B)
    a0, b0 = _size_floor(eps, na), _size_floor(eps, nb)
    if a0 > na or b0 > nb:
        return None
    enum = pair.edge_count()
    mb = vertex_mask(pair.B)
    deg_a = [(pair.host.rows[a] & mb).bit_count() for a in pair.A]
    by_degree = sorted(range(na), key=lambda k: (deg_a[k], k))

    def candidate_xs():
        sizes = sorted({a0, max(a0, na // 4), max(a0, na // 2), max(a0, (3 * na) // 4), na})
        for m in sizes:
            yield [pair.A[k] for k in by_degree[:m]]
            yield [pair.A[k] for k in by_degree[na - m :]]
        sa = set(pair.A)
        for b in pair.B[:50]:
            hood = [a for a in pair.A if pair.host.has_edge(a, b)]
            if len(hood) >= a0:
                yield hood
            rest = sorted(sa.difference(hood))
            if len(rest) >= a0:
                yield rest
        rng = subset_sampler(seed, stream=1)
        while True:
            m = int(rng.integers(a0, na + 1))
            yield sorted(int(v) for v in rng.choice(pair.A, size=m, replace=False))

    tried = 0
    for X in candidate_xs():
        if tried >= samples:
            return None
        tried += 1
        s = len(X)
        mx = vertex_mask(X)
        deg_b = [(pair.host.rows[b] & mx).bit_count() for b in pair.B]
        order = sorted(range(nb), key=lambda k: (deg_b[k], k))
        lo = hi = 0
        for sy in range(1, nb + 1):
            lo += deg_b[order[sy - 1]]
            hi += deg_b[order[nb - sy]]
            if sy < b0:
                continue
            for e, picks in ((lo, order[:sy]), (hi, order[nb - sy :])):
                if _deviates(e, s, sy, enum, na, nb, eps):
                    Y = sorted(pair.B[k] for k in picks)
                    if check_witness(pair, eps, X, Y):
                        return tuple(sorted(X)), tuple(Y)
    return None


# -------------------------------------------------------------- bad pairs


def bad_pair_count_shared(pair: BipartitePairView, eps) -> int:
    """Unordered {u, v} in A whose codegree into B is <= (d - eps)^2 |B|."""
    eps = as_fraction(eps)
    d = pair.density
    if not eps < d:
        raise ValueError("requires eps < density")
    nb = len(pair.B)
    thr = (d - eps) ** 2 * nb
    mb = vertex_mask(pair.B)
    rows = [pair.host.rows[a] & mb for a in pair.A]
    count = 0
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            if (rows[i] & rows[j]).bit_count() <= thr:
                count += 1
    return count


def bad_pair_count_cross(pair1: BipartitePairView, pair2: BipartitePairView, eps) -> int:
    """Ordered (u, v) in A1 x A2 with codegree into B <= (d1-eps)(d2-eps)|B|."""
    eps = as_fraction(eps)
    if pair1.host is not pair2.host and pair1.host != pair2.host:
        raise ValueError("pairs must share a host graph")
    if pair1.B != pair2.B:
        raise ValueError("pairs must share the B side")
    if vertex_mask(pair1.A) & vertex_mask(pair2.A):
        raise ValueError("A sides must be disjoint")
    d1, d2 = pair1.density, pair2.density
    if not (2 * eps <= d1 <= 1 and 2 * eps <= d2 <= 1):
        raise ValueError("requires 2 eps <= density <= 1 on both pairs")
    nb = len(pair1.B)
    thr = (d1 - eps) * (d2 - eps) * nb
    mb = vertex_mask(pair1.B)
    rows1 = [pair1.host.rows[a] & mb for a in pair1.A]
    rows2 = [pair2.host.rows[a] & mb for a in pair2.A]
    return sum(
        1 for r1 in rows1 for r2 in rows2 if (r1 & r2).bit_count() <= thr
    )


# ------------------------------------------------------- multipair bounds


@dataclass(frozen=True)
class MultiPairConfig:
    """One or two base blocks plus k page blocks, all of size t.

    Densities are taken from the host graph, so the counting hypotheses
    e(A_i, B_j) >= d_ij t^2 hold with equality.  Whether each (base,
    page) pair is eps-uniform is the caller's concern; the bound holds
    whenever they are.
    """

    host: Graph
    bases: tuple[tuple[int, ...], ...]
    pages: tuple[tuple[int, ...], ...]
    epsilon: Fraction

    def __post_init__(self):
        object.__setattr__(self, "bases", tuple(tuple(b) for b in self.bases))
        object.__setattr__(self, "pages", tuple(tuple(p) for p in self.pages))
        object.__setattr__(self, "epsilon", as_fraction(self.epsilon))
        if len(self.bases) not in (1, 2):
            raise ValueError("need one or two base blocks")
        if not self.pages:
            raise ValueError("need at least one page block")
        blocks = [*self.bases, *self.pages]
        t = len(blocks[0])
        if t == 0 or any(len(b) != t for b in blocks):
            raise ValueError("all blocks must share one nonzero size")
        seen = 0
        for b in blocks:
            mb = vertex_mask(b)
            if mb & seen:
                raise ValueError("blocks must be pairwise disjoint")
            seen |= mb
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")

    @property
    def t(self) -> int:
        return len(self.bases[0])

    @property
    def k(self) -> int:
        return len(self.pages)

    def base_pair(self, i: int, j: int) -> BipartitePairView:
        return BipartitePairView(self.host, self.bases[i], self.pages[j])

    def densities(self, i: int) -> list[Fraction]:
        return [self.base_pair(i, j).density for j in range(self.k)]


def _pages_mask(cfg: MultiPairConfig) -> int:
    m = 0
    for p in cfg.pages:
        m |= vertex_mask(p)
    return m


def triangle_bound_shared(cfg: MultiPairConfig) -> tuple[Fraction, int]:
    """Lower bound vs exact count of triangles with 2 vertices in A.

    bound = t (e(A) - 2 eps t^2) sum d_i^2  -  2 eps k t e(A)
    """
    if len(cfg.bases) != 1:
        raise ValueError("shared form takes a single base block")
    A = cfg.bases[0]
    t, k, eps = cfg.t, cfg.k, cfg.epsilon
    ea = cfg.host.edges_within(A)
    sq = sum(d * d for d in cfg.densities(0))
    bound = t * (ea - 2 * eps * t * t) * sq - 2 * eps * k * t * ea
    pm = _pages_mask(cfg)
    actual = sum(
        (cfg.host.rows[u] & cfg.host.rows[v] & pm).bit_count()
        for u, v in cfg.host.edges()
        if u in set(A) and v in set(A)
    )
    return bound, actual


def triangle_bound_cross(cfg: MultiPairConfig) -> tuple[Fraction, int]:
    """Lower bound vs exact count of triangles with one vertex in each base.

    bound = t (e(A1,A2) - 2 eps t^2) sum d_1i d_2i  -  2 eps k t e(A1,A2)
    """
    if len(cfg.bases) != 2:
        raise ValueError("cross form takes two base blocks")
    A1, A2 = cfg.bases
    t, k, eps = cfg.t, cfg.k, cfg.epsilon
    _, _, e12 = cfg.host.cut_and_induced_counts(A1, A2)
    dd = sum(a * b for a, b in zip(cfg.densities(0), cfg.densities(1)))
    bound = t * (e12 - 2 * eps * t * t) * dd - 2 * eps * k * t * e12
    pm = _pages_mask(cfg)
    m2 = vertex_mask(A2)
    actual = sum(
        (cfg.host.rows[u] & cfg.host.rows[v] & pm).bit_count()
        for u in A1
        for v in bits_of(cfg.host.rows[u] & m2)
    )
    return bound, actual


def _best_book(cfg: MultiPairConfig, base_edges) -> BookCertificate:
    pm = _pages_mask(cfg)
    best = -1
    pick = None
    for u, v in base_edges:
        c = (cfg.host.rows[u] & cfg.host.rows[v] & pm).bit_count()
        if c > best:
            best, pick = c, (u, v)
    u, v = pick
    pages = frozenset(bits_of(cfg.host.rows[u] & cfg.host.rows[v] & pm))
    return BookCertificate(base=(min(u, v), max(u, v)), pages=pages)


def book_bound_shared(cfg: MultiPairConfig) -> tuple[Fraction, BookCertificate]:
    """Averaged form: some base edge in A carries a page-block book of size
    at least t (1 - 2 eps t^2 / e(A)) sum d_i^2 - 2 eps k t."""
    if len(cfg.bases) != 1:
        raise ValueError("shared form takes a single base block")
    A = cfg.bases[0]
    ea = cfg.host.edges_within(A)
    if ea == 0:
        raise ValueError("base block spans no edges")
    t, k, eps = cfg.t, cfg.k, cfg.epsilon
    sq = sum(d * d for d in cfg.densities(0))
    bound = t * (1 - Fraction(2 * eps * t * t, ea)) * sq - 2 * eps * k * t
    sa = set(A)
    edges = [(u, v) for u, v in cfg.host.edges() if u in sa and v in sa]
    return bound, _best_book(cfg, edges)


def book_bound_cross(cfg: MultiPairConfig) -> tuple[Fraction, BookCertificate]:
    """Cross form: some base edge between A1 and A2 carries a book of size
    at least t (1 - 2 eps t^2 / e(A1,A2)) sum d_1i d_2i - 2 eps k t."""
    if len(cfg.bases) != 2:
        raise ValueError("cross form takes two base blocks")
    A1, A2 = cfg.bases
    _, _, e12 = cfg.host.cut_and_induced_counts(A1, A2)
    if e12 == 0:
        raise ValueError("no edges between the base blocks")
    t, k, eps = cfg.t, cfg.k, cfg.epsilon
    dd = sum(a * b for a, b in zip(cfg.densities(0), cfg.densities(1)))
    bound = t * (1 - Fraction(2 * eps * t * t, e12)) * dd - 2 * eps * k * t
    m2 = vertex_mask(A2)
    edges = [(u, v) for u in A1 for v in bits_of(cfg.host.rows[u] & m2)]
    return bound, _best_book(cfg, edges)


# ---------------------------------------------------------- pair labeling


def classify_pairs(
    c: TwoColoring,
    blocks: Sequence[Sequence[int]],
    eps,
    beta,
    gamma,
    *,
    samples: int = 500,
    seed: int = 0,
) -> list[dict]:
    """Label every block pair irr / blue / mid / red.

    A pair is irr when not eps-uniform; otherwise its red density d
    decides: blue when d < beta, mid when beta <= d < 1 - gamma, red when
    d >= 1 - gamma.  Uniformity is judged on the red graph, which is
    equivalent to judging the blue graph since complement densities
    deviate identically.  Blocks within the oracle cap are decided
    exactly; larger ones fall back to the sampled search, recorded per
    pair since finding no witness does not prove uniformity.
    """
    eps, beta, gamma = as_fraction(eps), as_fraction(beta), as_fraction(gamma)
    if not (0 < beta < 1 and 0 < gamma < 1):
        raise ValueError("beta and gamma must lie in (0, 1)")
    blocks = [tuple(b) for b in blocks]
    if not blocks:
        raise ValueError("need at least one block")
    t = len(blocks[0])
    if t == 0 or any(len(b) != t for b in blocks):
        raise ValueError("blocks must have one common nonzero size")
    seen = 0
    for b in blocks:
        mb = vertex_mask(b)
        if mb & seen:
            raise ValueError("blocks must be pairwise disjoint")
        seen |= mb

    red = c.red
    out = []
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            pair = BipartitePairView(red, blocks[i], blocks[j])
            if t <= ORACLE_SIDE_CAP:
                verdict = uniformity_oracle(pair, eps)
                nonuniform = not verdict.uniform
                method = "oracle"
            else:
                witness = nonuniformity_search(pair, eps, samples=samples, seed=seed)
                nonuniform = witness is not None
                method = "search"
            d = pair.density
            if nonuniform:
                label = "irr"
            elif d < beta:
                label = "blue"
            elif d < 1 - gamma:
                label = "mid"
            else:
                label = "red"
            out.append(
                {"pair": (i, j), "label": label, "red_density": d, "method": method}
            )
    return out
