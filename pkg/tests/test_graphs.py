"""Graph primitives: codegree, booksize, counts, graph6 interchange."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from bookramsey.errors import ParseError
from bookramsey.graphs import (
    BookCertificate,
    Graph,
    read_graph6_file,
    write_graph6_file,
)


def random_graph(rng, n, p=0.5):
    m = np.triu(rng.random((n, n)) < p, k=1).astype(np.uint8)
    return Graph.from_bool_matrix(m | m.T)


# ------------------------------------------------------------ construction


def test_from_edges_rejects_loops_and_range():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 3)])


def test_rows_validation_catches_asymmetry_and_loops():
    with pytest.raises(ValueError):
        Graph.from_rows(2, [0b10, 0b00])  # 0->1 without 1->0
    with pytest.raises(ValueError):
        Graph.from_rows(2, [0b01, 0b10])  # loop at 0
    with pytest.raises(ValueError):
        Graph.from_rows(2, [0b100, 0b000])  # bit beyond range


def test_graph_is_immutable():
    g = Graph.complete(3)
    with pytest.raises(AttributeError):
        g.n = 5


def test_degree_and_edges_order():
    g = Graph.from_edges(4, [(0, 1), (0, 2), (2, 3)])
    assert [g.degree(u) for u in range(4)] == [2, 1, 2, 1]
    assert list(g.edges()) == [(0, 1), (0, 2), (2, 3)]
    assert g.edge_count() == 3


# ---------------------------------------------------------------- codegree


def test_codegree_complete_graph():
    g = Graph.complete(4)
    for u, v in itertools.combinations(range(4), 2):
        assert g.codegree(u, v) == 2


def test_codegree_path_and_cycle():
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert path.codegree(0, 1) == 0
    c5 = Graph.cycle(5)
    for u in range(5):
        assert c5.codegree(u, (u + 1) % 5) == 0
        assert c5.codegree(u, (u + 2) % 5) == 1


def test_codegree_rejects_bad_vertices():
    g = Graph.complete(3)
    with pytest.raises(ValueError):
        g.codegree(0, 0)
    with pytest.raises(ValueError):
        g.codegree(0, 3)


def test_codegree_matches_naive_double_loop():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(2, 65))
        g = random_graph(rng, n, float(rng.uniform(0.1, 0.9)))
        u, v = map(int, rng.choice(n, size=2, replace=False))
        naive = sum(1 for w in range(n) if g.has_edge(u, w) and g.has_edge(v, w))
        assert g.codegree(u, v) == naive


# ---------------------------------------------------------------- booksize


def test_booksize_of_cliques():
    for q in (1, 2, 5, 9):
        size, cert = Graph.complete(q + 1).booksize()
        assert size == q - 1
        assert cert.base == (0, 1)
        assert cert.size == size


def test_booksize_bipartite_is_zero():
    size, cert = Graph.complete_bipartite(3, 3).booksize()
    assert size == 0
    assert cert is not None  # edges exist, so a (trivial) base is named


def test_booksize_edgeless():
    assert Graph.empty(10).booksize() == (0, None)


def test_booksize_certificate_validates():
    g = Graph.complete(6)
    size, cert = g.booksize()
    cert.validate(g)
    bad = BookCertificate(base=(0, 1), pages=frozenset({7}))
    with pytest.raises(ValueError):
        bad.validate(g)


def test_booksize_upper_bound_and_clique_equality():
    rng = np.random.default_rng(7)
    for _ in range(30):
        n = int(rng.integers(2, 30))
        g = random_graph(rng, n)
        assert g.booksize()[0] <= max(0, n - 2)
    for n in (2, 3, 6, 12):
        assert Graph.complete(n).booksize()[0] == n - 2


def test_booksize_monotone_under_edge_insertion():
    rng = np.random.default_rng(11)
    for _ in range(25):
        n = int(rng.integers(4, 24))
        g = random_graph(rng, n, 0.4)
        non_edges = [
            (u, v)
            for u, v in itertools.combinations(range(n), 2)
            if not g.has_edge(u, v)
        ]
        if not non_edges:
            continue
        u, v = non_edges[int(rng.integers(len(non_edges)))]
        bigger = Graph.from_edges(n, list(g.edges()) + [(u, v)])
        assert bigger.booksize()[0] >= g.booksize()[0]


def test_booksize_at_least_ceil_of_mean():
    rng = np.random.default_rng(13)
    for _ in range(25):
        n = int(rng.integers(3, 30))
        g = random_graph(rng, n, 0.6)
        edges = list(g.edges())
        if not edges:
            continue
        mean = g.mean_book_size(edges)
        assert g.booksize()[0] >= -(-mean.numerator // mean.denominator)


# ------------------------------------------------------------- mean values


def test_mean_book_size_exact_values():
    k4 = Graph.complete(4)
    assert k4.mean_book_size(list(k4.edges())) == 2
    c5 = Graph.cycle(5)
    assert c5.mean_book_size(list(c5.edges())) == 0
    k4_minus = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    assert k4_minus.mean_book_size(list(k4_minus.edges())) == Fraction(6, 5)


def test_mean_book_size_rejects_bad_bases():
    g = Graph.cycle(5)
    with pytest.raises(ValueError):
        g.mean_book_size([])
    with pytest.raises(ValueError):
        g.mean_book_size([(0, 2)])  # not an edge


# --------------------------------------------------------------- complement


def test_complement_involution_and_edge_split():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(1, 40))
        g = random_graph(rng, n)
        cg = g.complement()
        assert cg.complement() == g
        assert g.edge_count() + cg.edge_count() == n * (n - 1) // 2


def brute_force_isomorphic(g, h):
    if g.n != h.n:
        return False
    verts = range(g.n)
    edges_h = set(h.edges())
    for perm in itertools.permutations(verts):
        mapped = {tuple(sorted((perm[u], perm[v]))) for u, v in g.edges()}
        if mapped == edges_h:
            return True
    return False


def test_complement_of_five_cycle_is_five_cycle():
    c5 = Graph.cycle(5)
    assert brute_force_isomorphic(c5.complement(), c5)


def test_complement_of_complete_is_edgeless():
    assert Graph.complete(7).complement().edge_count() == 0


# ------------------------------------------------------------ subset counts


def test_cut_and_induced_counts_examples():
    k6 = Graph.complete(6)
    assert k6.cut_and_induced_counts([0, 1, 2], [3, 4, 5]) == (3, 3, 9)
    k33 = Graph.complete_bipartite(3, 3)
    assert k33.cut_and_induced_counts([0, 1, 2], [3, 4, 5]) == (0, 0, 9)
    c5 = Graph.cycle(5)
    assert c5.cut_and_induced_counts([0, 1], [2, 3]) == (1, 1, 1)


def test_cut_counts_reject_overlap():
    with pytest.raises(ValueError):
        Graph.complete(4).cut_and_induced_counts([0, 1], [1, 2])


def test_cut_identity_on_random_sets():
    rng = np.random.default_rng(5)
    for _ in range(30):
        n = int(rng.integers(2, 40))
        g = random_graph(rng, n)
        labels = rng.integers(0, 3, size=n)
        X = [v for v in range(n) if labels[v] == 0]
        Y = [v for v in range(n) if labels[v] == 1]
        ex, ey, exy = g.cut_and_induced_counts(X, Y)
        assert ex + ey + exy == g.edges_within(X + Y)


def test_min_degree_induced_examples():
    assert Graph.complete(5).min_degree_induced(range(5)) == 4
    star = Graph.from_edges(5, [(0, i) for i in range(1, 5)])
    assert star.min_degree_induced([1, 2, 3, 4]) == 0
    assert Graph.cycle(5).min_degree_induced([0, 1, 2]) == 1
    with pytest.raises(ValueError):
        star.min_degree_induced([])


# ----------------------------------------------------------------- graph6


def test_graph6_round_trip_short_and_long():
    rng = np.random.default_rng(17)
    for n in (0, 1, 2, 5, 30, 62, 63, 64, 100):
        g = random_graph(rng, n, 0.4)
        assert Graph.from_graph6(g.to_graph6()) == g


def test_graph6_matches_networkx():
    nx = pytest.importorskip("networkx")
    rng = np.random.default_rng(19)
    for n in (5, 40, 70):
        g = random_graph(rng, n, 0.5)
        h = nx.from_graph6_bytes(g.to_graph6().encode())
        assert h.number_of_nodes() == n
        assert {tuple(sorted(e)) for e in h.edges()} == set(g.edges())
        # and the reverse direction, decoding networkx output
        s = nx.to_graph6_bytes(h, header=False).decode().strip()
        assert Graph.from_graph6(s) == g


def test_graph6_accepts_header_prefix():
    g = Graph.cycle(5)
    assert Graph.from_graph6(">>graph6<<" + g.to_graph6()) == g


def test_graph6_parse_errors_carry_location():
    with pytest.raises(ParseError):
        Graph.from_graph6("")
    with pytest.raises(ParseError) as exc:
        Graph.from_graph6("D\x01")
    assert exc.value.offset == 1
    with pytest.raises(ParseError):
        Graph.from_graph6("D")  # truncated data for n=5
    with pytest.raises(ParseError):
        # n=5 has 10 edge bits in 2 chars; the last 2 bits must be zero
        Graph.from_graph6("D" + chr(63) + chr(63 + 0b11))


def test_graph6_file_io(tmp_path):
    g = Graph.complete(4)
    path = tmp_path / "k4.g6"
    write_graph6_file(path, g)
    assert read_graph6_file(path) == g


# ------------------------------------------------------------ bool matrices


def test_bool_matrix_round_trip():
    rng = np.random.default_rng(23)
    for n in (1, 9, 33, 65):
        g = random_graph(rng, n)
        m = g.to_bool_matrix()
        assert m.shape == (n, n)
        assert Graph.from_bool_matrix(m) == g


def test_bool_matrix_rejects_asymmetry():
    m = np.zeros((3, 3), dtype=np.uint8)
    m[0, 1] = 1
    with pytest.raises(ValueError):
        Graph.from_bool_matrix(m)
