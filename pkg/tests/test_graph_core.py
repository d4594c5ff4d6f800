import io as stdio
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from perturbtree import Embedding, Graph, GraphError, Tree, embedding_violation, union
from perturbtree import io
from perturbtree.generators import (
    TREE_FAMILIES,
    binomial_edges,
    complete_graph,
    cycle_graph,
    disjoint_cliques,
    empty_graph,
    generate_binomial,
    generate_tree,
    generate_unbalanced_bipartite,
    perfect_matching,
    petersen_graph,
    random_min_degree,
)

import oracles


@st.composite
def graphs(draw, max_n=9, n=None):
    n = draw(st.integers(1, max_n)) if n is None else n
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


# -- Graph ---------------------------------------------------------------------


def test_graph_rejects_self_loops_and_out_of_range():
    with pytest.raises(GraphError):
        Graph(3, [(1, 1)])
    with pytest.raises(GraphError):
        Graph(3, [(0, 3)])


def test_from_adjacency_rejects_asymmetry():
    with pytest.raises(GraphError, match="asymmetric"):
        Graph.from_adjacency([{1}, set()])


@given(graphs())
def test_graph_invariants(g):
    g.validate()
    for u in range(g.n):
        assert g.degree(u) == len(g.neighbors(u))
        assert u not in g.neighbors(u)
        for v in g.neighbors(u):
            assert u in g.neighbors(v)
    a = g.adjacency_matrix
    assert (a == a.T).all() and not a.diagonal().any()
    assert int(a.sum()) == 2 * g.m
    for u, mask in enumerate(g.bitmasks):
        assert {v for v in range(g.n) if mask >> v & 1} == set(g.neighbors(u))


def test_remove_vertices_keeps_labels():
    g = complete_graph(4).remove_vertices([0])
    assert g.n == 4 and g.degree(0) == 0 and g.m == 3


def test_tree_validation_messages():
    with pytest.raises(GraphError, match="non-tree edge count"):
        Tree(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(GraphError, match="not connected"):
        Tree(4, [(0, 1), (0, 2), (1, 2)])


def test_tree_paths_and_distances():
    t = Tree(5, [(0, 1), (1, 2), (2, 3), (1, 4)])
    assert t.path(0, 3) == [0, 1, 2, 3]
    assert t.distances_from([3]) == oracles.bfs_distances(oracles.adjacency(5, t.edges()), [3])
    order, parent = t.bfs_order(0)
    assert order[0] == 0 and parent[0] == -1 and sorted(order) == list(range(5))


def test_induced_subtree_relabels_in_sorted_order():
    t = Tree(5, [(0, 1), (1, 2), (2, 3), (1, 4)])
    sub, labels = t.induced_subtree({1, 2, 4})
    assert labels == [1, 2, 4]
    assert set(sub.edges()) == {(0, 1), (0, 2)}


# -- Embedding -----------------------------------------------------------------


def test_embedding_is_injective():
    e = Embedding({0: 2})
    with pytest.raises(ValueError):
        e.assign(1, 2)
    e.assign(1, 0)
    assert e.preimage(0) == 1 and e.inverse[e[1]] == 1
    e.move(1, 3)
    assert e.preimage(0) is None and e[1] == 3


def test_embedding_violation_reports_first_problem():
    t = Tree(3, [(0, 1), (1, 2)])
    h = Graph(3, [(0, 1), (1, 2)])
    assert embedding_violation(t, h, Embedding({0: 0, 1: 1, 2: 2}), spanning=True) is None
    assert "non-edge" in embedding_violation(t, h, Embedding({0: 1, 1: 0, 2: 2}), spanning=True)
    assert "not mapped" in embedding_violation(t, h, Embedding({0: 0, 1: 1}), spanning=True)
    assert embedding_violation(t, h, Embedding({0: 0, 1: 1})) is None


# -- union -----------------------------------------------------------------------


def test_union_examples():
    k22 = generate_unbalanced_bipartite(4, 0.5)
    assert union(k22, empty_graph(4)) == k22
    assert union(k22, Graph(4, [(0, 1)])).m == 5
    assert union(k22, k22) == k22
    with pytest.raises(GraphError, match="mismatched"):
        union(k22, empty_graph(5))


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(graphs(n=n), graphs(n=n), graphs(n=n))))
@settings(max_examples=40)
def test_union_is_commutative_associative_idempotent(triple):
    a, b, c = triple
    assert union(a, b) == union(b, a)
    assert union(union(a, b), c) == union(a, union(b, c))
    assert union(a, a) == a
    assert union(a, b).edge_set() == a.edge_set() | b.edge_set()


# -- generators ----------------------------------------------------------------


def test_binomial_extremes():
    assert generate_binomial(5, 0, seed=1).m == 0
    assert generate_binomial(5, 1, seed=1) == complete_graph(5)


def test_binomial_edge_count_concentration():
    n, p = 10_000, 8 / 10_000
    pairs = n * (n - 1) // 2
    mean, sd = p * pairs, math.sqrt(pairs * p * (1 - p))
    inside = sum(abs(len(binomial_edges(n, p, seed)) - mean) <= 4 * sd for seed in range(100))
    assert mean == pytest.approx(39996.0, abs=5)
    assert inside >= 99


def test_binomial_pair_marginals():
    # every pair should appear with frequency close to p
    n, p, reps = 12, 0.3, 2000
    counts = np.zeros((n, n))
    for seed in range(reps):
        for u, v in generate_binomial(n, p, seed).edges():
            counts[u, v] += 1
    freq = counts[np.triu_indices(n, 1)] / reps
    sd = math.sqrt(p * (1 - p) / reps)
    assert np.all(np.abs(freq - p) < 5 * sd)


def test_binomial_is_deterministic():
    assert generate_binomial(300, 0.05, seed=11) == generate_binomial(300, 0.05, seed=11)
    assert generate_binomial(300, 0.05, seed=11) != generate_binomial(300, 0.05, seed=12)


def test_unbalanced_bipartite_examples():
    assert generate_unbalanced_bipartite(4, 0.5).m == 4
    k37 = generate_unbalanced_bipartite(10, 0.3)
    assert k37.m == 3 * 7 and k37.min_degree == 3
    assert generate_unbalanced_bipartite(2, 0.5).edge_set() == {(0, 1)}
    for bad in (0, 1, 1.5, -0.1):
        with pytest.raises(ValueError):
            generate_unbalanced_bipartite(10, bad)


@pytest.mark.parametrize("n,alpha", [(10, 0.3), (101, 0.25), (50, 0.5)])
def test_dense_families_reach_min_degree(n, alpha):
    target = math.floor(alpha * n)
    assert generate_unbalanced_bipartite(n, alpha).min_degree == target
    assert disjoint_cliques(n, alpha).min_degree >= math.ceil(alpha * n)
    assert random_min_degree(n, alpha, seed=3).min_degree >= math.ceil(alpha * n)


def test_fixed_graphs():
    assert petersen_graph().degrees == (3,) * 10 and petersen_graph().m == 15
    assert cycle_graph(4).degrees == (2,) * 4
    assert perfect_matching(6).m == 3


def test_tree_examples():
    assert generate_tree(1, "random", 3, seed=0).n == 1
    t = generate_tree(7, "complete", 3, seed=0)
    assert sorted(t.degrees) == sorted([2, 3, 3, 1, 1, 1, 1])
    for seed in range(30):
        t = generate_tree(100, "random", 3, seed)
        assert t.max_degree <= 3 and t.m == 99


@pytest.mark.parametrize("family", TREE_FAMILIES)
@pytest.mark.parametrize("Delta", [2, 3, 5])
def test_tree_families_respect_delta(family, Delta):
    for n in (2, 3, 10, 57):
        t = generate_tree(n, family, Delta, seed=n)
        t.validate()
        assert t.max_degree <= Delta
        assert generate_tree(n, family, Delta, seed=n) == t


def test_infeasible_tree_request():
    with pytest.raises(GraphError):
        generate_tree(5, "path", 1, seed=0)
    with pytest.raises((GraphError, ValueError)):
        generate_tree(5, "no-such-family", 3, seed=0)


# -- I/O ---------------------------------------------------------------------------


def test_round_trip_k3(tmp_path):
    g = complete_graph(3)
    io.write_graph(g, tmp_path / "k3.txt")
    assert io.read_graph(tmp_path / "k3.txt") == g


@given(graphs())
def test_graph_text_round_trip(g):
    assert io.parse_graph(io.format_graph(g)) == g


def test_edge_written_backwards_is_accepted():
    g = io.parse_graph("2 1\n# comment\n\n1 0\n")
    assert g.edge_set() == {(0, 1)}


@pytest.mark.parametrize("text,message", [
    ("3\n", "malformed header"),
    ("x 1\n0 1\n", "malformed header"),
    ("3 1\n0 5\n", "out of range"),
    ("3 2\n0 1\n1 0\n", "duplicate"),
    ("3 2\n0 1\n", "declares"),
])
def test_malformed_graph_files(text, message):
    with pytest.raises(io.FormatError, match=message):
        io.parse_graph(text)


def test_tree_file_with_wrong_edge_count():
    with pytest.raises(io.FormatError, match="non-tree edge count"):
        io.parse_tree("3 3\n0 1\n1 2\n0 2\n")


def test_embedding_round_trip():
    e = Embedding({0: 2, 1: 0, 2: 1})
    buf = stdio.StringIO()
    io.write_embedding(e, 3, buf)
    n, back = io.read_embedding(stdio.StringIO(buf.getvalue()))
    assert n == 3 and back == e
    with pytest.raises(io.FormatError):
        io.parse_embedding("3\n0 1\n1 1\n")


def test_generated_output_is_byte_identical(tmp_path):
    for name, make in [
        ("g", lambda: io.format_graph(generate_binomial(200, 0.05, seed=5))),
        ("t", lambda: io.format_graph(generate_tree(200, "random", 3, seed=5))),
        ("r", lambda: io.format_graph(random_min_degree(60, 0.3, seed=5))),
    ]:
        assert make() == make(), name
