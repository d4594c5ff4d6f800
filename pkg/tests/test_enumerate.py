import itertools

import pytest

from perturbtree import GraphError, Tree
from perturbtree.enumerate import MAX_ENUMERATION_N, canonical_form, enumerate_free_trees, tree_centers

import oracles

# unlabeled trees on n vertices, n = 1.. (OEIS A000055)
FREE_TREES = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551]
# same with maximum degree at most 3 (OEIS A000672)
FREE_TREES_DEG3 = [1, 1, 1, 2, 2, 4, 6, 11, 18, 37, 66, 135]


def test_small_examples():
    four = enumerate_free_trees(4, 3)
    assert len(four) == 2
    assert sorted(sorted(t.degrees) for t in four) == [[1, 1, 1, 3], [1, 1, 2, 2]]
    (path,) = enumerate_free_trees(4, 2)
    assert sorted(path.degrees) == [1, 1, 2, 2]
    assert len(enumerate_free_trees(1, 1)) == 1


@pytest.mark.parametrize("n", range(1, 9))
def test_counts_match_prufer_oracle(n):
    Delta = max(1, n - 1)
    assert len(enumerate_free_trees(n, Delta)) == oracles.free_tree_classes(n)


@pytest.mark.parametrize("n", range(2, 9))
def test_bounded_degree_counts_match_prufer_oracle(n):
    assert len(enumerate_free_trees(n, 3)) == oracles.free_tree_classes(n, Delta=3)


@pytest.mark.parametrize("n", range(1, 13))
def test_counts_match_known_sequences(n):
    assert len(enumerate_free_trees(n, max(1, n - 1))) == FREE_TREES[n - 1]
    assert len(enumerate_free_trees(n, 3)) == FREE_TREES_DEG3[n - 1]


@pytest.mark.parametrize("n", [6, 8, 10])
def test_one_representative_per_class(n):
    trees = enumerate_free_trees(n, n - 1)
    keys = [oracles.nx_tree_key(t.n, list(t.edges())) for t in trees]
    assert len(set(keys)) == len(keys)
    for t in trees:
        t.validate()


def test_canonical_form_is_label_invariant():
    t = Tree(7, [(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (4, 6)])
    for perm in itertools.islice(itertools.permutations(range(7)), 0, 5040, 97):
        relabeled = Tree(7, [(perm[u], perm[v]) for u, v in t.edges()])
        assert canonical_form(relabeled) == canonical_form(t)
    other = Tree(7, [(0, i) for i in range(1, 4)] + [(1, 4), (2, 5), (3, 6)])
    assert canonical_form(other) != canonical_form(t)


def test_centers():
    assert tree_centers(Tree(4, [(0, 1), (1, 2), (2, 3)])) == [1, 2]
    assert tree_centers(Tree(5, [(0, 1), (1, 2), (2, 3), (3, 4)])) == [2]


def test_guard():
    with pytest.raises(GraphError):
        enumerate_free_trees(MAX_ENUMERATION_N + 1, 3)
