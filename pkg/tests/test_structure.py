"""Maximum spanning tree, coverage ratio, and the learning pipeline."""
import numpy as np
import pytest

from coptree import (
    Dataset,
    DependenceTree,
    TreeEdge,
    WeightMatrix,
    coverage_ratio,
    learn_structure,
    maximum_spanning_tree,
)
from oracles import best_tree_weight, connected


def matrix_of(names, entries, measure="mi_cell"):
    n = len(names)
    values = np.zeros((n, n))
    for (i, j), w in entries.items():
        values[i, j] = values[j, i] = w
    return WeightMatrix(
        names=tuple(names),
        measure=measure,
        lattice_order=2,
        values=values,
        signed=values.copy(),
    )


class TestMaximumSpanningTree:
    def test_three_node_example(self):
        w = matrix_of("abc", {(0, 1): 0.9, (0, 2): 0.5, (1, 2): 0.1})
        tree = maximum_spanning_tree(w)
        assert tree.edge_pairs() == {("a", "b"), ("a", "c")}
        assert tree.total_weight() == pytest.approx(1.4)

    def test_two_nodes(self):
        w = matrix_of("ab", {(0, 1): 0.42})
        tree = maximum_spanning_tree(w)
        assert tree.edge_pairs() == {("a", "b")}

    def test_equal_weights_give_star_at_first_node(self):
        names = tuple("abcde")
        w = matrix_of(names, {(i, j): 0.5 for i in range(5) for j in range(i + 1, 5)})
        tree = maximum_spanning_tree(w)
        assert tree.edge_pairs() == {("a", x) for x in "bcde"}

    def test_optimal_against_enumeration(self):
        rng = np.random.default_rng(20)
        for _ in range(60):
            n = int(rng.integers(2, 7))
            names = tuple(f"v{i}" for i in range(n))
            entries = {
                (i, j): float(rng.random())
                for i in range(n)
                for j in range(i + 1, n)
            }
            w = matrix_of(names, entries)
            tree = maximum_spanning_tree(w)
            assert tree.total_weight() == pytest.approx(best_tree_weight(w.values))

    def test_deterministic_under_duplicate_weights(self):
        rng = np.random.default_rng(21)
        for _ in range(30):
            n = int(rng.integers(3, 7))
            names = tuple(f"v{i}" for i in range(n))
            # few distinct levels force frequent ties
            entries = {
                (i, j): float(rng.integers(0, 3)) / 2.0
                for i in range(n)
                for j in range(i + 1, n)
            }
            w = matrix_of(names, entries)
            first = maximum_spanning_tree(w)
            second = maximum_spanning_tree(w)
            assert [
                (e.u, e.v) for e in first.edges
            ] == [(e.u, e.v) for e in second.edges]
            assert first.total_weight() == pytest.approx(best_tree_weight(w.values))

    def test_single_node_rejected(self):
        with pytest.raises(ValueError, match="at least 2"):
            maximum_spanning_tree(
                WeightMatrix(
                    names=("a",),
                    measure="mi_cell",
                    lattice_order=2,
                    values=np.zeros((1, 1)),
                    signed=np.zeros((1, 1)),
                )
            )


class TestDependenceTreeType:
    def test_edge_count_enforced(self):
        with pytest.raises(ValueError, match="edges"):
            DependenceTree(
                nodes=("a", "b", "c"),
                edges=(TreeEdge("a", "b", 1.0, 1.0),),
                measure="mi_cell",
                lattice_order=2,
            )

    def test_cycles_rejected(self):
        with pytest.raises(ValueError, match="cycle"):
            DependenceTree(
                nodes=("a", "b", "c"),
                edges=(
                    TreeEdge("a", "b", 1.0, 1.0),
                    TreeEdge("a", "b", 0.5, 0.5),
                ),
                measure="mi_cell",
                lattice_order=2,
            )

    def test_unknown_node_rejected(self):
        with pytest.raises(ValueError, match="unknown"):
            DependenceTree(
                nodes=("a", "b"),
                edges=(TreeEdge("a", "q", 1.0, 1.0),),
                measure="mi_cell",
                lattice_order=2,
            )


class TestCoverageRatio:
    def test_two_nodes_cover_everything(self):
        w = matrix_of("ab", {(0, 1): 0.7})
        tree = maximum_spanning_tree(w)
        assert coverage_ratio(tree, w) == 1.0

    def test_three_node_example(self):
        w = matrix_of("abc", {(0, 1): 0.9, (0, 2): 0.5, (1, 2): 0.1})
        tree = maximum_spanning_tree(w)
        assert coverage_ratio(tree, w) == pytest.approx(1.4 / 1.5)

    def test_weakly_attached_node_still_spanned(self):
        w = matrix_of("abc", {(0, 1): 0.8, (0, 2): 0.05, (1, 2): 0.03})
        tree = maximum_spanning_tree(w)
        assert len(tree.edges) == 2
        assert {"a", "b", "c"} == set(tree.nodes)
        ratio = coverage_ratio(tree, w)
        assert 0.0 < ratio < 1.0

    def test_zero_total_rejected(self):
        w = matrix_of("abc", {(0, 1): 0.0, (0, 2): 0.0, (1, 2): 0.0})
        tree = maximum_spanning_tree(w)
        with pytest.raises(ValueError, match="zero"):
            coverage_ratio(tree, w)

    def test_mismatched_weights_rejected(self):
        w = matrix_of("abc", {(0, 1): 0.9, (0, 2): 0.5, (1, 2): 0.1})
        tree = maximum_spanning_tree(w)
        other = matrix_of("abc", {(0, 1): 0.8, (0, 2): 0.5, (1, 2): 0.1})
        with pytest.raises(ValueError, match="does not match"):
            coverage_ratio(tree, other)


class TestLearnStructure:
    def test_pipeline_fills_coverage(self):
        rng = np.random.default_rng(22)
        data = Dataset(columns=("a", "b", "c"), values=rng.standard_normal((200, 3)))
        tree = learn_structure(data, "rho_abs")
        assert tree.coverage_ratio is not None
        assert 0.0 < tree.coverage_ratio <= 1.0
        assert len(tree.edges) == 2

    def test_deterministic(self):
        rng = np.random.default_rng(23)
        data = Dataset(columns=("a", "b", "c", "d"), values=rng.standard_normal((150, 4)))
        first = learn_structure(data, "mi_cell")
        second = learn_structure(data, "mi_cell")
        assert first == second

    @pytest.mark.parametrize("measure", ["rho_abs", "mi_cell"])
    def test_exact_invariance_under_increasing_transforms(self, measure):
        rng = np.random.default_rng(24)
        values = np.round(rng.standard_normal((180, 4)), 1)
        base = learn_structure(Dataset(columns=tuple("abcd"), values=values), measure)
        for transform in (np.exp, lambda v: v**3, lambda v: 4.0 * v + 1.0):
            moved = learn_structure(
                Dataset(columns=tuple("abcd"), values=transform(values)), measure
            )
            assert base == moved

    def test_tight_group_backbone_with_weak_leaves(self):
        # four near-copies of one signal plus two nearly unrelated
        # variables: the copies must form a connected subtree and the
        # weak variables must attach as leaves
        rng = np.random.default_rng(26)
        t = 1500
        core = rng.standard_normal(t)
        values = np.column_stack(
            [core + 0.15 * rng.standard_normal(t) for _ in range(4)]
            + [
                rng.standard_normal(t) + 0.05 * core,
                rng.standard_normal(t),
            ]
        )
        names = ("c1", "c2", "c3", "c4", "w1", "w2")
        tree = learn_structure(Dataset(columns=names, values=values), "mi_cell")
        assert connected(tree.edge_pairs(), {"c1", "c2", "c3", "c4"})
        degrees = tree.degrees()
        assert degrees["w1"] == 1
        assert degrees["w2"] == 1

    def test_edge_weights_match_matrix(self):
        rng = np.random.default_rng(25)
        data = Dataset(columns=tuple("abcd"), values=rng.standard_normal((100, 4)))
        from coptree import weight_matrix

        w = weight_matrix(data, "mi_cell")
        tree = learn_structure(data, "mi_cell")
        index = {name: i for i, name in enumerate(w.names)}
        for edge in tree.edges:
            assert edge.weight == w.values[index[edge.u], index[edge.v]]
