"""Maximum spanning dependence trees over pairwise weight matrices.

The tree maximizing total pairwise dependence is grown greedily: start
from the globally heaviest edge, then repeatedly attach the out-of-tree
vertex with the heaviest crossing edge (Prim on a dense matrix, O(N^2)).
Ties are broken toward the lexicographically smallest (min index,
max index) pair, making the result fully deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dataset import Dataset
from .measures import WeightMatrix, weight_matrix

__all__ = [
    "TreeEdge",
    "DependenceTree",
    "maximum_spanning_tree",
    "coverage_ratio",
    "learn_structure",
]


@dataclass(frozen=True)
class TreeEdge:
    """Undirected weighted tree edge; ``signed_value`` keeps the signed
    rho when the measure is rho_abs (equal to ``weight`` otherwise)."""

    u: str
    v: str
    weight: float
    signed_value: float


@dataclass(frozen=True)
class DependenceTree:
    """A spanning tree of the variables: N nodes, N-1 weighted edges."""

    nodes: tuple[str, ...]
    edges: tuple[TreeEdge, ...]
    measure: str
    lattice_order: int
    coverage_ratio: float | None = None

    def __post_init__(self):
        nodes = tuple(self.nodes)
        edges = tuple(self.edges)
        if len(edges) != len(nodes) - 1:
            raise ValueError(
                f"{len(nodes)} nodes need {len(nodes) - 1} edges, got {len(edges)}"
            )
        index = {name: i for i, name in enumerate(nodes)}
        parent = list(range(len(nodes)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for edge in edges:
            if edge.u not in index or edge.v not in index:
                raise ValueError(f"edge ({edge.u}, {edge.v}) names unknown nodes")
            ru, rv = find(index[edge.u]), find(index[edge.v])
            if ru == rv:
                raise ValueError(f"edge ({edge.u}, {edge.v}) creates a cycle")
            parent[ru] = rv
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)

    def total_weight(self) -> float:
        return float(sum(edge.weight for edge in self.edges))

    def edge_pairs(self) -> set[tuple[str, str]]:
        """Edges as name pairs sorted within each pair."""
        return {tuple(sorted((e.u, e.v))) for e in self.edges}

    def degrees(self) -> dict[str, int]:
        out = {name: 0 for name in self.nodes}
        for e in self.edges:
            out[e.u] += 1
            out[e.v] += 1
        return out


def _edge_key(weights: np.ndarray, i: int, j: int):
    # Total order: heavier first, then lexicographically smallest sorted
    # index pair.  max() over these keys picks that edge.
    a, b = (i, j) if i < j else (j, i)
    return (weights[i, j], -a, -b)


def maximum_spanning_tree(w: WeightMatrix) -> DependenceTree:
    """Spanning tree with maximum total weight, grown from the heaviest edge.

    Deterministic: ties fall to the lexicographically smallest
    (min index, max index) pair.  With all weights equal this yields the
    star rooted at the first node.
    """
    n = w.dim
    if n < 2:
        raise ValueError(f"need at least 2 variables, got {n}")
    values = w.values
    best = max(
        ((i, j) for i in range(n) for j in range(i + 1, n)),
        key=lambda ij: _edge_key(values, *ij),
    )
    i0, j0 = best
    in_tree = np.zeros(n, dtype=bool)
    in_tree[i0] = in_tree[j0] = True
    edges = [(i0, j0)]
    # best in-tree partner of each out-of-tree vertex
    partner = np.empty(n, dtype=np.int64)
    for v in range(n):
        if not in_tree[v]:
            partner[v] = max((i0, j0), key=lambda u: _edge_key(values, u, v))
    while len(edges) < n - 1:
        v_next = max(
            (v for v in range(n) if not in_tree[v]),
            key=lambda v: _edge_key(values, partner[v], v),
        )
        u_next = partner[v_next]
        in_tree[v_next] = True
        edges.append((min(u_next, v_next), max(u_next, v_next)))
        for v in range(n):
            if not in_tree[v]:
                if _edge_key(values, v_next, v) > _edge_key(values, partner[v], v):
                    partner[v] = v_next
    tree_edges = tuple(
        TreeEdge(
            u=w.names[a],
            v=w.names[b],
            weight=float(values[a, b]),
            signed_value=float(w.signed[a, b]),
        )
        for a, b in edges
    )
    return DependenceTree(
        nodes=w.names,
        edges=tree_edges,
        measure=w.measure,
        lattice_order=w.lattice_order,
    )


def coverage_ratio(tree: DependenceTree, w: WeightMatrix) -> float:
    """Tree edge-weight sum over the sum of all unordered pair weights.

    Lies in (0, 1] whenever some weight is positive; a value near 1 means
    the tree alone captures most of the pairwise dependence mass.
    """
    if tree.nodes != w.names:
        raise ValueError("tree nodes do not match the weight matrix")
    index = {name: i for i, name in enumerate(w.names)}
    tree_sum = 0.0
    for edge in tree.edges:
        entry = w.values[index[edge.u], index[edge.v]]
        if abs(entry - edge.weight) > 1e-12:
            raise ValueError(
                f"edge ({edge.u}, {edge.v}) weight {edge.weight} does not "
                f"match the matrix entry {entry}"
            )
        tree_sum += edge.weight
    total = float(w.values[np.triu_indices(w.dim, 1)].sum())
    if total <= 0.0:
        raise ValueError("total pairwise weight is zero")
    return tree_sum / total


def learn_structure(
    data: Dataset,
    measure: str = "mi_cell",
    lattice_order: int = 0,
    tie_break: str = "random",
    tie_seed: int = 0,
) -> DependenceTree:
    """End-to-end pipeline: ranks -> weight matrix -> maximum spanning tree.

    Returns the tree with its coverage ratio filled in.  Fully
    deterministic for fixed inputs; exactly invariant under strictly
    increasing per-column transformations of the data for measures
    rho_abs and mi_cell.
    """
    w = weight_matrix(data, measure, lattice_order, tie_break, tie_seed)
    tree = maximum_spanning_tree(w)
    return replace(tree, coverage_ratio=coverage_ratio(tree, w))
