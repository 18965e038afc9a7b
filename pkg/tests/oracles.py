"""Independent reference implementations used as test oracles.

Everything here is deliberately literal and slow: exact rational
arithmetic, explicit loops over samples and lattice points, and exhaustive
tree enumeration.  The package must agree with these, not the other way
around.
"""
import heapq
import itertools
import math
from fractions import Fraction

import numpy as np


def literal_cdf_counts(ranks: np.ndarray, order: int) -> np.ndarray:
    """Integer CDF counts on the (K+1)^N lattice by direct counting.

    Lattice point (t_1, ..., t_N) counts samples with
    r_n <= floor(t_n * T / K) in every coordinate; thresholds use exact
    rationals.
    """
    t, n = ranks.shape
    out = np.zeros((order + 1,) * n, dtype=np.int64)
    for idx in itertools.product(range(order + 1), repeat=n):
        thresholds = [math.floor(Fraction(i * t, order)) for i in idx]
        hits = 0
        for row in range(t):
            if all(ranks[row, j] <= thresholds[j] for j in range(n)):
                hits += 1
        out[idx] = hits
    return out


def difference_masses(cdf_counts: np.ndarray) -> np.ndarray:
    """Cell masses (as integer counts) from alternating corner sums of the
    CDF grid: the N-dimensional inclusion-exclusion difference."""
    n = cdf_counts.ndim
    order = cdf_counts.shape[0] - 1
    out = np.zeros((order,) * n, dtype=np.int64)
    for cell in itertools.product(range(1, order + 1), repeat=n):
        total = 0
        for corner in itertools.product((0, 1), repeat=n):
            sign = (-1) ** (n - sum(corner))
            pos = tuple(c - 1 + b for c, b in zip(cell, corner))
            total += sign * cdf_counts[pos]
        out[tuple(c - 1 for c in cell)] = total
    return out


def direct_bin_counts(ranks: np.ndarray, order: int) -> np.ndarray:
    """Integer cell counts by dropping each sample into its half-open
    cell, ceil(r * K / T) per coordinate, with exact rationals."""
    t, n = ranks.shape
    out = np.zeros((order,) * n, dtype=np.int64)
    for row in range(t):
        cell = tuple(
            math.ceil(Fraction(int(ranks[row, j]) * order, t)) - 1 for j in range(n)
        )
        out[cell] += 1
    return out


def naive_spearman(rank_x, rank_y) -> float:
    """The O(T^2) lattice double sum: (12/(T^2-1)) * sum over all lattice
    points of (C_hat(t1/T, t2/T) - t1*t2/T^2)."""
    rank_x = np.asarray(rank_x)
    rank_y = np.asarray(rank_y)
    t = rank_x.shape[0]
    scatter = np.zeros((t + 1, t + 1), dtype=np.int64)
    for rx, ry in zip(rank_x, rank_y):
        scatter[rx, ry] += 1
    counts = scatter.cumsum(axis=0).cumsum(axis=1)
    total = 0.0
    for t1 in range(1, t + 1):
        for t2 in range(1, t + 1):
            total += counts[t1, t2] / t - (t1 * t2) / (t * t)
    return total * 12.0 / (t * t - 1.0)


def prufer_decode(sequence, n: int):
    """Edges of the labelled tree encoded by a Prufer sequence."""
    degree = [1] * n
    for x in sequence:
        degree[x] += 1
    heap = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(heap)
    edges = []
    for x in sequence:
        leaf = heapq.heappop(heap)
        edges.append((min(leaf, x), max(leaf, x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(heap, x)
    u = heapq.heappop(heap)
    v = heapq.heappop(heap)
    edges.append((min(u, v), max(u, v)))
    return tuple(edges)


def all_spanning_trees(n: int):
    """Every spanning tree of the complete graph on n nodes (n^(n-2))."""
    for sequence in itertools.product(range(n), repeat=n - 2):
        yield prufer_decode(sequence, n)


def best_tree_weight(weights: np.ndarray) -> float:
    """Maximum total weight over all spanning trees, by enumeration."""
    return max(
        sum(weights[a, b] for a, b in tree)
        for tree in all_spanning_trees(weights.shape[0])
    )


def gaussian_spearman(theta: float) -> float:
    """Closed-form Spearman's rho of a bivariate Gaussian copula."""
    return (6.0 / math.pi) * math.asin(theta / 2.0)


def connected(edge_pairs, subset) -> bool:
    """Whether the tree edges restricted to ``subset`` connect it."""
    subset = set(subset)
    adjacency = {v: set() for v in subset}
    for a, b in edge_pairs:
        if a in subset and b in subset:
            adjacency[a].add(b)
            adjacency[b].add(a)
    seen = set()
    stack = [next(iter(subset))]
    while stack:
        v = stack.pop()
        if v not in seen:
            seen.add(v)
            stack.extend(adjacency[v] - seen)
    return seen == subset


def assert_valid_grids(cdf, mass) -> None:
    """Check the lattice-grid axioms: grounded, unit corner, coordinatewise
    monotone CDF; nonnegative cells summing to 1."""
    values = cdf.values
    n = values.ndim
    for axis in range(n):
        face = [slice(None)] * n
        face[axis] = 0
        assert np.all(values[tuple(face)] == 0.0), "cdf not grounded"
        assert np.all(np.diff(values, axis=axis) >= 0.0), "cdf not monotone"
    assert values[(-1,) * n] == 1.0, "cdf corner is not 1"
    assert np.all(mass.values >= 0.0), "negative cell mass"
    assert abs(mass.values.sum() - 1.0) <= 1e-12, "cell masses do not sum to 1"


def difference_binning_cases(
    package_mass_grid,
    rank_matrix_cls,
    dims,
    max_samples: int,
    rng,
    random_per_config: int,
    exhaustive_max_t: int = 0,
) -> int:
    """Cross-check CDF differencing against direct binning and against the
    package mass grid.  Exhausts all second-column permutations for
    bivariate cases up to ``exhaustive_max_t`` samples; uses seeded random
    rank matrices elsewhere.  Returns the number of cases checked."""
    checked = 0
    for n in dims:
        for t in range(2, max_samples + 1):
            configs = []
            if n == 2 and t <= exhaustive_max_t:
                first = np.arange(1, t + 1)
                for perm in itertools.permutations(range(1, t + 1)):
                    configs.append(np.column_stack([first, np.array(perm)]))
            else:
                for _ in range(random_per_config):
                    cols = [rng.permutation(t) + 1 for _ in range(n)]
                    configs.append(np.column_stack(cols))
            for ranks in configs:
                for order in range(1, t + 1):
                    by_difference = difference_masses(literal_cdf_counts(ranks, order))
                    by_binning = direct_bin_counts(ranks, order)
                    assert np.array_equal(by_difference, by_binning)
                    grid = package_mass_grid(rank_matrix_cls(ranks), order)
                    scaled = grid.values * t
                    assert np.allclose(scaled, by_binning, atol=1e-9)
                    assert np.array_equal(
                        np.rint(scaled).astype(np.int64), by_binning
                    )
                    checked += 1
    return checked
