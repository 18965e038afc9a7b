"""Pairwise dependence measures computed from ranks.

Spearman's rho is evaluated through the empirical copula lattice at order
T; the double sum over the lattice telescopes to an O(T) expression in the
rank products, so no grid is materialized.  Mutual information comes in
two flavours: a lattice plug-in over copula cell masses ("mi_cell") and a
kernel-margin variant ("mi_kde") that importance-weights a sample sum so
it targets the same copula-entropy integral.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, column_ranks
from .empirical import default_lattice_order

__all__ = [
    "MEASURES",
    "WeightMatrix",
    "KernelDensity",
    "spearman_rho",
    "mutual_info_cell",
    "mutual_info_kde",
    "weight_matrix",
]

MEASURES = ("rho_abs", "mi_cell", "mi_kde")


def _check_rank_column(r: np.ndarray, name: str) -> np.ndarray:
    r = np.asarray(r)
    if r.ndim != 1:
        raise ValueError(f"{name} must be 1-D")
    t = r.shape[0]
    if t < 2:
        raise ValueError(f"{name} needs at least 2 entries, got {t}")
    if not np.array_equal(np.sort(r), np.arange(1, t + 1)):
        raise ValueError(f"{name} is not a permutation of 1..{t}")
    return r.astype(np.int64)


def spearman_rho(rank_x, rank_y) -> float:
    """Spearman's rho of two rank columns, in [-1, 1].

    Equals (12 / (T^2 - 1)) * sum over the order-T lattice of
    (C_hat(t1/T, t2/T) - t1*t2/T^2); the lattice sum collapses to
    sum_t r_x[t] * r_y[t] because each copula value counts rank pairs
    below a lattice point, so the evaluation is O(T) after ranking.
    """
    rx = _check_rank_column(rank_x, "rank_x")
    ry = _check_rank_column(rank_y, "rank_y")
    if rx.shape != ry.shape:
        raise ValueError(
            f"length mismatch: {rx.shape[0]} vs {ry.shape[0]}"
        )
    t = rx.shape[0]
    s = float(np.dot(rx.astype(float), ry.astype(float)))
    return (s - t * (t + 1.0) ** 2 / 4.0) * 12.0 / (t * (t * t - 1.0))


def _mass_counts(rx: np.ndarray, ry: np.ndarray, order: int) -> np.ndarray:
    # cell index ceil(r*K/T) in exact integer arithmetic
    t = rx.shape[0]
    cx = -((-rx * order) // t)
    cy = -((-ry * order) // t)
    counts = np.zeros((order, order), dtype=np.int64)
    np.add.at(counts, (cx - 1, cy - 1), 1)
    return counts


def mutual_info_cell(rank_x, rank_y, lattice_order: int) -> float:
    """Plug-in mutual information (nats) from the bivariate cell masses.

    Builds the K x K copula mass grid of the rank pair and returns
    sum_ij m_ij * ln(m_ij / (m_i. * m_.j)) with 0 ln 0 := 0, where the
    margins m_i., m_.j are the grid's row and column sums.  Nonnegative
    (it is a KL divergence) and symmetric in its arguments.

    Note: the estimator carries an upward bias of roughly
    (K-1)^2 / (2T) nats at independence; keep K well below sqrt(T)
    when absolute values matter (see ``default_lattice_order``).
    """
    rx = _check_rank_column(rank_x, "rank_x")
    ry = _check_rank_column(rank_y, "rank_y")
    if rx.shape != ry.shape:
        raise ValueError(f"length mismatch: {rx.shape[0]} vs {ry.shape[0]}")
    t = rx.shape[0]
    if not 2 <= lattice_order <= t:
        raise ValueError(
            f"lattice order must be in [2, {t}], got {lattice_order}"
        )
    m = _mass_counts(rx, ry, lattice_order) / t
    row = m.sum(axis=1)
    col = m.sum(axis=0)
    occupied = m > 0
    expected = np.outer(row, col)
    return float(np.sum(m[occupied] * np.log(m[occupied] / expected[occupied])))


@dataclass(frozen=True)
class KernelDensity:
    """Gaussian kernel density estimate of one variable.

    Attributes
    ----------
    samples : ndarray, shape (T,)
    bandwidth : float, > 0
    """

    samples: np.ndarray
    bandwidth: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float).ravel()
        if samples.size == 0:
            raise ValueError("need at least one sample")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if not self.bandwidth > 0:
            raise ValueError(f"bandwidth must be > 0, got {self.bandwidth}")
        object.__setattr__(self, "samples", samples)

    @classmethod
    def fit(cls, samples, bandwidth: float | None = None) -> "KernelDensity":
        """Build an estimate, defaulting to the Silverman bandwidth
        1.06 * std * T^(-1/5).

        Raises
        ------
        ValueError
            If the default bandwidth is degenerate (fewer than 2 samples
            or zero variance).
        """
        samples = np.asarray(samples, dtype=float).ravel()
        if bandwidth is None:
            if samples.size < 2:
                raise ValueError(
                    "default bandwidth needs at least 2 samples"
                )
            sigma = float(np.std(samples, ddof=1))
            if sigma == 0.0:
                raise ValueError(
                    "degenerate column: zero variance gives zero bandwidth"
                )
            bandwidth = 1.06 * sigma * samples.size ** (-0.2)
        return cls(samples=samples, bandwidth=float(bandwidth))

    def density(self, x):
        """Evaluate the density at a scalar or array of points."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        points = np.atleast_1d(x)
        t = self.samples.size
        h = self.bandwidth
        out = np.empty(points.shape[0], dtype=float)
        norm = 1.0 / (t * h * np.sqrt(2.0 * np.pi))
        # chunked to bound the (points x samples) intermediate
        step = max(1, 2**22 // max(t, 1))
        for start in range(0, points.shape[0], step):
            block = points[start : start + step, np.newaxis]
            z = (block - self.samples[np.newaxis, :]) / h
            out[start : start + step] = norm * np.exp(-0.5 * z * z).sum(axis=1)
        return float(out[0]) if scalar else out


def mutual_info_kde(
    x,
    y,
    lattice_order: int,
    mode: str = "weighted",
    tie_break: str = "random",
    tie_seed: int = 0,
) -> float:
    """Mutual information (nats) from kernel margins and copula cells.

    Each sample contributes p_x(x_t) * p_y(y_t) * c_t * ln(c_t), where c_t
    is the sample's copula cell density (cell mass times K^2) on the
    order-K lattice and p_x, p_y are Gaussian kernel margin densities.

    mode="weighted" (default) divides each contribution by the estimated
    joint density p_x * p_y * c_t and averages over samples, so the sum is
    an importance-weighted estimate of the copula-entropy integral
    ``int c ln c du`` (empty cells contribute 0).  mode="raw" returns the
    plain unnormalized sum of the contributions; it is not a consistent
    estimator and is kept for diagnostics only.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    t = x.shape[0]
    if t < 10:
        raise ValueError(f"need at least 10 samples, got {t}")
    if not 2 <= lattice_order <= t:
        raise ValueError(f"lattice order must be in [2, {t}], got {lattice_order}")
    if mode not in ("weighted", "raw"):
        raise ValueError(f"unknown mode {mode!r}")
    ranks = column_ranks(np.column_stack([x, y]), tie_break, tie_seed)
    return _mutual_info_kde_ranked(x, y, ranks[:, 0], ranks[:, 1], lattice_order, mode)


def _mutual_info_kde_ranked(x, y, rx, ry, order: int, mode: str,
                            px=None, py=None) -> float:
    t = x.shape[0]
    counts = _mass_counts(rx, ry, order)
    cx = -((-rx * order) // t)
    cy = -((-ry * order) // t)
    cell_density = counts[cx - 1, cy - 1] * (order * order / t)
    if px is None:
        px = KernelDensity.fit(x).density(x)
    if py is None:
        py = KernelDensity.fit(y).density(y)
    occupied = cell_density > 0  # a sample's own cell is never empty
    contrib = np.zeros(t)
    c = cell_density[occupied]
    contrib[occupied] = px[occupied] * py[occupied] * c * np.log(c)
    if mode == "raw":
        return float(np.sum(contrib))
    weights = np.zeros(t)
    weights[occupied] = 1.0 / (px[occupied] * py[occupied] * c)
    return float(np.mean(contrib * weights))


@dataclass(frozen=True)
class WeightMatrix:
    """Symmetric N x N matrix of pairwise dependence weights.

    ``values`` holds the spanning weights (|rho| or MI, all >= 0, zero
    diagonal); ``signed`` keeps the signed rho for reporting and equals
    ``values`` for the MI measures.
    """

    names: tuple[str, ...]
    measure: str
    lattice_order: int
    values: np.ndarray
    signed: np.ndarray

    def __post_init__(self):
        n = len(self.names)
        if self.measure not in MEASURES:
            raise ValueError(f"unknown measure {self.measure!r}")
        values = np.asarray(self.values, dtype=float)
        signed = np.asarray(self.signed, dtype=float)
        if values.shape != (n, n) or signed.shape != (n, n):
            raise ValueError(f"weight matrices must have shape {(n, n)}")
        if np.abs(values - values.T).max(initial=0.0) > 1e-12:
            raise ValueError("weight matrix must be symmetric")
        if np.any(np.diag(values) != 0.0):
            raise ValueError("diagonal entries must be 0")
        off = ~np.eye(n, dtype=bool)
        if np.any(values[off] < 0.0):
            raise ValueError("off-diagonal weights must be nonnegative")
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "signed", signed)

    @property
    def dim(self) -> int:
        return len(self.names)


def weight_matrix(
    data: Dataset,
    measure: str = "mi_cell",
    lattice_order: int = 0,
    tie_break: str = "random",
    tie_seed: int = 0,
) -> WeightMatrix:
    """Pairwise dependence weights for every unordered column pair.

    Parameters
    ----------
    data : Dataset
    measure : {"rho_abs", "mi_cell", "mi_kde"}
        rho_abs stores |rho| in ``values`` and the signed rho in
        ``signed``; both MI measures store the MI in both.
    lattice_order : int
        Grid resolution for the MI measures; 0 picks
        ``default_lattice_order(T)``.  Ignored by rho_abs (rho always
        uses the full order-T lattice).
    tie_break, tie_seed
        Rank tie handling, see :func:`coptree.dataset.column_ranks`.
        Randomized tie order is the default: row-stable ordinal ranks let
        two heavily tied columns inherit spurious dependence from shared
        row ordering.

    The result is deterministic for fixed inputs and independent of the
    order pairs are evaluated in.
    """
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}")
    t, n = data.sample_count, data.dim
    if lattice_order == 0:
        lattice_order = default_lattice_order(t)
    if measure in ("mi_cell", "mi_kde") and not 2 <= lattice_order <= t:
        raise ValueError(f"lattice order must be in [2, {t}], got {lattice_order}")
    ranks = column_ranks(data.values, tie_break, tie_seed)
    densities = None
    if measure == "mi_kde":
        # each column's kernel density at its own samples, fitted once
        densities = [
            KernelDensity.fit(data.values[:, j]).density(data.values[:, j])
            for j in range(n)
        ]
    values = np.zeros((n, n))
    signed = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            if measure == "rho_abs":
                rho = spearman_rho(ranks[:, i], ranks[:, j])
                w, s = abs(rho), rho
            elif measure == "mi_cell":
                w = s = mutual_info_cell(ranks[:, i], ranks[:, j], lattice_order)
            else:
                w = s = _mutual_info_kde_ranked(
                    data.values[:, i],
                    data.values[:, j],
                    ranks[:, i],
                    ranks[:, j],
                    lattice_order,
                    "weighted",
                    px=densities[i],
                    py=densities[j],
                )
            values[i, j] = values[j, i] = w
            signed[i, j] = signed[j, i] = s
    return WeightMatrix(
        names=data.columns,
        measure=measure,
        lattice_order=lattice_order,
        values=values,
        signed=signed,
    )
