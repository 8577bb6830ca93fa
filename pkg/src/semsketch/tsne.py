"""Exact t-SNE for small point sets.

The concept count m is at most a few hundred, so everything here is the
plain O(m^2) algorithm: Gaussian input affinities calibrated per row by
bisection to a target perplexity, a Student-t low-dimensional kernel, and
gradient descent on KL(P || Q) with momentum and early exaggeration.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

_LN2 = float(np.log(2.0))


@dataclass(frozen=True)
class TsneParams:
    """Optimizer settings; the defaults are the method's standard values."""

    perplexity: float = 30.0
    iterations: int = 1000
    learning_rate: float = 200.0
    momentum: float = 0.5
    final_momentum: float = 0.8
    momentum_switch_iter: int = 250
    early_exaggeration_factor: float = 12.0
    early_exaggeration_iters: int = 250
    seed: int = 0

    def __post_init__(self) -> None:
        if self.perplexity <= 0:
            raise ValueError(f"perplexity must be > 0, got {self.perplexity}")
        if self.iterations < self.early_exaggeration_iters:
            raise ValueError(
                f"iterations ({self.iterations}) must be >= early_exaggeration_iters "
                f"({self.early_exaggeration_iters})"
            )
        if self.learning_rate <= 0:
            raise ValueError(f"learning rate must be > 0, got {self.learning_rate}")

    def capped(self, m: int) -> "TsneParams":
        """Cap perplexity at (m - 1) / 3, the usual validity bound for m points."""
        limit = (m - 1) / 3.0
        if self.perplexity > limit:
            return replace(self, perplexity=limit)
        return self


def pairwise_sq_dists(points: np.ndarray) -> np.ndarray:
    """Squared Euclidean distance matrix with an exact zero diagonal."""
    points = np.asarray(points, dtype=np.float64)
    sq = np.sum(points**2, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (points @ points.T)
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, 0.0)
    return d2


def _row_entropy_bits(shifted_sq_dists: np.ndarray, beta: float) -> tuple[float, np.ndarray]:
    """Entropy (bits) and probabilities of one row's conditional Gaussian."""
    w = np.exp(-beta * shifted_sq_dists)
    z = w.sum()
    p = w / z
    # H = log z + beta * E[d]  (nats), computed without logs of tiny weights
    h_nats = float(np.log(z) + beta * np.dot(p, shifted_sq_dists))
    return h_nats / _LN2, p


def conditional_affinities(
    points: np.ndarray,
    perplexity: float,
    *,
    entropy_tol: float = 1e-6,
    max_iter: int = 64,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-point conditional distributions P(j|i) at the target perplexity.

    Each row's Gaussian bandwidth is found by bisection so that the row
    entropy equals log2(perplexity) to within ``entropy_tol`` bits. Returns
    the (m, m) conditional matrix (zero diagonal, rows summing to 1) and the
    per-row precisions beta = 1 / (2 sigma^2).

    Raises ValueError if a row cannot reach the target within ``max_iter``
    steps, which happens for degenerate inputs (duplicate points, or a
    perplexity not attainable for m points).
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] < 2:
        raise ValueError(f"need at least 2 points, got shape {points.shape}")
    if not np.all(np.isfinite(points)):
        raise ValueError("points contain non-finite values")
    if perplexity <= 0:
        raise ValueError(f"perplexity must be > 0, got {perplexity}")

    m = points.shape[0]
    target = float(np.log2(perplexity))
    d2 = pairwise_sq_dists(points)
    mask = ~np.eye(m, dtype=bool)
    p_cond = np.zeros((m, m), dtype=np.float64)
    betas = np.empty(m, dtype=np.float64)

    for i in range(m):
        row = d2[i][mask[i]]
        shifted = row - row.min()
        beta, lo, hi = 1.0, 0.0, np.inf
        entropy, p = _row_entropy_bits(shifted, beta)
        for _ in range(max_iter):
            if abs(entropy - target) <= entropy_tol:
                break
            if entropy > target:
                lo = beta
                beta = beta * 2.0 if not np.isfinite(hi) else 0.5 * (lo + hi)
            else:
                hi = beta
                beta = beta / 2.0 if lo == 0.0 else 0.5 * (lo + hi)
            entropy, p = _row_entropy_bits(shifted, beta)
        else:
            raise ValueError(
                f"perplexity bisection failed for point {i} "
                f"(entropy {entropy:.6f} vs target {target:.6f} bits); "
                "input points are degenerate (duplicates) or the perplexity "
                "is not attainable"
            )
        p_cond[i][mask[i]] = p
        betas[i] = beta

    return p_cond, betas


def compute_affinities(points: np.ndarray, perplexity: float) -> np.ndarray:
    """Symmetrized joint affinities P = (P(j|i) + P(i|j)) / 2m.

    The result is exactly symmetric, has a zero diagonal, non-negative
    entries, and sums to 1 (up to float rounding).
    """
    p_cond, _ = conditional_affinities(points, perplexity)
    return (p_cond + p_cond.T) / (2.0 * p_cond.shape[0])


def _student_t_weights(embedded: np.ndarray) -> np.ndarray:
    """Unnormalized Student-t kernel weights w_ij = 1 / (1 + |y_i - y_j|^2)."""
    w = 1.0 / (1.0 + pairwise_sq_dists(embedded))
    np.fill_diagonal(w, 0.0)
    return w


def kl_divergence(affinities: np.ndarray, embedded: np.ndarray) -> float:
    """KL(P || Q) in nats for the Student-t kernel Q of the embedding."""
    p = np.asarray(affinities, dtype=np.float64)
    w = _student_t_weights(np.asarray(embedded, dtype=np.float64))
    q = w / w.sum()
    nonzero = p > 0.0
    return float(np.sum(p[nonzero] * np.log(p[nonzero] / q[nonzero])))


def tsne_gradient(affinities: np.ndarray, embedded: np.ndarray) -> np.ndarray:
    """Gradient of KL(P || Q) with respect to the embedded coordinates.

    dC/dy_i = 4 * sum_j (p_ij - q_ij) * w_ij * (y_i - y_j)
    """
    p = np.asarray(affinities, dtype=np.float64)
    y = np.asarray(embedded, dtype=np.float64)
    if p.shape[0] != p.shape[1] or p.shape[0] != y.shape[0]:
        raise ValueError(f"shape mismatch: P {p.shape} vs Y {y.shape}")
    if not np.all(np.isfinite(y)):
        raise ValueError("embedded coordinates contain non-finite values")
    w = _student_t_weights(y)
    q = w / w.sum()
    c = (p - q) * w
    return 4.0 * (c.sum(axis=1)[:, None] * y - c @ y)


def tsne_optimize(affinities: np.ndarray, d: int, params: TsneParams) -> np.ndarray:
    """Run momentum gradient descent from a seeded Gaussian init.

    Deterministic for fixed (affinities, d, params). Early iterations use
    exaggerated affinities (factor and duration from ``params``); momentum
    switches from its initial to its final value at ``momentum_switch_iter``.
    """
    p = np.asarray(affinities, dtype=np.float64)
    if d not in (2, 3):
        raise ValueError(f"target dimensionality must be 2 or 3, got {d}")
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValueError(f"affinity matrix must be square, got {p.shape}")

    m = p.shape[0]
    rng = np.random.default_rng(params.seed)
    y = rng.standard_normal((m, d)) * 1e-2  # N(0, 1e-4 I)
    velocity = np.zeros_like(y)
    p_early = p * params.early_exaggeration_factor

    for iteration in range(params.iterations):
        p_eff = p_early if iteration < params.early_exaggeration_iters else p
        momentum = (
            params.momentum if iteration < params.momentum_switch_iter else params.final_momentum
        )
        grad = tsne_gradient(p_eff, y)
        velocity = momentum * velocity - params.learning_rate * grad
        y = y + velocity
        y -= y.mean(axis=0)
        if not np.all(np.isfinite(y)):
            raise ValueError(f"optimization diverged to non-finite values at iteration {iteration}")
    return y
