"""Seeded clustering algorithms: K-Means, diagonal-covariance GMM-EM, spectral, SOM, SOM+K-Means.

Every clusterer is a pure function of (matrix, config): the same config and
seed reproduce the same labels bit for bit. Returned labels are relabeled to
first-seen canonical form with centroids permuted to match, and every cluster
id in [0, k) is guaranteed non-empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import as_matrix


@dataclass
class ClustererConfig:
    """Shared knob set; algorithm-specific fields are ignored by the others.

    max_iter of None means the per-algorithm default (100 for K-Means,
    200 for EM, `epochs` drives SOM training).
    """

    k: int
    seed: int = 0
    max_iter: int | None = None
    init_centroids: np.ndarray | None = None  # kmeans: explicit starting centroids
    var_floor: float = 1e-6  # em: minimum per-dimension variance
    tol: float = 1e-6  # em: log-likelihood gain threshold
    sigma: float | None = None  # spectral: affinity scale, None = median pairwise distance
    grid: tuple | None = None  # som/som2k grid shape, None = (1, k) / (5, 5)
    epochs: int = 500  # som training epochs
    lr_start: float = 0.5
    lr_end: float = 0.01
    radius_start: float | None = None  # None = max(grid) / 2
    radius_end: float = 0.5


@dataclass
class ClusteringResult:
    labels: np.ndarray
    centroids: np.ndarray
    objective: float
    seed: int
    iterations: int
    history: list = field(default_factory=list, repr=False)

    @property
    def k(self) -> int:
        return self.centroids.shape[0]


def _check_k(k: int, n: int):
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > n:
        raise ValueError(f"k={k} exceeds instance count n={n}")


def _canonical_result(labels, centroids, objective, seed, iterations, history):
    labels = np.asarray(labels, dtype=np.int64)
    k = centroids.shape[0]
    uniq, first = np.unique(labels, return_index=True)
    if len(uniq) != k:
        raise AssertionError("internal error: empty cluster survived to result assembly")
    old_order = uniq[np.argsort(first, kind="stable")]
    new_of_old = np.empty(k, dtype=np.int64)
    new_of_old[old_order] = np.arange(k)
    return ClusteringResult(
        labels=new_of_old[labels],
        centroids=np.asarray(centroids, dtype=float)[old_order].copy(),
        objective=float(objective),
        seed=int(seed),
        iterations=int(iterations),
        history=list(history),
    )


def _ensure_all_clusters(X: np.ndarray, labels: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Reassign one far instance to each empty cluster so every id in [0, k) is used."""
    labels = labels.copy()
    k = centers.shape[0]
    counts = np.bincount(labels, minlength=k)
    for j in np.flatnonzero(counts == 0):
        sizes = np.bincount(labels, minlength=k)
        movable = sizes[labels] > 1
        if not movable.any():
            continue
        own = ((X - centers[labels]) ** 2).sum(axis=1)
        own[~movable] = -1.0
        i = int(own.argmax())
        labels[i] = j
    return labels


def kmeans(m, cfg: ClustererConfig) -> ClusteringResult:
    """Lloyd iterations from k distinct rows sampled uniformly (no k-means++).

    Empty clusters are reseated on the point farthest from its assigned
    centroid. Stops when assignments no longer change or after max_iter
    (default 100). The recorded history is the SSE after each assignment.
    """
    X = as_matrix(m, "data")
    n, d = X.shape
    k = int(cfg.k)
    _check_k(k, n)
    rng = np.random.default_rng(cfg.seed)
    if cfg.init_centroids is not None:
        centers = np.asarray(cfg.init_centroids, dtype=float).copy()
        if centers.shape != (k, d):
            raise ValueError(f"init_centroids must have shape ({k}, {d}), got {centers.shape}")
    else:
        centers = X[rng.choice(n, size=k, replace=False)].copy()
    max_iter = cfg.max_iter if cfg.max_iter is not None else 100

    labels = None
    history: list = []
    sse = 0.0
    iterations = 0
    for iterations in range(1, max_iter + 1):
        d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new = d2.argmin(axis=1)
        counts = np.bincount(new, minlength=k)
        for j in np.flatnonzero(counts == 0):
            sizes = np.bincount(new, minlength=k)
            movable = sizes[new] > 1
            own = d2[np.arange(n), new].copy()
            own[~movable] = -1.0
            i = int(own.argmax())
            centers[j] = X[i]
            new[i] = j
        sse = float(((X - centers[new]) ** 2).sum())
        history.append(sse)
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for j in range(k):
            centers[j] = X[labels == j].mean(axis=0)
    return _canonical_result(labels, centers, sse, cfg.seed, iterations, history)


def em_gmm(m, cfg: ClustererConfig, return_responsibilities: bool = False):
    """EM for a k-component diagonal-covariance Gaussian mixture.

    Initialized from one K-Means run with the same seed; stops when the
    log-likelihood gain falls below tol or after max_iter (default 200).
    Labels are the argmax responsibilities, centroids the component means.
    """
    X = as_matrix(m, "data")
    n, d = X.shape
    k = int(cfg.k)
    _check_k(k, n)
    init = kmeans(X, ClustererConfig(k=k, seed=cfg.seed))
    means = init.centroids.copy()
    weights = np.bincount(init.labels, minlength=k) / n
    variances = np.empty((k, d))
    for j in range(k):
        variances[j] = X[init.labels == j].var(axis=0)
    variances = np.maximum(variances, cfg.var_floor)

    max_iter = cfg.max_iter if cfg.max_iter is not None else 200
    const = d * np.log(2.0 * np.pi)
    history: list = []
    ll = -np.inf
    resp = np.full((n, k), 1.0 / k)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        logdet = np.log(variances).sum(axis=1)
        quad = (((X[:, None, :] - means[None, :, :]) ** 2) / variances[None, :, :]).sum(axis=2)
        logp = np.log(weights)[None, :] - 0.5 * (const + logdet)[None, :] - 0.5 * quad
        mx = logp.max(axis=1, keepdims=True)
        lse = mx + np.log(np.exp(logp - mx).sum(axis=1, keepdims=True))
        new_ll = float(lse.sum())
        resp = np.exp(logp - lse)
        history.append(new_ll)
        improved = new_ll - ll
        ll = new_ll
        if iterations > 1 and improved < cfg.tol:
            break
        nk = np.maximum(resp.sum(axis=0), 1e-12)
        weights = nk / n
        means = (resp.T @ X) / nk[:, None]
        variances = (resp.T @ (X**2)) / nk[:, None] - means**2
        variances = np.maximum(variances, cfg.var_floor)

    labels = resp.argmax(axis=1)
    labels = _ensure_all_clusters(X, labels, means)
    result = _canonical_result(labels, means, ll, cfg.seed, iterations, history)
    if return_responsibilities:
        return result, resp
    return result


def _pairwise_sq_dists(X: np.ndarray) -> np.ndarray:
    sq = (X**2).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    return np.maximum(d2, 0.0)


def gaussian_affinity(m, sigma: float | None = None) -> np.ndarray:
    """exp(-||xi - xj||^2 / (2 sigma^2)) with zero diagonal; sigma defaults to the median pairwise distance."""
    X = as_matrix(m, "data")
    d2 = _pairwise_sq_dists(X)
    if sigma is None:
        iu = np.triu_indices(len(X), k=1)
        sigma = float(np.median(np.sqrt(d2[iu]))) if len(iu[0]) else 0.0
    if sigma <= 0:
        raise ValueError("degenerate affinity: non-positive scale (all points identical?)")
    A = np.exp(-d2 / (2.0 * sigma * sigma))
    np.fill_diagonal(A, 0.0)
    return A


def normalized_laplacian(affinity: np.ndarray) -> np.ndarray:
    """Symmetric normalized Laplacian I - D^{-1/2} A D^{-1/2}; eigenvalues lie in [0, 2]."""
    A = np.asarray(affinity, dtype=float)
    deg = A.sum(axis=1)
    if (deg <= 0).any():
        raise ValueError("degenerate affinity: isolated instance with zero degree")
    inv_sqrt = 1.0 / np.sqrt(deg)
    L = np.eye(len(A)) - inv_sqrt[:, None] * A * inv_sqrt[None, :]
    return (L + L.T) / 2.0


def spectral(m, cfg: ClustererConfig) -> ClusteringResult:
    """Spectral clustering on the symmetric normalized Laplacian.

    Embeds rows into the k leading eigenvectors, row-normalizes, and
    clusters the embedding with K-Means. Centroids are reported as cluster
    means in the original space.
    """
    X = as_matrix(m, "data")
    n = X.shape[0]
    k = int(cfg.k)
    _check_k(k, n)
    A = gaussian_affinity(X, cfg.sigma)
    L = normalized_laplacian(A)
    _, vecs = np.linalg.eigh(L)
    emb = vecs[:, :k].copy()
    norms = np.sqrt((emb**2).sum(axis=1))
    norms[norms == 0] = 1.0
    emb /= norms[:, None]
    inner = kmeans(emb, ClustererConfig(k=k, seed=cfg.seed))
    centroids = np.stack([X[inner.labels == j].mean(axis=0) for j in range(k)])
    return ClusteringResult(
        labels=inner.labels,
        centroids=centroids,
        objective=inner.objective,
        seed=cfg.seed,
        iterations=inner.iterations,
        history=inner.history,
    )


def _grid_coords(rows: int, cols: int) -> np.ndarray:
    return np.array([[r, c] for r in range(rows) for c in range(cols)], dtype=float)


def _train_som(X: np.ndarray, grid: tuple, cfg: ClustererConfig, rng) -> np.ndarray:
    rows, cols = grid
    nodes = rows * cols
    coords = _grid_coords(rows, cols)
    codebook = X[rng.choice(len(X), size=nodes, replace=False)].copy()
    grid_d2 = ((coords[:, None, :] - coords[None, :, :]) ** 2).sum(axis=2)
    r0 = cfg.radius_start if cfg.radius_start is not None else max(rows, cols) / 2.0
    r1 = cfg.radius_end
    epochs = cfg.epochs
    for epoch in range(epochs):
        frac = epoch / (epochs - 1) if epochs > 1 else 0.0
        lr = cfg.lr_start + (cfg.lr_end - cfg.lr_start) * frac
        radius = r0 + (r1 - r0) * frac
        gauss = np.exp(-grid_d2 / (2.0 * radius * radius))
        for i in rng.permutation(len(X)):
            x = X[i]
            bmu = int(((codebook - x) ** 2).sum(axis=1).argmin())
            codebook += (lr * gauss[bmu])[:, None] * (x - codebook)
    return codebook


def _bmu_labels(X: np.ndarray, codebook: np.ndarray) -> np.ndarray:
    d2 = ((X[:, None, :] - codebook[None, :, :]) ** 2).sum(axis=2)
    return d2.argmin(axis=1)


def som(m, cfg: ClustererConfig) -> ClusteringResult:
    """Kohonen training with one node per cluster; labels are best-matching nodes."""
    X = as_matrix(m, "data")
    n = X.shape[0]
    k = int(cfg.k)
    _check_k(k, n)
    grid = cfg.grid if cfg.grid is not None else (1, k)
    if grid[0] * grid[1] != k:
        raise ValueError(f"som needs exactly k={k} nodes, grid {grid} has {grid[0] * grid[1]}")
    rng = np.random.default_rng(cfg.seed)
    codebook = _train_som(X, grid, cfg, rng)
    labels = _bmu_labels(X, codebook)
    labels = _ensure_all_clusters(X, labels, codebook)
    sse = float(((X - codebook[labels]) ** 2).sum())
    return _canonical_result(labels, codebook, sse, cfg.seed, cfg.epochs, [sse])


def som2k(m, cfg: ClustererConfig) -> ClusteringResult:
    """Two-stage clustering: train a SOM codebook larger than k, then K-Means the codebook.

    Each instance inherits the cluster of its best-matching node; centroids
    are the means of the assigned instances.
    """
    X = as_matrix(m, "data")
    n = X.shape[0]
    k = int(cfg.k)
    _check_k(k, n)
    grid = cfg.grid if cfg.grid is not None else (5, 5)
    nodes = grid[0] * grid[1]
    if nodes < k:
        raise ValueError(f"grid {grid} has {nodes} nodes, fewer than k={k}")
    if nodes > n:
        raise ValueError(f"grid {grid} has {nodes} nodes, more than n={n} instances")
    rng = np.random.default_rng(cfg.seed)
    codebook = _train_som(X, grid, cfg, rng)
    node_labels = kmeans(codebook, ClustererConfig(k=k, seed=cfg.seed)).labels
    labels = node_labels[_bmu_labels(X, codebook)]
    provisional = np.stack(
        [X[labels == j].mean(axis=0) if (labels == j).any() else codebook[node_labels == j].mean(axis=0) for j in range(k)]
    )
    labels = _ensure_all_clusters(X, labels, provisional)
    centroids = np.stack([X[labels == j].mean(axis=0) for j in range(k)])
    sse = float(((X - centroids[labels]) ** 2).sum())
    return _canonical_result(labels, centroids, sse, cfg.seed, cfg.epochs, [sse])


CLUSTERERS = {
    "kmeans": kmeans,
    "em": em_gmm,
    "spectral": spectral,
    "som": som,
    "som2k": som2k,
}


def run_clusterer(name: str, m, cfg: ClustererConfig) -> ClusteringResult:
    if name not in CLUSTERERS:
        raise ValueError(f"unknown clusterer '{name}'; available: {', '.join(sorted(CLUSTERERS))}")
    return CLUSTERERS[name](m, cfg)
