"""Dense vector and matrix primitives: distances, line projections, min-max scaling, PCA."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def as_matrix(values, name: str = "matrix") -> np.ndarray:
    """Validate and return a 2-D float array with at least one row/column and finite entries."""
    m = np.asarray(values, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"{name}: expected a 2-D array, got shape {m.shape}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"{name}: empty matrix with shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError(f"{name}: non-finite values present")
    return m


def as_point(values, name: str = "point") -> np.ndarray:
    p = np.asarray(values, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError(f"{name}: expected a non-empty 1-D coordinate array, got shape {p.shape}")
    if not np.isfinite(p).all():
        raise ValueError(f"{name}: non-finite values present")
    return p


def euclidean_distance(a, b) -> float:
    """L2 distance between two points of equal dimension."""
    a = as_point(a, "a")
    b = as_point(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(((a - b) ** 2).sum()))


def project_onto_line(x, line_from, line_to) -> np.ndarray:
    """Orthogonal projection of x onto the infinite line through line_from and line_to.

    The residual x - Z is perpendicular to the line direction.
    """
    x = as_point(x, "x")
    a = as_point(line_from, "line_from")
    b = as_point(line_to, "line_to")
    if not (x.shape == a.shape == b.shape):
        raise ValueError("dimension mismatch between point and line endpoints")
    direction = b - a
    denom = float(direction @ direction)
    if denom == 0.0:
        raise ValueError("degenerate direction: line endpoints coincide")
    t = float((x - a) @ direction) / denom
    return a + t * direction


def minmax_normalize(m) -> np.ndarray:
    """Map each column independently onto [0, 1]; constant columns map to 0."""
    m = as_matrix(m)
    lo = m.min(axis=0)
    hi = m.max(axis=0)
    span = hi - lo
    out = np.zeros_like(m)
    keep = span > 0
    out[:, keep] = (m[:, keep] - lo[keep]) / span[keep]
    return out


def concat_features(a, b) -> np.ndarray:
    """Column-wise concatenation of two row-aligned matrices (zero-column inputs allowed)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("concat_features expects 2-D arrays")
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row-count mismatch: {a.shape[0]} vs {b.shape[0]}")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise ValueError("non-finite values present")
    return np.concatenate([a, b], axis=1)


def jacobi_eigh(sym, tol: float = 1e-12, max_sweeps: int = 100):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps stop when the off-diagonal Frobenius norm drops below tol, when a
    full sweep performs no rotation (machine floor), or after max_sweeps.
    Returns eigenvalues in nonincreasing order and eigenvectors as columns.
    """
    A = np.array(sym, dtype=float)
    n = A.shape[0]
    if A.ndim != 2 or A.shape != (n, n):
        raise ValueError("jacobi_eigh: matrix must be square")
    V = np.eye(n)
    off_diag = np.empty_like(A)
    for _ in range(max_sweeps):
        # summed directly over off-diagonal entries; subtracting diagonal mass
        # from the total cancels catastrophically near convergence
        np.copyto(off_diag, A)
        np.fill_diagonal(off_diag, 0.0)
        off = float(np.sqrt((off_diag**2).sum()))
        if off < tol:
            break
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                # below the rotation-worthy floor: the Givens angle would be pure round-off
                if abs(apq) <= 1e-15 * (abs(A[p, p]) + abs(A[q, q])) or apq == 0.0:
                    continue
                rotated = True
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                sign = 1.0 if theta >= 0 else -1.0
                t = sign / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = A[q, p] = 0.0
                vec_p = V[:, p].copy()
                vec_q = V[:, q].copy()
                V[:, p] = c * vec_p - s * vec_q
                V[:, q] = s * vec_p + c * vec_q
        if not rotated:
            break
    w = np.diag(A).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


@dataclass
class PcaModel:
    """Fitted principal axes: per-column mean, unit components (rows), eigenvalues."""

    mean: np.ndarray
    components: np.ndarray
    eigenvalues: np.ndarray

    @property
    def n_components(self) -> int:
        return self.components.shape[0]


def _fix_signs(components: np.ndarray) -> np.ndarray:
    # Deterministic orientation: largest-magnitude coordinate made positive.
    out = components.copy()
    for i in range(out.shape[0]):
        j = int(np.argmax(np.abs(out[i])))
        if out[i, j] < 0:
            out[i] = -out[i]
    return out


def _orthonormal_fill(rows: list, count: int, dim: int) -> list:
    # Deterministically extend a partial orthonormal set using standard basis vectors.
    for e in range(dim):
        if len(rows) >= count:
            break
        v = np.zeros(dim)
        v[e] = 1.0
        for r in rows:
            v = v - (v @ r) * r
        norm = float(np.sqrt(v @ v))
        if norm > 1e-8:
            rows.append(v / norm)
    return rows


def pca_fit(m, n_components: int, method: str = "auto") -> PcaModel:
    """Fit PCA on the column-centered data via a Jacobi eigensolve of the sample covariance.

    When n < d (method="auto" or "dual") the eigenproblem is solved in the
    n x n Gram space and eigenvectors are mapped back, which keeps the solve
    small for wide matrices.
    """
    X = as_matrix(m)
    n, d = X.shape
    if not 1 <= n_components <= min(n, d):
        raise ValueError(f"n_components={n_components} outside [1, {min(n, d)}]")
    if method not in ("auto", "direct", "dual"):
        raise ValueError(f"unknown method '{method}'")
    mean = X.mean(axis=0)
    centered = X - mean
    denom = n - 1 if n > 1 else 1
    if method == "auto":
        method = "dual" if n < d else "direct"

    if method == "direct":
        cov = centered.T @ centered / denom
        w, V = jacobi_eigh(cov)
        eigenvalues = np.maximum(w[:n_components], 0.0)
        components = V[:, :n_components].T.copy()
    else:
        gram = centered @ centered.T / denom
        w, U = jacobi_eigh(gram)
        w = np.maximum(w, 0.0)
        scale = max(float(w[0]) if len(w) else 0.0, 1e-30)
        rows: list = []
        eigenvalues = np.zeros(n_components)
        for j in range(n_components):
            if j < len(w) and w[j] > 1e-12 * scale:
                v = centered.T @ U[:, j]
                norm = float(np.sqrt(v @ v))
                if norm > 0:
                    rows.append(v / norm)
                    eigenvalues[j] = w[j]
                    continue
            break
        rows = _orthonormal_fill(rows, n_components, d)
        components = np.stack(rows[:n_components])

    return PcaModel(mean=mean, components=_fix_signs(components), eigenvalues=eigenvalues)


def pca_transform(model: PcaModel, m) -> np.ndarray:
    """Project rows onto the fitted components after removing the fitted mean."""
    X = as_matrix(m)
    if X.shape[1] != model.mean.shape[0]:
        raise ValueError(f"dimension mismatch: data has {X.shape[1]} columns, model expects {model.mean.shape[0]}")
    return (X - model.mean) @ model.components.T
