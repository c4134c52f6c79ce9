"""Dense linear algebra helpers shared by the representation modules."""

from __future__ import annotations

import numpy as np

RANK_REL_TOL = 1e-7
NORM_TOL = 1e-12


def spectral_norm(matrix: np.ndarray, tol: float = NORM_TOL, max_iter: int = 20000,
                  seed: int = 0) -> float:
    """Largest singular value by power iteration on M^H M.

    Iterates until successive estimates differ by at most
    tol * max(estimate, 1).
    """
    m = np.asarray(matrix, dtype=complex)
    if m.size == 0 or not np.any(m):
        return 0.0
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(m.shape[1]) + 1j * rng.standard_normal(m.shape[1])
    x /= np.linalg.norm(x)
    estimate = 0.0
    for _ in range(max_iter):
        y = m @ x
        new = float(np.linalg.norm(y))
        if new == 0.0:
            return 0.0
        x = m.conj().T @ y
        nx = np.linalg.norm(x)
        if nx == 0.0:
            return new
        x /= nx
        if abs(new - estimate) <= tol * max(new, 1.0):
            return new
        estimate = new
    return estimate


def numeric_rank(matrix: np.ndarray, rel_tol: float = RANK_REL_TOL) -> int:
    """Number of singular values above rel_tol times the largest one."""
    m = np.asarray(matrix, dtype=complex)
    if m.size == 0:
        return 0
    singular = np.linalg.svd(m, compute_uv=False)
    top = singular[0] if singular.size else 0.0
    if top == 0.0:
        return 0
    return int(np.sum(singular > rel_tol * top))


def column_space_projector(columns: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the span of the given columns."""
    y = np.asarray(columns, dtype=complex)
    d = y.shape[0]
    if y.size == 0:
        return np.zeros((d, d), dtype=complex)
    basis, _ = np.linalg.qr(y)
    return basis @ basis.conj().T
