from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DimensionError, InvalidInputError

SYMMETRY_TOL = 1e-10


def _orient_columns(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive (lowest row index on ties)."""
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def eigh_ascending(S: np.ndarray, l: int) -> tuple[np.ndarray, np.ndarray]:
    """Return the l smallest eigenpairs of a symmetric matrix.

    Eigenvalues come back ascending; eigenvectors are the columns of a d x l
    orthonormal matrix, each oriented so its largest-magnitude entry is positive.
    Symmetry is checked to SYMMETRY_TOL relative to max(1, max|S|).
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {S.shape}")
    d = S.shape[0]
    if not 1 <= l <= d:
        raise DimensionError(f"cannot take {l} eigenpairs of a {d}x{d} matrix")
    scale = max(1.0, float(np.max(np.abs(S)))) if S.size else 1.0
    if np.max(np.abs(S - S.T)) > SYMMETRY_TOL * scale:
        raise InvalidInputError("matrix is not symmetric")

    eigenvalues, eigenvectors = scipy.linalg.eigh(0.5 * (S + S.T), subset_by_index=[0, l - 1])
    return eigenvalues, _orient_columns(eigenvectors)


def solve_regularized(A: np.ndarray, B: np.ndarray, eps: float) -> np.ndarray:
    """Solve X (A + eps I) = B for X, i.e. X = B (A + eps I)^{-1}.

    For symmetric PSD A this is the minimizer of
    tr(X A X^T) - 2 tr(B X^T) + eps ||X||_F^2, the ridge form of the centre
    updates; it stands in for every (P^T V V^T P)^{-1} so the updates stay
    defined when a weighted cluster is empty.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if eps <= 0:
        raise InvalidInputError(f"ridge eps must be positive, got {eps}")
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"A must be square, got shape {A.shape}")
    if B.ndim != 2 or B.shape[1] != A.shape[0]:
        raise DimensionError(f"B has shape {B.shape}, expected (*, {A.shape[0]})")

    regularized = A + eps * np.eye(A.shape[0])
    # (A + eps I) is symmetric, so X^T = (A + eps I)^{-1} B^T
    return scipy.linalg.solve(regularized, B.T, assume_a="sym").T
