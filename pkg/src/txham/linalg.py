"""Small dense linear algebra with pinned conventions.

Thin wrappers over numpy that give the physics layers what raw LAPACK does
not: validated Hermitian input, a deterministic eigenvector gauge, and 3x3
congruence transforms for strain/stress tensors.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import NonHermitianError

HERMITICITY_RTOL = 1e-12
ROTATION_TOL = 1e-12


class EigenSystem(NamedTuple):
    """Ascending real eigenvalues with orthonormal column eigenvectors.

    ``vectors[:, k]`` belongs to ``values[k]``.  Each column is rephased so
    that its first component of magnitude above 1e-9 is real and positive,
    which pins the gauge of non-degenerate states.
    """

    values: np.ndarray
    vectors: np.ndarray


def eig_hermitian_4(m: np.ndarray) -> EigenSystem:
    """Diagonalize a Hermitian 4x4 matrix with a fixed phase convention.

    Raises NonHermitianError when max|M - M^dag| > 1e-12 * max|M|.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    scale = float(np.max(np.abs(m)))
    herm_defect = float(np.max(np.abs(m - m.conj().T)))
    if herm_defect > HERMITICITY_RTOL * max(scale, np.finfo(float).tiny):
        raise NonHermitianError(
            f"max|M - M^dag| = {herm_defect:.3e} exceeds "
            f"{HERMITICITY_RTOL:.0e} * max|M| = {HERMITICITY_RTOL * scale:.3e}"
        )
    values, vectors = np.linalg.eigh(m)
    vectors = np.array(vectors, dtype=complex)
    for k in range(4):
        col = vectors[:, k]
        lead = np.flatnonzero(np.abs(col) > 1e-9)[0]
        vectors[:, k] = col * (np.abs(col[lead]) / col[lead])
    return EigenSystem(values, vectors)


def congruence_transform(t: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Return R t R^T; preserves the spectrum of a symmetric tensor t."""
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=float)
    return r @ t @ r.T


def is_rotation(r: np.ndarray, tol: float = ROTATION_TOL) -> bool:
    """True when R^T R = I within tol and |det R| = 1 within tol."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        return False
    ortho = np.max(np.abs(r.T @ r - np.eye(3))) <= tol
    return bool(ortho and abs(abs(np.linalg.det(r)) - 1.0) <= tol)


def symmetry_defect(t: np.ndarray) -> float:
    """Largest absolute asymmetry max|t - t^T| of a 3x3 tensor."""
    t = np.asarray(t, dtype=float)
    return float(np.max(np.abs(t - t.T)))
