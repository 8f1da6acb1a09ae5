"""Small dense linear-algebra helpers shared across modules."""

from __future__ import annotations

import numpy as np

__all__ = [
    "herm",
    "is_hermitian",
    "min_eig",
    "max_eig",
    "spectral_norm",
    "sigma_min",
    "eig_clip",
    "hermitian_basis",
    "vec_hermitian",
    "unvec_hermitian",
]


def herm(x: np.ndarray) -> np.ndarray:
    """Hermitian part (X + X*)/2, used to kill round-off asymmetry."""
    return (x + x.conj().T) / 2


def is_hermitian(x: np.ndarray, rtol: float = 1e-12) -> bool:
    if x.shape[0] != x.shape[1]:
        return False
    scale = max(1.0, float(np.abs(x).max())) if x.size else 1.0
    return bool(np.abs(x - x.conj().T).max(initial=0.0) <= rtol * scale)


def min_eig(x: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix; +inf for the empty matrix."""
    if x.size == 0:
        return np.inf
    return float(np.linalg.eigvalsh(herm(x))[0])


def max_eig(x: np.ndarray) -> float:
    if x.size == 0:
        return -np.inf
    return float(np.linalg.eigvalsh(herm(x))[-1])


def spectral_norm(x: np.ndarray) -> float:
    if x.size == 0:
        return 0.0
    return float(np.linalg.norm(x, 2))


def sigma_min(x: np.ndarray) -> float:
    """Smallest singular value; +inf for an empty matrix (vacuously invertible)."""
    if x.size == 0:
        return np.inf
    return float(np.linalg.svd(x, compute_uv=False)[-1])


def eig_clip(x: np.ndarray, floor: float) -> np.ndarray:
    """Project a Hermitian matrix onto {X : X >= floor*I} by eigenvalue clipping."""
    if x.size == 0:
        return x
    w, v = np.linalg.eigh(herm(x))
    w = np.maximum(w, floor)
    return herm((v * w) @ v.conj().T)


def hermitian_basis(n: int) -> list[np.ndarray]:
    """Orthonormal basis of the real vector space of n x n Hermitian matrices.

    Orthonormal under <X, Y> = Re tr(X* Y); dimension n^2.
    """
    basis: list[np.ndarray] = []
    s = 1.0 / np.sqrt(2.0)
    for i in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = s
            e[j, i] = s
            basis.append(e)
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1j * s
            e[j, i] = -1j * s
            basis.append(e)
    return basis


def vec_hermitian(x: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    """Real coordinates of a Hermitian matrix in an orthonormal basis."""
    return np.array([np.real(np.vdot(e, x)) for e in basis])


def unvec_hermitian(coords: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    n = basis[0].shape[0] if basis else 0
    out = np.zeros((n, n), dtype=complex)
    for c, e in zip(coords, basis):
        out += c * e
    return out
