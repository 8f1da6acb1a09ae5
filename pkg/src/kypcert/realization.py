"""State-space realization arrays and the elementary operations on them.

A realization of an m x m rational function F with no pole at infinity is the
(n+m) x (n+m) block array ``[A B; C D]`` with ``F(z) = C (zI - A)^-1 B + D``.
``n = 0`` is fully supported and represents the constant function F(z) = D.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import sigma_min, spectral_norm
from .exceptions import (
    DimensionMismatch,
    PoleAt,
    SingularArray,
    SingularD,
    SingularT,
)

__all__ = [
    "Realization",
    "TransferSample",
    "evaluate",
    "is_minimal",
    "change_coordinates",
    "invert_array",
    "invert_function",
    "cascade",
]

#: relative sigma_min threshold below which zI - A (etc.) counts as singular
POLE_RTOL = 1e-12

#: rank tolerance for minimality tests, relative to the largest singular value
RANK_RTOL = 1e-8

#: condition-number cap for coordinate-change matrices
COND_MAX = 1e12


def _as_block(x, rows: int, cols: int, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim == 1:
        # accept a flat vector only when one target dimension is 1
        if rows == 1:
            arr = arr.reshape(1, -1)
        elif cols == 1:
            arr = arr.reshape(-1, 1)
    if arr.size == 0:
        arr = arr.reshape(rows, cols)
    if arr.shape != (rows, cols):
        raise DimensionMismatch(f"block {name} has shape {arr.shape}, expected {(rows, cols)}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"block {name} contains non-finite entries")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Realization:
    """Immutable state-space realization array [A B; C D].

    Parameters
    ----------
    n : int
        State dimension (>= 0).
    m : int
        Input/output dimension (>= 1).
    A, B, C, D : array_like
        Complex blocks of shapes (n,n), (n,m), (m,n), (m,m).
    """

    n: int
    m: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        n, m = int(self.n), int(self.m)
        if n < 0:
            raise DimensionMismatch("state dimension n must be nonnegative")
        if m < 1:
            raise DimensionMismatch("input/output dimension m must be positive")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "A", _as_block(self.A, n, n, "A"))
        object.__setattr__(self, "B", _as_block(self.B, n, m, "B"))
        object.__setattr__(self, "C", _as_block(self.C, m, n, "C"))
        object.__setattr__(self, "D", _as_block(self.D, m, m, "D"))

    @classmethod
    def from_array(cls, array, n: int, m: int) -> "Realization":
        """Split an (n+m) x (n+m) array into blocks."""
        arr = np.asarray(array, dtype=complex)
        if arr.shape != (n + m, n + m):
            raise DimensionMismatch(f"array has shape {arr.shape}, expected {(n + m, n + m)}")
        return cls(n=n, m=m, A=arr[:n, :n], B=arr[:n, n:], C=arr[n:, :n], D=arr[n:, n:])

    @classmethod
    def constant(cls, d) -> "Realization":
        """Realization of the constant function F(z) = D (n = 0)."""
        d = np.atleast_2d(np.asarray(d, dtype=complex))
        m = d.shape[0]
        return cls(n=0, m=m, A=np.zeros((0, 0)), B=np.zeros((0, m)), C=np.zeros((m, 0)), D=d)

    @property
    def array(self) -> np.ndarray:
        """The full (n+m) x (n+m) block array."""
        n, m = self.n, self.m
        out = np.zeros((n + m, n + m), dtype=complex)
        out[:n, :n] = self.A
        out[:n, n:] = self.B
        out[n:, :n] = self.C
        out[n:, n:] = self.D
        return out

    def poles(self) -> np.ndarray:
        """Eigenvalues of A (candidate poles of the transfer function)."""
        if self.n == 0:
            return np.zeros(0, dtype=complex)
        return np.linalg.eigvals(self.A)

    def __repr__(self):  # pragma: no cover - cosmetic
        return f"Realization(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class TransferSample:
    """A single evaluation F(z) of the transfer function."""

    z: complex
    value: np.ndarray


def evaluate(r: Realization, z: complex) -> TransferSample:
    """Evaluate F(z) = C (zI - A)^-1 B + D.

    Raises
    ------
    PoleAt
        If zI - A is singular to working precision
        (sigma_min < 1e-12 * ||zI - A||_2).
    """
    z = complex(z)
    if r.n == 0:
        return TransferSample(z=z, value=r.D.copy())
    zia = z * np.eye(r.n) - r.A
    if sigma_min(zia) < POLE_RTOL * max(spectral_norm(zia), 1e-300):
        raise PoleAt(z)
    value = r.C @ np.linalg.solve(zia, r.B) + r.D
    return TransferSample(z=z, value=value)


def is_minimal(r: Realization) -> tuple[bool, int, int]:
    """Test minimality via controllability/observability ranks.

    Returns
    -------
    (minimal, rank_ctrb, rank_obsv)
        Ranks of [B, AB, ..., A^(n-1) B] and its observability dual, computed
        with an SVD cutoff of 1e-8 times the largest singular value. The
        realization is minimal iff both ranks equal n; n = 0 is minimal.
    """
    n = r.n
    if n == 0:
        return True, 0, 0
    blocks = [r.B]
    obs = [r.C]
    for _ in range(n - 1):
        blocks.append(r.A @ blocks[-1])
        obs.append(obs[-1] @ r.A)
    ctrb = np.hstack(blocks)
    obsv = np.vstack(obs)

    def _rank(mat: np.ndarray) -> int:
        sv = np.linalg.svd(mat, compute_uv=False)
        if sv.size == 0 or sv[0] == 0.0:
            return 0
        return int(np.sum(sv > RANK_RTOL * sv[0]))

    rc, ro = _rank(ctrb), _rank(obsv)
    return (rc == n and ro == n), rc, ro


def change_coordinates(r: Realization, t) -> Realization:
    """Similarity transform: (T^-1 A T, T^-1 B, C T, D).

    Equivalent to diag(T^-1, I_m) @ [A B; C D] @ diag(T, I_m). The transfer
    function is invariant.

    Raises
    ------
    SingularT
        If T is singular or its condition number exceeds 1e12.
    """
    t = np.asarray(t, dtype=complex)
    if t.ndim == 0:
        t = t.reshape(1, 1)
    if t.shape != (r.n, r.n):
        raise DimensionMismatch(f"T has shape {t.shape}, expected {(r.n, r.n)}")
    if r.n == 0:
        return r
    sv = np.linalg.svd(t, compute_uv=False)
    if sv[-1] <= 0.0 or sv[0] / sv[-1] > COND_MAX:
        raise SingularT("coordinate change matrix is singular or too ill conditioned")
    a = np.linalg.solve(t, r.A @ t)
    b = np.linalg.solve(t, r.B)
    c = r.C @ t
    return Realization(n=r.n, m=r.m, A=a, B=b, C=c, D=r.D)


def invert_array(r: Realization) -> Realization:
    """Matrix inverse of the realization array: R_G with R_G @ R_F = I.

    This is inversion of the array viewed as a plain (n+m) x (n+m) matrix; it
    generally realizes a different rational function than the pointwise
    function inverse (see `invert_function`).
    """
    arr = r.array
    if sigma_min(arr) < POLE_RTOL * max(spectral_norm(arr), 1e-300):
        raise SingularArray("realization array is singular to working precision")
    return Realization.from_array(np.linalg.inv(arr), r.n, r.m)


def invert_function(r: Realization) -> Realization:
    """Realization of the pointwise inverse z -> F(z)^-1.

    Requires nonsingular D, so that the inverse has no pole at infinity and
    admits an array of the same shape. Returns
    (A - B D^-1 C, B D^-1, -D^-1 C, D^-1).
    """
    if sigma_min(r.D) < POLE_RTOL * max(spectral_norm(r.D), 1e-300):
        raise SingularD("feedthrough D is singular; function inverse is improper")
    dinv = np.linalg.inv(r.D)
    return Realization(
        n=r.n,
        m=r.m,
        A=r.A - r.B @ dinv @ r.C,
        B=r.B @ dinv,
        C=-dinv @ r.C,
        D=dinv,
    )


def cascade(r1: Realization, r2: Realization) -> Realization:
    """Series interconnection realizing the product F1(z) F2(z).

    State dimension is n1 + n2; both systems must share m.
    """
    if r1.m != r2.m:
        raise DimensionMismatch(f"m mismatch: {r1.m} vs {r2.m}")
    n1, n2, m = r1.n, r2.n, r1.m
    a = np.zeros((n1 + n2, n1 + n2), dtype=complex)
    a[:n1, :n1] = r1.A
    a[:n1, n1:] = r1.B @ r2.C
    a[n1:, n1:] = r2.A
    b = np.vstack([r1.B @ r2.D, r2.B])
    c = np.hstack([r1.C, r1.D @ r2.C])
    d = r1.D @ r2.D
    return Realization(n=n1 + n2, m=m, A=a, B=b, C=c, D=d)
