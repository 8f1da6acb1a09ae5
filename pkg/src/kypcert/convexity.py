"""Matrix-convex combinations of realization arrays.

Combining realizations blockwise through a two-tier isometry family (one tier
acting on the state blocks, one on the io blocks) preserves balanced KYP
certificates: if every input satisfies the balanced QMI, so does the
combination. The combined realization need not be minimal even when every
input is.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import spectral_norm
from .cones import random_isometry_tuple
from .exceptions import DimensionMismatch, InputNotCertified, NotAnIsometryFamily
from .qmi import Certificate, NotFound, as_tag, balance, solve_p, verify_kyp
from .realization import Realization

__all__ = [
    "IsometryFamily",
    "PreservationResult",
    "validate_isometry",
    "combine_realizations",
    "verify_preservation",
    "random_isometry_family",
]

#: maximum Gram-sum defect per tier
TIER_TOL = 1e-8


@dataclass(frozen=True)
class IsometryFamily:
    """Block-diagonal tiers (Y_{j,n}, Y_{j,m}) with each tier's Gram sum = I."""

    state_blocks: tuple[np.ndarray, ...]
    io_blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        state = tuple(np.asarray(b, dtype=complex) for b in self.state_blocks)
        io = tuple(np.asarray(b, dtype=complex) for b in self.io_blocks)
        if len(state) != len(io) or not state:
            raise DimensionMismatch("state and io tiers must have the same nonzero length")
        n = state[0].shape[0]
        m = io[0].shape[0]
        for b in state:
            if b.shape != (n, n):
                raise DimensionMismatch("state blocks must all be n x n")
        for b in io:
            if b.shape != (m, m):
                raise DimensionMismatch("io blocks must all be m x m")
        freeze = lambda b: (b.setflags(write=False), b)[1]  # noqa: E731
        object.__setattr__(self, "state_blocks", tuple(freeze(b.copy()) for b in state))
        object.__setattr__(self, "io_blocks", tuple(freeze(b.copy()) for b in io))

    @property
    def k(self) -> int:
        return len(self.state_blocks)

    @property
    def n(self) -> int:
        return self.state_blocks[0].shape[0]

    @property
    def m(self) -> int:
        return self.io_blocks[0].shape[0]

    def full_blocks(self) -> list[np.ndarray]:
        """The k block-diagonal (n+m) matrices diag(Y_{j,n}, Y_{j,m})."""
        out = []
        for yn, ym in zip(self.state_blocks, self.io_blocks):
            y = np.zeros((self.n + self.m, self.n + self.m), dtype=complex)
            y[: self.n, : self.n] = yn
            y[self.n :, self.n :] = ym
            out.append(y)
        return out


def validate_isometry(fam: IsometryFamily) -> tuple[bool, float, float]:
    """Gram-sum defects of the two tiers; valid iff both are <= 1e-8."""
    gram_n = sum(b.conj().T @ b for b in fam.state_blocks)
    gram_m = sum(b.conj().T @ b for b in fam.io_blocks)
    defect_n = spectral_norm(gram_n - np.eye(fam.n))
    defect_m = spectral_norm(gram_m - np.eye(fam.m))
    return (defect_n <= TIER_TOL and defect_m <= TIER_TOL), defect_n, defect_m


def combine_realizations(rs, fam: IsometryFamily) -> Realization:
    """Blockwise combination sum_j diag(Y_{j,n}, Y_{j,m})* R_j diag(Y_{j,n}, Y_{j,m})."""
    rs = list(rs)
    if len(rs) != fam.k:
        raise DimensionMismatch(f"{len(rs)} realizations for {fam.k} isometry blocks")
    n, m = fam.n, fam.m
    for j, r in enumerate(rs):
        if (r.n, r.m) != (n, m):
            raise DimensionMismatch(f"realization #{j} has (n, m) = {(r.n, r.m)}, expected {(n, m)}")
    ok, defect_n, defect_m = validate_isometry(fam)
    if not ok:
        raise NotAnIsometryFamily(f"tier defects {defect_n:.3e}, {defect_m:.3e} exceed {TIER_TOL}")
    a = np.zeros((n, n), dtype=complex)
    b = np.zeros((n, m), dtype=complex)
    c = np.zeros((m, n), dtype=complex)
    d = np.zeros((m, m), dtype=complex)
    for r, yn, ym in zip(rs, fam.state_blocks, fam.io_blocks):
        a += yn.conj().T @ r.A @ yn
        b += yn.conj().T @ r.B @ ym
        c += ym.conj().T @ r.C @ yn
        d += ym.conj().T @ r.D @ ym
    return Realization(n=n, m=m, A=a, B=b, C=c, D=d)


@dataclass(frozen=True)
class PreservationResult:
    """Certificate of the combination plus the per-input certificates.

    `inputs_used` are the realizations actually combined: inputs that arrived
    with a non-identity certificate are balanced first, so a failure names the
    offending input rather than the combination.
    """

    combined: Realization
    certificate: Certificate
    per_input: tuple[Certificate, ...]
    inputs_used: tuple[Realization, ...]


def verify_preservation(rs, fam: IsometryFamily, family, tol_psd: float | None = None) -> PreservationResult:
    """Combine balanced-certified realizations and certify the result.

    Each input must pass the balanced QMI (P = I); inputs that do not are
    re-certified with solve_p and balanced before combining. The combination
    then satisfies the same balanced QMI (exactly a congruence sum of the
    input forms for the positive-real weight, a dominated sum for the
    others).

    Raises
    ------
    InputNotCertified
        If some input fails the balanced QMI and no certificate is found.
    """
    tag = as_tag(family)
    rs = list(rs)
    used = []
    per_input = []
    for j, r in enumerate(rs):
        cert = verify_kyp(r, np.eye(r.n), tag, tol_psd)
        if not cert.verified:
            found = solve_p(r, tag, tol_psd=tol_psd)
            if isinstance(found, NotFound) or not found.verified:
                raise InputNotCertified(j)
            r, cert = balance(r, found)
            if not cert.verified:
                raise InputNotCertified(j)
        used.append(r)
        per_input.append(cert)
    combined = combine_realizations(used, fam)
    certificate = verify_kyp(combined, np.eye(combined.n), tag, tol_psd)
    return PreservationResult(
        combined=combined,
        certificate=certificate,
        per_input=tuple(per_input),
        inputs_used=tuple(used),
    )


def random_isometry_family(k: int, n: int, m: int, rng) -> IsometryFamily:
    """Sample k square two-tier blocks with exact tier-wise Gram sums."""
    rng = np.random.default_rng(rng)
    state = random_isometry_tuple([n] * k, n, rng).blocks
    io = random_isometry_tuple([m] * k, m, rng).blocks
    return IsometryFamily(state_blocks=state, io_blocks=io)
