"""Unified KYP quadratic-matrix-inequality engine.

The four passivity families (continuous/discrete x positive/bounded real) are
all certified by one construction: a structured Hermitian weight W(P) of size
2(n+m) and the quadratic form

    Q = [R; I]* W(P) [R; I],

where R is the realization array. A positive-definite P making Q positive
semidefinite is a membership certificate for the family that W encodes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._linalg import (
    eig_clip,
    herm,
    hermitian_basis,
    is_hermitian,
    min_eig,
    spectral_norm,
    unvec_hermitian,
    vec_hermitian,
)
from .exceptions import (
    BadFamily,
    CertificateNotVerified,
    DimensionMismatch,
    EtaOutOfRange,
    NotPositiveDefinite,
)
from .realization import Realization, change_coordinates

__all__ = [
    "Family",
    "FamilyTag",
    "WMatrix",
    "Certificate",
    "CertificateStatus",
    "NotFound",
    "as_tag",
    "build_weight",
    "build_balanced_weight",
    "assemble_q",
    "verify_kyp",
    "solve_p",
    "balance",
    "check_lossless",
    "weight_rotation_delta_to_beta",
    "weight_transfer_delta_to_alpha",
    "weight_transfer_beta_to_gamma",
    "array_swap",
    "random_certified_realization",
]

#: scale factor for the default PSD tolerance: tol = 1e-9 * (1 + ||Q||_2)
PSD_TOL_SCALE = 1e-9

#: refuted when min eig(Q) < -1000 * tol
REFUTE_FACTOR = 1e3


class Family(enum.Enum):
    """The four passivity families."""

    POSITIVE_REAL = "positive-real"
    BOUNDED_REAL = "bounded-real"
    DISCRETE_POSITIVE_REAL = "discrete-positive-real"
    DISCRETE_BOUNDED_REAL = "discrete-bounded-real"

    @property
    def is_discrete(self) -> bool:
        return self in (Family.DISCRETE_POSITIVE_REAL, Family.DISCRETE_BOUNDED_REAL)

    @property
    def is_bounded(self) -> bool:
        return self in (Family.BOUNDED_REAL, Family.DISCRETE_BOUNDED_REAL)


@dataclass(frozen=True)
class FamilyTag:
    """A family plus the optional hyper-bounded parameter eta in (1, inf].

    Finite eta selects the refined bounded-real weight and is only defined for
    ``Family.BOUNDED_REAL``.
    """

    family: Family
    eta: float = math.inf

    def __post_init__(self):
        eta = float(self.eta)
        if not eta > 1.0:
            raise EtaOutOfRange(f"eta must lie in (1, inf], got {eta}")
        if math.isfinite(eta) and self.family is not Family.BOUNDED_REAL:
            raise EtaOutOfRange("finite eta is only defined for the bounded-real weight")
        object.__setattr__(self, "eta", eta)

    @property
    def label(self) -> str:
        if math.isfinite(self.eta):
            return f"hyper-bounded(eta={self.eta:g})"
        return self.family.value


def as_tag(family) -> FamilyTag:
    """Coerce a Family or FamilyTag to a FamilyTag."""
    if isinstance(family, FamilyTag):
        return family
    if isinstance(family, Family):
        return FamilyTag(family=family)
    raise BadFamily(f"not a passivity family: {family!r}")


class CertificateStatus(enum.Enum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class WMatrix:
    """Structured Hermitian weight of size 2(n+m) encoding one family."""

    family: FamilyTag
    n: int
    m: int
    entries: np.ndarray
    p_used: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.shape != (2 * (self.n + self.m),) * 2:
            raise DimensionMismatch("weight entries have the wrong shape")
        if not is_hermitian(entries):
            raise ValueError("weight entries must be Hermitian")
        entries = entries.copy()
        entries.setflags(write=False)
        p = np.asarray(self.p_used, dtype=complex).copy()
        p.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "p_used", p)


@dataclass(frozen=True)
class Certificate:
    """Outcome of a KYP check: P, the assembled Q, their extreme eigenvalues,
    and the verdict for this particular P (a refuted certificate refutes only
    the certificate, never membership)."""

    family: FamilyTag
    p: np.ndarray
    q: np.ndarray
    min_eig_q: float
    min_eig_p: float
    status: CertificateStatus

    @property
    def verified(self) -> bool:
        return self.status is CertificateStatus.VERIFIED


@dataclass(frozen=True)
class NotFound:
    """solve_p gave up: best iterate and residual. Not a proof of
    non-membership."""

    family: FamilyTag
    best_p: np.ndarray
    min_eig_q: float
    residual: float
    iterations: int


def _eta_coefficient(tag: FamilyTag) -> float:
    # (1+eta)/(1-eta): -1 at eta = inf, decreasing below -1 for finite eta
    if math.isinf(tag.eta):
        return -1.0
    return (1.0 + tag.eta) / (1.0 - tag.eta)


def _weight_entries(tag: FamilyTag, p: np.ndarray, m: int) -> np.ndarray:
    """Assemble the 2(n+m) weight for family `tag` around an arbitrary
    Hermitian P (no definiteness check; block order n, m, n, m)."""
    n = p.shape[0]
    w = np.zeros((2 * (n + m), 2 * (n + m)), dtype=complex)
    i1 = slice(0, n)
    i2 = slice(n, n + m)
    i3 = slice(n + m, 2 * n + m)
    i4 = slice(2 * n + m, 2 * (n + m))
    im = np.eye(m)
    fam = tag.family
    if fam is Family.DISCRETE_BOUNDED_REAL:
        w[i1, i1] = -p
        w[i2, i2] = -im
        w[i3, i3] = p
        w[i4, i4] = im
    elif fam is Family.BOUNDED_REAL:
        w[i1, i3] = -p
        w[i3, i1] = -p
        w[i2, i2] = _eta_coefficient(tag) * im
        w[i4, i4] = im
    elif fam is Family.POSITIVE_REAL:
        w[i1, i3] = -p
        w[i3, i1] = -p
        w[i2, i4] = im
        w[i4, i2] = im
    elif fam is Family.DISCRETE_POSITIVE_REAL:
        w[i1, i1] = -p
        w[i3, i3] = p
        w[i2, i4] = im
        w[i4, i2] = im
    else:  # pragma: no cover
        raise BadFamily(f"unknown family {fam}")
    return w


def build_weight(family, p, m: int) -> WMatrix:
    """Build W(P) for a Hermitian positive-definite P.

    Parameters
    ----------
    family : Family or FamilyTag
        Target family; a finite eta on a bounded-real tag selects the refined
        hyper-bounded weight (its (2,2) block is (1+eta)/(1-eta) * I instead
        of -I; eta = inf reproduces the plain bounded-real weight).
    p : array_like
        Hermitian positive-definite n x n matrix.
    m : int
        Input/output dimension.

    Raises
    ------
    NotPositiveDefinite
        If P is not Hermitian positive definite.
    """
    tag = as_tag(family)
    p = np.asarray(p, dtype=complex)
    if p.ndim == 0:
        p = p.reshape(1, 1)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise DimensionMismatch("P must be square")
    if not is_hermitian(p):
        raise NotPositiveDefinite("P must be Hermitian")
    if p.size and min_eig(p) <= 0.0:
        raise NotPositiveDefinite("P must be positive definite")
    return WMatrix(family=tag, n=p.shape[0], m=int(m), entries=_weight_entries(tag, p, int(m)), p_used=p)


def build_balanced_weight(family, n: int, m: int) -> WMatrix:
    """The balanced weight, i.e. build_weight with P = I_n."""
    return build_weight(family, np.eye(int(n)), m)


def assemble_q(r: Realization, w) -> np.ndarray:
    """Assemble the quadratic form [R; I]* W [R; I], Hermitian-symmetrized.

    `w` may be a WMatrix or a raw Hermitian 2(n+m) array.
    """
    entries = w.entries if isinstance(w, WMatrix) else np.asarray(w, dtype=complex)
    nm = r.n + r.m
    if entries.shape != (2 * nm, 2 * nm):
        raise DimensionMismatch(
            f"weight has shape {entries.shape}, expected {(2 * nm, 2 * nm)}"
        )
    stack = np.vstack([r.array, np.eye(nm)])
    return herm(stack.conj().T @ entries @ stack)


def default_psd_tol(q: np.ndarray) -> float:
    """Default PSD slack: 1e-9 * (1 + ||Q||_2)."""
    return PSD_TOL_SCALE * (1.0 + spectral_norm(q))


def verify_kyp(r: Realization, p, family, tol_psd: float | None = None) -> Certificate:
    """Check whether P certifies membership of F in the given family.

    status is VERIFIED iff min eig(P) > 0 and min eig(Q) >= -tol_psd;
    REFUTED if P is not positive definite or min eig(Q) < -1000*tol_psd
    (which refutes only this certificate, not membership); INCONCLUSIVE
    otherwise.
    """
    tag = as_tag(family)
    p = np.asarray(p, dtype=complex)
    if p.ndim == 0:
        p = p.reshape(1, 1)
    if p.shape != (r.n, r.n):
        raise DimensionMismatch(f"P has shape {p.shape}, expected {(r.n, r.n)}")
    p_hermitian = p.size == 0 or is_hermitian(p, rtol=1e-10)
    ph = herm(p) if p.size else p
    q = assemble_q(r, _weight_entries(tag, ph, r.m))
    mq = min_eig(q)
    mp = min_eig(ph)  # +inf when n = 0 (empty P is vacuously admissible)
    tol = default_psd_tol(q) if tol_psd is None else float(tol_psd)
    admissible = p_hermitian and (r.n == 0 or mp > 0.0)
    if admissible and mq >= -tol:
        status = CertificateStatus.VERIFIED
    elif not admissible:
        status = CertificateStatus.REFUTED
    elif mq < -REFUTE_FACTOR * tol:
        status = CertificateStatus.REFUTED
    else:
        status = CertificateStatus.INCONCLUSIVE
    return Certificate(family=tag, p=p, q=q, min_eig_q=mq, min_eig_p=mp, status=status)


# ---------------------------------------------------------------------------
# Certificate search: alternating projections with Dykstra correction over the
# pair (P, Q), alternating between the PSD product cone
# {P >= margin*I, Q >= 0} and the affine graph {Q = Q(P)}.
# ---------------------------------------------------------------------------


class _AffineProjector:
    """Least-squares projector onto {(P, Q) : Q = K + L(P)}."""

    def __init__(self, r: Realization, tag: FamilyTag):
        n, m = r.n, r.m
        self.basis_p = hermitian_basis(n)
        self.basis_q = hermitian_basis(n + m)
        self.k_mat = assemble_q(r, _weight_entries(tag, np.zeros((n, n)), m))
        self.k_vec = vec_hermitian(self.k_mat, self.basis_q)
        cols = []
        for e in self.basis_p:
            q_e = assemble_q(r, _weight_entries(tag, e, m)) - self.k_mat
            cols.append(vec_hermitian(q_e, self.basis_q))
        self.m_op = np.column_stack(cols) if cols else np.zeros((len(self.basis_q), 0))
        gram = np.eye(self.m_op.shape[1]) + self.m_op.T @ self.m_op
        self.cho = scipy.linalg.cho_factor(gram)

    def q_of(self, p: np.ndarray) -> np.ndarray:
        coords = vec_hermitian(p, self.basis_p)
        return unvec_hermitian(self.k_vec + self.m_op @ coords, self.basis_q)

    def project(self, p0: np.ndarray, q0: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        rhs = vec_hermitian(p0, self.basis_p) + self.m_op.T @ (
            vec_hermitian(q0, self.basis_q) - self.k_vec
        )
        coords = scipy.linalg.cho_solve(self.cho, rhs)
        p = unvec_hermitian(coords, self.basis_p)
        q = unvec_hermitian(self.k_vec + self.m_op @ coords, self.basis_q)
        return p, q


def _warm_starts(r: Realization, tag: FamilyTag, margin: float) -> list[np.ndarray]:
    """Initial iterates for the certificate search.

    Besides the identity, try slack observability Gramians (Lyapunov/Stein
    solves) at a few scales; for stable realizations these sit close to the
    feasible set and cut the projection count dramatically.
    """
    n = r.n
    starts = [np.eye(n, dtype=complex)]
    a, c = r.A, r.C
    ctc = c.conj().T @ c
    slack = 1e-3 * (1.0 + spectral_norm(ctc))
    rhs = ctc + slack * np.eye(n)
    try:
        if tag.family.is_discrete:
            if np.abs(np.linalg.eigvals(a)).max() < 1.0 - 1e-9:
                g = scipy.linalg.solve_discrete_lyapunov(a.conj().T, rhs)
            else:
                return starts
        else:
            if np.linalg.eigvals(a).real.max() < -1e-9:
                g = scipy.linalg.solve_continuous_lyapunov(a.conj().T, -rhs)
            else:
                return starts
    except np.linalg.LinAlgError:  # pragma: no cover - defensive
        return starts
    g = herm(g)
    if not np.all(np.isfinite(g)) or min_eig(g) <= 0.0:
        return starts
    for scale in (0.5, 1.0, 2.0):
        starts.append(eig_clip(scale * g, margin))
    return starts


def solve_p(
    r: Realization,
    family,
    *,
    max_iter: int = 5000,
    tol_psd: float | None = None,
    margin: float | None = None,
    stall_tol: float = 1e-10,
) -> Certificate | NotFound:
    """Search for a certificate P by alternating projections.

    Projects the pair (P, Q) alternately (with Dykstra correction) onto the
    cone {P >= margin*I, Q >= 0} and onto the affine graph {Q = Q(P)}.
    Returns the first verified Certificate found; on stall or iteration cap
    returns NotFound with the best residual seen. NotFound is NOT a proof of
    non-membership (the converse direction of the KYP lemma needs minimality,
    and the search itself is heuristic).
    """
    tag = as_tag(family)
    n, m = r.n, r.m
    if n == 0:
        cert = verify_kyp(r, np.zeros((0, 0)), tag, tol_psd)
        if cert.verified:
            return cert
        return NotFound(
            family=tag, best_p=np.zeros((0, 0)), min_eig_q=cert.min_eig_q,
            residual=max(0.0, -cert.min_eig_q), iterations=0,
        )

    if margin is None:
        margin = max(1e-6 * spectral_norm(r.array), 1e-12)
    proj = _AffineProjector(r, tag)

    def violation(p_cand: np.ndarray) -> float:
        q_cand = proj.q_of(p_cand)
        return max(0.0, -min_eig(q_cand)) + max(0.0, margin - min_eig(p_cand))

    p = min(_warm_starts(r, tag, margin), key=violation)
    q = proj.q_of(p)
    inc_cone_p = np.zeros_like(p)
    inc_cone_q = np.zeros_like(q)
    inc_graph_p = np.zeros_like(p)
    inc_graph_q = np.zeros_like(q)

    best_p, best_viol, best_mq = p, np.inf, -np.inf
    p_prev = p
    small_steps = 0
    last_improve = 0
    for it in range(1, max_iter + 1):
        yp = eig_clip(p + inc_cone_p, margin)
        yq = eig_clip(q + inc_cone_q, 0.0)
        inc_cone_p = p + inc_cone_p - yp
        inc_cone_q = q + inc_cone_q - yq

        p, q = proj.project(yp + inc_graph_p, yq + inc_graph_q)
        inc_graph_p = yp + inc_graph_p - p
        inc_graph_q = yq + inc_graph_q - q

        mq = min_eig(q)
        mp = min_eig(p)
        tol = default_psd_tol(q) if tol_psd is None else float(tol_psd)
        if mp > 0.0 and mq >= -tol:
            cert = verify_kyp(r, p, tag, tol_psd)
            if cert.verified:
                return cert
        viol = max(0.0, -mq) + max(0.0, -mp + margin)
        if viol < best_viol * (1.0 - 1e-3) or viol < best_viol - 1e-16:
            last_improve = it
        if viol < best_viol:
            best_viol, best_p, best_mq = viol, p, mq
        # Dykstra steps oscillate near convergence and can shrink below the
        # threshold while the residual is still creeping down; a stall needs
        # both a sustained run of sub-threshold steps and a flat residual
        dp = spectral_norm(p - p_prev)
        small_steps = small_steps + 1 if dp <= stall_tol * max(1.0, spectral_norm(p)) else 0
        if small_steps >= 50 and it - last_improve >= 50:
            break
        p_prev = p
    return NotFound(family=tag, best_p=best_p, min_eig_q=best_mq, residual=best_viol, iterations=it)


def balance(r: Realization, cert: Certificate) -> tuple[Realization, Certificate]:
    """Change coordinates with T = P^(-1/2) so the certificate becomes P = I.

    Requires a verified certificate with min eig(P) >= 1e-10. The returned
    certificate is re-verified against the balanced weight; its Q is the
    congruence diag(T, I)* Q diag(T, I) of the input Q.
    """
    if cert.status is not CertificateStatus.VERIFIED:
        raise CertificateNotVerified("can only balance a verified certificate")
    if r.n == 0:
        return r, cert
    w, v = np.linalg.eigh(herm(cert.p))
    if w[0] < 1e-10:
        raise NotPositiveDefinite(f"refusing to balance: min eig(P) = {w[0]:.3e} < 1e-10")
    t = herm((v / np.sqrt(w)) @ v.conj().T)  # P^(-1/2)
    r_bal = change_coordinates(r, t)
    new_cert = verify_kyp(r_bal, np.eye(r.n), cert.family)
    return r_bal, new_cert


def check_lossless(r: Realization, p, family, tol: float = 1e-8) -> bool:
    """Degenerate-certificate test for the lossless subsets: Q(P) == 0.

    Only the continuous-time weights admit this reading (positive-real gives
    lossless-positive, bounded-real gives lossless-bounded).
    """
    tag = as_tag(family)
    if tag.family not in (Family.POSITIVE_REAL, Family.BOUNDED_REAL):
        raise BadFamily("lossless check is defined for the positive/bounded-real weights only")
    w = build_weight(tag, p if r.n else np.zeros((0, 0)), r.m)
    return spectral_norm(assemble_q(r, w)) <= tol


# ---------------------------------------------------------------------------
# Structure of the weight family: orthogonal transfer matrices
# ---------------------------------------------------------------------------


def weight_rotation_delta_to_beta(n: int, m: int) -> np.ndarray:
    """Symmetric orthogonal U with U* W_dbr(P) U = W_br(P)."""
    s = 1.0 / np.sqrt(2.0)
    u = np.zeros((2 * (n + m), 2 * (n + m)))
    i1 = slice(0, n)
    i2 = slice(n, n + m)
    i3 = slice(n + m, 2 * n + m)
    i4 = slice(2 * n + m, 2 * (n + m))
    u[i1, i1] = s * np.eye(n)
    u[i1, i3] = s * np.eye(n)
    u[i3, i1] = s * np.eye(n)
    u[i3, i3] = -s * np.eye(n)
    u[i2, i2] = np.eye(m)
    u[i4, i4] = np.eye(m)
    return u


def weight_transfer_beta_to_gamma(n: int, m: int) -> np.ndarray:
    """Orthogonal U = [0, -I; I, 0] with W_br(P) U = W_dpr(P)."""
    nm = n + m
    u = np.zeros((2 * nm, 2 * nm))
    u[:nm, nm:] = -np.eye(nm)
    u[nm:, :nm] = np.eye(nm)
    return u


def weight_transfer_delta_to_alpha(n: int, m: int) -> np.ndarray:
    """Signed permutation U with W_dbr(P) U = W_pr(P).

    The sign pattern differs between the state tier (n) and the io tier (m);
    a plain [0, -I; I, 0] block swap flips the P block the wrong way.
    """
    u = np.zeros((2 * (n + m), 2 * (n + m)))
    i1 = slice(0, n)
    i2 = slice(n, n + m)
    i3 = slice(n + m, 2 * n + m)
    i4 = slice(2 * n + m, 2 * (n + m))
    u[i1, i3] = np.eye(n)
    u[i2, i4] = -np.eye(m)
    u[i3, i1] = -np.eye(n)
    u[i4, i2] = np.eye(m)
    return u


def array_swap(n: int, m: int) -> np.ndarray:
    """The swap U = [0, I; I, 0] of the two (n+m) halves.

    Satisfies U* W_pr U = W_pr and U* W_dbr U = -W_dbr, which is what makes
    array inversion preserve positive-real certificates and flip
    discrete-bounded ones.
    """
    nm = n + m
    u = np.zeros((2 * nm, 2 * nm))
    u[:nm, nm:] = np.eye(nm)
    u[nm:, :nm] = np.eye(nm)
    return u


# ---------------------------------------------------------------------------
# Random certified instances (balanced, P = I) via the linear-fractional
# parametrization of the feasible set.
# ---------------------------------------------------------------------------


def random_certified_realization(
    family,
    n: int,
    m: int,
    rng,
    *,
    contraction: float = 0.7,
    max_tries: int = 100,
) -> Realization:
    """Sample a realization whose balanced QMI is strictly feasible (P = I).

    Splits the balanced weight as W = V+ L+ V+* - V- L- V-* and parametrizes
    the strictly feasible set by arbitrary strict contractions M:
    [R; I] = (V+ L+^(-1/2) + V- L-^(-1/2) M) Y with Y fixed by the identity
    block, giving Q = Y* (I - M*M) Y > 0. Resamples on ill-conditioned draws.
    """
    tag = as_tag(family)
    rng = np.random.default_rng(rng)
    nm = n + m
    w = _weight_entries(tag, np.eye(n), m)
    vals, vecs = np.linalg.eigh(w.real)
    neg, pos = vals < 0, vals > 0
    if int(neg.sum()) != nm or int(pos.sum()) != nm:  # pragma: no cover
        raise ValueError("weight does not have a balanced +/- eigenspace split")
    t_plus = vecs[:, pos] / np.sqrt(vals[pos])
    t_minus = vecs[:, neg] / np.sqrt(-vals[neg])
    for _ in range(max_tries):
        g = rng.standard_normal((nm, nm)) + 1j * rng.standard_normal((nm, nm))
        mmat = g * (contraction / spectral_norm(g))
        phi = t_plus + t_minus @ mmat
        bottom = phi[nm:, :]
        sv = np.linalg.svd(bottom, compute_uv=False)
        if sv[-1] < 1e-6 * sv[0]:
            continue
        arr = phi[:nm, :] @ np.linalg.inv(bottom)
        r = Realization.from_array(arr, n, m)
        if verify_kyp(r, np.eye(n), tag).verified:
            return r
    raise RuntimeError("failed to sample a certified realization")  # pragma: no cover
