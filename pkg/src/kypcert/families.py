"""Sampled-domain membership oracles for the four passivity families and
their lossless / hyper / anti variants, plus function-level transforms.

Sampling is evidence, not proof: a ``fail`` verdict carries a concrete
counterexample point, while a ``pass`` is a verdict-with-margin only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from ._linalg import min_eig, sigma_min, spectral_norm
from .exceptions import (
    DomainMismatch,
    EtaOutOfRange,
    PoleAt,
    SingularIPlusA,
    SingularIPlusD,
)
from .qmi import Family, as_tag
from .realization import Realization, evaluate

__all__ = [
    "Domain",
    "DomainGrid",
    "MembershipReport",
    "family_domain",
    "make_grid",
    "membership_oracle",
    "anti_db_oracle",
    "hyper_bounded_oracle",
    "lossless_boundary_oracle",
    "cayley_function",
    "bilinear_substitute",
]

#: absolute tolerance on oracle margins
ORACLE_TOL = 1e-8

#: default grid sizes (boundary, interior)
DEFAULT_GRID = 64


class Domain(enum.Enum):
    RIGHT_HALF_PLANE = "right-half-plane"
    EXTERIOR_DISK = "exterior-disk"


def family_domain(family) -> Domain:
    """Sampling domain of a family: the open right half plane for the
    continuous families, the exterior of the closed unit disk for the
    discrete ones."""
    tag = as_tag(family)
    if tag.family.is_discrete:
        return Domain.EXTERIOR_DISK
    return Domain.RIGHT_HALF_PLANE


@dataclass(frozen=True)
class DomainGrid:
    """A seeded sampling grid: points on the domain boundary plus strictly
    interior points."""

    domain: Domain
    boundary_points: np.ndarray
    interior_points: np.ndarray
    seed: int = 0

    def __post_init__(self):
        bnd = np.asarray(self.boundary_points, dtype=complex).ravel()
        inner = np.asarray(self.interior_points, dtype=complex).ravel()
        if self.domain is Domain.RIGHT_HALF_PLANE:
            if bnd.size and np.abs(bnd.real).max() > 1e-12 * (1.0 + np.abs(bnd).max()):
                raise DomainMismatch("boundary points must lie on the imaginary axis")
            if inner.size and inner.real.min(initial=np.inf) <= 0.0:
                raise DomainMismatch("interior points must have positive real part")
        else:
            if bnd.size and np.abs(np.abs(bnd) - 1.0).max() > 1e-12:
                raise DomainMismatch("boundary points must lie on the unit circle")
            if inner.size and np.abs(inner).min(initial=np.inf) <= 1.0:
                raise DomainMismatch("interior points must lie strictly outside the closed disk")
        bnd = bnd.copy()
        bnd.setflags(write=False)
        inner = inner.copy()
        inner.setflags(write=False)
        object.__setattr__(self, "boundary_points", bnd)
        object.__setattr__(self, "interior_points", inner)

    @property
    def points(self) -> np.ndarray:
        return np.concatenate([self.boundary_points, self.interior_points])


@dataclass(frozen=True)
class MembershipReport:
    """Sampled-domain evidence: the worst margin over the grid and where it
    occurred. verdict is "pass" iff worst_margin clears the tolerance."""

    family: str
    verdict: str
    worst_point: complex | None
    worst_margin: float
    samples_used: int
    skipped: int = 0
    tol: float = ORACLE_TOL

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def make_grid(
    domain: Domain,
    n_boundary: int = DEFAULT_GRID,
    n_interior: int = DEFAULT_GRID,
    seed: int = 0,
) -> DomainGrid:
    """Build a deterministic grid for a domain.

    Boundary points come from a compactified uniform sweep: theta -> i
    tan(theta/2) on the imaginary axis (the theta = pi compactification pole
    is nudged back by half a step), uniform angles on the unit circle.
    Interior points are scrambled-Halton samples mapped into the open domain.
    """
    if n_boundary < 1 or n_interior < 0:
        raise ValueError("need n_boundary >= 1 and n_interior >= 0")
    seed = int(seed)
    theta = 2.0 * np.pi * np.arange(n_boundary) / n_boundary
    if domain is Domain.RIGHT_HALF_PLANE:
        near_pole = np.isclose(theta, np.pi, atol=1e-12)
        theta = np.where(near_pole, theta - np.pi / n_boundary, theta)
        boundary = 1j * np.tan(theta / 2.0)
    elif domain is Domain.EXTERIOR_DISK:
        boundary = np.exp(1j * theta)
    else:  # pragma: no cover
        raise DomainMismatch(f"unknown domain {domain}")

    if n_interior:
        sampler = qmc.Halton(d=2, scramble=True, seed=seed)
        u = np.clip(sampler.random(n_interior), 1e-3, 1.0 - 1e-3)
        if domain is Domain.RIGHT_HALF_PLANE:
            x = u[:, 0] / (1.0 - u[:, 0])
            y = np.tan(np.pi * (u[:, 1] - 0.5))
            interior = x + 1j * y
        else:
            radius = 1.0 / (1.0 - u[:, 0])
            interior = radius * np.exp(2j * np.pi * u[:, 1])
    else:
        interior = np.zeros(0, dtype=complex)
    return DomainGrid(domain=domain, boundary_points=boundary, interior_points=interior, seed=seed)


def _scan(r: Realization, points: np.ndarray, margin_fn):
    """Evaluate a margin over grid points, skipping pole-adjacent ones."""
    worst = math.inf
    worst_point = None
    used = 0
    skipped = 0
    for z in points:
        try:
            f = evaluate(r, z).value
        except PoleAt:
            skipped += 1
            continue
        used += 1
        margin = margin_fn(f)
        if margin < worst:
            worst, worst_point = margin, complex(z)
    return worst, worst_point, used, skipped


def _check_domain(grid: DomainGrid, expected: Domain, what: str):
    if grid.domain is not expected:
        raise DomainMismatch(f"{what} needs a {expected.value} grid, got {grid.domain.value}")


def membership_oracle(r: Realization, family, grid: DomainGrid, tol: float = ORACLE_TOL) -> MembershipReport:
    """Sampled membership test for one of the four families.

    The pointwise margin is min eig(F(z) + F(z)*) for the positive-real
    families and 1 - ||F(z)||_2 for the bounded-real ones; the verdict is the
    worst margin over the grid. Pole-adjacent points are skipped and counted.
    """
    tag = as_tag(family)
    _check_domain(grid, family_domain(tag), f"{tag.family.value} oracle")
    if tag.family.is_bounded:
        margin_fn = lambda f: 1.0 - spectral_norm(f)  # noqa: E731
    else:
        margin_fn = lambda f: min_eig(f + f.conj().T)  # noqa: E731
    worst, worst_point, used, skipped = _scan(r, grid.points, margin_fn)
    verdict = "pass" if worst >= -tol else "fail"
    return MembershipReport(
        family=tag.family.value, verdict=verdict, worst_point=worst_point,
        worst_margin=worst, samples_used=used, skipped=skipped, tol=tol,
    )


def anti_db_oracle(r: Realization, grid: DomainGrid, tol: float = ORACLE_TOL) -> MembershipReport:
    """Anti-discrete-bounded test: smallest singular value of F exceeds 1
    everywhere outside the closed disk. Margin is sigma_min(F(z)) - 1 and the
    pass rule is strict (> tol)."""
    _check_domain(grid, Domain.EXTERIOR_DISK, "anti-discrete-bounded oracle")
    worst, worst_point, used, skipped = _scan(r, grid.points, lambda f: sigma_min(f) - 1.0)
    verdict = "pass" if worst > tol else "fail"
    return MembershipReport(
        family="anti-discrete-bounded", verdict=verdict, worst_point=worst_point,
        worst_margin=worst, samples_used=used, skipped=skipped, tol=tol,
    )


def hyper_bounded_oracle(r: Realization, eta: float, grid: DomainGrid, tol: float = ORACLE_TOL) -> MembershipReport:
    """Hyper-bounded test: sup ||F|| <= sqrt((eta-1)/(eta+1)) over the grid.

    eta = inf reduces to the plain bounded-real oracle. A right-half-plane
    grid tests the continuous variant; an exterior-disk grid tests the
    discrete one (which has no KYP weight here, the oracle is the only
    exposed check for it).
    """
    eta = float(eta)
    if not eta > 1.0:
        raise EtaOutOfRange(f"eta must lie in (1, inf], got {eta}")
    bound = 1.0 if math.isinf(eta) else math.sqrt((eta - 1.0) / (eta + 1.0))
    worst, worst_point, used, skipped = _scan(r, grid.points, lambda f: bound - spectral_norm(f))
    verdict = "pass" if worst >= -tol else "fail"
    kind = "hyper-bounded" if grid.domain is Domain.RIGHT_HALF_PLANE else "hyper-discrete-bounded"
    return MembershipReport(
        family=f"{kind}(eta={eta:g})", verdict=verdict, worst_point=worst_point,
        worst_margin=worst, samples_used=used, skipped=skipped, tol=tol,
    )


def lossless_boundary_oracle(r: Realization, kind: str, grid: DomainGrid, tol: float = ORACLE_TOL) -> MembershipReport:
    """Boundary degeneracy test for the lossless subsets.

    kind "LP": F + F* vanishes on the imaginary axis (margin -||F+F*||_2);
    kind "LB": F*F = I there (margin -||F*F - I||_2). The verdict also
    requires the parent family oracle (positive- resp. bounded-real) to pass
    on the same grid.
    """
    if kind not in ("LP", "LB"):
        raise ValueError(f"kind must be 'LP' or 'LB', got {kind!r}")
    _check_domain(grid, Domain.RIGHT_HALF_PLANE, "lossless boundary oracle")
    if kind == "LP":
        margin_fn = lambda f: -spectral_norm(f + f.conj().T)  # noqa: E731
        parent = Family.POSITIVE_REAL
        label = "lossless-positive"
    else:
        margin_fn = lambda f: -spectral_norm(f.conj().T @ f - np.eye(r.m))  # noqa: E731
        parent = Family.BOUNDED_REAL
        label = "lossless-bounded"
    worst, worst_point, used, skipped = _scan(r, grid.boundary_points, margin_fn)
    parent_report = membership_oracle(r, parent, grid, tol)
    verdict = "pass" if worst >= -tol and parent_report.passed else "fail"
    if not parent_report.passed and parent_report.worst_margin < worst:
        worst, worst_point = parent_report.worst_margin, parent_report.worst_point
    return MembershipReport(
        family=label, verdict=verdict, worst_point=worst_point,
        worst_margin=worst, samples_used=used, skipped=skipped, tol=tol,
    )


def cayley_function(r: Realization) -> Realization:
    """Realization of the function Cayley transform (I - F)(I + F)^-1.

    Swaps the positive-real and bounded-real families (and their discrete
    analogues) while keeping the variable fixed. Requires I + D nonsingular.
    """
    ipd = np.eye(r.m) + r.D
    if sigma_min(ipd) < 1e-12 * max(spectral_norm(ipd), 1e-300):
        raise SingularIPlusD("I + D is singular; function Cayley transform undefined")
    ipd_inv = np.linalg.inv(ipd)
    return Realization(
        n=r.n,
        m=r.m,
        A=r.A - r.B @ ipd_inv @ r.C,
        B=r.B @ ipd_inv,
        C=-2.0 * ipd_inv @ r.C,
        D=(np.eye(r.m) - r.D) @ ipd_inv,
    )


def bilinear_substitute(r: Realization) -> Realization:
    """Realization of G(z) = F((1+z)/(1-z)).

    The Moebius substitution carries the disk onto the right half plane, so a
    positive-real F yields a G taking positive-real values on the open unit
    disk (the Herglotz-side convention; compose with z -> 1/z for exterior
    sampling). Requires I + A nonsingular. Constants are unchanged.
    """
    if r.n == 0:
        return r
    ipa = np.eye(r.n) + r.A
    if sigma_min(ipa) < 1e-12 * max(spectral_norm(ipa), 1e-300):
        raise SingularIPlusA("I + A is singular; bilinear substitution undefined")
    ipa_inv = np.linalg.inv(ipa)
    a_new = -ipa_inv @ (np.eye(r.n) - r.A)
    b_new = ipa_inv @ r.B
    c_new = r.C @ (np.eye(r.n) - a_new)
    d_new = r.D - r.C @ ipa_inv @ r.B
    return Realization(n=r.n, m=r.m, A=a_new, B=b_new, C=c_new, D=d_new)
