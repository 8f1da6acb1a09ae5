"""Shared test utilities: random inputs and independent closed-form oracles.

The closed forms live here (test suite only) so that library results are
always checked against a second, independently coded route.
"""

from __future__ import annotations

import numpy as np

from kypcert import Realization, evaluate

# -- random inputs -----------------------------------------------------------


def rand_complex(rng, shape, scale=1.0):
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def rand_realization(rng, n, m, scale=1.0) -> Realization:
    return Realization(
        n=n,
        m=m,
        A=rand_complex(rng, (n, n), scale),
        B=rand_complex(rng, (n, m), scale),
        C=rand_complex(rng, (m, n), scale),
        D=rand_complex(rng, (m, m), scale),
    )


def rand_hpd(rng, n, floor=0.5):
    g = rand_complex(rng, (n, n))
    return g @ g.conj().T + floor * np.eye(n)


def rand_coordinates(rng, n, cond_max=10.0):
    """Random invertible T with a modest condition number."""
    while True:
        t = rand_complex(rng, (n, n)) + np.eye(n)
        sv = np.linalg.svd(t, compute_uv=False)
        if sv[-1] > 0 and sv[0] / sv[-1] <= cond_max:
            return t


def transfer_max_err(r1: Realization, r2: Realization, points) -> float:
    """Max entrywise deviation between two transfer functions on a point set."""
    return max(
        float(np.abs(evaluate(r1, z).value - evaluate(r2, z).value).max()) for z in points
    )


def sampled_max_err(r: Realization, fn, points) -> float:
    """Max deviation between a realization and a closed-form matrix function."""
    return max(
        float(np.abs(evaluate(r, z).value - np.atleast_2d(fn(z))).max()) for z in points
    )


# -- closed forms for the worked fixtures ------------------------------------


def f_closed(z):
    return np.array([[1.0 / (2.0 * (2.0 * z + 1.0))]])


def g_closed(z):
    return np.array([[2.0 * (2.0 + z) / z]])


def f1_closed(z, a=1.0, b=1.0):
    return (1.0 / (a**2 * z)) * np.array(
        [[b**2 / a**2 + 1.0, z - b / a], [-(z + b / a), 1.0]]
    )


def f2_closed(z, a=1.0, b=1.0):
    return (1.0 / (z**2 + 1.0)) * np.array(
        [[a**2 * z, a * (b * z - a)], [a * (b * z + a), (a**2 + b**2) * z]]
    )


def f3_closed(z, a=1.0, b=1.0):
    # pointwise inverse of f1: carries the a^2 factor so f3 * f1 = I exactly
    return (a**2 * z / (1.0 + z**2)) * np.array(
        [[1.0, b / a - z], [b / a + z, b**2 / a**2 + 1.0]]
    )


# -- independent block-formula oracles for the four quadratic forms ----------


def q_positive_real(r: Realization, p):
    p = np.asarray(p, dtype=complex)
    a, b, c, d = r.A, r.B, r.C, r.D
    return np.block(
        [
            [-p @ a - a.conj().T @ p, c.conj().T - p @ b],
            [c - b.conj().T @ p, d + d.conj().T],
        ]
    )


def q_bounded_real(r: Realization, p):
    p = np.asarray(p, dtype=complex)
    a, b, c, d = r.A, r.B, r.C, r.D
    cd = np.hstack([c, d])
    lin = np.block(
        [[-p @ a - a.conj().T @ p, -p @ b], [-b.conj().T @ p, np.eye(r.m)]]
    )
    return lin - cd.conj().T @ cd


def q_discrete_positive_real(r: Realization, p):
    p = np.asarray(p, dtype=complex)
    a, b, c, d = r.A, r.B, r.C, r.D
    ab = np.hstack([a, b])
    lin = np.block([[p, c.conj().T], [c, d + d.conj().T]])
    return lin - ab.conj().T @ p @ ab


def q_discrete_bounded_real(r: Realization, p):
    p = np.asarray(p, dtype=complex)
    a, b, c, d = r.A, r.B, r.C, r.D
    cd = np.hstack([c, d])
    lin = np.block(
        [
            [p - a.conj().T @ p @ a, -a.conj().T @ p @ b],
            [-b.conj().T @ p @ a, np.eye(r.m) - b.conj().T @ p @ b],
        ]
    )
    return lin - cd.conj().T @ cd
