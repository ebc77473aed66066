"""Naive brute-force references for the closed-form results.

Deliberately simple: matrix powers by repeated multiplication, eigenvalues
from the characteristic polynomial of the actual matrix entries, and the
full 2n x 2n system matrix applied step by step. Kept free of any shared
algebra with :mod:`momlab.spectral` so a formula bug cannot hide in its own
check.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .methods import MethodKind, MethodParams, run
from .problems import QuadraticProblem, _as_vector

__all__ = [
    "power_by_multiplication",
    "eig_2x2",
    "system_matrix",
    "full_system_step_equivalence",
    "EquivalenceResult",
]


def power_by_multiplication(m, k: int) -> np.ndarray:
    """m^k by k successive multiplications; k = 0 gives the identity."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    m = np.asarray(m)
    out = np.eye(m.shape[0], dtype=m.dtype)
    for _ in range(k):
        out = out @ m
    return out


def eig_2x2(m) -> tuple[complex, complex]:
    """Roots of l^2 - tr(m) l + det(m), plus branch first."""
    m = np.asarray(m, dtype=float)
    tr = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    disc = tr * tr - 4.0 * det
    if disc >= 0.0:
        root = complex(np.sqrt(disc))
    else:
        root = complex(0.0, np.sqrt(-disc))
    return 0.5 * (tr + root), 0.5 * (tr - root)


def _diagonal_entries(problem: QuadraticProblem) -> np.ndarray:
    h = problem.hessian
    if np.any(h != np.diag(np.diag(h))):
        raise ValueError("problem must have a diagonal hessian")
    return np.diag(h).copy()


def system_matrix(problem: QuadraticProblem, params: MethodParams) -> np.ndarray:
    """Full 2n x 2n recursion matrix [[0, I], [-B, C]] acting on (x^{k-1}; x^k).

    B = beta*I, C = (1+beta)*I - alpha*D for the heavy-ball forms;
    B = beta*(I - alpha*D), C = (1+beta)*(I - alpha*D) for the accelerated
    forms.
    """
    d = _diagonal_entries(problem)
    n = d.size
    eye = np.eye(n)
    if params.kind in (MethodKind.MM, MethodKind.HBM):
        lower_left = -params.beta * eye
        lower_right = (1.0 + params.beta) * eye - params.alpha * np.diag(d)
    else:
        shrink = eye - params.alpha * np.diag(d)
        lower_left = -params.beta * shrink
        lower_right = (1.0 + params.beta) * shrink
    top = np.concatenate([np.zeros((n, n)), eye], axis=1)
    bottom = np.concatenate([lower_left, lower_right], axis=1)
    return np.concatenate([top, bottom], axis=0)


class EquivalenceResult(NamedTuple):
    ok: bool
    max_deviation: float


def full_system_step_equivalence(
    problem: QuadraticProblem,
    params: MethodParams,
    x0,
    k: int,
    tol: float = 1e-10,
) -> EquivalenceResult:
    """Check that the linear recursion reproduces the iteration trajectory.

    Applies the 2n x 2n system matrix to the stacked state and, coordinate
    by coordinate, the 2x2 blocks, comparing both against the trajectory of
    :func:`momlab.methods.run`. For the heavy-ball forms the recursion starts
    from (x^0; x^0); for the accelerated forms the exact first step treats
    the pre-initial gradient as zero, so the recursion is checked from
    (x^0; x^1) onward. Deviations are measured in the error coordinates
    x - x*.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    d = _diagonal_entries(problem)
    x0 = _as_vector(x0, problem.dimension, "x0")
    traj = run(problem, params, x0, k)
    errors = traj.iterates - problem.x_star  # recursion is linear in these

    m_hat = system_matrix(problem, params)
    momentum_like = params.kind in (MethodKind.MM, MethodKind.HBM)
    if momentum_like:
        z = np.concatenate([errors[0], errors[0]])
        start = 1
    else:
        z = np.concatenate([errors[0], errors[1]])
        start = 2

    n = problem.dimension
    max_dev = 0.0
    for j in range(start, k + 1):
        z = m_hat @ z
        max_dev = max(
            max_dev,
            float(np.abs(z[:n] - errors[j - 1]).max()),
            float(np.abs(z[n:] - errors[j]).max()),
        )

    # Block separability: each coordinate evolves under its own 2x2 block.
    for i in range(n):
        a_i = params.alpha * d[i]
        if momentum_like:
            block = np.array([[0.0, 1.0], [-params.beta, 1.0 + params.beta - a_i]])
            zi = np.array([errors[0, i], errors[0, i]])
            first = 1
        else:
            shrink = 1.0 - a_i
            block = np.array(
                [[0.0, 1.0], [-params.beta * shrink, (1.0 + params.beta) * shrink]]
            )
            zi = np.array([errors[0, i], errors[1, i]])
            first = 2
        for j in range(first, k + 1):
            zi = block @ zi
            max_dev = max(
                max_dev,
                abs(zi[0] - errors[j - 1, i]),
                abs(zi[1] - errors[j, i]),
            )

    scale = max(1.0, float(np.abs(errors[0]).max()))
    return EquivalenceResult(ok=max_dev <= tol * scale, max_deviation=max_dev)
