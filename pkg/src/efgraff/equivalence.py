"""
Deciding whether two representations define the same exponential family.

``recover_witness`` reconstructs the unique ``g`` in G_n with
``rep = g . rep_prime`` from a handful of sample points, then validates the
candidate against every point.  A representation pair is equivalent exactly
when such a ``g`` exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConditioningError, DegeneracyError, InputError
from .expfam import Representation, density, log_partition
from .function_space import DEFAULT_TOL, difference_matrix, rank_with_tolerance, select_pivot_indices
from .group import GroupElement, act, inverse

DECISION_TOL = 1e-8

# deviations within this factor of the threshold (either side) are flagged as marginal
_MARGINAL_FACTOR = 10.0


@dataclass(frozen=True)
class WitnessReport:
    equivalent: bool
    witness: Optional[GroupElement]
    residual: float
    pivot_indices: tuple[int, ...]
    threshold: float
    marginal: bool = False
    reason: str = ""


def _input_scale(rep: Representation, rep_prime: Representation) -> float:
    return max(
        1.0,
        float(np.max(np.abs(rep.C.values))),
        float(np.max(np.abs(rep.F_matrix))),
        float(np.max(np.abs(rep_prime.C.values))),
        float(np.max(np.abs(rep_prime.F_matrix))),
    )


def _spread(values: np.ndarray) -> tuple[np.ndarray, float]:
    """Mean over sample points (last axis) and the infinity-norm deviation from it."""
    mean = values.mean(axis=-1)
    dev = float(np.max(np.abs(values - mean[..., None]), initial=0.0))
    return mean, dev


def _is_marginal(value: float, threshold: float) -> bool:
    return threshold / _MARGINAL_FACTOR < value <= threshold * _MARGINAL_FACTOR


def action_residual(g: GroupElement, rep: Representation, rep_prime: Representation) -> float:
    """Max deviation of ``g . rep_prime`` from ``rep`` over all entries of C and F."""
    moved = act(g, rep_prime)
    return max(
        float(np.max(np.abs(moved.C.values - rep.C.values))),
        float(np.max(np.abs(moved.F_matrix - rep.F_matrix))),
    )


def recover_witness(
    rep: Representation,
    rep_prime: Representation,
    tol: float = DECISION_TOL,
    indices=None,
    rank_tol: float = DEFAULT_TOL,
) -> WitnessReport:
    """
    Find ``g`` with ``rep = g . rep_prime``, or report that none exists.

    Parameters
    ----------
    rep, rep_prime : Representation
        Representations on the same sample space with the same ``n``.
    tol : float
        Decision threshold, multiplied by the magnitude of the inputs
        (at least 1) before use.
    indices : sequence of int, optional
        Sample-point indices ``i_0 < ... < i_n`` to build the difference
        matrices from.  Chosen from ``rep_prime`` by greedy pivoting when
        omitted; any set giving an invertible matrix for ``rep_prime`` yields
        the same witness.

    Returns
    -------
    WitnessReport
        ``witness`` is set iff ``equivalent``.  ``residual`` is the largest
        deviation measured by the failing (or final) check.
    """
    if rep.space != rep_prime.space:
        raise InputError("representations live on different sample spaces")
    if rep.n != rep_prime.n:
        raise InputError(f"representations have different dimensions ({rep.n} vs {rep_prime.n})")

    if indices is None:
        indices = select_pivot_indices(rep_prime.F, rank_tol)
    indices = tuple(int(i) for i in indices)
    M_prime = difference_matrix(rep_prime.F, indices)
    if rank_with_tolerance(M_prime, rank_tol) != rep.n:
        raise DegeneracyError("difference matrix of rep_prime is singular for these indices")
    M = difference_matrix(rep.F, indices)
    i0, rest = indices[0], list(indices[1:])
    N = rep.C.values[rest] - rep.C.values[i0]
    N_prime = rep_prime.C.values[rest] - rep_prime.C.values[i0]

    L = np.linalg.solve(M_prime.T, M.T)
    u = np.linalg.solve(M_prime.T, N - N_prime)
    A = L.T

    threshold = tol * _input_scale(rep, rep_prime)

    def reject(residual: float, reason: str) -> WitnessReport:
        return WitnessReport(False, None, residual, indices, threshold,
                             _is_marginal(residual, threshold), reason)

    F, F_prime = rep.F_matrix, rep_prime.F_matrix
    v, v_dev = _spread(F - A @ F_prime)
    if v_dev > threshold:
        return reject(v_dev, "F - A F' is not constant")
    c, c_dev = _spread(rep.C.values - rep_prime.C.values - u @ F_prime)
    if c_dev > threshold:
        return reject(c_dev, "C - C' - <u, F'> is not constant")

    try:
        g = GroupElement(A, u, v, float(c), rank_tol)
        residual = action_residual(g, rep, rep_prime)
    except ConditioningError:
        return reject(float("inf"), "recovered A is singular")
    except InputError:
        # g . rep_prime failed the minimality check; cannot equal a minimal rep
        return reject(float("inf"), "g . rep' is not minimal")
    if residual > threshold:
        return reject(residual, "g . rep' does not reproduce rep")

    marginal = _is_marginal(max(residual, v_dev, c_dev), threshold)
    return WitnessReport(True, g, residual, indices, threshold, marginal)


def are_equivalent(rep: Representation, rep_prime: Representation, tol: float = DECISION_TOL) -> bool:
    return recover_witness(rep, rep_prime, tol).equivalent


def transfer_theta(g: GroupElement, theta) -> np.ndarray:
    """Parameter of ``rep_prime`` describing the same density as ``theta`` does for ``g . rep_prime``."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.shape != (g.n,):
        raise InputError(f"theta has shape {theta.shape}, expected ({g.n},)")
    return g.A.T @ theta + g.u


def psi_residual(g: GroupElement, rep: Representation, rep_prime: Representation, theta) -> float:
    """|psi(theta) - psi'(A^T theta + u) - <theta, v> - c| for ``rep = g . rep_prime``."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    rhs = log_partition(rep_prime, transfer_theta(g, theta)) + float(theta @ g.v) + g.c
    return abs(log_partition(rep, theta) - rhs)


def density_residual(g: GroupElement, rep: Representation, rep_prime: Representation, theta) -> float:
    """Max entrywise gap between ``p(.; theta)`` and ``p'(.; A^T theta + u)``."""
    return float(np.max(np.abs(density(rep, theta) - density(rep_prime, transfer_theta(g, theta)))))


def witnesses_are_inverse(report: WitnessReport, reverse: WitnessReport, tol: float = DECISION_TOL) -> bool:
    """True when two reports for swapped arguments carry mutually inverse witnesses."""
    if not (report.equivalent and reverse.equivalent):
        return False
    return inverse(report.witness).max_abs_diff(reverse.witness) <= tol
