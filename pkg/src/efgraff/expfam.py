"""
Discrete exponential families ``p(x; theta) = exp(C(x) + <theta, F(x)> - psi(theta))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from .errors import InputError
from .function_space import (
    DEFAULT_TOL,
    Frame,
    FuncVec,
    MinimalFrame,
    SampleSpace,
)

MEMBERSHIP_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Representation:
    """A pair ``(C, F)`` with ``F`` a minimal frame on the same space as ``C``."""

    C: FuncVec
    F: MinimalFrame

    def __post_init__(self):
        if self.C.space != self.F.space:
            raise InputError("C and F live on different sample spaces")
        if not isinstance(self.F, MinimalFrame):
            raise InputError("F must be a MinimalFrame")

    @classmethod
    def from_arrays(cls, C, F, space: Optional[SampleSpace] = None, tol: float = DEFAULT_TOL):
        C = np.asarray(C, dtype=float)
        if space is None:
            space = SampleSpace.of_size(C.shape[0])
        return cls(FuncVec(space, C), MinimalFrame.from_rows(space, F, tol))

    @classmethod
    def unchecked(cls, C, F, space: Optional[SampleSpace] = None, tol: float = DEFAULT_TOL):
        """Build a representation without the minimality check.

        Only meant for probing what goes wrong outside the minimal setting.
        """
        C = np.asarray(C, dtype=float)
        if space is None:
            space = SampleSpace.of_size(C.shape[0])
        rep = object.__new__(cls)
        object.__setattr__(rep, "C", FuncVec(space, C))
        object.__setattr__(rep, "F", Frame.from_rows(space, F, tol))
        return rep

    @property
    def space(self) -> SampleSpace:
        return self.C.space

    @property
    def n(self) -> int:
        return self.F.n

    @property
    def F_matrix(self) -> np.ndarray:
        return self.F.matrix


def _theta(rep: Representation, theta) -> np.ndarray:
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.shape != (rep.n,):
        raise InputError(f"theta has shape {theta.shape}, expected ({rep.n},)")
    if not np.all(np.isfinite(theta)):
        raise InputError("theta has non-finite entries")
    return theta


def _exponent(rep: Representation, theta) -> np.ndarray:
    return rep.C.values + _theta(rep, theta) @ rep.F_matrix


def log_partition(rep: Representation, theta) -> float:
    return float(logsumexp(_exponent(rep, theta)))


def density(rep: Representation, theta) -> np.ndarray:
    """Probability vector of the family member with natural parameter ``theta``."""
    a = _exponent(rep, theta)
    p = np.exp(a - logsumexp(a))
    # exp/logsumexp leaves a few ulps of slack in the sum
    return p / p.sum()


def mean_statistics(rep: Representation, theta) -> np.ndarray:
    """Expected value of F under ``density(rep, theta)``; this is the gradient of psi."""
    return rep.F_matrix @ density(rep, theta)


def fisher_information(rep: Representation, theta) -> np.ndarray:
    """Covariance matrix of F under ``density(rep, theta)``; the Hessian of psi."""
    p = density(rep, theta)
    centred = rep.F_matrix - (rep.F_matrix @ p)[:, None]
    return (centred * p) @ centred.T


def membership(rep: Representation, p, tol: float = MEMBERSHIP_TOL) -> Optional[np.ndarray]:
    """
    Natural parameter of ``p`` in the family of ``rep``, or None if ``p`` is not a member.

    Solves ``[log p - C] = sum_k theta_k [F_k]`` in the quotient space by least
    squares, which removes the unknown normaliser.  ``p`` is accepted when the
    infinity norm of the residual is at most ``tol``.
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (rep.space.size,):
        raise InputError(f"p has shape {p.shape}, expected ({rep.space.size},)")
    if np.any(p <= 0):
        raise InputError("p must be strictly positive")
    target = np.log(p) - rep.C.values
    rhs = target[1:] - target[0]
    design = (rep.F_matrix[:, 1:] - rep.F_matrix[:, [0]]).T
    theta, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    if np.max(np.abs(design @ theta - rhs), initial=0.0) > tol:
        return None
    return theta
