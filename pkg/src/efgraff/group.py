"""
The group G_n of block matrices

    [[1, u^T, c],
     [0, A,   v],
     [0, 0,   1]]

acting on representations by ``(C, F) -> (C + <u, F> + c, A F + v)``.

Elements are stored componentwise.  ``embed_matrix`` gives the
``(n+2) x (n+2)`` matrix, which the tests use as an independent oracle for the
product and inverse formulas.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConditioningError, InputError
from .expfam import Representation
from .function_space import DEFAULT_TOL, FuncVec, MinimalFrame


def _check_invertible(A: np.ndarray, tol: float) -> None:
    sv = np.linalg.svd(A, compute_uv=False)
    if not sv[-1] > tol * sv[0]:
        raise ConditioningError(
            f"matrix is singular at tolerance {tol:g} (sigma_min/sigma_max = "
            f"{sv[-1] / sv[0] if sv[0] else 0.0:.3g})")


def _vector(x, n: int, name: str) -> np.ndarray:
    x = np.atleast_1d(np.array(x, dtype=float))
    if x.shape != (n,):
        raise InputError(f"{name} has shape {x.shape}, expected ({n},)")
    x.setflags(write=False)
    return x


def _square(A) -> np.ndarray:
    A = np.atleast_2d(np.array(A, dtype=float))
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise InputError(f"A must be a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError("A has non-finite entries")
    A.setflags(write=False)
    return A


@dataclass(frozen=True, eq=False)
class GroupElement:
    A: np.ndarray
    u: np.ndarray
    v: np.ndarray
    c: float
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        A = _square(self.A)
        n = A.shape[0]
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "u", _vector(self.u, n, "u"))
        object.__setattr__(self, "v", _vector(self.v, n, "v"))
        c = float(self.c)
        if not np.isfinite(c):
            raise InputError("c must be finite")
        object.__setattr__(self, "c", c)
        _check_invertible(A, self.tol)

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls(np.eye(n), np.zeros(n), np.zeros(n), 0.0)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return compose(self, other)

    def max_abs_diff(self, other: "GroupElement") -> float:
        """Largest componentwise deviation between two elements."""
        return max(
            float(np.max(np.abs(self.A - other.A))),
            float(np.max(np.abs(self.u - other.u))),
            float(np.max(np.abs(self.v - other.v))),
            abs(self.c - other.c),
        )


def _same_n(g: GroupElement, h: GroupElement) -> None:
    if g.n != h.n:
        raise InputError(f"group elements of different sizes ({g.n} vs {h.n})")


def compose(g_prime: GroupElement, g: GroupElement) -> GroupElement:
    """Product ``g' g``, matching multiplication of the embedded matrices."""
    _same_n(g_prime, g)
    return GroupElement(
        g_prime.A @ g.A,
        g.u + g.A.T @ g_prime.u,
        g_prime.v + g_prime.A @ g.v,
        g_prime.c + g.c + float(g_prime.u @ g.v),
    )


def inverse(g: GroupElement) -> GroupElement:
    A_inv = np.linalg.inv(g.A)
    A_inv_v = A_inv @ g.v
    return GroupElement(A_inv, -A_inv.T @ g.u, -A_inv_v, -g.c + float(g.u @ A_inv_v))


def embed_matrix(g: GroupElement) -> np.ndarray:
    n = g.n
    out = np.eye(n + 2)
    out[0, 1:n + 1] = g.u
    out[0, n + 1] = g.c
    out[1:n + 1, 1:n + 1] = g.A
    out[1:n + 1, n + 1] = g.v
    return out


def from_matrix(mat, tol: float = DEFAULT_TOL) -> GroupElement:
    """Read an element back from its block-matrix form, checking the fixed entries."""
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 3:
        raise InputError(f"expected an (n+2)x(n+2) matrix, got shape {mat.shape}")
    n = mat.shape[0] - 2
    fixed = np.concatenate([[mat[0, 0] - 1.0], mat[1:, 0], mat[n + 1, 1:n + 1], [mat[n + 1, n + 1] - 1.0]])
    if np.max(np.abs(fixed)) > tol * max(1.0, np.max(np.abs(mat))):
        raise InputError("matrix is not of the block form of G_n")
    return GroupElement(mat[1:n + 1, 1:n + 1], mat[0, 1:n + 1], mat[1:n + 1, n + 1], mat[0, n + 1], tol)


def act(g: GroupElement, rep: Representation) -> Representation:
    """``g . (C, F) = (C + <u, F> + c, A F + v)``; the result is re-validated as minimal."""
    if g.n != rep.n:
        raise InputError(f"group element has n={g.n}, representation has n={rep.n}")
    F = rep.F_matrix
    space = rep.space
    C_new = FuncVec(space, rep.C.values + g.u @ F + g.c)
    F_new = MinimalFrame.from_rows(space, g.A @ F + g.v[:, None], rep.F.tol)
    return Representation(C_new, F_new)


@dataclass(frozen=True, eq=False)
class AffDagElement:
    """Element ``(A, u)`` of GL(n) semidirect R^n with product ``(A'A, u + A^T u')``."""

    A: np.ndarray
    u: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        A = _square(self.A)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "u", _vector(self.u, A.shape[0], "u"))
        _check_invertible(A, self.tol)

    @classmethod
    def identity(cls, n: int) -> "AffDagElement":
        return cls(np.eye(n), np.zeros(n))

    @property
    def n(self) -> int:
        return self.A.shape[0]


def aff_compose(a_prime: AffDagElement, a: AffDagElement) -> AffDagElement:
    if a_prime.n != a.n:
        raise InputError("elements of different sizes")
    return AffDagElement(a_prime.A @ a.A, a.u + a.A.T @ a_prime.u)


def epsilon_apply(a: AffDagElement, vc) -> tuple[np.ndarray, float]:
    """Linear action of ``(A, u)`` on ``R^n + R``: ``(v, c) -> (A v, <u, v> + c)``."""
    v, c = vc
    v = _vector(v, a.n, "v")
    return a.A @ v, float(a.u @ v) + float(c)


def semidirect_split(g: GroupElement) -> tuple[AffDagElement, tuple[np.ndarray, float]]:
    return AffDagElement(g.A, g.u, g.tol), (g.v.copy(), g.c)


def semidirect_join(a: AffDagElement, vc) -> GroupElement:
    v, c = vc
    return GroupElement(a.A, a.u, v, c, a.tol)


def semidirect_compose(x, y):
    """Product in ``Aff^dag semidirect (R^n + R)``, twisted by ``epsilon``.

    ``x`` and ``y`` are pairs ``(a, (v, c))`` as returned by ``semidirect_split``.
    """
    a_prime, vc_prime = x
    a, (v, c) = y
    shifted_v, shifted_c = epsilon_apply(a_prime, (v, c))
    return aff_compose(a_prime, a), (vc_prime[0] + shifted_v, vc_prime[1] + shifted_c)
