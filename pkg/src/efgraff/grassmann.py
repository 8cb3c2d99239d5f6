"""
Affine subspaces of the quotient C(Omega)/R and the map from representations to them.

An affine subspace is kept in canonical form: the point of minimum norm plus a
canonical orthonormal basis of its direction.  The basis is obtained by
orthonormalising the reduced row echelon form of any spanning frame, so two
presentations of the same subspace produce the same fields up to round-off.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .expfam import Representation
from .function_space import DEFAULT_TOL, QuotientVec, quotient_project, rank_with_tolerance
from .group import AffDagElement

EQUALITY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class AffineSubspace:
    """``base + span(basis columns)`` inside ``R^ambient_dim``.

    ``basis`` is ``ambient_dim x dim`` with orthonormal columns and ``base`` is
    orthogonal to all of them.
    """

    ambient_dim: int
    dim: int
    base: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        base = np.array(self.base, dtype=float)
        basis = np.array(self.basis, dtype=float).reshape(self.ambient_dim, self.dim)
        if base.shape != (self.ambient_dim,):
            raise InputError("base has the wrong length")
        if self.dim > self.ambient_dim:
            raise InputError("dimension exceeds ambient dimension")
        if np.max(np.abs(basis.T @ basis - np.eye(self.dim)), initial=0.0) > 1e-12:
            raise InputError("basis columns are not orthonormal")
        if np.max(np.abs(basis.T @ base), initial=0.0) > 1e-10 * max(1.0, np.max(np.abs(base), initial=0.0)):
            raise InputError("base point is not orthogonal to the direction")
        base.setflags(write=False)
        basis.setflags(write=False)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "basis", basis)

    @property
    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the direction."""
        return self.basis @ self.basis.T

    def contains(self, point, tol: float = EQUALITY_TOL) -> bool:
        point = np.asarray(point, dtype=float)
        offset = point - self.base
        return float(np.max(np.abs(offset - self.projector @ offset), initial=0.0)) <= tol


@dataclass(frozen=True)
class GraffDimension:
    n: int
    ambient_dim: int
    value: int


def _rref(rows: np.ndarray, tol: float) -> np.ndarray:
    """Reduced row echelon form with pivots on the leftmost independent columns."""
    R = np.array(rows, dtype=float)
    k, cols = R.shape
    floor = tol * max(1.0, np.max(np.abs(R), initial=0.0)) * max(k, cols)
    r = 0
    for col in range(cols):
        if r == k:
            break
        p = r + int(np.argmax(np.abs(R[r:, col])))
        if abs(R[p, col]) <= floor:
            R[r:, col] = 0.0
            continue
        R[[r, p]] = R[[p, r]]
        R[r] /= R[r, col]
        others = np.arange(k) != r
        R[others] -= np.outer(R[others, col], R[r])
        R[others, col] = 0.0
        r += 1
    return R[:r]


def canonical_basis(frame_rows, tol: float = DEFAULT_TOL) -> np.ndarray:
    """
    Orthonormal basis (as columns) determined by the span of ``frame_rows`` alone.

    Gram-Schmidt on the reduced row echelon form, in column order.  The echelon
    form depends only on the span, so does the result.
    """
    frame_rows = np.atleast_2d(np.asarray(frame_rows, dtype=float))
    echelon = _rref(frame_rows, tol)
    Q, R = np.linalg.qr(echelon.T)
    signs = np.where(np.diag(R) < 0, -1.0, 1.0)
    return Q * signs


def _diffs(q) -> np.ndarray:
    return np.asarray(getattr(q, "diffs", q), dtype=float)


def pi_projection(v0, frame_q, tol: float = DEFAULT_TOL) -> AffineSubspace:
    """Canonical form of ``v0 + span(frame_q)``.

    ``v0`` and the frame entries may be QuotientVecs or plain vectors.
    """
    base_point = _diffs(v0)
    rows = np.atleast_2d(np.vstack([_diffs(q) for q in frame_q]))
    if rows.shape[1] != base_point.shape[0]:
        raise InputError("frame vectors and base point have different lengths")
    n, ambient = rows.shape
    if n > ambient or rank_with_tolerance(rows, tol) != n:
        raise InputError("frame vectors are linearly dependent")
    if n == ambient:
        # the whole space; skip the arithmetic so the canonical form is exact
        return AffineSubspace(ambient, n, np.zeros(ambient), np.eye(ambient))
    basis = canonical_basis(rows, tol)
    base = base_point - basis @ (basis.T @ base_point)
    # one more pass removes the component left by cancellation
    base = base - basis @ (basis.T @ base)
    return AffineSubspace(ambient, n, base, basis)


def first_stage_reduce(rep: Representation) -> tuple[QuotientVec, list[QuotientVec]]:
    """``(C, F) -> ([C], ([F_1], ..., [F_n]))``; forgets constant shifts of C and F."""
    return quotient_project(rep.C), [quotient_project(f) for f in rep.F.functions]


def graff_from_rep(rep: Representation, tol: float = DEFAULT_TOL) -> AffineSubspace:
    """The affine subspace ``[C] + span{[F_1], ..., [F_n]}`` labelling the family of ``rep``."""
    base, frame_q = first_stage_reduce(rep)
    return pi_projection(base, frame_q, tol)


def subspaces_equal(S: AffineSubspace, S_prime: AffineSubspace, tol: float = EQUALITY_TOL) -> bool:
    if S.ambient_dim != S_prime.ambient_dim:
        raise InputError("subspaces live in different ambient spaces")
    if S.dim != S_prime.dim:
        return False
    if np.max(np.abs(S.projector - S_prime.projector), initial=0.0) > tol:
        return False
    return float(np.max(np.abs(S.base - S_prime.base), initial=0.0)) <= tol


def graff_dimension(n: int, ambient_dim: int) -> GraffDimension:
    """Dimension ``(n+1)(ambient_dim - n)`` of the space of n-dimensional affine subspaces."""
    n, ambient_dim = int(n), int(ambient_dim)
    if n < 1:
        raise InputError("n must be at least 1")
    if n > ambient_dim:
        raise InputError(f"n={n} exceeds the ambient dimension {ambient_dim}")
    value = (n + 1) * (ambient_dim - n)
    # dim(V x Stief_n(V)) - dim(GL(n) x R^n)
    assert value == (ambient_dim + n * ambient_dim) - (n * n + n)
    return GraffDimension(n, ambient_dim, value)


def aff_dagger_act(a: AffDagElement, q):
    """
    ``(A, u) . ([C], [F]) = ([C] + <u, [F]>, A [F])`` on the first-stage quotient.

    ``q`` is a pair ``(base, frame)`` of QuotientVecs, as produced by
    ``first_stage_reduce``; the output has the same shape.
    """
    base, frame_q = q
    rows = np.vstack([qv.diffs for qv in frame_q])
    if rows.shape[0] != a.n:
        raise InputError(f"frame has {rows.shape[0]} vectors, element has n={a.n}")
    space = base.space
    new_base = QuotientVec(space, base.diffs + a.u @ rows)
    new_rows = a.A @ rows
    return new_base, [QuotientVec(space, r) for r in new_rows]


def stabilizer_system(rep: Representation) -> np.ndarray:
    """
    Coefficient matrix of the linear system cut out by ``g . rep = rep``.

    Unknowns are ``(A - I, u, v, c)`` flattened in that order.  The equations
    are ``<u, F(x)> + c = 0`` and ``(A - I) F(x) + v = 0`` at every sample point.
    """
    F = rep.F_matrix
    n, size = F.shape
    block = np.hstack([F.T, np.ones((size, 1))])  # one row per sample point
    n_unknowns = n * n + 2 * n + 1
    rows = []
    # (A - I)_{a,:} F(x) + v_a = 0 for each a
    for a in range(n):
        eq = np.zeros((size, n_unknowns))
        eq[:, a * n:(a + 1) * n] = block[:, :n]
        eq[:, n * n + n + a] = 1.0
        rows.append(eq)
    # <u, F(x)> + c = 0
    eq = np.zeros((size, n_unknowns))
    eq[:, n * n:n * n + n] = block[:, :n]
    eq[:, -1] = 1.0
    rows.append(eq)
    return np.vstack(rows)


def stabilizer_basis(rep: Representation, tol: float = DEFAULT_TOL) -> list[tuple]:
    """
    Directions ``(dA, u, v, c)`` along which the stabilizer of ``rep`` extends.

    The stabilizer is ``{(I + dA, u, v, c)}`` for ``(dA, u, v, c)`` in the null
    space of ``stabilizer_system`` with ``I + dA`` invertible, so it is trivial
    exactly when this list is empty.
    """
    system = stabilizer_system(rep)
    n = rep.n
    rank = rank_with_tolerance(system, tol)
    _, _, vt = np.linalg.svd(system)
    out = []
    for vec in vt[rank:]:
        out.append((vec[:n * n].reshape(n, n), vec[n * n:n * n + n], vec[n * n + n:n * n + 2 * n],
                    float(vec[-1])))
    return out


def stabilizer_is_trivial(rep: Representation, tol: float = DEFAULT_TOL) -> bool:
    return not stabilizer_basis(rep, tol)
