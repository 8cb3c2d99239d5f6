"""
Finite sample spaces and the function space C(Omega).

A sample space is an ordered tuple of labels ``x_0, ..., x_m``.  Functions on
it are stored as length ``m+1`` arrays.  The quotient of C(Omega) by the
constants is represented by differences anchored at ``x_0``, so a class
``[f]`` is the length ``m`` vector ``f(x_i) - f(x_0)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DegeneracyError, InputError

DEFAULT_TOL = 1e-10

# relative slack when breaking ties between equally good pivot columns
_TIE_SLACK = 1e-12


def _readonly(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise InputError(f"expected a {ndim}-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError("non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SampleSpace:
    """Ordered finite set of at least two labelled points."""

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(label) for label in self.labels)
        if len(labels) < 2:
            raise InputError("a sample space needs at least two points")
        if len(set(labels)) != len(labels):
            raise InputError("sample space labels must be distinct")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of_size(cls, size: int) -> "SampleSpace":
        return cls(tuple(f"x{i}" for i in range(size)))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        """Index of the last point, so the space is ``{x_0, ..., x_m}``."""
        return len(self.labels) - 1


@dataclass(frozen=True, eq=False)
class FuncVec:
    """A real function on a sample space, one value per point."""

    space: SampleSpace
    values: np.ndarray

    def __post_init__(self):
        values = _readonly(self.values, 1)
        if values.shape[0] != self.space.size:
            raise InputError(
                f"function has {values.shape[0]} values, space has {self.space.size} points")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True, eq=False)
class QuotientVec:
    """A class in C(Omega)/R, stored as differences against ``x_0``."""

    space: SampleSpace
    diffs: np.ndarray

    def __post_init__(self):
        diffs = _readonly(self.diffs, 1)
        if diffs.shape[0] != self.space.m:
            raise InputError(
                f"quotient vector has {diffs.shape[0]} entries, expected {self.space.m}")
        object.__setattr__(self, "diffs", diffs)


def quotient_project(f: FuncVec) -> QuotientVec:
    """Map ``f`` to its class ``[f]``; constants go to zero."""
    return QuotientVec(f.space, f.values[1:] - f.values[0])


def rank_with_tolerance(vectors: Iterable[Sequence[float]], tol: float = DEFAULT_TOL) -> int:
    """
    Numerical rank of a family of vectors.

    A singular value counts when it exceeds ``tol * sigma_max * max(rows, cols)``.
    Empty and all-zero families have rank 0.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    rows = [np.asarray(v, dtype=float).ravel() for v in vectors]
    if not rows:
        return 0
    if len({r.shape[0] for r in rows}) != 1:
        raise InputError("vectors have mismatched lengths")
    mat = np.vstack(rows)
    if mat.size == 0:
        return 0
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0] * max(mat.shape)))


def augmented_matrix(rows) -> np.ndarray:
    """Stack the constant function 1 on top of the rows of ``rows``."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    return np.vstack([np.ones(rows.shape[1]), rows])


def minimality_margin(rows) -> float:
    """Ratio of smallest to largest singular value of ``[1; F]``.

    Zero when ``{1, F_1, ..., F_n}`` cannot be independent (n > m).
    """
    aug = augmented_matrix(rows)
    if aug.shape[0] > aug.shape[1]:
        return 0.0
    sv = np.linalg.svd(aug, compute_uv=False)
    return float(sv[-1] / sv[0])


@dataclass(frozen=True, eq=False)
class Frame:
    """An ordered, linearly independent tuple of functions on one space."""

    space: SampleSpace
    functions: tuple[FuncVec, ...]
    tol: float = field(default=DEFAULT_TOL)

    def __post_init__(self):
        functions = tuple(self.functions)
        if not functions:
            raise InputError("a frame needs at least one function")
        for f in functions:
            if f.space != self.space:
                raise InputError("frame functions live on different sample spaces")
        object.__setattr__(self, "functions", functions)
        if rank_with_tolerance(self.matrix, self.tol) != self.n:
            raise InputError("frame functions are linearly dependent")

    @classmethod
    def from_rows(cls, space: SampleSpace, rows, tol: float = DEFAULT_TOL):
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        return cls(space, tuple(FuncVec(space, r) for r in rows), tol)

    @property
    def n(self) -> int:
        return len(self.functions)

    @property
    def matrix(self) -> np.ndarray:
        """``n x (m+1)`` array; row ``a`` holds the values of ``F_a``."""
        return np.vstack([f.values for f in self.functions])


class MinimalFrame(Frame):
    """A frame whose functions stay independent after adjoining the constant 1."""

    def __post_init__(self):
        super().__post_init__()
        if self.n > self.space.m:
            raise InputError(
                f"a minimal frame on {self.space.size} points has at most {self.space.m} functions")
        if not is_minimal_frame(self, self.tol):
            raise InputError("{1, F_1, ..., F_n} is linearly dependent")


def is_minimal_frame(F: Frame, tol: float = DEFAULT_TOL) -> bool:
    return rank_with_tolerance(augmented_matrix(F.matrix), tol) == F.n + 1


def _check_indices(indices, n: int, size: int) -> tuple[int, ...]:
    idx = tuple(int(i) for i in indices)
    if len(idx) != n + 1:
        raise InputError(f"need {n + 1} indices, got {len(idx)}")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise InputError("indices must be strictly increasing")
    if idx[0] < 0 or idx[-1] >= size:
        raise InputError("index out of range")
    return idx


def difference_matrix(F: Frame, indices) -> np.ndarray:
    """
    ``n x n`` matrix with entry ``(a, b) = F_a(x_{i_b}) - F_a(x_{i_0})``.

    No invertibility is required; the caller decides what a singular result means.
    """
    mat = F.matrix
    idx = _check_indices(indices, F.n, mat.shape[1])
    return mat[:, idx[1:]] - mat[:, [idx[0]]]


def select_pivot_indices(F: Frame, tol: float = DEFAULT_TOL) -> tuple[int, ...]:
    """
    Choose sample points ``i_0 < ... < i_n`` making the difference matrix invertible.

    Greedy column-pivoted Gram-Schmidt on ``[1; F]``: at each step take the
    sample point whose column has the largest remaining norm (lowest index on
    ties).  The determinant of the selected ``(n+1)``-column minor equals that of
    the difference matrix, so the selection is re-checked on the latter.
    """
    work = augmented_matrix(F.matrix)
    rows, cols = work.shape
    norms = np.linalg.norm(work, axis=0)
    floor = tol * norms.max() * max(rows, cols)
    chosen: list[int] = []
    for _ in range(rows):
        norms = np.linalg.norm(work, axis=0)
        norms[chosen] = -1.0
        best = norms.max()
        if best <= floor:
            raise DegeneracyError(
                "no invertible difference matrix at this tolerance; "
                "frame is not minimal under the current tolerance regime")
        j = int(np.flatnonzero(norms >= best * (1.0 - _TIE_SLACK))[0])
        chosen.append(j)
        q = work[:, j] / best
        work = work - np.outer(q, q @ work)
    indices = tuple(sorted(chosen))
    if rank_with_tolerance(difference_matrix(F, indices), tol) != F.n:
        raise DegeneracyError("selected difference matrix failed the invertibility re-check")
    return indices
