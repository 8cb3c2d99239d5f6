"""Reproducible random representations and group elements."""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .expfam import Representation
from .function_space import SampleSpace, minimality_margin
from .group import GroupElement

MIN_MARGIN = 1e-3
MAX_CONDITION = 50.0
_MAX_DRAWS = 10_000


def random_representation(m: int, n: int, rng: np.random.Generator,
                          margin: float = MIN_MARGIN) -> Representation:
    """
    Entries uniform in [-1, 1] on ``m+1`` points, redrawn until the minimality
    margin of ``[1; F]`` is at least ``margin``.
    """
    if n < 1 or m < 1:
        raise InputError("need m >= 1 and n >= 1")
    if n > m:
        raise InputError(f"no minimal frame with n={n} functions on {m + 1} points")
    space = SampleSpace.of_size(m + 1)
    for _ in range(_MAX_DRAWS):
        C = rng.uniform(-1.0, 1.0, m + 1)
        F = rng.uniform(-1.0, 1.0, (n, m + 1))
        if minimality_margin(F) >= margin:
            return Representation.from_arrays(C, F, space)
    raise RuntimeError("could not draw a well-conditioned minimal frame")


def random_group_element(n: int, rng: np.random.Generator,
                         max_condition: float = MAX_CONDITION) -> GroupElement:
    """Entries uniform in [-1, 1]; A redrawn until its condition number is at most ``max_condition``."""
    for _ in range(_MAX_DRAWS):
        A = rng.uniform(-1.0, 1.0, (n, n))
        if np.linalg.cond(A) <= max_condition:
            return GroupElement(A, rng.uniform(-1.0, 1.0, n), rng.uniform(-1.0, 1.0, n),
                                float(rng.uniform(-1.0, 1.0)))
    raise RuntimeError("could not draw a well-conditioned group element")
