"""
Command-line interface.

Representation documents are JSON objects::

    {"sample_space": ["x0", "x1"], "C": [0, 0], "F": [[0, 1]],
     "metadata": {"name": "bernoulli", "seed": null}}

Group documents hold ``A`` (row-major, n x n), ``u``, ``v`` and ``c``.

Exit codes: 0 success (or equivalent), 1 not equivalent, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Optional, Sequence

import numpy as np

from .equivalence import DECISION_TOL, recover_witness
from .errors import DegeneracyError, InputError
from .expfam import Representation, density, log_partition
from .function_space import (
    DEFAULT_TOL,
    FuncVec,
    MinimalFrame,
    SampleSpace,
    augmented_matrix,
    rank_with_tolerance,
)
from .grassmann import graff_dimension, graff_from_rep
from .group import GroupElement, act
from .sampling import random_representation

EXIT_OK = 0
EXIT_INEQUIVALENT = 1
EXIT_INPUT = 2

CANON_DIGITS = 12


# ---------------------------------------------------------------- documents

def _real_list(value, name: str) -> list[float]:
    if not isinstance(value, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
        raise InputError(f"'{name}' must be a list of numbers")
    return [float(x) for x in value]


def _require(doc: dict, key: str):
    if key not in doc:
        raise InputError(f"missing field '{key}'")
    return doc[key]


def rep_arrays(doc: Any) -> tuple[SampleSpace, np.ndarray, np.ndarray]:
    """Validate the shape of a representation document without requiring minimality."""
    if not isinstance(doc, dict):
        raise InputError("representation document must be a JSON object")
    labels = _require(doc, "sample_space")
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise InputError("'sample_space' must be a list of strings")
    space = SampleSpace(tuple(labels))
    C = np.array(_real_list(_require(doc, "C"), "C"))
    F_raw = _require(doc, "F")
    if not isinstance(F_raw, list) or not F_raw:
        raise InputError("'F' must be a non-empty list of functions")
    F = np.array([_real_list(row, "F") for row in F_raw]) if all(
        isinstance(r, list) and len(r) == space.size for r in F_raw) else None
    if C.shape[0] != space.size or F is None:
        raise InputError(f"C and every row of F need {space.size} values")
    if not (np.all(np.isfinite(C)) and np.all(np.isfinite(F))):
        raise InputError("non-finite values")
    return space, C, F


def parse_rep(doc: Any, tol: float = DEFAULT_TOL) -> Representation:
    space, C, F = rep_arrays(doc)
    return Representation(FuncVec(space, C), MinimalFrame.from_rows(space, F, tol))


def rep_to_doc(rep: Representation, metadata: Optional[dict] = None) -> dict:
    doc = {
        "sample_space": list(rep.space.labels),
        "C": rep.C.values.tolist(),
        "F": rep.F_matrix.tolist(),
    }
    if metadata:
        doc["metadata"] = metadata
    return doc


def parse_group(doc: Any) -> GroupElement:
    if not isinstance(doc, dict):
        raise InputError("group document must be a JSON object")
    A_raw = _require(doc, "A")
    if not isinstance(A_raw, list) or not A_raw:
        raise InputError("'A' must be a non-empty list of rows")
    A = np.array([_real_list(row, "A") for row in A_raw]) if all(
        isinstance(r, list) and len(r) == len(A_raw) for r in A_raw) else None
    if A is None:
        raise InputError("'A' must be square")
    c = _require(doc, "c")
    if not isinstance(c, (int, float)) or isinstance(c, bool):
        raise InputError("'c' must be a number")
    return GroupElement(A, _real_list(_require(doc, "u"), "u"), _real_list(_require(doc, "v"), "v"), c)


def group_to_doc(g: GroupElement) -> dict:
    # + 0.0 turns -0.0 into 0.0
    return {"A": (g.A + 0.0).tolist(), "u": (g.u + 0.0).tolist(), "v": (g.v + 0.0).tolist(), "c": g.c + 0.0}


def _round_sig(values: np.ndarray, digits: int = CANON_DIGITS) -> list:
    """Round to ``digits`` significant digits after snapping round-off noise to zero."""
    values = np.asarray(values, dtype=float)
    scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
    snapped = np.where(np.abs(values) < 10.0 ** (1 - digits) * scale, 0.0, values)
    out = [float(f"{x:.{digits}g}") + 0.0 for x in snapped.ravel()]
    return np.array(out).reshape(values.shape).tolist()


def canonical_doc(rep: Representation) -> dict:
    S = graff_from_rep(rep)
    return {
        "dim": S.dim,
        "ambient_dim": S.ambient_dim,
        "base": _round_sig(S.base),
        "basis": _round_sig(S.basis.T),
    }


def _parse_theta(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.split(",") if x.strip()])
    except ValueError as exc:
        raise InputError(f"bad --theta value {text!r}") from exc


def _load(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _emit(obj: Any) -> None:
    sys.stdout.write(json.dumps(obj, allow_nan=False) + "\n")


def _finite_or_none(x: float) -> Optional[float]:
    return x if math.isfinite(x) else None


# ---------------------------------------------------------------- commands

def cmd_minimal(args) -> int:
    _, _, F = rep_arrays(_load(args.file))
    rank = rank_with_tolerance(augmented_matrix(F), args.tol)
    _emit({"minimal": rank == F.shape[0] + 1, "rank": rank})
    return EXIT_OK


def cmd_equiv(args) -> int:
    rep = parse_rep(_load(args.file_a))
    rep_prime = parse_rep(_load(args.file_b))
    if rep.space != rep_prime.space or rep.n != rep_prime.n:
        raise InputError("documents have different sample spaces or dimensions")
    report = recover_witness(rep, rep_prime, args.tol)
    out = {
        "equivalent": report.equivalent,
        "residual": _finite_or_none(report.residual),
        "marginal": report.marginal,
        "pivot_indices": list(report.pivot_indices),
    }
    if report.equivalent:
        out.update(group_to_doc(report.witness))
        _emit(out)
        return EXIT_OK
    out["reason"] = report.reason
    _emit(out)
    return EXIT_INEQUIVALENT


def cmd_canon(args) -> int:
    _emit(canonical_doc(parse_rep(_load(args.file))))
    return EXIT_OK


def cmd_eval(args) -> int:
    rep = parse_rep(_load(args.file))
    p = density(rep, _parse_theta(args.theta))
    _emit(dict(zip(rep.space.labels, p.tolist())))
    return EXIT_OK


def cmd_psi(args) -> int:
    rep = parse_rep(_load(args.file))
    _emit(log_partition(rep, _parse_theta(args.theta)))
    return EXIT_OK


def cmd_act(args) -> int:
    doc = _load(args.file)
    rep = parse_rep(doc)
    g = parse_group(_load(args.group_file))
    metadata = doc.get("metadata") if isinstance(doc.get("metadata"), dict) else None
    _emit(rep_to_doc(act(g, rep), metadata))
    return EXIT_OK


def cmd_random(args) -> int:
    rng = np.random.default_rng(args.seed)
    rep = random_representation(args.m, args.n, rng)
    _emit(rep_to_doc(rep, {"name": f"random-m{args.m}-n{args.n}", "seed": args.seed}))
    return EXIT_OK


def cmd_dim(args) -> int:
    _emit(graff_dimension(args.n, args.m).value)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="efgraff",
        description="Minimal exponential families on finite sample spaces and their affine subspaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("minimal", help="check whether {1, F_1, ..., F_n} is independent")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative rank tolerance")
    p.set_defaults(func=cmd_minimal)

    p = sub.add_parser("equiv", help="find g with A = g . B, if any")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--tol", type=float, default=DECISION_TOL, help="decision tolerance")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("canon", help="canonical affine subspace of the family")
    p.add_argument("file")
    p.set_defaults(func=cmd_canon)

    for name, func, help_text in (("eval", cmd_eval, "density at theta"),
                                  ("psi", cmd_psi, "log-partition function at theta")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file")
        p.add_argument("--theta", required=True, help="comma-separated reals, e.g. --theta=-1,0.5")
        p.set_defaults(func=func)

    p = sub.add_parser("act", help="apply a group element to a representation")
    p.add_argument("file")
    p.add_argument("group_file")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("random", help="random minimal representation")
    p.add_argument("--m", type=int, required=True, help="sample space has m+1 points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("dim", help="dimension of the space of minimal n-dimensional families")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True, help="sample space has m+1 points")
    p.set_defaults(func=cmd_dim)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DegeneracyError) as exc:
        sys.stderr.write(json.dumps({"error": str(exc)}) + "\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
