"""
Acceptance suite.

Each criterion prints one ``[PASS]``/``[FAIL]`` line.  Run with
``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``.
"""

import functools
import io
import itertools
import json
import os
import sys
import tempfile
import time
from contextlib import redirect_stdout

import numpy as np
import pytest

from efgraff.cli import main as cli_main
from efgraff.cli import rep_to_doc
from efgraff.equivalence import are_equivalent, psi_residual, recover_witness, transfer_theta
from efgraff.expfam import Representation, density, fisher_information, log_partition, mean_statistics
from efgraff.grassmann import (
    aff_dagger_act,
    first_stage_reduce,
    graff_dimension,
    graff_from_rep,
    stabilizer_is_trivial,
    subspaces_equal,
)
from efgraff.group import AffDagElement, act, compose, embed_matrix, inverse, semidirect_join
from efgraff.sampling import random_group_element, random_representation

WITNESS_TOL = 1e-8
TRANSFER_TOL = 1e-10
GROUP_TOL = 1e-12
NORMALISATION_TOL = 1e-12
GRADIENT_RTOL = 1e-6
FD_STEP = 1e-5
PSD_FLOOR = -1e-10
PD_FLOOR = 1e-8
SQUARE_TOL = 1e-10
RUNTIME_LIMIT = 10.0


def _line(number: int, title: str, ok: bool, detail: str) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} -- {detail}"


def _random_nm(rng, n_choices=(1, 2, 3), m_max=8, strict=False):
    n = int(rng.choice(n_choices))
    m = int(rng.integers(n + 1 if strict else n, m_max + 1))
    return n, m


@functools.lru_cache(maxsize=None)
def orbit_suite():
    """Suite 1: 1000 pairs (act(g, rep), rep) with the generating g."""
    rng = np.random.default_rng(1)
    cases = []
    for _ in range(1000):
        n, m = _random_nm(rng)
        rep = random_representation(m, n, rng)
        g = random_group_element(n, rng)
        cases.append((act(g, rep), rep, g))
    return cases


@functools.lru_cache(maxsize=None)
def separated_suite():
    """Suite 2: 500 pairs with distinct canonical subspaces.

    Half are independent draws; half are orbit pairs whose C or F has been
    nudged by 1e-3 in a direction that leaves the family.
    """
    rng = np.random.default_rng(2)
    cases = []
    while len(cases) < 500:
        n, m = _random_nm(rng, strict=True)
        rep_prime = random_representation(m, n, rng)
        if len(cases) % 2 == 0:
            rep = random_representation(m, n, rng)
        else:
            moved = act(random_group_element(n, rng), rep_prime)
            C, F = moved.C.values.copy(), moved.F_matrix.copy()
            target = C if rng.random() < 0.5 else F[int(rng.integers(n))]
            target += 1e-3 * rng.normal(size=m + 1)
            rep = Representation.from_arrays(C, F)
        if subspaces_equal(graff_from_rep(rep), graff_from_rep(rep_prime)):
            continue
        cases.append((rep, rep_prime))
    return cases


def criterion_1():
    start = time.perf_counter()
    worst, failures = 0.0, 0
    for rep, rep_prime, g in orbit_suite():
        report = recover_witness(rep, rep_prime)
        if not report.equivalent:
            failures += 1
            continue
        worst = max(worst, report.witness.max_abs_diff(g))
    elapsed = time.perf_counter() - start
    ok = failures == 0 and worst <= WITNESS_TOL and elapsed < RUNTIME_LIMIT
    return ok, (f"1000 orbit pairs, {failures} missed, max witness error {worst:.2e} "
                f"(tol {WITNESS_TOL:g}), {elapsed:.2f}s")


def criterion_2():
    wrong = sum(are_equivalent(rep, rep_prime) for rep, rep_prime in separated_suite())
    return wrong == 0, f"500 separated pairs, {wrong} wrongly declared equivalent"


def criterion_3():
    pairs = [(rep, rep_prime) for rep, rep_prime, _ in orbit_suite()] + list(separated_suite())
    disagreements = sum(
        are_equivalent(rep, rep_prime) != subspaces_equal(graff_from_rep(rep), graff_from_rep(rep_prime))
        for rep, rep_prime in pairs)
    return disagreements == 0, f"{len(pairs)} pairs, {disagreements} disagreements"


def criterion_4():
    rng = np.random.default_rng(4)
    worst_p, worst_psi = 0.0, 0.0
    for _ in range(100):
        n, m = _random_nm(rng)
        rep_prime = random_representation(m, n, rng)
        g = random_group_element(n, rng)
        rep = act(g, rep_prime)
        for theta in itertools.product(np.linspace(-5, 5, 5), repeat=n):
            theta = np.array(theta)
            gap = np.max(np.abs(density(rep, theta) - density(rep_prime, transfer_theta(g, theta))))
            worst_p = max(worst_p, float(gap))
            worst_psi = max(worst_psi, psi_residual(g, rep, rep_prime, theta))
    ok = worst_p <= TRANSFER_TOL and worst_psi <= TRANSFER_TOL
    return ok, f"density gap {worst_p:.2e}, psi gap {worst_psi:.2e} (tol {TRANSFER_TOL:g})"


def criterion_5():
    rng = np.random.default_rng(5)
    worst_mul, worst_inv = 0.0, 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 6))
        g_prime, g = random_group_element(n, rng), random_group_element(n, rng)
        worst_mul = max(worst_mul, float(np.max(np.abs(
            embed_matrix(compose(g_prime, g)) - embed_matrix(g_prime) @ embed_matrix(g)))))
        worst_inv = max(worst_inv, float(np.max(np.abs(
            embed_matrix(inverse(g)) - np.linalg.inv(embed_matrix(g))))))
    ok = worst_mul <= GROUP_TOL and worst_inv <= GROUP_TOL
    return ok, f"product gap {worst_mul:.2e}, inverse gap {worst_inv:.2e} (tol {GROUP_TOL:g})"


def criterion_6():
    rng = np.random.default_rng(6)
    worst_norm, worst_grad, min_eig = 0.0, 0.0, np.inf
    for _ in range(300):
        n, m = _random_nm(rng)
        rep = random_representation(m, n, rng)
        theta = rng.uniform(-2, 2, n)
        p = density(rep, theta)
        worst_norm = max(worst_norm, abs(p.sum() - 1.0))
        grad = mean_statistics(rep, theta)
        fd = np.array([(log_partition(rep, theta + FD_STEP * e) - log_partition(rep, theta - FD_STEP * e))
                       / (2 * FD_STEP) for e in np.eye(n)])
        worst_grad = max(worst_grad, float(np.max(np.abs(fd - grad)) / np.max(np.abs(grad))))
        min_eig = min(min_eig, float(np.linalg.eigvalsh(fisher_information(rep, theta)).min()))
    ok = (worst_norm <= NORMALISATION_TOL and worst_grad <= GRADIENT_RTOL
          and min_eig >= PSD_FLOOR and min_eig >= PD_FLOOR)
    return ok, (f"sum error {worst_norm:.1e}, gradient rel. error {worst_grad:.1e}, "
                f"min Hessian eigenvalue {min_eig:.2e}")


def _canon_output(rep) -> str:
    """Raw stdout of the ``canon`` command for ``rep``."""
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "rep.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(rep_to_doc(rep), fh)
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = cli_main(["canon", path])
    assert code == 0
    return buf.getvalue()


def criterion_7():
    rng = np.random.default_rng(7)
    bad_pairs, outputs, dims_ok = 0, {}, True
    for k in range(100):
        n = 1 + k % 3
        rep, rep_prime = random_representation(n, n, rng), random_representation(n, n, rng)
        if not (are_equivalent(rep, rep_prime) and are_equivalent(rep_prime, rep)):
            bad_pairs += 1
        outputs.setdefault(n, set()).update({_canon_output(rep), _canon_output(rep_prime)})
        dims_ok &= graff_dimension(n, n).value == 0
    distinct = {n: len(v) for n, v in outputs.items()}
    full = all(json.loads(next(iter(v))) == {"dim": n, "ambient_dim": n, "base": [0.0] * n,
                                               "basis": np.eye(n).tolist()}
               for n, v in outputs.items())
    ok = bad_pairs == 0 and all(c == 1 for c in distinct.values()) and full and dims_ok
    return ok, (f"100 pairs with m = n, {bad_pairs} inequivalent, distinct canon outputs per n {distinct}, "
                f"graff_dimension(n, n) = 0: {dims_ok}")


def criterion_8():
    rng = np.random.default_rng(8)
    trivial = 0
    for _ in range(100):
        n, m = _random_nm(rng)
        trivial += stabilizer_is_trivial(random_representation(m, n, rng))
    counterexample = Representation.unchecked([0.0, 1.0, 2.0], [[3.0, 3.0, 3.0]])
    nontrivial = not stabilizer_is_trivial(counterexample)
    return trivial == 100 and nontrivial, (f"{trivial}/100 trivial stabilizers, "
                                           f"non-minimal counterexample has a stabilizer: {nontrivial}")


def _quotient_gap(x, y) -> float:
    (bx, fx), (by, fy) = x, y
    gap = float(np.max(np.abs(bx.diffs - by.diffs)))
    return max([gap] + [float(np.max(np.abs(a.diffs - b.diffs))) for a, b in zip(fx, fy)])


def criterion_9():
    rng = np.random.default_rng(9)
    worst_square, worst_shift = 0.0, 0.0
    for _ in range(200):
        n, m = _random_nm(rng)
        rep = random_representation(m, n, rng)
        g = random_group_element(n, rng)
        a = AffDagElement(g.A, g.u)
        # full action of g = ((A, u), (v, c)), then reduce
        lhs = first_stage_reduce(act(g, rep))
        rhs = aff_dagger_act(a, first_stage_reduce(rep))
        worst_square = max(worst_square, _quotient_gap(lhs, rhs))
        shift = semidirect_join(AffDagElement.identity(n), (g.v, g.c))
        worst_shift = max(worst_shift, _quotient_gap(first_stage_reduce(act(shift, rep)), first_stage_reduce(rep)))
    ok = worst_square <= SQUARE_TOL and worst_shift <= SQUARE_TOL
    return ok, f"200 cases, square gap {worst_square:.2e}, constant-shift gap {worst_shift:.2e}"


def criterion_10():
    bad = [(n, m) for m in range(1, 13) for n in range(1, m + 1)
           if not ((n + 1) * (m + 1) - (n + 1) ** 2 == (n + 1) * (m - n) == graff_dimension(n, m).value)]
    return not bad, f"all 1 <= n <= m <= 12, {len(bad)} mismatches"


CRITERIA = [
    (1, "orbit round-trip", criterion_1),
    (2, "soundness / separation", criterion_2),
    (3, "decision agreement with subspaces", criterion_3),
    (4, "transfer identities", criterion_4),
    (5, "group law against matrix embedding", criterion_5),
    (6, "normalisation and calculus", criterion_6),
    (7, "uniqueness at cardinality n+1", criterion_7),
    (8, "freeness", criterion_8),
    (9, "reduction-by-stages square", criterion_9),
    (10, "dimension bookkeeping", criterion_10),
]


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, title, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(number, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for number, title, check in CRITERIA:
        ok, detail = check()
        results.append(ok)
        print(_line(number, title, ok, detail))
    sys.exit(0 if all(results) else 1)
