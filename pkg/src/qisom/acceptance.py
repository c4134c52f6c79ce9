"""The ten acceptance checks behind ``qisom verify``.

Each check is a self-contained, seeded verification of one structural
claim, from rewriting confluence up to the compact-ideal matrix units.
A check owns a wall-clock budget; exceeding it fails the check even if
every numeric assertion inside passed. ``run_acceptance`` executes any
subset and an optional user-supplied coefficient matrix is threaded
into the checks that can absorb extra instances.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .bratteli import closed_edges, numeric_edges
from .fock import gram_block, pairing_scalars
from .gicar import decompose, represented_span_rank
from .ideal import verify_ideal
from .qmatrix import QMatrix
from .rep import TruncatedFock, verify_relations
from .rewrite import multiply, normal_form
from .symmetry import (TorusElement, UnitaryCandidate, conditional_expectation,
                       group_axiom_sample, relation_compatibility, torus_act)
from .words import Expression, OccVector, Word, occ_range, words_with_occ


@dataclass
class CheckResult:
    """Outcome of one acceptance check."""

    name: str
    passed: bool
    elapsed: float
    limit: float
    details: str
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] {self.name}: {self.details} ({self.elapsed:.2f}s / limit {self.limit:.0f}s)"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "elapsed": self.elapsed,
            "limit": self.limit,
            "details": self.details,
            "data": self.data,
        }


def _finish(name: str, limit: float, started: float, ok: bool, details: str,
            data: dict | None = None) -> CheckResult:
    elapsed = time.perf_counter() - started
    # numpy comparisons leak np.bool_, which json cannot serialize
    ok = bool(ok)
    if elapsed > limit:
        ok = False
        details += f"; exceeded {limit:.0f}s budget"
    return CheckResult(name=name, passed=ok, elapsed=elapsed, limit=limit,
                       details=details, data=data or {})


def _random_word(rng: np.random.Generator, n: int, max_len: int) -> Word:
    length = int(rng.integers(0, max_len + 1))
    letters = tuple(
        (int(rng.integers(1, n + 1)), bool(rng.integers(0, 2)))
        for _ in range(length)
    )
    return Word(letters)


def _random_expression(rng: np.random.Generator, n: int, terms: int,
                       max_len: int = 3) -> Expression:
    items: dict = {}
    for _ in range(terms):
        mu = tuple(int(rng.integers(1, n + 1)) for _ in range(int(rng.integers(0, max_len + 1))))
        sigma = tuple(int(rng.integers(1, n + 1)) for _ in range(int(rng.integers(0, max_len + 1))))
        items[(mu, sigma)] = complex(rng.standard_normal(), rng.standard_normal())
    return Expression(items)


def _balanced_monomial(rng: np.random.Generator, n: int, max_len: int = 2) -> Expression:
    mu = tuple(int(rng.integers(1, n + 1)) for _ in range(int(rng.integers(0, max_len + 1))))
    sigma = tuple(rng.permutation(mu)) if mu else ()
    return Expression({(tuple(mu), tuple(int(s) for s in sigma)): complex(
        rng.standard_normal(), rng.standard_normal())})


def check_confluence(extra_q: Sequence[QMatrix] = ()) -> CheckResult:
    """Leftmost and rightmost reduction agree on random words.

    Redexes never overlap, so the two strategies must produce the same
    normal monomial; 1050 random words across five coefficient matrices
    with max modulus up to 0.9 are reduced both ways.
    """
    name, limit = "confluence", 5.0
    started = time.perf_counter()
    pool = [QMatrix.random(3, seed=101 + s, max_modulus=m)
            for s, m in enumerate((0.9, 0.85, 0.8, 0.7, 0.55))]
    pool += [q for q in extra_q if q.isom_mode]
    words = 0
    worst = 0.0
    for qi, q in enumerate(pool):
        rng = np.random.default_rng(1000 + qi)
        for _ in range(210):
            w = _random_word(rng, q.n, 8)
            left = normal_form(w, q, strategy="leftmost")
            right = normal_form(w, q, strategy="rightmost")
            if (left.mu, left.sigma) != (right.mu, right.sigma):
                # identical zero results may normalize keys differently
                if abs(left.coefficient) > 1e-12 or abs(right.coefficient) > 1e-12:
                    return _finish(name, limit, started, False,
                                   f"strategies disagree on {w}")
            worst = max(worst, abs(left.coefficient - right.coefficient))
            words += 1
    ok = worst <= 1e-12 and words >= 1000
    return _finish(name, limit, started, ok,
                   f"{words} words, worst coefficient gap {worst:.2e} (tol 1e-12)",
                   {"words": words, "worst_gap": worst})


def check_pairing_bridge(extra_q: Sequence[QMatrix] = ()) -> CheckResult:
    """Rewriting scalars equal the recursive inner product.

    For every pair of words sharing an occupation vector of total at
    most 4 on three generators, the scalar of word* word under rewriting
    must match the recursion value.
    """
    name, limit = "pairing-bridge", 10.0
    started = time.perf_counter()
    pool = [QMatrix.random(3, seed=201 + s) for s in range(5)]
    pool += [q for q in extra_q if q.isom_mode]
    pairs = 0
    worst = 0.0
    for q in pool:
        for v in occ_range(OccVector.constant(4, q.n)):
            if v.total > 4:
                continue
            basis = words_with_occ(v)
            for mu in basis:
                for sigma in basis:
                    rewritten, recursed = pairing_scalars(mu, sigma, q)
                    worst = max(worst, abs(rewritten - recursed))
                    pairs += 1
    ok = worst <= 1e-9
    return _finish(name, limit, started, ok,
                   f"{pairs} pairs, worst gap {worst:.2e} (tol 1e-9)",
                   {"pairs": pairs, "worst_gap": worst})


def check_gram_positivity(extra_q: Sequence[QMatrix] = ()) -> CheckResult:
    """Every Gram block certifies positive-definite near the modulus bound.

    Blocks up to total occupation 5 (two generators) and 4 (three
    generators) at max modulus 0.95 must pass the pivoted factorization,
    and the two-generator (1,1) block must have determinant
    1 - |q_12|^2 to within 1e-12.
    """
    name, limit = "gram-positivity", 5.0
    started = time.perf_counter()
    cases = [(QMatrix.random(2, seed=301, max_modulus=0.95), 5),
             (QMatrix.random(3, seed=302, max_modulus=0.95), 4)]
    cases += [(q, 4 if q.n <= 3 else 3) for q in extra_q]
    blocks = 0
    min_pivot = float("inf")
    for q, depth in cases:
        for v in occ_range(OccVector.constant(depth, q.n)):
            if v.total > depth:
                continue
            block = gram_block(v, q)
            min_pivot = min(min_pivot, block.min_pivot)
            blocks += 1
    q2 = cases[0][0]
    det = np.linalg.det(gram_block(OccVector((1, 1)), q2).gram)
    det_gap = abs(det - (1.0 - abs(q2.entry(1, 2)) ** 2))
    ok = min_pivot > 0.0 and det_gap <= 1e-12
    return _finish(name, limit, started, ok,
                   f"{blocks} blocks certified, min pivot {min_pivot:.2e}, "
                   f"det gap {det_gap:.2e} (tol 1e-12)",
                   {"blocks": blocks, "min_pivot": min_pivot, "det_gap": det_gap})


def check_truncated_relations(extra_q: Sequence[QMatrix] = ()) -> CheckResult:
    """Isometry and commutation relations hold away from the cut level."""
    name, limit = "truncated-relations", 10.0
    started = time.perf_counter()
    pool = [QMatrix.random(n, seed=400 + n) for n in (1, 2, 3)]
    pool += [q for q in extra_q if q.isom_mode]
    worst = 0.0
    for q in pool:
        report = verify_relations(TruncatedFock(q, 4), tol=1e-9)
        worst = max(worst, report.max_residual)
        if not report.passed:
            return _finish(name, limit, started, False,
                           f"residual {report.max_residual:.2e} at n={q.n} (tol 1e-9)")
    return _finish(name, limit, started, True,
                   f"{len(pool)} matrices at L=4, worst residual {worst:.2e} (tol 1e-9)",
                   {"worst_residual": worst})


EXPECTED_SPAN_DIMS = {(2, 1): 7, (2, 2): 63, (3, 1): 52}


def check_representation_rank(extra_q: Sequence[QMatrix] = ()) -> CheckResult:
    """Balanced monomial images stay linearly independent blockwise.

    The rank of the stacked block action must equal the sum of squared
    block dimensions: 7, 63 and 52 for the three reference shapes.
    """
    name, limit = "representation-rank", 30.0
    started = time.perf_counter()
    results = {}
    for (n, k), expected in EXPECTED_SPAN_DIMS.items():
        q = QMatrix.random(n, seed=500 + 10 * n + k)
        t = TruncatedFock(q, n * k)
        rank, formula = represented_span_rank(k, t)
        results[f"n{n}_k{k}"] = {"rank": rank, "formula": formula, "expected": expected}
        if not rank == formula == expected:
            return _finish(name, limit, started, False,
                           f"n={n}, k={k}: rank {rank}, formula {formula}, expected {expected}",
                           results)
    return _finish(name, limit, started, True,
                   "ranks 7 / 63 / 52 match the squared-dimension formula",
                   results)


def check_block_units(extra_q: Sequence[QMatrix] = ()) -> CheckResult:
    """Central unit family: idempotent, orthogonal, summing to identity.

    Runs the full decomposition report for two generators at levels 1
    and 2 and three generators at level 1, including the corner span
    and closure dimension counts.
    """
    name, limit = "block-units", 30.0
    started = time.perf_counter()
    cases = [(2, 1, 4), (2, 2, 6), (3, 1, 6)]
    data = {}
    for n, k, L in cases:
        q = QMatrix.random(n, seed=600 + 10 * n + k)
        report = decompose(k, TruncatedFock(q, L))
        data[f"n{n}_k{k}"] = {
            "sum_to_identity": report.sum_to_identity,
            "orthogonality": report.pairwise_orthogonality,
            "commutator": report.max_commutator,
            "passed": report.passed,
        }
        if not report.passed:
            return _finish(name, limit, started, False,
                           f"decomposition failed at n={n}, k={k}", data)
        for blk in report.blocks:
            if blk.checks["span_dim"] != blk.checks["span_dim_expected"]:
                return _finish(name, limit, started, False,
                               f"corner dimension off at n={n}, k={k}, v={blk.v}", data)
    return _finish(name, limit, started, True,
                   "unit families verified for (n,k) in (2,1), (2,2), (3,1)",
                   data)


def check_bratteli(extra_q: Sequence[QMatrix] = ()) -> CheckResult:
    """Numeric embedding multiplicities match the closed form, for every q.

    Five random coefficient matrices per generator count; the numeric
    edge sets must be identical across draws and equal to the formula.
    """
    name, limit = "bratteli-agreement", 60.0
    started = time.perf_counter()
    checked = 0
    for n, ks, L, base_seed in ((2, (1, 2), 6, 700), (3, (1,), 6, 710)):
        closed = {k: sorted((e.v.entries, e.u.entries, e.m) for e in closed_edges(n, k))
                  for k in ks}
        for s in range(5):
            q = QMatrix.random(n, seed=base_seed + s)
            t = TruncatedFock(q, L)
            for k in ks:
                numeric = sorted((e.v.entries, e.u.entries, e.m)
                                 for e in numeric_edges(k, t) if e.m > 0)
                if numeric != closed[k]:
                    return _finish(name, limit, started, False,
                                   f"edge mismatch at n={n}, k={k}, draw {s}")
                checked += 1
    return _finish(name, limit, started, True,
                   f"{checked} edge sets q-independent and equal to the closed form",
                   {"edge_sets": checked})


def check_torus_expectation(extra_q: Sequence[QMatrix] = ()) -> CheckResult:
    """Phase-action fixed points are exactly the balanced expressions.

    200 expressions test both directions of the fixed-point statement;
    100 triples test that the balanced projection is a bimodule map,
    with idempotence and unitality along the way.
    """
    name, limit = "torus-expectation", 5.0
    started = time.perf_counter()
    rng = np.random.default_rng(801)
    n = 3
    q = QMatrix.random(n, seed=802)
    checked = 0
    for _ in range(100):
        x = _random_expression(rng, n, terms=4)
        for candidate in (x, conditional_expectation(x)):
            circles = [TorusElement.coordinate(i, n, np.exp(1j * rng.uniform(0, 2 * np.pi)))
                       for i in range(1, n + 1)]
            fixed = all(torus_act(w, candidate).isclose(candidate) for w in circles)
            balanced = conditional_expectation(candidate).isclose(candidate)
            if fixed != balanced:
                return _finish(name, limit, started, False,
                               "fixed-point characterization failed")
            checked += 1
        e = conditional_expectation(x)
        if not conditional_expectation(e).isclose(e):
            return _finish(name, limit, started, False, "projection not idempotent")
    if not conditional_expectation(Expression.one()).isclose(Expression.one()):
        return _finish(name, limit, started, False, "projection not unital")
    for _ in range(100):
        a = _balanced_monomial(rng, n)
        b = _balanced_monomial(rng, n)
        x = _random_expression(rng, n, terms=3)
        lhs = conditional_expectation(multiply(multiply(a, x, q), b, q))
        rhs = multiply(multiply(a, conditional_expectation(x), q), b, q)
        if not lhs.isclose(rhs):
            return _finish(name, limit, started, False, "bimodule property failed")
    return _finish(name, limit, started, True,
                   f"{checked} fixed-point cases, 100 bimodule triples",
                   {"expressions": checked})


def check_unitary_membership(extra_q: Sequence[QMatrix] = ()) -> CheckResult:
    """Diagonal unitaries pass, generic dense ones fail when they must.

    Five random zero-diagonal matrices exercise identity, diagonal,
    product and adjoint sampling; two matrices with separated diagonal
    entries force 50 dense unitaries each to fail; the swap matrix
    passes for real q_12 and fails for imaginary q_12.
    """
    name, limit = "unitary-membership", 5.0
    started = time.perf_counter()
    pool = [QMatrix.random(2, seed=901), QMatrix.random(2, seed=902),
            QMatrix.random(2, seed=903), QMatrix.random(3, seed=904),
            QMatrix.random(3, seed=905)]
    pool += list(extra_q)
    for q in pool:
        report = group_axiom_sample(q, trials=50, seed=906)
        if not report.passed:
            return _finish(name, limit, started, False,
                           f"axiom sampling failed at n={q.n}")
    general = [QMatrix.random(2, seed=907, diagonal=(0.2, -0.3)),
               QMatrix.random(3, seed=908, diagonal=(0.1, 0.35, -0.25))]
    for q in general:
        report = group_axiom_sample(q, trials=50, seed=909)
        if not (report.distinct_diagonal
                and report.nondiagonal_failures == report.nondiagonal_trials == 50
                and report.passed):
            return _finish(name, limit, started, False,
                           f"dense unitaries not rejected at n={q.n}")
    swap = UnitaryCandidate(np.array([[0, 1], [1, 0]], dtype=complex))
    q_real = QMatrix(np.array([[0, 0.5], [0.5, 0]], dtype=complex))
    q_imag = QMatrix(np.array([[0, 0.5j], [-0.5j, 0]], dtype=complex))
    ok_real, _ = relation_compatibility(swap, q_real)
    ok_imag, witness = relation_compatibility(swap, q_imag)
    ok = ok_real and not ok_imag and witness is not None
    return _finish(name, limit, started, ok,
                   "sampled group axioms hold; swap matrix splits real vs imaginary q_12",
                   {"swap_real": ok_real, "swap_imag": ok_imag})


def check_compact_ideal(extra_q: Sequence[QMatrix] = ()) -> CheckResult:
    """Vacuum projection and matrix units behave like a full matrix family.

    Random q at two generators, truncation 4: the complement projection
    annihilates the generators, the word-pair units satisfy the product
    and adjoint relations within 1e-8 and are linearly independent; at
    q = 0 every residual drops below 1e-12.
    """
    name, limit = "compact-ideal", 30.0
    started = time.perf_counter()
    q = QMatrix.random(2, seed=1001)
    report = verify_ideal(TruncatedFock(q, 4), max_len=2)
    nontrivial = 0 < report.rank_p
    independent = report.independence_rank == report.family_size
    annihilates = report.worst_annihilation_residual <= 1e-9
    data = {"random": report.to_json()}
    if not (report.passed and nontrivial and independent and annihilates):
        return _finish(name, limit, started, False,
                       f"random-q ideal checks failed: {report.to_json()['worst_residuals']}",
                       data)
    zero_report = verify_ideal(TruncatedFock(QMatrix.zero(2), 4), max_len=2)
    zero_worst = max(zero_report.worst_product_residual,
                     zero_report.worst_adjoint_residual,
                     zero_report.worst_projection_residual,
                     zero_report.worst_annihilation_residual)
    data["zero"] = zero_report.to_json()
    ok = zero_report.passed and zero_worst <= 1e-12
    return _finish(name, limit, started, ok,
                   f"rank(p)={report.rank_p}, {report.family_size} independent units, "
                   f"q=0 worst residual {zero_worst:.2e} (tol 1e-12)",
                   data)


CHECKS: dict[str, Callable[[Sequence[QMatrix]], CheckResult]] = {
    "confluence": check_confluence,
    "pairing-bridge": check_pairing_bridge,
    "gram-positivity": check_gram_positivity,
    "truncated-relations": check_truncated_relations,
    "representation-rank": check_representation_rank,
    "block-units": check_block_units,
    "bratteli-agreement": check_bratteli,
    "torus-expectation": check_torus_expectation,
    "unitary-membership": check_unitary_membership,
    "compact-ideal": check_compact_ideal,
}


def run_acceptance(names: Iterable[str] | None = None,
                   extra_q: Sequence[QMatrix] = ()) -> list[CheckResult]:
    """Run the named acceptance checks (all of them by default).

    ``extra_q`` matrices are added to the sampling pools of the checks
    that accept arbitrary instances; the seeded reference cases always
    run unchanged.
    """
    selected = list(CHECKS) if names is None else list(names)
    unknown = [s for s in selected if s not in CHECKS]
    if unknown:
        raise KeyError(f"unknown acceptance checks: {', '.join(unknown)}")
    return [CHECKS[s](tuple(extra_q)) for s in selected]
