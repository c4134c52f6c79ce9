"""Linear symmetries of the commutation relations.

A unitary u acting on the generator span (a_i mapsto sum_j u_ji a_j)
preserves the relations exactly when

    conj(u_ki) * u_lj * (q_kl - q_ij) = 0   for all i, j, k, l.

Diagonal unitaries always satisfy this, which yields the torus action
scaling a_i by a phase w_i; its fixed points are exactly the balanced
monomials, and averaging over the torus is realized combinatorially by
deleting every unbalanced monomial.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qmatrix import QMatrix
from .words import Expression

COMPAT_TOL = 1e-10


class NotUnitary(ValueError):
    """Candidate matrix fails unitarity within tolerance."""


@dataclass(frozen=True)
class UnitaryCandidate:
    """An n x n matrix validated to be unitary within 1e-9."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        u = np.array(self.matrix, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise NotUnitary(f"candidate must be square, got shape {u.shape}")
        defect = float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
        if defect > 1e-9:
            raise NotUnitary(f"violated invariant u^H u = identity: defect {defect:.3e}")
        u.setflags(write=False)
        object.__setattr__(self, "matrix", u)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def is_diagonal(self, tol: float = 1e-12) -> bool:
        off = self.matrix - np.diag(np.diag(self.matrix))
        return float(np.max(np.abs(off))) <= tol


@dataclass(frozen=True)
class TorusElement:
    """A tuple of unimodular phases, one per generator."""

    phases: tuple[complex, ...]

    def __post_init__(self) -> None:
        phases = tuple(complex(w) for w in self.phases)
        if not phases:
            raise ValueError("torus element needs at least one phase")
        worst = max(abs(abs(w) - 1.0) for w in phases)
        if worst > 1e-12:
            raise ValueError(f"violated invariant |w_i| = 1: defect {worst:.3e}")
        object.__setattr__(self, "phases", phases)

    @property
    def n(self) -> int:
        return len(self.phases)

    @classmethod
    def from_angles(cls, angles) -> "TorusElement":
        return cls(tuple(np.exp(1j * float(a)) for a in angles))

    @classmethod
    def coordinate(cls, i: int, n: int, phase: complex) -> "TorusElement":
        """Phase at generator i, 1 elsewhere."""
        phases = [1.0 + 0j] * n
        phases[i - 1] = complex(phase)
        return cls(tuple(phases))


def relation_compatibility(u: UnitaryCandidate, q: QMatrix,
                           tol: float = COMPAT_TOL) -> tuple[bool, tuple[int, int, int, int] | None]:
    """Check the compatibility identity; on failure return a witness (i, j, k, l).

    The returned labels are 1-based and maximize the violation
    |conj(u_ki) u_lj (q_kl - q_ij)|.
    """
    if u.n != q.n:
        raise ValueError(f"unitary size {u.n} does not match n = {q.n}")
    qa = q.array
    # tensor[i, j, k, l] = conj(u[k, i]) * u[l, j] * (q[k, l] - q[i, j])
    left = np.einsum("ik,jl->ijkl", u.matrix.conj().T, u.matrix.T)
    tensor = left * (qa[None, None, :, :] - qa[:, :, None, None])
    violation = np.abs(tensor)
    worst = float(violation.max())
    if worst <= tol:
        return True, None
    i, j, k, l = np.unravel_index(int(np.argmax(violation)), violation.shape)
    return False, (int(i) + 1, int(j) + 1, int(k) + 1, int(l) + 1)


def random_unitary(n: int, rng: np.random.Generator) -> UnitaryCandidate:
    """Haar-style unitary from the QR factorization of a complex Gaussian."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    qmat, r = np.linalg.qr(z)
    # normalize column phases so the factorization is unique
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return UnitaryCandidate(qmat * phases[None, :])


def random_diagonal_unitary(n: int, rng: np.random.Generator) -> UnitaryCandidate:
    angles = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return UnitaryCandidate(np.diag(np.exp(1j * angles)))


@dataclass
class AxiomSampleReport:
    """Sampled evidence that the passing unitaries form a group."""

    n: int
    trials: int
    identity_passes: bool
    diagonal_passes: int
    product_passes: int
    product_trials: int
    adjoint_passes: int
    adjoint_trials: int
    distinct_diagonal: bool
    nondiagonal_failures: int
    nondiagonal_trials: int
    passed: bool

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "trials": self.trials,
            "identity_passes": self.identity_passes,
            "diagonal_passes": self.diagonal_passes,
            "product_passes": self.product_passes,
            "product_trials": self.product_trials,
            "adjoint_passes": self.adjoint_passes,
            "adjoint_trials": self.adjoint_trials,
            "distinct_diagonal": self.distinct_diagonal,
            "nondiagonal_failures": self.nondiagonal_failures,
            "nondiagonal_trials": self.nondiagonal_trials,
            "passed": self.passed,
        }


def group_axiom_sample(q: QMatrix, trials: int = 100, seed: int = 0) -> AxiomSampleReport:
    """Sample diagonal unitaries (always compatible), their products and
    adjoints, and, when the diagonal of q separates the generators, random
    dense unitaries that must fail."""
    rng = np.random.default_rng(seed)
    n = q.n
    identity_ok, _ = relation_compatibility(UnitaryCandidate(np.eye(n)), q)

    diagonal = [random_diagonal_unitary(n, rng) for _ in range(trials)]
    diagonal_passes = sum(relation_compatibility(u, q)[0] for u in diagonal)

    product_trials = min(trials, len(diagonal) - 1)
    product_passes = 0
    for a in range(product_trials):
        prod = UnitaryCandidate(diagonal[a].matrix @ diagonal[a + 1].matrix)
        product_passes += relation_compatibility(prod, q)[0]

    adjoint_passes = sum(
        relation_compatibility(UnitaryCandidate(u.matrix.conj().T), q)[0] for u in diagonal
    )

    diag = np.real(np.diag(q.array))
    distinct = bool(n > 1 and np.min(np.abs(diag[:, None] - diag[None, :]) + np.eye(n)) > 1e-9)
    nondiagonal_failures = 0
    nondiagonal_trials = 0
    if distinct:
        nondiagonal_trials = trials
        for _ in range(trials):
            u = random_unitary(n, rng)
            while u.is_diagonal(tol=1e-6):
                u = random_unitary(n, rng)
            ok, _ = relation_compatibility(u, q)
            nondiagonal_failures += not ok
    passed = (
        identity_ok
        and diagonal_passes == trials
        and product_passes == product_trials
        and adjoint_passes == trials
        and (not distinct or nondiagonal_failures == nondiagonal_trials)
    )
    return AxiomSampleReport(
        n=n, trials=trials, identity_passes=identity_ok,
        diagonal_passes=diagonal_passes,
        product_passes=product_passes, product_trials=product_trials,
        adjoint_passes=adjoint_passes, adjoint_trials=trials,
        distinct_diagonal=distinct,
        nondiagonal_failures=nondiagonal_failures, nondiagonal_trials=nondiagonal_trials,
        passed=passed,
    )


def torus_act(w: TorusElement, x: Expression) -> Expression:
    """Scale each monomial by prod_i w_i^{occ_i(mu)} * conj(w_i)^{occ_i(sigma)}."""
    out = {}
    for (mu, sigma), coeff in x.items():
        factor = 1.0 + 0j
        for i in mu:
            if i > w.n:
                raise ValueError(f"generator index {i} exceeds n = {w.n}")
            factor *= w.phases[i - 1]
        for i in sigma:
            if i > w.n:
                raise ValueError(f"generator index {i} exceeds n = {w.n}")
            factor *= w.phases[i - 1].conjugate()
        out[(mu, sigma)] = factor * coeff
    return Expression(out)


def conditional_expectation(x: Expression) -> Expression:
    """Project onto the balanced part by deleting every unbalanced monomial."""
    return Expression({
        (mu, sigma): coeff
        for (mu, sigma), coeff in x.items()
        if sorted(mu) == sorted(sigma)
    })
