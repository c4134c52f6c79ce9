"""Block decomposition of the balanced-monomial filtration.

The balanced monomials a_mu a_sigma* with occ(mu) = occ(sigma) and
max occupation at most k span a finite-dimensional algebra. For each
occupation vector v <= (k,..,k) an inclusion-exclusion over the prefix
projections produces a central unit that acts as the identity on the
block of v and as zero on every other block; cutting by these units
splits the algebra into full matrix blocks of size multinomial(v).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .linalg import column_space_projector, numeric_rank
from .qmatrix import QMatrix
from .rep import (GradedOperator, TruncatedFock, balanced_block_keys,
                  flatten_on_blocks, monomial_operator, word_coordinate_map)
from .words import (Expression, MultiIndex, OccVector, multinomial, occ,
                    occ_range, subset_indicator, words_with_occ)


class BadOrder(ValueError):
    """Raised when occupation vectors are not ordered as required."""


class DecompositionFailure(ArithmeticError):
    """A structural check of the block decomposition failed."""

    def __init__(self, check: str, value: float, tol: float):
        self.check = check
        self.value = value
        self.tol = tol
        super().__init__(f"decomposition check {check!r} failed: {value:.3e} > {tol:.1e}")


@dataclass
class GicarSpan:
    """Monomial basis of the level-k balanced filtration step."""

    n: int
    k: int
    q: QMatrix | None
    monomials: list[tuple[MultiIndex, MultiIndex]]

    @classmethod
    def build(cls, n: int, k: int, q: QMatrix | None = None) -> "GicarSpan":
        monomials = []
        for v in occ_range(OccVector.constant(k, n)):
            words = words_with_occ(v)
            for mu in words:
                for sigma in words:
                    monomials.append((mu, sigma))
        return cls(n=n, k=k, q=q, monomials=monomials)

    @property
    def dimension(self) -> int:
        return len(self.monomials)

    def formula_dimension(self) -> int:
        return sum(multinomial(v) ** 2 for v in occ_range(OccVector.constant(self.k, self.n)))


def subspace_projection(v: OccVector, u: OccVector, t: TruncatedFock) -> GradedOperator:
    """Projection of block u onto the words whose first |v| letters have occupation v.

    Returned in orthonormal coordinates, so it is an orthogonal projection
    of rank multinomial(v) * multinomial(u - v).
    """
    if not v <= u:
        raise BadOrder(f"subspace projection needs v <= u, got v={v}, u={u}")
    key = ("subspace_projection", v, u)
    hit = t._cache.get(key)
    if hit is not None:
        return hit
    block = t.blocks[u]
    prefix_len = v.total
    selected = [
        col for col, word in enumerate(block.basis)
        if occ(word[:prefix_len], t.n) == v
    ]
    coords = word_coordinate_map(block)[:, selected]
    projector = column_space_projector(coords)
    op = GradedOperator({(u, u): projector}, t.dims)
    t._cache[key] = op
    return op


def extended_projection(v: OccVector, u: OccVector, k: int, t: TruncatedFock,
                        block_cap: OccVector | None = None) -> GradedOperator:
    """Consistent extension of the prefix projection to all blocks w <= cap.

    On blocks w >= u the extension restricts to the prefix projection of v
    in that block; on blocks that do not dominate u it vanishes.
    """
    if not v <= u:
        raise BadOrder(f"extension needs v <= u, got v={v}, u={u}")
    cap = OccVector.constant(k, t.n) if block_cap is None else block_cap
    if not u <= cap:
        raise BadOrder(f"extension needs u <= cap, got u={u}, cap={cap}")
    blocks: dict = {}
    for w in occ_range(cap):
        if u <= w:
            blocks[(w, w)] = subspace_projection(v, w, t).blocks[(w, w)]
        else:
            blocks[(w, w)] = np.zeros((t.dims[w], t.dims[w]), dtype=complex)
    return GradedOperator(blocks, t.dims)


def unit_operator(v: OccVector, k: int, t: TruncatedFock,
                  block_cap: OccVector | None = None) -> GradedOperator:
    """Inclusion-exclusion over prefix extensions: identity on block v, zero elsewhere.

    Sums (-1)^{|S|} extended_projection(v, v + indicator(S)) over the
    subsets S of {1..n} that keep v + indicator(S) inside the level-k box.
    """
    box = OccVector.constant(k, t.n)
    if not v <= box:
        raise BadOrder(f"unit needs v <= {box}, got v={v}")
    total: GradedOperator | None = None
    for size in range(t.n + 1):
        for subset in itertools.combinations(range(1, t.n + 1), size):
            u = v + subset_indicator(subset, t.n)
            if not u <= box:
                continue
            term = extended_projection(v, u, k, t, block_cap)
            signed = term if size % 2 == 0 else -1.0 * term
            total = signed if total is None else total + signed
    assert total is not None  # the empty subset always contributes
    return total


@dataclass
class BlockUnit:
    """Central unit of one block, with the expression it represents."""

    v: OccVector
    k: int
    operator: GradedOperator
    expression: Expression


def _span_operators(k: int, t: TruncatedFock):
    """Monomial basis of the level-k filtration step with its block matrices."""
    key = ("span_operators", k)
    hit = t._cache.get(key)
    if hit is not None:
        return hit
    span = GicarSpan.build(t.n, k, t.q)
    keys = balanced_block_keys(t, OccVector.constant(k, t.n))
    ops = [monomial_operator(mu, sigma, t) for mu, sigma in span.monomials]
    matrix = np.stack([flatten_on_blocks(op, keys) for op in ops])
    result = (span, keys, ops, matrix)
    t._cache[key] = result
    return result


def represented_span_rank(k: int, t: TruncatedFock) -> tuple[int, int]:
    """Rank of the represented level-k filtration step, with its target.

    Returns (numeric rank of the stacked monomial images, sum of squared
    block dimensions). Equality is the finite-scale faithfulness statement:
    the balanced monomials with occupation bounded by k stay linearly
    independent when represented on the blocks they preserve.
    """
    span, _, _, matrix = _span_operators(k, t)
    return numeric_rank(matrix), span.formula_dimension()


def _expression_of(op: GradedOperator, k: int, t: TruncatedFock,
                   tol: float = 1e-8) -> Expression:
    """Solve for the balanced expression whose block action matches ``op``."""
    span, keys, _, matrix = _span_operators(k, t)
    target = flatten_on_blocks(op, keys)
    coeffs, *_ = np.linalg.lstsq(matrix.T, target, rcond=None)
    residual = float(np.linalg.norm(matrix.T @ coeffs - target))
    if residual > tol * max(1.0, float(np.linalg.norm(target))):
        raise DecompositionFailure("unit-not-in-span", residual, tol)
    return Expression({key: c for key, c in zip(span.monomials, coeffs)})


def block_unit(v: OccVector, k: int, t: TruncatedFock) -> BlockUnit:
    """The central unit of block v inside the level-k filtration step."""
    op = unit_operator(v, k, t)
    return BlockUnit(v=v, k=k, operator=op, expression=_expression_of(op, k, t))


@dataclass
class BlockSummary:
    v: OccVector
    dim: int
    unit_rank: int
    checks: dict[str, float | bool | int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "v": list(self.v.entries),
            "dim": self.dim,
            "unit_rank": self.unit_rank,
            "checks": dict(self.checks),
        }


@dataclass
class DecompositionReport:
    n: int
    k: int
    blocks: list[BlockSummary]
    total_dim: int
    sum_to_identity: float
    pairwise_orthogonality: float
    max_commutator: float
    tol: float
    central_tol: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "k": self.k,
            "blocks": [b.to_json() for b in self.blocks],
            "total_dim": self.total_dim,
            "sum_to_identity": self.sum_to_identity,
            "pairwise_orthogonality": self.pairwise_orthogonality,
            "max_commutator": self.max_commutator,
            "passed": self.passed,
        }


def decompose(k: int, t: TruncatedFock, tol: float = 1e-9, central_tol: float = 1e-8,
              strict: bool = False) -> DecompositionReport:
    """Split the level-k filtration step into its matrix blocks and check them.

    For each v <= (k,..,k): the unit is a self-adjoint idempotent of rank
    multinomial(v), central within the step, the corner it cuts has linear
    dimension multinomial(v)**2 and is closed under products and adjoints,
    and the units are pairwise orthogonal and sum to the identity.
    """
    box = OccVector.constant(k, t.n)
    vs = occ_range(box)
    units = {v: unit_operator(v, k, t) for v in vs}
    span, keys, ops, matrix = _span_operators(k, t)
    ident = GradedOperator.identity(t.dims, keys)

    def fail(check: str, value: float, bound: float):
        if strict and value > bound:
            raise DecompositionFailure(check, value, bound)

    total = GradedOperator.zero(t.dims)
    for v in vs:
        total = total + units[v]
    sum_residual = (total - ident).norm()
    fail("units-sum-to-identity", sum_residual, tol)

    orth = 0.0
    for a in range(len(vs)):
        for b in range(a + 1, len(vs)):
            orth = max(orth, (units[vs[a]] @ units[vs[b]]).norm())
    fail("units-pairwise-orthogonal", orth, tol)

    max_comm = 0.0
    for v in vs:
        unit = units[v]
        for op in ops:
            max_comm = max(max_comm, (unit @ op - op @ unit).norm())
    fail("units-central", max_comm, central_tol)

    summaries = []
    for v in vs:
        unit = units[v]
        d = multinomial(v)
        self_adj = (unit - unit.adjoint()).norm()
        idem = (unit @ unit - unit).norm()
        fail(f"unit-self-adjoint-{v}", self_adj, tol)
        fail(f"unit-idempotent-{v}", idem, tol)
        unit_rank = numeric_rank(unit.dense())

        # the unit acts as the identity on its own block and as zero elsewhere
        own = float(np.max(np.abs(unit.block(v, v) - np.eye(t.dims[v]))))
        others = max(
            (float(np.max(np.abs(unit.block(w, w)))) for w in keys if w != v),
            default=0.0,
        )
        fail(f"unit-identity-on-own-block-{v}", own, tol)
        fail(f"unit-zero-off-block-{v}", others, tol)

        # corner cut by the unit: operators x * unit for x in the v-basis
        v_words = words_with_occ(v)
        corner_ops = [monomial_operator(mu, sigma, t) @ unit for mu in v_words for sigma in v_words]
        corner = np.stack([flatten_on_blocks(op, keys) for op in corner_ops])
        span_dim = numeric_rank(corner)
        products = [corner_ops[a] @ corner_ops[b] for a in range(len(corner_ops)) for b in range(len(corner_ops))]
        adjoints = [op.adjoint() for op in corner_ops]
        closure = np.vstack([
            corner,
            np.stack([flatten_on_blocks(op, keys) for op in products + adjoints]),
        ])
        closure_dim = numeric_rank(closure)

        summaries.append(BlockSummary(
            v=v,
            dim=d * d,
            unit_rank=unit_rank,
            checks={
                "self_adjoint": self_adj,
                "idempotent": idem,
                "identity_on_own_block": own,
                "zero_off_block": others,
                "span_dim": span_dim,
                "closure_dim": closure_dim,
                "unit_rank_expected": d,
                "span_dim_expected": d * d,
            },
        ))
        if strict and unit_rank != d:
            raise DecompositionFailure(f"unit-rank-{v}", float(unit_rank), float(d))
        if strict and (span_dim != d * d or closure_dim != d * d):
            raise DecompositionFailure(f"corner-dimension-{v}", float(closure_dim), float(d * d))

    passed = (
        sum_residual <= tol
        and orth <= tol
        and max_comm <= central_tol
        and all(
            s.checks["self_adjoint"] <= tol
            and s.checks["idempotent"] <= tol
            and s.checks["identity_on_own_block"] <= tol
            and s.checks["zero_off_block"] <= tol
            and s.unit_rank == s.checks["unit_rank_expected"]
            and s.checks["span_dim"] == s.dim
            and s.checks["closure_dim"] == s.dim
            for s in summaries
        )
    )
    return DecompositionReport(
        n=t.n, k=k, blocks=summaries,
        total_dim=sum(s.dim for s in summaries),
        sum_to_identity=sum_residual,
        pairwise_orthogonality=orth,
        max_commutator=max_comm,
        tol=tol, central_tol=central_tol,
        passed=passed,
    )
