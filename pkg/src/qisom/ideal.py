"""Vacuum projection and matrix units generating the compact ideal.

The subalgebra generated by the range projections a_i a_i* has a unit:
the support projection of sum_i a_i a_i*, computed spectrally blockwise.
Its complement p kills every generator from the right (p a_i = 0), and
conjugating p by orthonormalized creation words produces a family of
matrix units

    e[alpha, beta] = ahat_alpha p ahat_beta*

satisfying e[a,b] e[c,d] = delta(b,c) e[a,d] and e[a,b]* = e[b,a], with
every e[alpha, alpha] a rank-one projection. In the truncated
representation p is the projection onto the vacuum block.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import numeric_rank
from .rep import (GradedOperator, TruncatedFock, creation, monomial_operator,
                  word_coordinate_inverse)
from .words import MultiIndex, OccVector, occ

SUPPORT_THRESHOLD = 1e-8


class SpectralGapTooSmall(ArithmeticError):
    """An eigenvalue fell too close to the support threshold to classify."""

    def __init__(self, value: float, threshold: float):
        self.value = value
        self.threshold = threshold
        super().__init__(
            f"eigenvalue {value:.3e} is too close to the support threshold {threshold:.1e}"
        )


class TruncationOverflow(ValueError):
    """A requested word does not fit inside the truncation."""


@dataclass
class IdealWitness:
    """Support data of the range subalgebra inside one truncated space."""

    one_b: GradedOperator
    p: GradedOperator
    rank_one_b: int
    rank_p: int
    spectral_gap: float
    largest_discarded: float
    units: dict = field(default_factory=dict)


def _range_sum(t: TruncatedFock) -> GradedOperator:
    total = GradedOperator.zero(t.dims)
    for i in range(1, t.n + 1):
        ci = creation(i, t)
        total = total + ci @ ci.adjoint()
    return total


def subalgebra_unit(t: TruncatedFock, threshold: float = SUPPORT_THRESHOLD) -> GradedOperator:
    """Support projection of sum_i a_i a_i*, blockwise spectral calculus."""
    return ideal_witness(t, threshold).one_b


def ideal_witness(t: TruncatedFock, threshold: float = SUPPORT_THRESHOLD) -> IdealWitness:
    key = ("ideal_witness", threshold)
    hit = t._cache.get(key)
    if hit is not None:
        return hit
    m = _range_sum(t)
    blocks = {}
    rank = 0
    gap = np.inf
    discarded = 0.0
    for v in t.blocks:
        matrix = m.block(v, v)
        vals, vecs = np.linalg.eigh(matrix)
        for value in vals:
            if threshold / 100.0 < value < threshold * 100.0:
                raise SpectralGapTooSmall(float(value), threshold)
        keep = vals > threshold
        rank += int(np.sum(keep))
        if np.any(keep):
            gap = min(gap, float(vals[keep].min()))
        if np.any(~keep):
            discarded = max(discarded, float(vals[~keep].max()))
        basis = vecs[:, keep]
        blocks[(v, v)] = basis @ basis.conj().T
    one_b = GradedOperator(blocks, t.dims)
    ident = GradedOperator.identity(t.dims)
    p = ident - one_b
    witness = IdealWitness(
        one_b=one_b, p=p,
        rank_one_b=rank, rank_p=t.total_dim - rank,
        spectral_gap=float(gap), largest_discarded=discarded,
    )
    t._cache[key] = witness
    return witness


def orthonormalized_creation(alpha: MultiIndex, t: TruncatedFock) -> GradedOperator:
    """The creation operator of the orthonormalized word ahat_alpha.

    Combines the creation words of the basis of occ(alpha) with the
    triangular change-of-basis coefficients of that block.
    """
    alpha = tuple(alpha)
    if len(alpha) > t.L:
        raise TruncationOverflow(f"word of length {len(alpha)} exceeds truncation L = {t.L}")
    key = ("orthonormalized_creation", alpha)
    hit = t._cache.get(key)
    if hit is not None:
        return hit
    v = occ(alpha, t.n)
    block = t.blocks[v]
    coeffs = word_coordinate_inverse(block)[:, block.index[alpha]]
    total = GradedOperator.zero(t.dims)
    for word, coeff in zip(block.basis, coeffs):
        if abs(coeff) < 1e-15:
            continue
        total = total + coeff * monomial_operator(word, (), t)
    t._cache[key] = total
    return total


def matrix_unit(alpha: MultiIndex, beta: MultiIndex, t: TruncatedFock) -> GradedOperator:
    """e[alpha, beta] = ahat_alpha p ahat_beta*."""
    alpha = tuple(alpha)
    beta = tuple(beta)
    if max(len(alpha), len(beta)) > t.L:
        raise TruncationOverflow(
            f"words of lengths {len(alpha)}, {len(beta)} exceed truncation L = {t.L}"
        )
    witness = ideal_witness(t)
    key = (alpha, beta)
    hit = witness.units.get(key)
    if hit is not None:
        return hit
    left = orthonormalized_creation(alpha, t)
    right = orthonormalized_creation(beta, t)
    unit = left @ witness.p @ right.adjoint()
    witness.units[key] = unit
    return unit


def _words_up_to(n: int, max_len: int) -> list[MultiIndex]:
    out: list[MultiIndex] = [()]
    frontier: list[MultiIndex] = [()]
    for _ in range(max_len):
        frontier = [word + (i,) for word in frontier for i in range(1, n + 1)]
        out.extend(frontier)
    return out


@dataclass
class IdealReport:
    n: int
    L: int
    max_len: int
    rank_p: int
    spectral_gap: float
    worst_product_residual: float
    worst_adjoint_residual: float
    worst_projection_residual: float
    worst_annihilation_residual: float
    independence_rank: int
    family_size: int
    diagonal_ranks_ok: bool
    tol: float
    adjoint_tol: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "L": self.L,
            "max_len": self.max_len,
            "rank_p": self.rank_p,
            "spectral_gap": self.spectral_gap,
            "worst_residuals": {
                "product": self.worst_product_residual,
                "adjoint": self.worst_adjoint_residual,
                "diagonal_projection": self.worst_projection_residual,
                "p_annihilates_generators": self.worst_annihilation_residual,
            },
            "independence_rank": self.independence_rank,
            "family_size": self.family_size,
            "diagonal_ranks_ok": self.diagonal_ranks_ok,
            "passed": self.passed,
        }


def verify_ideal(t: TruncatedFock, max_len: int, tol: float = 1e-8,
                 adjoint_tol: float = 1e-9) -> IdealReport:
    """Check the matrix-unit relations for all word pairs up to max_len.

    Requires max_len <= L - 1 so products of two units stay inside the
    truncation with room to spare.
    """
    if max_len > t.L - 1:
        raise TruncationOverflow(f"max_len {max_len} needs truncation L >= {max_len + 1}")
    witness = ideal_witness(t)
    words = _words_up_to(t.n, max_len)
    units = {(a, b): matrix_unit(a, b, t) for a in words for b in words}

    worst_product = 0.0
    for (a, b), e_ab in units.items():
        for (c, d), e_cd in units.items():
            expected = units[(a, d)] if b == c else None
            product = e_ab @ e_cd
            residual = (product - expected).norm() if expected is not None else product.norm()
            worst_product = max(worst_product, residual)

    worst_adjoint = max(
        (units[(a, b)].adjoint() - units[(b, a)]).norm() for a in words for b in words
    )

    worst_projection = 0.0
    diagonal_ranks_ok = True
    for a in words:
        e_aa = units[(a, a)]
        worst_projection = max(worst_projection, (e_aa @ e_aa - e_aa).norm())
        worst_projection = max(worst_projection, (e_aa.adjoint() - e_aa).norm())
        diagonal_ranks_ok = diagonal_ranks_ok and numeric_rank(e_aa.dense()) == 1

    safe = lambda v: v.total <= t.L - 1
    worst_annihilation = 0.0
    for i in range(1, t.n + 1):
        ci = creation(i, t)
        worst_annihilation = max(worst_annihilation, (witness.p @ ci).restrict_source(safe).norm())
        worst_annihilation = max(
            worst_annihilation, (ci.adjoint() @ witness.p).restrict_source(safe).norm()
        )

    # linear independence of the whole family, flattened over a common block index
    all_keys = sorted(
        {key for unit in units.values() for key in unit.blocks},
        key=lambda pair: (pair[0].total, pair[0].entries, pair[1].total, pair[1].entries),
    )
    offsets = {}
    position = 0
    for src, dst in all_keys:
        offsets[(src, dst)] = position
        position += t.dims[src] * t.dims[dst]
    flat = np.zeros((len(units), position), dtype=complex)
    for row, unit in enumerate(units.values()):
        for key, matrix in unit.blocks.items():
            start = offsets[key]
            flat[row, start:start + matrix.size] = matrix.ravel()
    independence_rank = numeric_rank(flat)

    passed = (
        worst_product <= tol
        and worst_adjoint <= adjoint_tol
        and worst_projection <= adjoint_tol
        and worst_annihilation <= adjoint_tol
        and independence_rank == len(units)
        and diagonal_ranks_ok
        and 0 < witness.rank_p < t.total_dim
    )
    return IdealReport(
        n=t.n, L=t.L, max_len=max_len,
        rank_p=witness.rank_p,
        spectral_gap=witness.spectral_gap,
        worst_product_residual=worst_product,
        worst_adjoint_residual=worst_adjoint,
        worst_projection_residual=worst_projection,
        worst_annihilation_residual=worst_annihilation,
        independence_rank=independence_rank,
        family_size=len(units),
        diagonal_ranks_ok=diagonal_ranks_ok,
        tol=tol, adjoint_tol=adjoint_tol,
        passed=passed,
    )
