"""Central units, prefix projections, block decomposition."""

import numpy as np
import pytest

from qisom import (BadOrder, GicarSpan, GradedOperator, OccVector, QMatrix,
                   TruncatedFock, block_unit, decompose, extended_projection,
                   monomial_operator, multinomial, occ_range,
                   represented_span_rank, subspace_projection, unit_operator)
from qisom.gicar import DecompositionFailure
from qisom.linalg import numeric_rank
from qisom.rep import act_on_expression


class TestGicarSpan:
    def test_dimension_matches_formula(self):
        for n, k in [(1, 3), (2, 1), (2, 2), (3, 1)]:
            span = GicarSpan.build(n, k)
            assert span.dimension == span.formula_dimension()

    def test_known_dimensions(self):
        assert GicarSpan.build(2, 1).dimension == 7
        assert GicarSpan.build(2, 2).dimension == 63
        assert GicarSpan.build(3, 1).dimension == 52

    def test_monomials_are_balanced(self):
        from qisom.words import occ
        span = GicarSpan.build(2, 2)
        assert all(occ(mu, 2) == occ(sigma, 2) for mu, sigma in span.monomials)


class TestSubspaceProjection:
    def test_rank_formula(self, t4):
        v = OccVector((1, 0))
        u = OccVector((1, 1))
        p = subspace_projection(v, u, t4)
        m = p.block(u, u)
        assert np.allclose(m, m.conj().T, atol=1e-12)
        assert np.allclose(m @ m, m, atol=1e-12)
        assert numeric_rank(m) == multinomial(v) * multinomial(u - v)

    def test_full_prefix_is_identity(self, t4):
        u = OccVector((1, 1))
        p = subspace_projection(u, u, t4)
        assert np.allclose(p.block(u, u), np.eye(t4.dims[u]), atol=1e-12)

    def test_requires_dominated_vector(self, t4):
        with pytest.raises(BadOrder):
            subspace_projection(OccVector((2, 0)), OccVector((1, 1)), t4)


class TestExtendedProjection:
    def test_vanishes_below_u(self, t4):
        v = OccVector((1, 0))
        u = OccVector((1, 1))
        ext = extended_projection(v, u, 2, t4)
        below = OccVector((2, 0))
        assert np.allclose(ext.block(below, below), 0.0)
        assert np.allclose(
            ext.block(u, u), subspace_projection(v, u, t4).block(u, u))

    def test_restricts_on_dominating_blocks(self, t4):
        v = OccVector((1, 0))
        u = OccVector((1, 0))
        w = OccVector((2, 1))
        ext = extended_projection(v, u, 2, t4)
        assert np.allclose(
            ext.block(w, w), subspace_projection(v, w, t4).block(w, w))

    def test_order_violations(self, t4):
        with pytest.raises(BadOrder):
            extended_projection(OccVector((1, 1)), OccVector((1, 0)), 2, t4)
        with pytest.raises(BadOrder):
            extended_projection(OccVector((1, 0)), OccVector((3, 0)), 2, t4)


class TestUnitOperator:
    def test_identity_on_own_block_only(self, t4):
        k = 1
        box = OccVector.constant(k, 2)
        for v in occ_range(box):
            unit = unit_operator(v, k, t4)
            assert np.allclose(unit.block(v, v), np.eye(t4.dims[v]), atol=1e-10)
            for w in occ_range(box):
                if w != v:
                    assert np.allclose(unit.block(w, w), 0.0, atol=1e-10)

    def test_rank_is_multinomial(self, t4):
        v = OccVector((1, 1))
        unit = unit_operator(v, 2, t4)
        assert numeric_rank(unit.dense()) == multinomial(v) == 2

    def test_rejects_vector_outside_box(self, t4):
        with pytest.raises(BadOrder):
            unit_operator(OccVector((2, 0)), 1, t4)


class TestBlockUnit:
    def test_expression_reproduces_operator(self, t4):
        unit = block_unit(OccVector((1, 0)), 1, t4)
        acted = act_on_expression(unit.expression, t4)
        keys = set(occ_range(OccVector.constant(1, 2)))
        for w in keys:
            assert np.allclose(
                acted.block(w, w), unit.operator.block(w, w), atol=1e-8)

    def test_expression_is_balanced(self, t4):
        from qisom.words import occ
        unit = block_unit(OccVector((0, 1)), 1, t4)
        assert all(occ(mu, 2) == occ(sigma, 2)
                   for (mu, sigma) in dict(unit.expression.items()))


class TestRepresentedSpanRank:
    def test_two_generators_level_one(self, t4):
        rank, target = represented_span_rank(1, t4)
        assert (rank, target) == (7, 7)

    def test_three_generators_level_one(self, q3):
        t = TruncatedFock(q3, 3)
        rank, target = represented_span_rank(1, t)
        assert (rank, target) == (52, 52)


class TestDecompose:
    def test_two_generators_level_one(self, t4):
        report = decompose(1, t4)
        assert report.passed
        assert report.n == 2 and report.k == 1
        assert report.total_dim == 7
        assert report.sum_to_identity < 1e-9
        assert report.pairwise_orthogonality < 1e-9
        assert report.max_commutator < 1e-8
        by_v = {b.v: b for b in report.blocks}
        assert set(by_v) == set(occ_range(OccVector.constant(1, 2)))
        for v, summary in by_v.items():
            d = multinomial(v)
            assert summary.unit_rank == d
            assert summary.dim == d * d
            assert summary.checks["span_dim"] == d * d
            assert summary.checks["closure_dim"] == d * d

    def test_level_two(self, t6):
        report = decompose(2, t6)
        assert report.passed
        assert report.total_dim == 63
        assert {b.v: b.dim for b in report.blocks}[OccVector((2, 1))] == 9

    def test_strict_mode_raises_on_impossible_tolerance(self, t4):
        # residuals at k=1 can be exactly zero, so only a negative bound
        # is guaranteed to trip the strict path
        with pytest.raises(DecompositionFailure):
            decompose(1, t4, tol=-1.0, strict=True)

    def test_report_serialization(self, t4):
        data = decompose(1, t4).to_json()
        assert data["schema"] == 1
        assert data["passed"] is True
        assert len(data["blocks"]) == 4
        assert all({"v", "dim", "unit_rank", "checks"} <= set(b) for b in data["blocks"])


def test_decompose_zero_deformation():
    # with q = 0 the representing matrices are permutation-like and exact
    t = TruncatedFock(QMatrix.zero(2), 4)
    report = decompose(1, t)
    assert report.passed
    assert report.max_commutator < 1e-12
