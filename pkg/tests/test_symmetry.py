"""Relation-preserving unitaries, torus action, balanced projection."""

import numpy as np
import pytest

from qisom import (Expression, QMatrix, TorusElement, UnitaryCandidate,
                   conditional_expectation, group_axiom_sample, multiply,
                   relation_compatibility, star, torus_act)
from qisom.symmetry import (NotUnitary, random_diagonal_unitary,
                            random_unitary)


def rotation(theta: float) -> UnitaryCandidate:
    c, s = np.cos(theta), np.sin(theta)
    return UnitaryCandidate(np.array([[c, -s], [s, c]]))


class TestUnitaryCandidate:
    def test_accepts_unitary(self):
        u = UnitaryCandidate(np.eye(3))
        assert u.n == 3
        assert u.is_diagonal()

    def test_rejects_non_unitary(self):
        with pytest.raises(NotUnitary):
            UnitaryCandidate(np.array([[1.0, 0.0], [0.0, 2.0]]))
        with pytest.raises(NotUnitary):
            UnitaryCandidate(np.ones((2, 3)))

    def test_matrix_is_frozen(self):
        u = UnitaryCandidate(np.eye(2))
        with pytest.raises(ValueError):
            u.matrix[0, 0] = 5.0

    def test_random_factories(self):
        rng = np.random.default_rng(1)
        dense = random_unitary(3, rng)
        assert np.allclose(dense.matrix.conj().T @ dense.matrix, np.eye(3), atol=1e-12)
        assert random_diagonal_unitary(3, rng).is_diagonal()


class TestRelationCompatibility:
    def test_identity_and_diagonal_always_pass(self, q3):
        ok, witness = relation_compatibility(UnitaryCandidate(np.eye(3)), q3)
        assert ok and witness is None
        rng = np.random.default_rng(0)
        for _ in range(10):
            ok, _ = relation_compatibility(random_diagonal_unitary(3, rng), q3)
            assert ok

    def test_swap_depends_on_coefficient_reality(self):
        # exchanging the generators needs q12 = q21, i.e. a real coefficient
        swap = UnitaryCandidate(np.array([[0.0, 1.0], [1.0, 0.0]]))
        real_q = QMatrix([[0.0, 0.5], [0.5, 0.0]])
        ok, _ = relation_compatibility(swap, real_q)
        assert ok
        complex_q = QMatrix([[0.0, 0.5j], [-0.5j, 0.0]])
        ok, witness = relation_compatibility(swap, complex_q)
        assert not ok
        assert witness == (1, 2, 2, 1)

    def test_rotation_fails_for_distinct_diagonal(self):
        q = QMatrix.random(2, seed=2, diagonal=(0.1, 0.4))
        ok, witness = relation_compatibility(rotation(0.3), q)
        assert not ok
        assert witness is not None and len(witness) == 4
        assert all(1 <= idx <= 2 for idx in witness)

    def test_every_unitary_passes_for_zero_coefficients(self):
        q = QMatrix.zero(2)
        rng = np.random.default_rng(3)
        for _ in range(10):
            ok, _ = relation_compatibility(random_unitary(2, rng), q)
            assert ok

    def test_size_mismatch(self, q3):
        with pytest.raises(ValueError):
            relation_compatibility(UnitaryCandidate(np.eye(2)), q3)


class TestGroupAxiomSample:
    def test_isometric_coefficients(self, q3):
        report = group_axiom_sample(q3, trials=40, seed=1)
        assert report.passed
        assert report.identity_passes
        assert report.diagonal_passes == 40
        assert report.product_passes == report.product_trials
        assert report.adjoint_passes == 40
        # zero diagonal does not separate generators, so dense rejection
        # sampling stays disabled
        assert not report.distinct_diagonal
        assert report.nondiagonal_trials == 0

    def test_distinct_diagonal_rejects_dense(self):
        q = QMatrix.random(3, seed=4, diagonal=(0.1, 0.35, -0.25))
        report = group_axiom_sample(q, trials=25, seed=2)
        assert report.passed
        assert report.distinct_diagonal
        assert report.nondiagonal_failures == report.nondiagonal_trials == 25

    def test_serialization(self, q2):
        data = group_axiom_sample(q2, trials=5, seed=0).to_json()
        assert data["schema"] == 1
        assert data["passed"] is True
        assert data["trials"] == 5


class TestTorusElement:
    def test_validates_phases(self):
        TorusElement((1j, -1.0))
        with pytest.raises(ValueError):
            TorusElement((0.5,))
        with pytest.raises(ValueError):
            TorusElement(())

    def test_factories(self):
        w = TorusElement.from_angles([0.0, np.pi])
        assert w.phases[0] == pytest.approx(1.0)
        assert w.phases[1] == pytest.approx(-1.0)
        e = TorusElement.coordinate(2, 3, 1j)
        assert e.phases == (1.0, 1j, 1.0)


class TestTorusAction:
    def test_scales_by_occupation_phases(self):
        w = TorusElement((1j, -1.0))
        x = Expression.monomial((1, 1, 2), (2,), 1.0)
        acted = torus_act(w, x)
        # factor = w1^2 * w2 * conj(w2) = (1j)^2 = -1
        assert acted.coefficient((1, 1, 2), (2,)) == pytest.approx(-1.0)

    def test_fixes_balanced_monomials(self):
        w = TorusElement.from_angles([0.7, -1.3])
        x = Expression.monomial((1, 2), (2, 1), 2.5)
        assert torus_act(w, x).isclose(x)

    def test_is_multiplicative(self, q2):
        w = TorusElement.from_angles([0.4, 2.2])
        x = Expression.monomial((1,), (2,)) + Expression.one()
        y = Expression.monomial((2,), (), 1j)
        lhs = torus_act(w, multiply(x, y, q2))
        rhs = multiply(torus_act(w, x), torus_act(w, y), q2)
        assert lhs.isclose(rhs)

    def test_commutes_with_star(self):
        w = TorusElement.from_angles([1.1, 0.2])
        x = Expression.monomial((1, 2), (2,), 2.0 - 1.0j)
        assert torus_act(w, star(x)).isclose(star(torus_act(w, x)))

    def test_index_out_of_range(self):
        w = TorusElement((1j,))
        with pytest.raises(ValueError):
            torus_act(w, Expression.monomial((2,)))


class TestConditionalExpectation:
    def test_keeps_balanced_terms_only(self):
        x = (Expression.one()
             + Expression.monomial((1,), (), 3.0)
             + Expression.monomial((1,), (1,), 2.0)
             + Expression.monomial((1, 2), (2, 1), -1.0))
        e = conditional_expectation(x)
        assert e.coefficient(()) == 1.0
        assert e.coefficient((1,)) == 0.0
        assert e.coefficient((1,), (1,)) == 2.0
        assert e.coefficient((1, 2), (2, 1)) == -1.0

    def test_idempotent(self):
        x = Expression.monomial((1, 2), (1,)) + Expression.monomial((2,), (2,))
        once = conditional_expectation(x)
        assert conditional_expectation(once).isclose(once)

    def test_unit_preserved(self):
        assert conditional_expectation(Expression.one()).isclose(Expression.one())

    def test_balanced_bimodule_property(self, q2):
        # E(a x b) = a E(x) b when a and b are balanced
        a = Expression.monomial((1,), (1,), 1.0)
        b = Expression.monomial((2,), (2,), 1.0) + Expression.one()
        x = Expression.monomial((1,), (2,), 2.0) + Expression.monomial((2,), (2,))
        lhs = conditional_expectation(multiply(multiply(a, x, q2), b, q2))
        rhs = multiply(multiply(a, conditional_expectation(x), q2), b, q2)
        assert lhs.isclose(rhs)

    def test_fixed_points_match_torus_invariance(self):
        rng = np.random.default_rng(7)
        samples = [
            Expression.monomial((1,), (1,), 1.0),
            Expression.monomial((1,), (2,), 1.0),
            Expression.monomial((1, 2), (2, 1), 1.0) + Expression.one(),
            Expression.monomial((2, 2), (), 1.0),
        ]
        for x in samples:
            balanced = conditional_expectation(x).isclose(x)
            invariant = all(
                torus_act(TorusElement.from_angles(rng.uniform(0, 2 * np.pi, 2)), x).isclose(x)
                for _ in range(20)
            )
            assert balanced == invariant
