"""Computable structure theory for algebras of q-commuting isometries.

The package turns the finite-dimensional structure of the algebra
generated by n isometries with relations a_i* a_j = q_ij a_j a_i* into
concrete linear algebra: normal-form rewriting, deformed inner products
and Gram blocks, a truncated Fock representation, the block decomposition
of the balanced-monomial filtration, embedding multiplicities, linear
symmetries, and the matrix units of the compact ideal.
"""

from .bratteli import (BratteliEdge, Diagram, NonIntegralMultiplicity,
                       build_diagram, closed_edges, diagram_dot, diagram_json,
                       emit_diagram, multiplicity_closed,
                       multiplicity_numeric, numeric_edges)
from .fock import (GramBlock, NotPositive, fock_inner, gram_block,
                   orthonormalize, pairing_scalars)
from .gicar import (BadOrder, BlockUnit, DecompositionFailure, GicarSpan,
                    block_unit, decompose, extended_projection,
                    represented_span_rank, subspace_projection, unit_operator)
from .ideal import (IdealWitness, SpectralGapTooSmall, TruncationOverflow,
                    ideal_witness, matrix_unit, orthonormalized_creation,
                    subalgebra_unit, verify_ideal)
from .qmatrix import QMatrix, QMatrixError
from .rep import (GradedOperator, RelationViolated, TruncatedFock,
                  act_on_expression, annihilation, creation,
                  monomial_operator, verify_relations,
                  word_coordinate_inverse, word_coordinate_map)
from .rewrite import NotARedex, find_redex, multiply, normal_form, rewrite_step, star
from .symmetry import (AxiomSampleReport, TorusElement, UnitaryCandidate,
                       conditional_expectation, group_axiom_sample,
                       relation_compatibility, torus_act)
from .words import (Expression, NormalMonomial, OccVector, Word, multinomial,
                    occ, occ_balanced, occ_range, subset_indicator,
                    words_with_occ)

__version__ = "0.1.0"

__all__ = [
    "AxiomSampleReport", "BadOrder", "BlockUnit", "BratteliEdge",
    "DecompositionFailure", "Diagram", "Expression", "GicarSpan", "GradedOperator",
    "GramBlock", "IdealWitness", "NonIntegralMultiplicity", "NormalMonomial",
    "NotARedex", "NotPositive", "OccVector", "QMatrix", "QMatrixError",
    "RelationViolated", "SpectralGapTooSmall", "TorusElement",
    "TruncatedFock", "TruncationOverflow", "UnitaryCandidate", "Word",
    "act_on_expression", "annihilation", "block_unit", "build_diagram",
    "closed_edges", "conditional_expectation", "creation", "decompose",
    "diagram_dot", "diagram_json", "emit_diagram", "extended_projection",
    "find_redex", "fock_inner",
    "gram_block", "group_axiom_sample", "ideal_witness", "matrix_unit",
    "monomial_operator", "multinomial", "multiplicity_closed",
    "multiplicity_numeric", "multiply", "normal_form", "numeric_edges",
    "occ", "occ_balanced", "occ_range", "orthonormalize",
    "orthonormalized_creation", "pairing_scalars", "relation_compatibility",
    "represented_span_rank",
    "rewrite_step", "star", "subalgebra_unit", "subset_indicator",
    "subspace_projection", "torus_act", "unit_operator", "verify_ideal",
    "verify_relations", "word_coordinate_inverse", "word_coordinate_map",
    "words_with_occ",
]
