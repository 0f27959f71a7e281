"""Norm evaluation, operator norms, embedding verdicts, sums, quotients."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import coset_min_norm, sphere_min_by_facet_lp
from polyban.banach import (
    EPS,
    ISOMETRIC,
    NOT_EPS,
    STRICT_EPS,
    LinMap,
    Space,
    classify_embedding,
    dual_norm_eval,
    l1_space,
    l1_sum,
    line,
    linf_space,
    lower_isometry_bound,
    map_distance,
    norm_eval,
    operator_norm,
    pullback_space,
    quotient,
    space_from_vrep,
    zero_space,
)
from polyban.errors import DimensionMismatch, PreconditionError
from polyban.exactlin import QMat, QVec
from polyban.polytope import Ball


def lmap(rows, domain, codomain):
    return LinMap(QMat.from_rows(rows, cols=domain.dim), domain, codomain)


class TestSpace:
    def test_requires_complete_ball(self):
        with pytest.raises(PreconditionError):
            Space(2, Ball.from_vrep(2, [QVec.of([1, 0]), QVec.of([0, 1])]))

    def test_dim_must_match(self):
        with pytest.raises(DimensionMismatch):
            Space(3, l1_space(2).ball)

    def test_canonical_equality(self):
        assert l1_space(2) == space_from_vrep(2, [QVec.of([0, -1]), QVec.of([1, 0])])


class TestNormEval:
    def test_linf(self):
        assert norm_eval(linf_space(2), QVec.of([1, -2])) == 2

    def test_l1(self):
        assert norm_eval(l1_space(2), QVec.of([1, 1])) == 2

    def test_sheared_ball(self):
        space = space_from_vrep(2, [QVec.of([1, 0]), QVec.of([1, 1])])
        assert norm_eval(space, QVec.of([0, 1])) == 2

    def test_zero_space(self):
        assert norm_eval(zero_space(), QVec.of([])) == 0

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatch):
            norm_eval(line(), QVec.of([1, 2]))


class TestDualNormEval:
    def test_l1_coordinate_functional(self):
        assert dual_norm_eval(l1_space(2), QVec.unit(2, 0)) == 1

    def test_linf_sum_functional(self):
        assert dual_norm_eval(linf_space(2), QVec.of([1, 1])) == 2

    def test_zero_functional(self):
        assert dual_norm_eval(l1_space(2), QVec.zero(2)) == 0


class TestOperatorNorm:
    def test_zero_map(self):
        assert operator_norm(LinMap.zero(l1_space(2), line())) == 0

    def test_identity(self):
        assert operator_norm(LinMap.identity(linf_space(2))) == 1

    def test_sum_functional_from_linf(self):
        T = lmap([[1, 1]], linf_space(2), line())
        assert operator_norm(T) == 2

    def test_zero_dim_domain(self):
        assert operator_norm(LinMap.zero(zero_space(), line())) == 0


class TestMapDistance:
    def test_equal_maps(self):
        T = lmap([[1, 0], [0, 1]], l1_space(2), l1_space(2))
        assert map_distance(T, T) == 0

    def test_identity_vs_zero(self):
        X = linf_space(1)
        assert map_distance(LinMap.identity(X), LinMap.zero(X, X)) == 1

    def test_identity_vs_shrink(self):
        X = line()
        S = LinMap.identity(X)
        T = lmap([[Fraction(3, 4)]], X, X)
        assert map_distance(S, T) == Fraction(1, 4)

    def test_mismatched_spaces(self):
        with pytest.raises(DimensionMismatch):
            map_distance(LinMap.identity(line()), LinMap.identity(l1_space(2)))


class TestLowerIsometryBound:
    def test_identity(self):
        assert lower_isometry_bound(LinMap.identity(l1_space(2))) == 1

    def test_projection_has_kernel_on_sphere(self):
        T = lmap([[1, 0]], linf_space(2), line())
        assert lower_isometry_bound(T) == 0

    def test_graph_map_into_linf(self):
        T = lmap([[1], [Fraction(1, 2)]], line(), linf_space(2))
        assert lower_isometry_bound(T) == 1

    def test_zero_dim_domain(self):
        assert lower_isometry_bound(LinMap.zero(zero_space(), line())) == 1

    def test_zero_dim_codomain(self):
        assert lower_isometry_bound(LinMap.zero(line(), zero_space())) == 0

    @settings(max_examples=20, deadline=None)
    @given(
        st.lists(
            st.fractions(min_value=-2, max_value=2, max_denominator=3),
            min_size=4,
            max_size=4,
        ),
        st.booleans(),
        st.booleans(),
    )
    def test_matches_primal_facet_lp(self, entries, dom_l1, cod_l1):
        domain = l1_space(2) if dom_l1 else linf_space(2)
        codomain = l1_space(2) if cod_l1 else linf_space(2)
        T = lmap([entries[:2], entries[2:]], domain, codomain)
        expected = sphere_min_by_facet_lp(T.matrix, domain, codomain)
        assert lower_isometry_bound(T) == expected


class TestClassifyEmbedding:
    def test_identity_isometric(self):
        got = classify_embedding(LinMap.identity(l1_space(2)), Fraction(1, 2))
        assert got.verdict == ISOMETRIC
        assert got.lower == 1 and got.upper == 1

    def test_strict(self):
        T = lmap([[Fraction(4, 5)]], line(), line())
        got = classify_embedding(T, Fraction(1, 2))
        assert got.verdict == STRICT_EPS
        assert got.lower == Fraction(4, 5)

    def test_boundary(self):
        T = lmap([[Fraction(2, 3)]], line(), line())
        got = classify_embedding(T, Fraction(1, 2))
        assert got.verdict == EPS
        assert got.lower == Fraction(2, 3) == 1 / (1 + Fraction(1, 2))

    def test_not_eps_too_small(self):
        T = lmap([[Fraction(1, 2)]], line(), line())
        assert classify_embedding(T, Fraction(1, 2)).verdict == NOT_EPS

    def test_not_eps_expanding(self):
        T = lmap([[2]], line(), line())
        assert classify_embedding(T, Fraction(1, 2)).verdict == NOT_EPS

    def test_zero_dim_domain_isometric(self):
        T = LinMap.zero(zero_space(), line())
        got = classify_embedding(T, Fraction(1, 4))
        assert (got.lower, got.upper, got.verdict) == (1, 1, ISOMETRIC)

    def test_lower_le_upper(self):
        T = lmap([[1, 0], [1, 1]], l1_space(2), linf_space(2))
        got = classify_embedding(T, Fraction(1))
        assert 0 <= got.lower <= got.upper

    def test_eps_must_be_positive(self):
        with pytest.raises(PreconditionError):
            classify_embedding(LinMap.identity(line()), 0)


class TestL1Sum:
    def test_line_plus_line(self):
        total, inl, inr = l1_sum(line(), line())
        assert total == l1_space(2)
        assert inl(QVec.of([1])) == QVec.of([1, 0])
        assert inr(QVec.of([1])) == QVec.of([0, 1])

    def test_zero_summand(self):
        X = linf_space(2)
        total, inl, inr = l1_sum(X, zero_space())
        assert total == X
        assert inl.matrix == QMat.identity(2)

    def test_linf_plus_line_vrep(self):
        total, _, _ = l1_sum(linf_space(2), line())
        assert total.ball.vrep == (
            QVec.of([0, 0, 1]),
            QVec.of([1, -1, 0]),
            QVec.of([1, 1, 0]),
        )

    def test_injections_isometric(self):
        X, Y = linf_space(2), l1_space(2)
        total, inl, inr = l1_sum(X, Y)
        for leg in (inl, inr):
            got = classify_embedding(leg, Fraction(1))
            assert got.verdict == ISOMETRIC

    @settings(max_examples=15, deadline=None)
    @given(
        st.tuples(
            st.fractions(min_value=-2, max_value=2, max_denominator=4),
            st.fractions(min_value=-2, max_value=2, max_denominator=4),
        ),
        st.tuples(
            st.fractions(min_value=-2, max_value=2, max_denominator=4),
            st.fractions(min_value=-2, max_value=2, max_denominator=4),
        ),
    )
    def test_norm_additive(self, raw_x, raw_y):
        X, Y = linf_space(2), l1_space(2)
        total, inl, inr = l1_sum(X, Y)
        x, y = QVec.of(list(raw_x)), QVec.of(list(raw_y))
        combined = inl(x) + inr(y)
        assert norm_eval(total, combined) == norm_eval(X, x) + norm_eval(Y, y)


class TestQuotient:
    def test_empty_kernel(self):
        X = l1_space(2)
        Q, q = quotient(X, [])
        assert Q == X and q.matrix == QMat.identity(2)

    def test_l1_diagonal_kernel(self):
        Q, q = quotient(l1_space(2), [QVec.of([1, -1])])
        assert Q == line()
        assert q(QVec.of([1, 0])) == QVec.of([1])
        assert q(QVec.of([0, 1])) == QVec.of([1])

    def test_linf_axis_kernel(self):
        Q, q = quotient(linf_space(2), [QVec.of([0, 1])])
        assert Q == line()
        assert q(QVec.of([5, 7])) == QVec.of([5])

    def test_dependent_kernel_rejected(self):
        with pytest.raises(PreconditionError):
            quotient(l1_space(2), [QVec.of([1, 1]), QVec.of([2, 2])])

    def test_quotient_map_norm_one(self):
        Q, q = quotient(l1_space(3), [QVec.of([1, -1, 0])])
        assert operator_norm(q) == 1

    def test_kernel_killed(self):
        kernel = [QVec.of([1, 2, 3])]
        Q, q = quotient(linf_space(3), kernel)
        assert q(kernel[0]) == QVec.zero(2)

    @settings(max_examples=15, deadline=None)
    @given(
        st.tuples(
            st.fractions(min_value=-2, max_value=2, max_denominator=3),
            st.fractions(min_value=-2, max_value=2, max_denominator=3),
            st.fractions(min_value=-2, max_value=2, max_denominator=3),
        )
    )
    def test_quotient_norm_is_coset_inf(self, raw):
        X = l1_space(3)
        kernel = [QVec.of([1, -1, 2])]
        Q, q = quotient(X, kernel)
        x = QVec.of(list(raw))
        assert norm_eval(Q, q(x)) == coset_min_norm(X, kernel, x)


class TestPullback:
    def test_diagonal_into_linf(self):
        B = QMat.from_rows([[1], [1]])
        assert pullback_space(B, linf_space(2)) == line()

    def test_diagonal_into_l1(self):
        B = QMat.from_rows([[1], [1]])
        sub = pullback_space(B, l1_space(2))
        assert norm_eval(sub, QVec.of([1])) == 2
        assert sub.ball.vrep == (QVec.of([Fraction(1, 2)]),)

    def test_not_injective_rejected(self):
        B = QMat.from_rows([[1, 1], [1, 1]])
        with pytest.raises(PreconditionError):
            pullback_space(B, l1_space(2))

    def test_inclusion_becomes_isometry(self):
        B = QMat.from_rows([[1, 0], [0, 1], [0, 0]])
        Y = l1_space(3)
        sub = pullback_space(B, Y)
        incl = LinMap(B, sub, Y)
        assert classify_embedding(incl, Fraction(1)).verdict == ISOMETRIC
