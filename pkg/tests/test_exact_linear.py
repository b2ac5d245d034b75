"""Exterior algebra and exact matrix substrate."""

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flattori.errors import DimensionError, GradeError
from flattori.exactlinear import (GaussRational, ExtElement, Q, RatMatrix,
                                  apply_linear, derivation_map, exp_grade2,
                                  induced_map, interior, rat, rat_str, wedge)


def e(rank, *indices):
    return ExtElement.monomial(rank, indices)


class TestRationals:
    def test_rat_parsing(self):
        assert rat("3/4") == Fraction(3, 4)
        assert rat(5) == 5
        assert rat_str(Fraction(-7, 2)) == "-7/2"
        assert rat_str(Fraction(4)) == "4"

    def test_gauss_field_ops(self):
        i = GaussRational(0, 1)
        assert i * i == GaussRational(-1)
        z = GaussRational(Q(1, 2), Q(-3, 4))
        assert z * (1 / z) == GaussRational(1)
        assert z.conj().conj() == z
        assert (z + z.conj()).is_rational()

    def test_gauss_mixed_arithmetic(self):
        z = GaussRational(1, 1)
        assert 2 * z == GaussRational(2, 2)
        assert z - 1 == GaussRational(0, 1)
        assert 1 - z == GaussRational(0, -1)


class TestMatrix:
    def test_inverse_exact(self):
        m = RatMatrix([[1, 2], [3, 5]])
        assert m * m.inverse() == RatMatrix.identity(2)
        assert m.inverse() * m == RatMatrix.identity(2)

    def test_singular_inverse_raises(self):
        with pytest.raises(ZeroDivisionError):
            RatMatrix([[1, 2], [2, 4]]).inverse()

    def test_kernel_and_rank(self):
        m = RatMatrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
        assert m.rank() == 2
        for v in m.kernel_basis():
            assert all(x == 0 for x in m.apply(v))

    def test_positive_definite(self):
        assert RatMatrix([[2, 1], [1, 1]]).is_positive_definite()
        assert not RatMatrix.diag([1, -1]).is_positive_definite()

    def test_solve(self):
        m = RatMatrix([[1, 1], [0, 1]])
        assert m.solve((3, 2)) == (Q(1), Q(2))
        assert RatMatrix([[1, 1], [1, 1]]).solve((0, 1)) is None


class TestWedge:
    def test_basis_case(self):
        assert wedge(e(2, 0), e(2, 1)) == e(2, 0, 1)

    def test_alternation(self):
        assert not wedge(e(2, 0), e(2, 0))

    def test_bilinear_expansion(self):
        a = e(2, 0) + e(2, 1)
        b = e(2, 0) - e(2, 1)
        assert wedge(a, b) == ExtElement.monomial(2, (0, 1), -2)

    def test_rank_mismatch(self):
        with pytest.raises(DimensionError):
            wedge(e(2, 0), e(3, 0))

    @given(st.integers(0, 3), st.integers(0, 3), st.data())
    def test_graded_anticommutativity(self, ka, kb, data):
        rank = 5
        idx_a = tuple(sorted(data.draw(st.sets(st.integers(0, rank - 1),
                                               min_size=ka, max_size=ka))))
        idx_b = tuple(sorted(data.draw(st.sets(st.integers(0, rank - 1),
                                               min_size=kb, max_size=kb))))
        a = ExtElement.monomial(rank, idx_a)
        b = ExtElement.monomial(rank, idx_b)
        lhs = wedge(a, b)
        rhs = wedge(b, a)
        if (ka * kb) % 2:
            rhs = -rhs
        assert lhs == rhs

    def test_associativity(self):
        a = e(4, 0) + e(4, 1).scale(2)
        b = e(4, 1) + e(4, 2).scale(-3)
        c = e(4, 3) + ExtElement.scalar(4, Q(1, 2))
        assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


class TestInterior:
    def test_dual_pairing(self):
        assert interior(e(4, 0, 1), e(4, 0, 1)) == ExtElement.scalar(4, 1)

    def test_disjoint_support(self):
        assert not interior(e(4, 0, 1), e(4, 2, 3))

    def test_contraction_of_volume(self):
        assert interior(e(4, 0, 1), e(4, 0, 1, 2, 3)) == e(4, 2, 3)

    def test_low_grade_gives_zero(self):
        assert not interior(e(4, 0, 1), e(4, 0))
        assert not interior(e(4, 0, 1), ExtElement.scalar(4, 7))

    def test_non_bivector_rejected(self):
        with pytest.raises(GradeError):
            interior(e(4, 0), e(4, 0, 1))

    def test_adjoint_of_wedge_exhaustive_rank6(self):
        # <interior(e_ij, a), b> == <a, e_ij ^ b> for monomial pairing
        rank = 6
        for i, j in combinations(range(rank), 2):
            biv = e(rank, i, j)
            for ga in range(2, rank + 1):
                for a_idx in combinations(range(rank), ga):
                    a = ExtElement.monomial(rank, a_idx)
                    contracted = interior(biv, a)
                    for b_idx in combinations(range(rank), ga - 2):
                        b = ExtElement.monomial(rank, b_idx)
                        lhs = contracted.coefficient(b_idx)
                        rhs = wedge(biv, b).coefficient(a_idx)
                        assert lhs == rhs


class TestExp:
    def test_exp_zero(self):
        assert exp_grade2(ExtElement.zero(2)) == ExtElement.scalar(2, 1)

    def test_exp_single_block(self):
        a = e(2, 0, 1)
        assert exp_grade2(a) == ExtElement.scalar(2, 1) + a

    def test_exp_two_blocks(self):
        a = ExtElement(4, {(0, 1): 1, (2, 3): 1})
        expected = ExtElement(4, {(): 1, (0, 1): 1, (2, 3): 1, (0, 1, 2, 3): 1})
        assert exp_grade2(a) == expected

    def test_exp_rejects_wrong_grade(self):
        with pytest.raises(GradeError):
            exp_grade2(e(3, 0))


class TestInducedMap:
    def test_identity(self):
        assert induced_map(RatMatrix.identity(4), 2) == RatMatrix.identity(6)

    def test_diagonal_determinant(self):
        assert induced_map(RatMatrix.diag([2, 3]), 2) == RatMatrix([[6]])

    def test_rotation_preserves_area(self):
        rot = RatMatrix([[0, -1], [1, 0]])
        assert induced_map(rot, 2) == RatMatrix([[1]])

    def test_non_square_rejected(self):
        with pytest.raises(DimensionError):
            induced_map(RatMatrix([[1, 0]]), 1)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3),
                    min_size=16, max_size=16),
           st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3),
                    min_size=16, max_size=16),
           st.integers(1, 3))
    def test_functoriality(self, flat_m, flat_n, grade):
        m = RatMatrix([flat_m[i * 4:(i + 1) * 4] for i in range(4)])
        n = RatMatrix([flat_n[i * 4:(i + 1) * 4] for i in range(4)])
        assert induced_map(m * n, grade) == induced_map(m, grade) * induced_map(n, grade)

    def test_derivation_leibniz_against_functor(self):
        # derivation of m = d/dt of induced(1 + t m) at t=0, checked on grade 2
        m = RatMatrix([[1, 2, 0], [0, -1, 1], [3, 0, 1]])
        dm = derivation_map(m, 2)
        basis = list(combinations(range(3), 2))
        for col, s in enumerate(basis):
            img = ExtElement.zero(3)
            for t in range(2):
                cols = []
                for pos, gen in enumerate(s):
                    if pos == t:
                        cols.append(ExtElement(3, {(i,): m.entries[i][gen]
                                                   for i in range(3) if m.entries[i][gen]}))
                    else:
                        cols.append(ExtElement.generator(3, gen))
                term = ExtElement.scalar(3, 1)
                for c in cols:
                    term = wedge(term, c)
                img = img + term
            for row, tpl in enumerate(basis):
                assert dm.entries[row][col] == img.coefficient(tpl)


class TestApplyLinear:
    def test_matches_induced_map_on_monomials(self):
        # two routes to the same functor: minors vs sparse wedge expansion
        m = RatMatrix([[1, 2, 0, -1], [0, 1, 1, 0], [3, 0, 1, 2], [1, 1, 0, 1]])
        for k in (1, 2, 3):
            ind = induced_map(m, k)
            basis = list(combinations(range(4), k))
            for col, s in enumerate(basis):
                img = apply_linear(ExtElement.monomial(4, s), m)
                for row, t in enumerate(basis):
                    assert ind.entries[row][col] == img.coefficient(t)

    def test_algebra_map(self):
        m = RatMatrix([[1, 1], [0, 1]])
        a = e(2, 0, 1)
        # columns: e0 -> e0, e1 -> e0 + e1, so e0^e1 -> e0^e1
        assert apply_linear(a, m) == e(2, 0, 1)

    def test_rectangular_restriction(self):
        m = RatMatrix([[1, 0, 2]])  # rank-3 generators restricted to a line
        a = e(3, 0) + e(3, 2)
        assert apply_linear(a, m) == ExtElement.monomial(1, (0,), 3)
